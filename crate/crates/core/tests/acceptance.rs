//! Acceptance criteria, one line each. Runs as a plain binary so the
//! summary is always printed.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use diffflow::alpha::{conforms, extract_alpha_tree, is_alpha_tree};
use diffflow::degeneracy::{
    build_degeneracy_witness, check_suff_one_active_per_component, check_suff_small_degree,
    enumerate_alpha_forests, find_diamond_minor, has_spanning_anti_arborescence, is_cactus, DegeneracyError,
    GeneralizedElasticity, SuffVerdict,
};
use diffflow::generate::{generate_with, network_from_graph, random_cactus, BoundStyle, GeneratorConfig, Topology};
use diffflow::graph::{Digraph, SimpleGraph};
use diffflow::hardness::{gadget_degenerate, SubsetSumInstance};
use diffflow::model::{admittance_matrix, elasticity_matrix, incidence_matrix, Flow, Network, NetworkBuilder};
use diffflow::polytope::{enumerate_vertices, is_extremal, Verdict};
use diffflow::{int, ratio, Interval, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Networks for criteria 1, 5 and 7: every topology crossed with every
/// bound style, sizes 2 to 7.
fn criterion1_networks() -> Vec<Network> {
    let topologies = [Topology::Tree, Topology::Cycle, Topology::Cactus, Topology::Random, Topology::NonCactus];
    let styles = [BoundStyle::Symmetric, BoundStyle::RandomFinite, BoundStyle::Mixed, BoundStyle::Free];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut out = Vec::new();
    let mut k = 0;
    while out.len() < 220 {
        let topology = topologies[k % topologies.len()];
        let bounds = styles[(k / topologies.len()) % styles.len()];
        k += 1;
        let min = match topology {
            Topology::Cycle => 3,
            Topology::NonCactus => 4,
            _ => 2,
        };
        let cfg = GeneratorConfig {
            seed: 0,
            min_vertices: min,
            max_vertices: 7,
            topology,
            bounds,
            magnitude: 3,
            extra_edges: 2,
        };
        out.push(generate_with(&cfg, &mut rng).expect("valid configuration"));
    }
    out
}

struct C1Stats {
    networks: usize,
    flows: usize,
    certified: usize,
    witnesses: usize,
}

fn criterion1(nets: &[Network]) -> Result<C1Stats, String> {
    let mut flows = 0;
    let mut certified = 0;
    for (i, net) in nets.iter().enumerate() {
        let vertices = enumerate_vertices(net, 10).map_err(|e| format!("network {i}: {e}"))?;
        for f in vertices {
            flows += 1;
            let forest = extract_alpha_tree(net, &f).map_err(|e| format!("network {i}: {e}"))?;
            let ok = is_alpha_tree(net, &forest).map_err(|e| e.to_string())?
                && conforms(net, &f, &forest).map_err(|e| e.to_string())?;
            ensure(ok, || format!("network {i}: extracted forest fails"))?;
            certified += sufficient_agree(net, &f, &forest).map_err(|e| format!("network {i}: {e}"))?;
        }
    }
    Ok(C1Stats {
        networks: nets.len(),
        flows,
        certified,
        witnesses: 0,
    })
}

/// Number of certified verdicts; errors on a certification that
/// `is_extremal` does not back.
fn sufficient_agree(net: &Network, f: &Flow, forest: &diffflow::AlphaForest) -> Result<usize, String> {
    let extremal = is_extremal(net, f).map_err(|e| e.to_string())?.is_extremal();
    let mut certified = 0;
    for check in [check_suff_one_active_per_component, check_suff_small_degree] {
        match check(net, f, forest) {
            Ok(SuffVerdict::Certified) => {
                if !extremal {
                    return Err("certified a non-extremal flow".into());
                }
                certified += 1;
            }
            Ok(SuffVerdict::NotApplicable) => {}
            Err(DegeneracyError::FalseCertification { rank, .. }) => {
                return Err(format!("false certification at rank {rank}"));
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(certified)
}

fn criterion2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut points = 0;
    let mut trees = 0;
    for i in 0..100 {
        let n = rng.gen_range(2..=8);
        let edges = random_cactus(n, &mut rng);
        let bounds = BoundStyle::RandomFinite;
        let net = network_from_graph(n, &edges, bounds, 4, &mut rng).map_err(|e| e.to_string())?;
        ensure(is_cactus(net.graph()).unwrap().is_cactus, || format!("cactus {i} is not a cactus"))?;
        let finite = |el: diffflow::polytope::Element| el.interval(&net).has_finite_side();
        for forest in enumerate_alpha_forests(&net, n - 1, &finite) {
            trees += 1;
            let Some(flows) = common::conforming_points(&net, &forest) else {
                return Err(format!("cactus {i}: alpha-tree with dependent rows"));
            };
            for f in flows {
                points += 1;
                ensure(conforms(&net, &f, &forest).unwrap(), || format!("cactus {i}: solved point does not conform"))?;
                let cert = is_extremal(&net, &f).map_err(|e| e.to_string())?;
                ensure(cert.is_extremal(), || format!("cactus {i}: conforming point is not extremal"))?;
            }
        }
    }
    let mut witnesses = 0;
    let mut sizes = BTreeSet::new();
    for i in 0..60 {
        let cfg = GeneratorConfig {
            seed: 0,
            min_vertices: 4,
            max_vertices: 10,
            topology: Topology::NonCactus,
            bounds: BoundStyle::Free,
            magnitude: 4,
            extra_edges: 0,
        };
        let net = generate_with(&cfg, &mut rng).map_err(|e| e.to_string())?;
        sizes.insert(net.vertex_count());
        let w = build_degeneracy_witness(&net)
            .map_err(|e| format!("graph {i}: {e}"))?
            .ok_or_else(|| format!("graph {i}: no witness"))?;
        w.verify().map_err(|e| format!("graph {i}: {e}"))?;
        witnesses += 1;
    }
    Ok(format!(
        "100 cacti, {trees} alpha-trees, {points} conforming points all extremal; {witnesses} non-cactus witnesses valid"
    ))
}

fn wheatstone(b_wt: i64) -> Network {
    let mut nb = NetworkBuilder::new();
    nb.add_vertex("w", Interval::point(int(0)))
        .add_vertex("v", Interval::point(int(0)))
        .add_vertex("s", Interval::free())
        .add_vertex("t", Interval::free());
    nb.add_edge("vw", "v", "w", int(1), Interval::point(int(0)))
        .add_edge("vs", "v", "s", int(1), Interval::free())
        .add_edge("vt", "v", "t", int(1), Interval::free())
        .add_edge("ws", "w", "s", int(1), Interval::free())
        .add_edge("wt", "w", "t", int(b_wt), Interval::free());
    nb.build().expect("valid network")
}

fn criterion3() -> Outcome {
    let balanced = wheatstone(1);
    let f = Flow::zero(&balanced);
    let cert = is_extremal(&balanced, &f).map_err(|e| e.to_string())?;
    ensure(cert.verdict == Verdict::NotExtremal, || "balanced bridge reported extremal".into())?;
    let dir = cert.direction.clone().ok_or("missing direction")?;
    ensure(dir.0 == vec![int(0), int(0), int(1), int(-1)], || format!("direction {:?}", dir.0))?;
    cert.verify(&balanced, &f)?;
    let unbalanced = wheatstone(2);
    let cert = is_extremal(&unbalanced, &Flow::zero(&unbalanced)).map_err(|e| e.to_string())?;
    ensure(cert.verdict == Verdict::Extremal && cert.rank_active == 3, || "unbalanced bridge not extremal".into())?;
    Ok("b = 1: not extremal along (0,0,1,-1); b_wt = 2: extremal with rank 3".into())
}

fn timed_cactus(n: usize, rng: &mut ChaCha8Rng) -> (usize, f64) {
    let g = SimpleGraph::new(n, random_cactus(n, rng));
    // Batches of roughly a million edges each, so every size does the same
    // total work per sample.
    let reps = (1_000_000 / g.edge_count()).max(1);
    let mut best = f64::INFINITY;
    for _ in 0..9 {
        let start = Instant::now();
        for _ in 0..reps {
            assert!(is_cactus(&g).unwrap().is_cactus);
        }
        best = best.min(start.elapsed().as_secs_f64() / reps as f64);
    }
    (g.edge_count(), best)
}

fn criterion4() -> Outcome {
    let mut graphs = 0;
    for n in 1..=6usize {
        let pairs = n * (n - 1) / 2;
        for mask in 0u64..1 << pairs {
            let g = common::graph_from_mask(n, mask);
            if !g.is_connected() {
                continue;
            }
            graphs += 1;
            let fast = is_cactus(&g).unwrap().is_cactus;
            ensure(fast == common::brute_cactus(&g), || format!("n = {n}, mask {mask:#x}"))?;
            ensure(find_diamond_minor(&g).is_none() == fast, || format!("minor disagrees: n = {n}, mask {mask:#x}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut sampled = 0;
    while sampled < 3000 {
        let mask = rng.gen_range(0u64..1 << 21);
        let g = common::graph_from_mask(7, mask);
        if !g.is_connected() {
            continue;
        }
        sampled += 1;
        let fast = is_cactus(&g).unwrap().is_cactus;
        ensure(fast == common::brute_cactus(&g), || format!("n = 7, mask {mask:#x}"))?;
    }
    let mut ratios = Vec::new();
    let mut sizes = Vec::new();
    for n in [10_000, 20_000, 40_000, 80_000] {
        let (m, t) = timed_cactus(n, &mut rng);
        sizes.push(m);
        ratios.push(t / m as f64);
    }
    let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
    ensure(sizes.last().is_some_and(|&m| m >= 100_000), || format!("largest cactus has {sizes:?} edges"))?;
    let ns: Vec<String> = ratios.iter().map(|r| format!("{:.1}", r * 1e9)).collect();
    ensure(hi / lo <= 2.0, || format!("time per edge varies by {:.2}x: {ns:?} ns over {sizes:?} edges", hi / lo))?;
    Ok(format!(
        "{graphs} graphs up to 6 vertices and {sampled} at 7 agree; time per edge within {:.2}x ({} ns) over {:?} edges",
        hi / lo,
        ns.join(", "),
        sizes
    ))
}

fn criterion5(nets: &[Network], stats: &mut C1Stats) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let cfg = GeneratorConfig {
            seed: 0,
            min_vertices: 4,
            max_vertices: 8,
            topology: Topology::NonCactus,
            bounds: BoundStyle::Free,
            magnitude: 3,
            extra_edges: 0,
        };
        let net = generate_with(&cfg, &mut rng).map_err(|e| e.to_string())?;
        let w = build_degeneracy_witness(&net).map_err(|e| e.to_string())?.ok_or("no witness")?;
        sufficient_agree(&w.network, &w.flow, &w.alpha_tree)?;
        stats.witnesses += 1;
    }
    Ok(format!(
        "{} certified verdicts over {} extreme points of {} networks and {} witnesses, none false",
        stats.certified, stats.flows, nets.len(), stats.witnesses
    ))
}

/// Non-decreasing size sequences: the gadget is symmetric under permuting
/// items, so each multiset stands for all of its orderings.
fn multisets(n: usize, max: u64) -> Vec<Vec<u64>> {
    fn go(n: usize, lo: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in lo..=max {
            cur.push(x);
            go(n, x, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 1, max, &mut Vec::new(), &mut out);
    out
}

fn criterion6() -> Outcome {
    let mut instances = 0;
    let mut yes = 0;
    for n in 1..=6 {
        for sizes in multisets(n, 10) {
            for beta in 1..=20 {
                let inst = SubsetSumInstance::new(sizes.clone(), beta).map_err(|e| e.to_string())?;
                let d = gadget_degenerate(&inst, 8).map_err(|e| e.to_string())?;
                ensure(d.agree(), || format!("{sizes:?}, target {beta}"))?;
                instances += 1;
                yes += usize::from(d.is_degenerate());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..300 {
        let n = rng.gen_range(1..=6);
        let sizes: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=10)).collect();
        let inst = SubsetSumInstance::new(sizes.clone(), rng.gen_range(1..=20)).map_err(|e| e.to_string())?;
        ensure(gadget_degenerate(&inst, 8).map_err(|e| e.to_string())?.agree(), || format!("ordered {sizes:?}"))?;
    }
    Ok(format!("{instances} instances ({yes} yes) plus 300 unsorted orderings agree"))
}

fn ones_kernel(basis: &[Vec<Rational>]) -> bool {
    basis.len() == 1 && !basis[0][0].is_zero() && basis[0].iter().all(|x| x == &basis[0][0])
}

fn criterion7(nets: &[Network]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut all: Vec<Network> = nets.to_vec();
    for k in 0..300 {
        let cfg = GeneratorConfig {
            seed: 0,
            min_vertices: 1,
            max_vertices: 10,
            topology: if k % 2 == 0 { Topology::Random } else { Topology::Cactus },
            bounds: BoundStyle::Free,
            magnitude: 5,
            extra_edges: k % 6,
        };
        all.push(generate_with(&cfg, &mut rng).map_err(|e| e.to_string())?);
    }
    for (i, net) in all.iter().enumerate() {
        let n = net.vertex_count();
        let a = incidence_matrix(net);
        let b = elasticity_matrix(net);
        let l = admittance_matrix(net);
        ensure(a.rank() == n - 1 && b.rank() == n - 1 && l.rank() == n - 1, || format!("network {i}: rank"))?;
        if n > 1 {
            let ok = ones_kernel(&a.transpose().kernel_basis())
                && ones_kernel(&b.transpose().kernel_basis())
                && ones_kernel(&l.kernel_basis());
            ensure(ok, || format!("network {i}: kernel"))?;
        }
    }
    Ok(format!("{} networks with |V| - 1 ranks and all-ones kernels", all.len()))
}

fn criterion8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut tested = 0;
    let mut without = 0;
    while tested < 150 {
        let n = rng.gen_range(1..=8);
        let mut b = GeneralizedElasticity::zeros(n);
        let planted = rng.gen_bool(0.8);
        if planted {
            let mut order: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
            for k in 1..n {
                let to = order[rng.gen_range(0..k)];
                b.set(order[k], to, ratio(rng.gen_range(1..=9), rng.gen_range(1..=4))).unwrap();
            }
        }
        for _ in 0..rng.gen_range(0..=n) {
            let (v, w) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if v != w {
                b.set(v, w, ratio(rng.gen_range(0..=9), rng.gen_range(1..=4))).unwrap();
            }
        }
        let support: Digraph = b.support();
        let Some(arb) = has_spanning_anti_arborescence(&support) else {
            without += 1;
            continue;
        };
        ensure(arb.arcs.len() + 1 == n, || "anti-arborescence has the wrong size".into())?;
        let kernel = b.constraint_matrix().kernel_basis();
        ensure(ones_kernel(&kernel) || (n == 1 && kernel.len() == 1), || format!("kernel of dimension {}", kernel.len()))?;
        ensure(diffflow::degeneracy::generalized_flow_feasible(&b, &diffflow::Potential(vec![Rational::one(); n])), || {
            "constant potential rejected".into()
        })?;
        tested += 1;
    }
    Ok(format!("{tested} elasticities with an anti-arborescence have constant kernels ({without} others skipped)"))
}

fn report(number: usize, title: &str, outcome: &Outcome, seconds: f64, failures: &mut usize) {
    match outcome {
        Ok(detail) => println!("criterion {number} [{title}]: PASS ({detail}; {seconds:.1}s)"),
        Err(detail) => {
            *failures += 1;
            println!("criterion {number} [{title}]: FAIL ({detail})");
        }
    }
}

fn main() {
    // Optional criterion numbers on the command line select a subset.
    let picked: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wanted = |k: usize| picked.is_empty() || picked.contains(&k);
    let mut failures = 0;
    let nets = criterion1_networks();

    let mut stats = None;
    if wanted(1) || wanted(5) {
        let start = Instant::now();
        let outcome1 = match criterion1(&nets) {
            Ok(s) => {
                let line = format!("{} networks, {} extreme points", s.networks, s.flows);
                stats = Some(s);
                Ok(line)
            }
            Err(e) => Err(e),
        };
        if wanted(1) {
            report(1, "extremal implies alpha-tree", &outcome1, start.elapsed().as_secs_f64(), &mut failures);
        }
    }
    let run = |k: usize, title: &str, f: &dyn Fn() -> Outcome, failures: &mut usize| {
        if wanted(k) {
            let start = Instant::now();
            let outcome = f();
            report(k, title, &outcome, start.elapsed().as_secs_f64(), failures);
        }
    };
    run(2, "cactus equivalence", &criterion2, &mut failures);
    run(3, "balanced bridge", &criterion3, &mut failures);
    run(4, "cactus recognition", &criterion4, &mut failures);
    if wanted(5) {
        let start = Instant::now();
        let outcome5 = match stats.as_mut() {
            Some(s) => criterion5(&nets, s),
            None => Err("criterion 1 instances did not complete".into()),
        };
        report(5, "sufficient conditions", &outcome5, start.elapsed().as_secs_f64(), &mut failures);
    }
    run(6, "hardness gadget", &criterion6, &mut failures);
    run(7, "rank identities", &|| criterion7(&nets), &mut failures);
    run(8, "generalized flows", &criterion8, &mut failures);

    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
