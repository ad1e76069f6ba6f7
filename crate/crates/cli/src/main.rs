//! Command-line front end. Every command writes one document to standard
//! output. Exit status 0 means success or a positive verdict, 1 a negative
//! verdict, 2 an input error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use diffflow::alpha::{self, AlphaError};
use diffflow::degeneracy::{
    self, build_degeneracy_witness, cactus_report, test_nondegeneracy, BoundMode, NondegeneracyVerdict, SearchOptions,
    SuffVerdict,
};
use diffflow::generate::{self, BoundStyle, GeneratorConfig, Topology};
use diffflow::hardness::{self, build_gadget, SubsetSumInstance};
use diffflow::io::{
    self, flow_to_doc, potential_to_doc, AlphaTreeDoc, CertificateDoc, Format, NetworkDoc, ValueDoc,
};
use diffflow::polytope::{self, PolytopeError};
use diffflow::rational::format_rational;
use diffflow::{AlphaForest, Flow, Network};

#[derive(Parser)]
#[command(name = "diffflow", version, about = "Exact analysis of differential-flow polytopes")]
struct Cli {
    /// Document format for input files and output; by default inputs are
    /// read by extension (.toml or JSON) and output is JSON.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Toml,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a flow is differential and within all bounds.
    CheckFeasible { network: PathBuf, flow: PathBuf },
    /// Decide whether a feasible flow is an extreme point.
    CheckExtremal { network: PathBuf, flow: PathBuf },
    /// List all extreme points by brute force.
    EnumerateVertices {
        network: PathBuf,
        #[arg(long, default_value_t = polytope::DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    #[command(subcommand)]
    Alpha(AlphaCommand),
    #[command(subcommand)]
    Cactus(CactusCommand),
    #[command(subcommand)]
    Degeneracy(DegeneracyCommand),
    #[command(subcommand)]
    Suffcond(SuffcondCommand),
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Write a seeded random network.
    Generate(GenerateArgs),
}

#[derive(Subcommand)]
enum AlphaCommand {
    /// Validate an alpha-forest document and report whether it is a tree.
    Validate { network: PathBuf, alpha: PathBuf },
    /// Extract a conforming alpha-tree from an extreme point.
    Extract { network: PathBuf, flow: PathBuf },
}

#[derive(Subcommand)]
enum CactusCommand {
    /// Decide whether the underlying graph is a cactus.
    Check { network: PathBuf },
}

#[derive(Args)]
struct WriteArgs {
    /// Write the witness network here.
    #[arg(long)]
    write_network: Option<PathBuf>,
    /// Write the witness flow here.
    #[arg(long)]
    write_flow: Option<PathBuf>,
    /// Write the witness alpha-tree here.
    #[arg(long)]
    write_alpha: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DegeneracyCommand {
    /// Build a degenerate network on a graph that is not a cactus.
    Witness {
        network: PathBuf,
        #[command(flatten)]
        write: WriteArgs,
    },
    /// Search alpha-trees for a conforming point that is not extremal.
    Test {
        network: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Free)]
        mode: ModeArg,
        #[arg(long, default_value_t = degeneracy::DEFAULT_MAX_VERTICES)]
        max_vertices: usize,
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        write: WriteArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Free,
    Fixed,
}

#[derive(Subcommand)]
enum SuffcondCommand {
    /// Run both sufficient extremality conditions.
    Check { network: PathBuf, flow: PathBuf, alpha: PathBuf },
}

#[derive(Args)]
struct InstanceArgs {
    /// Comma-separated positive item sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<u64>,
    #[arg(long)]
    target: u64,
}

#[derive(Subcommand)]
enum GadgetCommand {
    /// Write the gadget network for a SubsetSum instance.
    Build(InstanceArgs),
    /// Decide the instance by subset search and through the polytope.
    Decide {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = hardness::DEFAULT_ITEM_CAP)]
        cap: usize,
        #[command(flatten)]
        write: WriteArgs,
    },
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exact vertex count; overrides the range.
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long, default_value_t = 2)]
    min_vertices: usize,
    #[arg(long, default_value_t = 6)]
    max_vertices: usize,
    /// tree, cycle, cactus, random or non-cactus.
    #[arg(long, default_value = "random")]
    topology: String,
    /// free, symmetric, random-finite or mixed.
    #[arg(long, default_value = "free")]
    bounds: String,
    #[arg(long, default_value_t = 4)]
    magnitude: u32,
    #[arg(long, default_value_t = 2)]
    extra_edges: usize,
}

/// An error in the input rather than a verdict.
#[derive(Debug)]
struct InputError(anyhow::Error);

type CmdResult = Result<bool, InputError>;

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

struct Ctx {
    format: Option<Format>,
}

impl Ctx {
    fn input_format(&self, path: &Path) -> Format {
        self.format.unwrap_or_else(|| Format::from_path(path))
    }

    fn output_format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }

    fn read(&self, path: &Path) -> Result<String> {
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
    }

    fn network(&self, path: &Path) -> Result<Network> {
        let text = self.read(path)?;
        io::parse_network(&text, self.input_format(path)).with_context(|| path.display().to_string())
    }

    fn flow(&self, net: &Network, path: &Path) -> Result<Flow> {
        let text = self.read(path)?;
        io::parse_flow(net, &text, self.input_format(path)).with_context(|| path.display().to_string())
    }

    fn forest(&self, net: &Network, path: &Path) -> Result<AlphaForest> {
        let text = self.read(path)?;
        let doc: AlphaTreeDoc =
            io::from_text(&text, self.input_format(path)).with_context(|| path.display().to_string())?;
        doc.to_forest(net).with_context(|| path.display().to_string())
    }

    fn emit<T: Serialize>(&self, doc: &T) {
        print!("{}", io::to_text(doc, self.output_format()));
    }

    fn write_to<T: Serialize>(&self, path: &Path, doc: &T) -> Result<()> {
        let text = io::to_text(doc, self.format.unwrap_or_else(|| Format::from_path(path)));
        std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
    }

    fn write_bundle(&self, w: &WriteArgs, net: &Network, f: &Flow, forest: &AlphaForest) -> Result<()> {
        if let Some(p) = &w.write_network {
            self.write_to(p, &NetworkDoc::from_network(net))?;
        }
        if let Some(p) = &w.write_flow {
            self.write_to(p, &flow_to_doc(net, f))?;
        }
        if let Some(p) = &w.write_alpha {
            self.write_to(p, &AlphaTreeDoc::from_forest(net, forest))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct FeasibleDoc {
    feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    potential: Option<ValueDoc>,
    injection: ValueDoc,
}

#[derive(Serialize)]
struct VerticesDoc {
    count: usize,
    vertices: Vec<ValueDoc>,
}

#[derive(Serialize)]
struct ValidateDoc {
    valid: bool,
    is_alpha_tree: bool,
    size: usize,
    required: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orientation: Option<BTreeMap<String, String>>,
}

#[derive(Serialize)]
struct MinorDoc {
    v: String,
    w: String,
    paths: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct CactusDoc {
    is_cactus: bool,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    violating_edge: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diamond: Option<MinorDoc>,
}

#[derive(Serialize)]
struct WitnessDoc {
    degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    network: Option<NetworkDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flow: Option<ValueDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_tree: Option<AlphaTreeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    direction: Option<ValueDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diamond: Option<MinorDoc>,
}

#[derive(Serialize)]
struct TestDoc {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    examined: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    network: Option<NetworkDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flow: Option<ValueDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_tree: Option<AlphaTreeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertificateDoc>,
}

#[derive(Serialize)]
struct SuffDoc {
    one_active_per_component: &'static str,
    small_degree: &'static str,
    extremal: bool,
}

#[derive(Serialize)]
struct DecideDoc {
    degenerate: bool,
    agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    subset: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    polytope_subset: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    potential: Option<ValueDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_tree: Option<AlphaTreeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertificateDoc>,
}

fn minor_doc(net: &Network, m: &degeneracy::DiamondMinor) -> MinorDoc {
    MinorDoc {
        v: net.vertex(m.v).id.clone(),
        w: net.vertex(m.w).id.clone(),
        paths: m.paths.iter().map(|p| net.edge_id_list(p.iter().copied())).collect(),
    }
}

fn suff_label(v: SuffVerdict) -> &'static str {
    match v {
        SuffVerdict::Certified => "certified",
        SuffVerdict::NotApplicable => "not-applicable",
    }
}

/// Infeasible flows passed to extremality checks are input errors.
fn polytope_input(e: PolytopeError) -> InputError {
    InputError(anyhow!(e))
}

fn run(cli: Cli) -> CmdResult {
    let ctx = Ctx {
        format: cli.format.map(|f| match f {
            FormatArg::Json => Format::Json,
            FormatArg::Toml => Format::Toml,
        }),
    };
    match cli.command {
        Command::CheckFeasible { network, flow } => {
            let net = ctx.network(&network)?;
            let f = ctx.flow(&net, &flow)?;
            let report = polytope::check_feasible(&net, &f)?;
            ctx.emit(&FeasibleDoc {
                feasible: report.is_feasible(),
                violation: report.violation.as_ref().map(|v| v.describe(&net)),
                potential: report.potential.as_ref().map(|p| potential_to_doc(&net, p)),
                injection: net
                    .vertices()
                    .iter()
                    .zip(&report.injection)
                    .map(|(v, x)| (v.id.clone(), format_rational(x)))
                    .collect(),
            });
            Ok(report.is_feasible())
        }
        Command::CheckExtremal { network, flow } => {
            let net = ctx.network(&network)?;
            let f = ctx.flow(&net, &flow)?;
            let cert = polytope::is_extremal(&net, &f).map_err(polytope_input)?;
            ctx.emit(&CertificateDoc::from_certificate(&net, &cert));
            Ok(cert.is_extremal())
        }
        Command::EnumerateVertices { network, cap } => {
            let net = ctx.network(&network)?;
            let vertices = polytope::enumerate_vertices(&net, cap)?;
            ctx.emit(&VerticesDoc {
                count: vertices.len(),
                vertices: vertices.iter().map(|f| flow_to_doc(&net, f)).collect(),
            });
            Ok(true)
        }
        Command::Alpha(AlphaCommand::Validate { network, alpha: path }) => {
            let net = ctx.network(&network)?;
            let forest = ctx.forest(&net, &path)?;
            let check = alpha::validate_alpha_forest(&net, &forest)?;
            let tree = check.is_valid() && forest.size() == net.vertex_count() - 1;
            ctx.emit(&ValidateDoc {
                valid: check.is_valid(),
                is_alpha_tree: tree,
                size: forest.size(),
                required: net.vertex_count() - 1,
                reason: check.reason.clone(),
                orientation: check.orientation.as_ref().map(|m| {
                    m.iter()
                        .map(|(&v, &e)| (net.vertex(v).id.clone(), net.edge(e).id.clone()))
                        .collect()
                }),
            });
            Ok(tree)
        }
        Command::Alpha(AlphaCommand::Extract { network, flow }) => {
            let net = ctx.network(&network)?;
            let f = ctx.flow(&net, &flow)?;
            match alpha::extract_alpha_tree(&net, &f) {
                Ok(forest) => {
                    ctx.emit(&AlphaTreeDoc::from_forest(&net, &forest));
                    Ok(true)
                }
                Err(AlphaError::NotExtremal) => {
                    eprintln!("flow is not extremal; no alpha-tree is extracted");
                    Ok(false)
                }
                Err(AlphaError::Polytope(e)) => Err(polytope_input(e)),
                Err(e) => Err(e.into()),
            }
        }
        Command::Cactus(CactusCommand::Check { network }) => {
            let net = ctx.network(&network)?;
            let report = cactus_report(net.graph())?;
            ctx.emit(&CactusDoc {
                is_cactus: report.is_cactus,
                verdict: if report.is_cactus { "cactus" } else { "not a cactus" },
                violating_edge: report.violating_edge.map(|e| net.edge(e).id.clone()),
                diamond: report.diamond.as_ref().map(|m| minor_doc(&net, m)),
            });
            Ok(report.is_cactus)
        }
        Command::Degeneracy(DegeneracyCommand::Witness { network, write }) => {
            let net = ctx.network(&network)?;
            let Some(w) = build_degeneracy_witness(&net)? else {
                ctx.emit(&WitnessDoc {
                    degenerate: false,
                    network: None,
                    flow: None,
                    alpha_tree: None,
                    direction: None,
                    partition: None,
                    diamond: None,
                });
                return Ok(false);
            };
            ctx.write_bundle(&write, &w.network, &w.flow, &w.alpha_tree)?;
            let wn = &w.network;
            ctx.emit(&WitnessDoc {
                degenerate: true,
                network: Some(NetworkDoc::from_network(wn)),
                flow: Some(flow_to_doc(wn, &w.flow)),
                alpha_tree: Some(AlphaTreeDoc::from_forest(wn, &w.alpha_tree)),
                direction: Some(potential_to_doc(wn, &w.direction)),
                partition: Some(
                    w.partition
                        .iter()
                        .enumerate()
                        .map(|(v, p)| (wn.vertex(v).id.clone(), p.label().to_string()))
                        .collect(),
                ),
                diamond: Some(minor_doc(wn, &w.minor)),
            });
            Ok(true)
        }
        Command::Degeneracy(DegeneracyCommand::Test {
            network,
            mode,
            max_vertices,
            budget,
            write,
        }) => {
            let net = ctx.network(&network)?;
            let options = SearchOptions {
                mode: match mode {
                    ModeArg::Free => BoundMode::Free,
                    ModeArg::Fixed => BoundMode::Fixed,
                },
                max_vertices,
                budget,
            };
            match test_nondegeneracy(&net, &options)? {
                NondegeneracyVerdict::Degenerate(c) => {
                    ctx.write_bundle(&write, &c.network, &c.flow, &c.alpha_tree)?;
                    ctx.emit(&TestDoc {
                        verdict: "certified-degenerate",
                        examined: None,
                        network: Some(NetworkDoc::from_network(&c.network)),
                        flow: Some(flow_to_doc(&c.network, &c.flow)),
                        alpha_tree: Some(AlphaTreeDoc::from_forest(&c.network, &c.alpha_tree)),
                        certificate: Some(CertificateDoc::from_certificate(&c.network, &c.extremality)),
                    });
                    Ok(true)
                }
                NondegeneracyVerdict::NoCounterexample { examined } => {
                    ctx.emit(&TestDoc {
                        verdict: "no-counterexample-found",
                        examined: Some(examined),
                        network: None,
                        flow: None,
                        alpha_tree: None,
                        certificate: None,
                    });
                    Ok(false)
                }
            }
        }
        Command::Suffcond(SuffcondCommand::Check { network, flow, alpha: path }) => {
            let net = ctx.network(&network)?;
            let f = ctx.flow(&net, &flow)?;
            let forest = ctx.forest(&net, &path)?;
            let one = degeneracy::check_suff_one_active_per_component(&net, &f, &forest)?;
            let small = degeneracy::check_suff_small_degree(&net, &f, &forest)?;
            let extremal = polytope::is_extremal(&net, &f).map_err(polytope_input)?.is_extremal();
            ctx.emit(&SuffDoc {
                one_active_per_component: suff_label(one),
                small_degree: suff_label(small),
                extremal,
            });
            Ok(one == SuffVerdict::Certified || small == SuffVerdict::Certified)
        }
        Command::Gadget(GadgetCommand::Build(args)) => {
            let inst = SubsetSumInstance::new(args.sizes, args.target)?;
            ctx.emit(&NetworkDoc::from_network(&build_gadget(&inst).network));
            Ok(true)
        }
        Command::Gadget(GadgetCommand::Decide { instance, cap, write }) => {
            let inst = SubsetSumInstance::new(instance.sizes, instance.target)?;
            let d = hardness::gadget_degenerate(&inst, cap)?;
            if let Some(w) = &d.polytope {
                ctx.write_bundle(&write, &w.network, &w.flow, &w.alpha_tree)?;
            }
            let pw = d.polytope.as_ref();
            ctx.emit(&DecideDoc {
                degenerate: d.is_degenerate(),
                agree: d.agree(),
                subset: d.combinatorial.as_ref().map(|s| s.iter().map(|i| i + 1).collect()),
                polytope_subset: pw.map(|w| w.subset.iter().map(|i| i + 1).collect()),
                potential: pw.map(|w| potential_to_doc(&w.network, &w.potential)),
                alpha_tree: pw.map(|w| AlphaTreeDoc::from_forest(&w.network, &w.alpha_tree)),
                certificate: pw.map(|w| CertificateDoc::from_certificate(&w.network, &w.certificate)),
            });
            if !d.agree() {
                return Err(InputError(anyhow!("subset search and polytope search disagree")));
            }
            Ok(d.is_degenerate())
        }
        Command::Generate(args) => {
            let (min, max) = match args.vertices {
                Some(n) => (n, n),
                None => (args.min_vertices, args.max_vertices),
            };
            let config = GeneratorConfig {
                seed: args.seed,
                min_vertices: min,
                max_vertices: max,
                topology: args.topology.parse::<Topology>()?,
                bounds: args.bounds.parse::<BoundStyle>()?,
                magnitude: args.magnitude,
                extra_edges: args.extra_edges,
            };
            let net = generate::generate(&config)?;
            ctx.emit(&NetworkDoc::from_network(&net));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
