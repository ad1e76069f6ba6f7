//! Text documents for networks, flows, potentials, alpha-trees and
//! certificates, in JSON or TOML.
//!
//! A network document has two arrays:
//!
//! ```text
//! vertices = [{ id, p_lo, p_hi }]
//! edges    = [{ id, tail, head, b, f_lo, f_hi }]
//! ```
//!
//! Every number is a string: an integer `"-3"`, a fraction `"7/2"`, or for
//! bounds also `"inf"` and `"-inf"`. Omitted bounds are infinite; unknown
//! fields are rejected. Flows and potentials are flat maps from edge or
//! vertex id to a rational string and must name every edge or vertex.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alpha::AlphaForest;
use crate::model::{Flow, ModelError, Network, NetworkBuilder, Potential};
use crate::polytope::{ActiveSet, ExtremalityCertificate, Verdict};
use crate::rational::{format_rational, parse_rational, Bound, Interval, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Toml,
}

impl Format {
    /// `.toml` files are TOML, everything else JSON.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => Format::Toml,
            _ => Format::Json,
        }
    }
}

impl FromStr for Format {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "toml" => Ok(Format::Toml),
            _ => Err(IoError::Field {
                path: "format".into(),
                message: format!("unknown format {s:?}; expected json or toml"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("{format} syntax: {message}")]
    Syntax { format: &'static str, message: String },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn field(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Field {
        path: path.into(),
        message: message.into(),
    }
}

pub fn from_text<T: DeserializeOwned>(text: &str, format: Format) -> Result<T, IoError> {
    match format {
        Format::Json => serde_json::from_str(text).map_err(|e| IoError::Syntax {
            format: "JSON",
            message: e.to_string(),
        }),
        Format::Toml => toml::from_str(text).map_err(|e| IoError::Syntax {
            format: "TOML",
            message: e.to_string().trim_end().to_string(),
        }),
    }
}

pub fn to_text<T: Serialize>(doc: &T, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
            s.push('\n');
            s
        }
        Format::Toml => toml::to_string(doc).expect("documents serialize"),
    }
}

fn neg_inf() -> String {
    "-inf".into()
}

fn pos_inf() -> String {
    "inf".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    #[serde(default = "neg_inf")]
    pub p_lo: String,
    #[serde(default = "pos_inf")]
    pub p_hi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub b: String,
    #[serde(default = "neg_inf")]
    pub f_lo: String,
    #[serde(default = "pos_inf")]
    pub f_hi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDoc {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
}

fn rational_at(path: String, s: &str) -> Result<Rational, IoError> {
    parse_rational(s).map_err(|e| field(path, e.to_string()))
}

fn interval_at(path: String, lo: &str, hi: &str) -> Result<Interval, IoError> {
    let lo_b = Bound::parse(lo).map_err(|e| field(format!("{path}_lo"), e.to_string()))?;
    let hi_b = Bound::parse(hi).map_err(|e| field(format!("{path}_hi"), e.to_string()))?;
    if lo_b == Bound::PosInf {
        return Err(field(format!("{path}_lo"), "lower bound cannot be inf"));
    }
    if hi_b == Bound::NegInf {
        return Err(field(format!("{path}_hi"), "upper bound cannot be -inf"));
    }
    let iv = Interval::new(lo_b, hi_b);
    if !iv.is_well_formed() {
        return Err(field(path, format!("lower bound {lo} exceeds upper bound {hi}")));
    }
    Ok(iv)
}

impl NetworkDoc {
    pub fn to_network(&self) -> Result<Network, IoError> {
        let mut nb = NetworkBuilder::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let p = interval_at(format!("vertices[{i}].p"), &v.p_lo, &v.p_hi)?;
            nb.add_vertex(v.id.clone(), p);
        }
        for (i, e) in self.edges.iter().enumerate() {
            let b = rational_at(format!("edges[{i}].b"), &e.b)?;
            let f = interval_at(format!("edges[{i}].f"), &e.f_lo, &e.f_hi)?;
            nb.add_edge(e.id.clone(), e.tail.clone(), e.head.clone(), b, f);
        }
        Ok(nb.build()?)
    }

    pub fn from_network(net: &Network) -> NetworkDoc {
        NetworkDoc {
            vertices: net
                .vertices()
                .iter()
                .map(|v| VertexDoc {
                    id: v.id.clone(),
                    p_lo: v.p.lo.to_string(),
                    p_hi: v.p.hi.to_string(),
                })
                .collect(),
            edges: net
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    tail: net.vertex(e.tail).id.clone(),
                    head: net.vertex(e.head).id.clone(),
                    b: format_rational(&e.b),
                    f_lo: e.f.lo.to_string(),
                    f_hi: e.f.hi.to_string(),
                })
                .collect(),
        }
    }
}

pub fn parse_network(text: &str, format: Format) -> Result<Network, IoError> {
    from_text::<NetworkDoc>(text, format)?.to_network()
}

pub fn render_network(net: &Network, format: Format) -> String {
    to_text(&NetworkDoc::from_network(net), format)
}

/// Values keyed by id, in the order of `ids`.
fn values_from_map(kind: &str, map: &BTreeMap<String, String>, ids: &[&str]) -> Result<Vec<Rational>, IoError> {
    if let Some(unknown) = map.keys().find(|k| !ids.contains(&k.as_str())) {
        return Err(field(unknown.clone(), format!("unknown {kind} id")));
    }
    ids.iter()
        .map(|&id| {
            let s = map.get(id).ok_or_else(|| field(id, format!("missing value for {kind}")))?;
            rational_at(id.to_string(), s)
        })
        .collect()
}

pub type ValueDoc = BTreeMap<String, String>;

pub fn flow_from_doc(net: &Network, doc: &ValueDoc) -> Result<Flow, IoError> {
    let ids: Vec<&str> = net.edges().iter().map(|e| e.id.as_str()).collect();
    values_from_map("edge", doc, &ids).map(Flow)
}

pub fn potential_from_doc(net: &Network, doc: &ValueDoc) -> Result<Potential, IoError> {
    let ids: Vec<&str> = net.vertices().iter().map(|v| v.id.as_str()).collect();
    values_from_map("vertex", doc, &ids).map(Potential)
}

pub fn flow_to_doc(net: &Network, f: &Flow) -> ValueDoc {
    net.edges().iter().zip(&f.0).map(|(e, x)| (e.id.clone(), format_rational(x))).collect()
}

pub fn potential_to_doc(net: &Network, phi: &Potential) -> ValueDoc {
    net.vertices().iter().zip(&phi.0).map(|(v, x)| (v.id.clone(), format_rational(x))).collect()
}

pub fn parse_flow(net: &Network, text: &str, format: Format) -> Result<Flow, IoError> {
    flow_from_doc(net, &from_text(text, format)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaTreeDoc {
    pub active_edges: Vec<String>,
    pub active_vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<BTreeMap<String, String>>,
}

impl AlphaTreeDoc {
    pub fn from_forest(net: &Network, forest: &AlphaForest) -> AlphaTreeDoc {
        AlphaTreeDoc {
            active_edges: net.edge_id_list(forest.edges.iter().copied()),
            active_vertices: net.vertex_id_list(forest.vertices.iter().copied()),
            orientation: forest.orientation.as_ref().map(|m| {
                m.iter()
                    .map(|(&v, &e)| (net.vertex(v).id.clone(), net.edge(e).id.clone()))
                    .collect()
            }),
        }
    }

    pub fn to_forest(&self, net: &Network) -> Result<AlphaForest, IoError> {
        let edge = |path: String, id: &str| net.edge_index(id).ok_or_else(|| field(path, format!("unknown edge {id:?}")));
        let vertex =
            |path: String, id: &str| net.vertex_index(id).ok_or_else(|| field(path, format!("unknown vertex {id:?}")));
        let edges = self
            .active_edges
            .iter()
            .enumerate()
            .map(|(i, id)| edge(format!("active_edges[{i}]"), id))
            .collect::<Result<Vec<_>, _>>()?;
        let vertices = self
            .active_vertices
            .iter()
            .enumerate()
            .map(|(i, id)| vertex(format!("active_vertices[{i}]"), id))
            .collect::<Result<Vec<_>, _>>()?;
        let mut forest = AlphaForest::new(edges, vertices);
        if let Some(map) = &self.orientation {
            let mut out = BTreeMap::new();
            for (v, e) in map {
                let path = format!("orientation.{v}");
                out.insert(vertex(path.clone(), v)?, edge(path, e)?);
            }
            forest = forest.with_orientation(out);
        }
        Ok(forest)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActiveSetDoc {
    pub edges_at_lower: Vec<String>,
    pub edges_at_upper: Vec<String>,
    pub vertices_at_lower: Vec<String>,
    pub vertices_at_upper: Vec<String>,
}

impl ActiveSetDoc {
    pub fn from_active(net: &Network, a: &ActiveSet) -> ActiveSetDoc {
        ActiveSetDoc {
            edges_at_lower: net.edge_id_list(a.edges_at_lower.iter().copied()),
            edges_at_upper: net.edge_id_list(a.edges_at_upper.iter().copied()),
            vertices_at_lower: net.vertex_id_list(a.vertices_at_lower.iter().copied()),
            vertices_at_upper: net.vertex_id_list(a.vertices_at_upper.iter().copied()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub verdict: String,
    pub rank_active: usize,
    pub rank_required: usize,
    pub active: ActiveSetDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<ValueDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
}

impl CertificateDoc {
    pub fn from_certificate(net: &Network, c: &ExtremalityCertificate) -> CertificateDoc {
        CertificateDoc {
            verdict: match c.verdict {
                Verdict::Extremal => "extremal",
                Verdict::NotExtremal => "not-extremal",
            }
            .into(),
            rank_active: c.rank_active,
            rank_required: net.vertex_count() - 1,
            active: ActiveSetDoc::from_active(net, &c.active),
            direction: c.direction.as_ref().map(|d| potential_to_doc(net, d)),
            epsilon: c.epsilon.as_ref().map(format_rational),
        }
    }
}
