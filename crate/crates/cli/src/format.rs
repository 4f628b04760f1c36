//! Cone files: JSON documents with exact rationals written as `"p/q"`
//! strings (integers may also be bare JSON numbers).
//!
//! ```text
//! { "name": "example1",
//!   "space": {"type": "sym", "n": 2},
//!   "cone": {"op": "sum", "children": [
//!       {"atom": "psd"},
//!       {"atom": "ray", "gen": [["0","1"],["1","0"]]}]} }
//! ```
//!
//! Atoms: `psd`, `block_psd` and `psd_face` (with `block`), `halfspace`
//! (`normal`), `ray` (`gen`), `subspace` (`basis`), `polyhedral` (either
//! `generators` with optional `lineality`, or `inequalities` with optional
//! `equations`). Combinators: `sum` and `intersect` over `children`. An
//! optional `map` lists the images of unit vectors as `cols`; optional
//! `witnesses` are candidate relative interior points for intersections.

use std::fmt;

use nicecone::linalg::{fmt_rat, parse_rat, Rat};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, CliResult};

/// An exact rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rat);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(&self.0))
    }
}

struct QVisitor;

impl Visitor<'_> for QVisitor {
    type Value = Q;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational such as \"3/4\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
        parse_rat(v)
            .map(Q)
            .ok_or_else(|| E::custom(format!("invalid rational {v:?}")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
        Ok(Q(Rat::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
        Ok(Q(Rat::from_integer(v.into())))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        d.deserialize_any(QVisitor)
    }
}

/// A vector, or a symmetric matrix given by its rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Elem {
    Vector(Vec<Q>),
    Matrix(Vec<Vec<Q>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Space {
    #[serde(rename = "vec")]
    Vec { d: usize },
    #[serde(rename = "sym")]
    Sym { n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawNode", into = "RawNode")]
pub enum NodeSpec {
    Psd,
    BlockPsd(Vec<usize>),
    PsdFace(Vec<usize>),
    Halfspace(Elem),
    Ray(Elem),
    Subspace(Vec<Elem>),
    PolyV {
        generators: Vec<Elem>,
        lineality: Option<Vec<Elem>>,
    },
    PolyH {
        inequalities: Vec<Elem>,
        equations: Option<Vec<Elem>>,
    },
    Sum(Vec<NodeSpec>),
    Intersect(Vec<NodeSpec>),
}

#[derive(Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    atom: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    op: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    block: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normal: Option<Elem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gen: Option<Elem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lineality: Option<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inequalities: Option<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    equations: Option<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    children: Option<Vec<NodeSpec>>,
}

fn need<T>(v: Option<T>, what: &str, field: &str) -> Result<T, String> {
    v.ok_or_else(|| format!("{what} needs field \"{field}\""))
}

impl TryFrom<RawNode> for NodeSpec {
    type Error = String;

    fn try_from(r: RawNode) -> Result<Self, String> {
        match (r.atom.as_deref(), r.op.as_deref()) {
            (Some(_), Some(_)) => Err("a node has either \"atom\" or \"op\", not both".into()),
            (None, None) => Err("a node needs \"atom\" or \"op\"".into()),
            (None, Some(op)) => {
                let children = need(r.children, op, "children")?;
                if children.is_empty() {
                    return Err(format!("empty cone list in \"{op}\""));
                }
                match op {
                    "sum" => Ok(NodeSpec::Sum(children)),
                    "intersect" => Ok(NodeSpec::Intersect(children)),
                    _ => Err(format!("unknown op {op:?}")),
                }
            }
            (Some(atom), None) => match atom {
                "psd" => Ok(NodeSpec::Psd),
                "block_psd" => Ok(NodeSpec::BlockPsd(need(r.block, atom, "block")?)),
                "psd_face" => Ok(NodeSpec::PsdFace(need(r.block, atom, "block")?)),
                "halfspace" => Ok(NodeSpec::Halfspace(need(r.normal, atom, "normal")?)),
                "ray" => Ok(NodeSpec::Ray(need(r.gen, atom, "gen")?)),
                "subspace" => Ok(NodeSpec::Subspace(need(r.basis, atom, "basis")?)),
                "polyhedral" => match (r.generators, r.inequalities) {
                    (Some(g), None) if r.equations.is_none() => Ok(NodeSpec::PolyV {
                        generators: g,
                        lineality: r.lineality,
                    }),
                    (None, Some(i)) if r.lineality.is_none() => Ok(NodeSpec::PolyH {
                        inequalities: i,
                        equations: r.equations,
                    }),
                    _ => Err("polyhedral needs either generators/lineality or inequalities/equations".into()),
                },
                _ => Err(format!("unknown atom {atom:?}")),
            },
        }
    }
}

impl From<NodeSpec> for RawNode {
    fn from(n: NodeSpec) -> RawNode {
        let atom = |a: &str| Some(a.to_string());
        match n {
            NodeSpec::Psd => RawNode {
                atom: atom("psd"),
                ..Default::default()
            },
            NodeSpec::BlockPsd(b) => RawNode {
                atom: atom("block_psd"),
                block: Some(b),
                ..Default::default()
            },
            NodeSpec::PsdFace(b) => RawNode {
                atom: atom("psd_face"),
                block: Some(b),
                ..Default::default()
            },
            NodeSpec::Halfspace(e) => RawNode {
                atom: atom("halfspace"),
                normal: Some(e),
                ..Default::default()
            },
            NodeSpec::Ray(e) => RawNode {
                atom: atom("ray"),
                gen: Some(e),
                ..Default::default()
            },
            NodeSpec::Subspace(b) => RawNode {
                atom: atom("subspace"),
                basis: Some(b),
                ..Default::default()
            },
            NodeSpec::PolyV { generators, lineality } => RawNode {
                atom: atom("polyhedral"),
                generators: Some(generators),
                lineality,
                ..Default::default()
            },
            NodeSpec::PolyH {
                inequalities,
                equations,
            } => RawNode {
                atom: atom("polyhedral"),
                inequalities: Some(inequalities),
                equations,
                ..Default::default()
            },
            NodeSpec::Sum(c) => RawNode {
                op: Some("sum".into()),
                children: Some(c),
                ..Default::default()
            },
            NodeSpec::Intersect(c) => RawNode {
                op: Some("intersect".into()),
                children: Some(c),
                ..Default::default()
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub cols: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub space: Space,
    pub cone: NodeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Elem>>,
}

pub fn parse(text: &str) -> CliResult<ConeFile> {
    serde_json::from_str(text).map_err(|e| {
        let msg = strip_position(&e.to_string());
        let (mut line, mut column) = (e.line(), e.column());
        if msg.starts_with("empty cone list") {
            // serde reports the token after the node; point at the empty list instead
            if let Some((l, c)) = last_empty_children(text, line, column) {
                (line, column) = (l, c);
            }
        }
        CliError::Syntax { line, column, msg }
    })
}

fn offset_of(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (start + column).min(text.len())
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

/// Position of the last `"children": []` starting before the given point.
fn last_empty_children(text: &str, line: usize, column: usize) -> Option<(usize, usize)> {
    let end = offset_of(text, line, column);
    let mut best = None;
    for (i, _) in text[..end].match_indices("\"children\"") {
        let rest = text[i + 10..].trim_start();
        let Some(rest) = rest.strip_prefix(':') else { continue };
        let Some(rest) = rest.trim_start().strip_prefix('[') else { continue };
        if rest.trim_start().starts_with(']') {
            best = Some(i);
        }
    }
    best.map(|i| line_col(text, i))
}

/// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn read(path: &std::path::Path) -> CliResult<ConeFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

/// Canonical text: two-space indented JSON, rationals as strings, trailing newline.
pub fn serialize(f: &ConeFile) -> String {
    let mut s = serde_json::to_string_pretty(f).expect("cone files serialize");
    s.push('\n');
    s
}
