//! Turns a parsed cone file into cones of the core crate.

use nicecone::closedness::{BaseCone, LinMap};
use nicecone::linalg::{Metric, QVec};
use nicecone::structured::{example1, example2, ConeExpr, Node, StructuredCone};
use nicecone::{PolyCone, SymMat};

use crate::error::{CliError, CliResult};
use crate::format::{ConeFile, Elem, NodeSpec, Space};

#[derive(Clone, Debug)]
pub enum Kind {
    Poly(PolyCone),
    Structured {
        expr: ConeExpr,
        witnesses: Vec<SymMat>,
        /// Shipped face inventory, when the cone is one of the worked examples.
        inventory: Option<Box<StructuredCone>>,
    },
}

#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    pub space: Space,
    pub kind: Kind,
    pub map: Option<LinMap>,
}

impl Space {
    pub fn metric(&self) -> Metric {
        match self {
            Space::Vec { d } => Metric::euclidean(*d),
            Space::Sym { n } => Metric::sym(*n),
        }
    }

    pub fn dim(&self) -> usize {
        self.metric().dim()
    }
}

fn vector(space: &Space, e: &Elem, path: &str) -> CliResult<QVec> {
    match (space, e) {
        (Space::Vec { d }, Elem::Vector(v)) => {
            if v.len() != *d {
                return Err(CliError::invalid(path, format!("expected {d} entries, found {}", v.len())));
            }
            Ok(QVec::new(v.iter().map(|q| q.0.clone()).collect()))
        }
        (Space::Sym { n }, Elem::Matrix(rows)) => Ok(matrix(*n, rows, path)?.to_svec()),
        (Space::Sym { n }, Elem::Vector(v)) if v.is_empty() && *n == 0 => Ok(QVec::zeros(0)),
        (Space::Vec { .. }, Elem::Matrix(_)) => Err(CliError::invalid(path, "expected a vector")),
        (Space::Sym { .. }, Elem::Vector(_)) => Err(CliError::invalid(path, "expected a matrix given by rows")),
    }
}

fn matrix(n: usize, rows: &[Vec<crate::format::Q>], path: &str) -> CliResult<SymMat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::invalid(path, format!("expected a {n}x{n} matrix")));
    }
    let r: Vec<Vec<_>> = rows.iter().map(|r| r.iter().map(|q| q.0.clone()).collect()).collect();
    SymMat::from_rows(&r).map_err(|e| CliError::invalid(path, e.to_string()))
}

fn vectors(space: &Space, es: &[Elem], path: &str) -> CliResult<Vec<QVec>> {
    es.iter()
        .enumerate()
        .map(|(i, e)| vector(space, e, &format!("{path}[{i}]")))
        .collect()
}

fn poly_of(space: &Space, node: &NodeSpec, path: &str) -> CliResult<PolyCone> {
    let m = space.metric();
    let core = |r: nicecone::Result<PolyCone>| r.map_err(|e| CliError::invalid(path, e.to_string()));
    match node {
        NodeSpec::Halfspace(e) => core(PolyCone::from_inequalities(&m, &[vector(space, e, &format!("{path}.normal"))?], &[])),
        NodeSpec::Ray(e) => core(PolyCone::from_generators(&m, &[vector(space, e, &format!("{path}.gen"))?], &[])),
        NodeSpec::Subspace(b) => core(PolyCone::from_generators(&m, &[], &vectors(space, b, &format!("{path}.basis"))?)),
        NodeSpec::PolyV { generators, lineality } => core(PolyCone::from_generators(
            &m,
            &vectors(space, generators, &format!("{path}.generators"))?,
            &vectors(space, lineality.as_deref().unwrap_or(&[]), &format!("{path}.lineality"))?,
        )),
        NodeSpec::PolyH {
            inequalities,
            equations,
        } => core(PolyCone::from_inequalities(
            &m,
            &vectors(space, inequalities, &format!("{path}.inequalities"))?,
            &vectors(space, equations.as_deref().unwrap_or(&[]), &format!("{path}.equations"))?,
        )),
        NodeSpec::Sum(cs) | NodeSpec::Intersect(cs) => {
            let parts = cs
                .iter()
                .enumerate()
                .map(|(i, c)| poly_of(space, c, &format!("{path}.children[{i}]")))
                .collect::<CliResult<Vec<_>>>()?;
            let mut acc = parts[0].clone();
            for p in &parts[1..] {
                acc = core(if matches!(node, NodeSpec::Sum(_)) { acc.sum(p) } else { acc.intersect(p) })?;
            }
            Ok(acc)
        }
        NodeSpec::Psd | NodeSpec::BlockPsd(_) | NodeSpec::PsdFace(_) => Err(CliError::Unsupported(format!(
            "{path}: semidefinite atoms need a symmetric matrix space"
        ))),
    }
}

fn expr_of(n: usize, space: &Space, node: &NodeSpec, path: &str) -> CliResult<ConeExpr> {
    let mat = |e: &Elem, p: String| -> CliResult<SymMat> {
        Ok(SymMat::from_svec(n, &vector(space, e, &p)?).expect("packed length"))
    };
    let block = |b: &[usize]| -> CliResult<Vec<usize>> {
        if b.iter().any(|&i| i >= n) {
            return Err(CliError::invalid(&format!("{path}.block"), format!("index out of range for order {n}")));
        }
        Ok(b.to_vec())
    };
    let core = |r: nicecone::Result<ConeExpr>| r.map_err(|e| CliError::invalid(path, e.to_string()));
    Ok(match node {
        NodeSpec::Psd => ConeExpr::psd(n),
        NodeSpec::BlockPsd(b) => ConeExpr::block_psd(n, &block(b)?),
        NodeSpec::PsdFace(b) => ConeExpr::psd_face(n, &block(b)?),
        NodeSpec::Halfspace(e) => ConeExpr::halfspace(mat(e, format!("{path}.normal"))?),
        NodeSpec::Ray(e) => ConeExpr::ray(mat(e, format!("{path}.gen"))?),
        NodeSpec::Subspace(b) => ConeExpr::subspace(
            n,
            b.iter()
                .enumerate()
                .map(|(i, e)| mat(e, format!("{path}.basis[{i}]")))
                .collect::<CliResult<_>>()?,
        ),
        NodeSpec::PolyV { .. } | NodeSpec::PolyH { .. } => ConeExpr::polyhedral(n, poly_of(space, node, path)?),
        NodeSpec::Sum(cs) | NodeSpec::Intersect(cs) => {
            let kids = cs
                .iter()
                .enumerate()
                .map(|(i, c)| expr_of(n, space, c, &format!("{path}.children[{i}]")))
                .collect::<CliResult<Vec<_>>>()?;
            core(if matches!(node, NodeSpec::Sum(_)) {
                ConeExpr::sum(kids)
            } else {
                ConeExpr::intersect(kids)
            })?
        }
    })
}

/// The worked example whose cone has the same normal form, if any.
fn shipped_inventory(expr: &ConeExpr) -> CliResult<Option<StructuredCone>> {
    let form = match expr.lower() {
        Ok(f) => f,
        Err(_) => return Ok(None),
    };
    for ex in [example1()?.cone, example2()?.cone] {
        if ex.n == expr.n && ex.form == form {
            return Ok(Some(ex));
        }
    }
    Ok(None)
}

pub fn load(file: &ConeFile) -> CliResult<Model> {
    let space = file.space.clone();
    let kind = match &space {
        Space::Vec { .. } => Kind::Poly(poly_of(&space, &file.cone, "cone")?),
        Space::Sym { n } => {
            let expr = expr_of(*n, &space, &file.cone, "cone")?;
            if expr.is_polyhedral_expr() {
                Kind::Poly(poly_of(&space, &file.cone, "cone")?)
            } else {
                let witnesses = file
                    .witnesses
                    .as_deref()
                    .unwrap_or(&[])
                    .iter()
                    .enumerate()
                    .map(|(i, e)| Ok(SymMat::from_svec(*n, &vector(&space, e, &format!("witnesses[{i}]"))?).expect("packed")))
                    .collect::<CliResult<Vec<_>>>()?;
                let inventory = shipped_inventory(&expr)?.map(Box::new);
                Kind::Structured {
                    expr,
                    witnesses,
                    inventory,
                }
            }
        }
    };
    let map = match &file.map {
        None => None,
        Some(m) => Some(
            LinMap::new(&space.metric(), vectors(&space, &m.cols, "map.cols")?)
                .map_err(|e| CliError::invalid("map", e.to_string()))?,
        ),
    };
    Ok(Model {
        name: file.name.clone().unwrap_or_else(|| "cone".into()),
        space,
        kind,
        map,
    })
}

impl Model {
    /// The base cone for closedness questions: polyhedral, or a bare PSD cone.
    pub fn base_cone(&self) -> CliResult<BaseCone> {
        match &self.kind {
            Kind::Poly(p) => Ok(BaseCone::Polyhedral(p.clone())),
            Kind::Structured { expr, .. } if matches!(expr.node, Node::Psd) => Ok(BaseCone::Psd(expr.n)),
            Kind::Structured { .. } => Err(CliError::Unsupported(
                "closedness needs a polyhedral cone or a bare PSD cone".into(),
            )),
        }
    }

    pub fn inventory(&self) -> CliResult<&StructuredCone> {
        match &self.kind {
            Kind::Structured {
                inventory: Some(inv), ..
            } => Ok(inv),
            Kind::Structured { .. } => Err(CliError::Unsupported(
                "no face inventory for this structured cone; face enumeration is refused".into(),
            )),
            Kind::Poly(_) => Err(CliError::Unsupported("polyhedral cones have no shipped inventory".into())),
        }
    }
}
