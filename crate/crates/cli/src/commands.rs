//! Certificate commands over a loaded cone file.

use nicecone::certify::{self, poly, Condition};
use nicecone::closedness::image_dual_closed;
use nicecone::structured::{Closedness, ConeExpr};
use nicecone::PolyCone;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::model::{Kind, Model};
use crate::report;

fn closedness_label(c: Closedness) -> &'static str {
    match c {
        Closedness::Proven => "proven",
        Closedness::Assumed => "assumed",
        Closedness::Unknown => "unknown",
    }
}

fn face_counts(p: &PolyCone) -> CliResult<(usize, Vec<usize>)> {
    let lat = p.face_lattice()?;
    let mut by_dim = vec![0usize; p.ambient_dim() + 1];
    for f in &lat.faces {
        by_dim[f.dim] += 1;
    }
    Ok((lat.faces.len(), by_dim))
}

pub fn analyze(m: &Model) -> CliResult<Value> {
    let s = &m.space;
    match &m.kind {
        Kind::Poly(p) => {
            let d = p.dual();
            let (total, by_dim) = face_counts(p)?;
            Ok(json!({
                "command": "analyze",
                "cone": m.name,
                "kind": "polyhedral",
                "ambient_dim": p.ambient_dim(),
                "dim": p.dim(),
                "lineality_dim": p.lineality().dim(),
                "pointed": p.is_pointed(),
                "self_dual": &d == p,
                "cone_description": report::poly(s, p),
                "dual": report::poly(s, &d),
                "faces": total,
                "faces_by_dim": by_dim,
            }))
        }
        Kind::Structured {
            expr,
            witnesses,
            inventory,
        } => {
            let form = expr.lower()?;
            let (dual_expr, overlap) = expr.dual_expr(witnesses)?;
            let dual = dual_expr.lower()?;
            let lspace = lineality_of(expr)?;
            Ok(json!({
                "command": "analyze",
                "cone": m.name,
                "kind": "structured",
                "order": expr.n,
                "form": report::form(&form),
                "dual": report::form(&dual),
                "dual_closedness": closedness_label(dual_expr.closed),
                "ri_overlap": overlap.map(|o| report::mat(&o.point)),
                "lineality_dim": lspace,
                "pointed": lspace.map(|l| l == 0),
                "inventory": inventory.as_ref().map(|i| i.name.clone()),
                "faces": inventory.as_ref().map(|i| i.faces.len()),
            }))
        }
    }
}

/// Dimension of `K ∩ -K`, read off the dual's span when it is known.
fn lineality_of(expr: &ConeExpr) -> CliResult<Option<usize>> {
    let (d, _) = expr.dual_expr(&[])?;
    let f = nicecone::structured::FaceSet::from_form(d.lower()?);
    Ok(f.span().map(|s| s.orth_complement().dim()))
}

pub fn faces(m: &Model) -> CliResult<Value> {
    let s = &m.space;
    match &m.kind {
        Kind::Poly(p) => {
            let lat = p.face_lattice()?;
            let list: Vec<Value> = lat
                .faces
                .iter()
                .map(|f| {
                    let ex = p.exposure(f);
                    json!({
                        "face": poly::face_name(f),
                        "dim": f.dim,
                        "generators": report::vectors(s, &p.face_generators(f)),
                        "exposed": ex.is_exposed,
                        "exposing_normal": report::vector(s, &ex.normal),
                    })
                })
                .collect();
            Ok(json!({ "command": "faces", "cone": m.name, "kind": "polyhedral", "faces": list }))
        }
        Kind::Structured { .. } => {
            let inv = m.inventory()?;
            let list: Vec<Value> = inv
                .faces
                .iter()
                .map(|f| {
                    json!({
                        "face": f.name,
                        "equations": f.eqs.iter().map(report::mat).collect::<Vec<_>>(),
                        "set": report::face_set(s, &f.set),
                        "dual": report::face_set(s, &f.dual),
                        "dual_faces": f.dual_faces.iter().map(|h| json!({
                            "name": h.name,
                            "ri_point": report::mat(&h.ri_point),
                            "properly_minimal": h.properly_minimal,
                            "lineality_face": h.lspace,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(json!({ "command": "faces", "cone": m.name, "kind": "structured", "faces": list }))
        }
    }
}

pub fn exposed(m: &Model) -> CliResult<Value> {
    let cert = match &m.kind {
        Kind::Poly(p) => poly::is_facially_exposed(p)?,
        Kind::Structured { .. } => certify::structured::is_facially_exposed(m.inventory()?)?,
    };
    let mut v = report::exposedness(&m.space, &cert);
    v["cone"] = json!(m.name);
    Ok(v)
}

pub fn nice(m: &Model, only: Option<Condition>) -> CliResult<Value> {
    let cert = match &m.kind {
        Kind::Poly(p) => poly::is_nice(p)?,
        Kind::Structured { .. } => certify::structured::is_nice(m.inventory()?)?,
    };
    let mut v = report::niceness(&m.space, &cert, only);
    v["cone"] = json!(m.name);
    Ok(v)
}

pub fn witness(m: &Model, face: &str) -> CliResult<Value> {
    match &m.kind {
        Kind::Poly(p) => {
            let lat = p.face_lattice()?;
            let f = lat
                .faces
                .iter()
                .find(|f| poly::face_name(f) == face)
                .ok_or_else(|| CliError::invalid("--face", format!("no face named {face}")))?;
            let w = poly::nonclosedness_witness(p, f)?;
            Ok(report::nonclosedness(&m.space, &w))
        }
        Kind::Structured { .. } => {
            let inv = m.inventory()?;
            if inv.face(face).is_none() {
                return Err(CliError::invalid("--face", format!("no face named {face}")));
            }
            let w = certify::structured::nonclosedness_witness(inv, face)?;
            Ok(report::nonclosedness(&m.space, &w))
        }
    }
}

pub fn closedness(m: &Model) -> CliResult<Value> {
    let map = m
        .map
        .as_ref()
        .ok_or_else(|| CliError::invalid("map", "closedness needs a \"map\""))?;
    let r = image_dual_closed(&m.base_cone()?, map)?;
    let mut v = report::image_closedness(&m.space, &r);
    v["cone"] = json!(m.name);
    Ok(v)
}
