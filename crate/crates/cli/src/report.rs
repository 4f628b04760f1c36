//! JSON rendering of cones and certificates. Rationals are strings, vectors
//! of a matrix space are written as matrices, undecided verdicts as the
//! string `"undecided"`.

use nicecone::certify::{
    Condition, ExposednessCertificate, FaceRecord, NicenessCertificate, NonClosednessWitness,
};
use nicecone::closedness::ImageClosedness;
use nicecone::linalg::{fmt_rat, QVec, Rat};
use nicecone::structured::{FaceSet, SumForm};
use nicecone::{PolyCone, SymMat};
use serde_json::{json, Value};

use crate::format::Space;

pub fn rat(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

pub fn mat(m: &SymMat) -> Value {
    Value::Array(m.rows().iter().map(|r| Value::Array(r.iter().map(rat).collect())).collect())
}

pub fn vector(space: &Space, v: &QVec) -> Value {
    match space {
        Space::Sym { n } => mat(&SymMat::from_svec(*n, v).expect("packed length")),
        Space::Vec { .. } => Value::Array(v.entries().iter().map(rat).collect()),
    }
}

pub fn vectors(space: &Space, vs: &[QVec]) -> Value {
    Value::Array(vs.iter().map(|v| vector(space, v)).collect())
}

pub fn verdict(v: Option<bool>) -> Value {
    match v {
        Some(b) => Value::Bool(b),
        None => Value::String("undecided".into()),
    }
}

pub fn poly(space: &Space, p: &PolyCone) -> Value {
    json!({
        "generators": vectors(space, p.generators()),
        "lineality": vectors(space, p.lineality().basis()),
        "inequalities": vectors(space, p.inequalities()),
        "equations": vectors(space, p.equations().basis()),
    })
}

pub fn form(f: &SumForm) -> Value {
    let mats = |ms: &[SymMat]| Value::Array(ms.iter().map(mat).collect());
    json!({
        "psd_block": f.base.block,
        "equations": mats(&f.base.eqs),
        "halfspaces": mats(&f.base.halfspaces),
        "rays": mats(&f.rays),
        "lines": mats(&f.lines),
    })
}

pub fn face_set(space: &Space, s: &FaceSet) -> Value {
    match s {
        FaceSet::Poly(p) => json!({
            "kind": "polyhedral",
            "generators": vectors(space, p.generators()),
            "lineality": vectors(space, p.lineality().basis()),
        }),
        FaceSet::Form(f) => json!({ "kind": "form", "form": form(f) }),
    }
}

fn face_record(space: &Space, r: &FaceRecord, only: Option<Condition>) -> Value {
    let conditions: Vec<Value> = r
        .conditions
        .iter()
        .filter(|c| only.is_none_or(|o| o == c.condition))
        .map(|c| {
            json!({
                "condition": c.condition.label(),
                "substituted": c.substituted,
                "verdict": verdict(c.verdict),
                "at": c.at,
            })
        })
        .collect();
    let xfh: Vec<Value> = r
        .xfh
        .iter()
        .map(|x| {
            json!({
                "h": x.h,
                "direction": vector(space, &x.direction),
                "in_projection": verdict(x.in_projection),
            })
        })
        .collect();
    let failing = r
        .conditions
        .iter()
        .find(|c| c.verdict == Some(false) && only.is_none_or(|o| o == c.condition))
        .map(|c| c.condition.label());
    json!({
        "face": r.face,
        "trivial": r.trivial,
        "closed": verdict(r.closed),
        "failing_condition": failing,
        "conditions": conditions,
        "witness": r.witness.as_ref().map(|w| vector(space, w)),
        "xfh": xfh,
    })
}

pub fn niceness(space: &Space, c: &NicenessCertificate, only: Option<Condition>) -> Value {
    json!({
        "kind": "niceness",
        "cone": c.cone,
        "nice": verdict(c.nice),
        "failing_face": c.failing_face().map(|f| f.face.clone()),
        "faces": c.faces.iter().map(|f| face_record(space, f, only)).collect::<Vec<_>>(),
    })
}

pub fn exposedness(space: &Space, c: &ExposednessCertificate) -> Value {
    json!({
        "kind": "exposedness",
        "cone": c.cone,
        "exposed": verdict(c.exposed),
        "faces_checked": c.faces_checked,
        "undecided": c.undecided,
        "witness": c.witness.as_ref().map(|w| json!({
            "face": w.face,
            "smallest_exposed": w.smallest_exposed,
            "y": vector(space, &w.y),
        })),
    })
}

pub fn nonclosedness(space: &Space, w: &NonClosednessWitness) -> Value {
    json!({
        "kind": "nonclosedness_witness",
        "nonexposed": w.nonexposed,
        "face": w.face,
        "point": vector(space, &w.point),
        "in_face_dual": true,
        "outside_dual_plus_perp": true,
    })
}

pub fn image_closedness(space: &Space, r: &ImageClosedness) -> Value {
    json!({
        "kind": "image_closedness",
        "closed": r.closed,
        "base_point": vector(space, &r.x),
        "witness": r.witness.as_ref().map(|w| vector(space, w)),
    })
}
