//! Certificates for structured cones over their shipped face inventories.
//!
//! Membership in `K* + F^perp` is the workhorse. For a face `H` of `F*`
//! with lineality `F^perp`, `ri H + F^perp = ri H`, so `K*` meets `ri H`
//! exactly when `K* + F^perp` does, and for `H = cone g + F^perp` both
//! reduce to `g ∈ K* + F^perp`. A negative membership answer is only ever
//! an exhausted exact decision, so every failure reported here is sound;
//! searches that find nothing leave the condition undecided.

use super::{aggregate, forall, unanimous, Condition, ConditionEval, ExposednessCertificate};
use super::{ExposureWitness, FaceRecord, NicenessCertificate, NonClosednessWitness, XfhDirection};
use crate::error::{Error, Result};
use crate::linalg::{rat, Metric, Rat, Subspace, SymMat};
use crate::polyhedral::PolyCone;
use crate::structured::{
    member_verdict, smallest_exposed_face, DualFace, FaceSet, InvFace, Membership, SpCone,
    StructuredCone, SumForm, Trivial,
};

/// `Some(true)` in, `Some(false)` provably out, `None` undecided.
fn member(s: &SumForm, x: &SymMat) -> Result<Option<bool>> {
    Ok(match member_verdict(s, x)? {
        Some(Membership::In(_)) => Some(true),
        Some(Membership::Out(_)) => Some(false),
        None => None,
    })
}

/// Every element of `a` lies in `s`: the `B_a x B_a` part sits in the PSD
/// block of `s`, every other entry is free in `s` or covered by its lines.
fn base_within(a: &SpCone, s: &SumForm) -> bool {
    let b = &s.base;
    if !a.halfspaces.is_empty() && a.block.is_empty() {
        return false;
    }
    if !b.eqs.is_empty() || !b.halfspaces.is_empty() || !a.block.iter().all(|i| b.block.contains(i)) {
        return false;
    }
    let n = a.n;
    let lines = Subspace::span(
        &Metric::sym(n),
        &s.lines.iter().map(SymMat::to_svec).collect::<Vec<_>>(),
    )
    .expect("same order");
    (0..n).all(|i| {
        (i..n).all(|j| {
            let inside_a = a.block.contains(&i) && a.block.contains(&j);
            let inside_b = b.block.contains(&i) && b.block.contains(&j);
            inside_a || !inside_b || lines.contains(&SymMat::unit(n, i, j).to_svec())
        })
    })
}

/// `F* ⊆ K* + F^perp`, the reverse inclusion being automatic.
fn condition_one(f: &InvFace, sum: &SumForm) -> Result<(Option<bool>, Option<SymMat>)> {
    if let (FaceSet::Poly(p), Some(q)) = (&f.dual, sum.to_poly()) {
        if p == &q {
            return Ok((Some(true), None));
        }
        let n = f.set.order();
        let out = p
            .generators()
            .iter()
            .find(|g| !q.contains(g).unwrap_or(true))
            .map(|g| SymMat::from_svec(n, g).expect("packed length"));
        return Ok((Some(false), out));
    }
    let fstar = f.dual.to_form();
    if &fstar == sum {
        return Ok((Some(true), None));
    }
    let mut pieces: Vec<SymMat> = fstar.rays.clone();
    for l in &fstar.lines {
        pieces.push(l.clone());
        pieces.push(l.scale(&rat(-1, 1)));
    }
    let mut undecided = !base_within(&fstar.base, sum) && !fstar.base.is_zero_cone();
    for p in pieces {
        match member(sum, &p)? {
            Some(false) => return Ok((Some(false), Some(p))),
            None => undecided = true,
            Some(true) => {}
        }
    }
    Ok((if undecided { None } else { Some(true) }, None))
}

fn half() -> Rat {
    rat(1, 2)
}

/// Relative interior candidates of `H`: its stored point, then positive
/// combinations of at most four generators.
fn ri_candidates(h: &DualFace) -> Vec<SymMat> {
    let mut out = vec![h.ri_point.clone()];
    if let Some(gens) = h.set.generators() {
        if (2..=4).contains(&gens.len()) {
            let coeffs = [rat(1, 1), rat(2, 1), half()];
            let k = gens.len();
            let mut idx = vec![0usize; k];
            loop {
                let n = gens[0].order();
                let p = gens
                    .iter()
                    .zip(&idx)
                    .fold(SymMat::zero(n), |acc, (g, &c)| acc.add(&g.scale(&coeffs[c])));
                if !out.contains(&p) {
                    out.push(p);
                }
                let mut pos = 0;
                while pos < k && idx[pos] == coeffs.len() - 1 {
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == k {
                    break;
                }
                idx[pos] += 1;
            }
        }
    }
    out
}

fn single_generator(h: &DualFace) -> Option<SymMat> {
    match h.set.generators() {
        Some(g) if g.len() == 1 => Some(g[0].clone()),
        _ => None,
    }
}

/// `K* ∩ ri H` nonempty.
fn meets_ri(sum: &SumForm, h: &DualFace) -> Result<Option<bool>> {
    if h.lspace {
        return Ok(Some(true));
    }
    if let Some(g) = single_generator(h) {
        return member(sum, &g);
    }
    // the stored point is a relative interior point by construction
    for (i, c) in ri_candidates(h).into_iter().enumerate() {
        let interior = i == 0 || h.set.ri_member(&c) == Some(true);
        if interior && member(sum, &c)? == Some(true) {
            return Ok(Some(true));
        }
    }
    Ok(None)
}

/// `K* ∩ H` strictly contains `K* ∩ F^perp`.
fn strictly_above(sum: &SumForm, h: &DualFace) -> Result<Option<bool>> {
    if h.lspace {
        return Ok(Some(false));
    }
    if let Some(g) = single_generator(h) {
        return member(sum, &g);
    }
    // generators and ri points of H lie outside F^perp
    let mut cands = h.set.generators().unwrap_or_default();
    cands.push(h.ri_point.clone());
    for c in cands {
        if member(sum, &c)? == Some(true) {
            return Ok(Some(true));
        }
    }
    Ok(None)
}

fn conditions_over(faces: &[DualFace], sum: &SumForm, substituted: bool) -> Result<Vec<ConditionEval>> {
    let mut two = vec![];
    let mut two_p = vec![];
    let mut three = vec![];
    let mut three_p = vec![];
    for h in faces {
        let m = meets_ri(sum, h)?;
        two.push((h.name.as_str(), m));
        if h.properly_minimal {
            two_p.push((h.name.as_str(), m));
        }
        if !h.lspace {
            let s = strictly_above(sum, h)?;
            three_p.push((h.name.as_str(), s));
            if h.properly_minimal {
                three.push((h.name.as_str(), s));
            }
        }
    }
    Ok([
        (Condition::Two, two),
        (Condition::Three, three),
        (Condition::TwoP, two_p),
        (Condition::ThreeP, three_p),
    ]
    .into_iter()
    .map(|(c, items)| {
        let (verdict, at) = forall(items);
        ConditionEval {
            condition: c,
            substituted,
            verdict,
            at,
        }
    })
    .collect())
}

/// Primitive generator of `H ∩ lin F` for a properly minimal `H`.
pub fn xfh_direction(f: &InvFace, h: &DualFace) -> Result<SymMat> {
    let n = f.set.order();
    let g = match (h.properly_minimal, single_generator(h)) {
        (true, Some(g)) => g,
        _ => return Err(Error::Precondition(format!("{} is not properly minimal", h.name))),
    };
    let lin = f.perp.orth_complement();
    let d = lin.project(&g.to_svec())?.primitive();
    Ok(SymMat::from_svec(n, &d).expect("packed length"))
}

/// `x_{F,H} + f ∈ K*` for some `f ∈ F^perp`.
pub fn xfh_criterion(k: &StructuredCone, f: &InvFace, h: &DualFace) -> Result<Option<bool>> {
    let d = xfh_direction(f, h)?;
    member(&k.dual_plus_perp(f), &d)
}

pub fn face_dual_sum_closed(k: &StructuredCone, f: &InvFace) -> Result<FaceRecord> {
    if f.trivial.is_some() {
        return Ok(FaceRecord {
            face: f.name.clone(),
            trivial: true,
            closed: Some(true),
            conditions: vec![],
            witness: None,
            xfh: vec![],
        });
    }
    if f.dual_faces.is_empty() {
        return Err(Error::Unsupported(format!("no dual face inventory for {}", f.name)));
    }
    let sum = k.dual_plus_perp(f);
    let (one, one_witness) = condition_one(f, &sum)?;
    let mut conditions = vec![];
    // the unsubstituted conditions go through K* + F^perp as well; see the
    // module note
    let evals = conditions_over(&f.dual_faces, &sum, true)?;
    for substituted in [false, true] {
        conditions.push(ConditionEval {
            condition: Condition::One,
            substituted,
            verdict: one,
            at: None,
        });
        conditions.extend(evals.iter().cloned().map(|mut e| {
            e.substituted = substituted;
            e
        }));
    }
    let closed = unanimous(&f.name, &conditions)?;

    let mut xfh = vec![];
    for h in f.properly_minimal() {
        let Ok(direction) = xfh_direction(f, h) else { continue };
        let crit = member(&sum, &direction)?;
        let three = strictly_above(&sum, h)?;
        if let (Some(a), Some(b)) = (crit, three) {
            if a != b {
                return Err(Error::InvariantBreach(format!(
                    "projection criterion disagrees with condition 3 at {} of {}",
                    h.name, f.name
                )));
            }
        }
        xfh.push(XfhDirection {
            h: h.name.clone(),
            direction: direction.to_svec(),
            in_projection: crit,
        });
    }

    let witness = match closed {
        Some(false) => failure_witness(f, &sum, &conditions, one_witness)?,
        _ => None,
    };
    Ok(FaceRecord {
        face: f.name.clone(),
        trivial: false,
        closed,
        conditions,
        witness: witness.map(|w| w.to_svec()),
        xfh,
    })
}

/// A relative interior point of the dual face where a condition fails,
/// re-verified: in `F*`, provably outside `K* + F^perp`.
fn failure_witness(
    f: &InvFace,
    sum: &SumForm,
    conditions: &[ConditionEval],
    fallback: Option<SymMat>,
) -> Result<Option<SymMat>> {
    let at = conditions
        .iter()
        .filter(|c| c.verdict == Some(false))
        .find_map(|c| c.at.clone());
    let mut cands = vec![];
    if let Some(h) = at.and_then(|n| f.dual_faces.iter().find(|h| h.name == n)) {
        cands.push(h.ri_point.clone());
    }
    cands.extend(fallback);
    for x in cands {
        if f.dual.member(&x)? && member(sum, &x)? == Some(false) {
            return Ok(Some(x));
        }
    }
    Err(Error::InvariantBreach(format!("no verified witness for face {}", f.name)))
}

pub fn is_nice(k: &StructuredCone) -> Result<NicenessCertificate> {
    let faces = k
        .faces
        .iter()
        .map(|f| face_dual_sum_closed(k, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(NicenessCertificate {
        cone: k.name.clone(),
        nice: aggregate(faces.iter().map(|f| f.closed)),
        faces,
    })
}

pub fn is_facially_exposed(k: &StructuredCone) -> Result<ExposednessCertificate> {
    let mut undecided = vec![];
    let mut witness = None;
    for f in &k.faces {
        let hull = match smallest_exposed_face(&k.form, &k.dual, &f.set) {
            Ok(h) => h,
            Err(Error::Undecided(_)) => {
                undecided.push(f.name.clone());
                continue;
            }
            Err(e) => return Err(e),
        };
        match hull.is_exposed {
            Some(true) => {}
            None => undecided.push(f.name.clone()),
            Some(false) if witness.is_none() => {
                let larger = k
                    .faces
                    .iter()
                    .find(|e| e.set.same_set(&hull.face) == Some(true))
                    .ok_or_else(|| {
                        Error::InvariantBreach(format!("exposed hull of {} not in the inventory", f.name))
                    })?;
                let other = smallest_exposed_face(&k.form, &k.dual, &larger.set)?;
                if other.conjugate.same_set(&hull.conjugate) != Some(true) {
                    return Err(Error::InvariantBreach(format!(
                        "conjugate faces of {} and {} differ",
                        f.name, larger.name
                    )));
                }
                witness = Some(ExposureWitness {
                    face: f.name.clone(),
                    smallest_exposed: larger.name.clone(),
                    y: hull.y.to_svec(),
                });
            }
            Some(false) => {}
        }
    }
    let exposed = if witness.is_some() {
        Some(false)
    } else if undecided.is_empty() {
        Some(true)
    } else {
        None
    };
    Ok(ExposednessCertificate {
        cone: k.name.clone(),
        exposed,
        faces_checked: k.faces.len(),
        undecided,
        witness,
    })
}

/// For a nonexposed face `G` with smallest exposed face `F`, a relative
/// interior point of `F* ∩ G^perp`, verified in `F*` and outside `K* + F^perp`.
pub fn nonclosedness_witness(k: &StructuredCone, g: &str) -> Result<NonClosednessWitness> {
    let gf = k
        .face(g)
        .ok_or_else(|| Error::Precondition(format!("unknown face {g}")))?;
    let hull = smallest_exposed_face(&k.form, &k.dual, &gf.set)?;
    match hull.is_exposed {
        Some(true) => return Err(Error::Precondition(format!("face {g} is exposed"))),
        None => return Err(Error::Undecided(format!("exposedness of {g}"))),
        Some(false) => {}
    }
    let f = k
        .faces
        .iter()
        .find(|e| e.set.same_set(&hull.face) == Some(true))
        .ok_or_else(|| Error::Unsupported(format!("exposed hull of {g} not in the inventory")))?;
    let FaceSet::Poly(fstar) = &f.dual else {
        return Err(Error::Unsupported(format!("non-polyhedral dual of {}", f.name)));
    };
    let gperp = gf
        .set
        .span()
        .ok_or_else(|| Error::Undecided(format!("span of {g}")))?
        .orth_complement();
    let gperp_cone = PolyCone::from_generators(fstar.metric(), &[], gperp.basis())?;
    let cut = fstar.intersect(&gperp_cone)?;
    let x = cut.ri_point();
    let n = k.n;
    let xm = SymMat::from_svec(n, &x).expect("packed length");
    let in_fstar = fstar.contains(&x)?;
    let outside = member(&k.dual_plus_perp(f), &xm)? == Some(false);
    if !(in_fstar && outside) {
        return Err(Error::InvariantBreach(format!("witness for {g} failed verification")));
    }
    Ok(NonClosednessWitness {
        nonexposed: g.to_string(),
        face: f.name.clone(),
        point: x,
    })
}

/// True when the face is one of the two that are always closed.
pub fn is_trivial(f: &InvFace) -> bool {
    matches!(f.trivial, Some(Trivial::Lspace) | Some(Trivial::Whole))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structured::{example1, example2};

    #[test]
    fn example1_is_not_nice_at_f() {
        let ex = example1().unwrap();
        let cert = is_nice(&ex.cone).unwrap();
        assert_eq!(cert.nice, Some(false));
        let f = cert.faces.iter().find(|r| r.face == "F").unwrap();
        assert_eq!(f.closed, Some(false));
        assert_eq!(f.conditions.len(), 10);
        assert!(f.conditions.iter().all(|c| c.verdict == Some(false)), "{:?}", f.conditions);
        assert_eq!(f.witness, Some(ex.m.to_svec()));
        let g = cert.faces.iter().find(|r| r.face == "G").unwrap();
        assert_eq!(g.closed, Some(true));
    }

    #[test]
    fn example1_exposure_witness() {
        let ex = example1().unwrap();
        let cert = is_facially_exposed(&ex.cone).unwrap();
        assert_eq!(cert.exposed, Some(false));
        let w = cert.witness.unwrap();
        assert_eq!((w.face.as_str(), w.smallest_exposed.as_str()), ("G", "F"));
        assert_eq!(w.y, ex.y.to_svec());
        let nc = nonclosedness_witness(&ex.cone, "G").unwrap();
        assert_eq!(nc.face, "F");
        assert_eq!(nc.point, ex.x.to_svec());
        assert!(matches!(nonclosedness_witness(&ex.cone, "F"), Err(Error::Precondition(_))));
    }

    #[test]
    fn example1_xfh_at_failing_face() {
        let ex = example1().unwrap();
        let f = ex.cone.face("F").unwrap();
        let rec = face_dual_sum_closed(&ex.cone, f).unwrap();
        let m = rec.xfh.iter().find(|x| x.direction == ex.m.to_svec()).unwrap();
        assert_eq!(m.in_projection, Some(false));
    }

    #[test]
    fn example2_is_nice() {
        let ex = example2().unwrap();
        let cert = is_nice(&ex.cone).unwrap();
        for f in &cert.faces {
            assert_eq!(f.closed, Some(true), "{} {:?}", f.face, f.conditions);
        }
        assert_eq!(cert.nice, Some(true));
        assert_eq!(is_facially_exposed(&ex.cone).unwrap().exposed, Some(true));
    }
}
