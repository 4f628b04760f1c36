//! Sign forcing on `S + sum t_r R_r + sum s_l L_l` under linear equations.
//!
//! Rules, applied until nothing changes:
//! * a vanishing functional whose live terms all have one known sign forces
//!   every term to zero (a PSD-block term `N . S` has a sign when `N`
//!   restricted to the block is semidefinite, a ray term has the sign of
//!   `N . R`);
//! * a zeroed semidefinite term shrinks the PSD block to the kernel of `N`,
//!   which zeroes the matching rows;
//! * a ray whose term is forced to zero has `t = 0`.
//!
//! With two summands the sign rule is the only one allowed. With a single
//! summand a functional with one live term also forces it.

use std::cmp::Ordering;

use num_traits::Zero;

use super::form::{semidefinite_sign, SpCone, SumForm};
use crate::error::{Error, Result};
use crate::linalg::{Metric, QVec, Subspace, SymMat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForcingStep {
    /// `N_k . S = 0` for the base summand.
    Base { eq: usize },
    /// `t_r = 0`.
    Ray { eq: usize, ray: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forced {
    pub base: SpCone,
    pub live_rays: Vec<usize>,
    pub steps: Vec<ForcingStep>,
    /// Whether each summand satisfies every equation on its own.
    pub complete: bool,
}

fn in_span(eqs: &[SymMat], n: &SymMat) -> bool {
    let v: Vec<QVec> = eqs.iter().map(SymMat::to_svec).collect();
    Subspace::span(&Metric::sym(n.order()), &v)
        .map(|s| s.contains(&n.to_svec()))
        .unwrap_or(false)
}

fn base_term_zero(base: &SpCone, n: &SymMat) -> bool {
    base.is_zero_cone() || in_span(&base.eqs, n)
}

fn base_term_sign(base: &SpCone, n: &SymMat) -> Option<Ordering> {
    let k = base.n;
    let prim = n.to_svec().primitive_ray();
    for h in &base.halfspaces {
        let hp = h.to_svec().primitive_ray();
        if hp == prim {
            return Some(Ordering::Greater);
        }
        if hp == prim.neg() {
            return Some(Ordering::Less);
        }
    }
    for i in 0..k {
        for j in i..k {
            if !n.get(i, j).is_zero() && !(base.block.contains(&i) && base.block.contains(&j)) {
                return None;
            }
        }
    }
    match semidefinite_sign(&n.principal(&base.block)) {
        Ordering::Equal => None,
        s => Some(s),
    }
}

/// Runs the forcing rules for `c ∩ {N . X = 0 : N in eqs}`.
pub fn force(c: &SumForm, eqs: &[SymMat], two_copies: bool) -> Forced {
    let mut base = c.base.clone();
    let mut live: Vec<usize> = (0..c.rays.len()).collect();
    let mut steps = Vec::new();
    loop {
        let mut changed = false;
        for (k, n) in eqs.iter().enumerate() {
            if c.lines.iter().any(|l| !l.inner(n).expect("same order").is_zero()) {
                continue;
            }
            let base_zero = base_term_zero(&base, n);
            let ray_terms: Vec<(usize, Ordering)> = live
                .iter()
                .filter_map(|&r| {
                    let v = c.rays[r].inner(n).expect("same order");
                    (!v.is_zero()).then(|| (r, v.cmp(&num_traits::zero())))
                })
                .collect();
            let terms = ray_terms.len() + usize::from(!base_zero);
            if terms == 0 {
                continue;
            }
            let mut signs: Vec<Option<Ordering>> = ray_terms.iter().map(|&(_, s)| Some(s)).collect();
            if !base_zero {
                signs.push(base_term_sign(&base, n));
            }
            let same_sign = signs.iter().all(|s| s.is_some() && *s == signs[0]);
            if !(same_sign || (!two_copies && terms == 1)) {
                continue;
            }
            if !base_zero {
                base = base.restrict(std::slice::from_ref(n));
                steps.push(ForcingStep::Base { eq: k });
            }
            for (r, _) in ray_terms {
                live.retain(|&x| x != r);
                steps.push(ForcingStep::Ray { eq: k, ray: r });
            }
            changed = true;
        }
        if !changed {
            break;
        }
    }
    let complete = eqs.iter().all(|n| {
        base_term_zero(&base, n)
            && live.iter().all(|&r| c.rays[r].inner(n).expect("same order").is_zero())
            && c.lines.iter().all(|l| l.inner(n).expect("same order").is_zero())
    });
    Forced {
        base,
        live_rays: live,
        steps,
        complete,
    }
}

/// Additive face test for `E = c ∩ {N . X = 0}`: whenever `Y + Z ∈ E` with
/// `Y, Z ∈ c`, both summands satisfy the equations. `Ok(false)` is never
/// returned; a test the rules cannot close is `Undecided`.
pub fn additive_face_test(c: &SumForm, eqs: &[SymMat]) -> Result<Forced> {
    let f = force(c, eqs, true);
    if f.complete {
        Ok(f)
    } else {
        Err(Error::Undecided("forcing rules do not close the face test".into()))
    }
}

/// `c ∩ {N . X = 0}` as a sum form, when forcing pins it down exactly.
pub fn restrict_coords(c: &SumForm, eqs: &[SymMat]) -> Result<SumForm> {
    let f = force(c, eqs, false);
    if !f.complete {
        return Err(Error::Undecided("forcing rules do not pin down the restriction".into()));
    }
    let mut base = f.base;
    base.eqs.extend(eqs.iter().cloned());
    let base = base.restrict(&[]);
    let rays = f.live_rays.iter().map(|&r| c.rays[r].clone()).collect();
    Ok(SumForm::new(base, rays, c.lines.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::QVec;

    fn offdiag(n: usize) -> SymMat {
        SymMat::unit(n, 0, 1)
    }

    #[test]
    fn coordinate_faces_of_psd_plus_ray() {
        let k = SumForm::new(SpCone::psd(2), vec![offdiag(2)], vec![]);
        // cone E11
        let g = additive_face_test(&k, &[SymMat::unit(2, 1, 1), SymMat::unit(2, 0, 1)]).unwrap();
        assert!(g.live_rays.is_empty());
        let p = restrict_coords(&k, &[SymMat::unit(2, 1, 1), SymMat::unit(2, 0, 1)])
            .unwrap()
            .to_poly()
            .unwrap();
        assert_eq!(p.generators(), &[SymMat::unit(2, 0, 0).to_svec()]);
        // cone {E11, M}
        let f = restrict_coords(&k, &[SymMat::unit(2, 1, 1)]).unwrap().to_poly().unwrap();
        assert_eq!(f.generators().len(), 2);
    }

    #[test]
    fn rank_one_face_from_psd_functional() {
        let k = SumForm::new(SpCone::psd(2), vec![offdiag(2)], vec![]);
        let w = SymMat::outer(&QVec::from_i64(&[1, 1]));
        additive_face_test(&k, &[w.clone()]).unwrap();
        let p = restrict_coords(&k, &[w]).unwrap().to_poly().unwrap();
        assert_eq!(p.generators(), &[QVec::from_i64(&[1, -1, 1])]);
    }

    #[test]
    fn indefinite_functional_is_undecided() {
        let k = SumForm::new(SpCone::psd(2), vec![], vec![]);
        let n = SymMat::from_i64(&[&[1, 0], &[0, -1]]);
        assert!(matches!(additive_face_test(&k, &[n]), Err(Error::Undecided(_))));
    }

    #[test]
    fn paper_style_chain_in_block_sum() {
        // {X : X[01,01] PSD} + cone M with x11 = x12 = 0
        let fstar = SumForm::new(SpCone::block_psd(3, &[0, 1]), vec![offdiag(3)], vec![]);
        let t = additive_face_test(&fstar, &[SymMat::unit(3, 0, 0), SymMat::unit(3, 0, 1)]).unwrap();
        assert_eq!(
            t.steps,
            vec![ForcingStep::Base { eq: 0 }, ForcingStep::Ray { eq: 1, ray: 0 }]
        );
    }
}
