//! Double description conversion from constraints to generators.
//!
//! Works with plain dot products; callers translate metric normals into
//! covectors first. Constraints are inserted in lexicographic order and ray
//! adjacency is decided by the rank of the jointly tight constraints.

use num_traits::{Signed, Zero};

use crate::linalg::{null_space, rank, QVec, Rat};

pub(crate) struct Generators {
    pub rays: Vec<QVec>,
    pub lineality: Vec<QVec>,
}

/// Extreme rays (modulo lineality) and a lineality basis of
/// `{x in R^d : a . x >= 0 for a in ineqs, e . x = 0 for e in eqs}`.
pub(crate) fn constraints_to_generators(d: usize, ineqs: &[QVec], eqs: &[QVec]) -> Generators {
    let mut lin: Vec<QVec> = null_space(eqs, d).expect("dimensions agree");
    let mut rays: Vec<QVec> = Vec::new();

    let mut order: Vec<QVec> = ineqs
        .iter()
        .filter(|a| !a.is_zero())
        .map(QVec::primitive_ray)
        .collect();
    order.sort();
    order.dedup();

    let mut processed: Vec<QVec> = Vec::new();
    for a in order {
        if let Some(k) = lin.iter().position(|l| !a.dot(l).is_zero()) {
            let mut l0 = lin.remove(k);
            if a.dot(&l0).is_negative() {
                l0 = l0.neg();
            }
            let al0 = a.dot(&l0);
            lin = lin
                .iter()
                .map(|l| l.axpy(&(-a.dot(l) / &al0), &l0))
                .collect();
            rays = rays
                .iter()
                .map(|r| r.axpy(&(-a.dot(r) / &al0), &l0).primitive_ray())
                .collect();
            rays.push(l0.primitive_ray());
            processed.push(a);
            continue;
        }

        let vals: Vec<Rat> = rays.iter().map(|r| a.dot(r)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            processed.push(a);
            continue;
        }
        let lin_dim = lin.len();
        let mut next: Vec<QVec> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if !v.is_negative() {
                next.push(r.clone());
            }
        }
        for (i, p) in rays.iter().enumerate() {
            if !vals[i].is_positive() {
                continue;
            }
            for (j, n) in rays.iter().enumerate() {
                if !vals[j].is_negative() {
                    continue;
                }
                if adjacent(d, eqs, &processed, p, n, lin_dim) {
                    let r = n.scale(&vals[i]).axpy(&(-vals[j].clone()), p);
                    next.push(r.primitive_ray());
                }
            }
        }
        next.sort();
        next.dedup();
        rays = next;
        processed.push(a);
    }
    rays.sort();
    rays.dedup();
    Generators {
        rays,
        lineality: lin,
    }
}

/// `p` and `n` span a two-dimensional face (modulo lineality) of the cone
/// cut out by `eqs` and the constraints processed so far.
fn adjacent(
    d: usize,
    eqs: &[QVec],
    processed: &[QVec],
    p: &QVec,
    n: &QVec,
    lin_dim: usize,
) -> bool {
    let mut rows: Vec<QVec> = eqs.to_vec();
    rows.extend(
        processed
            .iter()
            .filter(|a| a.dot(p).is_zero() && a.dot(n).is_zero())
            .cloned(),
    );
    d - rank(&rows) == lin_dim + 2
}
