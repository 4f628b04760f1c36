//! Exact positive-semidefiniteness decision by pivoted LDL^T elimination.
//!
//! Each elimination step picks the remaining diagonal entry of largest
//! magnitude (lowest index on ties). A positive pivot `d` with column `l`
//! (normalized so `l[p] = 1`) is peeled off as `d l l^T`; the remainder is
//! the Schur complement. The verdict is self-certifying: PSD verdicts carry
//! the rank-one terms, which sum back to the input exactly, and NotPSD
//! verdicts carry a vector `w` with `w^T X w < 0`.

use num_traits::{Signed, Zero};

use super::qvec::QVec;
use super::rat::{int, Rat};
use super::subspace::rref;
use super::symmat::SymMat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdlFactor {
    /// `(d_k, l_k)` with `X = sum_k d_k l_k l_k^T`, every `d_k > 0`.
    pub terms: Vec<(Rat, QVec)>,
    /// Pivot indices in elimination order.
    pub pivots: Vec<usize>,
}

impl LdlFactor {
    pub fn reconstruct(&self, n: usize) -> SymMat {
        self.terms.iter().fold(SymMat::zero(n), |acc, (d, l)| {
            acc.add(&SymMat::outer(l).scale(d))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsdVerdict {
    Psd {
        rank: usize,
        /// Canonical basis of the column space.
        range: Vec<QVec>,
        factor: LdlFactor,
    },
    NotPsd {
        witness: QVec,
    },
}

impl PsdVerdict {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdVerdict::Psd { .. })
    }

    pub fn rank(&self) -> Option<usize> {
        match self {
            PsdVerdict::Psd { rank, .. } => Some(*rank),
            PsdVerdict::NotPsd { .. } => None,
        }
    }
}

pub fn psd_check(x: &SymMat) -> PsdVerdict {
    let n = x.order();
    let mut s = x.clone();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut terms: Vec<(Rat, QVec)> = Vec::new();
    let mut pivots = Vec::new();

    loop {
        // Largest |s_pp| among remaining; ties go to the lowest index.
        let best = remaining.iter().copied().fold(None, |best: Option<usize>, i| match best {
            Some(b) if s.get(b, b).abs() >= s.get(i, i).abs() => Some(b),
            _ => Some(i),
        });
        let Some(p) = best else { break };
        let d = s.get(p, p).clone();
        if d.is_negative() {
            let u = QVec::unit(n, p);
            return not_psd(x, &terms, &pivots, u);
        }
        if d.is_zero() {
            // Zero diagonal: any nonzero off-diagonal entry gives a negative direction.
            for (a, &i) in remaining.iter().enumerate() {
                for &j in &remaining[a + 1..] {
                    let sij = s.get(i, j);
                    if !sij.is_zero() {
                        let mut u = QVec::unit(n, i);
                        u.set(j, if sij.is_positive() { int(-1) } else { int(1) });
                        return not_psd(x, &terms, &pivots, u);
                    }
                }
            }
            break;
        }
        let mut l = QVec::zeros(n);
        for &i in &remaining {
            l.set(i, s.get(i, p) / &d);
        }
        for &i in &remaining {
            for &j in &remaining {
                if j < i {
                    continue;
                }
                let v = s.get(i, j) - &d * l.get(i) * l.get(j);
                s.set(i, j, v);
            }
        }
        remaining.retain(|&i| i != p);
        pivots.push(p);
        terms.push((d, l));
    }

    let cols: Vec<QVec> = terms.iter().map(|(_, l)| l.clone()).collect();
    let (r, rank) = rref(&cols).expect("uniform dimension");
    debug_assert_eq!(rank, terms.len());
    PsdVerdict::Psd {
        rank,
        range: r.iter().map(QVec::primitive).collect(),
        factor: LdlFactor { terms, pivots },
    }
}

/// Yes/no PSD test by the same elimination, without the factor or witness.
pub fn is_psd(x: &SymMat) -> bool {
    let n = x.order();
    let mut s: Vec<Vec<Rat>> = x.rows();
    let mut remaining: Vec<usize> = (0..n).collect();
    while !remaining.is_empty() {
        let mut p = remaining[0];
        for &i in &remaining[1..] {
            if s[i][i].abs() > s[p][p].abs() {
                p = i;
            }
        }
        let d = s[p][p].clone();
        if d.is_negative() {
            return false;
        }
        if d.is_zero() {
            return remaining
                .iter()
                .all(|&i| remaining.iter().all(|&j| i == j || s[i][j].is_zero()));
        }
        remaining.retain(|&i| i != p);
        for &i in &remaining {
            let li = &s[i][p] / &d;
            if li.is_zero() {
                continue;
            }
            for &j in &remaining {
                let v = &s[i][j] - &li * &s[p][j];
                s[i][j] = v;
            }
        }
    }
    true
}

/// Extends a negative direction `u` of the current Schur complement (which is
/// supported on the uneliminated indices) to `w` with `l_k . w = 0` for every
/// eliminated term, so that `w^T X w = u^T S u < 0`.
fn not_psd(x: &SymMat, terms: &[(Rat, QVec)], pivots: &[usize], u: QVec) -> PsdVerdict {
    let mut w = u;
    for ((_, l), &p) in terms.iter().zip(pivots).rev() {
        let mut acc = Rat::zero();
        for j in 0..w.dim() {
            if j != p {
                acc += l.get(j) * w.get(j);
            }
        }
        w.set(p, -acc);
    }
    let w = w.primitive_ray();
    debug_assert!(x.quad(&w).is_negative());
    PsdVerdict::NotPsd { witness: w }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_test_agrees_with_full_check() {
        // every 3x3 matrix with entries in {-1, 0, 1}
        for code in 0..729 {
            let mut c = code;
            let mut m = SymMat::zero(3);
            for i in 0..3 {
                for j in i..3 {
                    m.set(i, j, int(c % 3 - 1));
                    c /= 3;
                }
            }
            assert_eq!(is_psd(&m), psd_check(&m).is_psd(), "{m:?}");
        }
        let pd = SymMat::from_i64(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]);
        assert!(is_psd(&pd));
    }

    #[test]
    fn off_diagonal_swap_is_not_psd() {
        let x = SymMat::from_i64(&[&[0, 1], &[1, 0]]);
        match psd_check(&x) {
            PsdVerdict::NotPsd { witness } => {
                assert_eq!(witness, QVec::from_i64(&[1, -1]));
                assert!(x.quad(&witness).is_negative());
            }
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn identity_has_full_rank() {
        let v = psd_check(&SymMat::identity(3));
        assert_eq!(v.rank(), Some(3));
    }

    #[test]
    fn rank_one_range() {
        let x = SymMat::from_i64(&[&[1, 2], &[2, 4]]);
        match psd_check(&x) {
            PsdVerdict::Psd { rank, range, factor } => {
                assert_eq!(rank, 1);
                assert_eq!(range, vec![QVec::from_i64(&[1, 2])]);
                assert_eq!(factor.reconstruct(2), x);
            }
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn negative_schur_complement_witness_is_lifted() {
        // PD leading block, indefinite overall.
        let x = SymMat::from_i64(&[&[2, 1, 3], &[1, 2, 0], &[3, 0, 1]]);
        match psd_check(&x) {
            PsdVerdict::NotPsd { witness } => assert!(x.quad(&witness).is_negative()),
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn zero_matrix_is_psd_rank_zero() {
        assert_eq!(psd_check(&SymMat::zero(3)).rank(), Some(0));
    }
}
