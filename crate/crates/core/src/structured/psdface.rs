use crate::error::{Error, Result};
use num_traits::Zero;

use crate::linalg::{null_space, psd_check, rref, Metric, PsdVerdict, QVec, Subspace, SymMat};

/// Face `{X PSD : range X ⊆ R}` of the PSD cone, identified by `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PsdFace {
    n: usize,
    /// Reduced echelon basis of `R`.
    range: Vec<QVec>,
}

impl PsdFace {
    pub fn new(n: usize, basis: &[QVec]) -> Result<Self> {
        for b in basis {
            b.check_dim(n)?;
        }
        let (range, _) = rref(basis)?;
        Ok(PsdFace { n, range })
    }

    /// Face of matrices supported on the principal block `B x B`.
    pub fn block(n: usize, block: &[usize]) -> Self {
        let basis: Vec<QVec> = block.iter().map(|&i| QVec::unit(n, i)).collect();
        Self::new(n, &basis).expect("unit vectors")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn range(&self) -> &[QVec] {
        &self.range
    }

    pub fn rank(&self) -> usize {
        self.range.len()
    }

    /// Dimension of the face inside `S^n`.
    pub fn dim(&self) -> usize {
        let r = self.rank();
        r * (r + 1) / 2
    }

    fn range_perp(&self) -> Vec<QVec> {
        null_space(&self.range, self.n).expect("consistent dims")
    }

    pub fn contains(&self, x: &SymMat) -> bool {
        x.order() == self.n
            && psd_check(x).is_psd()
            && self.range_perp().iter().all(|w| x.mul_vec(w).is_zero())
    }

    /// Relative interior: PSD with range exactly `R`.
    pub fn ri_member(&self, x: &SymMat) -> bool {
        self.contains(x) && psd_check(x).rank() == Some(self.rank())
    }

    /// Span of the face, `{sym(u v^T) : u, v ∈ R}`, in packed coordinates.
    pub fn span(&self) -> Subspace {
        let mut gens = Vec::new();
        for (a, u) in self.range.iter().enumerate() {
            for v in &self.range[a..] {
                let s = SymMat::outer(&u.add(v)).sub(&SymMat::outer(u)).sub(&SymMat::outer(v));
                gens.push(s.to_svec());
                gens.push(SymMat::outer(u).to_svec());
            }
        }
        Subspace::span(&Metric::sym(self.n), &gens).expect("packed length")
    }

    /// `{Z : Z . X = 0 for every X in the face}`.
    pub fn perp(&self) -> Subspace {
        self.span().orth_complement()
    }

    /// A PSD matrix whose range is `R^⊥`; it exposes the face.
    pub fn exposing(&self) -> SymMat {
        self.range_perp()
            .iter()
            .fold(SymMat::zero(self.n), |acc, w| acc.add(&SymMat::outer(w)))
    }

    /// Sum of `u u^T` over the basis of `R`; lies in the relative interior.
    pub fn ri_point(&self) -> SymMat {
        self.range
            .iter()
            .fold(SymMat::zero(self.n), |acc, u| acc.add(&SymMat::outer(u)))
    }

    pub fn intersect(&self, other: &PsdFace) -> Result<PsdFace> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut rows = self.range_perp();
        rows.extend(other.range_perp());
        PsdFace::new(self.n, &null_space(&rows, self.n)?)
    }

    /// Smallest face containing `x`: the face of its range.
    pub fn minimal_containing(x: &SymMat) -> Result<PsdFace> {
        match psd_check(x) {
            PsdVerdict::Psd { range, .. } => PsdFace::new(x.order(), &range),
            PsdVerdict::NotPsd { .. } => Err(Error::NotMember),
        }
    }

    pub fn is_subface_of(&self, other: &PsdFace) -> bool {
        let perp = other.range_perp();
        self.range.iter().all(|u| perp.iter().all(|w| u.dot(w).is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn single_coordinate_face_in_s2() {
        let f = PsdFace::block(2, &[0]);
        assert_eq!(f.dim(), 1);
        let want = Subspace::span(
            &Metric::sym(2),
            &[SymMat::unit(2, 0, 1).to_svec(), SymMat::unit(2, 1, 1).to_svec()],
        )
        .unwrap();
        assert_eq!(f.perp(), want);
        assert!(f.ri_member(&SymMat::unit(2, 0, 0)));
        assert_eq!(f.exposing(), SymMat::unit(2, 1, 1));
    }

    #[test]
    fn upper_left_block_in_s3() {
        let f = PsdFace::block(3, &[0, 1]);
        assert_eq!(f.dim(), 3);
        assert!(f.ri_member(&SymMat::diag(&[int(1), int(1), int(0)])));
        assert!(!f.ri_member(&SymMat::diag(&[int(1), int(0), int(0)])));
        assert!(f.contains(&SymMat::diag(&[int(1), int(0), int(0)])));
        assert!(!f.contains(&SymMat::identity(3)));
        // the perp consists of matrices with zero upper-left block
        for b in f.perp().basis() {
            let m = SymMat::from_svec(3, b).unwrap();
            assert!(m.principal(&[0, 1]).is_zero());
        }
        assert_eq!(f.perp().dim(), 3);
    }

    #[test]
    fn rotated_face_and_intersections() {
        let v = QVec::from_i64(&[1, -1]);
        let f = PsdFace::new(2, &[v.clone()]).unwrap();
        assert!(f.ri_member(&SymMat::outer(&v)));
        let e = f.exposing();
        assert!(e.inner(&SymMat::outer(&v)).unwrap().is_zero());
        assert_eq!(psd_check(&e).rank(), Some(1));
        let g = PsdFace::block(2, &[0]);
        assert_eq!(f.intersect(&g).unwrap().rank(), 0);
        let all = PsdFace::block(2, &[0, 1]);
        assert_eq!(f.intersect(&all).unwrap(), f);
        assert!(f.is_subface_of(&all));
        assert_eq!(
            PsdFace::minimal_containing(&SymMat::from_i64(&[&[1, 2], &[2, 4]])).unwrap().range(),
            &[QVec::from_i64(&[1, 2]).scale(&crate::linalg::rat(1, 1))][..]
        );
    }
}
