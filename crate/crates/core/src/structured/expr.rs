use num_traits::{Signed, Zero};

use super::form::{Membership, SpCone, SumForm};
use super::psdface::PsdFace;
use crate::error::{Error, Result};
use crate::linalg::{int, psd_check, rat, Metric, QVec, Rat, Subspace, SymMat};
use crate::polyhedral::PolyCone;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Closedness {
    Proven,
    Assumed,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Psd,
    /// `{X : X[B,B] PSD}`, other entries free.
    BlockPsd(Vec<usize>),
    /// The PSD face of matrices supported on `B x B`.
    PsdFace(Vec<usize>),
    /// `{X : N . X >= 0}`
    Halfspace(SymMat),
    Ray(SymMat),
    Subspace(Vec<SymMat>),
    /// Packed coordinates under the trace metric.
    Polyhedral(PolyCone),
    Sum(Vec<ConeExpr>),
    Intersect(Vec<ConeExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeExpr {
    pub n: usize,
    pub node: Node,
    pub closed: Closedness,
}

/// A point in the relative interior of every operand of an intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiOverlap {
    pub point: SymMat,
}

impl ConeExpr {
    fn atom(n: usize, node: Node) -> Self {
        ConeExpr {
            n,
            node,
            closed: Closedness::Proven,
        }
    }

    pub fn psd(n: usize) -> Self {
        Self::atom(n, Node::Psd)
    }

    pub fn block_psd(n: usize, block: &[usize]) -> Self {
        Self::atom(n, Node::BlockPsd(block.to_vec()))
    }

    pub fn psd_face(n: usize, block: &[usize]) -> Self {
        Self::atom(n, Node::PsdFace(block.to_vec()))
    }

    pub fn halfspace(normal: SymMat) -> Self {
        Self::atom(normal.order(), Node::Halfspace(normal))
    }

    pub fn ray(gen: SymMat) -> Self {
        Self::atom(gen.order(), Node::Ray(gen))
    }

    pub fn subspace(n: usize, basis: Vec<SymMat>) -> Self {
        Self::atom(n, Node::Subspace(basis))
    }

    pub fn polyhedral(n: usize, p: PolyCone) -> Self {
        Self::atom(n, Node::Polyhedral(p))
    }

    fn check_children(children: &[ConeExpr]) -> Result<usize> {
        let n = children
            .first()
            .ok_or_else(|| Error::Unsupported("empty operand list".into()))?
            .n;
        for c in children {
            if c.n != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.n,
                });
            }
        }
        Ok(n)
    }

    /// Sums are closed when every operand is polyhedral; otherwise the flag
    /// is `Assumed` until a certificate upgrades it.
    pub fn sum(children: Vec<ConeExpr>) -> Result<Self> {
        let n = Self::check_children(&children)?;
        let closed = if children.iter().all(|c| c.is_polyhedral_expr()) {
            Closedness::Proven
        } else {
            Closedness::Assumed
        };
        Ok(ConeExpr {
            n,
            node: Node::Sum(children),
            closed,
        })
    }

    pub fn intersect(children: Vec<ConeExpr>) -> Result<Self> {
        let n = Self::check_children(&children)?;
        let closed = if children.iter().all(|c| c.closed == Closedness::Proven) {
            Closedness::Proven
        } else {
            Closedness::Unknown
        };
        Ok(ConeExpr {
            n,
            node: Node::Intersect(children),
            closed,
        })
    }

    /// Marks the cone closed on the strength of an external certificate.
    pub fn with_closedness(mut self, c: Closedness) -> Self {
        self.closed = c;
        self
    }

    pub fn is_polyhedral_expr(&self) -> bool {
        match &self.node {
            Node::Psd | Node::BlockPsd(_) | Node::PsdFace(_) => false,
            Node::Halfspace(_) | Node::Ray(_) | Node::Subspace(_) | Node::Polyhedral(_) => true,
            Node::Sum(c) | Node::Intersect(c) => c.iter().all(ConeExpr::is_polyhedral_expr),
        }
    }

    pub fn lower(&self) -> Result<SumForm> {
        let n = self.n;
        match &self.node {
            Node::Psd => Ok(SumForm::from_base(SpCone::psd(n))),
            Node::BlockPsd(b) => Ok(SumForm::from_base(SpCone::block_psd(n, b))),
            Node::PsdFace(b) => Ok(SumForm::from_base(SpCone::psd_face(n, b))),
            Node::Halfspace(h) => {
                let mut s = SpCone::block_psd(n, &[]);
                s.halfspaces.push(h.clone());
                Ok(SumForm::from_base(s))
            }
            Node::Ray(r) => Ok(SumForm::new(SpCone::zero(n), vec![r.clone()], vec![])),
            Node::Subspace(b) => Ok(SumForm::new(SpCone::zero(n), vec![], b.clone())),
            Node::Polyhedral(p) => Ok(SumForm::from_base(SpCone::from_poly(n, p))),
            Node::Intersect(children) => {
                let mut acc = SpCone::block_psd(n, &[]);
                for c in children {
                    let f = c.lower()?;
                    let s = if f.params() == 0 {
                        f.base
                    } else if let Some(p) = f.to_poly() {
                        SpCone::from_poly(n, &p)
                    } else {
                        return Err(Error::Unsupported(
                            "intersection with a non-polyhedral sum".into(),
                        ));
                    };
                    acc = merge_sp(acc, s)?;
                }
                Ok(SumForm::from_base(acc))
            }
            Node::Sum(children) => {
                let mut base: Option<SpCone> = None;
                let mut rays = Vec::new();
                let mut lines = Vec::new();
                for c in children {
                    let f = c.lower()?;
                    rays.extend(f.rays.iter().cloned());
                    lines.extend(f.lines.iter().cloned());
                    if f.base.is_zero_cone() {
                        continue;
                    }
                    if let Some(p) = f.base.to_poly() {
                        let mat = |g: &QVec| SymMat::from_svec(n, g).expect("packed length");
                        rays.extend(p.generators().iter().map(mat));
                        lines.extend(p.lineality().basis().iter().map(mat));
                        continue;
                    }
                    if base.is_some() {
                        return Err(Error::Unsupported("sum of two PSD blocks".into()));
                    }
                    base = Some(f.base);
                }
                Ok(SumForm::new(base.unwrap_or_else(|| SpCone::zero(n)), rays, lines))
            }
        }
    }

    /// Exact polyhedral description when no PSD atom occurs.
    pub fn to_poly(&self) -> Result<Option<PolyCone>> {
        if !self.is_polyhedral_expr() {
            return Ok(None);
        }
        Ok(self.lower()?.to_poly())
    }

    pub fn member(&self, x: &SymMat) -> Result<Membership> {
        self.lower()?.member(x)
    }

    /// Relative interior test for atoms; `None` for composite expressions.
    pub fn ri_member(&self, x: &SymMat) -> Option<bool> {
        let n = self.n;
        Some(match &self.node {
            Node::Psd => psd_check(x).rank() == Some(n),
            Node::BlockPsd(b) => psd_check(&x.principal(b)).rank() == Some(b.len()),
            Node::PsdFace(b) => {
                let basis: Vec<QVec> = b.iter().map(|&i| QVec::unit(n, i)).collect();
                PsdFace::new(n, &basis).ok()?.ri_member(x)
            }
            Node::Halfspace(h) => h.is_zero() || h.inner(x).ok()?.is_positive(),
            Node::Ray(r) => {
                let (xv, rv) = (x.to_svec(), r.to_svec());
                let k = rv.first_nonzero()?;
                let c = xv.get(k) / rv.get(k);
                c.is_positive() && xv == rv.scale(&c)
            }
            Node::Subspace(b) => {
                let v: Vec<QVec> = b.iter().map(SymMat::to_svec).collect();
                Subspace::span(&Metric::sym(n), &v).ok()?.contains(&x.to_svec())
            }
            Node::Polyhedral(p) => p.ri_member(&x.to_svec()).ok()?,
            Node::Sum(_) | Node::Intersect(_) => return None,
        })
    }

    /// Searches `P + c N` for `P` the identity (or the identity of a face
    /// block) and `N` a halfspace normal or ray of an operand, plus the
    /// supplied candidates.
    pub fn find_ri_overlap(children: &[ConeExpr], extra: &[SymMat]) -> Option<RiOverlap> {
        let n = children.first()?.n;
        let mut bases = vec![SymMat::identity(n)];
        let mut dirs = vec![SymMat::zero(n)];
        for c in children {
            match &c.node {
                Node::PsdFace(b) | Node::BlockPsd(b) => {
                    let mut m = SymMat::zero(n);
                    for &i in b {
                        m.set(i, i, int(1));
                    }
                    bases.push(m);
                }
                Node::Halfspace(h) | Node::Ray(h) => dirs.push(h.clone()),
                _ => {}
            }
        }
        let coeffs = [rat(1, 2), int(1), rat(-1, 2), int(-1), int(2), rat(1, 4)];
        let mut cands: Vec<SymMat> = extra.to_vec();
        for b in &bases {
            for d in &dirs {
                if d.is_zero() {
                    cands.push(b.clone());
                    continue;
                }
                for c in &coeffs {
                    cands.push(b.add(&d.scale(c)));
                }
            }
        }
        cands
            .into_iter()
            .find(|p| children.iter().all(|c| c.ri_member(p) == Some(true)))
            .map(|point| RiOverlap { point })
    }

    /// Dual expression. Duals of sums are intersections of duals and always
    /// closed; the dual of an intersection is the sum of duals, marked
    /// proven only when a relative-interior overlap point is verified.
    pub fn dual_expr(&self, witnesses: &[SymMat]) -> Result<(ConeExpr, Option<RiOverlap>)> {
        let n = self.n;
        Ok(match &self.node {
            Node::Psd => (ConeExpr::psd(n), None),
            Node::BlockPsd(b) => (ConeExpr::psd_face(n, b), None),
            Node::PsdFace(b) => (ConeExpr::block_psd(n, b), None),
            Node::Halfspace(h) => (ConeExpr::ray(h.clone()), None),
            Node::Ray(r) => (ConeExpr::halfspace(r.clone()), None),
            Node::Subspace(b) => {
                let v: Vec<QVec> = b.iter().map(SymMat::to_svec).collect();
                let perp = Subspace::span(&Metric::sym(n), &v)?.orth_complement();
                let basis = perp.basis().iter().map(|x| SymMat::from_svec(n, x).unwrap()).collect();
                (ConeExpr::subspace(n, basis), None)
            }
            Node::Polyhedral(p) => (ConeExpr::polyhedral(n, p.dual()), None),
            Node::Sum(children) => {
                let duals = children
                    .iter()
                    .map(|c| c.dual_expr(witnesses).map(|d| d.0))
                    .collect::<Result<Vec<_>>>()?;
                (ConeExpr::intersect(duals)?.with_closedness(Closedness::Proven), None)
            }
            Node::Intersect(children) => {
                let duals = children
                    .iter()
                    .map(|c| c.dual_expr(witnesses).map(|d| d.0))
                    .collect::<Result<Vec<_>>>()?;
                let overlap = if self.is_polyhedral_expr() {
                    None
                } else {
                    Self::find_ri_overlap(children, witnesses)
                };
                let closed = if overlap.is_some() || self.is_polyhedral_expr() {
                    Closedness::Proven
                } else {
                    Closedness::Assumed
                };
                (ConeExpr::sum(duals)?.with_closedness(closed), overlap)
            }
        })
    }
}

fn merge_sp(a: SpCone, b: SpCone) -> Result<SpCone> {
    let block = if a.block.iter().all(|i| b.block.contains(i)) {
        b.block.clone()
    } else if b.block.iter().all(|i| a.block.contains(i)) {
        a.block.clone()
    } else {
        return Err(Error::Unsupported("intersection of two PSD blocks".into()));
    };
    let mut eqs = a.eqs;
    eqs.extend(b.eqs);
    let mut halfspaces = a.halfspaces;
    halfspaces.extend(b.halfspaces);
    Ok(SpCone {
        n: a.n,
        block,
        eqs,
        halfspaces,
    })
}

/// Every rational matrix with entries `p/q`, `q <= max_den`, `|p/q| <= bound`.
pub fn rational_grid_values(max_den: i64, bound: i64) -> Vec<Rat> {
    let mut v: Vec<Rat> = Vec::new();
    for q in 1..=max_den {
        for p in -bound * q..=bound * q {
            v.push(rat(p, q));
        }
    }
    v.sort();
    v.dedup();
    v
}

/// Calls `f` on every symmetric matrix of order `n` with entries from `vals`.
pub fn for_each_grid_matrix(n: usize, vals: &[Rat], mut f: impl FnMut(&SymMat)) {
    let k = n * (n + 1) / 2;
    let mut idx = vec![0usize; k];
    loop {
        let v = QVec::new(idx.iter().map(|&i| vals[i].clone()).collect());
        f(&SymMat::from_svec(n, &v).expect("packed length"));
        let mut p = 0;
        loop {
            if p == k {
                return;
            }
            idx[p] += 1;
            if idx[p] < vals.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

#[allow(dead_code)]
fn is_zero_mat(m: &SymMat) -> bool {
    m.to_svec().entries().iter().all(Rat::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offdiag(n: usize) -> SymMat {
        SymMat::unit(n, 0, 1)
    }

    #[test]
    fn dual_of_psd_plus_ray_is_psd_with_halfspace() {
        let k = ConeExpr::sum(vec![ConeExpr::psd(2), ConeExpr::ray(offdiag(2))]).unwrap();
        assert_eq!(k.closed, Closedness::Assumed);
        let (d, _) = k.dual_expr(&[]).unwrap();
        assert_eq!(d.closed, Closedness::Proven);
        assert!(!d.member(&offdiag(2)).unwrap().is_in());
        assert!(d.member(&SymMat::identity(2)).unwrap().is_in());
        assert!(d.member(&SymMat::from_i64(&[&[1, 1], &[1, 1]])).unwrap().is_in());
        assert!(!d.member(&SymMat::from_i64(&[&[1, -1], &[-1, 1]])).unwrap().is_in());
    }

    #[test]
    fn ri_overlap_found_for_psd_and_halfspace() {
        let k = ConeExpr::intersect(vec![ConeExpr::psd(3), ConeExpr::halfspace(offdiag(3))]).unwrap();
        let (d, w) = k.dual_expr(&[]).unwrap();
        assert_eq!(d.closed, Closedness::Proven);
        let p = w.unwrap().point;
        assert_eq!(psd_check(&p).rank(), Some(3));
        assert!(offdiag(3).inner(&p).unwrap().is_positive());
    }

    #[test]
    fn psd_is_self_dual() {
        let (d, _) = ConeExpr::psd(3).dual_expr(&[]).unwrap();
        assert_eq!(d, ConeExpr::psd(3));
    }

    #[test]
    fn grid_size() {
        assert_eq!(rational_grid_values(1, 3).len(), 7);
        assert_eq!(rational_grid_values(4, 3).len(), 37);
    }
}
