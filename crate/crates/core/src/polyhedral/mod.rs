//! Polyhedral cones kept in both generator and inequality form.
//!
//! Inequality normals are stored in the cone's metric: `a` encodes the
//! constraint `<a, x> >= 0`. With that convention the generators of `C*`
//! are exactly the normals of `C`, so the dual is a swap of the two forms.

mod dd;
mod lattice;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rank, Metric, QVec, Subspace};

pub use lattice::{FaceLattice, MAX_DIM, MAX_GENERATORS};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyCone {
    metric: Metric,
    generators: Vec<QVec>,
    lineality: Subspace,
    inequalities: Vec<QVec>,
    equations: Subspace,
}

/// A face, keyed by the full set of inequalities that vanish on it.
/// Indices refer to the parent cone's canonical lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyFace {
    pub active: Vec<usize>,
    pub generators: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exposure {
    pub is_exposed: bool,
    pub smallest_exposed: PolyFace,
    pub normal: QVec,
}

fn check_all(vecs: &[QVec], d: usize) -> Result<()> {
    vecs.iter().try_for_each(|v| v.check_dim(d))
}

impl PolyCone {
    /// `cone(gens) + span(lin)`.
    pub fn from_generators(metric: &Metric, gens: &[QVec], lin: &[QVec]) -> Result<Self> {
        let d = metric.dim();
        check_all(gens, d)?;
        check_all(lin, d)?;
        let lowered = |vs: &[QVec]| -> Vec<QVec> { vs.iter().map(|v| metric.lower(v)).collect() };
        // normals y with <y, g> >= 0 and <y, l> = 0
        let h = dd::constraints_to_generators(d, &lowered(gens), &lowered(lin));
        // and back again, which drops redundant generators
        let v = dd::constraints_to_generators(d, &lowered(&h.rays), &lowered(&h.lineality));
        Self::assemble(metric, v.rays, &v.lineality, h.rays, &h.lineality)
    }

    /// `{x : <a, x> >= 0 for a in ineqs, <e, x> = 0 for e in eqs}`.
    pub fn from_inequalities(metric: &Metric, ineqs: &[QVec], eqs: &[QVec]) -> Result<Self> {
        let d = metric.dim();
        check_all(ineqs, d)?;
        check_all(eqs, d)?;
        let lowered = |vs: &[QVec]| -> Vec<QVec> { vs.iter().map(|v| metric.lower(v)).collect() };
        let v = dd::constraints_to_generators(d, &lowered(ineqs), &lowered(eqs));
        Self::from_generators(metric, &v.rays, &v.lineality)
    }

    pub fn full(metric: &Metric) -> Self {
        Self::from_generators(metric, &[], Subspace::full(metric).basis()).expect("consistent")
    }

    pub fn zero(metric: &Metric) -> Self {
        Self::from_generators(metric, &[], &[]).expect("consistent")
    }

    fn assemble(
        metric: &Metric,
        rays: Vec<QVec>,
        lin: &[QVec],
        normals: Vec<QVec>,
        eqs: &[QVec],
    ) -> Result<Self> {
        let lineality = Subspace::span(metric, lin)?;
        let equations = Subspace::span(metric, eqs)?;
        let canon = |vs: Vec<QVec>, kill: &Subspace| -> Result<Vec<QVec>> {
            let mut out = Vec::with_capacity(vs.len());
            for v in vs {
                let r = v.sub(&kill.project(&v)?);
                if !r.is_zero() {
                    out.push(r.primitive_ray());
                }
            }
            out.sort();
            out.dedup();
            Ok(out)
        };
        let generators = canon(rays, &lineality)?;
        let inequalities = canon(normals, &equations)?;
        let c = PolyCone {
            metric: metric.clone(),
            generators,
            lineality,
            inequalities,
            equations,
        };
        c.check_consistency()?;
        Ok(c)
    }

    fn check_consistency(&self) -> Result<()> {
        let m = &self.metric;
        let breach = |what: &str| Err(Error::InvariantBreach(format!("polyhedral cone: {what}")));
        if self.lin_span().dim() + self.equations.dim() != m.dim() {
            return breach("span and equations are not complementary");
        }
        for g in self.generators.iter().chain(self.lineality.basis()) {
            if self.equations.basis().iter().any(|e| !m.inner(e, g).is_zero()) {
                return breach("generator violates an equation");
            }
        }
        for a in &self.inequalities {
            if self.generators.iter().any(|g| m.inner(a, g).is_negative()) {
                return breach("generator violates an inequality");
            }
            if self.lineality.basis().iter().any(|l| !m.inner(a, l).is_zero()) {
                return breach("inequality not tight on the lineality space");
            }
        }
        Ok(())
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn ambient_dim(&self) -> usize {
        self.metric.dim()
    }

    /// Extreme ray representatives, orthogonal to the lineality space.
    pub fn generators(&self) -> &[QVec] {
        &self.generators
    }

    pub fn lineality(&self) -> &Subspace {
        &self.lineality
    }

    pub fn inequalities(&self) -> &[QVec] {
        &self.inequalities
    }

    /// `(lin C)^perp`, which is also the lineality space of the dual.
    pub fn equations(&self) -> &Subspace {
        &self.equations
    }

    pub fn lin_span(&self) -> Subspace {
        self.equations.orth_complement()
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim() - self.equations.dim()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_zero()
    }

    pub fn dual(&self) -> PolyCone {
        PolyCone {
            metric: self.metric.clone(),
            generators: self.inequalities.clone(),
            lineality: self.equations.clone(),
            inequalities: self.generators.clone(),
            equations: self.lineality.clone(),
        }
    }

    /// `C ∩ -C`, computed from the inequality form alone.
    pub fn lspace_from_inequalities(&self) -> Subspace {
        let rows: Vec<QVec> = self
            .inequalities
            .iter()
            .chain(self.equations.basis())
            .map(|a| self.metric.lower(a))
            .collect();
        let ns = crate::linalg::null_space(&rows, self.ambient_dim()).expect("dimensions agree");
        Subspace::span(&self.metric, &ns).expect("dimensions agree")
    }

    pub fn contains(&self, x: &QVec) -> Result<bool> {
        x.check_dim(self.ambient_dim())?;
        let m = &self.metric;
        Ok(self.equations.basis().iter().all(|e| m.inner(e, x).is_zero())
            && self.inequalities.iter().all(|a| !m.inner(a, x).is_negative()))
    }

    pub fn ri_member(&self, x: &QVec) -> Result<bool> {
        x.check_dim(self.ambient_dim())?;
        let m = &self.metric;
        Ok(self.equations.basis().iter().all(|e| m.inner(e, x).is_zero())
            && self.inequalities.iter().all(|a| m.inner(a, x).is_positive()))
    }

    fn check_metric(&self, other: &Metric) -> Result<()> {
        if &self.metric != other {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn intersect(&self, other: &PolyCone) -> Result<PolyCone> {
        self.check_metric(&other.metric)?;
        let ineqs: Vec<QVec> = self.inequalities.iter().chain(&other.inequalities).cloned().collect();
        let eqs: Vec<QVec> = self
            .equations
            .basis()
            .iter()
            .chain(other.equations.basis())
            .cloned()
            .collect();
        PolyCone::from_inequalities(&self.metric, &ineqs, &eqs)
    }

    pub fn sum(&self, other: &PolyCone) -> Result<PolyCone> {
        self.check_metric(&other.metric)?;
        let gens: Vec<QVec> = self.generators.iter().chain(&other.generators).cloned().collect();
        let lin: Vec<QVec> = self
            .lineality
            .basis()
            .iter()
            .chain(other.lineality.basis())
            .cloned()
            .collect();
        PolyCone::from_generators(&self.metric, &gens, &lin)
    }

    pub fn add_subspace(&self, s: &Subspace) -> Result<PolyCone> {
        self.check_metric(s.metric())?;
        let lin: Vec<QVec> = self.lineality.basis().iter().chain(s.basis()).cloned().collect();
        PolyCone::from_generators(&self.metric, &self.generators, &lin)
    }

    /// Sum of the generators, a relative interior point.
    pub fn ri_point(&self) -> QVec {
        QVec::sum(self.ambient_dim(), &self.generators)
    }

    // ---- faces ----

    fn tight(&self, a: &QVec, x: &QVec) -> bool {
        self.metric.inner(a, x).is_zero()
    }

    /// The face spanned by the given generators (plus the lineality space).
    pub fn face_spanned_by(&self, gens: &[usize]) -> PolyFace {
        let active: Vec<usize> = (0..self.inequalities.len())
            .filter(|&i| gens.iter().all(|&g| self.tight(&self.inequalities[i], &self.generators[g])))
            .collect();
        self.face_with_active(&active)
    }

    /// `C ∩ {<a_i, x> = 0 : i in active}`, closed up to its maximal active set.
    pub fn face_with_active(&self, active: &[usize]) -> PolyFace {
        let generators: Vec<usize> = (0..self.generators.len())
            .filter(|&g| active.iter().all(|&i| self.tight(&self.inequalities[i], &self.generators[g])))
            .collect();
        let active: Vec<usize> = (0..self.inequalities.len())
            .filter(|&i| generators.iter().all(|&g| self.tight(&self.inequalities[i], &self.generators[g])))
            .collect();
        let mut span: Vec<QVec> = generators.iter().map(|&g| self.generators[g].clone()).collect();
        span.extend(self.lineality.basis().iter().cloned());
        PolyFace {
            dim: rank(&span),
            active,
            generators,
        }
    }

    pub fn top_face(&self) -> PolyFace {
        self.face_with_active(&[])
    }

    pub fn bottom_face(&self) -> PolyFace {
        self.face_with_active(&(0..self.inequalities.len()).collect::<Vec<_>>())
    }

    pub fn face_generators(&self, f: &PolyFace) -> Vec<QVec> {
        f.generators.iter().map(|&g| self.generators[g].clone()).collect()
    }

    pub fn face_cone(&self, f: &PolyFace) -> PolyCone {
        PolyCone::from_generators(&self.metric, &self.face_generators(f), self.lineality.basis())
            .expect("face of a consistent cone")
    }

    pub fn face_span(&self, f: &PolyFace) -> Subspace {
        let mut v = self.face_generators(f);
        v.extend(self.lineality.basis().iter().cloned());
        Subspace::span(&self.metric, &v).expect("dimensions agree")
    }

    pub fn face_perp(&self, f: &PolyFace) -> Subspace {
        self.face_span(f).orth_complement()
    }

    pub fn face_contains(&self, f: &PolyFace, x: &QVec) -> Result<bool> {
        Ok(self.contains(x)? && f.active.iter().all(|&i| self.tight(&self.inequalities[i], x)))
    }

    pub fn face_ri_member(&self, f: &PolyFace, x: &QVec) -> Result<bool> {
        Ok(self.face_contains(f, x)?
            && (0..self.inequalities.len())
                .filter(|i| !f.active.contains(i))
                .all(|i| self.metric.inner(&self.inequalities[i], x).is_positive()))
    }

    /// The face having `x` in its relative interior.
    pub fn minimal_face(&self, x: &QVec) -> Result<PolyFace> {
        if !self.contains(x)? {
            return Err(Error::NotMember);
        }
        let active: Vec<usize> = (0..self.inequalities.len())
            .filter(|&i| self.tight(&self.inequalities[i], x))
            .collect();
        Ok(self.face_with_active(&active))
    }

    /// The face `C* ∩ F^perp` of the dual, as a face of `self.dual()`.
    pub fn conjugate_face(&self, f: &PolyFace) -> PolyFace {
        self.dual().face_spanned_by(&f.active)
    }

    /// Smallest exposed face containing `f`, exposed by a relative interior
    /// point of `C* ∩ F^perp` (sum of the normals active on `f`).
    pub fn exposure(&self, f: &PolyFace) -> Exposure {
        let y = QVec::sum(self.ambient_dim(), f.active.iter().map(|&i| &self.inequalities[i]));
        let gens: Vec<usize> = (0..self.generators.len())
            .filter(|&g| self.tight(&y, &self.generators[g]))
            .collect();
        let smallest = self.face_spanned_by(&gens);
        Exposure {
            is_exposed: &smallest == f,
            smallest_exposed: smallest,
            normal: y,
        }
    }

    pub fn face_lattice(&self) -> Result<FaceLattice> {
        FaceLattice::enumerate(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> QVec {
        QVec::from_i64(x)
    }

    fn orthant(d: usize) -> PolyCone {
        let gens: Vec<QVec> = (0..d).map(|i| QVec::unit(d, i)).collect();
        PolyCone::from_generators(&Metric::euclidean(d), &gens, &[]).unwrap()
    }

    #[test]
    fn orthant_inequalities_are_coordinates() {
        let c = orthant(3);
        assert_eq!(c.inequalities(), &[v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]);
        assert_eq!(c.dual(), c);
    }

    #[test]
    fn two_ray_cone_normals() {
        let c = PolyCone::from_generators(&Metric::euclidean(2), &[v(&[1, 0]), v(&[1, 1])], &[])
            .unwrap();
        assert_eq!(c.inequalities(), &[v(&[0, 1]), v(&[1, -1])]);
    }

    #[test]
    fn line_becomes_equation() {
        let c = PolyCone::from_generators(&Metric::euclidean(2), &[], &[v(&[1, 0])]).unwrap();
        assert!(c.inequalities().is_empty());
        assert_eq!(c.equations().basis(), &[v(&[0, 1])]);
    }

    #[test]
    fn halfspace_dual_is_ray() {
        let m = Metric::euclidean(3);
        let h = PolyCone::from_inequalities(&m, &[v(&[1, 2, 0])], &[]).unwrap();
        assert_eq!(h.lineality().dim(), 2);
        let r = PolyCone::from_generators(&m, &[v(&[1, 2, 0])], &[]).unwrap();
        assert_eq!(h.dual(), r);
    }

    #[test]
    fn dual_is_a_recomputation_under_sym_metric() {
        // cone{E11, E12sym} in S^2
        let m = Metric::sym(2);
        let c = PolyCone::from_generators(&m, &[v(&[1, 0, 0]), v(&[0, 1, 0])], &[]).unwrap();
        let d = PolyCone::from_inequalities(&m, c.generators(), c.lineality().basis()).unwrap();
        assert_eq!(c.dual(), d);
        assert!(d.contains(&v(&[0, 0, -5])).unwrap());
        assert!(!d.contains(&v(&[-1, 0, 0])).unwrap());
    }

    #[test]
    fn ray_plus_line_is_halfspace() {
        let m = Metric::euclidean(2);
        let r = PolyCone::from_generators(&m, &[v(&[1, 0])], &[]).unwrap();
        let s = Subspace::span(&m, &[v(&[0, 1])]).unwrap();
        let h = r.add_subspace(&s).unwrap();
        assert_eq!(h, PolyCone::from_inequalities(&m, &[v(&[1, 0])], &[]).unwrap());
        assert_eq!(r.add_subspace(&Subspace::zero(&m)).unwrap(), r);
    }

    #[test]
    fn minimal_face_and_ri() {
        let c = orthant(3);
        let f = c.minimal_face(&v(&[1, 0, 2])).unwrap();
        assert_eq!(f.dim, 2);
        assert_eq!(c.face_generators(&f), vec![v(&[0, 0, 1]), v(&[1, 0, 0])]);
        assert!(c.ri_member(&v(&[1, 1, 1])).unwrap());
        assert!(!c.ri_member(&v(&[1, 0, 1])).unwrap());
        assert_eq!(c.minimal_face(&v(&[1, 1, 1])).unwrap(), c.top_face());
        assert_eq!(c.minimal_face(&v(&[-1, 0, 0])), Err(Error::NotMember));
    }

    #[test]
    fn whole_cone_is_exposed_by_zero() {
        let c = orthant(2);
        let e = c.exposure(&c.top_face());
        assert!(e.is_exposed);
        assert!(e.normal.is_zero());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let r = PolyCone::from_generators(&Metric::euclidean(2), &[v(&[1, 0, 0])], &[]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }
}
