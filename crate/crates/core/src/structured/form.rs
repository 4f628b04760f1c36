//! Normal forms the expression grammar lowers to.
//!
//! [`SpCone`] is `{X : X[B,B] PSD, N_k . X = 0, H_l . X >= 0}` for a principal
//! index block `B`; [`SumForm`] adds finitely many rays (`t >= 0`) and lines.
//! Membership is exact whenever at most one ray or line survives
//! canonicalization: the PSD condition becomes nonnegativity of every
//! principal minor, a family of univariate polynomials.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::poly::{exists_nonneg, ParamPoint, Poly};
use crate::linalg::{int, is_psd, psd_check, sym_units, Metric, PsdVerdict, QVec, Rat, Subspace, SymMat};
use crate::polyhedral::PolyCone;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpCone {
    pub n: usize,
    /// Principal block required to be PSD; empty means no PSD constraint.
    pub block: Vec<usize>,
    pub eqs: Vec<SymMat>,
    pub halfspaces: Vec<SymMat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SumForm {
    pub base: SpCone,
    pub rays: Vec<SymMat>,
    pub lines: Vec<SymMat>,
}

/// Why a matrix is outside a form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutReason {
    NotPsd(QVec),
    Equation(usize),
    Halfspace(usize),
    /// No parameter value works; the decision over the one free parameter
    /// was exhaustive.
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Coefficients of the rays then the lines.
    In(Vec<ParamPoint>),
    Out(OutReason),
}

impl Membership {
    pub fn is_in(&self) -> bool {
        matches!(self, Membership::In(_))
    }
}

fn metric_of(n: usize) -> Metric {
    Metric::sym(n)
}

fn canonical_span(n: usize, mats: &[SymMat]) -> Vec<SymMat> {
    let v: Vec<QVec> = mats.iter().map(SymMat::to_svec).collect();
    Subspace::span(&metric_of(n), &v)
        .expect("same order")
        .basis()
        .iter()
        .map(|b| SymMat::from_svec(n, b).expect("packed length"))
        .collect()
}

fn primitive_mat(n: usize, m: &SymMat) -> SymMat {
    SymMat::from_svec(n, &m.to_svec().primitive_ray()).expect("packed length")
}

fn coords(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            out.push((i, j));
        }
    }
    out
}

impl SpCone {
    pub fn psd(n: usize) -> Self {
        SpCone {
            n,
            block: (0..n).collect(),
            eqs: vec![],
            halfspaces: vec![],
        }
    }

    pub fn zero(n: usize) -> Self {
        SpCone {
            n,
            block: vec![],
            eqs: sym_units(n),
            halfspaces: vec![],
        }
    }

    /// `{X : X[B,B] PSD}`, every other entry free.
    pub fn block_psd(n: usize, block: &[usize]) -> Self {
        SpCone {
            n,
            block: block.to_vec(),
            eqs: vec![],
            halfspaces: vec![],
        }
    }

    /// PSD matrices supported on the block `B x B`.
    pub fn psd_face(n: usize, block: &[usize]) -> Self {
        let eqs = coords(n)
            .into_iter()
            .filter(|(i, j)| !(block.contains(i) && block.contains(j)))
            .map(|(i, j)| SymMat::unit(n, i, j))
            .collect();
        SpCone {
            n,
            block: block.to_vec(),
            eqs,
            halfspaces: vec![],
        }
    }

    pub fn from_poly(n: usize, p: &PolyCone) -> Self {
        let mat = |v: &QVec| SymMat::from_svec(n, v).expect("packed length");
        SpCone {
            n,
            block: vec![],
            eqs: p.equations().basis().iter().map(mat).collect(),
            halfspaces: p.inequalities().iter().map(mat).collect(),
        }
    }

    pub fn is_zero_cone(&self) -> bool {
        canonical_span(self.n, &self.eqs).len() == self.n * (self.n + 1) / 2
    }

    pub fn is_polyhedral(&self) -> bool {
        self.block.len() <= 1
    }

    fn canonicalize(&mut self) {
        self.block.sort();
        self.block.dedup();
        self.eqs = canonical_span(self.n, &self.eqs);
        // a block whose off-diagonal entries all vanish is a set of sign
        // constraints on its diagonal
        if self.block.len() > 1 {
            let eq_space = Subspace::span(
                &metric_of(self.n),
                &self.eqs.iter().map(SymMat::to_svec).collect::<Vec<_>>(),
            )
            .expect("same order");
            let diagonal = self.block.iter().enumerate().all(|(a, &i)| {
                self.block[a + 1..]
                    .iter()
                    .all(|&j| eq_space.contains(&SymMat::unit(self.n, i, j).to_svec()))
            });
            if diagonal {
                for &i in &self.block {
                    self.halfspaces.push(SymMat::unit(self.n, i, i));
                }
                self.block.clear();
            }
        }
        let mut hs: Vec<SymMat> = self
            .halfspaces
            .iter()
            .filter(|h| !h.is_zero())
            .map(|h| primitive_mat(self.n, h))
            .collect();
        hs.sort();
        hs.dedup();
        self.halfspaces = hs;
    }

    /// Coordinates `(i, j)` on which no constraint depends.
    pub fn free_coords(&self) -> Vec<(usize, usize)> {
        coords(self.n)
            .into_iter()
            .filter(|&(i, j)| {
                !(self.block.contains(&i) && self.block.contains(&j))
                    && self.eqs.iter().chain(&self.halfspaces).all(|m| m.get(i, j).is_zero())
            })
            .collect()
    }

    pub fn member(&self, x: &SymMat) -> Membership {
        for (k, e) in self.eqs.iter().enumerate() {
            if !e.inner(x).expect("same order").is_zero() {
                return Membership::Out(OutReason::Equation(k));
            }
        }
        for (k, h) in self.halfspaces.iter().enumerate() {
            if h.inner(x).expect("same order").is_negative() {
                return Membership::Out(OutReason::Halfspace(k));
            }
        }
        if !self.block.is_empty() {
            let sub = x.principal(&self.block);
            if is_psd(&sub) {
                return Membership::In(vec![]);
            }
            if let PsdVerdict::NotPsd { witness } = psd_check(&sub) {
                let mut w = QVec::zeros(self.n);
                for (a, &i) in self.block.iter().enumerate() {
                    w.set(i, witness.get(a).clone());
                }
                return Membership::Out(OutReason::NotPsd(w));
            }
        }
        Membership::In(vec![])
    }

    /// Polyhedral description, available when the PSD block has at most one index.
    pub fn to_poly(&self) -> Option<PolyCone> {
        if !self.is_polyhedral() {
            return None;
        }
        let m = metric_of(self.n);
        let mut ineqs: Vec<QVec> = self.halfspaces.iter().map(SymMat::to_svec).collect();
        if let Some(&k) = self.block.first() {
            ineqs.push(SymMat::unit(self.n, k, k).to_svec());
        }
        let eqs: Vec<QVec> = self.eqs.iter().map(SymMat::to_svec).collect();
        Some(PolyCone::from_inequalities(&m, &ineqs, &eqs).expect("consistent dimensions"))
    }

    /// Adds the equations `N . X = 0` and shrinks the PSD block using every
    /// semidefinite equation: for PSD `X` and PSD `N`, `N . X = 0` forces
    /// the range of `X` into the kernel of `N`. The result describes the
    /// same set; `range` is the forced range inside the block.
    pub fn restrict(&self, extra: &[SymMat]) -> SpCone {
        let mut eqs: Vec<SymMat> = self.eqs.clone();
        eqs.extend(extra.iter().cloned());
        let n = self.n;
        // columns spanning the allowed range, in full coordinates
        let mut range: Vec<QVec> = self.block.iter().map(|&i| QVec::unit(n, i)).collect();
        loop {
            let before = range.len();
            for e in &eqs {
                let supported = coords(n).into_iter().all(|(i, j)| {
                    e.get(i, j).is_zero() || (self.block.contains(&i) && self.block.contains(&j))
                });
                if !supported || range.is_empty() {
                    continue;
                }
                let c = e.congruence(&range);
                let sign = semidefinite_sign(&c);
                if sign == Ordering::Equal {
                    continue;
                }
                let c = if sign == Ordering::Less { c.scale(&int(-1)) } else { c };
                // range := range * ker(c)
                let rows: Vec<QVec> = c.rows().into_iter().map(QVec::new).collect();
                let ker = crate::linalg::null_space(&rows, range.len()).expect("square");
                if ker.len() < range.len() {
                    range = ker
                        .iter()
                        .map(|k| {
                            k.entries()
                                .iter()
                                .zip(&range)
                                .fold(QVec::zeros(n), |acc, (a, col)| acc.axpy(a, col))
                        })
                        .collect();
                }
            }
            if range.len() == before {
                break;
            }
        }
        let coord_block: Option<Vec<usize>> = {
            let span = Subspace::span(&Metric::euclidean(n), &range).expect("same dim");
            let idx: Vec<usize> = span
                .basis()
                .iter()
                .map(|b| b.first_nonzero().expect("nonzero"))
                .collect();
            let is_coord = span.basis().iter().all(|b| b.entries().iter().filter(|x| !x.is_zero()).count() == 1);
            is_coord.then_some(idx)
        };
        let mut out = match coord_block {
            Some(b) => {
                let mut out = self.clone();
                out.eqs = eqs;
                // entries of the block touching a dropped index vanish
                for &i in &self.block {
                    if b.contains(&i) {
                        continue;
                    }
                    for &j in &self.block {
                        out.eqs.push(SymMat::unit(n, i, j));
                    }
                }
                out.block = b;
                out
            }
            None if range.len() == 1 => {
                // X[B,B] = c r r^T with c >= 0: entries of the block are tied
                // to the single parameter c.
                let r = &range[0];
                let rr = SymMat::outer(r);
                let mut out = self.clone();
                out.eqs = eqs;
                let p = r.first_nonzero().expect("nonzero");
                for &i in &self.block {
                    for &j in &self.block {
                        if j < i {
                            continue;
                        }
                        // x_ij * rr_pp - x_pp * rr_ij = 0 (unit(i,j) . X counts x_ij twice off the diagonal)
                        let w = if i == j { int(1) } else { int(2) };
                        let e = SymMat::unit(n, i, j)
                            .scale(rr.get(p, p))
                            .sub(&SymMat::unit(n, p, p).scale(&(rr.get(i, j) * w)));
                        out.eqs.push(e);
                    }
                }
                out.block = vec![p];
                out
            }
            None => {
                let mut out = self.clone();
                out.eqs = eqs;
                out
            }
        };
        out.canonicalize();
        out
    }
}

/// `Greater` if PSD and nonzero, `Less` if NSD and nonzero, `Equal` otherwise
/// (zero or indefinite).
pub(crate) fn semidefinite_sign(c: &SymMat) -> Ordering {
    if c.is_zero() {
        return Ordering::Equal;
    }
    if psd_check(c).is_psd() {
        return Ordering::Greater;
    }
    if psd_check(&c.scale(&int(-1))).is_psd() {
        return Ordering::Less;
    }
    Ordering::Equal
}

/// Determinant of a small matrix of polynomials by cofactor expansion.
fn det_poly(m: &[Vec<Poly>]) -> Poly {
    match m.len() {
        0 => Poly::constant(int(1)),
        1 => m[0][0].clone(),
        k => {
            let mut acc = Poly::zero();
            for c in 0..k {
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != c)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][c].mul(&det_poly(&minor));
                acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

fn subsets(idx: &[usize]) -> Vec<Vec<usize>> {
    (1u32..(1 << idx.len()))
        .map(|m| {
            idx.iter()
                .enumerate()
                .filter(|(k, _)| m & (1 << k) != 0)
                .map(|(_, &i)| i)
                .collect()
        })
        .collect()
}

impl SumForm {
    pub fn new(base: SpCone, rays: Vec<SymMat>, lines: Vec<SymMat>) -> Self {
        let mut f = SumForm { base, rays, lines };
        f.normalize();
        f
    }

    pub fn from_base(base: SpCone) -> Self {
        Self::new(base, vec![], vec![])
    }

    pub fn from_poly(n: usize, p: &PolyCone) -> Self {
        let mat = |v: &QVec| SymMat::from_svec(n, v).expect("packed length");
        Self::new(
            SpCone::zero(n),
            p.generators().iter().map(mat).collect(),
            p.lineality().basis().iter().map(mat).collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.base.n
    }

    pub fn params(&self) -> usize {
        self.rays.len() + self.lines.len()
    }

    /// Canonical form: absorbs lines into the PSD block where they cover
    /// every entry outside a sub-block, drops components on free entries,
    /// reduces rays modulo lines.
    fn normalize(&mut self) {
        let n = self.base.n;
        self.base.canonicalize();
        self.lines = canonical_span(n, &self.lines);
        self.compress();
        let free = self.base.free_coords();
        let strip = |m: &SymMat| -> SymMat {
            let mut m = m.clone();
            for &(i, j) in &free {
                m.set(i, j, Rat::zero());
            }
            m
        };
        self.lines = canonical_span(n, &self.lines.iter().map(strip).collect::<Vec<_>>());
        let line_space = Subspace::span(
            &metric_of(n),
            &self.lines.iter().map(SymMat::to_svec).collect::<Vec<_>>(),
        )
        .expect("same order");
        let mut rays: Vec<SymMat> = Vec::new();
        for r in &self.rays {
            let v = strip(r).to_svec();
            let v = v.sub(&line_space.project(&v).expect("same order"));
            if !v.is_zero() && !self.base.member(&SymMat::from_svec(n, &v).unwrap()).is_in() {
                rays.push(SymMat::from_svec(n, &v.primitive_ray()).unwrap());
            }
        }
        rays.sort();
        rays.dedup();
        self.rays = rays;
    }

    /// `X[B,B] PSD + span{E_ij : (i,j) outside B' x B'}` equals
    /// `X[B',B'] PSD` for `B' ⊆ B`, provided the remaining constraints only
    /// read `B' x B'`.
    fn compress(&mut self) {
        let n = self.base.n;
        if self.lines.is_empty() || self.base.block.is_empty() {
            return;
        }
        let space = Subspace::span(
            &metric_of(n),
            &self.lines.iter().map(SymMat::to_svec).collect::<Vec<_>>(),
        )
        .expect("same order");
        let inner: Vec<usize> = self
            .base
            .block
            .iter()
            .copied()
            .filter(|&i| !space.contains(&SymMat::unit(n, i, i).to_svec()))
            .collect();
        let outside: Vec<(usize, usize)> = coords(n)
            .into_iter()
            .filter(|(i, j)| !(inner.contains(i) && inner.contains(j)))
            .collect();
        if !outside
            .iter()
            .all(|&(i, j)| space.contains(&SymMat::unit(n, i, j).to_svec()))
        {
            return;
        }
        let reads_outside = self
            .base
            .eqs
            .iter()
            .chain(&self.base.halfspaces)
            .any(|m| outside.iter().any(|&(i, j)| !m.get(i, j).is_zero()));
        if reads_outside {
            return;
        }
        self.base.block = inner;
        // what is left of the lines lives on B' x B'
        let kept: Vec<SymMat> = self
            .lines
            .iter()
            .map(|l| {
                let mut l = l.clone();
                for &(i, j) in &outside {
                    l.set(i, j, Rat::zero());
                }
                l
            })
            .collect();
        self.lines = canonical_span(n, &kept);
    }

    pub fn is_polyhedral(&self) -> bool {
        self.base.is_polyhedral()
    }

    /// Candidate `I_B + c h` in the relative interior of the base. Certified
    /// only when no equation reads the block: then the base is locally the
    /// solution set of its equations around a point with `X[B,B]` positive
    /// definite and every halfspace strict.
    fn base_ri_point(&self) -> Option<SymMat> {
        let b = &self.base;
        let n = b.n;
        let touches = b.eqs.iter().any(|e| {
            b.block
                .iter()
                .any(|&i| b.block.iter().any(|&j| !e.get(i, j).is_zero()))
        });
        if touches {
            return None;
        }
        let mut id = SymMat::zero(n);
        for &i in &b.block {
            id.set(i, i, int(1));
        }
        let mut hsum = SymMat::zero(n);
        for h in &b.halfspaces {
            let mut hb = SymMat::zero(n);
            for &i in &b.block {
                for &j in &b.block {
                    if i <= j {
                        hb.set(i, j, h.get(i, j).clone());
                    }
                }
            }
            hsum = hsum.add(&hb);
        }
        let cs = [0i64, 1, -1, 2, -2].map(int).into_iter().chain([
            crate::linalg::rat(1, 2),
            crate::linalg::rat(-1, 2),
            crate::linalg::rat(1, 4),
            crate::linalg::rat(-1, 4),
        ]);
        for c in cs {
            let p = id.add(&hsum.scale(&c));
            let pd = b.block.is_empty() || psd_check(&p.principal(&b.block)).rank() == Some(b.block.len());
            let strict = b.halfspaces.iter().all(|h| h.inner(&p).expect("same order").is_positive());
            if pd && strict {
                return Some(p);
            }
        }
        None
    }

    /// Members of the form whose sum is a certified relative interior
    /// point: generators of the polyhedral form, or a base interior point
    /// followed by the rays.
    pub fn ri_parts(&self) -> Option<Vec<SymMat>> {
        let n = self.base.n;
        if let Some(p) = self.to_poly() {
            return Some(
                p.generators()
                    .iter()
                    .map(|g| SymMat::from_svec(n, g).expect("packed length"))
                    .collect(),
            );
        }
        let mut parts = vec![self.base_ri_point()?];
        parts.extend(self.rays.iter().cloned());
        Some(parts)
    }

    pub fn ri_point(&self) -> Option<SymMat> {
        let n = self.base.n;
        Some(self.ri_parts()?.iter().fold(SymMat::zero(n), |acc, p| acc.add(p)))
    }

    /// Linear span, known when the base has a certified relative interior
    /// point (its span is then the solution set of its equations).
    pub fn span(&self) -> Option<Subspace> {
        let n = self.base.n;
        let m = metric_of(n);
        if let Some(p) = self.to_poly() {
            return Some(p.lin_span());
        }
        self.base_ri_point()?;
        let eqs = Subspace::span(&m, &self.base.eqs.iter().map(SymMat::to_svec).collect::<Vec<_>>()).ok()?;
        let mut gens: Vec<QVec> = eqs.orth_complement().basis().to_vec();
        gens.extend(self.rays.iter().chain(&self.lines).map(SymMat::to_svec));
        Subspace::span(&m, &gens).ok()
    }

    /// Exact relative interior test where available.
    pub fn ri_member(&self, x: &SymMat) -> Option<bool> {
        let p = self.to_poly()?;
        p.ri_member(&x.to_svec()).ok()
    }

    pub fn to_poly(&self) -> Option<PolyCone> {
        let base = self.base.to_poly()?;
        let n = self.base.n;
        let gens: Vec<QVec> = self.rays.iter().map(SymMat::to_svec).collect();
        let lin: Vec<QVec> = self.lines.iter().map(SymMat::to_svec).collect();
        let extra = PolyCone::from_generators(&metric_of(n), &gens, &lin).expect("same order");
        Some(base.sum(&extra).expect("same metric"))
    }

    pub fn with_lines(&self, extra: &[SymMat]) -> SumForm {
        let mut lines = self.lines.clone();
        lines.extend(extra.iter().cloned());
        SumForm::new(self.base.clone(), self.rays.clone(), lines)
    }

    /// Exact membership when at most one ray or line is left; otherwise a
    /// search over a small coefficient grid, and `Undecided` if it fails.
    pub fn member(&self, x: &SymMat) -> Result<Membership> {
        if x.order() != self.base.n {
            return Err(Error::DimensionMismatch {
                expected: self.base.n,
                found: x.order(),
            });
        }
        match self.params() {
            0 => Ok(self.base.member(x)),
            1 => Ok(self.member_one(x)),
            _ => self.member_grid(x),
        }
    }

    fn member_one(&self, x: &SymMat) -> Membership {
        let (dir, lo) = match self.rays.first() {
            Some(r) => (r.clone(), Some(Rat::zero())),
            None => (self.lines[0].clone(), None),
        };
        let n = self.base.n;
        // X(t) = X - t D
        let entry = |i: usize, j: usize| Poly::linear(x.get(i, j).clone(), -dir.get(i, j).clone());
        let lin = |m: &SymMat| -> Poly {
            let mut p = Poly::zero();
            for i in 0..n {
                for j in 0..n {
                    p = p.add(&entry(i, j).scale(m.get(i, j)));
                }
            }
            p
        };
        let mut polys: Vec<Poly> = Vec::new();
        for e in &self.base.eqs {
            let p = lin(e);
            polys.push(p.clone());
            polys.push(p.neg());
        }
        for h in &self.base.halfspaces {
            polys.push(lin(h));
        }
        for s in subsets(&self.base.block) {
            let m: Vec<Vec<Poly>> = s
                .iter()
                .map(|&i| s.iter().map(|&j| entry(i, j)).collect())
                .collect();
            polys.push(det_poly(&m));
        }
        match exists_nonneg(&polys, lo.as_ref(), None) {
            Some(t) => Membership::In(vec![t]),
            None => Membership::Out(OutReason::Exhausted),
        }
    }

    fn member_grid(&self, x: &SymMat) -> Result<Membership> {
        let k = self.params();
        if k > 4 {
            return Err(Error::Undecided(format!("membership with {k} free parameters")));
        }
        let vals: Vec<Rat> = [0, 1, -1, 2, -2]
            .iter()
            .map(|&v| int(v))
            .chain([crate::linalg::rat(1, 2), crate::linalg::rat(-1, 2)])
            .collect();
        let dirs: Vec<(&SymMat, bool)> = self
            .rays
            .iter()
            .map(|r| (r, true))
            .chain(self.lines.iter().map(|l| (l, false)))
            .collect();
        let mut idx = vec![0usize; k];
        loop {
            let ok_sign = dirs.iter().zip(&idx).all(|((_, ray), &i)| !ray || !vals[i].is_negative());
            if ok_sign {
                let mut y = x.clone();
                for ((d, _), &i) in dirs.iter().zip(&idx) {
                    y = y.sub(&d.scale(&vals[i]));
                }
                if self.base.member(&y).is_in() {
                    return Ok(Membership::In(
                        idx.iter().map(|&i| ParamPoint::Rational(vals[i].clone())).collect(),
                    ));
                }
            }
            let mut p = 0;
            loop {
                if p == k {
                    return Err(Error::Undecided(format!(
                        "no decomposition found over {k} free parameters"
                    )));
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

    /// `self ∩ y^perp` for `y` in the dual cone, when the base is a PSD
    /// block with zero or free entries elsewhere. Every summand is
    /// nonnegative against `y`, so each must vanish: rays with `y . r > 0`
    /// drop out and the block shrinks to the kernel of `y[B,B]`.
    pub fn exposed_face(&self, y: &SymMat) -> Result<SumForm> {
        let n = self.base.n;
        if !self.rays.is_empty() || !self.lines.is_empty() {
            if !self.base.halfspaces.is_empty() {
                return Err(Error::Unsupported("exposed face of a sum with a constrained base".into()));
            }
            for l in &self.lines {
                if !y.inner(l)?.is_zero() {
                    return Err(Error::Precondition("exposing element not in the dual".into()));
                }
            }
            let mut rays = Vec::new();
            for r in &self.rays {
                let v = y.inner(r)?;
                if v.is_negative() {
                    return Err(Error::Precondition("exposing element not in the dual".into()));
                }
                if v.is_zero() {
                    rays.push(r.clone());
                }
            }
            // y must be PSD on the block and, off the block, a combination
            // of the base equations, so that y . S >= 0 on the base.
            let mut off = y.clone();
            for &i in &self.base.block {
                for &j in &self.base.block {
                    off.set(i, j, Rat::zero());
                }
            }
            let eq_space = Subspace::span(
                &metric_of(n),
                &self.base.eqs.iter().map(SymMat::to_svec).collect::<Vec<_>>(),
            )?;
            if !eq_space.contains(&off.to_svec()) {
                return Err(Error::Precondition("exposing element not in the dual".into()));
            }
            if !psd_check(&y.principal(&self.base.block)).is_psd() {
                return Err(Error::Precondition("exposing element not in the dual".into()));
            }
            let base = self.base.restrict(std::slice::from_ref(y));
            return Ok(SumForm::new(base, rays, self.lines.clone()));
        }
        Ok(SumForm::from_base(self.base.restrict(std::slice::from_ref(y))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> SymMat {
        SymMat::from_i64(rows)
    }

    fn offdiag() -> SymMat {
        m(&[&[0, 1], &[1, 0]])
    }

    #[test]
    fn psd_plus_ray_membership_is_exact() {
        let k = SumForm::new(SpCone::psd(2), vec![offdiag()], vec![]);
        match k.member(&m(&[&[1, 5], &[5, 1]])).unwrap() {
            Membership::In(t) => {
                let ParamPoint::Rational(t) = &t[0] else { panic!() };
                let rest = m(&[&[1, 5], &[5, 1]]).sub(&offdiag().scale(t));
                assert!(psd_check(&rest).is_psd());
            }
            v => panic!("{v:?}"),
        }
        assert!(!k.member(&m(&[&[1, -5], &[-5, 1]])).unwrap().is_in());
        assert!(k.member(&SymMat::zero(2)).unwrap().is_in());
    }

    #[test]
    fn dual_plus_line_rejects_off_diagonal() {
        let mut kstar = SpCone::psd(2);
        kstar.halfspaces.push(offdiag());
        let s = SumForm::new(kstar, vec![], vec![SymMat::unit(2, 1, 1)]);
        assert_eq!(s.params(), 1);
        assert_eq!(s.member(&offdiag()).unwrap(), Membership::Out(OutReason::Exhausted));
        assert!(s.member(&m(&[&[1, 1], &[1, -7]])).unwrap().is_in());
    }

    #[test]
    fn lines_covering_outside_a_subblock_compress() {
        // PSD(3) + {X : X[{0,1},{0,1}] = 0} = {X : X[{0,1},{0,1}] PSD}
        let lines = vec![SymMat::unit(3, 0, 2), SymMat::unit(3, 1, 2), SymMat::unit(3, 2, 2)];
        let s = SumForm::new(SpCone::psd(3), vec![], lines);
        assert_eq!(s, SumForm::from_base(SpCone::block_psd(3, &[0, 1])));
    }

    #[test]
    fn restrict_by_semidefinite_equation_shrinks_block() {
        let mut kstar = SpCone::psd(2);
        kstar.halfspaces.push(offdiag());
        let r = kstar.restrict(&[SymMat::unit(2, 0, 0)]);
        assert_eq!(r.block, vec![1]);
        let p = r.to_poly().unwrap();
        assert_eq!(p.generators(), &[SymMat::unit(2, 1, 1).to_svec()]);
        // a rank-one kernel that is not a coordinate axis
        let vvt = m(&[&[1, -1], &[-1, 1]]);
        let p = kstar.restrict(&[vvt]).to_poly().unwrap();
        assert_eq!(p.generators(), &[QVec::from_i64(&[1, 1, 1])]);
    }

    #[test]
    fn exposed_face_of_psd_plus_ray() {
        let k = SumForm::new(SpCone::psd(2), vec![offdiag()], vec![]);
        let f = k.exposed_face(&SymMat::unit(2, 1, 1)).unwrap().to_poly().unwrap();
        let want = PolyCone::from_generators(
            &Metric::sym(2),
            &[QVec::from_i64(&[1, 0, 0]), QVec::from_i64(&[0, 1, 0])],
            &[],
        )
        .unwrap();
        assert_eq!(f, want);
    }
}
