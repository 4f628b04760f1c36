//! Closedness of `M* C*` through feasible directions.
//!
//! For `x` in the relative interior of `C ∩ R(M)`, `M* C*` is closed exactly
//! when `R(M)` avoids `cl dir(x, C) \ dir(x, C)`. Polyhedral `C` has closed
//! direction cones. For `C = PSD(n)` the direction cones are read in a frame
//! `Q = [R | K]` with `R` spanning the range of `x` and `K` its kernel:
//! writing `Ŷ = Q^T Y Q`, `Y ∈ cl dir` iff `Ŷ_22` is PSD, and `Y ∈ dir` iff
//! additionally `range Ŷ_21 ⊆ range Ŷ_22`. Both criteria are backed by
//! explicit certificates: an `ε` with `x + εY` PSD, and the perturbation
//! `Y + δ K K^T` landing in `dir`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{int, null_space, psd_check, rank, rat, Metric, QVec, Rat, Subspace, SymMat};
use crate::polyhedral::PolyCone;
use crate::structured::{restrict_coords, FaceSet, SpCone, SumForm};

/// Largest PSD order handled.
pub const MAX_PSD_ORDER: usize = 3;

/// A linear map `R^m -> space of C`, stored by the images of the unit vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    pub cols: Vec<QVec>,
    pub range: Subspace,
}

impl LinMap {
    pub fn new(metric: &Metric, cols: Vec<QVec>) -> Result<Self> {
        let range = Subspace::span(metric, &cols)?;
        Ok(LinMap { cols, range })
    }

    pub fn domain_dim(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, a: &[Rat]) -> Result<QVec> {
        if a.len() != self.cols.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols.len(),
                found: a.len(),
            });
        }
        let d = self.range.ambient_dim();
        Ok(self
            .cols
            .iter()
            .zip(a)
            .fold(QVec::zeros(d), |acc, (c, s)| acc.axpy(s, c)))
    }

    /// `M* y`: inner products of `y` with the columns.
    pub fn adjoint(&self, y: &QVec) -> QVec {
        let m = self.range.metric();
        QVec::new(self.cols.iter().map(|c| m.inner(c, y)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseCone {
    Polyhedral(PolyCone),
    Psd(usize),
}

impl BaseCone {
    pub fn metric(&self) -> Metric {
        match self {
            BaseCone::Polyhedral(p) => p.metric().clone(),
            BaseCone::Psd(n) => Metric::sym(*n),
        }
    }

    pub fn contains(&self, x: &QVec) -> Result<bool> {
        match self {
            BaseCone::Polyhedral(p) => p.contains(x),
            BaseCone::Psd(n) => Ok(psd_check(&to_mat(*n, x)?).is_psd()),
        }
    }
}

fn to_mat(n: usize, v: &QVec) -> Result<SymMat> {
    SymMat::from_svec(n, v)
}

/// Frame for the PSD direction cones at `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    /// Columns spanning the range of `x`.
    pub range: Vec<QVec>,
    /// Columns spanning the kernel of `x`.
    pub kernel: Vec<QVec>,
}

impl Frame {
    pub fn at(x: &SymMat) -> Result<Frame> {
        let n = x.order();
        let rows: Vec<QVec> = x.rows().into_iter().map(QVec::new).collect();
        let kernel = null_space(&rows, n)?;
        let mut range: Vec<QVec> = vec![];
        for r in rows {
            let mut cand = range.clone();
            cand.push(r.clone());
            if rank(&cand) == cand.len() {
                range = cand;
            }
        }
        Ok(Frame { range, kernel })
    }

    pub fn rank(&self) -> usize {
        self.range.len()
    }

    fn block(y: &SymMat, a: &[QVec], b: &[QVec]) -> Vec<QVec> {
        a.iter()
            .map(|u| {
                let yu = y.mul_vec(u);
                QVec::new(b.iter().map(|v| yu.dot(v)).collect())
            })
            .collect()
    }

    /// `Ŷ_22 = K^T Y K`.
    pub fn y22(&self, y: &SymMat) -> Vec<QVec> {
        Self::block(y, &self.kernel, &self.kernel)
    }

    /// `Ŷ_21 = K^T Y R`.
    pub fn y21(&self, y: &SymMat) -> Vec<QVec> {
        Self::block(y, &self.kernel, &self.range)
    }

    /// `K K^T`, the perturbation used by the closure certificate.
    pub fn kernel_projector(&self, n: usize) -> SymMat {
        self.kernel
            .iter()
            .fold(SymMat::zero(n), |acc, k| acc.add(&SymMat::outer(k)))
    }
}

fn square_to_sym(rows: &[QVec]) -> SymMat {
    let n = rows.len();
    let mut m = SymMat::zero(n);
    for i in 0..n {
        for j in i..n {
            m.set(i, j, rows[i].get(j).clone());
        }
    }
    m
}

/// `range Ŷ_21 ⊆ range Ŷ_22`, by comparing ranks of `[Ŷ_22 | Ŷ_21]` and `Ŷ_22`.
fn range_contained(y22: &[QVec], y21: &[QVec]) -> bool {
    let aug: Vec<QVec> = y22
        .iter()
        .zip(y21)
        .map(|(a, b)| QVec::new(a.entries().iter().chain(b.entries()).cloned().collect()))
        .collect();
    let cols = |rows: &[QVec]| -> Vec<QVec> {
        let w = rows.first().map_or(0, QVec::dim);
        (0..w)
            .map(|j| QVec::new(rows.iter().map(|r| r.get(j).clone()).collect()))
            .collect()
    };
    rank(&cols(&aug)) == rank(&cols(y22))
}

fn check_in(c: &BaseCone, x: &QVec) -> Result<()> {
    if c.contains(x)? {
        Ok(())
    } else {
        Err(Error::NotMember)
    }
}

fn psd_order(c: &BaseCone) -> Result<Option<usize>> {
    match c {
        BaseCone::Polyhedral(_) => Ok(None),
        BaseCone::Psd(n) if *n <= MAX_PSD_ORDER => Ok(Some(*n)),
        BaseCone::Psd(n) => Err(Error::Unsupported(format!("PSD({n}) beyond order {MAX_PSD_ORDER}"))),
    }
}

/// `y ∈ dir(x, C)`.
pub fn dir_member(c: &BaseCone, x: &QVec, y: &QVec) -> Result<bool> {
    check_in(c, x)?;
    match c {
        BaseCone::Polyhedral(p) => {
            let m = p.metric();
            let eqs_ok = p.equations().basis().iter().all(|e| m.inner(e, y).is_zero());
            let active_ok = p
                .inequalities()
                .iter()
                .filter(|a| m.inner(a, x).is_zero())
                .all(|a| !m.inner(a, y).is_negative());
            Ok(eqs_ok && active_ok)
        }
        BaseCone::Psd(n) => {
            let (xm, ym) = (to_mat(*n, x)?, to_mat(*n, y)?);
            let fr = Frame::at(&xm)?;
            let y22 = fr.y22(&ym);
            Ok(psd_check(&square_to_sym(&y22)).is_psd() && range_contained(&y22, &fr.y21(&ym)))
        }
    }
}

/// `y ∈ cl dir(x, C)`.
pub fn cl_dir_member(c: &BaseCone, x: &QVec, y: &QVec) -> Result<bool> {
    check_in(c, x)?;
    match c {
        BaseCone::Polyhedral(_) => dir_member(c, x, y),
        BaseCone::Psd(n) => {
            let (xm, ym) = (to_mat(*n, x)?, to_mat(*n, y)?);
            let fr = Frame::at(&xm)?;
            Ok(psd_check(&square_to_sym(&fr.y22(&ym))).is_psd())
        }
    }
}

/// A rational `ε > 0` with `x + εy ∈ C`, searched along `1, 1/2, 1/4, ...`.
pub fn dir_epsilon(c: &BaseCone, x: &QVec, y: &QVec) -> Result<Option<Rat>> {
    check_in(c, x)?;
    let mut eps = int(1);
    for _ in 0..128 {
        if c.contains(&x.axpy(&eps, y))? {
            return Ok(Some(eps));
        }
        eps = eps / int(2);
    }
    Ok(None)
}

/// `y + δ K K^T`, which lies in `dir(x, C)` for every `δ > 0` when `y ∈ cl dir`.
pub fn closure_perturbation(n: usize, x: &QVec, y: &QVec, delta: &Rat) -> Result<QVec> {
    let fr = Frame::at(&to_mat(n, x)?)?;
    Ok(y.axpy(delta, &fr.kernel_projector(n).to_svec()))
}

/// Coefficients tried when combining a basis of `R(M)` in search of an
/// interior point.
fn grid() -> [Rat; 5] {
    [int(1), int(-1), int(2), int(-2), rat(1, 2)]
}

/// A point of `ri(C ∩ R(M))`.
pub fn ri_base_point(c: &BaseCone, m: &LinMap) -> Result<QVec> {
    if m.range.metric() != &c.metric() {
        return Err(Error::DimensionMismatch {
            expected: c.metric().dim(),
            found: m.range.ambient_dim(),
        });
    }
    match c {
        BaseCone::Polyhedral(p) => {
            let r = PolyCone::from_generators(p.metric(), &[], m.range.basis())?;
            Ok(p.intersect(&r)?.ri_point())
        }
        BaseCone::Psd(_) => {
            let n = psd_order(c)?.expect("psd");
            psd_ri_base_point(n, &m.range)
        }
    }
}

fn psd_ri_base_point(n: usize, range: &Subspace) -> Result<QVec> {
    // Slater point: a positive definite element of R(M) is in ri
    let basis = range.basis();
    if basis.len() <= 6 {
        let g = grid();
        let mut idx = vec![0usize; basis.len()];
        'outer: loop {
            let v = basis
                .iter()
                .zip(&idx)
                .fold(QVec::zeros(range.ambient_dim()), |acc, (b, &i)| acc.axpy(&g[i], b));
            if psd_check(&to_mat(n, &v)?).rank() == Some(n) {
                return Ok(v);
            }
            for p in 0..idx.len() {
                if idx[p] + 1 < g.len() {
                    idx[p] += 1;
                    continue 'outer;
                }
                idx[p] = 0;
            }
            break;
        }
    }
    let eqs: Vec<SymMat> = range
        .orth_complement()
        .basis()
        .iter()
        .map(|v| to_mat(n, v))
        .collect::<Result<_>>()?;
    let face = FaceSet::from_form(restrict_coords(&SumForm::from_base(SpCone::psd(n)), &eqs)?);
    let x = face
        .ri_point()
        .ok_or_else(|| Error::Undecided("relative interior point of PSD ∩ R(M)".into()))?;
    let xv = x.to_svec();
    if !range.contains(&xv) || !psd_check(&x).is_psd() {
        return Err(Error::InvariantBreach("base point outside PSD ∩ R(M)".into()));
    }
    Ok(xv)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageClosedness {
    pub closed: bool,
    /// The base point in `ri(C ∩ R(M))`.
    pub x: QVec,
    /// An element of `R(M) ∩ (cl dir \ dir)` when not closed.
    pub witness: Option<QVec>,
}

/// Decides whether `M* C*` is closed.
pub fn image_dual_closed(c: &BaseCone, m: &LinMap) -> Result<ImageClosedness> {
    let x = ri_base_point(c, m)?;
    let n = match c {
        BaseCone::Polyhedral(_) => {
            return Ok(ImageClosedness {
                closed: true,
                x,
                witness: None,
            })
        }
        BaseCone::Psd(n) => *n,
    };
    let fr = Frame::at(&to_mat(n, &x)?)?;
    let witness = if fr.rank() == 0 || fr.kernel.is_empty() {
        None
    } else {
        find_violation(n, &fr, &m.range)?
    };
    if let Some(w) = &witness {
        let ok = m.range.contains(w) && cl_dir_member(c, &x, w)? && !dir_member(c, &x, w)?;
        if !ok {
            return Err(Error::InvariantBreach("closedness witness failed re-verification".into()));
        }
    }
    Ok(ImageClosedness {
        closed: witness.is_none(),
        x,
        witness,
    })
}

/// Packed `Ŷ_22` as a vector, for linear algebra over `R(M)`.
fn y22_vec(fr: &Frame, y: &SymMat) -> QVec {
    let b = fr.y22(y);
    let s = b.len();
    QVec::new((0..s).flat_map(|i| (i..s).map(move |j| (i, j))).map(|(i, j)| b[i].get(j).clone()).collect())
}

/// Basis of `{Y ∈ V : Ŷ_22 ∈ span(t)}` (`t = None` for `Ŷ_22 = 0`).
fn preimage(n: usize, fr: &Frame, v: &Subspace, t: Option<&QVec>) -> Result<Vec<SymMat>> {
    let basis: Vec<SymMat> = v.basis().iter().map(|b| to_mat(n, b)).collect::<Result<_>>()?;
    if basis.is_empty() {
        return Ok(vec![]);
    }
    let imgs: Vec<QVec> = basis.iter().map(|b| y22_vec(fr, b)).collect();
    let p = imgs[0].dim();
    // unknowns: coefficients of the basis, then the multiple of t
    let extra = usize::from(t.is_some());
    let rows: Vec<QVec> = (0..p)
        .map(|r| {
            let mut e: Vec<Rat> = imgs.iter().map(|im| im.get(r).clone()).collect();
            if let Some(t) = t {
                e.push(-t.get(r).clone());
            }
            QVec::new(e)
        })
        .collect();
    let sol = null_space(&rows, basis.len() + extra)?;
    Ok(sol
        .iter()
        .map(|c| {
            basis
                .iter()
                .zip(c.entries())
                .fold(SymMat::zero(n), |acc, (b, s)| acc.add(&b.scale(s)))
        })
        .filter(|y| !y.is_zero())
        .collect())
}

/// Rank-one PSD directions `w w^T` in the image `{Ŷ_22 : Y ∈ V}`. With `x`
/// of maximal rank this image holds no definite matrix, so its PSD part is
/// `{0}` or a single rational ray.
fn rank_one_rays(n: usize, fr: &Frame, v: &Subspace) -> Result<Vec<QVec>> {
    let s = fr.kernel.len();
    let imgs: Vec<QVec> = v
        .basis()
        .iter()
        .map(|b| Ok(y22_vec(fr, &to_mat(n, b)?)))
        .collect::<Result<_>>()?;
    let w = match Subspace::span(&Metric::euclidean(imgs.first().map_or(1, QVec::dim)), &imgs) {
        Ok(w) => w,
        Err(_) => return Ok(vec![]),
    };
    let basis = w.basis();
    let to_sq = |q: &QVec| -> SymMat {
        let mut m = SymMat::zero(s);
        let mut k = 0;
        for i in 0..s {
            for j in i..s {
                m.set(i, j, q.get(k).clone());
                k += 1;
            }
        }
        m
    };
    let mut cands: Vec<QVec> = vec![];
    match (s, basis.len()) {
        (1, _) | (_, 0) => {}
        (2, 1) => cands.push(basis[0].clone()),
        (2, 2) => {
            // det(a A + b B) = α a^2 + β ab + γ b^2 vanishes on rational lines
            let (a, b) = (to_sq(&basis[0]), to_sq(&basis[1]));
            let det = |m: &SymMat| m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(0, 1);
            let alpha = det(&a);
            let gamma = det(&b);
            let beta = det(&a.add(&b)) - &alpha - &gamma;
            for (p, q) in rational_roots(&alpha, &beta, &gamma) {
                cands.push(basis[0].scale(&p).add(&basis[1].scale(&q)));
            }
        }
        _ => return Err(Error::Unsupported("kernel of order above 2".into())),
    }
    let mut out = vec![];
    for c in cands {
        let m = to_sq(&c);
        if m.is_zero() {
            continue;
        }
        let pos = psd_check(&m);
        let neg = psd_check(&m.scale(&int(-1)));
        if pos.rank() == Some(1) {
            out.push(c);
        } else if neg.rank() == Some(1) {
            out.push(c.neg());
        }
    }
    Ok(out)
}

/// Rational `(p, q) != 0` with `α p^2 + β pq + γ q^2 = 0`, one per line.
fn rational_roots(alpha: &Rat, beta: &Rat, gamma: &Rat) -> Vec<(Rat, Rat)> {
    if alpha.is_zero() && beta.is_zero() && gamma.is_zero() {
        return vec![];
    }
    let mut out = vec![];
    if alpha.is_zero() {
        // q (β p + γ q) = 0
        out.push((int(1), int(0)));
        if !beta.is_zero() {
            out.push((-gamma.clone(), beta.clone()));
        }
        return out;
    }
    // roots of α r^2 + β r + γ with p = r, q = 1
    let disc = beta * beta - int(4) * alpha * gamma;
    if disc.is_negative() {
        return out;
    }
    if let Some(sq) = rational_sqrt(&disc) {
        let two_a = int(2) * alpha;
        out.push(((-beta + &sq) / &two_a, int(1)));
        if !sq.is_zero() {
            out.push(((-beta - &sq) / &two_a, int(1)));
        }
    }
    out
}

fn rational_sqrt(r: &Rat) -> Option<Rat> {
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rat::new(sn, sd))
}

fn find_violation(n: usize, fr: &Frame, v: &Subspace) -> Result<Option<QVec>> {
    let breaks_range = |y: &SymMat, u: Option<&QVec>| -> bool {
        let y21 = fr.y21(y);
        match u {
            None => y21.iter().any(|r| !r.is_zero()),
            Some(u) => {
                // u^T Ŷ_21 != 0
                let w = y21.first().map_or(0, QVec::dim);
                (0..w).any(|j| {
                    !y21.iter()
                        .zip(u.entries())
                        .fold(Rat::zero(), |acc, (r, c)| acc + r.get(j) * c)
                        .is_zero()
                })
            }
        }
    };
    // Ŷ_22 = 0
    for y in preimage(n, fr, v, None)? {
        if breaks_range(&y, None) {
            return Ok(Some(y.to_svec()));
        }
    }
    // Ŷ_22 on a rank-one ray w w^T; violation needs u^T Ŷ_21 != 0 for u ⊥ w
    for t in rank_one_rays(n, fr, v)? {
        let w = if t.get(0).is_zero() {
            QVec::new(vec![int(0), int(1)])
        } else {
            QVec::new(vec![t.get(0).clone(), t.get(1).clone()])
        };
        let u = QVec::new(vec![-w.get(1).clone(), w.get(0).clone()]);
        for y in preimage(n, fr, v, Some(&t))? {
            if breaks_range(&y, Some(&u)) {
                let lam_neg = {
                    let y22 = y22_vec(fr, &y);
                    y22.entries().iter().zip(t.entries()).any(|(a, b)| !b.is_zero() && (a / b).is_negative())
                };
                let y = if lam_neg { y.scale(&int(-1)) } else { y };
                return Ok(Some(y.to_svec()));
            }
        }
    }
    Ok(None)
}
