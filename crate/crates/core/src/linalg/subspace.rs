//! Row reduction and subspace calculus under a diagonal metric.

use num_traits::{One, Zero};

use super::qvec::QVec;
use super::rat::{int, Rat};
use crate::error::{Error, Result};

/// Gauss-Jordan elimination with leading ones. Returns the nonzero rows of
/// the reduced echelon form (pivot columns strictly increasing) and the rank.
pub fn rref(rows: &[QVec]) -> Result<(Vec<QVec>, usize)> {
    let Some(first) = rows.first() else {
        return Ok((Vec::new(), 0));
    };
    let d = first.dim();
    for r in rows {
        r.check_dim(d)?;
    }
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|r| r.entries().to_vec()).collect();
    let mut rank = 0;
    for col in 0..d {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = Rat::one() / &m[rank][col];
        for x in m[rank].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    m.truncate(rank);
    Ok((m.into_iter().map(QVec::new).collect(), rank))
}

pub fn rank(rows: &[QVec]) -> usize {
    rref(rows).map(|(_, r)| r).unwrap_or(0)
}

/// Basis of `{x : row . x = 0 for every row}` (standard dot product).
pub fn null_space(rows: &[QVec], d: usize) -> Result<Vec<QVec>> {
    let (r, _) = rref(rows)?;
    let pivots: Vec<usize> = r.iter().map(|row| row.first_nonzero().unwrap()).collect();
    let mut out = Vec::new();
    for free in (0..d).filter(|c| !pivots.contains(c)) {
        let mut v = QVec::zeros(d);
        v.set(free, int(1));
        for (row, &p) in r.iter().zip(&pivots) {
            v.set(p, -row.get(free).clone());
        }
        out.push(v);
    }
    Ok(out)
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let inv = Rat::one() / &m[col][col];
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[col].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Positive diagonal inner-product weights. `Metric::sym(n)` realizes the
/// trace inner product on the packed upper triangle of `S^n`: off-diagonal
/// coordinates carry weight 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Metric {
    weights: Vec<Rat>,
}

impl Metric {
    pub fn euclidean(d: usize) -> Self {
        Metric {
            weights: vec![int(1); d],
        }
    }

    pub fn sym(n: usize) -> Self {
        let mut weights = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                weights.push(if i == j { int(1) } else { int(2) });
            }
        }
        Metric { weights }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn is_euclidean(&self) -> bool {
        self.weights.iter().all(|w| w.is_one())
    }

    pub fn inner(&self, a: &QVec, b: &QVec) -> Rat {
        self.weights
            .iter()
            .zip(a.entries().iter().zip(b.entries()))
            .fold(Rat::zero(), |acc, (w, (x, y))| acc + w * x * y)
    }

    pub fn norm2(&self, a: &QVec) -> Rat {
        self.inner(a, a)
    }

    /// Covector `W a`, so that `lower(a) . x = <a, x>`.
    pub fn lower(&self, a: &QVec) -> QVec {
        QVec::new(
            a.entries()
                .iter()
                .zip(&self.weights)
                .map(|(x, w)| x * w)
                .collect(),
        )
    }
}

/// A linear subspace stored as a canonical basis: the reduced echelon rows,
/// each rescaled to its primitive integer representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    metric: Metric,
    basis: Vec<QVec>,
}

impl Subspace {
    pub fn span(metric: &Metric, vecs: &[QVec]) -> Result<Self> {
        for v in vecs {
            v.check_dim(metric.dim())?;
        }
        let (rows, _) = rref(vecs)?;
        Ok(Subspace {
            metric: metric.clone(),
            basis: rows.iter().map(QVec::primitive).collect(),
        })
    }

    pub fn zero(metric: &Metric) -> Self {
        Subspace {
            metric: metric.clone(),
            basis: Vec::new(),
        }
    }

    pub fn full(metric: &Metric) -> Self {
        let d = metric.dim();
        Subspace {
            metric: metric.clone(),
            basis: (0..d).map(|i| QVec::unit(d, i)).collect(),
        }
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn ambient_dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QVec] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Residual of `v` after eliminating the pivot coordinates of the basis;
    /// zero iff `v` lies in the subspace.
    fn reduce(&self, v: &QVec) -> QVec {
        let mut r = v.clone();
        for b in &self.basis {
            let p = b.first_nonzero().unwrap();
            if !r.get(p).is_zero() {
                let f = r.get(p) / b.get(p);
                r = r.axpy(&-f, b);
            }
        }
        r
    }

    pub fn contains(&self, v: &QVec) -> bool {
        v.dim() == self.ambient_dim() && self.reduce(v).is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn orth_complement(&self) -> Subspace {
        let d = self.ambient_dim();
        let rows: Vec<QVec> = self.basis.iter().map(|b| self.metric.lower(b)).collect();
        let ns = null_space(&rows, d).expect("dimensions agree");
        Subspace::span(&self.metric, &ns).expect("dimensions agree")
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(&self.metric, &all)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        Ok(self
            .orth_complement()
            .sum(&other.orth_complement())?
            .orth_complement())
    }

    /// Orthogonal projection onto the subspace under its metric.
    pub fn project(&self, v: &QVec) -> Result<QVec> {
        v.check_dim(self.ambient_dim())?;
        let k = self.dim();
        if k == 0 {
            return Ok(QVec::zeros(v.dim()));
        }
        let gram: Vec<Vec<Rat>> = self
            .basis
            .iter()
            .map(|a| self.basis.iter().map(|b| self.metric.inner(a, b)).collect())
            .collect();
        let rhs: Vec<Rat> = self.basis.iter().map(|b| self.metric.inner(b, v)).collect();
        let c = solve(&gram, &rhs).expect("basis is independent");
        Ok(self
            .basis
            .iter()
            .zip(&c)
            .fold(QVec::zeros(v.dim()), |acc, (b, ci)| acc.axpy(ci, b)))
    }

    pub fn check_same_space(&self, other: &Subspace) -> Result<()> {
        if self.metric != other.metric {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        Ok(())
    }
}
