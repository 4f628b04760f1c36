use std::fmt;

use num_traits::Zero;

use super::qvec::QVec;
use super::rat::{fmt_rat, int, Rat};
use crate::error::{Error, Result};

/// Exact symmetric matrix; only the upper triangle is stored, row by row.
/// The packed order is the coordinate order used by [`Metric::sym`].
///
/// [`Metric::sym`]: super::Metric::sym
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymMat {
    n: usize,
    upper: Vec<Rat>,
}

pub fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

fn packed_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

impl SymMat {
    pub fn zero(n: usize) -> Self {
        SymMat {
            n,
            upper: vec![Rat::zero(); packed_len(n)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, int(1));
        }
        m
    }

    /// `E_ij + E_ji` for `i != j`, `E_ii` on the diagonal.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.set(i, j, int(1));
        m
    }

    pub fn diag(d: &[Rat]) -> Self {
        let mut m = Self::zero(d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rat>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zero(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, x) in row.iter().enumerate() {
                if j >= i {
                    m.set(i, j, x.clone());
                } else if *x != *m.get(i, j) {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        Self::from_rows(&rows).expect("symmetric integer literal")
    }

    pub fn from_svec(n: usize, v: &QVec) -> Result<Self> {
        v.check_dim(packed_len(n))?;
        Ok(SymMat {
            n,
            upper: v.entries().to_vec(),
        })
    }

    pub fn to_svec(&self) -> QVec {
        QVec::new(self.upper.clone())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.upper[packed_index(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        let k = packed_index(self.n, i, j);
        self.upper[k] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(|x| x.is_zero())
    }

    fn check_order(&self, other: &SymMat) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Trace inner product `X . Z = sum_{i,j} x_ij z_ij`.
    pub fn inner(&self, other: &SymMat) -> Result<Rat> {
        self.check_order(other)?;
        let mut diag = Rat::zero();
        let mut off = Rat::zero();
        let mut k = 0;
        for i in 0..self.n {
            for j in i..self.n {
                let (a, b) = (&self.upper[k], &other.upper[k]);
                k += 1;
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                if i == j {
                    diag += a * b;
                } else {
                    off += a * b;
                }
            }
        }
        Ok(diag + off * int(2))
    }

    pub fn add(&self, other: &SymMat) -> SymMat {
        assert_eq!(self.n, other.n);
        SymMat {
            n: self.n,
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &SymMat) -> SymMat {
        assert_eq!(self.n, other.n);
        SymMat {
            n: self.n,
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> SymMat {
        SymMat {
            n: self.n,
            upper: self.upper.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul_vec(&self, w: &QVec) -> QVec {
        QVec::new(
            (0..self.n)
                .map(|i| {
                    (0..self.n).fold(Rat::zero(), |acc, j| acc + self.get(i, j) * w.get(j))
                })
                .collect(),
        )
    }

    /// `w^T X w`
    pub fn quad(&self, w: &QVec) -> Rat {
        self.mul_vec(w).dot(w)
    }

    /// Congruence `V^T X V`, with `V` given by its columns.
    pub fn congruence(&self, cols: &[QVec]) -> SymMat {
        let k = cols.len();
        let xv: Vec<QVec> = cols.iter().map(|c| self.mul_vec(c)).collect();
        let mut out = SymMat::zero(k);
        for a in 0..k {
            for b in a..k {
                out.set(a, b, cols[a].dot(&xv[b]));
            }
        }
        out
    }

    /// Lifts a compressed matrix `W` back to `V W V^T`.
    pub fn lift(&self, cols: &[QVec], n: usize) -> SymMat {
        let mut out = SymMat::zero(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Rat::zero();
                for a in 0..self.n {
                    for b in 0..self.n {
                        acc += cols[a].get(i) * self.get(a, b) * cols[b].get(j);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn outer(w: &QVec) -> SymMat {
        let n = w.dim();
        let mut out = SymMat::zero(n);
        for i in 0..n {
            for j in i..n {
                out.set(i, j, w.get(i) * w.get(j));
            }
        }
        out
    }

    /// Principal submatrix on the given (sorted) index set.
    pub fn principal(&self, idx: &[usize]) -> SymMat {
        let mut out = SymMat::zero(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate().skip(a) {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }
}

impl fmt::Debug for SymMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.n).map(|j| fmt_rat(self.get(i, j))).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}
