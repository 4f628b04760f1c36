use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::rat::{fmt_rat, gcd_of_numerators, int, lcm_of_denominators, Rat};
use crate::error::{Error, Result};

/// A vector of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVec(Vec<Rat>);

impl QVec {
    pub fn new(entries: Vec<Rat>) -> Self {
        QVec(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        QVec(entries.iter().map(|&v| int(v)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        QVec(vec![Rat::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = int(1);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rat> {
        self.0
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.0[i]
    }

    pub fn set(&mut self, i: usize, v: Rat) {
        self.0[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn check_dim(&self, d: usize) -> Result<()> {
        if self.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: self.dim(),
            });
        }
        Ok(())
    }

    /// Standard dot product (no metric).
    pub fn dot(&self, other: &QVec) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn add(&self, other: &QVec) -> QVec {
        QVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVec) -> QVec {
        QVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rat) -> QVec {
        QVec(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> QVec {
        QVec(self.0.iter().map(|a| -a).collect())
    }

    /// `self + s * other`
    pub fn axpy(&self, s: &Rat, other: &QVec) -> QVec {
        QVec(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|x| !x.is_zero())
    }

    /// Primitive integer representative of the ray through `self`: cleared
    /// denominators, content 1, first nonzero entry positive. Zero maps to zero.
    pub fn primitive(&self) -> QVec {
        let Some(lead) = self.first_nonzero() else {
            return self.clone();
        };
        let l = lcm_of_denominators(self.0.iter());
        let scaled: Vec<Rat> = self.0.iter().map(|x| x * Rat::from_integer(l.clone())).collect();
        let mut g = gcd_of_numerators(scaled.iter());
        if scaled[lead].is_negative() {
            g = -g;
        }
        let g = Rat::from_integer(g);
        QVec(scaled.into_iter().map(|x| x / &g).collect())
    }

    /// Like [`primitive`](Self::primitive) but keeps the orientation of the
    /// input (only positive rescaling).
    pub fn primitive_ray(&self) -> QVec {
        let p = self.primitive();
        match self.first_nonzero() {
            Some(i) if self.0[i].is_negative() => p.neg(),
            _ => p,
        }
    }

    pub fn sum<'a>(dim: usize, it: impl IntoIterator<Item = &'a QVec>) -> QVec {
        it.into_iter().fold(QVec::zeros(dim), |acc, v| acc.add(v))
    }

    pub fn integer_entries(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|x| x.is_integer().then(|| x.numer().clone()))
            .collect()
    }
}

impl fmt::Debug for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_rat(x))?;
        }
        write!(f, ")")
    }
}
