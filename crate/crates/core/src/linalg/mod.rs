//! Exact rational linear algebra: vectors, symmetric matrices with the trace
//! inner product, canonical subspaces, and PSD certification.

mod ldl;
pub mod poly;
mod qvec;
mod rat;
mod subspace;
mod symmat;

pub use ldl::{is_psd, psd_check, LdlFactor, PsdVerdict};
pub use qvec::QVec;
pub use rat::{fmt_rat, int, one, parse_rat, rat, zero, Rat};
pub use subspace::{null_space, rank, rref, solve, Metric, Subspace};
pub use symmat::{packed_len, SymMat};

/// Basis vectors `(i, j)` of the packed coordinates of `S^n`, as matrices.
pub fn sym_units(n: usize) -> Vec<SymMat> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            out.push(SymMat::unit(n, i, j));
        }
    }
    out
}

/// Inverse of [`packed_len`]; panics when `d` is not triangular.
pub fn order_of_packed(d: usize) -> usize {
    (0..=d)
        .find(|&n| packed_len(n) == d)
        .expect("packed dimension is triangular")
}
