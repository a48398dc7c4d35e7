//! Deliberately naive reference implementations used to cross-validate the
//! fast paths in tests. Cofactor expansion and quadruple loops only; no code
//! is shared with the implementations they check.

use num_complex::Complex64;
use thiserror::Error;

use crate::block::BlockMat;
use crate::dense::{binomial, ComplexMat, SubsetIndex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("dim {dim} too large for the brute-force oracle (limit {limit})")]
    DimTooLarge { dim: usize, limit: usize },
}

const DET_LAPLACE_MAX_DIM: usize = 8;
const COMPOUND_MAX_SIZE: usize = 64;

/// Determinant by recursive cofactor expansion along the first row.
pub fn det_laplace(a: &ComplexMat) -> Result<Complex64, OracleError> {
    if a.dim() > DET_LAPLACE_MAX_DIM {
        return Err(OracleError::DimTooLarge {
            dim: a.dim(),
            limit: DET_LAPLACE_MAX_DIM,
        });
    }
    Ok(det_rec(a))
}

fn det_rec(a: &ComplexMat) -> Complex64 {
    let d = a.dim();
    if d == 1 {
        return a.get(0, 0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let rest: Vec<usize> = (1..d).collect();
    for j in 0..d {
        let cols: Vec<usize> = (0..d).filter(|&c| c != j).collect();
        let minor = det_rec(&a.submatrix(&rest, &cols));
        let term = a.get(0, j) * minor;
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Compound matrix built entry by entry from cofactor-expansion minors over
/// lexicographically ordered subsets.
pub fn compound_minors(a: &ComplexMat, r: usize) -> Result<ComplexMat, OracleError> {
    let dim = a.dim();
    assert!(r >= 1 && r <= dim, "compound order out of range");
    let size = binomial(dim, r);
    if size > COMPOUND_MAX_SIZE {
        return Err(OracleError::DimTooLarge {
            dim: size,
            limit: COMPOUND_MAX_SIZE,
        });
    }
    let subs = SubsetIndex::enumerate(dim, r);
    let mut out = ComplexMat::zeros(size);
    for (si, s) in subs.iter().enumerate() {
        for (ti, t) in subs.iter().enumerate() {
            let minor = a.submatrix(s.members(), t.members());
            out.set(si, ti, det_laplace(&minor)?);
        }
    }
    Ok(out)
}

/// Realignment by looping all index quadruples: entry `(i*k+l, j*k+m)` of the
/// input lands at `(l*n+i, m*n+j)` of the output.
pub fn realign_bruteforce(h: &BlockMat) -> ComplexMat {
    let n = h.n();
    let k = h.k();
    let d = n * k;
    let mut out = ComplexMat::zeros(d);
    for a in 0..d {
        for b in 0..d {
            let (l, i) = (a / n, a % n);
            let (m, j) = (b / n, b % n);
            out.set(a, b, h.mat().get(i * k + l, j * k + m));
        }
    }
    out
}
