//! Dense complex square matrices: products, Kronecker/tensor powers,
//! compound (minor) powers, determinants and a Hermitian eigensolver.

use num_complex::Complex64;
use thiserror::Error;

use crate::tol::Tolerance;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DenseError {
    #[error("matrix dimension must be at least 1")]
    ZeroDim,
    #[error("entry count {got} does not match dim^2 = {expected}")]
    EntryCount { expected: usize, got: usize },
    #[error("tensor power order must be at least 1")]
    ZeroTensorPower,
    #[error("compound order {r} outside [1, {dim}]")]
    CompoundOrderOutOfRange { r: usize, dim: usize },
    #[error(
        "matrix is not Hermitian: deviation {deviation:.3e} exceeds tolerance {tolerance:.3e}"
    )]
    NotHermitian { deviation: f64, tolerance: f64 },
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
}

/// Dense square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMat {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMat {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        ComplexMat {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self, DenseError> {
        if dim == 0 {
            return Err(DenseError::ZeroDim);
        }
        if entries.len() != dim * dim {
            return Err(DenseError::EntryCount {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(ComplexMat { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.entries[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Real entries given row-major; imaginary parts zero.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self, DenseError> {
        Self::from_entries(
            dim,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn transpose(&self) -> ComplexMat {
        ComplexMat::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn conj_transpose(&self) -> ComplexMat {
        ComplexMat::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, rhs: &ComplexMat) -> ComplexMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        ComplexMat {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &ComplexMat) -> ComplexMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        ComplexMat {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> ComplexMat {
        ComplexMat {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &ComplexMat) -> ComplexMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matmul");
        let d = self.dim;
        let mut out = ComplexMat::zeros(d);
        for i in 0..d {
            for t in 0..d {
                let a = self.entries[i * d + t];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.entries[i * d + j] += a * rhs.entries[t * d + j];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest absolute value of any entry.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `max_ij |a_ij - conj(a_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                dev = dev.max(d);
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: &Tolerance) -> bool {
        self.hermitian_deviation() <= tol.bound(self.max_abs())
    }

    /// `(A + A*) / 2`.
    pub fn hermitianize(&self) -> ComplexMat {
        ComplexMat::from_fn(self.dim, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })
    }

    /// Submatrix indexed by the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ComplexMat {
        assert!(!rows.is_empty() && rows.len() == cols.len());
        let r = rows.len();
        let mut out = ComplexMat::zeros(r);
        for (oi, &i) in rows.iter().enumerate() {
            for (oj, &j) in cols.iter().enumerate() {
                out.entries[oi * r + oj] = self.get(i, j);
            }
        }
        out
    }
}

/// Strictly increasing subset of `{0, .., dim-1}`, used to index compound
/// matrix rows and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetIndex {
    members: Vec<usize>,
}

impl SubsetIndex {
    pub fn new(members: Vec<usize>) -> Option<Self> {
        if members.is_empty() || members.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        Some(SubsetIndex { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// All r-subsets of `{0, .., dim-1}` in lexicographic order.
    pub fn enumerate(dim: usize, r: usize) -> Vec<SubsetIndex> {
        assert!(r >= 1 && r <= dim);
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..r).collect();
        loop {
            out.push(SubsetIndex {
                members: cur.clone(),
            });
            // advance to the next subset in lex order
            let mut i = r;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] != i + dim - r {
                    break;
                }
                if i == 0 {
                    return out;
                }
            }
            cur[i] += 1;
            for j in i + 1..r {
                cur[j] = cur[j - 1] + 1;
            }
        }
    }
}

/// Binomial coefficient at desk scale.
pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: usize = 1;
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Kronecker (tensor) product. Entry at block `(i,j)`, inner `(l,m)` is
/// `a[i,j] * b[l,m]`.
pub fn kron(a: &ComplexMat, b: &ComplexMat) -> ComplexMat {
    let da = a.dim();
    let db = b.dim();
    let d = da * db;
    let mut out = ComplexMat::zeros(d);
    for i in 0..da {
        for j in 0..da {
            let aij = a.get(i, j);
            for l in 0..db {
                for m in 0..db {
                    out.entries[(i * db + l) * d + (j * db + m)] = aij * b.get(l, m);
                }
            }
        }
    }
    out
}

/// r-fold Kronecker power, left associated: `kron(kron(a, a), a) ...`.
pub fn tensor_power(a: &ComplexMat, r: usize) -> Result<ComplexMat, DenseError> {
    if r == 0 {
        return Err(DenseError::ZeroTensorPower);
    }
    let mut acc = a.clone();
    for _ in 1..r {
        acc = kron(&acc, a);
    }
    Ok(acc)
}

/// r-th multiplicative compound: the matrix of r x r minors indexed by
/// lexicographically ordered r-subsets of rows and columns.
pub fn compound(a: &ComplexMat, r: usize) -> Result<ComplexMat, DenseError> {
    let dim = a.dim();
    if r == 0 || r > dim {
        return Err(DenseError::CompoundOrderOutOfRange { r, dim });
    }
    let subs = SubsetIndex::enumerate(dim, r);
    let m = subs.len();
    let mut out = ComplexMat::zeros(m);
    for (si, s) in subs.iter().enumerate() {
        for (ti, t) in subs.iter().enumerate() {
            out.entries[si * m + ti] = det(&a.submatrix(s.members(), t.members()));
        }
    }
    Ok(out)
}

/// Determinant via LU with partial pivoting; row-swap parity tracked in the
/// sign. An exactly zero pivot column short-circuits to 0.
pub fn det(a: &ComplexMat) -> Complex64 {
    let d = a.dim();
    let mut m = a.entries.clone();
    let mut sign = 1.0;
    for col in 0..d {
        let mut piv = col;
        let mut best = m[col * d + col].norm_sqr();
        for row in col + 1..d {
            let v = m[row * d + col].norm_sqr();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            for j in 0..d {
                m.swap(col * d + j, piv * d + j);
            }
            sign = -sign;
        }
        let pivot = m[col * d + col];
        for row in col + 1..d {
            let factor = m[row * d + col] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in col + 1..d {
                let upd = factor * m[col * d + j];
                m[row * d + j] -= upd;
            }
        }
    }
    let mut acc = Complex64::new(sign, 0.0);
    for i in 0..d {
        acc *= m[i * d + i];
    }
    acc
}

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TARGET: f64 = 1e-14;

/// All eigenvalues of a Hermitian matrix, ascending, via cyclic Jacobi
/// sweeps with complex plane rotations. The iteration stops once the
/// off-diagonal Frobenius norm falls below `1e-14 * ||a||_F`.
pub fn eig_hermitian(a: &ComplexMat) -> Result<Vec<f64>, DenseError> {
    let tol = Tolerance::default();
    let dev = a.hermitian_deviation();
    let herm_bound = tol.bound(a.max_abs());
    if dev > herm_bound {
        return Err(DenseError::NotHermitian {
            deviation: dev,
            tolerance: herm_bound,
        });
    }
    let d = a.dim();
    let w = a.hermitianize();
    let fro = w.frobenius_norm();
    if fro == 0.0 {
        return Ok(vec![0.0; d]);
    }
    let target = JACOBI_OFF_TARGET * fro;
    let mut m = w.entries;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    off += m[i * d + j].norm_sqr();
                }
            }
        }
        if off.sqrt() <= target {
            let mut eigs: Vec<f64> = (0..d).map(|i| m[i * d + i].re).collect();
            eigs.sort_by(f64::total_cmp);
            return Ok(eigs);
        }
        for p in 0..d {
            for q in p + 1..d {
                jacobi_rotate(&mut m, d, p, q);
            }
        }
    }
    Err(DenseError::NoConvergence {
        sweeps: JACOBI_MAX_SWEEPS,
    })
}

/// One complex Jacobi rotation zeroing the (p, q) entry of the Hermitian
/// working matrix: `A <- J* A J` with `J = [[c, -s e^{i phi}], [s e^{-i phi}, c]]`
/// in the (p, q) plane, where `a_pq = |a_pq| e^{i phi}`.
fn jacobi_rotate(m: &mut [Complex64], d: usize, p: usize, q: usize) {
    let beta = m[p * d + q];
    let b = beta.norm();
    if b == 0.0 {
        return;
    }
    let phase = beta / b;
    let alpha = m[p * d + p].re;
    let gamma = m[q * d + q].re;
    let diff = alpha - gamma;
    // smaller-magnitude root of  b t^2 + (alpha - gamma) t - b = 0
    let t = if diff == 0.0 {
        1.0
    } else {
        diff.signum() * 2.0 * b / (diff.abs() + diff.hypot(2.0 * b))
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let sp = phase * s; // s e^{i phi}
    let spc = phase.conj() * s; // s e^{-i phi}

    // column update: A <- A J
    for i in 0..d {
        let aip = m[i * d + p];
        let aiq = m[i * d + q];
        m[i * d + p] = aip * c + aiq * spc;
        m[i * d + q] = aiq * c - aip * sp;
    }
    // row update: A <- J* A
    for j in 0..d {
        let apj = m[p * d + j];
        let aqj = m[q * d + j];
        m[p * d + j] = apj * c + aqj * sp;
        m[q * d + j] = aqj * c - apj * spc;
    }
    m[p * d + q] = Complex64::new(0.0, 0.0);
    m[q * d + p] = Complex64::new(0.0, 0.0);
    m[p * d + p] = Complex64::new(m[p * d + p].re, 0.0);
    m[q * d + q] = Complex64::new(m[q * d + q].re, 0.0);
}

/// Smallest eigenvalue of the Hermitianized difference `(a - b + (a - b)*)/2`.
/// A value `>= -tol` certifies `a >= b` in the Loewner order numerically.
pub fn loewner_margin(a: &ComplexMat, b: &ComplexMat) -> Result<f64, DenseError> {
    if a.dim() != b.dim() {
        return Err(DenseError::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let tol = Tolerance::default();
    for m in [a, b] {
        let dev = m.hermitian_deviation();
        let bound = tol.bound(m.max_abs());
        if dev > bound {
            return Err(DenseError::NotHermitian {
                deviation: dev,
                tolerance: bound,
            });
        }
    }
    let diff = a.sub(b).hermitianize();
    let eigs = eig_hermitian(&diff)?;
    Ok(eigs[0])
}
