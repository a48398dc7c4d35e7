//! Block-structured views of square matrices: partial traces, partial
//! determinants, the realignment map, its commutation permutation and the
//! tensor-power selection embedding.
//!
//! A [`BlockMat`] is an `nk x nk` matrix read as an `n x n` array of `k x k`
//! blocks `H_ij`. Realignment swaps the roles of the outer and inner indices:
//! the realigned matrix lives in `M_k(M_n)` and its `(l, m)` block `G_lm`
//! collects the `(l, m)` entries of every block of the original, i.e.
//! `(G_lm)_ij = (H_ij)_lm`.

use num_complex::Complex64;
use thiserror::Error;

use crate::dense::{det, ComplexMat};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlockError {
    #[error("block dims must be at least 1, got n={n}, k={k}")]
    ZeroBlockDim { n: usize, k: usize },
    #[error("matrix dim {dim} does not equal n*k = {n}*{k}")]
    ShapeMismatch { dim: usize, n: usize, k: usize },
    #[error("block structure mismatch: ({0}, {1}) vs ({2}, {3})", .left.0, .left.1, .right.0, .right.1)]
    BlockDimMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("tensor order must be at least 1")]
    ZeroOrder,
    #[error("dimension cap exceeded: ({nk})^{r} > {cap}")]
    CapExceeded { nk: usize, r: usize, cap: usize },
}

/// Which partial map: side 1 acts across the outer (block) index and lands in
/// `M_k`; side 2 acts inside blocks and lands in `M_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    One,
    Two,
}

impl Side {
    pub fn as_u8(self) -> u8 {
        match self {
            Side::One => 1,
            Side::Two => 2,
        }
    }

    pub fn from_u8(v: u8) -> Option<Side> {
        match v {
            1 => Some(Side::One),
            2 => Some(Side::Two),
            _ => None,
        }
    }
}

/// A square matrix of dim `n*k` viewed as `n x n` blocks of size `k x k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMat {
    n: usize,
    k: usize,
    mat: ComplexMat,
}

impl BlockMat {
    pub fn new(n: usize, k: usize, mat: ComplexMat) -> Result<Self, BlockError> {
        if n == 0 || k == 0 {
            return Err(BlockError::ZeroBlockDim { n, k });
        }
        if mat.dim() != n * k {
            return Err(BlockError::ShapeMismatch {
                dim: mat.dim(),
                n,
                k,
            });
        }
        Ok(BlockMat { n, k, mat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn mat(&self) -> &ComplexMat {
        &self.mat
    }

    pub fn into_mat(self) -> ComplexMat {
        self.mat
    }

    /// The `k x k` block `H_ij` (0-based block indices).
    pub fn block(&self, i: usize, j: usize) -> ComplexMat {
        assert!(i < self.n && j < self.n, "block index out of range");
        let k = self.k;
        ComplexMat::from_fn(k, |l, m| self.mat.get(i * k + l, j * k + m))
    }

    pub fn add(&self, rhs: &BlockMat) -> Result<BlockMat, BlockError> {
        if self.n != rhs.n || self.k != rhs.k {
            return Err(BlockError::BlockDimMismatch {
                left: (self.n, self.k),
                right: (rhs.n, rhs.k),
            });
        }
        Ok(BlockMat {
            n: self.n,
            k: self.k,
            mat: self.mat.add(&rhs.mat),
        })
    }
}

/// Realignment: swaps outer and inner indices. Entry `(l*n + i, m*n + j)` of
/// the result equals entry `(i*k + l, j*k + m)` of the input. Pure entry
/// permutation, hence bit-exact and an involution. The result is a block
/// matrix in `M_k(M_n)`.
pub fn realign(h: &BlockMat) -> BlockMat {
    let n = h.n;
    let k = h.k;
    let d = n * k;
    let mut out = ComplexMat::zeros(d);
    for i in 0..n {
        for j in 0..n {
            for l in 0..k {
                for m in 0..k {
                    out.set(l * n + i, m * n + j, h.mat.get(i * k + l, j * k + m));
                }
            }
        }
    }
    BlockMat {
        n: k,
        k: n,
        mat: out,
    }
}

/// Partial trace. Side 1: sum of the diagonal blocks, a `k x k` matrix.
/// Side 2: blockwise traces `[tr H_ij]`, an `n x n` matrix.
pub fn partial_trace(h: &BlockMat, side: Side) -> ComplexMat {
    let n = h.n;
    let k = h.k;
    match side {
        Side::One => {
            let mut out = ComplexMat::zeros(k);
            for l in 0..k {
                for m in 0..k {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        acc += h.mat.get(i * k + l, i * k + m);
                    }
                    out.set(l, m, acc);
                }
            }
            out
        }
        Side::Two => ComplexMat::from_fn(n, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..k {
                acc += h.mat.get(i * k + l, j * k + l);
            }
            acc
        }),
    }
}

/// Partial determinant. Side 2: blockwise determinants `[det H_ij]`, an
/// `n x n` matrix. Side 1: blockwise determinants of the realigned matrix,
/// `[det G_lm]`, a `k x k` matrix.
pub fn partial_det(h: &BlockMat, side: Side) -> ComplexMat {
    match side {
        Side::One => partial_det(&realign(h), Side::Two),
        Side::Two => ComplexMat::from_fn(h.n, |i, j| det(&h.block(i, j))),
    }
}

/// The permutation matrix `P(n, k)` of order `nk` with
/// `P^T * H * P = realign(H)` for every `H` in `M_n(M_k)`; equivalently
/// `P^T (A (x) B) P = B (x) A` for `A` of dim `n` and `B` of dim `k`.
pub fn commutation_matrix(n: usize, k: usize) -> ComplexMat {
    assert!(n >= 1 && k >= 1);
    let d = n * k;
    let mut p = ComplexMat::zeros(d);
    // column a = l*n + i carries its 1 in row i*k + l
    for l in 0..k {
        for i in 0..n {
            p.set(i * k + l, l * n + i, Complex64::new(1.0, 0.0));
        }
    }
    debug_assert!(commutation_self_check(&p, n, k));
    p
}

/// Orientation self-check against realign on a deterministic asymmetric
/// probe; index-convention bugs are the dominant risk here.
fn commutation_self_check(p: &ComplexMat, n: usize, k: usize) -> bool {
    let d = n * k;
    let probe = ComplexMat::from_fn(d, |i, j| {
        Complex64::new((i * d + j) as f64 + 1.0, i as f64 - 2.0 * j as f64)
    });
    let h = BlockMat::new(n, k, probe.clone()).unwrap();
    let expected = realign(&h);
    let conjugated = p.conj_transpose().matmul(&probe).matmul(p);
    conjugated == *expected.mat()
}

const DEFAULT_DIM_CAP: usize = 4096;

/// Column-selection embedding `E = [ (x)^r E_1, ..., (x)^r E_n ]` where `E_j`
/// picks the j-th block of rows. Satisfies
/// `E* ((x)^r H) E = [ (x)^r H_ij ]_{i,j=1..n}`; each column of `E` is a
/// standard basis vector of the `(nk)^r`-dimensional tensor space, so the
/// embedding is kept as a column-to-row index list and never materialized
/// densely.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionEmbedding {
    n: usize,
    k: usize,
    r: usize,
    rows: Vec<usize>,
}

impl SelectionEmbedding {
    pub fn new(n: usize, k: usize, r: usize) -> Result<Self, BlockError> {
        Self::with_cap(n, k, r, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(n: usize, k: usize, r: usize, cap: usize) -> Result<Self, BlockError> {
        if n == 0 || k == 0 {
            return Err(BlockError::ZeroBlockDim { n, k });
        }
        if r == 0 {
            return Err(BlockError::ZeroOrder);
        }
        let nk = n * k;
        match nk.checked_pow(r as u32) {
            Some(total) if total <= cap => {}
            _ => return Err(BlockError::CapExceeded { nk, r, cap }),
        }
        // column (j, c_0..c_{r-1}) of E selects tensor coordinate
        // sum_t (j*k + c_t) * (nk)^(r-1-t)
        let kr = k.pow(r as u32);
        let mut rows = Vec::with_capacity(n * kr);
        for j in 0..n {
            for c in 0..kr {
                let mut row = 0usize;
                let mut rem = c;
                let mut digits = vec![0usize; r];
                for t in (0..r).rev() {
                    digits[t] = rem % k;
                    rem /= k;
                }
                for digit in digits {
                    row = row * nk + (j * k + digit);
                }
                rows.push(row);
            }
        }
        Ok(SelectionEmbedding { n, k, r, rows })
    }

    pub fn order(&self) -> usize {
        self.r
    }

    /// Row index of the single 1 in each column, in column order.
    pub fn column_rows(&self) -> &[usize] {
        &self.rows
    }

    /// Dimension of the extracted matrix, `n * k^r`.
    pub fn extracted_dim(&self) -> usize {
        self.rows.len()
    }

    /// `E* ((x)^r H) E`, the `n x n` block matrix with blocks `(x)^r H_ij`.
    ///
    /// Each entry of the tensor power is a product of `r` entries of `H`,
    /// multiplied left to right in digit order; this matches the iterated
    /// Kronecker product bit for bit, so no dense tensor power is formed.
    pub fn extract(&self, h: &BlockMat) -> Result<ComplexMat, BlockError> {
        if h.n() != self.n || h.k() != self.k {
            return Err(BlockError::BlockDimMismatch {
                left: (self.n, self.k),
                right: (h.n(), h.k()),
            });
        }
        let nk = self.n * self.k;
        let d = self.extracted_dim();
        let mut out = ComplexMat::zeros(d);
        for a in 0..d {
            for bcol in 0..d {
                let mut x = self.rows[a];
                let mut y = self.rows[bcol];
                // decode base-(nk) digits most significant first
                let mut xd = vec![0usize; self.r];
                let mut yd = vec![0usize; self.r];
                for t in (0..self.r).rev() {
                    xd[t] = x % nk;
                    yd[t] = y % nk;
                    x /= nk;
                    y /= nk;
                }
                let mut acc = h.mat().get(xd[0], yd[0]);
                for t in 1..self.r {
                    acc *= h.mat().get(xd[t], yd[t]);
                }
                out.set(a, bcol, acc);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{kron, tensor_power};

    fn mmat() -> ComplexMat {
        ComplexMat::from_real(2, &[2.0, 1.0, 1.0, 2.0]).unwrap()
    }

    fn kron_m_i2() -> BlockMat {
        BlockMat::new(2, 2, kron(&mmat(), &ComplexMat::identity(2))).unwrap()
    }

    #[test]
    fn block_accessor_entry_identity() {
        let h = kron_m_i2();
        // H_01 = 1 * I2
        assert_eq!(h.block(0, 1), ComplexMat::identity(2));
        // h^{i,j}_{l,m} = mat[(i*k + l, j*k + m)]
        assert_eq!(h.block(1, 0).get(1, 1), h.mat().get(2 + 1, 1));
    }

    #[test]
    fn new_rejects_bad_shape() {
        let m = ComplexMat::identity(5);
        assert!(matches!(
            BlockMat::new(2, 2, m),
            Err(BlockError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            BlockMat::new(0, 2, ComplexMat::identity(2)),
            Err(BlockError::ZeroBlockDim { .. })
        ));
    }

    #[test]
    fn realign_identity_and_kron() {
        let id = BlockMat::new(3, 2, ComplexMat::identity(6)).unwrap();
        assert_eq!(realign(&id).mat(), &ComplexMat::identity(6));

        // realign(kron(M, I2)) = kron(I2, M), frozen
        let h = kron_m_i2();
        let got = realign(&h);
        let expected = ComplexMat::from_real(
            4,
            &[
                2.0, 1.0, 0.0, 0.0, //
                1.0, 2.0, 0.0, 0.0, //
                0.0, 0.0, 2.0, 1.0, //
                0.0, 0.0, 1.0, 2.0,
            ],
        )
        .unwrap();
        assert_eq!(got.mat(), &expected);
        assert_eq!(got.mat(), &kron(&ComplexMat::identity(2), &mmat()));
        assert_eq!(got.n(), 2);
        assert_eq!(got.k(), 2);
    }

    #[test]
    fn realign_is_involution_bit_exact() {
        let mat = ComplexMat::from_fn(6, |i, j| {
            Complex64::new(
                0.37 * (i * 6 + j) as f64,
                1.7 - (i as f64) * 0.3 + (j as f64),
            )
        });
        let h = BlockMat::new(3, 2, mat).unwrap();
        let back = realign(&realign(&h));
        assert_eq!(back, h);
    }

    #[test]
    fn partial_trace_identity_and_hand_case() {
        let id = BlockMat::new(3, 2, ComplexMat::identity(6)).unwrap();
        assert_eq!(
            partial_trace(&id, Side::One),
            ComplexMat::identity(2).scale(Complex64::new(3.0, 0.0))
        );
        assert_eq!(
            partial_trace(&id, Side::Two),
            ComplexMat::identity(3).scale(Complex64::new(2.0, 0.0))
        );

        let h = kron_m_i2();
        assert_eq!(
            partial_trace(&h, Side::Two),
            ComplexMat::from_real(2, &[4.0, 2.0, 2.0, 4.0]).unwrap()
        );
        assert_eq!(
            partial_trace(&h, Side::One),
            ComplexMat::identity(2).scale(Complex64::new(4.0, 0.0))
        );
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mat = ComplexMat::from_fn(6, |i, j| {
            Complex64::new((i + j) as f64 * 0.21, (i as f64 - j as f64) * 0.4)
        });
        let h = BlockMat::new(2, 3, mat).unwrap();
        let t = h.mat().trace();
        for side in [Side::One, Side::Two] {
            let pt = partial_trace(&h, side).trace();
            assert!((pt - t).norm() <= 1e-12 * t.norm().max(1.0));
        }
    }

    #[test]
    fn partial_det_identity_and_hand_case() {
        let id = BlockMat::new(3, 2, ComplexMat::identity(6)).unwrap();
        assert_eq!(partial_det(&id, Side::Two), ComplexMat::identity(3));
        assert_eq!(partial_det(&id, Side::One), ComplexMat::identity(2));

        let h = kron_m_i2();
        assert_eq!(
            partial_det(&h, Side::Two),
            ComplexMat::from_real(2, &[4.0, 1.0, 1.0, 4.0]).unwrap()
        );
        assert_eq!(
            partial_det(&h, Side::One),
            ComplexMat::from_real(2, &[3.0, 0.0, 0.0, 3.0]).unwrap()
        );
    }

    #[test]
    fn partial_det_side1_equals_side2_of_realignment() {
        let mat = ComplexMat::from_fn(6, |i, j| {
            Complex64::new(((i * 7 + j * 3) % 5) as f64 * 0.5, ((i + 2 * j) % 3) as f64)
        });
        let h = BlockMat::new(3, 2, mat).unwrap();
        assert_eq!(
            partial_det(&h, Side::One),
            partial_det(&realign(&h), Side::Two)
        );
    }

    #[test]
    fn commutation_matrix_small_cases() {
        assert_eq!(commutation_matrix(1, 4), ComplexMat::identity(4));
        assert_eq!(commutation_matrix(4, 1), ComplexMat::identity(4));

        let p = commutation_matrix(2, 2);
        let expected = ComplexMat::from_real(
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 1.0,
            ],
        )
        .unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn commutation_matrix_defining_property() {
        let n = 3;
        let k = 2;
        let p = commutation_matrix(n, k);
        // orthogonality, exact
        assert_eq!(p.matmul(&p.transpose()), ComplexMat::identity(6));

        let mat = ComplexMat::from_fn(6, |i, j| {
            Complex64::new((i * 11 + j) as f64, (j * 5) as f64 - i as f64)
        });
        let h = BlockMat::new(n, k, mat.clone()).unwrap();
        let conj = p.conj_transpose().matmul(&mat).matmul(&p);
        assert_eq!(conj, *realign(&h).mat());

        // P^T (A (x) B) P = B (x) A, bit-exact
        let a = ComplexMat::from_fn(n, |i, j| Complex64::new((i + 1) as f64, j as f64 * 0.5));
        let b = ComplexMat::from_fn(k, |i, j| Complex64::new(1.0 - i as f64, (j * 2) as f64));
        let lhs = p.transpose().matmul(&kron(&a, &b)).matmul(&p);
        assert_eq!(lhs, kron(&b, &a));
    }

    #[test]
    fn selection_embedding_r1_is_identity() {
        let e = SelectionEmbedding::new(2, 3, 1).unwrap();
        assert_eq!(e.column_rows(), &[0, 1, 2, 3, 4, 5]);
        let mat = ComplexMat::from_fn(6, |i, j| Complex64::new((i * 6 + j) as f64, 0.0));
        let h = BlockMat::new(2, 3, mat.clone()).unwrap();
        assert_eq!(e.extract(&h).unwrap(), mat);
    }

    #[test]
    fn selection_embedding_scalar_blocks() {
        // n=2, k=1, r=2: selects tensor coordinates (1,1) and (2,2)
        let e = SelectionEmbedding::new(2, 1, 2).unwrap();
        assert_eq!(e.column_rows(), &[0, 3]);
        let h = BlockMat::new(
            2,
            1,
            ComplexMat::from_real(2, &[2.0, 3.0, 5.0, 7.0]).unwrap(),
        )
        .unwrap();
        let got = e.extract(&h).unwrap();
        let expected = ComplexMat::from_real(2, &[4.0, 9.0, 25.0, 49.0]).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn selection_embedding_matches_dense_tensor_power() {
        let mat = ComplexMat::from_fn(4, |i, j| {
            Complex64::new(
                ((i * 5 + j) % 7) as f64 * 0.25,
                ((i + 3 * j) % 4) as f64 * 0.5,
            )
        });
        let h = BlockMat::new(2, 2, mat).unwrap();
        let e = SelectionEmbedding::new(2, 2, 2).unwrap();
        let got = e.extract(&h).unwrap();

        // dense route: index (x)^2 H at the selected coordinates
        let t2 = tensor_power(h.mat(), 2).unwrap();
        let rows = e.column_rows();
        let expected = ComplexMat::from_fn(got.dim(), |a, b| t2.get(rows[a], rows[b]));
        assert_eq!(got, expected);

        // and blockwise: block (i,j) is (x)^2 H_ij
        let d = e.extracted_dim();
        for i in 0..2 {
            for j in 0..2 {
                let blk = tensor_power(&h.block(i, j), 2).unwrap();
                for l in 0..4 {
                    for m in 0..4 {
                        assert_eq!(got.get(i * 4 + l, j * 4 + m), blk.get(l, m));
                    }
                }
            }
        }
        assert_eq!(d, 8);
    }

    #[test]
    fn selection_embedding_cap() {
        assert!(matches!(
            SelectionEmbedding::with_cap(2, 2, 7, 4096),
            Err(BlockError::CapExceeded { .. })
        ));
        assert!(SelectionEmbedding::with_cap(2, 2, 6, 4096).is_ok());
        assert!(matches!(
            SelectionEmbedding::new(2, 2, 0),
            Err(BlockError::ZeroOrder)
        ));
    }
}
