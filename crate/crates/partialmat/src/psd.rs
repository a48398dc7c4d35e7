//! Positive semidefinite predicates and seeded generators for test inputs.
//!
//! Generation is fully deterministic: the same [`GenSpec`] always produces a
//! bit-identical matrix, independent of platform, so test corpora are
//! reproducible across implementations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::block::BlockMat;
use crate::dense::{eig_hermitian, kron, ComplexMat, DenseError};
use crate::tol::Tolerance;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PsdError {
    #[error(
        "matrix is not Hermitian: deviation {deviation:.3e} exceeds tolerance {tolerance:.3e}"
    )]
    NotHermitian { deviation: f64, tolerance: f64 },
    #[error("bad generator spec: {0}")]
    BadSpec(String),
    #[error(transparent)]
    Dense(#[from] DenseError),
}

/// Self-contained 64-bit PRNG of the xorshift family (xorshift64*).
///
/// State update: `x ^= x >> 12; x ^= x << 25; x ^= x >> 27`; the output is
/// `x * 0x2545F4914F6CDD1D`. A zero seed is replaced by the fixed constant
/// `0x9E3779B97F4A7C15` since the all-zero state is a fixed point.
#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        XorShift64Star {
            state: if seed == 0 { 0x9E3779B97F4A7C15 } else { seed },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform in [0, 1), 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Two independent standard normals via Box-Muller.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        // u1 in (0, 1] so the log is finite
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        (radius * angle.cos(), radius * angle.sin())
    }

    /// Standard complex normal: real and imaginary parts N(0, 1/2).
    pub fn complex_normal(&mut self) -> Complex64 {
        let (re, im) = self.normal_pair();
        Complex64::new(
            re * std::f64::consts::FRAC_1_SQRT_2,
            im * std::f64::consts::FRAC_1_SQRT_2,
        )
    }
}

/// Deterministic seed derivation for sub-streams (per trial, per role), a
/// splitmix64 hash of the base seed and the salts.
pub fn derive_seed(base: u64, salts: &[u64]) -> u64 {
    let mut h = base;
    for &s in salts {
        h = h
            .wrapping_add(0x9E3779B97F4A7C15)
            .wrapping_add(s.wrapping_mul(0xBF58476D1CE4E5B9));
        let mut z = h;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        h = z ^ (z >> 31);
    }
    h
}

/// Matrix ensembles available to the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    /// Gram matrix `G G* / (nk)` of a square matrix with i.i.d. standard
    /// complex normal entries.
    Ginibre,
    /// Gram matrix of an `(nk) x rank` complex normal factor; rank deficient
    /// when `rank < nk`.
    WishartRankR,
    /// `M (x) N` with independent PSD factors of dims `n` and `k`.
    KronStructured,
    /// `M (x) I_k`; determinantal equalities are tight on this family.
    EqualityCase,
    /// Diagonal with i.i.d. uniform [0, 1) entries.
    DiagRandom,
}

impl Ensemble {
    pub const ALL: [Ensemble; 5] = [
        Ensemble::Ginibre,
        Ensemble::WishartRankR,
        Ensemble::KronStructured,
        Ensemble::EqualityCase,
        Ensemble::DiagRandom,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Ensemble::Ginibre => "ginibre",
            Ensemble::WishartRankR => "wishart-rank-r",
            Ensemble::KronStructured => "kron-structured",
            Ensemble::EqualityCase => "equality-case",
            Ensemble::DiagRandom => "diag-random",
        }
    }
}

/// Recipe for one generated PSD block matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub ensemble: Ensemble,
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(ensemble: Ensemble, n: usize, k: usize, seed: u64) -> Self {
        GenSpec {
            ensemble,
            n,
            k,
            rank: None,
            seed,
        }
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = Some(rank);
        self
    }
}

/// PSD test with margin: `(flag, lambda_min)`. The flag applies the uniform
/// tolerance rule at the scale of the largest entry.
pub fn is_psd(a: &ComplexMat, tol: &Tolerance) -> Result<(bool, f64), PsdError> {
    let dev = a.hermitian_deviation();
    let bound = tol.bound(a.max_abs());
    if dev > bound {
        return Err(PsdError::NotHermitian {
            deviation: dev,
            tolerance: bound,
        });
    }
    let eigs = eig_hermitian(a)?;
    let margin = eigs[0];
    Ok((tol.passes_nonneg(margin, a.max_abs()), margin))
}

/// Cheap PSD gate: attempt a Cholesky factorization of `a + bound * I`.
/// Success certifies `lambda_min(a) > -bound`; on failure the caller should
/// fall back to the eigensolver for an exact margin.
pub(crate) fn cholesky_gate(a: &ComplexMat, tol: &Tolerance) -> bool {
    let d = a.dim();
    let shift = tol.bound(a.max_abs());
    let mut l = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..=i {
            let mut acc = a.get(i, j);
            if i == j {
                acc += shift;
            }
            for t in 0..j {
                acc -= l[i * d + t] * l[j * d + t].conj();
            }
            if i == j {
                let diag = acc.re;
                if diag <= 0.0 || !diag.is_finite() {
                    return false;
                }
                l[i * d + i] = Complex64::new(diag.sqrt(), 0.0);
            } else {
                l[i * d + j] = acc / l[j * d + j];
            }
        }
    }
    true
}

/// Gram matrix `g g* / scale` for a row-major `rows x cols` factor. The
/// upper triangle is mirrored by conjugation so the result is Hermitian
/// bit-exactly, with a real diagonal.
fn gram(g: &[Complex64], rows: usize, cols: usize, scale: f64) -> ComplexMat {
    let inv = 1.0 / scale;
    let mut out = ComplexMat::zeros(rows);
    for i in 0..rows {
        for j in i..rows {
            if i == j {
                let mut acc = 0.0;
                for t in 0..cols {
                    acc += g[i * cols + t].norm_sqr();
                }
                out.set(i, i, Complex64::new(acc * inv, 0.0));
            } else {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..cols {
                    acc += g[i * cols + t] * g[j * cols + t].conj();
                }
                let v = acc * inv;
                out.set(i, j, v);
                out.set(j, i, v.conj());
            }
        }
    }
    out
}

fn complex_normal_factor(rng: &mut XorShift64Star, rows: usize, cols: usize) -> Vec<Complex64> {
    (0..rows * cols).map(|_| rng.complex_normal()).collect()
}

fn random_psd(rng: &mut XorShift64Star, dim: usize) -> ComplexMat {
    let g = complex_normal_factor(rng, dim, dim);
    gram(&g, dim, dim, dim as f64)
}

/// Deterministic PSD block matrix for the given spec.
pub fn generate(spec: &GenSpec) -> Result<BlockMat, PsdError> {
    if spec.n == 0 || spec.k == 0 {
        return Err(PsdError::BadSpec(format!(
            "block dims must be at least 1, got n={}, k={}",
            spec.n, spec.k
        )));
    }
    let d = spec.n * spec.k;
    if let Some(rank) = spec.rank {
        if rank == 0 || rank > d {
            return Err(PsdError::BadSpec(format!("rank {rank} outside [1, {d}]")));
        }
    }
    let mut rng = XorShift64Star::new(spec.seed);
    let mat = match spec.ensemble {
        Ensemble::Ginibre => {
            let g = complex_normal_factor(&mut rng, d, d);
            gram(&g, d, d, d as f64)
        }
        Ensemble::WishartRankR => {
            let rank = spec
                .rank
                .ok_or_else(|| PsdError::BadSpec("wishart-rank-r requires a rank".into()))?;
            let g = complex_normal_factor(&mut rng, d, rank);
            gram(&g, d, rank, d as f64)
        }
        Ensemble::KronStructured => {
            let m = random_psd(&mut rng, spec.n);
            let nn = random_psd(&mut rng, spec.k);
            kron(&m, &nn)
        }
        Ensemble::EqualityCase => {
            let m = random_psd(&mut rng, spec.n);
            kron(&m, &ComplexMat::identity(spec.k))
        }
        Ensemble::DiagRandom => {
            let mut out = ComplexMat::zeros(d);
            for i in 0..d {
                out.set(i, i, Complex64::new(rng.uniform(), 0.0));
            }
            out
        }
    };
    Ok(BlockMat::new(spec.n, spec.k, mat).expect("generated matrix has dim n*k"))
}
