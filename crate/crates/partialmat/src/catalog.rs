//! Named inequality checks, one per determinantal inequality the harness
//! verifies, each returning a [`CheckResult`] with a signed margin, plus the
//! batch suite runner and its serializable [`Report`].
//!
//! Margin conventions:
//!
//! * scalar checks report `margin = lhs - rhs` in the linear domain (the
//!   k-th-power sides are evaluated through logarithms when strictly
//!   positive, which is exactly equal in value and avoids cancellation);
//! * matrix (Loewner order) checks report the smallest eigenvalue of the
//!   Hermitianized difference.
//!
//! A check passes when `margin >= -tol_used` with `tol_used` derived from the
//! uniform tolerance rule at the scale of the compared quantities. Non-PSD
//! input is an error, never a silent pass.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::block::{partial_det, partial_trace, realign, BlockError, BlockMat, Side};
use crate::dense::{det, loewner_margin, tensor_power, ComplexMat, DenseError};
use crate::psd::{self, derive_seed, generate, Ensemble, GenSpec, PsdError};
use crate::tol::Tolerance;

/// Tensor powers larger than this are refused; keeps desk-scale runs tractable.
pub const DEFAULT_DIM_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckError {
    #[error("input is not PSD: min eigenvalue {margin:.6e}")]
    NotPsd { margin: f64 },
    #[error("input is not Hermitian: deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("block structure mismatch: ({0}, {1}) vs ({2}, {3})", .left.0, .left.1, .right.0, .right.1)]
    BlockDimMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("dimension cap exceeded: {dim}^{r} > {cap}")]
    CapExceeded { dim: usize, r: usize, cap: usize },
    #[error("generator: {0}")]
    Gen(String),
    #[error(transparent)]
    Dense(#[from] DenseError),
}

impl From<BlockError> for CheckError {
    fn from(e: BlockError) -> Self {
        match e {
            BlockError::BlockDimMismatch { left, right } => {
                CheckError::BlockDimMismatch { left, right }
            }
            other => CheckError::Gen(other.to_string()),
        }
    }
}

/// Outcome of one inequality check.
///
/// Exactly one of the scalar pair (`scalar_lhs`/`scalar_rhs`) or
/// `matrix_margin` is populated, depending on the check kind, and
/// `pass == (margin >= -tol_used)` always holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar_lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar_rhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_margin: Option<f64>,
    pub margin: f64,
    pub pass: bool,
    pub tol_used: f64,
    pub input_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Which scalar mean bound over the diagonal realigned blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanBound {
    /// `det(sum G_ll) >= k^n (prod det G_ll)^(1/k)`.
    FanKy,
    /// `(1/k) sum det G_ll >= (prod det G_ll)^(1/k)`.
    AmGm,
}

/// Which proof-chain upper gap: the powered partial-trace or partial-det
/// side against the product of diagonal realigned block determinants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofChain {
    FiedlerMarkham,
    Choi,
}

// ---------------------------------------------------------------------------
// input digests (FNV-1a 64 over dims and raw entry bytes)

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf29ce484222325)
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x100000001b3);
        }
    }

    fn write_f64(&mut self, v: f64) {
        self.write(&v.to_le_bytes());
    }

    fn hex(&self) -> String {
        format!("{:016x}", self.0)
    }
}

fn digest_blocks(mats: &[&BlockMat]) -> String {
    let mut f = Fnv::new();
    for m in mats {
        f.write(&(m.n() as u64).to_le_bytes());
        f.write(&(m.k() as u64).to_le_bytes());
        for z in m.mat().entries() {
            f.write_f64(z.re);
            f.write_f64(z.im);
        }
    }
    f.hex()
}

fn digest_mats(mats: &[&ComplexMat]) -> String {
    let mut f = Fnv::new();
    for m in mats {
        f.write(&(m.dim() as u64).to_le_bytes());
        for z in m.entries() {
            f.write_f64(z.re);
            f.write_f64(z.im);
        }
    }
    f.hex()
}

// ---------------------------------------------------------------------------
// shared numeric helpers

fn ensure_psd(m: &ComplexMat, tol: &Tolerance) -> Result<(), CheckError> {
    let dev = m.hermitian_deviation();
    if dev > tol.bound(m.max_abs()) {
        return Err(CheckError::NotHermitian { deviation: dev });
    }
    if psd::cholesky_gate(m, tol) {
        return Ok(());
    }
    match psd::is_psd(m, tol) {
        Ok((true, _)) => Ok(()),
        Ok((false, margin)) => Err(CheckError::NotPsd { margin }),
        Err(PsdError::NotHermitian { deviation, .. }) => {
            Err(CheckError::NotHermitian { deviation })
        }
        Err(PsdError::Dense(e)) => Err(CheckError::Dense(e)),
        Err(PsdError::BadSpec(s)) => Err(CheckError::Gen(s)),
    }
}

fn real_det(m: &ComplexMat) -> f64 {
    det(m).re
}

/// `(base / denom)^e`, evaluated through logarithms when `base > 0`.
fn pow_ratio(base: f64, denom: f64, e: u32) -> f64 {
    if base > 0.0 {
        ((e as f64) * (base.ln() - denom.ln())).exp()
    } else {
        (base / denom).powi(e as i32)
    }
}

/// Product of real values, through logarithms when all strictly positive.
fn prod_real(vals: &[f64]) -> f64 {
    if vals.iter().all(|&v| v > 0.0) {
        vals.iter().map(|v| v.ln()).sum::<f64>().exp()
    } else {
        vals.iter().product()
    }
}

/// Geometric mean; clamps to 0 when any value is nonpositive (for PSD inputs
/// that only happens at rounding level).
fn geometric_mean(vals: &[f64]) -> f64 {
    if vals.iter().all(|&v| v > 0.0) {
        (vals.iter().map(|v| v.ln()).sum::<f64>() / vals.len() as f64).exp()
    } else {
        0.0
    }
}

fn diag_realigned_dets(h: &BlockMat) -> Vec<f64> {
    let g = realign(h);
    (0..g.n()).map(|l| real_det(&g.block(l, l))).collect()
}

fn scalar_result(
    name: impl Into<String>,
    side: Option<u8>,
    lhs: f64,
    rhs: f64,
    tol: &Tolerance,
    digest: String,
) -> CheckResult {
    let margin = lhs - rhs;
    let tol_used = tol.bound(lhs.abs().max(rhs.abs()));
    CheckResult {
        check_name: name.into(),
        side,
        scalar_lhs: Some(lhs),
        scalar_rhs: Some(rhs),
        matrix_margin: None,
        margin,
        pass: margin >= -tol_used,
        tol_used,
        input_digest: digest,
        error: None,
    }
}

fn matrix_result(
    name: impl Into<String>,
    side: Option<u8>,
    min_eig: f64,
    scale: f64,
    tol: &Tolerance,
    digest: String,
) -> CheckResult {
    let tol_used = tol.bound(scale);
    CheckResult {
        check_name: name.into(),
        side,
        scalar_lhs: None,
        scalar_rhs: None,
        matrix_margin: Some(min_eig),
        margin: min_eig,
        pass: min_eig >= -tol_used,
        tol_used,
        input_digest: digest,
        error: None,
    }
}

fn ensure_same_blocks(mats: &[&BlockMat]) -> Result<(), CheckError> {
    for w in mats.windows(2) {
        if w[0].n() != w[1].n() || w[0].k() != w[1].k() {
            return Err(CheckError::BlockDimMismatch {
                left: (w[0].n(), w[0].k()),
                right: (w[1].n(), w[1].k()),
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// scalar determinant checks

/// Product of diagonal block determinants against the full determinant:
/// plain form uses the diagonal blocks `H_ii`, the realigned form the
/// diagonal blocks `G_ll` of the realignment. Side is reported as 2 for the
/// plain form and 1 for the realigned form.
pub fn check_fischer(
    h: &BlockMat,
    realigned: bool,
    tol: &Tolerance,
) -> Result<CheckResult, CheckError> {
    ensure_psd(h.mat(), tol)?;
    let digest = digest_blocks(&[h]);
    let dets: Vec<f64> = if realigned {
        diag_realigned_dets(h)
    } else {
        (0..h.n()).map(|i| real_det(&h.block(i, i))).collect()
    };
    let lhs = prod_real(&dets);
    let rhs = real_det(h.mat());
    let side = Some(if realigned { 1 } else { 2 });
    Ok(scalar_result("fischer", side, lhs, rhs, tol, digest))
}

/// `det(partial_det(H, side)) >= det(H)`.
pub fn check_thompson(
    h: &BlockMat,
    side: Side,
    tol: &Tolerance,
) -> Result<CheckResult, CheckError> {
    ensure_psd(h.mat(), tol)?;
    let digest = digest_blocks(&[h]);
    let lhs = real_det(&partial_det(h, side));
    let rhs = real_det(h.mat());
    Ok(scalar_result(
        "thompson",
        Some(side.as_u8()),
        lhs,
        rhs,
        tol,
        digest,
    ))
}

/// Powered partial-trace determinant against the full determinant:
/// side 2 is `(det(tr_2 H)/k^n)^k >= det H`, side 1 the realigned companion
/// `(det(tr_1 H)/n^k)^n >= det H`.
pub fn check_fiedler_markham(
    h: &BlockMat,
    side: Side,
    tol: &Tolerance,
) -> Result<CheckResult, CheckError> {
    ensure_psd(h.mat(), tol)?;
    let digest = digest_blocks(&[h]);
    let n = h.n() as f64;
    let k = h.k() as f64;
    let lhs = match side {
        Side::Two => pow_ratio(
            real_det(&partial_trace(h, Side::Two)),
            k.powi(h.n() as i32),
            h.k() as u32,
        ),
        Side::One => pow_ratio(
            real_det(&partial_trace(h, Side::One)),
            n.powi(h.k() as i32),
            h.n() as u32,
        ),
    };
    let rhs = real_det(h.mat());
    Ok(scalar_result(
        "fiedler-markham",
        Some(side.as_u8()),
        lhs,
        rhs,
        tol,
        digest,
    ))
}

/// Powered partial-determinant trace against the full determinant:
/// side 1 is `(tr(det_1 H)/k)^k >= det H`, side 2 is
/// `(tr(det_2 H)/n)^n >= det H`.
pub fn check_choi(h: &BlockMat, side: Side, tol: &Tolerance) -> Result<CheckResult, CheckError> {
    ensure_psd(h.mat(), tol)?;
    let digest = digest_blocks(&[h]);
    let lhs = match side {
        Side::One => pow_ratio(
            partial_det(h, Side::One).trace().re,
            h.k() as f64,
            h.k() as u32,
        ),
        Side::Two => pow_ratio(
            partial_det(h, Side::Two).trace().re,
            h.n() as f64,
            h.n() as u32,
        ),
    };
    let rhs = real_det(h.mat());
    Ok(scalar_result(
        "choi",
        Some(side.as_u8()),
        lhs,
        rhs,
        tol,
        digest,
    ))
}

/// Mean bounds over the diagonal realigned blocks `G_ll`.
pub fn check_mean_bounds(
    h: &BlockMat,
    which: MeanBound,
    tol: &Tolerance,
) -> Result<CheckResult, CheckError> {
    ensure_psd(h.mat(), tol)?;
    let digest = digest_blocks(&[h]);
    let g = realign(h);
    let dets: Vec<f64> = (0..g.n()).map(|l| real_det(&g.block(l, l))).collect();
    let gm = geometric_mean(&dets);
    let k = h.k() as f64;
    let (name, lhs, rhs) = match which {
        MeanBound::FanKy => {
            let sum = partial_trace(&g, Side::One); // sum of G_ll
            (
                "mean-bounds-fan-ky",
                real_det(&sum),
                k.powi(h.n() as i32) * gm,
            )
        }
        MeanBound::AmGm => ("mean-bounds-am-gm", dets.iter().sum::<f64>() / k, gm),
    };
    Ok(scalar_result(name, None, lhs, rhs, tol, digest))
}

/// The upper gap of the two scalar proof chains: the powered side against
/// `prod_l det G_ll` (the lower gap, `prod_l det G_ll >= det H`, is the
/// realigned Fischer check).
pub fn check_proof_chain(
    h: &BlockMat,
    which: ProofChain,
    tol: &Tolerance,
) -> Result<CheckResult, CheckError> {
    ensure_psd(h.mat(), tol)?;
    let digest = digest_blocks(&[h]);
    let dets = diag_realigned_dets(h);
    let rhs = prod_real(&dets);
    let k = h.k() as f64;
    let (name, lhs) = match which {
        ProofChain::FiedlerMarkham => (
            "fiedler-markham-chain",
            pow_ratio(
                real_det(&partial_trace(h, Side::Two)),
                k.powi(h.n() as i32),
                h.k() as u32,
            ),
        ),
        ProofChain::Choi => (
            "choi-chain",
            pow_ratio(dets.iter().sum::<f64>(), k, h.k() as u32),
        ),
    };
    Ok(scalar_result(name, None, lhs, rhs, tol, digest))
}

// ---------------------------------------------------------------------------
// Loewner-order matrix checks

/// Superadditivity of the partial determinant:
/// `partial_det(A+B) >= partial_det(A) + partial_det(B)`.
pub fn check_superadd_partial_det(
    a: &BlockMat,
    b: &BlockMat,
    side: Side,
    tol: &Tolerance,
) -> Result<CheckResult, CheckError> {
    ensure_same_blocks(&[a, b])?;
    ensure_psd(a.mat(), tol)?;
    ensure_psd(b.mat(), tol)?;
    let digest = digest_blocks(&[a, b]);
    let sum = a.add(b)?;
    let lhs = partial_det(&sum, side);
    let rhs = partial_det(a, side).add(&partial_det(b, side));
    let min_eig = loewner_margin(&lhs, &rhs)?;
    let scale = lhs.max_abs().max(rhs.max_abs());
    Ok(matrix_result(
        "superadd",
        Some(side.as_u8()),
        min_eig,
        scale,
        tol,
        digest,
    ))
}

fn tensor_preflight(mats: &[&ComplexMat], r: usize, tol: &Tolerance) -> Result<(), CheckError> {
    if r == 0 {
        return Err(CheckError::ZeroOrder);
    }
    let dim = mats[0].dim();
    for m in mats {
        if m.dim() != dim {
            return Err(CheckError::DimMismatch {
                left: dim,
                right: m.dim(),
            });
        }
    }
    match dim.checked_pow(r as u32) {
        Some(total) if total <= DEFAULT_DIM_CAP => {}
        _ => {
            return Err(CheckError::CapExceeded {
                dim,
                r,
                cap: DEFAULT_DIM_CAP,
            })
        }
    }
    for m in mats {
        ensure_psd(m, tol)?;
    }
    Ok(())
}

/// Three-term tensor power superadditivity:
/// `T(A+B+C) + T(A) + T(B) + T(C) >= T(A+B) + T(A+C) + T(B+C)` with
/// `T = (x)^r`.
pub fn check_tensor_three(
    a: &ComplexMat,
    b: &ComplexMat,
    c: &ComplexMat,
    r: usize,
    tol: &Tolerance,
) -> Result<CheckResult, CheckError> {
    tensor_preflight(&[a, b, c], r, tol)?;
    let digest = digest_mats(&[a, b, c]);
    let ab = a.add(b);
    let ac = a.add(c);
    let bc = b.add(c);
    let abc = ab.add(c);
    let lhs = tensor_power(&abc, r)?
        .add(&tensor_power(a, r)?)
        .add(&tensor_power(b, r)?)
        .add(&tensor_power(c, r)?);
    let rhs = tensor_power(&ab, r)?
        .add(&tensor_power(&ac, r)?)
        .add(&tensor_power(&bc, r)?);
    let min_eig = loewner_margin(&lhs, &rhs)?;
    let scale = lhs.max_abs().max(rhs.max_abs());
    Ok(matrix_result(
        format!("tensor-three-r{r}"),
        None,
        min_eig,
        scale,
        tol,
        digest,
    ))
}

/// Two-term tensor power superadditivity with a common summand:
/// `T(A+B+C) + T(C) >= T(A+C) + T(B+C)`.
pub fn check_tensor_two_common(
    a: &ComplexMat,
    b: &ComplexMat,
    c: &ComplexMat,
    r: usize,
    tol: &Tolerance,
) -> Result<CheckResult, CheckError> {
    tensor_preflight(&[a, b, c], r, tol)?;
    let digest = digest_mats(&[a, b, c]);
    let ac = a.add(c);
    let bc = b.add(c);
    let abc = a.add(b).add(c);
    let lhs = tensor_power(&abc, r)?.add(&tensor_power(c, r)?);
    let rhs = tensor_power(&ac, r)?.add(&tensor_power(&bc, r)?);
    let min_eig = loewner_margin(&lhs, &rhs)?;
    let scale = lhs.max_abs().max(rhs.max_abs());
    Ok(matrix_result(
        format!("tensor-two-common-r{r}"),
        None,
        min_eig,
        scale,
        tol,
        digest,
    ))
}

/// Three-term partial determinant superadditivity:
/// `pd(A+B+C) + pd(A) + pd(B) + pd(C) >= pd(A+B) + pd(A+C) + pd(B+C)`.
pub fn check_partial_det_three(
    a: &BlockMat,
    b: &BlockMat,
    c: &BlockMat,
    side: Side,
    tol: &Tolerance,
) -> Result<CheckResult, CheckError> {
    ensure_same_blocks(&[a, b, c])?;
    for m in [a, b, c] {
        ensure_psd(m.mat(), tol)?;
    }
    let digest = digest_blocks(&[a, b, c]);
    let ab = a.add(b)?;
    let ac = a.add(c)?;
    let bc = b.add(c)?;
    let abc = ab.add(c)?;
    let lhs = partial_det(&abc, side)
        .add(&partial_det(a, side))
        .add(&partial_det(b, side))
        .add(&partial_det(c, side));
    let rhs = partial_det(&ab, side)
        .add(&partial_det(&ac, side))
        .add(&partial_det(&bc, side));
    let min_eig = loewner_margin(&lhs, &rhs)?;
    let scale = lhs.max_abs().max(rhs.max_abs());
    Ok(matrix_result(
        "det-three",
        Some(side.as_u8()),
        min_eig,
        scale,
        tol,
        digest,
    ))
}

/// Partial determinant superadditivity with a common summand:
/// `pd(A+B+C) + pd(C) >= pd(A+C) + pd(B+C)`.
pub fn check_partial_det_three_common(
    a: &BlockMat,
    b: &BlockMat,
    c: &BlockMat,
    side: Side,
    tol: &Tolerance,
) -> Result<CheckResult, CheckError> {
    ensure_same_blocks(&[a, b, c])?;
    for m in [a, b, c] {
        ensure_psd(m.mat(), tol)?;
    }
    let digest = digest_blocks(&[a, b, c]);
    let ac = a.add(c)?;
    let bc = b.add(c)?;
    let abc = a.add(b)?.add(c)?;
    let lhs = partial_det(&abc, side).add(&partial_det(c, side));
    let rhs = partial_det(&ac, side).add(&partial_det(&bc, side));
    let min_eig = loewner_margin(&lhs, &rhs)?;
    let scale = lhs.max_abs().max(rhs.max_abs());
    Ok(matrix_result(
        "det-three-common",
        Some(side.as_u8()),
        min_eig,
        scale,
        tol,
        digest,
    ))
}

// ---------------------------------------------------------------------------
// suite runner

/// One suite record: a check result in the context of the generating spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub ensemble: String,
    pub n: usize,
    pub k: usize,
    pub trial: u32,
    #[serde(flatten)]
    pub result: CheckResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub version: String,
    pub trials: u32,
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub specs: Vec<GenSpec>,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub duration_seconds: f64,
}

/// Per-check aggregate over the whole run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<u8>,
    pub count: usize,
    pub min_margin: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: ReportMeta,
    pub summary: Vec<CheckSummary>,
    pub records: Vec<ReportRecord>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.meta.failed == 0
    }
}

/// Margin recorded for a check that errored instead of producing a value.
const ERROR_MARGIN: f64 = -f64::MAX;

struct TrialCtx<'a> {
    ensemble: &'static str,
    n: usize,
    k: usize,
    trial: u32,
    tol: &'a Tolerance,
    records: &'a mut Vec<ReportRecord>,
}

impl TrialCtx<'_> {
    fn push(
        &mut self,
        fallback_name: &str,
        side: Option<u8>,
        res: Result<CheckResult, CheckError>,
    ) {
        let result = match res {
            Ok(r) => r,
            Err(e) => CheckResult {
                check_name: fallback_name.to_string(),
                side,
                scalar_lhs: None,
                scalar_rhs: None,
                matrix_margin: None,
                margin: ERROR_MARGIN,
                pass: false,
                tol_used: self.tol.bound(1.0),
                input_digest: String::new(),
                error: Some(e.to_string()),
            },
        };
        self.records.push(ReportRecord {
            ensemble: self.ensemble.to_string(),
            n: self.n,
            k: self.k,
            trial: self.trial,
            result,
        });
    }
}

fn tensor_input_dim(n: usize, r: usize) -> usize {
    // keep the eigensolves small: dim^r stays at or below 27
    if r <= 2 {
        n.clamp(1, 3)
    } else {
        n.clamp(1, 2)
    }
}

fn spec_with_seed(spec: &GenSpec, n: usize, k: usize, seed: u64) -> GenSpec {
    let mut s = GenSpec::new(spec.ensemble, n, k, seed);
    if spec.ensemble == Ensemble::WishartRankR {
        // keep the rank-deficiency pattern of the parent spec where possible
        let d = n * k;
        s = s.with_rank(if d > 1 { d - 1 } else { 1 });
    }
    s
}

fn run_trial(spec: &GenSpec, trial: u32, tol: &Tolerance, records: &mut Vec<ReportRecord>) {
    let mut ctx = TrialCtx {
        ensemble: spec.ensemble.name(),
        n: spec.n,
        k: spec.k,
        trial,
        tol,
        records,
    };
    let t = trial as u64;
    let gen_at = |role: u64| {
        let mut s = spec.clone();
        s.seed = derive_seed(spec.seed, &[t, role]);
        generate(&s)
    };
    let (h, b, c) = match (gen_at(0), gen_at(1), gen_at(2)) {
        (Ok(h), Ok(b), Ok(c)) => (h, b, c),
        (h, b, c) => {
            let msg = [h.err(), b.err(), c.err()]
                .into_iter()
                .flatten()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            ctx.push("generate", None, Err(CheckError::Gen(msg)));
            return;
        }
    };

    ctx.push("fischer", Some(2), check_fischer(&h, false, tol));
    ctx.push("fischer", Some(1), check_fischer(&h, true, tol));
    for side in [Side::One, Side::Two] {
        ctx.push(
            "thompson",
            Some(side.as_u8()),
            check_thompson(&h, side, tol),
        );
        ctx.push(
            "fiedler-markham",
            Some(side.as_u8()),
            check_fiedler_markham(&h, side, tol),
        );
        ctx.push("choi", Some(side.as_u8()), check_choi(&h, side, tol));
    }
    ctx.push(
        "mean-bounds-fan-ky",
        None,
        check_mean_bounds(&h, MeanBound::FanKy, tol),
    );
    ctx.push(
        "mean-bounds-am-gm",
        None,
        check_mean_bounds(&h, MeanBound::AmGm, tol),
    );
    ctx.push(
        "fiedler-markham-chain",
        None,
        check_proof_chain(&h, ProofChain::FiedlerMarkham, tol),
    );
    ctx.push(
        "choi-chain",
        None,
        check_proof_chain(&h, ProofChain::Choi, tol),
    );
    for side in [Side::One, Side::Two] {
        ctx.push(
            "superadd",
            Some(side.as_u8()),
            check_superadd_partial_det(&h, &b, side, tol),
        );
        ctx.push(
            "det-three",
            Some(side.as_u8()),
            check_partial_det_three(&h, &b, &c, side, tol),
        );
        ctx.push(
            "det-three-common",
            Some(side.as_u8()),
            check_partial_det_three_common(&h, &b, &c, side, tol),
        );
    }

    // tensor checks run on small derived PSD triples (plain matrices, k = 1)
    let mut cached: Option<(usize, [ComplexMat; 3])> = None;
    for r in 1..=3usize {
        let d = tensor_input_dim(spec.n, r);
        let triple = match &cached {
            Some((dim, t)) if *dim == d => t.clone(),
            _ => {
                let base = 3 + 3 * r as u64;
                let gen_mat = |role: u64| {
                    generate(&spec_with_seed(
                        spec,
                        d,
                        1,
                        derive_seed(spec.seed, &[t, base + role]),
                    ))
                    .map(BlockMat::into_mat)
                };
                match (gen_mat(0), gen_mat(1), gen_mat(2)) {
                    (Ok(a), Ok(bb), Ok(cc)) => {
                        let t3 = [a, bb, cc];
                        cached = Some((d, t3.clone()));
                        t3
                    }
                    _ => {
                        ctx.push(
                            &format!("tensor-three-r{r}"),
                            None,
                            Err(CheckError::Gen("tensor input generation failed".into())),
                        );
                        continue;
                    }
                }
            }
        };
        ctx.push(
            &format!("tensor-three-r{r}"),
            None,
            check_tensor_three(&triple[0], &triple[1], &triple[2], r, tol),
        );
        ctx.push(
            &format!("tensor-two-common-r{r}"),
            None,
            check_tensor_two_common(&triple[0], &triple[1], &triple[2], r, tol),
        );
    }
}

/// Runs every catalog check over `trials` generated inputs per spec.
/// Deterministic for fixed seeds; per-check errors become failed records and
/// never abort the suite.
pub fn run_suite(specs: &[GenSpec], trials: u32, tol: &Tolerance) -> Report {
    let start = Instant::now();
    let mut records = Vec::new();
    for spec in specs {
        for trial in 0..trials {
            run_trial(spec, trial, tol, &mut records);
        }
    }

    let mut agg: BTreeMap<(String, Option<u8>), CheckSummary> = BTreeMap::new();
    let mut passed = 0usize;
    for rec in &records {
        if rec.result.pass {
            passed += 1;
        }
        let key = (rec.result.check_name.clone(), rec.result.side);
        let entry = agg.entry(key.clone()).or_insert_with(|| CheckSummary {
            check: key.0,
            side: key.1,
            count: 0,
            min_margin: f64::INFINITY,
            failures: 0,
        });
        entry.count += 1;
        entry.min_margin = entry.min_margin.min(rec.result.margin);
        if !rec.result.pass {
            entry.failures += 1;
        }
    }

    let total = records.len();
    Report {
        meta: ReportMeta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            trials,
            tol_abs: tol.absolute,
            tol_rel: tol.relative,
            specs: specs.to_vec(),
            total,
            passed,
            failed: total - passed,
            duration_seconds: start.elapsed().as_secs_f64(),
        },
        summary: agg.into_values().collect(),
        records,
    }
}

/// CSV projection of a report: `check,side,n,k,trial,margin,pass`.
pub fn report_to_csv(report: &Report) -> String {
    let mut out = String::from("check,side,n,k,trial,margin,pass\n");
    for rec in &report.records {
        let side = rec.result.side.map(|s| s.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            rec.result.check_name,
            side,
            rec.n,
            rec.k,
            rec.trial,
            rec.result.margin,
            rec.result.pass
        );
    }
    out
}

/// The standard suite grid: every ensemble at each `(n, k)`, with seeds
/// derived deterministically from the base seed. Wishart specs get rank
/// `nk - 1`.
pub fn standard_specs(
    dims: &[(usize, usize)],
    ensembles: &[Ensemble],
    base_seed: u64,
) -> Vec<GenSpec> {
    let mut specs = Vec::new();
    for &(n, k) in dims {
        for (ei, &ens) in ensembles.iter().enumerate() {
            let seed = derive_seed(base_seed, &[n as u64, k as u64, ei as u64]);
            let mut spec = GenSpec::new(ens, n, k, seed);
            if ens == Ensemble::WishartRankR {
                let d = n * k;
                spec = spec.with_rank(if d > 1 { d - 1 } else { 1 });
            }
            specs.push(spec);
        }
    }
    specs
}

/// The `(n, k)` grid the full verification run uses.
pub const STANDARD_DIMS: [(usize, usize); 5] = [(2, 2), (3, 2), (2, 3), (2, 4), (4, 2)];
