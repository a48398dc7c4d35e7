//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! The full-corpus run (criterion 1) is shared with the proof-chain
//! criterion through a `OnceLock` so the 1000-trial suite executes once.

use std::sync::OnceLock;

use num_complex::Complex64;

use partialmat::block::{
    commutation_matrix, partial_det, realign, BlockMat, SelectionEmbedding, Side,
};
use partialmat::catalog::{
    check_choi, check_fiedler_markham, check_fischer, check_mean_bounds, check_tensor_three,
    check_tensor_two_common, run_suite, standard_specs, MeanBound, Report, STANDARD_DIMS,
};
use partialmat::dense::{compound, det, eig_hermitian, kron, tensor_power, ComplexMat};
use partialmat::oracle::{compound_minors, det_laplace, realign_bruteforce};
use partialmat::psd::{generate, is_psd, Ensemble, GenSpec, XorShift64Star};
use partialmat::Tolerance;

static FULL_REPORT: OnceLock<Report> = OnceLock::new();

const FULL_TRIALS: u32 = 1000;

fn full_report() -> &'static Report {
    FULL_REPORT.get_or_init(|| {
        let specs = standard_specs(&STANDARD_DIMS, &Ensemble::ALL, 0);
        run_suite(&specs, FULL_TRIALS, &Tolerance::default())
    })
}

fn verdict(n: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "ACCEPTANCE {n} ({name}): {} — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
}

fn random_mat(rng: &mut XorShift64Star, dim: usize) -> ComplexMat {
    ComplexMat::from_fn(dim, |_, _| {
        Complex64::new(rng.uniform() * 2.0 - 1.0, rng.uniform() * 2.0 - 1.0)
    })
}

fn psd_block(ens: Ensemble, n: usize, k: usize, seed: u64) -> BlockMat {
    let mut spec = GenSpec::new(ens, n, k, seed);
    if ens == Ensemble::WishartRankR {
        spec = spec.with_rank(n * k - 1);
    }
    generate(&spec).unwrap()
}

#[test]
fn acceptance_1_inequality_suite() {
    let report = full_report();
    let ok = report.all_pass() && report.meta.duration_seconds < 60.0;
    let worst = report
        .summary
        .iter()
        .map(|s| s.min_margin)
        .fold(f64::INFINITY, f64::min);
    verdict(
        1,
        "inequality suite",
        ok,
        &format!(
            "{} records over {} specs x {} trials, {} failures, min margin {:.3e}, {:.1} s",
            report.meta.total,
            report.meta.specs.len(),
            report.meta.trials,
            report.meta.failed,
            worst,
            report.meta.duration_seconds
        ),
    );
    assert!(report.all_pass(), "{} suite failures", report.meta.failed);
    assert!(
        report.meta.duration_seconds < 60.0,
        "suite took {:.1} s",
        report.meta.duration_seconds
    );
}

#[test]
fn acceptance_2_equality_families() {
    let tol = Tolerance::default();
    let mut ok = true;
    let mut worst: f64 = 0.0;

    // equality-case ensemble: the four listed checks are tight
    for &(n, k) in &STANDARD_DIMS {
        for seed in 0..50u64 {
            let h = psd_block(Ensemble::EqualityCase, n, k, seed * 131 + 7);
            let results = [
                check_fiedler_markham(&h, Side::Two, &tol).unwrap(),
                check_choi(&h, Side::One, &tol).unwrap(),
                check_fischer(&h, true, &tol).unwrap(),
                check_mean_bounds(&h, MeanBound::FanKy, &tol).unwrap(),
            ];
            for r in results {
                let scale = r
                    .scalar_lhs
                    .unwrap()
                    .abs()
                    .max(r.scalar_rhs.unwrap().abs())
                    .max(1.0);
                let rel = r.margin.abs() / scale;
                worst = worst.max(rel);
                if r.margin.abs() > 1e-10 * scale {
                    ok = false;
                }
            }
        }
    }

    // r = 1 tensor checks are exact cancellations
    let mut rng = XorShift64Star::new(99);
    for _ in 0..100 {
        let d = 2 + (rng.next_u64() % 2) as usize;
        let triple: Vec<ComplexMat> = (0..3)
            .map(|i| {
                generate(&GenSpec::new(Ensemble::Ginibre, d, 1, rng.next_u64() + i))
                    .unwrap()
                    .into_mat()
            })
            .collect();
        for r in [
            check_tensor_three(&triple[0], &triple[1], &triple[2], 1, &tol).unwrap(),
            check_tensor_two_common(&triple[0], &triple[1], &triple[2], 1, &tol).unwrap(),
        ] {
            worst = worst.max(r.margin.abs());
            if r.margin.abs() > 1e-12 {
                ok = false;
            }
        }
    }

    // 1x1, r = 2 three-term check is an algebraic identity
    let mut rng = XorShift64Star::new(17);
    for _ in 0..100 {
        let s = |v: f64| ComplexMat::from_real(1, &[v]).unwrap();
        let (a, b, c) = (s(rng.uniform()), s(rng.uniform()), s(rng.uniform()));
        let r = check_tensor_three(&a, &b, &c, 2, &tol).unwrap();
        worst = worst.max(r.margin.abs());
        if r.margin.abs() > 1e-12 {
            ok = false;
        }
    }

    verdict(
        2,
        "equality families",
        ok,
        &format!("worst |margin|/scale {:.3e}", worst),
    );
    assert!(ok);
}

#[test]
fn acceptance_3_structural_identities() {
    let mut ok = true;
    let mut rng = XorShift64Star::new(3);
    let mut spectral_worst: f64 = 0.0;
    for &(n, k) in &STANDARD_DIMS {
        for _ in 0..20 {
            let h = BlockMat::new(n, k, random_mat(&mut rng, n * k)).unwrap();

            // involution, bit-exact
            ok &= realign(&realign(&h)) == h;

            // commutation conjugation, bit-exact
            let p = commutation_matrix(n, k);
            let conj = p.conj_transpose().matmul(h.mat()).matmul(&p);
            ok &= conj == *realign(&h).mat();

            // partial determinant pairing, bit-exact
            ok &= partial_det(&h, Side::One) == partial_det(&realign(&h), Side::Two);

            // kron realignment swap, bit-exact
            let a = random_mat(&mut rng, n);
            let b = random_mat(&mut rng, k);
            let hk = BlockMat::new(n, k, kron(&a, &b)).unwrap();
            ok &= *realign(&hk).mat() == kron(&b, &a);

            // spectrum preservation on Hermitian inputs
            let hh = BlockMat::new(n, k, random_mat(&mut rng, n * k).hermitianize()).unwrap();
            let eh = eig_hermitian(hh.mat()).unwrap();
            let eg = eig_hermitian(realign(&hh).mat()).unwrap();
            let scale = hh.mat().max_abs().max(1.0);
            for (x, y) in eh.iter().zip(&eg) {
                spectral_worst = spectral_worst.max((x - y).abs() / scale);
                ok &= (x - y).abs() <= 1e-9 * scale;
            }
            let dh = det(hh.mat());
            let dg = det(realign(&hh).mat());
            ok &= (dh - dg).norm() <= 1e-10 * dh.norm().max(1.0);
        }
    }
    verdict(
        3,
        "structural identities",
        ok,
        &format!(
            "bit-exact identities over {} instances, worst spectral drift {:.3e}",
            STANDARD_DIMS.len() * 20,
            spectral_worst
        ),
    );
    assert!(ok);
}

#[test]
fn acceptance_4_selection_embedding() {
    let tol = Tolerance::default();
    let mut ok = true;
    for &(n, k, r) in &[(2usize, 2usize, 2usize), (3, 2, 2), (2, 2, 3)] {
        let emb = SelectionEmbedding::new(n, k, r).unwrap();
        let mut rng = XorShift64Star::new((n * 100 + k * 10 + r) as u64);
        for trial in 0..20u64 {
            // arbitrary input: extraction must equal the dense route bit-exactly
            let h = BlockMat::new(n, k, random_mat(&mut rng, n * k)).unwrap();
            let got = emb.extract(&h).unwrap();
            let dense = tensor_power(h.mat(), r).unwrap();
            let rows = emb.column_rows();
            for (a, &ra) in rows.iter().enumerate() {
                for (bcol, &rb) in rows.iter().enumerate() {
                    ok &= got.get(a, bcol) == dense.get(ra, rb);
                }
            }
            // and the blockwise tensor powers, bit-exactly
            let kr = k.pow(r as u32);
            for i in 0..n {
                for j in 0..n {
                    let blk = tensor_power(&h.block(i, j), r).unwrap();
                    for l in 0..kr {
                        for m in 0..kr {
                            ok &= got.get(i * kr + l, j * kr + m) == blk.get(l, m);
                        }
                    }
                }
            }

            // PSD input: the extracted principal submatrix stays PSD
            let hp = psd_block(Ensemble::Ginibre, n, k, trial * 977 + 5);
            let extracted = emb.extract(&hp).unwrap();
            let (flag, margin) = is_psd(&extracted.hermitianize(), &tol).unwrap();
            ok &= flag;
            if !flag {
                eprintln!("embedding extraction not PSD: margin {margin}");
            }
        }
    }
    verdict(
        4,
        "selection embedding",
        ok,
        "bit-exact extraction and PSD preservation at (2,2,2), (3,2,2), (2,2,3)",
    );
    assert!(ok);
}

#[test]
fn acceptance_5_oracle_equivalence() {
    let mut ok = true;
    let mut worst: f64 = 0.0;

    // determinant: LU vs cofactor expansion, 200 instances, dims up to 6
    let mut rng = XorShift64Star::new(50);
    for i in 0..200usize {
        let d = 1 + i % 6;
        let a = random_mat(&mut rng, d);
        let fast = det(&a);
        let slow = det_laplace(&a).unwrap();
        let scale = fast.norm().max(slow.norm()).max(1.0);
        let rel = (fast - slow).norm() / scale;
        worst = worst.max(rel);
        ok &= rel <= 1e-10;
    }

    // compound: LU minors vs cofactor minors, 200 instances
    let mut rng = XorShift64Star::new(51);
    for i in 0..200usize {
        let d = 3 + i % 3; // 3..=5, sizes C(d,2) <= 10
        let a = random_mat(&mut rng, d);
        let fast = compound(&a, 2).unwrap();
        let slow = compound_minors(&a, 2).unwrap();
        let scale = fast.max_abs().max(slow.max_abs()).max(1.0);
        let rel = fast.sub(&slow).max_abs() / scale;
        worst = worst.max(rel);
        ok &= rel <= 1e-10;
    }

    // realignment: index map vs quadruple loop, 200 instances, bit-exact
    let mut rng = XorShift64Star::new(52);
    let dims = [(2usize, 2usize), (3, 2), (2, 3), (4, 2), (2, 4)];
    for i in 0..200usize {
        let (n, k) = dims[i % dims.len()];
        let h = BlockMat::new(n, k, random_mat(&mut rng, n * k)).unwrap();
        ok &= realign_bruteforce(&h) == *realign(&h).mat();
    }

    verdict(
        5,
        "oracle equivalence",
        ok,
        &format!(
            "200 instances per op, worst relative deviation {:.3e}",
            worst
        ),
    );
    assert!(ok);
}

#[test]
fn acceptance_6_equivalence_pairing() {
    let tol = Tolerance::default();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let ensembles = [
        Ensemble::Ginibre,
        Ensemble::KronStructured,
        Ensemble::DiagRandom,
    ];
    for i in 0..500usize {
        let (n, k) = STANDARD_DIMS[i % STANDARD_DIMS.len()];
        let ens = ensembles[i % ensembles.len()];
        let h = psd_block(ens, n, k, i as u64 * 31 + 1);
        let g = realign(&h);

        let fm1 = check_fiedler_markham(&h, Side::One, &tol).unwrap();
        let fm2 = check_fiedler_markham(&g, Side::Two, &tol).unwrap();
        let scale = fm1.margin.abs().max(fm2.margin.abs()).max(1.0);
        let rel = (fm1.margin - fm2.margin).abs() / scale;
        worst = worst.max(rel);
        ok &= rel <= 1e-10;

        let c1 = check_choi(&h, Side::One, &tol).unwrap();
        let c2 = check_choi(&g, Side::Two, &tol).unwrap();
        let scale = c1.margin.abs().max(c2.margin.abs()).max(1.0);
        let rel = (c1.margin - c2.margin).abs() / scale;
        worst = worst.max(rel);
        ok &= rel <= 1e-10;
    }
    verdict(
        6,
        "equivalence pairing",
        ok,
        &format!("500 PSD inputs, worst relative margin gap {:.3e}", worst),
    );
    assert!(ok);
}

#[test]
fn acceptance_7_proof_chains() {
    let report = full_report();
    let mut ok = true;
    let mut seen = 0usize;
    let mut detail = String::new();
    for s in &report.summary {
        let is_chain = s.check == "fiedler-markham-chain"
            || s.check == "choi-chain"
            || (s.check == "fischer" && s.side == Some(1));
        if is_chain {
            seen += 1;
            ok &= s.failures == 0 && s.count > 0;
            detail.push_str(&format!(
                "{}: min margin {:.3e} over {}; ",
                s.check, s.min_margin, s.count
            ));
        }
    }
    ok &= seen == 3;
    verdict(7, "proof chains", ok, detail.trim_end_matches("; "));
    assert!(ok, "proof chain gaps failed on the full corpus");
}
