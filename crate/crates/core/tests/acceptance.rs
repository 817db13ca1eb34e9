//! Acceptance suite: one test per criterion, each driving the sweep
//! harness over the full (p, e, m) grid at the stated size caps and
//! demanding exact integer agreement everywhere.  Every test prints one
//! PASS/FAIL line (visible with `--nocapture`).

use std::time::Instant;

use ffchar::sweep::{
    census, reports_to_json, run_verify, CheckId, CheckReport, SweepConfig, ALL_CHECKS,
};

/// Grid of every (p, e, m) with p ∈ {2,3,5,7}, e ∈ {1,2}, q^m ≤ limit.
fn grid_config(checks: &[CheckId], limit: u64, quadratic_limit: u64) -> SweepConfig {
    SweepConfig {
        checks: checks.to_vec(),
        limit,
        quadratic_limit,
        ..SweepConfig::default()
    }
}

fn run_and_require_all_pass(tag: &str, cfg: &SweepConfig) -> Vec<CheckReport> {
    let start = Instant::now();
    let reports = run_verify(cfg).expect("sweep configuration is valid");
    let elapsed = start.elapsed();
    let cases: u64 = reports.iter().map(|r| r.cases_run).sum();
    let failures: Vec<&CheckReport> = reports.iter().filter(|r| !r.passed()).collect();
    if failures.is_empty() {
        println!(
            "{tag}: PASS ({cases} cases, {} reports, {elapsed:.2?})",
            reports.len()
        );
    } else {
        println!("{tag}: FAIL");
        for r in &failures {
            println!(
                "  {} {:?}: {}/{} first counterexample: {:?}",
                r.check, r.cell, r.cases_passed, r.cases_run, r.counterexample
            );
        }
    }
    assert!(failures.is_empty(), "{tag} had failing reports");
    reports
}

#[test]
fn criterion_01_additive_sum_closed_form_full_sweep() {
    // every divisor g of x^m − 1, every α, oracle = μ(d)φ(g)/φ(d), q^m ≤ 4096
    let start = Instant::now();
    let cfg = grid_config(&[CheckId::Thm32], 4096, 512);
    run_and_require_all_pass("criterion 1 (thm32, q^m <= 4096)", &cfg);
    assert!(
        start.elapsed().as_secs() < 120,
        "criterion 1 exceeded its two-minute budget"
    );
}

#[test]
fn criterion_02_multiplicative_sum_closed_form_full_sweep() {
    // every d | q^m − 1, every r in [0, q^m − 1), exact Z[ζ] collapse
    let start = Instant::now();
    let cfg = grid_config(&[CheckId::Thm31], 4096, 512);
    run_and_require_all_pass("criterion 2 (thm31, q^m <= 4096)", &cfg);
    assert!(
        start.elapsed().as_secs() < 120,
        "criterion 2 exceeded its two-minute budget"
    );
}

#[test]
fn criterion_03_composed_sums_and_mu_collapse() {
    // cor33: normal α, every g, every f of degree < m at q^m ≤ 512;
    // rem34: Σ_g χ(α) = μ(g) at every cell
    let cfg = grid_config(&[CheckId::Cor33, CheckId::Rem34], 4096, 512);
    run_and_require_all_pass("criterion 3 (cor33 @ 512, rem34 @ 4096)", &cfg);
}

#[test]
fn criterion_04_carlitz_product_law_and_prime_power_formula() {
    let cfg = grid_config(&[CheckId::Lem23, CheckId::Lem24], 1024, 512);
    run_and_require_all_pass("criterion 4 (lem23/lem24, q^m <= 1024)", &cfg);
}

#[test]
fn criterion_05_eta_characteristic_function_both_modes() {
    // η_f(α) ∈ {0,1}, equals [order(α) = f] in oracle- and formula-sum
    // modes, and Σ_f η_f(α) = 1, q^m ≤ 2048
    let cfg = grid_config(&[CheckId::Thm43], 2048, 512);
    run_and_require_all_pass("criterion 5 (thm43, q^m <= 2048)", &cfg);
}

#[test]
fn criterion_06_zeta_characteristic_function_and_census() {
    // ζ_k(α) = [k_normality(α) = k] for all k, census agreement, and the
    // normal count equals φ(x^m − 1)
    let cfg = grid_config(&[CheckId::Thm44], 4096, 512);
    run_and_require_all_pass("criterion 6 (thm44, q^m <= 4096)", &cfg);
    // spot-check the census surface itself
    let rows = census(2, 1, 3, 4096).expect("census builds");
    assert!(rows.iter().all(|r| r.agree));
    assert_eq!(rows[0].count_by_gcd, 3);
}

#[test]
fn criterion_07_phi_lemmas() {
    let cfg = grid_config(&[CheckId::Lem41, CheckId::Lem42], 4096, 512);
    run_and_require_all_pass("criterion 7 (lem41/lem42, all cells)", &cfg);
}

#[test]
fn criterion_08_absolute_sum_identity() {
    let start = Instant::now();
    let cfg = grid_config(&[CheckId::Prop46], 4096, 512);
    run_and_require_all_pass("criterion 8 (prop46, q^m <= 512)", &cfg);
    assert!(
        start.elapsed().as_secs() < 180,
        "criterion 8 exceeded its three-minute budget"
    );
}

#[test]
fn criterion_09_structural_suite() {
    // additive orthogonality; per-order character counts = φ; divisor
    // φ/μ identities (polynomial and integer); primitive-root sums = μ(n)
    // for n ≤ 200; and zero non-integer collapses anywhere
    let cfg = grid_config(&[CheckId::Orthogonality, CheckId::PhiMuIdentities], 4096, 512);
    let reports = run_and_require_all_pass("criterion 9 (structural suite)", &cfg);
    // the non-integer counter is a dedicated case inside phi-mu-identities;
    // make its presence explicit here
    assert!(reports
        .iter()
        .any(|r| r.check == CheckId::PhiMuIdentities && r.cases_run > 4096));
}

#[test]
fn criterion_10_determinism_serial_vs_parallel() {
    let mut cfg = SweepConfig {
        checks: ALL_CHECKS.to_vec(),
        limit: 256,
        quadratic_limit: 256,
        workers: 1,
        ..SweepConfig::default()
    };
    let mut first = run_verify(&cfg).expect("valid config");
    let mut second = run_verify(&cfg).expect("valid config");
    cfg.workers = 4;
    let mut parallel = run_verify(&cfg).expect("valid config");
    for r in first
        .iter_mut()
        .chain(second.iter_mut())
        .chain(parallel.iter_mut())
    {
        r.wall_ms = 0;
    }
    let (a, b, c) = (
        reports_to_json(&first),
        reports_to_json(&second),
        reports_to_json(&parallel),
    );
    assert_eq!(a, b, "two serial runs must be byte-identical modulo timing");
    assert_eq!(a, c, "serial and parallel runs must agree");
    println!(
        "criterion 10 (determinism): PASS ({} reports byte-identical across runs)",
        first.len()
    );
}
