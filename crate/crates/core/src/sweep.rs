//! Batch verification: per-cell caches, the thirteen identity checks,
//! deterministic machine-readable reports, and the k-normality census.
//!
//! Every check runs its cases in a fixed order, so the recorded
//! counterexample (if any) is the minimal failing case in that order;
//! reports are sorted by (check, cell) after execution, which makes serial
//! and parallel runs byte-identical apart from wall-time fields.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic;
use crate::error::{Error, Result};
use crate::fields::{build_field, FieldCtx, DEFAULT_LIMIT, DEFAULT_QUADRATIC_LIMIT};
use crate::intarith::{divisors_int, gcd_u64, mu_int, phi_int};
use crate::linearized::{apply_linearized, apply_linearized_idx, frobenius_orbit, k_normality};
use crate::polyring::{
    self, factor_divisor, factor_xm_minus_1, mu_poly, phi_poly, w_poly, FactoredPoly, PolyQ,
};
use crate::sums::{additive_sum_formula, mult_sum_formula};
use crate::textio::format_poly;

// ---------------------------------------------------------------------------
// Configuration and report types
// ---------------------------------------------------------------------------

/// One (p, e, m) grid cell: F_{q^m} with q = p^e.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub p: u64,
    pub e: u32,
    pub m: u32,
}

/// The verification checks, named by their report identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CheckId {
    #[serde(rename = "thm31")]
    Thm31,
    #[serde(rename = "thm32")]
    Thm32,
    #[serde(rename = "cor33")]
    Cor33,
    #[serde(rename = "rem34")]
    Rem34,
    #[serde(rename = "lem23")]
    Lem23,
    #[serde(rename = "lem24")]
    Lem24,
    #[serde(rename = "thm43")]
    Thm43,
    #[serde(rename = "thm44")]
    Thm44,
    #[serde(rename = "lem41")]
    Lem41,
    #[serde(rename = "lem42")]
    Lem42,
    #[serde(rename = "prop46")]
    Prop46,
    #[serde(rename = "orthogonality")]
    Orthogonality,
    #[serde(rename = "phi-mu-identities")]
    PhiMuIdentities,
}

/// All checks in report order.
pub const ALL_CHECKS: [CheckId; 13] = [
    CheckId::Thm31,
    CheckId::Thm32,
    CheckId::Cor33,
    CheckId::Rem34,
    CheckId::Lem23,
    CheckId::Lem24,
    CheckId::Thm43,
    CheckId::Thm44,
    CheckId::Lem41,
    CheckId::Lem42,
    CheckId::Prop46,
    CheckId::Orthogonality,
    CheckId::PhiMuIdentities,
];

impl CheckId {
    pub fn name(self) -> &'static str {
        match self {
            CheckId::Thm31 => "thm31",
            CheckId::Thm32 => "thm32",
            CheckId::Cor33 => "cor33",
            CheckId::Rem34 => "rem34",
            CheckId::Lem23 => "lem23",
            CheckId::Lem24 => "lem24",
            CheckId::Thm43 => "thm43",
            CheckId::Thm44 => "thm44",
            CheckId::Lem41 => "lem41",
            CheckId::Lem42 => "lem42",
            CheckId::Prop46 => "prop46",
            CheckId::Orthogonality => "orthogonality",
            CheckId::PhiMuIdentities => "phi-mu-identities",
        }
    }

    pub fn parse(s: &str) -> Option<CheckId> {
        ALL_CHECKS.iter().copied().find(|c| c.name() == s)
    }
}

impl std::fmt::Display for CheckId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Range specification expanding to every (p, e, m) with q^m ≤ max_size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AutoCells {
    pub ps: Vec<u64>,
    pub es: Vec<u32>,
    pub max_size: u64,
}

/// Sweep configuration; mirrors the CLI's JSON config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Explicit cells; used when present.
    pub cells: Option<Vec<(u64, u32, u32)>>,
    /// Expanded grid; used when `cells` is absent.  Defaults to
    /// p ∈ {2,3,5,7}, e ∈ {1,2}, q^m ≤ limit.
    pub auto_cells: Option<AutoCells>,
    pub checks: Vec<CheckId>,
    /// Full-sweep cap on q^m.
    pub limit: u64,
    /// Cap for quadratic-cost checks (cor33, prop46, orthogonality).
    pub quadratic_limit: u64,
    /// Worker threads; 0 = all cores, 1 = strictly serial.
    pub workers: usize,
    pub out: Option<String>,
}

impl Default for SweepConfig {
    fn default() -> SweepConfig {
        SweepConfig {
            cells: None,
            auto_cells: None,
            checks: ALL_CHECKS.to_vec(),
            limit: DEFAULT_LIMIT,
            quadratic_limit: DEFAULT_QUADRATIC_LIMIT,
            workers: 0,
            out: None,
        }
    }
}

/// The first failing case of a check: its parameters and the two values
/// that were required to be equal (`oracle` = computed, `formula` =
/// expected).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub params: String,
    pub oracle: i64,
    pub formula: i64,
}

/// Outcome of one (check, cell) pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: CheckId,
    pub cell: Cell,
    pub cases_run: u64,
    pub cases_passed: u64,
    pub counterexample: Option<Counterexample>,
    pub wall_ms: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.cases_passed == self.cases_run
    }
}

/// Serializes reports deterministically (field order fixed by the struct).
pub fn reports_to_json(reports: &[CheckReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Per-cell cache
// ---------------------------------------------------------------------------

/// Everything the checks need about one cell, computed once: the divisor
/// lattice of x^m − 1 in exponent coordinates, the F_q-order of every
/// element, the order of every additive character, the full oracle table
/// of additive character sums, and the closed-form table beside it.
pub struct CellCache {
    pub cell: Cell,
    pub ctx: FieldCtx,
    pub xm1_fact: FactoredPoly,
    pub divisors: Vec<PolyQ>,
    /// Exponent vector of each divisor in the factor basis.
    pub div_exps: Vec<Vec<u32>>,
    pub div_deg: Vec<usize>,
    pub div_phi: Vec<i64>,
    pub div_mu: Vec<i64>,
    pub div_w: Vec<i64>,
    exp_index: HashMap<Vec<u32>, usize>,
    /// Index of (x^m − 1)/f for each divisor f.
    pub quotient_of: Vec<usize>,
    /// Indices of all divisors of each divisor.
    pub sub_divs_of: Vec<Vec<usize>>,
    /// Indices of the square-free divisors of each divisor.
    pub sqfree_divs_of: Vec<Vec<usize>>,
    /// Divisor index of the F_q-order of each element.
    pub fq_order_of: Vec<u32>,
    /// Divisor index of the F_q-order of each additive character χ_β.
    pub char_order_of: Vec<u32>,
    /// β indices grouped by character order.
    pub classes: Vec<Vec<u32>>,
    /// oracle[g][α]: Σ χ(α) over characters of order g, by enumeration.
    pub oracle: Vec<Vec<i64>>,
    /// formula[g][f1]: the closed form for elements of F_q-order f1.
    pub formula_tbl: Vec<Vec<i64>>,
    /// Sums that failed to collapse to an integer (always 0).
    pub noninteger_count: u64,
    /// Enumeration index of the first normal element.
    pub first_normal: u64,
    pub mult_divisors: Vec<u64>,
    /// j's of the multiplicative characters of each order.
    pub mult_classes: Vec<Vec<u32>>,
}

impl CellCache {
    pub fn build(cell: Cell, limit: u64) -> Result<CellCache> {
        let ctx = build_field(cell.p, cell.e, cell.m, limit)?;
        let size = ctx.size();
        let p = ctx.p() as usize;

        let xm1_fact = factor_xm_minus_1(&ctx)?;
        let divisors = polyring::divisors(ctx.fq(), &xm1_fact);
        let ndiv = divisors.len();
        let nfac = xm1_fact.factors.len();

        let mut div_exps = Vec::with_capacity(ndiv);
        let mut div_deg = Vec::with_capacity(ndiv);
        let mut div_phi = Vec::with_capacity(ndiv);
        let mut div_mu = Vec::with_capacity(ndiv);
        let mut div_w = Vec::with_capacity(ndiv);
        let mut exp_index = HashMap::new();
        for (i, d) in divisors.iter().enumerate() {
            let f = factor_divisor(ctx.fq(), &xm1_fact, d)?;
            let mut exps = vec![0u32; nfac];
            for (u, e) in &f.factors {
                let k = xm1_fact
                    .factors
                    .iter()
                    .position(|(v, _)| v == u)
                    .expect("factor basis is fixed");
                exps[k] = *e;
            }
            div_deg.push(d.degree().unwrap_or(0));
            div_phi.push(phi_poly(ctx.fq(), &f));
            div_mu.push(mu_poly(&f));
            div_w.push(w_poly(&f));
            exp_index.insert(exps.clone(), i);
            div_exps.push(exps);
        }

        let full = &div_exps[ndiv - 1];
        let quotient_of: Vec<usize> = div_exps
            .iter()
            .map(|e| {
                let q: Vec<u32> = full.iter().zip(e).map(|(a, b)| a - b).collect();
                exp_index[&q]
            })
            .collect();
        let sub_divs_of: Vec<Vec<usize>> = div_exps
            .iter()
            .map(|e| {
                (0..ndiv)
                    .filter(|&j| div_exps[j].iter().zip(e).all(|(a, b)| a <= b))
                    .collect()
            })
            .collect();
        let sqfree_divs_of: Vec<Vec<usize>> = div_exps
            .iter()
            .map(|e| {
                (0..ndiv)
                    .filter(|&j| {
                        div_exps[j]
                            .iter()
                            .zip(e)
                            .all(|(a, b)| *a <= 1 && a <= b)
                    })
                    .collect()
            })
            .collect();

        // F_q-order of every element: scan the divisor list in order; the
        // last divisor x^m - 1 annihilates everything.
        let mut fq_order_of = vec![(ndiv - 1) as u32; size as usize];
        for idx in 0..size {
            let orbit = frobenius_orbit(&ctx, idx);
            for (i, d) in divisors.iter().enumerate().take(ndiv - 1) {
                if apply_linearized_idx(&ctx, d.coeffs(), &orbit) == 0 {
                    fq_order_of[idx as usize] = i as u32;
                    break;
                }
            }
        }

        // Character orders by the definition: test χ(f∘γ) = 1 on the fixed
        // spanning set, with the images f∘γ precomputed per divisor.
        let span = crate::characters::spanning_set(&ctx);
        let span_images: Vec<Vec<u64>> = divisors
            .iter()
            .map(|f| {
                span.iter()
                    .map(|g| ctx.index_of(&apply_linearized(&ctx, f, g)))
                    .collect()
            })
            .collect();
        let mut char_order_of = vec![(ndiv - 1) as u32; size as usize];
        let mut classes = vec![Vec::new(); ndiv];
        for beta in 0..size {
            for (i, imgs) in span_images.iter().enumerate() {
                if imgs
                    .iter()
                    .all(|&img| ctx.trace_idx(ctx.mul_idx(beta, img)) == 0)
                {
                    char_order_of[beta as usize] = i as u32;
                    break;
                }
            }
            classes[char_order_of[beta as usize] as usize].push(beta as u32);
        }

        // Oracle table: exact Z[ζ_p] accumulation by trace histogram.
        let mut noninteger_count = 0u64;
        let mut oracle = Vec::with_capacity(ndiv);
        let mut counts = vec![0i64; p];
        for class in &classes {
            let mut row = Vec::with_capacity(size as usize);
            for alpha in 0..size {
                counts.iter_mut().for_each(|c| *c = 0);
                for &beta in class {
                    counts[ctx.trace_idx(ctx.mul_idx(beta as u64, alpha)) as usize] += 1;
                }
                let v = cyclotomic::from_exponent_counts(ctx.p(), &counts)?;
                match v.as_integer() {
                    Some(i) => row.push(i),
                    None => {
                        noninteger_count += 1;
                        row.push(i64::MIN);
                    }
                }
            }
            oracle.push(row);
        }

        let mut formula_tbl = Vec::with_capacity(ndiv);
        for g in &divisors {
            let mut row = Vec::with_capacity(ndiv);
            for f1 in &divisors {
                row.push(additive_sum_formula(&ctx, g, f1)?);
            }
            formula_tbl.push(row);
        }

        let first_normal = (0..size)
            .find(|&i| fq_order_of[i as usize] as usize == ndiv - 1)
            .expect("normal elements exist in every extension");

        let n = ctx.group_order();
        let mult_divisors = divisors_int(n);
        let mut mult_classes = vec![Vec::new(); mult_divisors.len()];
        for j in 0..n {
            let d = n / gcd_u64(n, j);
            let pos = mult_divisors
                .binary_search(&d)
                .expect("order divides the group order");
            mult_classes[pos].push(j as u32);
        }

        Ok(CellCache {
            cell,
            ctx,
            xm1_fact,
            divisors,
            div_exps,
            div_deg,
            div_phi,
            div_mu,
            div_w,
            exp_index,
            quotient_of,
            sub_divs_of,
            sqfree_divs_of,
            fq_order_of,
            char_order_of,
            classes,
            oracle,
            formula_tbl,
            noninteger_count,
            first_normal,
            mult_divisors,
            mult_classes,
        })
    }

    pub fn ndiv(&self) -> usize {
        self.divisors.len()
    }

    fn div_index(&self, exps: &[u32]) -> usize {
        self.exp_index[exps]
    }

    /// Exponent vector of an arbitrary divisor of x^m − 1.
    fn exps_of(&self, f: &PolyQ) -> Result<Vec<u32>> {
        let fa = factor_divisor(self.ctx.fq(), &self.xm1_fact, f)?;
        let mut exps = vec![0u32; self.xm1_fact.factors.len()];
        for (u, e) in &fa.factors {
            let k = self
                .xm1_fact
                .factors
                .iter()
                .position(|(v, _)| v == u)
                .expect("factor basis is fixed");
            exps[k] = *e;
        }
        Ok(exps)
    }

    fn poly_name(&self, i: usize) -> String {
        format_poly(self.ctx.fq(), &self.divisors[i])
    }

    /// Builds the PolyQ with the base-q digits of `key` as coefficients.
    fn poly_from_key(&self, key: u64) -> PolyQ {
        let q = self.ctx.q();
        let m = self.ctx.m() as usize;
        let mut coeffs = Vec::with_capacity(m);
        let mut k = key;
        for _ in 0..m {
            coeffs.push(k % q);
            k /= q;
        }
        PolyQ::from_coeffs(coeffs)
    }
}

// ---------------------------------------------------------------------------
// η/ζ over the cache (common-denominator integer accumulation)
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct EtaTerm {
    /// μ(h) · φ(f)/φ(h), the integer weight of the (h, g) pair.
    weight: i64,
    hg: usize,
}

/// The (h, g) terms of η_f, flattened; η_f(α)·q^m = Σ weight · S(hg, α).
fn eta_terms(cache: &CellCache, fi: usize) -> Vec<EtaTerm> {
    let qi = cache.quotient_of[fi];
    let mut terms = Vec::new();
    for &hi in &cache.sqfree_divs_of[fi] {
        let mu_h = cache.div_mu[hi];
        debug_assert!(mu_h != 0);
        let phi_h = cache.div_phi[hi];
        let phi_f = cache.div_phi[fi];
        debug_assert_eq!(phi_f % phi_h, 0);
        let weight = mu_h * (phi_f / phi_h);
        for &gi in &cache.sub_divs_of[qi] {
            // filter: gcd(h, (x^m−1)/(f·g)) = 1 in exponent coordinates
            let coprime = cache.div_exps[hi]
                .iter()
                .zip(cache.div_exps[qi].iter().zip(&cache.div_exps[gi]))
                .all(|(&h_e, (&q_e, &g_e))| h_e == 0 || q_e - g_e == 0);
            if !coprime {
                continue;
            }
            let hg_exps: Vec<u32> = cache.div_exps[hi]
                .iter()
                .zip(&cache.div_exps[gi])
                .map(|(a, b)| a + b)
                .collect();
            terms.push(EtaTerm {
                weight,
                hg: cache.div_index(&hg_exps),
            });
        }
    }
    terms
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Oracle,
    Formula,
}

/// η_f(α) · q^m as an exact integer; collapses to 0 or q^m when the
/// identity holds.
fn eta_numerator(cache: &CellCache, terms: &[EtaTerm], alpha: usize, mode: Mode) -> i128 {
    let f1 = cache.fq_order_of[alpha] as usize;
    terms
        .iter()
        .map(|t| {
            let s = match mode {
                Mode::Oracle => cache.oracle[t.hg][alpha],
                Mode::Formula => cache.formula_tbl[t.hg][f1],
            };
            t.weight as i128 * s as i128
        })
        .sum()
}

// ---------------------------------------------------------------------------
// Check outcomes
// ---------------------------------------------------------------------------

struct Outcome {
    run: u64,
    passed: u64,
    counterexample: Option<Counterexample>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome {
            run: 0,
            passed: 0,
            counterexample: None,
        }
    }

    fn case(&mut self, got: i64, want: i64, params: impl FnOnce() -> String) {
        self.run += 1;
        if got == want {
            self.passed += 1;
        } else if self.counterexample.is_none() {
            self.counterexample = Some(Counterexample {
                params: params(),
                oracle: got,
                formula: want,
            });
        }
    }
}

fn check_thm32(cache: &CellCache) -> Outcome {
    let mut out = Outcome::new();
    for gi in 0..cache.ndiv() {
        for alpha in 0..cache.ctx.size() as usize {
            let got = cache.oracle[gi][alpha];
            let want = cache.formula_tbl[gi][cache.fq_order_of[alpha] as usize];
            out.case(got, want, || {
                format!("g={}, alpha={}", cache.poly_name(gi), alpha)
            });
        }
    }
    out
}

fn check_thm31(cache: &CellCache) -> Outcome {
    let mut out = Outcome::new();
    let n = cache.ctx.group_order();
    let dim = phi_int(n) as usize;
    // reduced rows x^k mod Φ_n for k ≥ dim (below dim they are unit rows)
    let mut rows: Vec<i32> = Vec::with_capacity((n as usize).saturating_sub(dim) * dim);
    cyclotomic::visit_x_power_rows(n, |k, row| {
        if k >= dim {
            rows.extend(
                row.iter()
                    .map(|&v| i32::try_from(v).expect("reduced power of x fits in i32")),
            );
        }
    })
    .expect("group order is far below the cyclotomic bound");

    const CHUNK: u64 = 512;
    for (di, &d) in cache.mult_divisors.iter().enumerate() {
        let class = &cache.mult_classes[di];
        let nchunks = n.div_ceil(CHUNK).max(1);
        let results: Vec<(u64, Option<(u64, i64, i64)>)> = (0..nchunks)
            .into_par_iter()
            .map(|ci| {
                let lo = ci * CHUNK;
                let hi = ((ci + 1) * CHUNK).min(n);
                let mut cnt = vec![0u32; n as usize];
                let mut touched: Vec<usize> = Vec::with_capacity(class.len());
                let mut acc = vec![0i64; dim];
                let mut passed = 0u64;
                let mut first_fail: Option<(u64, i64, i64)> = None;
                for r in lo..hi {
                    for &j in class {
                        let ex = (j as u64 * r % n) as usize;
                        if cnt[ex] == 0 {
                            touched.push(ex);
                        }
                        cnt[ex] += 1;
                    }
                    acc.iter_mut().for_each(|a| *a = 0);
                    for &ex in &touched {
                        let c = cnt[ex] as i64;
                        cnt[ex] = 0;
                        if ex < dim {
                            acc[ex] += c;
                        } else {
                            let row = &rows[(ex - dim) * dim..(ex - dim + 1) * dim];
                            if c == 1 {
                                for (a, &v) in acc.iter_mut().zip(row) {
                                    *a += v as i64;
                                }
                            } else {
                                for (a, &v) in acc.iter_mut().zip(row) {
                                    *a += c * v as i64;
                                }
                            }
                        }
                    }
                    touched.clear();
                    let rational = acc[1..].iter().all(|&a| a == 0);
                    let got = if rational { acc[0] } else { i64::MIN };
                    let want = mult_sum_formula(d, r);
                    if got == want {
                        passed += 1;
                    } else if first_fail.is_none() {
                        first_fail = Some((r, got, want));
                    }
                }
                (passed, first_fail)
            })
            .collect();
        out.run += n;
        for (passed, fail) in results {
            out.passed += passed;
            if out.counterexample.is_none() {
                if let Some((r, got, want)) = fail {
                    out.counterexample = Some(Counterexample {
                        params: format!("d={d}, r={r}"),
                        oracle: got,
                        formula: want,
                    });
                }
            }
        }
    }
    out
}

fn check_cor33(cache: &CellCache) -> Outcome {
    let mut out = Outcome::new();
    let ctx = &cache.ctx;
    let ring = polyring::PolyRing::new(ctx.fq());
    let orbit = frobenius_orbit(ctx, cache.first_normal);
    for gi in 0..cache.ndiv() {
        let g = &cache.divisors[gi];
        for fkey in 0..ctx.size() {
            let f = cache.poly_from_key(fkey);
            let image = apply_linearized_idx(ctx, f.coeffs(), &orbit);
            let got = cache.oracle[gi][image as usize];
            let d = ring
                .div_exact(g, &ring.gcd(g, &f))
                .expect("gcd divides g");
            let di = cache.div_index(&cache.exps_of(&d).expect("d divides x^m - 1"));
            let want = if cache.div_mu[di] == 0 {
                0
            } else {
                cache.div_mu[di] * (cache.div_phi[gi] / cache.div_phi[di])
            };
            out.case(got, want, || {
                format!(
                    "g={}, f={}, alpha={}",
                    cache.poly_name(gi),
                    format_poly(ctx.fq(), &f),
                    cache.first_normal
                )
            });
        }
    }
    out
}

fn check_rem34(cache: &CellCache) -> Outcome {
    let mut out = Outcome::new();
    let alpha = cache.first_normal as usize;
    for gi in 0..cache.ndiv() {
        out.case(cache.oracle[gi][alpha], cache.div_mu[gi], || {
            format!("g={}, alpha={}", cache.poly_name(gi), alpha)
        });
    }
    out
}

fn check_lem23(cache: &CellCache) -> Outcome {
    let mut out = Outcome::new();
    let ndiv = cache.ndiv();
    for i in 0..ndiv {
        for j in i..ndiv {
            let coprime = cache.div_exps[i]
                .iter()
                .zip(&cache.div_exps[j])
                .all(|(&a, &b)| a == 0 || b == 0);
            if !coprime {
                continue;
            }
            let prod_exps: Vec<u32> = cache.div_exps[i]
                .iter()
                .zip(&cache.div_exps[j])
                .map(|(a, b)| a + b)
                .collect();
            let pi = cache.div_index(&prod_exps);
            for alpha in 0..cache.ctx.size() as usize {
                let got = cache.oracle[pi][alpha];
                let want = cache.oracle[i][alpha] * cache.oracle[j][alpha];
                out.case(got, want, || {
                    format!(
                        "a1={}, a2={}, alpha={}",
                        cache.poly_name(i),
                        cache.poly_name(j),
                        alpha
                    )
                });
            }
        }
    }
    out
}

fn check_lem24(cache: &CellCache) -> Outcome {
    let mut out = Outcome::new();
    let q = cache.ctx.q() as i64;
    let full = &cache.div_exps[cache.ndiv() - 1];
    for (ui, (u, a)) in cache.xm1_fact.factors.iter().enumerate() {
        let abs_u = q.pow(u.degree().expect("irreducible") as u32);
        for exp in 1..=*a {
            let mut ue_exps = vec![0u32; cache.xm1_fact.factors.len()];
            ue_exps[ui] = exp;
            let uei = cache.div_index(&ue_exps);
            for alpha in 0..cache.ctx.size() as usize {
                let k = cache.fq_order_of[alpha] as usize;
                // l = (x^m - 1)/k; multiplicity of u in l
                let v = full[ui] - cache.div_exps[k][ui];
                let want = if v >= exp {
                    abs_u.pow(exp) - abs_u.pow(exp - 1)
                } else if v >= exp - 1 {
                    -abs_u.pow(exp - 1)
                } else {
                    0
                };
                out.case(cache.oracle[uei][alpha], want, || {
                    format!(
                        "u={}, e={}, alpha={}",
                        format_poly(cache.ctx.fq(), u),
                        exp,
                        alpha
                    )
                });
            }
        }
    }
    out
}

fn check_thm43(cache: &CellCache) -> Outcome {
    let mut out = Outcome::new();
    let qm = (cache.ctx.q() as i128).pow(cache.ctx.m());
    let terms: Vec<Vec<EtaTerm>> = (0..cache.ndiv()).map(|fi| eta_terms(cache, fi)).collect();
    for alpha in 0..cache.ctx.size() as usize {
        let mut partition = [0i64; 2];
        for fi in 0..cache.ndiv() {
            let indicator = i64::from(cache.fq_order_of[alpha] as usize == fi);
            for (mi, mode) in [Mode::Oracle, Mode::Formula].into_iter().enumerate() {
                let num = eta_numerator(cache, &terms[fi], alpha, mode);
                let got = if num == 0 {
                    0
                } else if num == qm {
                    1
                } else {
                    i64::MIN // non-binary value: always a failure
                };
                partition[mi] = partition[mi].saturating_add(got);
                out.case(got, indicator, || {
                    format!(
                        "f={}, alpha={}, mode={}",
                        cache.poly_name(fi),
                        alpha,
                        if mode == Mode::Oracle { "oracle" } else { "formula" }
                    )
                });
            }
        }
        out.case(partition[0], 1, || format!("partition (oracle) alpha={alpha}"));
        out.case(partition[1], 1, || format!("partition (formula) alpha={alpha}"));
    }
    out
}

fn check_thm44(cache: &CellCache) -> Outcome {
    let mut out = Outcome::new();
    let ctx = &cache.ctx;
    let m = ctx.m();
    let qm = (ctx.q() as i128).pow(m);
    let terms: Vec<Vec<EtaTerm>> = (0..cache.ndiv()).map(|fi| eta_terms(cache, fi)).collect();
    let knorm: Vec<u32> = (0..ctx.size())
        .map(|i| k_normality(ctx, &ctx.element(i)))
        .collect();
    let divisors_by_deg: Vec<Vec<usize>> = (0..=m as usize)
        .map(|d| {
            (0..cache.ndiv())
                .filter(|&fi| cache.div_deg[fi] == d)
                .collect()
        })
        .collect();

    let mut count_gcd = vec![0u64; m as usize + 1];
    let mut count_zeta = vec![0u64; m as usize + 1];
    for alpha in 0..ctx.size() as usize {
        count_gcd[knorm[alpha] as usize] += 1;
        for k in 0..=m {
            let fis = &divisors_by_deg[(m - k) as usize];
            for mode in [Mode::Oracle, Mode::Formula] {
                let mut z = 0i64;
                for &fi in fis {
                    let num = eta_numerator(cache, &terms[fi], alpha, mode);
                    z = z.saturating_add(if num == 0 {
                        0
                    } else if num == qm {
                        1
                    } else {
                        i64::MIN
                    });
                }
                if mode == Mode::Formula && z == 1 {
                    count_zeta[k as usize] += 1;
                }
                out.case(z, i64::from(knorm[alpha] == k), || {
                    format!(
                        "k={k}, alpha={alpha}, mode={}",
                        if mode == Mode::Oracle { "oracle" } else { "formula" }
                    )
                });
            }
        }
    }
    // census agreement and the normal count against φ(x^m − 1)
    for k in 0..=m as usize {
        out.case(count_zeta[k] as i64, count_gcd[k] as i64, || {
            format!("census k={k}")
        });
    }
    out.case(
        count_gcd[0] as i64,
        cache.div_phi[cache.ndiv() - 1],
        || "normal count vs phi(x^m - 1)".to_string(),
    );
    out
}

fn check_lem41(cache: &CellCache) -> Outcome {
    let mut out = Outcome::new();
    for (u, a) in &cache.xm1_fact.factors {
        for l in 0..=*a {
            match crate::charfun::lemma_phi_geometric(cache.ctx.fq(), u, l) {
                Ok((lhs, rhs)) => out.case(lhs, rhs, || {
                    format!("u={}, l={}", format_poly(cache.ctx.fq(), u), l)
                }),
                Err(e) => out.case(0, 1, || {
                    format!("u={}, l={} errored: {e}", format_poly(cache.ctx.fq(), u), l)
                }),
            }
        }
    }
    out
}

fn check_lem42(cache: &CellCache) -> Outcome {
    let mut out = Outcome::new();
    for fi in 0..cache.ndiv() {
        for &hi in &cache.sqfree_divs_of[fi] {
            match crate::charfun::lemma_phi_hg(
                &cache.ctx,
                &cache.divisors[fi],
                &cache.divisors[hi],
            ) {
                Ok((lhs, rhs)) => out.case(lhs, rhs, || {
                    format!("f={}, h={}", cache.poly_name(fi), cache.poly_name(hi))
                }),
                Err(e) => out.case(0, 1, || {
                    format!(
                        "f={}, h={} errored: {e}",
                        cache.poly_name(fi),
                        cache.poly_name(hi)
                    )
                }),
            }
        }
    }
    out
}

fn check_prop46(cache: &CellCache) -> Outcome {
    let mut out = Outcome::new();
    let ctx = &cache.ctx;
    let q = ctx.q() as i64;
    let m = ctx.m();
    let orbit = frobenius_orbit(ctx, cache.first_normal);
    for gi in 0..cache.ndiv() {
        let mut lhs = 0i64;
        for fkey in 0..ctx.size() {
            let f = cache.poly_from_key(fkey);
            let image = apply_linearized_idx(ctx, f.coeffs(), &orbit);
            lhs += cache.oracle[gi][image as usize].abs();
        }
        let rhs = q.pow(m - cache.div_deg[gi] as u32) * cache.div_phi[gi] * cache.div_w[gi];
        out.case(lhs, rhs, || {
            format!("g={}, alpha={}", cache.poly_name(gi), cache.first_normal)
        });
    }
    out
}

fn check_orthogonality(cache: &CellCache) -> Outcome {
    let mut out = Outcome::new();
    let ctx = &cache.ctx;
    let p = ctx.p() as usize;
    let size = ctx.size();
    let mut counts = vec![0i64; p];
    for gamma in 0..size {
        counts.iter_mut().for_each(|c| *c = 0);
        for beta in 0..size {
            counts[ctx.trace_idx(ctx.mul_idx(beta, gamma)) as usize] += 1;
        }
        let total = cyclotomic::from_exponent_counts(ctx.p(), &counts)
            .expect("p is within the cyclotomic bound");
        let got = total.as_integer().unwrap_or(i64::MIN);
        let want = if gamma == 0 { size as i64 } else { 0 };
        out.case(got, want, || format!("gamma={gamma}"));
    }
    // character counts per order match φ, and the classes partition
    for gi in 0..cache.ndiv() {
        out.case(cache.classes[gi].len() as i64, cache.div_phi[gi], || {
            format!("class size g={}", cache.poly_name(gi))
        });
    }
    let total: usize = cache.classes.iter().map(Vec::len).sum();
    out.case(total as i64, size as i64, || "class partition".to_string());
    out
}

fn check_phi_mu(cache: &CellCache) -> Outcome {
    let mut out = Outcome::new();
    let ctx = &cache.ctx;
    let q = ctx.q() as i64;
    // polynomial side, per divisor
    for fi in 0..cache.ndiv() {
        let subs = &cache.sub_divs_of[fi];
        let phi_sum: i64 = subs.iter().map(|&j| cache.div_phi[j]).sum();
        out.case(phi_sum, q.pow(cache.div_deg[fi] as u32), || {
            format!("sum phi over divisors of {}", cache.poly_name(fi))
        });
        let mu_sum: i64 = subs.iter().map(|&j| cache.div_mu[j]).sum();
        out.case(mu_sum, i64::from(cache.div_deg[fi] == 0), || {
            format!("sum mu over divisors of {}", cache.poly_name(fi))
        });
        let brute = polyring::phi_poly_bruteforce(ctx.fq(), &cache.divisors[fi]);
        out.case(cache.div_phi[fi], brute as i64, || {
            format!("phi formula vs count for {}", cache.poly_name(fi))
        });
    }
    // integer side
    for n in 1..=DEFAULT_LIMIT {
        let divs = divisors_int(n);
        let phi_sum: u64 = divs.iter().map(|&d| phi_int(d)).sum();
        let mu_sum: i64 = divs.iter().map(|&d| mu_int(d)).sum();
        let ok = phi_sum == n && mu_sum == i64::from(n == 1);
        out.case(i64::from(ok), 1, || format!("integer identities at n={n}"));
    }
    // cyclotomic side
    for n in 1..=200u64 {
        let prim = cyclotomic::primitive_root_sum(n)
            .expect("n within bound")
            .as_integer()
            .unwrap_or(i64::MIN);
        out.case(prim, mu_int(n), || format!("primitive root sum n={n}"));
        if n >= 2 {
            let all = cyclotomic::all_root_sum(n).expect("n within bound");
            out.case(i64::from(all.is_zero()), 1, || format!("full root sum n={n}"));
        }
        let one = cyclotomic::root_power(n, 0)
            .expect("n within bound")
            .as_integer()
            .unwrap_or(i64::MIN);
        out.case(one, 1, || format!("zeta^0 n={n}"));
    }
    // every oracle sum collapsed to an integer
    out.case(cache.noninteger_count as i64, 0, || {
        "non-integer oracle sums".to_string()
    });
    out
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

/// Size cap above which a check is skipped for a cell; the quadratic-cost
/// checks use the dedicated limit, the rest the caps they were specified
/// with.
pub fn check_cap(check: CheckId, cfg: &SweepConfig) -> u64 {
    match check {
        CheckId::Thm31 | CheckId::Thm32 | CheckId::Rem34 | CheckId::Thm44 => cfg.limit,
        CheckId::Lem23 | CheckId::Lem24 => cfg.limit.min(1024),
        CheckId::Thm43 => cfg.limit.min(2048),
        CheckId::Lem41 | CheckId::Lem42 | CheckId::PhiMuIdentities => cfg.limit,
        CheckId::Cor33 | CheckId::Prop46 | CheckId::Orthogonality => cfg.quadratic_limit,
    }
}

fn cell_size(cell: Cell) -> u128 {
    (cell.p as u128).pow(cell.e * cell.m)
}

/// Expands the configured cells, validating each against the limit.
pub fn resolve_cells(cfg: &SweepConfig) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    if let Some(explicit) = &cfg.cells {
        for &(p, e, m) in explicit {
            cells.push(Cell { p, e, m });
        }
    } else {
        let auto = cfg.auto_cells.clone().unwrap_or(AutoCells {
            ps: vec![2, 3, 5, 7],
            es: vec![1, 2],
            max_size: cfg.limit,
        });
        for &p in &auto.ps {
            for &e in &auto.es {
                let mut m = 1u32;
                while cell_size(Cell { p, e, m }) <= auto.max_size as u128 {
                    cells.push(Cell { p, e, m });
                    m += 1;
                }
            }
        }
    }
    for &cell in &cells {
        if !crate::intarith::is_prime(cell.p) {
            return Err(Error::NotPrime(cell.p));
        }
        if cell.e == 0 || cell.m == 0 {
            return Err(Error::OutOfRange(0));
        }
        if cell_size(cell) > cfg.limit as u128 {
            return Err(Error::SizeExceeded {
                size: cell_size(cell),
                limit: cfg.limit,
            });
        }
    }
    Ok(cells)
}

fn run_check(cache: &CellCache, check: CheckId) -> CheckReport {
    let start = Instant::now();
    let outcome = match check {
        CheckId::Thm31 => check_thm31(cache),
        CheckId::Thm32 => check_thm32(cache),
        CheckId::Cor33 => check_cor33(cache),
        CheckId::Rem34 => check_rem34(cache),
        CheckId::Lem23 => check_lem23(cache),
        CheckId::Lem24 => check_lem24(cache),
        CheckId::Thm43 => check_thm43(cache),
        CheckId::Thm44 => check_thm44(cache),
        CheckId::Lem41 => check_lem41(cache),
        CheckId::Lem42 => check_lem42(cache),
        CheckId::Prop46 => check_prop46(cache),
        CheckId::Orthogonality => check_orthogonality(cache),
        CheckId::PhiMuIdentities => check_phi_mu(cache),
    };
    CheckReport {
        check,
        cell: cache.cell,
        cases_run: outcome.run,
        cases_passed: outcome.passed,
        counterexample: outcome.counterexample,
        wall_ms: start.elapsed().as_millis() as u64,
    }
}

/// Runs every selected check over every selected cell and returns the
/// reports sorted by (check, cell).  `workers == 1` runs strictly
/// serially; any other value uses a worker pool of that size (0 = all
/// cores).  Results are identical either way apart from wall times.
pub fn run_verify(cfg: &SweepConfig) -> Result<Vec<CheckReport>> {
    if cfg.checks.is_empty() {
        return Err(Error::OutOfRange(0));
    }
    let cells = resolve_cells(cfg)?;
    let mut work: Vec<(CheckId, Cell)> = Vec::new();
    for &check in &cfg.checks {
        for &cell in &cells {
            if cell_size(cell) <= check_cap(check, cfg) as u128 {
                work.push((check, cell));
            }
        }
    }
    let mut unique_cells: Vec<Cell> = work.iter().map(|&(_, c)| c).collect();
    unique_cells.sort();
    unique_cells.dedup();

    let mut reports: Vec<CheckReport> = if cfg.workers == 1 {
        let mut caches: HashMap<Cell, Arc<CellCache>> = HashMap::new();
        for &cell in &unique_cells {
            caches.insert(cell, Arc::new(CellCache::build(cell, cfg.limit)?));
        }
        work.iter()
            .map(|&(check, cell)| run_check(&caches[&cell], check))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|_| Error::InternalInconsistency("worker pool construction failed"))?;
        pool.install(|| -> Result<Vec<CheckReport>> {
            let caches: HashMap<Cell, Arc<CellCache>> = unique_cells
                .par_iter()
                .map(|&cell| Ok((cell, Arc::new(CellCache::build(cell, cfg.limit)?))))
                .collect::<Result<_>>()?;
            Ok(work
                .par_iter()
                .map(|&(check, cell)| run_check(&caches[&cell], check))
                .collect())
        })?
    };
    reports.sort_by_key(|r| {
        (
            ALL_CHECKS.iter().position(|&c| c == r.check),
            r.cell,
        )
    });
    Ok(reports)
}

// ---------------------------------------------------------------------------
// Census
// ---------------------------------------------------------------------------

/// One census row; `label` is the k value, or "normal" for the final
/// normal-count-vs-φ(x^m−1) row.
#[derive(Debug, Clone, Serialize)]
pub struct CensusRow {
    pub label: String,
    pub count_by_gcd: u64,
    pub count_by_zeta: u64,
    pub agree: bool,
}

/// Classifies every element of the cell by k-normality twice — through
/// the gcd definition and through the ζ_k characteristic function
/// (formula mode) — and tallies both.
pub fn census(p: u64, e: u32, m: u32, limit: u64) -> Result<Vec<CensusRow>> {
    let cache = CellCache::build(Cell { p, e, m }, limit)?;
    let ctx = &cache.ctx;
    let qm = (ctx.q() as i128).pow(ctx.m());
    let terms: Vec<Vec<EtaTerm>> = (0..cache.ndiv()).map(|fi| eta_terms(&cache, fi)).collect();
    let mut count_gcd = vec![0u64; m as usize + 1];
    let mut count_zeta = vec![0u64; m as usize + 1];
    for alpha in 0..ctx.size() as usize {
        count_gcd[k_normality(ctx, &ctx.element(alpha as u64)) as usize] += 1;
        for k in 0..=m {
            let mut z = 0i128;
            for fi in 0..cache.ndiv() {
                if cache.div_deg[fi] == (m - k) as usize {
                    z += eta_numerator(&cache, &terms[fi], alpha, Mode::Formula);
                }
            }
            if z == qm {
                count_zeta[k as usize] += 1;
            } else if z != 0 {
                return Err(Error::NonBinaryResult);
            }
        }
    }
    let mut rows: Vec<CensusRow> = (0..=m as usize)
        .map(|k| CensusRow {
            label: k.to_string(),
            count_by_gcd: count_gcd[k],
            count_by_zeta: count_zeta[k],
            agree: count_gcd[k] == count_zeta[k],
        })
        .collect();
    let phi_full = cache.div_phi[cache.ndiv() - 1] as u64;
    rows.push(CensusRow {
        label: "normal".to_string(),
        count_by_gcd: count_gcd[0],
        count_by_zeta: phi_full,
        agree: count_gcd[0] == phi_full,
    });
    Ok(rows)
}

/// Renders census rows as CSV with a header.
pub fn census_csv(rows: &[CensusRow]) -> String {
    let mut s = String::from("k,count_by_gcd,count_by_zeta,agree\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{}\n",
            r.label, r.count_by_gcd, r.count_by_zeta, r.agree
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfun::{eta, SumMode};

    fn cfg_for(cells: &[(u64, u32, u32)], checks: &[CheckId]) -> SweepConfig {
        SweepConfig {
            cells: Some(cells.to_vec()),
            checks: checks.to_vec(),
            ..SweepConfig::default()
        }
    }

    #[test]
    fn thm32_case_count_on_f8() {
        let cfg = cfg_for(&[(2, 1, 3)], &[CheckId::Thm32]);
        let reports = run_verify(&cfg).unwrap();
        assert_eq!(reports.len(), 1);
        // 4 divisors of x^3 - 1 times 8 elements
        assert_eq!(reports[0].cases_run, 32);
        assert_eq!(reports[0].cases_passed, 32);
        assert!(reports[0].counterexample.is_none());
    }

    #[test]
    fn all_checks_pass_on_tiny_cells() {
        let cfg = cfg_for(&[(2, 1, 1), (2, 1, 2), (2, 1, 3), (3, 1, 2), (2, 2, 2)], &ALL_CHECKS);
        for r in run_verify(&cfg).unwrap() {
            assert!(
                r.passed(),
                "{} on {:?} failed: {:?}",
                r.check,
                r.cell,
                r.counterexample
            );
        }
    }

    #[test]
    fn cached_eta_matches_module_eta() {
        let cache = CellCache::build(Cell { p: 2, e: 1, m: 3 }, 4096).unwrap();
        let qm = 8i128;
        for fi in 0..cache.ndiv() {
            let terms = eta_terms(&cache, fi);
            for alpha in 0..8usize {
                for (mode, module_mode) in [
                    (Mode::Oracle, SumMode::OracleSums),
                    (Mode::Formula, SumMode::FormulaSums),
                ] {
                    let num = eta_numerator(&cache, &terms, alpha, mode);
                    let via_cache = if num == 0 { 0 } else { i64::from(num == qm) };
                    let via_module = eta(
                        &cache.ctx,
                        &cache.divisors[fi],
                        &cache.ctx.element(alpha as u64),
                        module_mode,
                    )
                    .unwrap();
                    assert_eq!(via_cache, via_module as i64);
                }
            }
        }
    }

    #[test]
    fn census_f8() {
        let rows = census(2, 1, 3, 4096).unwrap();
        // F_8: 3 normal, then k=1: 3, k=2: 1 (the element 1), k=3: zero
        assert_eq!(rows[0].count_by_gcd, 3);
        assert_eq!(rows[2].count_by_gcd, 1);
        assert_eq!(rows[3].count_by_gcd, 1);
        let total: u64 = rows[..4].iter().map(|r| r.count_by_gcd).sum();
        assert_eq!(total, 8);
        for r in &rows {
            assert!(r.agree, "row {} disagrees", r.label);
        }
        assert_eq!(rows.last().unwrap().label, "normal");
        assert_eq!(rows.last().unwrap().count_by_zeta, 3);
    }

    #[test]
    fn census_f2_and_f4() {
        let rows = census(2, 1, 1, 4096).unwrap();
        assert_eq!(rows[0].count_by_gcd, 1);
        assert_eq!(rows[1].count_by_gcd, 1);
        let rows = census(2, 1, 2, 4096).unwrap();
        assert_eq!(rows[0].count_by_gcd, 2);
        assert_eq!(rows[1].count_by_gcd, 1);
        assert_eq!(rows[2].count_by_gcd, 1);
    }

    #[test]
    fn serial_and_parallel_agree() {
        let mut cfg = cfg_for(
            &[(2, 1, 3), (3, 1, 2), (2, 2, 2), (5, 1, 1)],
            &[CheckId::Thm32, CheckId::Thm31, CheckId::Thm43, CheckId::PhiMuIdentities],
        );
        cfg.workers = 1;
        let mut serial = run_verify(&cfg).unwrap();
        cfg.workers = 4;
        let mut parallel = run_verify(&cfg).unwrap();
        for r in serial.iter_mut().chain(parallel.iter_mut()) {
            r.wall_ms = 0;
        }
        assert_eq!(reports_to_json(&serial), reports_to_json(&parallel));
    }

    #[test]
    fn config_errors() {
        let cfg = cfg_for(&[(4, 1, 2)], &[CheckId::Thm32]);
        assert_eq!(run_verify(&cfg).unwrap_err(), Error::NotPrime(4));
        let cfg = cfg_for(&[(2, 1, 13)], &[CheckId::Thm32]);
        assert!(matches!(
            run_verify(&cfg).unwrap_err(),
            Error::SizeExceeded { .. }
        ));
        let cfg = cfg_for(&[(2, 1, 2)], &[]);
        assert!(run_verify(&cfg).is_err());
    }

    #[test]
    fn json_round_trips() {
        let cfg: SweepConfig = serde_json::from_str(
            r#"{"cells": [[2,1,3]], "checks": ["thm32", "phi-mu-identities"], "limit": 512}"#,
        )
        .unwrap();
        assert_eq!(cfg.limit, 512);
        assert_eq!(cfg.checks, vec![CheckId::Thm32, CheckId::PhiMuIdentities]);
        let reports = run_verify(&cfg).unwrap();
        let json = reports_to_json(&reports);
        let back: Vec<CheckReport> = serde_json::from_str(&json).unwrap();
        assert_eq!(back.len(), reports.len());
    }
}
