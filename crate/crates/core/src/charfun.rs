//! Characteristic functions built from character sums: η_f detects
//! elements of F_q-order exactly f, ζ_k detects k-normal elements.  Both
//! accumulate exact rationals and must collapse to 0 or 1.
//!
//! Also the two supporting φ-identities: the geometric sum over powers of
//! an irreducible, and the filtered divisor sum Σ φ(hg).

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::fields::{FFElem, FieldCtx, FqCtx};
use crate::linearized::fq_order;
use crate::polyring::{
    self, factor_divisor, factor_xm_minus_1, mu_poly, phi_poly, squarefree_divisors, PolyQ,
    PolyRing,
};
use crate::sums::{additive_sum_formula, additive_sum_oracle};

/// How the inner character sums of η are produced: by enumerating
/// characters, or by the closed form driven by the F_q-order of the
/// argument.  Comparing the two modes is itself one of the checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMode {
    OracleSums,
    FormulaSums,
}

/// A fully evaluated η_f(α): the exact rational before the {0,1} collapse.
#[derive(Debug, Clone)]
pub struct EtaEvaluation {
    pub f: PolyQ,
    pub alpha: FFElem,
    pub numerator: i64,
    pub denominator: i64,
    pub mode: SumMode,
}

impl EtaEvaluation {
    /// The collapsed value; `NonBinaryResult` signals a bug, not a math
    /// failure.
    pub fn value(&self) -> Result<u8> {
        match (self.numerator, self.denominator) {
            (0, _) => Ok(0),
            (n, d) if n == d => Ok(1),
            _ => Err(Error::NonBinaryResult),
        }
    }
}

pub(crate) fn eta_ratio(
    ctx: &FieldCtx,
    f: &PolyQ,
    alpha: &FFElem,
    mode: SumMode,
    skip_non_squarefree_h: bool,
) -> Result<Ratio<i64>> {
    let fq = ctx.fq();
    let ring = PolyRing::new(fq);
    let fact = factor_xm_minus_1(ctx)?;
    let f_fact = factor_divisor(fq, &fact, f)?;
    let quotient = ring.div_exact(&fact.expand(fq), f)?;
    let quot_fact = factor_divisor(fq, &fact, &quotient)?;
    let g_list = polyring::divisors(fq, &quot_fact);
    // non-square-free h carry μ(h) = 0 and contribute nothing; iterating
    // the square-free divisors only is an equivalent-by-μ optimization
    // (checked against the full range in tests)
    let h_list = if skip_non_squarefree_h {
        squarefree_divisors(fq, &f_fact)
    } else {
        polyring::divisors(fq, &f_fact)
    };
    let f1 = fq_order(ctx, alpha)?;

    let mut acc = Ratio::new(0i64, 1);
    for h in &h_list {
        let h_fact = factor_divisor(fq, &fact, h)?;
        let mu_h = mu_poly(&h_fact);
        if mu_h == 0 {
            continue;
        }
        let phi_h = phi_poly(fq, &h_fact);
        for g in &g_list {
            let cofactor = ring.div_exact(&quotient, g)?;
            if !ring.gcd(h, &cofactor).is_one() {
                continue;
            }
            let hg = ring.mul(h, g);
            let s = match mode {
                SumMode::OracleSums => additive_sum_oracle(ctx, &hg, alpha)?,
                SumMode::FormulaSums => additive_sum_formula(ctx, &hg, &f1)?,
            };
            acc += Ratio::new(mu_h * s, phi_h);
        }
    }
    let phi_f = phi_poly(fq, &f_fact);
    let qm = (fq.q() as i64).pow(ctx.m());
    Ok(acc * Ratio::new(phi_f, qm))
}

/// η_f(α) with the full evaluation record.
pub fn eta_evaluation(
    ctx: &FieldCtx,
    f: &PolyQ,
    alpha: &FFElem,
    mode: SumMode,
) -> Result<EtaEvaluation> {
    let v = eta_ratio(ctx, f, alpha, mode, true)?;
    Ok(EtaEvaluation {
        f: f.clone(),
        alpha: alpha.clone(),
        numerator: *v.numer(),
        denominator: *v.denom(),
        mode,
    })
}

/// η_f(α) ∈ {0, 1}: 1 exactly when the F_q-order of α is f.
pub fn eta(ctx: &FieldCtx, f: &PolyQ, alpha: &FFElem, mode: SumMode) -> Result<u8> {
    eta_evaluation(ctx, f, alpha, mode)?.value()
}

/// ζ_k(α) ∈ {0, 1}: 1 exactly when α is k-normal.  k ranges over [0, m];
/// k = m holds only the zero element.
pub fn zeta(ctx: &FieldCtx, k: u32, alpha: &FFElem, mode: SumMode) -> Result<u8> {
    if k > ctx.m() {
        return Err(Error::OutOfRange(k as u64));
    }
    let fq = ctx.fq();
    let fact = factor_xm_minus_1(ctx)?;
    let target = (ctx.m() - k) as usize;
    let mut total = 0u8;
    for f in polyring::divisors(fq, &fact) {
        if f.degree() == Some(target) {
            total += eta(ctx, &f, alpha, mode)?;
        }
    }
    if total > 1 {
        return Err(Error::NonBinaryResult);
    }
    Ok(total)
}

/// Geometric φ-sum over powers of an irreducible u of degree n:
/// Σ_{i=0}^{l} φ(u^i) against φ(u^{l+1})/φ(u).  Returns (lhs, rhs).
pub fn lemma_phi_geometric(fq: &FqCtx, u: &PolyQ, l: u32) -> Result<(i64, i64)> {
    if !polyring::is_irreducible(fq, u) {
        return Err(Error::NotIrreducible);
    }
    let n = u.degree().expect("irreducible is nonzero") as u32;
    let q = fq.q() as i128;
    let qn = q.pow(n);
    let top = qn.checked_pow(l + 1).ok_or(Error::OutOfRange(l as u64))?;
    if top > i64::MAX as i128 {
        return Err(Error::OutOfRange(l as u64));
    }
    let phi_pow = |i: u32| -> i128 {
        if i == 0 {
            1
        } else {
            qn.pow(i) - qn.pow(i - 1)
        }
    };
    let lhs: i128 = (0..=l).map(phi_pow).sum();
    let (num, den) = (phi_pow(l + 1), phi_pow(1));
    assert_eq!(num % den, 0);
    Ok((lhs as i64, (num / den) as i64))
}

/// The filtered divisor sum: for f | x^m − 1 and a square-free divisor h
/// of f, Σ over g | (x^m−1)/f with gcd(h, (x^m−1)/(fg)) = 1 of φ(hg),
/// against q^{deg((x^m−1)/f)}·φ(h).  Returns (lhs, rhs).
pub fn lemma_phi_hg(ctx: &FieldCtx, f: &PolyQ, h: &PolyQ) -> Result<(i64, i64)> {
    let fq = ctx.fq();
    let ring = PolyRing::new(fq);
    let fact = factor_xm_minus_1(ctx)?;
    let f_fact = factor_divisor(fq, &fact, f)?;
    let h_in_f = factor_divisor(fq, &f_fact, h)?;
    if !h_in_f.is_squarefree() {
        return Err(Error::NotSquareFree);
    }
    let quotient = ring.div_exact(&fact.expand(fq), f)?;
    let quot_fact = factor_divisor(fq, &fact, &quotient)?;

    let mut lhs = 0i64;
    for g in polyring::divisors(fq, &quot_fact) {
        let cofactor = ring.div_exact(&quotient, &g)?;
        if !ring.gcd(h, &cofactor).is_one() {
            continue;
        }
        let hg = ring.mul(h, &g);
        lhs += phi_poly(fq, &factor_divisor(fq, &fact, &hg)?);
    }
    let rhs = (fq.q() as i64).pow(quotient.degree().expect("divisor of x^m - 1") as u32)
        * phi_poly(fq, &factor_divisor(fq, &fact, h)?);
    Ok((lhs, rhs))
}
