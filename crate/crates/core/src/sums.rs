//! Character-sum quantities, each in two independent forms: a brute-force
//! oracle over enumerated characters and a closed formula, compared as
//! exact integers.
//!
//! Oracles accumulate in Z[ζ_n] and collapse through `as_integer`; a value
//! that fails to collapse is a hard `NonIntegerSum` error because the
//! theory forces every complete sum here to be rational.

use serde::Serialize;

use crate::characters::{additive_exponent, enumerate_additive_by_order, enumerate_mult_by_order};
use crate::cyclotomic::from_exponent_counts;
use crate::error::{Error, Result};
use crate::fields::{FFElem, FieldCtx};
use crate::intarith::{gcd_u64, mu_int, phi_int};
use crate::linearized::{apply_linearized, fq_order};
use crate::polyring::{
    self, factor_divisor, factor_xm_minus_1, mu_poly, phi_poly, w_poly, x_pow_m_minus_1, PolyQ,
    PolyRing,
};

/// One verified comparison cell: parameters, both values, agreement.
#[derive(Debug, Clone, Serialize)]
pub struct SumComparison {
    pub q: u64,
    pub m: u32,
    pub params: String,
    pub oracle_value: i64,
    pub formula_value: i64,
    pub agree: bool,
}

impl SumComparison {
    fn new(ctx: &FieldCtx, params: String, oracle: i64, formula: i64) -> SumComparison {
        SumComparison {
            q: ctx.q(),
            m: ctx.m(),
            params,
            oracle_value: oracle,
            formula_value: formula,
            agree: oracle == formula,
        }
    }
}

/// Σ χ(α) over all additive characters of F_q-order g, by enumeration.
pub fn additive_sum_oracle(ctx: &FieldCtx, g: &PolyQ, alpha: &FFElem) -> Result<i64> {
    let chars = enumerate_additive_by_order(ctx, g)?;
    let alpha_idx = ctx.index_of(alpha);
    let mut counts = vec![0i64; ctx.p() as usize];
    for chi in &chars {
        counts[additive_exponent(ctx, ctx.index_of(&chi.beta), alpha_idx) as usize] += 1;
    }
    from_exponent_counts(ctx.p(), &counts)?
        .as_integer()
        .ok_or(Error::NonIntegerSum)
}

/// The closed form for Σ_g χ(α) when α has F_q-order f1: with
/// f2 = (x^m − 1)/f1 and d = g / gcd(g, f2), the sum is μ(d)·φ(g)/φ(d).
/// When μ(d) = 0 the whole product is 0 and the quotient is never formed.
pub fn additive_sum_formula(ctx: &FieldCtx, g: &PolyQ, f1: &PolyQ) -> Result<i64> {
    let fq = ctx.fq();
    let ring = PolyRing::new(fq);
    let fact = factor_xm_minus_1(ctx)?;
    let g_fact = factor_divisor(fq, &fact, g)?;
    factor_divisor(fq, &fact, f1)?;
    let f2 = ring.div_exact(&fact.expand(fq), f1)?;
    let d = ring.div_exact(g, &ring.gcd(g, &f2))?;
    let d_fact = factor_divisor(fq, &fact, &d)?;
    let mu = mu_poly(&d_fact);
    if mu == 0 {
        return Ok(0);
    }
    let phi_g = phi_poly(fq, &g_fact);
    let phi_d = phi_poly(fq, &d_fact);
    assert_eq!(phi_g % phi_d, 0, "phi(d) must divide phi(g) when mu(d) != 0");
    Ok(mu * (phi_g / phi_d))
}

fn require_normal(ctx: &FieldCtx, alpha: &FFElem) -> Result<()> {
    let xm1 = x_pow_m_minus_1(ctx.fq(), ctx.m());
    if fq_order(ctx, alpha)? != xm1 {
        return Err(Error::NotNormal);
    }
    Ok(())
}

/// Σ_g χ(f∘α) for normal α: oracle by direct evaluation at f∘α, formula
/// μ(d)·φ(g)/φ(d) with d = g / gcd(g, f); returns (oracle, formula).
pub fn additive_composed_sum(
    ctx: &FieldCtx,
    g: &PolyQ,
    f: &PolyQ,
    alpha: &FFElem,
) -> Result<(i64, i64)> {
    require_normal(ctx, alpha)?;
    let fq = ctx.fq();
    let ring = PolyRing::new(fq);
    let fact = factor_xm_minus_1(ctx)?;
    let g_fact = factor_divisor(fq, &fact, g)?;

    let oracle = additive_sum_oracle(ctx, g, &apply_linearized(ctx, f, alpha))?;

    let d = ring.div_exact(g, &ring.gcd(g, f))?;
    let d_fact = factor_divisor(fq, &fact, &d)?;
    let mu = mu_poly(&d_fact);
    let formula = if mu == 0 {
        0
    } else {
        let phi_g = phi_poly(fq, &g_fact);
        let phi_d = phi_poly(fq, &d_fact);
        assert_eq!(phi_g % phi_d, 0);
        mu * (phi_g / phi_d)
    };
    Ok((oracle, formula))
}

/// For normal α, Σ_g χ(α) collapses to μ(g); compares oracle against it.
pub fn remark_mu_check(ctx: &FieldCtx, g: &PolyQ, alpha: &FFElem) -> Result<SumComparison> {
    require_normal(ctx, alpha)?;
    let fact = factor_xm_minus_1(ctx)?;
    let g_fact = factor_divisor(ctx.fq(), &fact, g)?;
    let oracle = additive_sum_oracle(ctx, g, alpha)?;
    Ok(SumComparison::new(
        ctx,
        format!("g={g:?}, alpha={}", ctx.index_of(alpha)),
        oracle,
        mu_poly(&g_fact),
    ))
}

/// Carlitz multiplicativity: for coprime divisors a1, a2 of x^m − 1 the
/// sum over order a1·a2 factors as the product of the two sums.
pub fn carlitz_multiplicativity_check(
    ctx: &FieldCtx,
    a1: &PolyQ,
    a2: &PolyQ,
    alpha: &FFElem,
) -> Result<SumComparison> {
    let fq = ctx.fq();
    let ring = PolyRing::new(fq);
    let fact = factor_xm_minus_1(ctx)?;
    factor_divisor(fq, &fact, a1)?;
    factor_divisor(fq, &fact, a2)?;
    if !ring.gcd(a1, a2).is_one() {
        return Err(Error::NotCoprime);
    }
    let prod = ring.mul(a1, a2);
    factor_divisor(fq, &fact, &prod)?;
    let lhs = additive_sum_oracle(ctx, &prod, alpha)?;
    let rhs = additive_sum_oracle(ctx, a1, alpha)? * additive_sum_oracle(ctx, a2, alpha)?;
    Ok(SumComparison::new(
        ctx,
        format!("a1={a1:?}, a2={a2:?}, alpha={}", ctx.index_of(alpha)),
        lhs,
        rhs,
    ))
}

/// The prime-power sum in closed form.  With k the F_q-order of α and
/// l = (x^m − 1)/k:
///   |u|^e − |u|^{e−1}  when u^e | l,
///   −|u|^{e−1}         when u^{e−1} | l but u^e ∤ l,
///   0                  when u^{e−1} ∤ l,
/// where |u| = q^{deg u}.  Returns (oracle, formula).
pub fn carlitz_prime_power_formula(
    ctx: &FieldCtx,
    u: &PolyQ,
    exp: u32,
    alpha: &FFElem,
) -> Result<(i64, i64)> {
    let fq = ctx.fq();
    let ring = PolyRing::new(fq);
    if !polyring::is_irreducible(fq, u) {
        return Err(Error::NotIrreducible);
    }
    if exp == 0 {
        return Err(Error::OutOfRange(0));
    }
    let fact = factor_xm_minus_1(ctx)?;
    let ue = ring.pow(u, exp);
    factor_divisor(fq, &fact, &ue)?;

    let k = fq_order(ctx, alpha)?;
    let l = ring.div_exact(&fact.expand(fq), &k)?;
    let l_fact = factor_divisor(fq, &fact, &l)?;
    let mult_in_l = l_fact
        .factors
        .iter()
        .find(|(f, _)| f == &ring.monic(u))
        .map_or(0, |&(_, e)| e);

    let abs_u = (fq.q() as i64).pow(u.degree().expect("irreducible is nonzero") as u32);
    let formula = if mult_in_l >= exp {
        abs_u.pow(exp) - abs_u.pow(exp - 1)
    } else if mult_in_l >= exp - 1 {
        -abs_u.pow(exp - 1)
    } else {
        0
    };
    let oracle = additive_sum_oracle(ctx, &ue, alpha)?;
    Ok((oracle, formula))
}

/// Σ ψ(α^r) over all multiplicative characters of order d, with α the
/// stored primitive element; exact in Z[ζ_n], collapsed to an integer.
pub fn mult_sum_oracle(ctx: &FieldCtx, d: u64, r: u64) -> Result<i64> {
    let n = ctx.group_order();
    let chars = enumerate_mult_by_order(ctx, d)?;
    let mut counts = vec![0i64; n as usize];
    for psi in &chars {
        counts[(psi.j % n * (r % n) % n) as usize] += 1;
    }
    from_exponent_counts(n, &counts)?
        .as_integer()
        .ok_or(Error::NonIntegerSum)
}

/// The Ramanujan-type closed form μ(d/gcd(d,r)) · φ(d)/φ(d/gcd(d,r)),
/// with gcd(d, 0) = d.
pub fn mult_sum_formula(d: u64, r: u64) -> i64 {
    let g = d / gcd_u64(d, r);
    let mu = mu_int(g);
    if mu == 0 {
        return 0;
    }
    let phi_d = phi_int(d);
    let phi_g = phi_int(g);
    assert_eq!(phi_d % phi_g, 0);
    mu * (phi_d / phi_g) as i64
}

/// Σ over all q^m polynomials f of degree < m (zero included) of
/// |Σ_g χ(f∘α)| for normal α, against the closed form
/// q^{m−deg g}·φ(g)·W(g).  Quadratic in q^m, hence separately capped.
pub fn abs_sum_identity(
    ctx: &FieldCtx,
    g: &PolyQ,
    alpha: &FFElem,
    quadratic_limit: u64,
) -> Result<(i64, i64)> {
    if ctx.size() > quadratic_limit {
        return Err(Error::SizeExceeded {
            size: ctx.size() as u128,
            limit: quadratic_limit,
        });
    }
    require_normal(ctx, alpha)?;
    let fq = ctx.fq();
    let fact = factor_xm_minus_1(ctx)?;
    let g_fact = factor_divisor(fq, &fact, g)?;
    let chars = enumerate_additive_by_order(ctx, g)?;
    let beta_idxs: Vec<u64> = chars.iter().map(|c| ctx.index_of(&c.beta)).collect();

    let q = fq.q();
    let m = ctx.m();
    let mut lhs = 0i64;
    for fkey in 0..ctx.size() {
        let mut coeffs = Vec::with_capacity(m as usize);
        let mut k = fkey;
        for _ in 0..m {
            coeffs.push(k % q);
            k /= q;
        }
        let f = PolyQ::from_coeffs(coeffs);
        let image_idx = ctx.index_of(&apply_linearized(ctx, &f, alpha));
        let mut counts = vec![0i64; ctx.p() as usize];
        for &b in &beta_idxs {
            counts[additive_exponent(ctx, b, image_idx) as usize] += 1;
        }
        let s = from_exponent_counts(ctx.p(), &counts)?
            .as_integer()
            .ok_or(Error::NonIntegerSum)?;
        lhs += s.abs();
    }
    let deg_g = g.degree().ok_or(Error::NotADivisor)? as u32;
    let rhs = (q as i64).pow(m - deg_g) * phi_poly(fq, &g_fact) * w_poly(&g_fact);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{build_field, find_normal};
    use crate::polyring::divisors;

    #[test]
    fn additive_oracle_examples() {
        let f4 = build_field(2, 1, 2, 4096).unwrap();
        let omega = f4.element(2);
        // only the trivial character has order 1
        for idx in 0..4 {
            assert_eq!(
                additive_sum_oracle(&f4, &PolyQ::one(), &f4.element(idx)).unwrap(),
                1
            );
        }
        let xp1 = PolyQ::from_coeffs(vec![1, 1]);
        let sq = PolyQ::from_coeffs(vec![1, 0, 1]);
        assert_eq!(additive_sum_oracle(&f4, &xp1, &omega).unwrap(), -1);
        assert_eq!(additive_sum_oracle(&f4, &sq, &omega).unwrap(), 0);
    }

    #[test]
    fn additive_formula_examples() {
        let f4 = build_field(2, 1, 2, 4096).unwrap();
        let xp1 = PolyQ::from_coeffs(vec![1, 1]);
        let sq = PolyQ::from_coeffs(vec![1, 0, 1]);
        // normal α has order (x+1)^2, so f2 = 1
        assert_eq!(additive_sum_formula(&f4, &xp1, &sq).unwrap(), -1);
        assert_eq!(additive_sum_formula(&f4, &sq, &sq).unwrap(), 0);
        // any g dividing f2 gives φ(g): α = 0 has order 1
        assert_eq!(additive_sum_formula(&f4, &sq, &PolyQ::one()).unwrap(), 2);
    }

    #[test]
    fn formula_matches_oracle_exhaustively_small() {
        for &(p, e, m) in &[(2u64, 1u32, 3u32), (3, 1, 2), (2, 2, 2), (2, 1, 1)] {
            let ctx = build_field(p, e, m, 4096).unwrap();
            let fact = factor_xm_minus_1(&ctx).unwrap();
            let divs = divisors(ctx.fq(), &fact);
            for g in &divs {
                for idx in 0..ctx.size() {
                    let alpha = ctx.element(idx);
                    let f1 = fq_order(&ctx, &alpha).unwrap();
                    assert_eq!(
                        additive_sum_oracle(&ctx, g, &alpha).unwrap(),
                        additive_sum_formula(&ctx, g, &f1).unwrap(),
                        "({p},{e},{m}) g={g:?} alpha={idx}"
                    );
                }
            }
        }
    }

    #[test]
    fn composed_sum_examples() {
        let f4 = build_field(2, 1, 2, 4096).unwrap();
        let omega = f4.element(2);
        let sq = PolyQ::from_coeffs(vec![1, 0, 1]);
        let xp1 = PolyQ::from_coeffs(vec![1, 1]);
        // f = 0: every χ(0) = 1, both routes give φ(g)
        let (o, f) = additive_composed_sum(&f4, &sq, &PolyQ::zero(), &omega).unwrap();
        assert_eq!((o, f), (2, 2));
        // f = x^m - 1 acts as zero
        let xm1 = x_pow_m_minus_1(f4.fq(), 2);
        let (o, f) = additive_composed_sum(&f4, &sq, &xm1, &omega).unwrap();
        assert_eq!((o, f), (2, 2));
        // g = (x+1)^2, f = x+1: d = x+1, value -2
        let (o, f) = additive_composed_sum(&f4, &sq, &xp1, &omega).unwrap();
        assert_eq!((o, f), (-2, -2));
        // non-normal α rejected
        assert_eq!(
            additive_composed_sum(&f4, &sq, &xp1, &f4.one_elem()).unwrap_err(),
            Error::NotNormal
        );
    }

    #[test]
    fn remark_mu_examples() {
        let f4 = build_field(2, 1, 2, 4096).unwrap();
        let omega = f4.element(2);
        for (g, expected) in [
            (PolyQ::one(), 1i64),
            (PolyQ::from_coeffs(vec![1, 1]), -1),
            (PolyQ::from_coeffs(vec![1, 0, 1]), 0),
        ] {
            let cmp = remark_mu_check(&f4, &g, &omega).unwrap();
            assert!(cmp.agree);
            assert_eq!(cmp.formula_value, expected);
        }
    }

    #[test]
    fn carlitz_product_law() {
        let f8 = build_field(2, 1, 3, 4096).unwrap();
        let xp1 = PolyQ::from_coeffs(vec![1, 1]);
        let quad = PolyQ::from_coeffs(vec![1, 1, 1]);
        for idx in 0..8 {
            let cmp =
                carlitz_multiplicativity_check(&f8, &xp1, &quad, &f8.element(idx)).unwrap();
            assert!(cmp.agree, "element {idx}");
            let trivially = carlitz_multiplicativity_check(&f8, &PolyQ::one(), &quad, &f8.element(idx))
                .unwrap();
            assert!(trivially.agree);
        }
        assert_eq!(
            carlitz_multiplicativity_check(&f8, &xp1, &xp1, &f8.one_elem()).unwrap_err(),
            Error::NotCoprime
        );
    }

    #[test]
    fn carlitz_prime_power_cases() {
        let f4 = build_field(2, 1, 2, 4096).unwrap();
        let xp1 = PolyQ::from_coeffs(vec![1, 1]);
        let omega = f4.element(2);
        // α = 0: l = x^m - 1, u^e | l, value φ(u^e)
        let (o, f) = carlitz_prime_power_formula(&f4, &xp1, 2, &f4.zero_elem()).unwrap();
        assert_eq!((o, f), (2, 2));
        // α = ω: l = 1; e = 2 hits the zero case, e = 1 the middle case
        let (o, f) = carlitz_prime_power_formula(&f4, &xp1, 2, &omega).unwrap();
        assert_eq!((o, f), (0, 0));
        let (o, f) = carlitz_prime_power_formula(&f4, &xp1, 1, &omega).unwrap();
        assert_eq!((o, f), (-1, -1));
        // reducible u rejected
        let sq = PolyQ::from_coeffs(vec![1, 0, 1]);
        assert_eq!(
            carlitz_prime_power_formula(&f4, &sq, 1, &omega).unwrap_err(),
            Error::NotIrreducible
        );
    }

    #[test]
    fn mult_sum_examples() {
        let f4 = build_field(2, 1, 2, 4096).unwrap();
        assert_eq!(mult_sum_oracle(&f4, 1, 0).unwrap(), 1);
        assert_eq!(mult_sum_oracle(&f4, 1, 2).unwrap(), 1);
        // r ≡ 0: all φ(d) characters evaluate to 1
        assert_eq!(mult_sum_oracle(&f4, 3, 0).unwrap(), 2);
        // d = 3, r = 1: ζ_3 + ζ_3^2 = -1
        assert_eq!(mult_sum_oracle(&f4, 3, 1).unwrap(), -1);
        assert_eq!(mult_sum_formula(3, 1), -1);
        assert_eq!(mult_sum_formula(1, 5), 1);
        // d = 4, r = 2: i^2 + (-i)^2 = -2, seen in F_5 where 4 | q - 1
        let f5 = build_field(5, 1, 1, 4096).unwrap();
        assert_eq!(mult_sum_oracle(&f5, 4, 2).unwrap(), -2);
        assert_eq!(mult_sum_formula(4, 2), -2);
        assert_eq!(
            mult_sum_oracle(&f4, 2, 0).unwrap_err(),
            Error::NotADivisorInt(2)
        );
    }

    #[test]
    fn mult_formula_matches_oracle_exhaustively_small() {
        for &(p, e, m) in &[(2u64, 1u32, 3u32), (3, 1, 2), (5, 1, 1), (2, 1, 1)] {
            let ctx = build_field(p, e, m, 4096).unwrap();
            let n = ctx.group_order();
            for d in crate::intarith::divisors_int(n) {
                for r in 0..n {
                    assert_eq!(
                        mult_sum_oracle(&ctx, d, r).unwrap(),
                        mult_sum_formula(d, r),
                        "({p},{e},{m}) d={d} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn abs_sum_examples() {
        // m = 1, q = 2, g = x+1: |χ(0)| + |χ(1)| = 2 = 2^0 · 1 · 2
        let f2 = build_field(2, 1, 1, 4096).unwrap();
        let alpha = find_normal(&f2).unwrap();
        let g = PolyQ::from_coeffs(vec![1, 1]);
        assert_eq!(abs_sum_identity(&f2, &g, &alpha, 512).unwrap(), (2, 2));
        // g = 1: every inner sum is 1, both sides q^m
        let f4 = build_field(2, 1, 2, 4096).unwrap();
        let omega = f4.element(2);
        assert_eq!(
            abs_sum_identity(&f4, &PolyQ::one(), &omega, 512).unwrap(),
            (4, 4)
        );
        // g = (x+1)^2: rhs = 2^0 · 2 · 2 = 4
        let sq = PolyQ::from_coeffs(vec![1, 0, 1]);
        assert_eq!(abs_sum_identity(&f4, &sq, &omega, 512).unwrap(), (4, 4));
        // the quadratic cap is enforced
        assert!(matches!(
            abs_sum_identity(&f4, &sq, &omega, 2).unwrap_err(),
            Error::SizeExceeded { .. }
        ));
    }
}
