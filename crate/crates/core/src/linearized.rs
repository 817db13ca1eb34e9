//! The F_q[x]-module structure on F_{q^m}: for f = Σ a_i x^i the action
//! f∘α = Σ a_i α^{q^i}, the F_q-order of an element (its minimal monic
//! annihilator dividing x^m − 1), the conjugate polynomial g_α, and the
//! k-normality degree.

use crate::error::Result;
use crate::fields::{FFElem, FieldCtx};
use crate::polyring::{self, PolyQ, PolyRing};

/// Evaluates the linearized action f∘α = Σ a_i α^{q^i}.  The action
/// factors through F_q[x]/(x^m − 1), so f is reduced mod x^m − 1 first.
pub fn apply_linearized(ctx: &FieldCtx, f: &PolyQ, alpha: &FFElem) -> FFElem {
    let ring = PolyRing::new(ctx.fq());
    let m = ctx.m() as usize;
    let reduced;
    let f = if f.degree().map_or(false, |d| d >= m) {
        let xm1 = polyring::x_pow_m_minus_1(ctx.fq(), ctx.m());
        reduced = ring.rem(f, &xm1).expect("x^m - 1 is nonzero");
        &reduced
    } else {
        f
    };
    let mut acc = ctx.zero_elem();
    let mut conj = alpha.clone();
    for i in 0..f.coeffs().len() {
        let c = f.coeff(i);
        if c != 0 {
            acc = ctx.add_elem(&acc, &ctx.scalar_mul(c, &conj));
        }
        conj = ctx.relative_frobenius(&conj);
    }
    acc
}

/// Index-space variant used by the sweep harness: `f_coeffs` are the F_q
/// coefficients (ascending, length ≤ m) and `conj` the precomputed
/// Frobenius orbit of the target element.
pub fn apply_linearized_idx(ctx: &FieldCtx, f_coeffs: &[u64], conj: &[u64]) -> u64 {
    let mut acc = 0u64;
    for (i, &c) in f_coeffs.iter().enumerate() {
        if c != 0 {
            acc = ctx.add_idx(acc, ctx.scalar_mul_idx(c, conj[i]));
        }
    }
    acc
}

/// Frobenius orbit α, α^q, …, α^{q^{m−1}} as element indices.
pub fn frobenius_orbit(ctx: &FieldCtx, alpha_idx: u64) -> Vec<u64> {
    let mut orbit = Vec::with_capacity(ctx.m() as usize);
    let mut cur = alpha_idx;
    for _ in 0..ctx.m() {
        orbit.push(cur);
        cur = ctx.frobenius_idx(cur);
    }
    orbit
}

/// The F_q-order of α: the minimal monic divisor f of x^m − 1 (in the
/// fixed divisor order) with f∘α = 0.
pub fn fq_order(ctx: &FieldCtx, alpha: &FFElem) -> Result<PolyQ> {
    let divisors = polyring::divisors(ctx.fq(), &polyring::factor_xm_minus_1(ctx)?);
    Ok(divisors[fq_order_in(ctx, &divisors, alpha)].clone())
}

/// Scan over a precomputed sorted divisor list; returns the index of the
/// first annihilator.  Minimality in the fixed order makes the result the
/// F_q-order.
pub fn fq_order_in(ctx: &FieldCtx, divisors: &[PolyQ], alpha: &FFElem) -> usize {
    let zero = ctx.zero_elem();
    for (i, f) in divisors.iter().enumerate() {
        if apply_linearized(ctx, f, alpha) == zero {
            return i;
        }
    }
    unreachable!("x^m - 1 annihilates every element")
}

/// g_α(x) = Σ_{i=0}^{m−1} α^{q^i} x^{m−1−i}, a polynomial over F_{q^m};
/// coefficients returned ascending with trailing zeros trimmed.
pub fn g_alpha(ctx: &FieldCtx, alpha: &FFElem) -> Vec<FFElem> {
    let m = ctx.m() as usize;
    let orbit = frobenius_orbit(ctx, ctx.index_of(alpha));
    let mut coeffs: Vec<FFElem> = (0..m).map(|j| ctx.element(orbit[m - 1 - j])).collect();
    while coeffs.last().map_or(false, FFElem::is_zero) {
        coeffs.pop();
    }
    coeffs
}

/// k-normality of α: the degree of gcd(x^m − 1, g_α) computed over
/// F_{q^m}.  α = 0 yields k = m (the gcd with the zero polynomial is
/// x^m − 1 by convention); 0-normal means normal.
pub fn k_normality(ctx: &FieldCtx, alpha: &FFElem) -> u32 {
    let m = ctx.m() as usize;
    // x^m - 1 over the big field, coefficient indices
    let mut xm1 = vec![0u64; m + 1];
    xm1[0] = ctx.index_of(&ctx.neg_elem(&ctx.one_elem()));
    xm1[m] = 1;
    let ga: Vec<u64> = g_alpha(ctx, alpha)
        .iter()
        .map(|c| ctx.index_of(c))
        .collect();
    let g = ext_gcd_monic(ctx, xm1, ga);
    (g.len() - 1) as u32
}

// Monic gcd of polynomials over F_{q^m}, coefficients as element indices
// (ascending, trimmed); gcd(a, 0) = monic(a).
fn ext_gcd_monic(ctx: &FieldCtx, a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    let mut x = a;
    let mut y = b;
    ext_trim(&mut x);
    ext_trim(&mut y);
    while !y.is_empty() {
        let r = ext_rem(ctx, &x, &y);
        x = y;
        y = r;
    }
    ext_monic(ctx, x)
}

fn ext_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn ext_rem(ctx: &FieldCtx, a: &[u64], b: &[u64]) -> Vec<u64> {
    let db = b.len() - 1;
    if a.len() <= db {
        return a.to_vec();
    }
    let lb_inv = ctx.inv_idx(b[db]).expect("nonzero leading coefficient");
    let mut rem = a.to_vec();
    for i in (db..rem.len()).rev() {
        let c = ctx.mul_idx(rem[i], lb_inv);
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                let sub = ctx.mul_idx(c, bj);
                let neg = if sub == 0 {
                    0
                } else {
                    ctx.index_of(&ctx.neg_elem(&ctx.element(sub)))
                };
                rem[i - db + j] = ctx.add_idx(rem[i - db + j], neg);
            }
        }
    }
    rem.truncate(db);
    ext_trim(&mut rem);
    rem
}

fn ext_monic(ctx: &FieldCtx, mut v: Vec<u64>) -> Vec<u64> {
    ext_trim(&mut v);
    if let Some(&lead) = v.last() {
        if lead != 1 {
            let inv = ctx.inv_idx(lead).expect("nonzero leading coefficient");
            for c in v.iter_mut() {
                *c = ctx.mul_idx(*c, inv);
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::build_field;
    use crate::polyring::x_pow_m_minus_1;

    #[test]
    fn action_examples() {
        let f4 = build_field(2, 1, 2, 4096).unwrap();
        let omega = f4.element(2);
        // identity action
        assert_eq!(apply_linearized(&f4, &PolyQ::one(), &omega), omega);
        // x^m - 1 kills everything
        let xm1 = x_pow_m_minus_1(f4.fq(), 2);
        for idx in 0..4 {
            assert!(apply_linearized(&f4, &xm1, &f4.element(idx)).is_zero());
        }
        // (x+1)∘ω = ω^2 + ω = 1
        let xp1 = PolyQ::from_coeffs(vec![1, 1]);
        assert_eq!(apply_linearized(&f4, &xp1, &omega), f4.one_elem());
    }

    #[test]
    fn fq_order_examples() {
        let f8 = build_field(2, 1, 3, 4096).unwrap();
        assert_eq!(fq_order(&f8, &f8.zero_elem()).unwrap(), PolyQ::one());
        assert_eq!(
            fq_order(&f8, &f8.one_elem()).unwrap(),
            PolyQ::from_coeffs(vec![1, 1])
        );
        let f4 = build_field(2, 1, 2, 4096).unwrap();
        // ω is normal: order (x+1)^2 = x^2 + 1
        assert_eq!(
            fq_order(&f4, &f4.element(2)).unwrap(),
            PolyQ::from_coeffs(vec![1, 0, 1])
        );
    }

    #[test]
    fn g_alpha_examples() {
        let f8 = build_field(2, 1, 3, 4096).unwrap();
        assert!(g_alpha(&f8, &f8.zero_elem()).is_empty());
        // α = 1: all conjugates are 1, g_1 = x^2 + x + 1
        let one = f8.one_elem();
        let ga = g_alpha(&f8, &one);
        assert_eq!(ga, vec![one.clone(), one.clone(), one.clone()]);

        let f4 = build_field(2, 1, 2, 4096).unwrap();
        // α = ω: g_ω = ωx + ω^2
        let ga = g_alpha(&f4, &f4.element(2));
        assert_eq!(ga, vec![f4.element(3), f4.element(2)]);
    }

    #[test]
    fn k_normality_examples() {
        let f8 = build_field(2, 1, 3, 4096).unwrap();
        assert_eq!(k_normality(&f8, &f8.zero_elem()), 3);
        // gcd(x^3+1, x^2+x+1) = x^2+x+1, so 1 is 2-normal in F_8
        assert_eq!(k_normality(&f8, &f8.one_elem()), 2);
        let f4 = build_field(2, 1, 2, 4096).unwrap();
        assert_eq!(k_normality(&f4, &f4.element(2)), 0);
        assert_eq!(k_normality(&f4, &f4.element(1)), 1);
        assert_eq!(k_normality(&f4, &f4.zero_elem()), 2);
    }

    #[test]
    fn k_equals_m_minus_order_degree_exhaustive() {
        for &(p, e, m) in &[(2u64, 1u32, 4u32), (3, 1, 3), (2, 2, 2), (5, 1, 2), (2, 1, 1)] {
            let ctx = build_field(p, e, m, 4096).unwrap();
            let divisors = polyring::divisors(
                ctx.fq(),
                &polyring::factor_xm_minus_1(&ctx).unwrap(),
            );
            for idx in 0..ctx.size() {
                let alpha = ctx.element(idx);
                let ord = &divisors[fq_order_in(&ctx, &divisors, &alpha)];
                let deg = ord.degree().map_or(0, |d| d) as u32;
                assert_eq!(
                    k_normality(&ctx, &alpha),
                    m - deg,
                    "({p},{e},{m}) element {idx}"
                );
            }
        }
    }

    #[test]
    fn normal_count_equals_phi_of_xm1() {
        for &(p, e, m) in &[(2u64, 1u32, 3u32), (2, 1, 4), (3, 1, 2), (2, 2, 2)] {
            let ctx = build_field(p, e, m, 4096).unwrap();
            let fact = polyring::factor_xm_minus_1(&ctx).unwrap();
            let divisors = polyring::divisors(ctx.fq(), &fact);
            let xm1 = x_pow_m_minus_1(ctx.fq(), m);
            let count = (0..ctx.size())
                .filter(|&i| divisors[fq_order_in(&ctx, &divisors, &ctx.element(i))] == xm1)
                .count() as i64;
            assert_eq!(count, polyring::phi_poly(ctx.fq(), &fact));
        }
        // F_8 has exactly 3 normal elements
        let f8 = build_field(2, 1, 3, 4096).unwrap();
        let fact = polyring::factor_xm_minus_1(&f8).unwrap();
        assert_eq!(polyring::phi_poly(f8.fq(), &fact), 3);
    }

    #[test]
    fn order_divides_xm1_and_action_is_modular() {
        let ctx = build_field(2, 1, 4, 4096).unwrap();
        let ring = PolyRing::new(ctx.fq());
        let xm1 = x_pow_m_minus_1(ctx.fq(), 4);
        for idx in 0..ctx.size() {
            let alpha = ctx.element(idx);
            let ord = fq_order(&ctx, &alpha).unwrap();
            assert!(ring.rem(&xm1, &ord).unwrap().is_zero());
            // no proper divisor of the order annihilates
            let of = polyring::factor_divisor(
                ctx.fq(),
                &polyring::factor_xm_minus_1(&ctx).unwrap(),
                &ord,
            )
            .unwrap();
            for d in polyring::divisors(ctx.fq(), &of) {
                if d != ord {
                    assert!(!apply_linearized(&ctx, &d, &alpha).is_zero());
                }
            }
        }
    }

    #[test]
    fn find_normal_agrees_with_order_scan() {
        let f4 = build_field(2, 1, 2, 4096).unwrap();
        let alpha = crate::fields::find_normal(&f4).unwrap();
        assert_eq!(f4.index_of(&alpha), 2); // ω is the first normal element
        let f2 = build_field(2, 1, 1, 4096).unwrap();
        assert_eq!(f2.index_of(&crate::fields::find_normal(&f2).unwrap()), 1);
    }
}
