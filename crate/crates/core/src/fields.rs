//! Construction of the tower F_p ⊆ F_q ⊆ F_{q^m} with exhaustive tables.
//!
//! Fields are deliberately small (the enumeration limit caps q^m), so the
//! context precomputes a full discrete-log table, the q-power Frobenius map
//! and the absolute trace of every element.  Everything downstream — the
//! character machinery, the order computations, the verification sweeps —
//! is table lookups over these.
//!
//! Moduli are chosen deterministically: the lexicographically smallest
//! monic irreducible polynomial of the required degree with a nonzero
//! constant term ("lexicographic" on the coefficient sequence read as a
//! base-q integer, constant coefficient least significant).  This makes
//! every build byte-reproducible.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::intarith::{factor_int, is_prime};
use crate::polyring::{self, FactoredPoly, PolyQ};

/// Hard cap on q^m regardless of the user-supplied limit; the tables are
/// O(q^m) and all identities here are exact, so tiny fields suffice.
pub const HARD_SIZE_CAP: u64 = 1 << 24;

/// Default enumeration limit for full sweeps.
pub const DEFAULT_LIMIT: u64 = 4096;

/// Default cap for checks whose cost is quadratic in q^m.
pub const DEFAULT_QUADRATIC_LIMIT: u64 = 512;

const NO_DLOG: u32 = u32::MAX;

// ---------------------------------------------------------------------------
// F_p polynomial helpers (digit vectors, ascending), used only to find the
// base-field modulus.
// ---------------------------------------------------------------------------

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut rem: Vec<u64> = a.to_vec();
    fp_trim(&mut rem);
    let db = b.len() - 1;
    let lb_inv = mod_inv(b[db], p);
    while rem.len() > db {
        let da = rem.len() - 1;
        let c = (rem[da] * lb_inv) % p;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                let sub = (c * bj) % p;
                rem[da - db + j] = (rem[da - db + j] + p - sub) % p;
            }
        }
        rem.pop();
        fp_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    rem
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p prime, a != 0
    mod_pow(a, p - 2, p)
}

fn mod_pow(mut b: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        k >>= 1;
    }
    acc
}

/// Irreducibility of a monic F_p polynomial by exhaustive trial division;
/// the degrees in play keep the candidate count at most sqrt(q).
fn fp_is_irreducible(p: u64, f: &[u64]) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    for dg in 1..=d / 2 {
        let count = p.pow(dg as u32);
        for key in 0..count {
            let mut g = decode_digits(key, p, dg);
            g.push(1);
            if fp_rem(p, f, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

fn decode_digits(mut key: u64, radix: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(key % radix);
        key /= radix;
    }
    out
}

// ---------------------------------------------------------------------------
// F_q = F_p[y]/(base_modulus)
// ---------------------------------------------------------------------------

/// The base field F_q = F_p[y] / (base_modulus), elements addressed by
/// their index Σ c_i p^i in [0, q).
#[derive(Debug)]
pub struct FqCtx {
    p: u64,
    e: u32,
    q: u64,
    /// Monic irreducible of degree e over F_p, digits ascending.
    base_modulus: Vec<u64>,
    neg_tbl: Vec<u32>,
    inv_tbl: Vec<u32>,
    add_tbl: Option<Vec<u32>>,
    mul_tbl: Option<Vec<u32>>,
}

const FQ_FULL_TABLE_MAX: u64 = 2048;

impl FqCtx {
    pub fn new(p: u64, e: u32) -> Result<FqCtx> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::OutOfRange(0));
        }
        let q128 = (p as u128).pow(e);
        if q128 > HARD_SIZE_CAP as u128 {
            return Err(Error::SizeExceeded {
                size: q128,
                limit: HARD_SIZE_CAP,
            });
        }
        let q = q128 as u64;
        let base_modulus = if e == 1 {
            vec![1, 1] // y + 1 by convention; unused by the arithmetic
        } else {
            let mut found = None;
            for key in 0..q {
                if key % p == 0 {
                    continue; // zero constant term, reducible
                }
                let mut f = decode_digits(key, p, e as usize);
                f.push(1);
                if fp_is_irreducible(p, &f) {
                    found = Some(f);
                    break;
                }
            }
            found.expect("an irreducible polynomial of each degree exists")
        };
        let mut ctx = FqCtx {
            p,
            e,
            q,
            base_modulus,
            neg_tbl: Vec::new(),
            inv_tbl: Vec::new(),
            add_tbl: None,
            mul_tbl: None,
        };
        ctx.neg_tbl = (0..q).map(|a| ctx.neg_raw(a) as u32).collect();
        if e >= 2 && q <= FQ_FULL_TABLE_MAX {
            let mut add = vec![0u32; (q * q) as usize];
            let mut mul = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = ctx.add_raw(a, b) as u32;
                    mul[(a * q + b) as usize] = ctx.mul_raw(a, b) as u32;
                }
            }
            ctx.add_tbl = Some(add);
            ctx.mul_tbl = Some(mul);
        }
        ctx.inv_tbl = (0..q)
            .map(|a| if a == 0 { 0 } else { ctx.pow(a, q - 2) as u32 })
            .collect();
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Digits of the base modulus, ascending in y.
    pub fn base_modulus(&self) -> &[u64] {
        &self.base_modulus
    }

    fn add_raw(&self, a: u64, b: u64) -> u64 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let mut out = 0u64;
        let mut scale = 1u64;
        let (mut x, mut y) = (a, b);
        for _ in 0..self.e {
            out += (x % self.p + y % self.p) % self.p * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        out
    }

    fn neg_raw(&self, a: u64) -> u64 {
        if self.e == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let mut out = 0u64;
        let mut scale = 1u64;
        let mut x = a;
        for _ in 0..self.e {
            out += (self.p - x % self.p) % self.p * scale;
            x /= self.p;
            scale *= self.p;
        }
        out
    }

    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        if self.e == 1 {
            return a * b % self.p;
        }
        let e = self.e as usize;
        let da = decode_digits(a, self.p, e);
        let db = decode_digits(b, self.p, e);
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce by the monic base modulus
        for k in (e..prod.len()).rev() {
            let c = prod[k];
            if c != 0 {
                prod[k] = 0;
                for (j, &mj) in self.base_modulus[..e].iter().enumerate() {
                    let sub = c * mj % self.p;
                    prod[k - e + j] = (prod[k - e + j] + self.p - sub) % self.p;
                }
            }
        }
        let mut out = 0u64;
        for i in (0..e).rev() {
            out = out * self.p + prod[i];
        }
        out
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        match &self.add_tbl {
            Some(t) => t[(a * self.q + b) as usize] as u64,
            None => self.add_raw(a, b),
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        self.neg_tbl[a as usize] as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.mul_tbl {
            Some(t) => t[(a * self.q + b) as usize] as u64,
            None => self.mul_raw(a, b),
        }
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(self.inv_tbl[a as usize] as u64)
    }

    pub fn pow(&self, a: u64, mut k: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            k >>= 1;
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Elements of F_{q^m}
// ---------------------------------------------------------------------------

/// An element of F_{q^m} in coefficient form over F_q: exactly m
/// coordinates, each an F_q index in [0, q).  Equality is coordinate-wise;
/// there is no hidden normalization state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FFElem {
    coeffs: Vec<u64>,
}

impl FFElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

// ---------------------------------------------------------------------------
// F_{q^m} context
// ---------------------------------------------------------------------------

/// Immutable description of the tower F_p ⊆ F_q ⊆ F_{q^m}: moduli, a
/// verified primitive element, and full discrete-log / trace / Frobenius
/// tables.  Safe to share across threads; every operation is a pure
/// function of `(ctx, inputs)`.
#[derive(Debug)]
pub struct FieldCtx {
    fq: FqCtx,
    m: u32,
    size: u64,
    limit: u64,
    top_modulus: PolyQ,
    primitive: FFElem,
    exp_tbl: Vec<u32>,
    dlog_tbl: Vec<u32>,
    trace_tbl: Vec<u32>,
    frobq_tbl: Vec<u32>,
    xm1_fact: OnceLock<std::result::Result<FactoredPoly, Error>>,
}

/// Builds F_q = F_p[y]/(m0) and F_{q^m} = F_q[x]/(h) with deterministically
/// chosen moduli.  Fails on non-prime p or when q^m exceeds `limit`.
pub fn build_field(p: u64, e: u32, m: u32, limit: u64) -> Result<FieldCtx> {
    FieldCtx::build(p, e, m, limit)
}

impl FieldCtx {
    pub fn build(p: u64, e: u32, m: u32, limit: u64) -> Result<FieldCtx> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 || m == 0 {
            return Err(Error::OutOfRange(0));
        }
        let size128 = (p as u128).pow(e * m);
        if size128 > limit as u128 {
            return Err(Error::SizeExceeded {
                size: size128,
                limit,
            });
        }
        if size128 > HARD_SIZE_CAP as u128 {
            return Err(Error::SizeExceeded {
                size: size128,
                limit: HARD_SIZE_CAP,
            });
        }
        let size = size128 as u64;
        let fq = FqCtx::new(p, e)?;
        let top_modulus = polyring::first_irreducible(&fq, m);

        let mut ctx = FieldCtx {
            fq,
            m,
            size,
            limit,
            top_modulus,
            primitive: FFElem {
                coeffs: vec![0; m as usize],
            },
            exp_tbl: Vec::new(),
            dlog_tbl: Vec::new(),
            trace_tbl: Vec::new(),
            frobq_tbl: Vec::new(),
            xm1_fact: OnceLock::new(),
        };

        // primitive element: deterministic scan, order verified against
        // every maximal proper divisor of q^m - 1
        let n = size - 1;
        let prime_divs: Vec<u64> = factor_int(n.max(1))?
            .factors
            .iter()
            .map(|&(p, _)| p)
            .collect();
        let one = ctx.one_elem();
        let mut primitive = None;
        for idx in 1..size {
            let cand = ctx.element(idx);
            let ok = prime_divs
                .iter()
                .all(|&l| ctx.pow_elem(&cand, n / l) != one);
            if ok {
                primitive = Some(cand);
                break;
            }
        }
        ctx.primitive = primitive.expect("the multiplicative group is cyclic");

        // exp/dlog tables; complete coverage proves the order is exactly n
        let mut exp_tbl = vec![0u32; n.max(1) as usize];
        let mut dlog_tbl = vec![NO_DLOG; size as usize];
        let mut acc = one.clone();
        for k in 0..n.max(1) {
            let idx = ctx.index_of(&acc);
            exp_tbl[k as usize] = idx as u32;
            assert_eq!(
                dlog_tbl[idx as usize], NO_DLOG,
                "primitive element order is not q^m - 1"
            );
            dlog_tbl[idx as usize] = k as u32;
            acc = ctx.mul_elem(&acc, &ctx.primitive);
        }
        assert_eq!(acc, one, "primitive power cycle did not close");
        ctx.exp_tbl = exp_tbl;
        ctx.dlog_tbl = dlog_tbl;

        // q-power Frobenius and absolute trace of every element
        let q = ctx.fq.q();
        ctx.frobq_tbl = (0..size)
            .map(|idx| ctx.index_of(&ctx.pow_elem(&ctx.element(idx), q)) as u32)
            .collect();
        ctx.trace_tbl = (0..size)
            .map(|idx| {
                let t = ctx.trace_to_prime(&ctx.element(idx));
                debug_assert!(t < p);
                t as u32
            })
            .collect();
        Ok(ctx)
    }

    pub fn fq(&self) -> &FqCtx {
        &self.fq
    }

    pub fn p(&self) -> u64 {
        self.fq.p
    }

    pub fn e(&self) -> u32 {
        self.fq.e
    }

    pub fn q(&self) -> u64 {
        self.fq.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// q^m, the number of elements.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// q^m - 1, the order of the multiplicative group.
    pub fn group_order(&self) -> u64 {
        self.size - 1
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn top_modulus(&self) -> &PolyQ {
        &self.top_modulus
    }

    pub fn primitive(&self) -> &FFElem {
        &self.primitive
    }

    // -- element representation ------------------------------------------

    pub fn zero_elem(&self) -> FFElem {
        FFElem {
            coeffs: vec![0; self.m as usize],
        }
    }

    pub fn one_elem(&self) -> FFElem {
        let mut z = self.zero_elem();
        z.coeffs[0] = 1;
        z
    }

    /// Element with enumeration index `idx` (coordinates are the base-q
    /// digits of the index, least significant first).
    pub fn element(&self, idx: u64) -> FFElem {
        assert!(idx < self.size, "element index out of range");
        FFElem {
            coeffs: decode_digits(idx, self.fq.q, self.m as usize),
        }
    }

    pub fn index_of(&self, a: &FFElem) -> u64 {
        let mut out = 0u64;
        for &c in a.coeffs.iter().rev() {
            out = out * self.fq.q + c;
        }
        out
    }

    pub fn element_from_coeffs(&self, coeffs: Vec<u64>) -> Result<FFElem> {
        if coeffs.len() != self.m as usize || coeffs.iter().any(|&c| c >= self.fq.q) {
            return Err(Error::OutOfRange(coeffs.len() as u64));
        }
        Ok(FFElem { coeffs })
    }

    /// Iterator over all q^m elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.size).map(|i| self.element(i))
    }

    // -- arithmetic --------------------------------------------------------

    pub fn add_elem(&self, a: &FFElem, b: &FFElem) -> FFElem {
        FFElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.fq.add(x, y))
                .collect(),
        }
    }

    pub fn neg_elem(&self, a: &FFElem) -> FFElem {
        FFElem {
            coeffs: a.coeffs.iter().map(|&x| self.fq.neg(x)).collect(),
        }
    }

    pub fn sub_elem(&self, a: &FFElem, b: &FFElem) -> FFElem {
        self.add_elem(a, &self.neg_elem(b))
    }

    /// Multiplication by an F_q scalar (index form).
    pub fn scalar_mul(&self, c: u64, a: &FFElem) -> FFElem {
        FFElem {
            coeffs: a.coeffs.iter().map(|&x| self.fq.mul(c, x)).collect(),
        }
    }

    pub fn mul_elem(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let m = self.m as usize;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = self.fq.add(prod[i + j], self.fq.mul(x, y));
            }
        }
        let top = self.top_modulus.coeffs();
        for k in (m..prod.len()).rev() {
            let c = prod[k];
            if c != 0 {
                prod[k] = 0;
                for (j, &tj) in top[..m].iter().enumerate() {
                    prod[k - m + j] = self.fq.sub(prod[k - m + j], self.fq.mul(c, tj));
                }
            }
        }
        prod.truncate(m);
        FFElem { coeffs: prod }
    }

    pub fn pow_elem(&self, a: &FFElem, mut k: u64) -> FFElem {
        let mut base = a.clone();
        let mut acc = self.one_elem();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_elem(&acc, &base);
            }
            base = self.mul_elem(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn inv_elem(&self, a: &FFElem) -> Result<FFElem> {
        let idx = self.index_of(a);
        Ok(self.element(self.inv_idx(idx)?))
    }

    // -- index-space fast paths (table backed) ------------------------------

    pub fn mul_idx(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.group_order();
        if n == 0 {
            return 1; // the field F_2^0 cannot occur; n >= 1 always
        }
        let k = (self.dlog_tbl[a as usize] as u64 + self.dlog_tbl[b as usize] as u64) % n;
        self.exp_tbl[k as usize] as u64
    }

    pub fn add_idx(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            return self.fq.add(a, b);
        }
        self.index_of(&self.add_elem(&self.element(a), &self.element(b)))
    }

    pub fn scalar_mul_idx(&self, c: u64, a: u64) -> u64 {
        if self.m == 1 {
            return self.fq.mul(c, a);
        }
        self.index_of(&self.scalar_mul(c, &self.element(a)))
    }

    pub fn inv_idx(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        let n = self.group_order();
        let d = self.dlog_tbl[a as usize] as u64;
        Ok(self.exp_tbl[((n - d) % n) as usize] as u64)
    }

    pub fn trace_idx(&self, a: u64) -> u64 {
        self.trace_tbl[a as usize] as u64
    }

    pub fn frobenius_idx(&self, a: u64) -> u64 {
        self.frobq_tbl[a as usize] as u64
    }

    pub fn exp_idx(&self, k: u64) -> u64 {
        self.exp_tbl[k as usize] as u64
    }

    // -- the operations the rest of the crate is built on -------------------

    /// Absolute trace down to F_p: Σ_{i<em} γ^{p^i}, returned as a residue
    /// mod p.  Additive in γ.
    pub fn trace_to_prime(&self, gamma: &FFElem) -> u64 {
        let em = self.fq.e * self.m;
        let mut acc = self.zero_elem();
        let mut pw = gamma.clone();
        for _ in 0..em {
            acc = self.add_elem(&acc, &pw);
            pw = self.pow_elem(&pw, self.fq.p);
        }
        let idx = self.index_of(&acc);
        assert!(idx < self.fq.p, "trace landed outside the prime field");
        idx
    }

    /// γ ↦ γ^q, the Frobenius of F_{q^m} over F_q.
    pub fn relative_frobenius(&self, gamma: &FFElem) -> FFElem {
        self.element(self.frobenius_idx(self.index_of(gamma)))
    }

    pub(crate) fn cached_xm1_factorization(
        &self,
        compute: impl FnOnce() -> Result<FactoredPoly>,
    ) -> Result<FactoredPoly> {
        self.xm1_fact.get_or_init(compute).clone()
    }
}

/// Deterministic scan for an element of multiplicative order exactly
/// q^m - 1; re-runs the construction-time search.
pub fn find_primitive(ctx: &FieldCtx) -> FFElem {
    let n = ctx.group_order();
    let prime_divs: Vec<u64> = factor_int(n.max(1))
        .expect("group order within factoring bound")
        .factors
        .iter()
        .map(|&(p, _)| p)
        .collect();
    let one = ctx.one_elem();
    for idx in 1..ctx.size() {
        let cand = ctx.element(idx);
        if prime_divs.iter().all(|&l| ctx.pow_elem(&cand, n / l) != one) {
            return cand;
        }
    }
    unreachable!("the multiplicative group is cyclic")
}

/// Deterministic scan for a normal element (F_q-order x^m - 1).
pub fn find_normal(ctx: &FieldCtx) -> Result<FFElem> {
    let xm1 = polyring::x_pow_m_minus_1(ctx.fq(), ctx.m());
    let divisors = polyring::divisors(ctx.fq(), &polyring::factor_xm_minus_1(ctx)?);
    for idx in 0..ctx.size() {
        let alpha = ctx.element(idx);
        let ord = crate::linearized::fq_order_in(ctx, &divisors, &alpha);
        if divisors[ord] == xm1 {
            return Ok(alpha);
        }
    }
    Err(Error::InternalInconsistency(
        "no normal element found; they exist in every extension",
    ))
}

/// Table-based discrete logarithm with respect to `ctx.primitive()`.
pub fn discrete_log(ctx: &FieldCtx, gamma: &FFElem) -> Result<u64> {
    let idx = ctx.index_of(gamma);
    if idx == 0 {
        return Err(Error::ZeroElement);
    }
    Ok(ctx.dlog_tbl[idx as usize] as u64)
}
