//! Univariate polynomial arithmetic over F_q, the factorization of
//! x^m - 1, its divisor lattice, and the polynomial analogues of the
//! Euler, Möbius and square-free-divisor-count functions.
//!
//! Polynomials are ordered by (degree, coefficient key), where the key
//! reads the coefficient sequence as a base-q integer with the constant
//! term least significant.  "Least degree" minimality everywhere in the
//! crate means minimality in this total order.

use crate::error::{Error, Result};
use crate::fields::{build_field, FieldCtx, FqCtx};
use crate::intarith::factor_int;

/// A polynomial over F_q: coefficients ascending, F_q index form, leading
/// coefficient nonzero.  The zero polynomial is the empty sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyQ {
    coeffs: Vec<u64>,
}

impl PolyQ {
    pub fn zero() -> PolyQ {
        PolyQ { coeffs: Vec::new() }
    }

    pub fn one() -> PolyQ {
        PolyQ { coeffs: vec![1] }
    }

    pub fn constant(c: u64) -> PolyQ {
        PolyQ::from_coeffs(vec![c])
    }

    pub fn x() -> PolyQ {
        PolyQ {
            coeffs: vec![0, 1],
        }
    }

    pub fn x_pow(k: usize) -> PolyQ {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        PolyQ { coeffs }
    }

    /// Builds from ascending coefficients, trimming leading zeros.
    pub fn from_coeffs(mut coeffs: Vec<u64>) -> PolyQ {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        *self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Coefficient sequence read as a base-q integer, leading included.
    pub fn key(&self, q: u64) -> u128 {
        let mut out = 0u128;
        for &c in self.coeffs.iter().rev() {
            out = out * q as u128 + c as u128;
        }
        out
    }

    /// The fixed total order: by degree, then by coefficient key.
    pub fn order_key(&self, q: u64) -> (usize, u128) {
        (self.coeffs.len(), self.key(q))
    }
}

/// x^m - 1 over F_q.
pub fn x_pow_m_minus_1(fq: &FqCtx, m: u32) -> PolyQ {
    let mut coeffs = vec![0u64; m as usize + 1];
    coeffs[0] = fq.neg(1);
    coeffs[m as usize] = 1;
    PolyQ { coeffs }
}

/// Arithmetic over F_q[x] for a fixed base field.
pub struct PolyRing<'a> {
    fq: &'a FqCtx,
}

impl<'a> PolyRing<'a> {
    pub fn new(fq: &'a FqCtx) -> PolyRing<'a> {
        PolyRing { fq }
    }

    pub fn fq(&self) -> &FqCtx {
        self.fq
    }

    pub fn add(&self, a: &PolyQ, b: &PolyQ) -> PolyQ {
        let n = a.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.fq.add(a.coeff(i), b.coeff(i)))
            .collect();
        PolyQ::from_coeffs(coeffs)
    }

    pub fn neg(&self, a: &PolyQ) -> PolyQ {
        PolyQ {
            coeffs: a.coeffs.iter().map(|&c| self.fq.neg(c)).collect(),
        }
    }

    pub fn sub(&self, a: &PolyQ, b: &PolyQ) -> PolyQ {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &PolyQ, b: &PolyQ) -> PolyQ {
        if a.is_zero() || b.is_zero() {
            return PolyQ::zero();
        }
        let mut coeffs = vec![0u64; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                coeffs[i + j] = self.fq.add(coeffs[i + j], self.fq.mul(x, y));
            }
        }
        PolyQ::from_coeffs(coeffs)
    }

    pub fn mul_scalar(&self, c: u64, a: &PolyQ) -> PolyQ {
        PolyQ::from_coeffs(a.coeffs.iter().map(|&x| self.fq.mul(c, x)).collect())
    }

    /// Division with remainder: a = qb + r with deg r < deg b.
    pub fn divrem(&self, a: &PolyQ, b: &PolyQ) -> Result<(PolyQ, PolyQ)> {
        if b.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let db = b.coeffs.len() - 1;
        if a.coeffs.len() <= db {
            return Ok((PolyQ::zero(), a.clone()));
        }
        let lb_inv = self.fq.inv(b.leading())?;
        let mut rem = a.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - db];
        for i in (0..quot.len()).rev() {
            let c = self.fq.mul(rem[i + db], lb_inv);
            quot[i] = c;
            if c != 0 {
                for (j, &bj) in b.coeffs.iter().enumerate() {
                    rem[i + j] = self.fq.sub(rem[i + j], self.fq.mul(c, bj));
                }
            }
        }
        rem.truncate(db);
        Ok((PolyQ::from_coeffs(quot), PolyQ::from_coeffs(rem)))
    }

    pub fn rem(&self, a: &PolyQ, b: &PolyQ) -> Result<PolyQ> {
        Ok(self.divrem(a, b)?.1)
    }

    /// Exact division; `NotADivisor` when a remainder is left.
    pub fn div_exact(&self, a: &PolyQ, b: &PolyQ) -> Result<PolyQ> {
        let (q, r) = self.divrem(a, b)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotADivisor)
        }
    }

    pub fn monic(&self, a: &PolyQ) -> PolyQ {
        if a.is_zero() || a.is_monic() {
            return a.clone();
        }
        let inv = self.fq.inv(a.leading()).expect("nonzero leading coefficient");
        self.mul_scalar(inv, a)
    }

    /// Monic gcd; gcd(a, 0) = monic(a).
    pub fn gcd(&self, a: &PolyQ, b: &PolyQ) -> PolyQ {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    pub fn pow(&self, a: &PolyQ, mut k: u32) -> PolyQ {
        let mut base = a.clone();
        let mut acc = PolyQ::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn powmod(&self, a: &PolyQ, mut k: u64, modulus: &PolyQ) -> Result<PolyQ> {
        let mut base = self.rem(a, modulus)?;
        let mut acc = self.rem(&PolyQ::one(), modulus)?;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &base), modulus)?;
            }
            base = self.rem(&self.mul(&base, &base), modulus)?;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn eval(&self, a: &PolyQ, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in a.coeffs.iter().rev() {
            acc = self.fq.add(self.fq.mul(acc, x), c);
        }
        acc
    }
}

/// Rabin irreducibility test for monic-normalizable polynomials of
/// degree ≥ 1.
pub fn is_irreducible(fq: &FqCtx, f: &PolyQ) -> bool {
    let Some(d) = f.degree() else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let ring = PolyRing::new(fq);
    let f = ring.monic(f);
    let x = PolyQ::x();
    // xq[k] = x^{q^k} mod f by iterated q-th powers
    let mut xq = Vec::with_capacity(d + 1);
    xq.push(ring.rem(&x, &f).expect("deg f >= 2"));
    for _ in 0..d {
        let prev = xq.last().unwrap().clone();
        xq.push(ring.powmod(&prev, fq.q(), &f).expect("modulus nonzero"));
    }
    if xq[d] != xq[0] {
        return false;
    }
    let d_primes = factor_int(d as u64).expect("degree is tiny");
    for &(l, _) in &d_primes.factors {
        let sub = ring.sub(&xq[d / l as usize], &xq[0]);
        let g = ring.gcd(&sub, &f);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

/// The first monic irreducible of the given degree with nonzero constant
/// term, in the fixed (degree, key) order.  For degree 1 this is x + 1.
pub fn first_irreducible(fq: &FqCtx, deg: u32) -> PolyQ {
    let q = fq.q();
    let count = (q as u128).pow(deg);
    let mut key = 0u128;
    while key < count {
        if key % q as u128 != 0 {
            let mut coeffs = Vec::with_capacity(deg as usize + 1);
            let mut k = key;
            for _ in 0..deg {
                coeffs.push((k % q as u128) as u64);
                k /= q as u128;
            }
            coeffs.push(1);
            let f = PolyQ::from_coeffs(coeffs);
            if is_irreducible(fq, &f) {
                return f;
            }
        }
        key += 1;
    }
    unreachable!("irreducible polynomials of every degree exist over F_q")
}

// ---------------------------------------------------------------------------
// Factored form and the divisor lattice
// ---------------------------------------------------------------------------

/// A monic polynomial in factored form: pairwise distinct monic
/// irreducibles with multiplicities, sorted by (degree, key), plus a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredPoly {
    pub unit: u64,
    pub factors: Vec<(PolyQ, u32)>,
}

impl FactoredPoly {
    pub fn one() -> FactoredPoly {
        FactoredPoly {
            unit: 1,
            factors: Vec::new(),
        }
    }

    pub fn expand(&self, fq: &FqCtx) -> PolyQ {
        let ring = PolyRing::new(fq);
        let mut acc = PolyQ::constant(self.unit);
        for (f, e) in &self.factors {
            acc = ring.mul(&acc, &ring.pow(f, *e));
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e <= 1)
    }

    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .map(|(f, e)| f.degree().expect("irreducible factors are nonzero") * *e as usize)
            .sum()
    }
}

/// Factors x^m - 1 over F_q.  With m = m'·p^b, gcd(m', p) = 1, this is
/// (x^{m'} - 1)^{p^b}; the factors of x^{m'} - 1 come from the
/// q-cyclotomic cosets mod m', realized as minimal polynomials of powers
/// of a primitive m'-th root of unity in F_{q^t}.  Memoized on the
/// context.
pub fn factor_xm_minus_1(ctx: &FieldCtx) -> Result<FactoredPoly> {
    ctx.cached_xm1_factorization(|| factor_xm_minus_1_uncached(ctx))
}

fn factor_xm_minus_1_uncached(ctx: &FieldCtx) -> Result<FactoredPoly> {
    let fq = ctx.fq();
    let p = fq.p();
    let q = fq.q();
    let m = ctx.m() as u64;

    let mut mprime = m;
    let mut pb: u32 = 1;
    while mprime % p == 0 {
        mprime /= p;
        pb = pb
            .checked_mul(p as u32)
            .ok_or(Error::InternalInconsistency("multiplicity overflow"))?;
    }

    let mut factors: Vec<PolyQ> = if mprime == 1 {
        vec![PolyQ::from_coeffs(vec![fq.neg(1), 1])] // x - 1
    } else {
        // t = multiplicative order of q mod m'
        let qr = q % mprime;
        let mut t: u32 = 1;
        let mut acc = qr;
        while acc != 1 {
            acc = acc * qr % mprime;
            t += 1;
        }
        let aux = build_field(p, fq.e(), t, ctx.limit())?;
        let root_idx = aux.index_of(&aux.pow_elem(aux.primitive(), (aux.size() - 1) / mprime));

        // minimal polynomial of root^s for one representative per coset
        let mut seen = vec![false; mprime as usize];
        let mut out = Vec::new();
        for s in 0..mprime {
            if seen[s as usize] {
                continue;
            }
            let mut coset = Vec::new();
            let mut i = s;
            loop {
                seen[i as usize] = true;
                coset.push(i);
                i = i * qr % mprime;
                if i == s {
                    break;
                }
            }
            // ∏ (x - root^i) over the coset, computed in F_{q^t}
            let mut poly: Vec<u64> = vec![1]; // element indices, ascending
            for &i in &coset {
                let r = aux.pow_elem(&aux.element(root_idx), i);
                let neg_r = aux.index_of(&aux.neg_elem(&r));
                let mut next = vec![0u64; poly.len() + 1];
                for (j, &c) in poly.iter().enumerate() {
                    next[j + 1] = aux.add_idx(next[j + 1], c);
                    next[j] = aux.add_idx(next[j], aux.mul_idx(c, neg_r));
                }
                poly = next;
            }
            // coefficients are symmetric in a full Frobenius orbit, hence in F_q
            let mut coeffs = Vec::with_capacity(poly.len());
            for &c in &poly {
                if c >= q {
                    return Err(Error::InternalInconsistency(
                        "cyclotomic-coset factor has a coefficient outside F_q",
                    ));
                }
                coeffs.push(c);
            }
            out.push(PolyQ::from_coeffs(coeffs));
        }
        out
    };

    factors.sort_by_key(|f| f.order_key(q));
    let fact = FactoredPoly {
        unit: 1,
        factors: factors.into_iter().map(|f| (f, pb)).collect(),
    };

    let expected = x_pow_m_minus_1(fq, ctx.m());
    if fact.expand(fq) != expected {
        return Err(Error::InternalInconsistency(
            "factorization of x^m - 1 does not re-expand",
        ));
    }
    Ok(fact)
}

/// Expresses a monic divisor `f` of the ambient factored polynomial in the
/// ambient factor basis; `NotADivisor` if it does not divide.
pub fn factor_divisor(fq: &FqCtx, ambient: &FactoredPoly, f: &PolyQ) -> Result<FactoredPoly> {
    if f.is_zero() || !f.is_monic() {
        return Err(Error::NotADivisor);
    }
    let ring = PolyRing::new(fq);
    let mut rest = f.clone();
    let mut factors = Vec::new();
    for (u, a_max) in &ambient.factors {
        let mut mult = 0u32;
        while mult < *a_max {
            match ring.div_exact(&rest, u) {
                Ok(qt) => {
                    rest = qt;
                    mult += 1;
                }
                Err(_) => break,
            }
        }
        if mult > 0 {
            factors.push((u.clone(), mult));
        }
    }
    if !rest.is_one() {
        return Err(Error::NotADivisor);
    }
    Ok(FactoredPoly { unit: 1, factors })
}

/// All monic divisors, sorted by (degree, key); includes 1 and the full
/// polynomial.
pub fn divisors(fq: &FqCtx, fact: &FactoredPoly) -> Vec<PolyQ> {
    let ring = PolyRing::new(fq);
    let mut out = vec![PolyQ::one()];
    for (f, e) in &fact.factors {
        let prev = std::mem::take(&mut out);
        let mut pw = PolyQ::one();
        let mut powers = vec![pw.clone()];
        for _ in 0..*e {
            pw = ring.mul(&pw, f);
            powers.push(pw.clone());
        }
        for d in prev {
            for pk in &powers {
                out.push(ring.mul(&d, pk));
            }
        }
    }
    out.sort_by_key(|f| f.order_key(fq.q()));
    out
}

/// The square-free divisors (divisors of the radical), sorted.
pub fn squarefree_divisors(fq: &FqCtx, fact: &FactoredPoly) -> Vec<PolyQ> {
    let radical = FactoredPoly {
        unit: 1,
        factors: fact.factors.iter().map(|(f, _)| (f.clone(), 1)).collect(),
    };
    divisors(fq, &radical)
}

/// Polynomial Euler function: the number of polynomials of degree below
/// deg f that are coprime to f; φ(1) = 1.  Computed multiplicatively as
/// ∏ (q^{d·e} − q^{d(e−1)}).
pub fn phi_poly(fq: &FqCtx, fact: &FactoredPoly) -> i64 {
    let q = fq.q() as i64;
    fact.factors.iter().fold(1i64, |acc, (f, e)| {
        let d = f.degree().expect("irreducible factor") as u32;
        acc * (q.pow(d * e) - q.pow(d * (e - 1)))
    })
}

/// Polynomial Möbius function: (−1)^r on products of r distinct
/// irreducibles, 0 otherwise; μ(1) = 1.
pub fn mu_poly(fact: &FactoredPoly) -> i64 {
    if !fact.is_squarefree() {
        return 0;
    }
    if fact.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of square-free divisors, 2^{#distinct irreducible factors}.
pub fn w_poly(fact: &FactoredPoly) -> i64 {
    1i64 << fact.factors.len()
}

/// Literal coprime count realizing the definition of φ; the independent
/// check for the multiplicative formula.
pub fn phi_poly_bruteforce(fq: &FqCtx, f: &PolyQ) -> u64 {
    let ring = PolyRing::new(fq);
    let d = f.degree().expect("phi of the zero polynomial") as u32;
    let total = fq.q().pow(d);
    let mut count = 0u64;
    for key in 0..total {
        let mut coeffs = Vec::with_capacity(d as usize);
        let mut k = key;
        for _ in 0..d {
            coeffs.push(k % fq.q());
            k /= fq.q();
        }
        let g = PolyQ::from_coeffs(coeffs);
        if ring.gcd(f, &g).is_one() {
            count += 1;
        }
    }
    count
}
