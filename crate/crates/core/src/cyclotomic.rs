//! Exact arithmetic in Z[ζ_n] = Z[x]/Φ_n(x), the ring where every
//! character value and character sum in this crate lives.
//!
//! Elements are kept fully reduced in the power basis 1, ζ, …, ζ^{φ(n)−1},
//! so "is this value a rational integer" is a coordinate check — which is
//! exactly the postcondition the closed-form identities need.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::intarith::{divisors_int, gcd_u64, phi_int};

/// Largest root-of-unity order supported.
pub const CYCLOTOMIC_BOUND: u64 = 1 << 20;

fn cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The n-th cyclotomic polynomial Φ_n, coefficients ascending, monic of
/// degree φ(n).  Computed by exact division Φ_n = (x^n − 1) / ∏_{d|n, d<n} Φ_d
/// and memoized process-wide.
pub fn cyclotomic_poly(n: u64) -> Result<Arc<Vec<i64>>> {
    if n == 0 || n > CYCLOTOMIC_BOUND {
        return Err(Error::OutOfRange(n));
    }
    if let Some(hit) = cache().lock().unwrap().get(&n) {
        return Ok(hit.clone());
    }
    let result = if n == 1 {
        vec![-1i64, 1]
    } else {
        // x^n - 1
        let mut num = vec![0i64; n as usize + 1];
        num[0] = -1;
        num[n as usize] = 1;
        for d in divisors_int(n) {
            if d == n {
                continue;
            }
            let phi_d = cyclotomic_poly(d)?;
            num = exact_div(&num, &phi_d);
        }
        num
    };
    debug_assert_eq!(result.len() as u64 - 1, phi_int(n));
    let arc = Arc::new(result);
    cache().lock().unwrap().insert(n, arc.clone());
    Ok(arc)
}

/// Exact division of integer polynomials (monic divisor, zero remainder
/// guaranteed by the caller).
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    assert_eq!(*den.last().unwrap(), 1, "divisor must be monic");
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qlen = rem.len() - dn;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "division was not exact");
    quot
}

/// An exact element of Z[ζ_n], reduced modulo Φ_n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    n: u64,
    coords: Vec<i64>,
}

impl CycInt {
    pub fn zero(n: u64) -> Result<CycInt> {
        let dim = cyclotomic_poly(n)?.len() - 1;
        Ok(CycInt {
            n,
            coords: vec![0; dim],
        })
    }

    pub fn one(n: u64) -> Result<CycInt> {
        let mut z = CycInt::zero(n)?;
        z.coords[0] = 1;
        Ok(z)
    }

    pub fn from_integer(n: u64, v: i64) -> Result<CycInt> {
        let mut z = CycInt::zero(n)?;
        z.coords[0] = v;
        Ok(z)
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// The constant coordinate when the element is a rational integer,
    /// `None` otherwise.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coords[1..].iter().all(|&c| c == 0) {
            Some(self.coords[0])
        } else {
            None
        }
    }

    fn check_same(&self, other: &CycInt) -> Result<()> {
        if self.n != other.n {
            return Err(Error::MixedOrders(self.n, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &CycInt) -> Result<CycInt> {
        self.check_same(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycInt { n: self.n, coords })
    }

    pub fn sub(&self, other: &CycInt) -> Result<CycInt> {
        self.check_same(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycInt { n: self.n, coords })
    }

    pub fn neg(&self) -> CycInt {
        CycInt {
            n: self.n,
            coords: self.coords.iter().map(|&c| -c).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> CycInt {
        CycInt {
            n: self.n,
            coords: self.coords.iter().map(|&c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &CycInt) -> Result<CycInt> {
        self.check_same(other)?;
        let phi = cyclotomic_poly(self.n)?;
        let dim = self.coords.len();
        if dim == 0 {
            return Ok(self.clone());
        }
        let mut prod = vec![0i64; 2 * dim - 1];
        for (i, &a) in self.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coords.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        // reduce degrees dim.. down using x^dim ≡ -(Φ - x^dim)
        for k in (dim..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, &pj) in phi[..dim].iter().enumerate() {
                prod[k - dim + j] -= c * pj;
            }
        }
        prod.truncate(dim);
        Ok(CycInt {
            n: self.n,
            coords: prod,
        })
    }
}

/// ζ_n^k as a reduced element; `root_power(n, 0)` is 1 for every n.
pub fn root_power(n: u64, k: u64) -> Result<CycInt> {
    let mut counts = vec![0i64; n as usize];
    counts[(k % n) as usize] = 1;
    from_exponent_counts(n, &counts)
}

/// Σ_k counts[k] · ζ_n^k, reduced modulo Φ_n.  `counts` must have length n.
pub fn from_exponent_counts(n: u64, counts: &[i64]) -> Result<CycInt> {
    assert_eq!(counts.len() as u64, n, "counts must have length n");
    let mut acc = CycInt::zero(n)?;
    visit_x_power_rows(n, |k, row| {
        let c = counts[k];
        if c != 0 {
            for (a, &r) in acc.coords.iter_mut().zip(row) {
                *a += c * r;
            }
        }
    })?;
    Ok(acc)
}

/// Visits the reduced power-basis rows x^k mod Φ_n for k = 0, …, n−1 in
/// order.  Each row has length φ(n); rows are rebuilt incrementally so the
/// whole visit costs O(n · φ(n)).
pub fn visit_x_power_rows<F: FnMut(usize, &[i64])>(n: u64, mut f: F) -> Result<()> {
    let phi = cyclotomic_poly(n)?;
    let dim = phi.len() - 1;
    let mut row = vec![0i64; dim];
    row[0] = 1;
    f(0, &row);
    for k in 1..n as usize {
        // multiply by x: shift up, fold the overflow back with
        // x^dim ≡ -(Φ - x^dim)
        let carry = row[dim - 1];
        for i in (1..dim).rev() {
            row[i] = row[i - 1];
        }
        row[0] = 0;
        if carry != 0 {
            for (i, &pj) in phi[..dim].iter().enumerate() {
                row[i] -= carry * pj;
            }
        }
        f(k, &row);
    }
    Ok(())
}

/// Σ_{k=0}^{n−1} ζ_n^k; zero for n ≥ 2 and 1 for n = 1.
pub fn all_root_sum(n: u64) -> Result<CycInt> {
    let counts = vec![1i64; n as usize];
    from_exponent_counts(n, &counts)
}

/// Σ over k coprime to n of ζ_n^k — the sum of the primitive n-th roots
/// of unity, which collapses to μ(n).
pub fn primitive_root_sum(n: u64) -> Result<CycInt> {
    let counts: Vec<i64> = (0..n).map(|k| i64::from(gcd_u64(k, n) == 1)).collect();
    from_exponent_counts(n, &counts)
}
