//! Python bindings: a `Field` class wrapping one tower F_p ⊆ F_q ⊆ F_{q^m}
//! plus module-level number-theoretic helpers.  Elements are addressed by
//! enumeration index; polynomials cross the boundary as strings in the
//! grammar `x^3 + x + 1` (bracketed digit tuples for coefficients when
//! e > 1).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ffchar::charfun::{self, SumMode};
use ffchar::fields::{self, FieldCtx, DEFAULT_LIMIT};
use ffchar::linearized;
use ffchar::polyring::{factor_divisor, factor_xm_minus_1, mu_poly, phi_poly, w_poly, PolyQ};
use ffchar::sums;
use ffchar::sweep::{self, SweepConfig};
use ffchar::textio;
use ffchar::{Error, FFElem};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_err(e: textio::ParseError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mode_from_str(mode: &str) -> PyResult<SumMode> {
    match mode {
        "oracle" => Ok(SumMode::OracleSums),
        "formula" => Ok(SumMode::FormulaSums),
        other => Err(PyValueError::new_err(format!(
            "mode must be 'oracle' or 'formula', got '{other}'"
        ))),
    }
}

/// One small finite field F_{q^m} with exhaustive tables.
#[pyclass]
struct Field {
    ctx: FieldCtx,
}

impl Field {
    fn elem(&self, idx: u64) -> PyResult<FFElem> {
        if idx >= self.ctx.size() {
            return Err(PyValueError::new_err(format!(
                "element index {idx} out of range (field size {})",
                self.ctx.size()
            )));
        }
        Ok(self.ctx.element(idx))
    }

    fn poly(&self, text: &str) -> PyResult<PolyQ> {
        textio::parse_poly(self.ctx.fq(), text).map_err(parse_err)
    }
}

#[pymethods]
impl Field {
    #[new]
    #[pyo3(signature = (p, e, m, limit = DEFAULT_LIMIT))]
    fn new(p: u64, e: u32, m: u32, limit: u64) -> PyResult<Field> {
        Ok(Field {
            ctx: fields::build_field(p, e, m, limit).map_err(err)?,
        })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.ctx.p()
    }

    #[getter]
    fn e(&self) -> u32 {
        self.ctx.e()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.ctx.m()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.ctx.q()
    }

    /// Number of elements q^m.
    #[getter]
    fn size(&self) -> u64 {
        self.ctx.size()
    }

    /// The modulus of F_{q^m} over F_q, as text.
    #[getter]
    fn top_modulus(&self) -> String {
        textio::format_poly(self.ctx.fq(), self.ctx.top_modulus())
    }

    /// Enumeration index of the verified primitive element.
    #[getter]
    fn primitive(&self) -> u64 {
        self.ctx.index_of(self.ctx.primitive())
    }

    fn __repr__(&self) -> String {
        format!(
            "Field(p={}, e={}, m={}) with {} elements, modulus {}",
            self.ctx.p(),
            self.ctx.e(),
            self.ctx.m(),
            self.ctx.size(),
            self.top_modulus()
        )
    }

    /// Coordinates of an element over F_q (F_q indices, ascending).
    fn element_coeffs(&self, idx: u64) -> PyResult<Vec<u64>> {
        Ok(self.elem(idx)?.coeffs().to_vec())
    }

    /// Text form of an element (polynomial in x over F_q).
    fn element_str(&self, idx: u64) -> PyResult<String> {
        Ok(textio::format_element(&self.ctx, &self.elem(idx)?))
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u64> {
        self.elem(a)?;
        self.elem(b)?;
        Ok(self.ctx.add_idx(a, b))
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u64> {
        self.elem(a)?;
        self.elem(b)?;
        Ok(self.ctx.mul_idx(a, b))
    }

    fn pow(&self, a: u64, k: u64) -> PyResult<u64> {
        let base = self.elem(a)?;
        Ok(self.ctx.index_of(&self.ctx.pow_elem(&base, k)))
    }

    /// Absolute trace down to F_p.
    fn trace(&self, idx: u64) -> PyResult<u64> {
        Ok(self.ctx.trace_to_prime(&self.elem(idx)?))
    }

    /// γ ↦ γ^q as an index map.
    fn frobenius(&self, idx: u64) -> PyResult<u64> {
        self.elem(idx)?;
        Ok(self.ctx.frobenius_idx(idx))
    }

    /// Discrete logarithm with respect to the primitive element.
    fn dlog(&self, idx: u64) -> PyResult<u64> {
        fields::discrete_log(&self.ctx, &self.elem(idx)?).map_err(err)
    }

    /// The F_q-order of an element, as text.
    fn fq_order(&self, idx: u64) -> PyResult<String> {
        let f = linearized::fq_order(&self.ctx, &self.elem(idx)?).map_err(err)?;
        Ok(textio::format_poly(self.ctx.fq(), &f))
    }

    fn k_normality(&self, idx: u64) -> PyResult<u32> {
        Ok(linearized::k_normality(&self.ctx, &self.elem(idx)?))
    }

    fn is_normal(&self, idx: u64) -> PyResult<bool> {
        Ok(self.k_normality(idx)? == 0)
    }

    /// Index of the first normal element in enumeration order.
    fn find_normal(&self) -> PyResult<u64> {
        let alpha = fields::find_normal(&self.ctx).map_err(err)?;
        Ok(self.ctx.index_of(&alpha))
    }

    /// f∘α for a polynomial f given as text.
    fn apply(&self, f: &str, idx: u64) -> PyResult<u64> {
        let f = self.poly(f)?;
        let alpha = self.elem(idx)?;
        Ok(self.ctx.index_of(&linearized::apply_linearized(&self.ctx, &f, &alpha)))
    }

    /// All monic divisors of x^m − 1 in the fixed order, as text.
    fn divisors(&self) -> PyResult<Vec<String>> {
        let fact = factor_xm_minus_1(&self.ctx).map_err(err)?;
        Ok(ffchar::polyring::divisors(self.ctx.fq(), &fact)
            .iter()
            .map(|d| textio::format_poly(self.ctx.fq(), d))
            .collect())
    }

    fn phi_poly(&self, f: &str) -> PyResult<i64> {
        let f = self.poly(f)?;
        let fact = factor_xm_minus_1(&self.ctx).map_err(err)?;
        Ok(phi_poly(
            self.ctx.fq(),
            &factor_divisor(self.ctx.fq(), &fact, &f).map_err(err)?,
        ))
    }

    fn mu_poly(&self, f: &str) -> PyResult<i64> {
        let f = self.poly(f)?;
        let fact = factor_xm_minus_1(&self.ctx).map_err(err)?;
        Ok(mu_poly(
            &factor_divisor(self.ctx.fq(), &fact, &f).map_err(err)?,
        ))
    }

    fn w_poly(&self, f: &str) -> PyResult<i64> {
        let f = self.poly(f)?;
        let fact = factor_xm_minus_1(&self.ctx).map_err(err)?;
        Ok(w_poly(
            &factor_divisor(self.ctx.fq(), &fact, &f).map_err(err)?,
        ))
    }

    /// Σ χ(α) over additive characters of order g, by enumeration.
    fn additive_sum_oracle(&self, g: &str, idx: u64) -> PyResult<i64> {
        let g = self.poly(g)?;
        sums::additive_sum_oracle(&self.ctx, &g, &self.elem(idx)?).map_err(err)
    }

    /// The closed form for Σ χ(α), driven by the F_q-order of α.
    fn additive_sum_formula(&self, g: &str, idx: u64) -> PyResult<i64> {
        let g = self.poly(g)?;
        let f1 = linearized::fq_order(&self.ctx, &self.elem(idx)?).map_err(err)?;
        sums::additive_sum_formula(&self.ctx, &g, &f1).map_err(err)
    }

    /// (oracle, formula) for Σ χ(f∘α) with α normal.
    fn composed_sum(&self, g: &str, f: &str, idx: u64) -> PyResult<(i64, i64)> {
        let g = self.poly(g)?;
        let f = self.poly(f)?;
        sums::additive_composed_sum(&self.ctx, &g, &f, &self.elem(idx)?).map_err(err)
    }

    /// Σ ψ(α^r) over multiplicative characters of order d, exact.
    fn mult_sum_oracle(&self, d: u64, r: u64) -> PyResult<i64> {
        sums::mult_sum_oracle(&self.ctx, d, r).map_err(err)
    }

    /// η_f(α) ∈ {0,1}; mode is "oracle" or "formula".
    #[pyo3(signature = (f, idx, mode = "formula"))]
    fn eta(&self, f: &str, idx: u64, mode: &str) -> PyResult<u8> {
        let f = self.poly(f)?;
        charfun::eta(&self.ctx, &f, &self.elem(idx)?, mode_from_str(mode)?).map_err(err)
    }

    /// ζ_k(α) ∈ {0,1}; mode is "oracle" or "formula".
    #[pyo3(signature = (k, idx, mode = "formula"))]
    fn zeta(&self, k: u32, idx: u64, mode: &str) -> PyResult<u8> {
        charfun::zeta(&self.ctx, k, &self.elem(idx)?, mode_from_str(mode)?).map_err(err)
    }

    /// k-normality census rows as (label, count_by_gcd, count_by_zeta, agree).
    fn census(&self) -> PyResult<Vec<(String, u64, u64, bool)>> {
        let rows = sweep::census(
            self.ctx.p(),
            self.ctx.e(),
            self.ctx.m(),
            self.ctx.limit(),
        )
        .map_err(err)?;
        Ok(rows
            .into_iter()
            .map(|r| (r.label, r.count_by_gcd, r.count_by_zeta, r.agree))
            .collect())
    }
}

/// Möbius function of a positive integer.
#[pyfunction]
fn mobius(n: u64) -> i64 {
    ffchar::intarith::mu_int(n)
}

/// Euler totient of a positive integer.
#[pyfunction]
fn euler_phi(n: u64) -> u64 {
    ffchar::intarith::phi_int(n)
}

/// Ascending divisors of a positive integer.
#[pyfunction]
fn divisors(n: u64) -> Vec<u64> {
    ffchar::intarith::divisors_int(n)
}

/// Coefficients of the n-th cyclotomic polynomial, ascending.
#[pyfunction]
fn cyclotomic_coeffs(n: u64) -> PyResult<Vec<i64>> {
    Ok(ffchar::cyclotomic::cyclotomic_poly(n).map_err(err)?.to_vec())
}

/// μ(d/gcd(d,r)) · φ(d)/φ(d/gcd(d,r)) — the closed form for the sum of
/// r-th powers of the primitive d-th roots of unity.
#[pyfunction]
fn ramanujan_sum(d: u64, r: u64) -> i64 {
    sums::mult_sum_formula(d, r)
}

/// Runs the selected checks on one (p, e, m) cell and returns the report
/// list as a JSON string.
#[pyfunction]
#[pyo3(signature = (p, e, m, checks = None, limit = DEFAULT_LIMIT, quadratic_limit = 512))]
fn verify_cell_json(
    p: u64,
    e: u32,
    m: u32,
    checks: Option<Vec<String>>,
    limit: u64,
    quadratic_limit: u64,
) -> PyResult<String> {
    let checks = match checks {
        None => sweep::ALL_CHECKS.to_vec(),
        Some(names) => names
            .iter()
            .map(|n| {
                sweep::CheckId::parse(n)
                    .ok_or_else(|| PyValueError::new_err(format!("unknown check '{n}'")))
            })
            .collect::<PyResult<Vec<_>>>()?,
    };
    let cfg = SweepConfig {
        cells: Some(vec![(p, e, m)]),
        checks,
        limit,
        quadratic_limit,
        ..SweepConfig::default()
    };
    let reports = sweep::run_verify(&cfg).map_err(err)?;
    Ok(sweep::reports_to_json(&reports))
}

#[pymodule]
fn ffchar_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_function(wrap_pyfunction!(mobius, m)?)?;
    m.add_function(wrap_pyfunction!(euler_phi, m)?)?;
    m.add_function(wrap_pyfunction!(divisors, m)?)?;
    m.add_function(wrap_pyfunction!(cyclotomic_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(ramanujan_sum, m)?)?;
    m.add_function(wrap_pyfunction!(verify_cell_json, m)?)?;
    Ok(())
}
