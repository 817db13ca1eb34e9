//! Canonical text form for polynomials and elements.
//!
//! Grammar (variable `x`, F_q coefficients):
//!
//! ```text
//! poly  := term (('+' | '-') term)* | '0'
//! term  := coeff '*'? power | coeff | power
//! power := 'x' ('^' uint)?
//! coeff := uint                  (e = 1: residue mod p)
//!        | '[' uint (','uint)* ']'  (e > 1: base-p digits, constant first)
//! ```
//!
//! Printing is canonical: descending powers, `+`-separated, coefficients 1
//! omitted except on the constant term, residues already reduced (so `-1`
//! over F_3 prints as `2`).  Parsing additionally accepts `-` and
//! unreduced integers.

use std::fmt;

use crate::fields::{FFElem, FieldCtx, FqCtx};
use crate::polyring::PolyQ;

/// A syntax error in polynomial or element input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error: {}", self.0)
    }
}

impl std::error::Error for ParseError {}

fn format_coeff(fq: &FqCtx, c: u64) -> String {
    if fq.e() == 1 {
        c.to_string()
    } else {
        let mut digits = Vec::with_capacity(fq.e() as usize);
        let mut k = c;
        for _ in 0..fq.e() {
            digits.push((k % fq.p()).to_string());
            k /= fq.p();
        }
        format!("[{}]", digits.join(","))
    }
}

/// Canonical rendering of a polynomial over F_q in the crate grammar.
pub fn format_poly(fq: &FqCtx, f: &PolyQ) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    for (i, &c) in f.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let var = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        let term = if i == 0 {
            format_coeff(fq, c)
        } else if c == 1 {
            var
        } else {
            format!("{}{var}", format_coeff(fq, c))
        };
        terms.push(term);
    }
    terms.join(" + ")
}

/// Renders a factored form such as `(x + 1)^2 (x^2 + x + 1)`.
pub fn format_factored(fq: &FqCtx, fact: &crate::polyring::FactoredPoly) -> String {
    if fact.factors.is_empty() {
        return "1".to_string();
    }
    fact.factors
        .iter()
        .map(|(f, e)| {
            if *e == 1 {
                format!("({})", format_poly(fq, f))
            } else {
                format!("({})^{e}", format_poly(fq, f))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders an element of F_{q^m} as a polynomial in x over F_q.
pub fn format_element(ctx: &FieldCtx, a: &FFElem) -> String {
    format_poly(ctx.fq(), &PolyQ::from_coeffs(a.coeffs().to_vec()))
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    X,
    LBracket,
    RBracket,
    Comma,
    Int(u64),
    End,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Lexer<'a> {
        Lexer {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(Tok::End);
        }
        let c = self.src[self.pos];
        self.pos += 1;
        Ok(match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'x' | b'X' => Tok::X,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b',' => Tok::Comma,
            b'0'..=b'9' => {
                let mut v = (c - b'0') as u64;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add((self.src[self.pos] - b'0') as u64))
                        .ok_or_else(|| ParseError("integer literal too large".into()))?;
                    self.pos += 1;
                }
                Tok::Int(v)
            }
            other => {
                return Err(ParseError(format!(
                    "unexpected character '{}'",
                    other as char
                )))
            }
        })
    }

    fn peek(&mut self) -> Result<Tok, ParseError> {
        let save = self.pos;
        let t = self.next()?;
        self.pos = save;
        Ok(t)
    }
}

/// Parses a polynomial over F_q from the crate grammar.
pub fn parse_poly(fq: &FqCtx, s: &str) -> Result<PolyQ, ParseError> {
    let mut lx = Lexer::new(s);
    let mut coeffs: Vec<u64> = Vec::new();
    let mut sign_neg = false;
    // leading sign
    match lx.peek()? {
        Tok::Minus => {
            lx.next()?;
            sign_neg = true;
        }
        Tok::Plus => {
            lx.next()?;
        }
        _ => {}
    }
    loop {
        let (coeff, exp) = parse_term(fq, &mut lx)?;
        let coeff = if sign_neg { fq.neg(coeff) } else { coeff };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        coeffs[exp] = fq.add(coeffs[exp], coeff);
        match lx.next()? {
            Tok::Plus => sign_neg = false,
            Tok::Minus => sign_neg = true,
            Tok::End => break,
            t => return Err(ParseError(format!("expected '+', '-' or end, got {t:?}"))),
        }
    }
    Ok(PolyQ::from_coeffs(coeffs))
}

fn parse_coeff_digits(fq: &FqCtx, lx: &mut Lexer) -> Result<u64, ParseError> {
    // after '['
    let mut digits = Vec::new();
    loop {
        match lx.next()? {
            Tok::Int(v) => digits.push(v % fq.p()),
            t => return Err(ParseError(format!("expected digit in coefficient, got {t:?}"))),
        }
        match lx.next()? {
            Tok::Comma => continue,
            Tok::RBracket => break,
            t => return Err(ParseError(format!("expected ',' or ']', got {t:?}"))),
        }
    }
    if digits.len() > fq.e() as usize {
        return Err(ParseError(format!(
            "coefficient has {} digits but e = {}",
            digits.len(),
            fq.e()
        )));
    }
    let mut v = 0u64;
    for &d in digits.iter().rev() {
        v = v * fq.p() + d;
    }
    Ok(v)
}

fn parse_term(fq: &FqCtx, lx: &mut Lexer) -> Result<(u64, usize), ParseError> {
    let mut coeff: Option<u64> = None;
    match lx.peek()? {
        Tok::Int(v) => {
            lx.next()?;
            if fq.e() > 1 && v >= fq.p() {
                return Err(ParseError(format!(
                    "coefficient {v} needs bracket form when e > 1"
                )));
            }
            coeff = Some(v % if fq.e() == 1 { fq.q() } else { fq.p() });
        }
        Tok::LBracket => {
            lx.next()?;
            coeff = Some(parse_coeff_digits(fq, lx)?);
        }
        _ => {}
    }
    if coeff.is_some() {
        if let Tok::Star = lx.peek()? {
            lx.next()?;
        }
    }
    match lx.peek()? {
        Tok::X => {
            lx.next()?;
            let exp = if let Tok::Caret = lx.peek()? {
                lx.next()?;
                match lx.next()? {
                    Tok::Int(v) => {
                        usize::try_from(v).map_err(|_| ParseError("exponent too large".into()))?
                    }
                    t => return Err(ParseError(format!("expected exponent, got {t:?}"))),
                }
            } else {
                1
            };
            if exp > 1 << 16 {
                return Err(ParseError(format!("exponent {exp} too large")));
            }
            Ok((coeff.unwrap_or(1), exp))
        }
        _ => match coeff {
            Some(c) => Ok((c, 0)),
            None => Err(ParseError("expected a term".into())),
        },
    }
}

/// Parses an element of F_{q^m}: either an enumeration index (plain
/// integer) or a polynomial-in-x expression of degree < m.
pub fn parse_element(ctx: &FieldCtx, s: &str) -> Result<FFElem, ParseError> {
    let t = s.trim();
    if t.chars().all(|c| c.is_ascii_digit()) && !t.is_empty() {
        let idx: u64 = t
            .parse()
            .map_err(|_| ParseError("element index too large".into()))?;
        if idx >= ctx.size() {
            return Err(ParseError(format!(
                "element index {idx} out of range (size {})",
                ctx.size()
            )));
        }
        return Ok(ctx.element(idx));
    }
    let poly = parse_poly(ctx.fq(), t)?;
    if poly.coeffs().len() > ctx.m() as usize {
        return Err(ParseError(format!(
            "element polynomial degree must be below m = {}",
            ctx.m()
        )));
    }
    let mut coeffs = poly.coeffs().to_vec();
    coeffs.resize(ctx.m() as usize, 0);
    Ok(ctx
        .element_from_coeffs(coeffs)
        .expect("coefficients validated by the parser"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{build_field, FqCtx};

    #[test]
    fn round_trip_f2() {
        let fq = FqCtx::new(2, 1).unwrap();
        let f = PolyQ::from_coeffs(vec![1, 1, 0, 1]);
        let s = format_poly(&fq, &f);
        assert_eq!(s, "x^3 + x + 1");
        assert_eq!(parse_poly(&fq, &s).unwrap(), f);
        assert_eq!(parse_poly(&fq, "x^3+x+1").unwrap(), f);
        assert_eq!(format_poly(&fq, &PolyQ::zero()), "0");
        assert_eq!(parse_poly(&fq, "0").unwrap(), PolyQ::zero());
    }

    #[test]
    fn minus_normalizes_mod_p() {
        let fq = FqCtx::new(3, 1).unwrap();
        let f = parse_poly(&fq, "x^3 - 1").unwrap();
        assert_eq!(f, PolyQ::from_coeffs(vec![2, 0, 0, 1]));
        assert_eq!(format_poly(&fq, &f), "x^3 + 2");
    }

    #[test]
    fn bracket_coefficients_when_e_above_one() {
        let fq = FqCtx::new(2, 2).unwrap();
        // [0,1] = y (index 2)
        let f = parse_poly(&fq, "[0,1]x^2 + x + [1,1]").unwrap();
        assert_eq!(f, PolyQ::from_coeffs(vec![3, 1, 2]));
        let s = format_poly(&fq, &f);
        assert_eq!(s, "[0,1]x^2 + x + [1,1]");
        assert_eq!(parse_poly(&fq, &s).unwrap(), f);
    }

    #[test]
    fn element_parsing() {
        let f8 = build_field(2, 1, 3, 4096).unwrap();
        assert_eq!(parse_element(&f8, "5").unwrap(), f8.element(5));
        assert_eq!(parse_element(&f8, "x^2 + 1").unwrap(), f8.element(5));
        assert!(parse_element(&f8, "9").is_err());
        assert!(parse_element(&f8, "x^3").is_err());
        assert_eq!(format_element(&f8, &f8.element(5)), "x^2 + 1");
    }

    #[test]
    fn rejects_garbage() {
        let fq = FqCtx::new(2, 1).unwrap();
        assert!(parse_poly(&fq, "").is_err());
        assert!(parse_poly(&fq, "x +").is_err());
        assert!(parse_poly(&fq, "y^2").is_err());
        assert!(parse_poly(&fq, "3x^2x").is_err());
    }
}
