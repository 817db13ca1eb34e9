//! An exact laboratory for character sums over small finite fields.
//!
//! The crate constructs towers F_p ⊆ F_q ⊆ F_{q^m} small enough to
//! enumerate, realizes every additive and multiplicative character of the
//! top field with values in the exact cyclotomic ring Z[ζ_n], and verifies
//! a family of closed-form identities for character sums organized by
//! F_q-order — Carlitz-type sums, Ramanujan-type sums, and the
//! characteristic functions for prescribed F_q-order and k-normality —
//! by comparing brute-force oracles against the formulas as exact
//! integers.  No floating point is used anywhere.

pub mod characters;
pub mod charfun;
pub mod cyclotomic;
pub mod error;
pub mod fields;
pub mod intarith;
pub mod linearized;
pub mod polyring;
pub mod sums;
pub mod sweep;
pub mod textio;

pub use error::{Error, Result};
pub use fields::{build_field, FFElem, FieldCtx, FqCtx};
pub use polyring::{FactoredPoly, PolyQ, PolyRing};
