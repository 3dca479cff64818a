//! Exact differential and boomerang analysis of power maps `x^r` and
//! quadratic-character binomials `x^r (1 + u chi(x))` over finite fields of odd
//! characteristic, with most of the machinery specialised to `p = 3`.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: table-driven arithmetic in F_{p^n} and the quadratic character.
//! * [`funcs`]: tabulated functions and exponent bookkeeping (cosets, degree).
//! * [`diff`] and [`boomerang`]: DDT/BCT rows, spectra and the sign-pattern
//!   decompositions of their counts.
//! * [`apn`]: APN exponents from the `(3^m+1) r - 2 = k (3^n-1)` family.
//! * [`charsum`] and [`closed_form`]: character sums and closed-form count
//!   predictions, meant to be checked against the brute-force tables.
//! * [`scan`]: exhaustive searches over binomial exponent classes.
//! * [`tables`]: the embedded reference dataset and its verifier.

pub mod apn;
pub mod boomerang;
pub mod charsum;
pub mod closed_form;
pub mod diff;
mod error;
pub mod field;
pub mod funcs;
mod poly;
pub mod scan;
pub mod tables;

pub use error::{Error, Result};
pub use field::{Elem, FieldCtx};
pub use funcs::{ExponentClass, FuncKind, FuncLabel, FuncTable};
