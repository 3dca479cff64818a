//! Quadratic character sums evaluated by direct summation over the field.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::boom_spectrum_closed_3n_minus_3;
use crate::error::{domain, Result};
use crate::field::{Elem, FieldCtx};

/// Sums entering the boomerang spectrum of `x^{3^n-3} (1 + chi(x))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharSumReport {
    pub n: u32,
    /// `sum chi(u (u^2 + 1)) chi(u^4 + u^3 - 1)`
    pub gamma1: i64,
    /// `sum chi(u (1 - u^2)) chi(u^4 + u^3 - 1)`
    pub gamma2: i64,
    /// `sum chi(x^4 + x^3 - 1)`, equal to -1 for odd n.
    pub quartic_sum: i64,
    /// `gamma1 + sum chi(x^4 - 1) chi(x^4 + x^3 - 1)`, equal to -1 for odd n.
    pub mixed_sum: i64,
    /// `6 * floor(sqrt(q))`
    pub weil_bound: u64,
    pub nu0: u64,
    pub nu1: u64,
}

impl CharSumReport {
    /// `|gamma_i| < 6 sqrt(q)` for both sums, checked exactly as `gamma^2 < 36 q`.
    pub fn within_weil_bound(&self) -> bool {
        let q = 3u64.pow(self.n) as i128;
        [self.gamma1, self.gamma2]
            .iter()
            .all(|&g| (g as i128).pow(2) < 36 * q)
    }
}

#[derive(Default, Clone, Copy)]
struct Partial {
    gamma1: i64,
    gamma2: i64,
    quartic: i64,
    mixed: i64,
}

fn term(field: &FieldCtx, x: Elem) -> Partial {
    let x2 = field.mul(x, x);
    let x3 = field.mul(x2, x);
    let x4 = field.mul(x2, x2);
    let quartic = field.chi(field.sub(field.add(x4, x3), 1)) as i64;
    let cx = field.chi(x) as i64;
    Partial {
        gamma1: cx * field.chi(field.add(x2, 1)) as i64 * quartic,
        gamma2: cx * field.chi(field.sub(1, x2)) as i64 * quartic,
        quartic,
        mixed: field.chi(field.sub(x4, 1)) as i64 * quartic,
    }
}

/// All four sums in one parallel pass; `p = 3` and odd `n` only.
pub fn gamma_sums(field: &FieldCtx) -> Result<CharSumReport> {
    if field.p() != 3 || field.n() % 2 == 0 {
        return domain(format!(
            "gamma sums are defined here for p = 3 and odd n, got p = {}, n = {}",
            field.p(),
            field.n()
        ));
    }
    let s = (0..field.q())
        .into_par_iter()
        .map(|x| term(field, x))
        .reduce(Partial::default, |a, b| Partial {
            gamma1: a.gamma1 + b.gamma1,
            gamma2: a.gamma2 + b.gamma2,
            quartic: a.quartic + b.quartic,
            mixed: a.mixed + b.mixed,
        });
    let (nu0, nu1) = boom_spectrum_closed_3n_minus_3(field.n(), s.gamma1, s.gamma2)?;
    Ok(CharSumReport {
        n: field.n(),
        gamma1: s.gamma1,
        gamma2: s.gamma2,
        quartic_sum: s.quartic,
        mixed_sum: s.gamma1 + s.mixed,
        weil_bound: 6 * (field.q() as u64).isqrt(),
        nu0,
        nu1,
    })
}

/// `sum_x chi(f(x))` for `f` given by coefficients, constant term first.
pub fn poly_charsum(field: &FieldCtx, coeffs: &[Elem]) -> i64 {
    field
        .elements()
        .map(|x| {
            let v = coeffs
                .iter()
                .rev()
                .fold(0, |acc, &c| field.add(field.mul(acc, x), c));
            field.chi(v) as i64
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadSum {
    pub direct: i64,
    /// `-chi(a2)` when the discriminant is nonzero, `(q - 1) chi(a2)` otherwise.
    pub closed: i64,
}

impl QuadSum {
    pub fn holds(&self) -> bool {
        self.direct == self.closed
    }
}

/// `sum chi(a2 x^2 + a1 x + a0)` directly and from the discriminant.
pub fn quad_charsum_check(field: &FieldCtx, a2: Elem, a1: Elem, a0: Elem) -> Result<QuadSum> {
    if a2 == 0 {
        return domain("leading coefficient a2 must be nonzero");
    }
    let direct = poly_charsum(field, &[a0, a1, a2]);
    let four = field.from_int(4);
    let disc = field.sub(field.mul(a1, a1), field.mul(four, field.mul(a0, a2)));
    let c = field.chi(a2) as i64;
    let closed = if disc != 0 { -c } else { (field.q() as i64 - 1) * c };
    Ok(QuadSum { direct, closed })
}
