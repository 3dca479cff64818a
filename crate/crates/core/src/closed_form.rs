//! Closed-form predictions for differential and boomerang counts of specific
//! exponent families. Each function returns a prediction only; comparing it
//! with the brute-force tables in [`crate::diff`] and [`crate::boomerang`] is
//! left to the caller.

use std::collections::BTreeMap;

use crate::diff::DiffSpectrum;
use crate::error::{domain, Error, Result};
use crate::field::{Elem, FieldCtx};

/// `(nu_0, nu_1)` for `x^{3^n-3} (1 + chi(x))` from the two gamma sums:
/// `nu_1 = (3^n + 1 + 2 g1 + g2) / 4`, `nu_0 = (3^{n+1} - 5 - 2 g1 - g2) / 4`.
pub fn boom_spectrum_closed_3n_minus_3(n: u32, gamma1: i64, gamma2: i64) -> Result<(u64, u64)> {
    if n < 3 || n % 2 == 0 {
        return domain(format!("n = {n} must be odd and at least 3"));
    }
    let q = 3i128.pow(n);
    let s = 2 * gamma1 as i128 + gamma2 as i128;
    let num1 = q + 1 + s;
    let num0 = 3 * q - 5 - s;
    if num1 % 4 != 0 || num0 % 4 != 0 || num1 < 0 || num0 < 0 {
        return Err(Error::InvariantViolation(format!(
            "n={n} gamma1={gamma1} gamma2={gamma2}: spectrum numerators {num0}, {num1} are not non-negative multiples of 4"
        )));
    }
    let (nu0, nu1) = ((num0 / 4) as u64, (num1 / 4) as u64);
    debug_assert_eq!(nu0 + nu1, q as u64 - 1);
    Ok((nu0, nu1))
}

/// Predicted `delta(1, b)` of `x^r` for an APN exponent with parameter `m`:
/// 1 on the prime field, otherwise 2 or 0 according to `chi(b^{3^m+1} - 1)`.
pub fn zw_ddt_prediction(field: &FieldCtx, m: u32, b: Elem) -> u32 {
    if field.in_prime_field(b) {
        return 1;
    }
    let e = 3u64.pow(m) + 1;
    match field.chi(field.sub(field.pow_u(b, e), 1)) {
        -1 => 2,
        _ => 0,
    }
}

/// `{0: (q-3)/4, 1: (3q-1)/4, (q+1)/4: 1}` for `q = 3 mod 4`.
pub fn locally_pn_spectrum_closed(q: u64) -> Result<DiffSpectrum> {
    if q % 4 != 3 {
        return domain(format!("q = {q} is not 3 mod 4"));
    }
    let top = ((q + 1) / 4) as u32;
    let omega = BTreeMap::from([(0, (q - 3) / 4), (1, (3 * q - 1) / 4), (top, 1)]);
    Ok(DiffSpectrum { omega, delta: top })
}

/// `{0: (3^n-3)/2, 1: 3, 2: (3^n-3)/2}` for odd `n`.
pub fn apn_spectrum_closed(n: u32) -> Result<DiffSpectrum> {
    if n % 2 == 0 {
        return domain(format!("n = {n} must be odd"));
    }
    let half = (3u64.pow(n) - 3) / 2;
    Ok(DiffSpectrum {
        omega: BTreeMap::from([(0, half), (1, 3), (2, half)]),
        delta: 2,
    })
}

/// Sizes of `S_00, S_01, S_10, S_11` for odd `q`.
pub fn sij_closed(q: u64) -> [u64; 4] {
    if q % 4 == 3 {
        let s = (q - 3) / 4;
        [s, (q + 1) / 4, s, s]
    } else {
        let s = (q - 1) / 4;
        [(q - 5) / 4, s, s, s]
    }
}

/// Predicted `(D_01(b), D_10(b))` for `x^r (1 + chi(x))` where `r` is the even
/// APN exponent with parameter `m`. Requires `b != 0`.
pub fn zw_split_prediction(field: &FieldCtx, m: u32, b: Elem) -> (bool, bool) {
    let e = 3u64.pow(m).div_ceil(2);
    let s = field.pow_u(b, e);
    let sign = if m % 2 == 0 { 1 } else { -1 };
    let d01 = field.chi(b) == 1 && field.chi(field.add(s, 1)) == -1;
    let shifted = if sign == 1 { field.add(s, 1) } else { field.sub(s, 1) };
    let d10 = field.chi(b) == -1 && field.chi(shifted) == sign;
    (d01, d10)
}

/// Predicted `(D_00(b), D_01(b), D_10(b))` for `r = 2 * 3^l + 1` with
/// `l = (n - 1) / 2`, through `w = b^{2 * 3^{l+1} - 3}`. Requires `b != 0`.
///
/// The `D_01` and `D_10` entries are exact. The `D_00` entry is only a
/// necessary condition: `(q - 3) / 4` values of `b` satisfy it with
/// `delta(1, b) = 0`.
pub fn middle_exponent_prediction(field: &FieldCtx, b: Elem) -> (bool, bool, bool) {
    let l = (field.n() - 1) / 2;
    let w1 = field.add(field.pow_u(b, 2 * 3u64.pow(l + 1) - 3), 1);
    let d00 = field.chi(field.mul(b, w1)) == 1;
    let d01 = field.chi(b) == 1 && field.chi(w1) == -1;
    let d10 = field.chi(b) == -1 && field.chi(w1) == 1;
    (d00, d01, d10)
}

/// Predicted `[B_0001(b), B_0010(b), B_0100(b), B_1000(b)]` for
/// `r = 3^n - 3`. With `s = b^e`, `e = (3^n + 1) / 4`:
///
/// * `0001`: `chi(b) = -1`, `chi(s + 1) = chi(s + b) = 1`, `chi(s (s + b)^e - (s + 1)) = 1`
/// * `0010`: `chi(b) = chi(s - 1) = chi(s - b) = -1`, `chi(s (s - b)^e + (s - 1)) = 1`
/// * `0100`: `chi(b) = 1`, `chi(s + b) = chi(s - 1) = -1`, `chi(s (s + b)^e + (s - 1)) = 1`
/// * `1000`: `chi(b) = chi(s + 1) = chi(s - b) = 1`, `chi(s (s - b)^e - (s + 1)) = 1`
pub fn pair_prediction_3n_minus_3(field: &FieldCtx, b: Elem) -> [bool; 4] {
    let e = (field.q() as u64 + 1) / 4;
    let chi = |x| field.chi(x);
    let s = field.pow_u(b, e);
    let sp1 = field.add(s, 1);
    let sm1 = field.sub(s, 1);
    let spb = field.add(s, b);
    let smb = field.sub(s, b);
    let tail_plus = |base: Elem| field.mul(s, field.pow_u(base, e));
    let cb = chi(b);
    [
        cb == -1 && chi(sp1) == 1 && chi(spb) == 1 && chi(field.sub(tail_plus(spb), sp1)) == 1,
        cb == -1 && chi(sm1) == -1 && chi(smb) == -1 && chi(field.add(tail_plus(smb), sm1)) == 1,
        cb == 1 && chi(spb) == -1 && chi(sm1) == -1 && chi(field.add(tail_plus(spb), sm1)) == 1,
        cb == 1 && chi(sp1) == 1 && chi(smb) == 1 && chi(field.sub(tail_plus(smb), sp1)) == 1,
    ]
}
