//! APN power exponents over F_{3^n} from the condition
//! `(3^m + 1) r - 2 = k (3^n - 1)` with `r` even, `k` odd and `gcd(m, n) = 1`.
//!
//! Closed forms are evaluated with big integers and reduced mod `3^n - 1`
//! afterwards; the numerators reach `3^{n^2}` in size before division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::funcs::ExponentClass;

const MAX_N: u32 = 39;

fn pow3(e: u32) -> BigInt {
    BigInt::from(3u32).pow(e)
}

fn order(n: u32) -> u64 {
    3u64.pow(n) - 1
}

/// Reduces into `[1, 3^n - 1]`.
fn reduce(x: &BigInt, n: u32) -> u64 {
    let m = BigInt::from(order(n));
    let t = x.mod_floor(&m);
    if t.is_zero() {
        order(n)
    } else {
        t.to_u64().expect("reduced below 3^n - 1")
    }
}

fn exact_div(num: BigInt, den: BigInt) -> BigInt {
    let (quo, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero(), "closed form must divide exactly");
    quo
}

fn check_n(n: u32) -> Result<()> {
    if n % 2 == 0 {
        return domain(format!("n = {n}: the condition cannot hold when n is even"));
    }
    if !(3..=MAX_N).contains(&n) {
        return domain(format!("n = {n} outside the supported range [3, {MAX_N}]"));
    }
    Ok(())
}

fn check_nm(n: u32, m: u32) -> Result<()> {
    check_n(n)?;
    if m == 0 || m >= n {
        return domain(format!("m = {m} must lie in [1, n - 1]"));
    }
    if m.gcd(&n) != 1 {
        return domain(format!("gcd(m, n) = gcd({m}, {n}) != 1"));
    }
    Ok(())
}

/// Returns `k` when `r` is even and `(3^m + 1) r - 2 = k (3^n - 1)` with `k` odd.
pub fn zw_condition_check(n: u32, m: u32, r: u64) -> Result<Option<u64>> {
    check_nm(n, m)?;
    if r % 2 == 1 {
        return Ok(None);
    }
    let lhs = (pow3(m) + 1u32) * BigInt::from(r) - 2u32;
    let (k, rem) = lhs.div_rem(&BigInt::from(order(n)));
    if !rem.is_zero() || k.is_even() {
        return Ok(None);
    }
    Ok(k.to_u64())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityBranch {
    UEven,
    UOdd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZwWitness {
    pub n: u32,
    pub m: u32,
    /// `m^{-1} mod n`.
    pub u: u32,
    /// The closed-form exponent reduced into `[1, 3^n - 1]`.
    pub r: u64,
    /// Even member of the coset of `r` satisfying the condition: `r` itself
    /// when `u` is even, `3r` otherwise.
    pub r_even: u64,
    pub k: u64,
    pub branch: ParityBranch,
}

fn inverse_mod(m: u32, n: u32) -> u32 {
    (1..n).find(|&u| (u as u64 * m as u64) % n as u64 == 1).expect("gcd(m, n) = 1")
}

/// The APN exponent attached to `(n, m)`:
/// `(3^{um} - 1) / (3^m + 1)` for even `u`, `(1 - 3^{(n-u)m}) / (1 + 3^m)` for odd `u`.
pub fn zw_exponent(n: u32, m: u32) -> Result<(ExponentClass, ZwWitness)> {
    check_nm(n, m)?;
    let u = inverse_mod(m, n);
    let den = pow3(m) + 1u32;
    let (branch, r) = if u % 2 == 0 {
        (ParityBranch::UEven, reduce(&exact_div(pow3(u * m) - 1u32, den), n))
    } else {
        let num = BigInt::one() - pow3((n - u) * m);
        (ParityBranch::UOdd, reduce(&exact_div(num, den), n))
    };
    let r_even = match branch {
        ParityBranch::UEven => r,
        ParityBranch::UOdd => reduce(&(BigInt::from(r) * 3u32), n),
    };
    let k = zw_condition_check(n, m, r_even)?.ok_or_else(|| {
        Error::InvariantViolation(format!(
            "n={n} m={m} u={u}: exponent {r_even} does not satisfy (3^m+1)r - 2 = k(3^n-1) with k odd"
        ))
    })?;
    let class = ExponentClass::new(r as i128, 3, 3u64.pow(n));
    Ok((
        class,
        ZwWitness {
            n,
            m,
            u,
            r,
            r_even,
            k,
            branch,
        },
    ))
}

/// Brute force over all even residues mod `3^n - 1`; exactly one must pass.
pub fn zw_unique_even(n: u32, m: u32) -> Result<u64> {
    check_nm(n, m)?;
    let mut hits = Vec::new();
    for r in (0..order(n)).step_by(2) {
        if zw_condition_check(n, m, r)?.is_some() {
            hits.push(r);
        }
    }
    match hits.as_slice() {
        [r] => Ok(*r),
        _ => Err(Error::InvariantViolation(format!(
            "n={n} m={m}: expected exactly one even solution, found {hits:?}"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DivisorBranch {
    /// `m | n + 1`, `(n + 1) / m` even, `m != 1`.
    NPlusOne,
    /// `m | n - 1`, `(n - 1) / m` even.
    NMinusOne,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorMember {
    pub m: u32,
    pub r: u64,
    pub branch: DivisorBranch,
}

/// Exponents `(3^{n+1} - 1) / (3^m + 1)` for `m | n + 1` and
/// `(1 - 3^{n-1}) / (1 + 3^m)` for `m | n - 1`, with even cofactors.
pub fn divisor_family(n: u32) -> Result<Vec<DivisorMember>> {
    check_n(n)?;
    let mut out = Vec::new();
    for m in 2..=n + 1 {
        if (n + 1) % m == 0 && ((n + 1) / m) % 2 == 0 {
            let r = exact_div(pow3(n + 1) - 1u32, pow3(m) + 1u32);
            out.push(DivisorMember {
                m,
                r: reduce(&r, n),
                branch: DivisorBranch::NPlusOne,
            });
        }
    }
    for m in 1..n {
        if (n - 1) % m == 0 && ((n - 1) / m) % 2 == 0 {
            let r = exact_div(BigInt::one() - pow3(n - 1), pow3(m) + 1u32);
            out.push(DivisorMember {
                m,
                r: reduce(&r, n),
                branch: DivisorBranch::NMinusOne,
            });
        }
    }
    Ok(out)
}

/// `(3^{n+1} - 1) / (3^{(n+1)/2^l} + 1)`.
pub fn pow2_plus_exponent(n: u32, l: u32) -> Result<u64> {
    check_n(n)?;
    let d = 1u32.checked_shl(l).filter(|d| (n + 1) % d == 0 && l >= 1);
    let Some(d) = d else {
        return domain(format!("2^{l} does not divide n + 1 = {}", n + 1));
    };
    Ok(reduce(&exact_div(pow3(n + 1) - 1u32, pow3((n + 1) / d) + 1u32), n))
}

/// `(1 - 3^{n-1}) / (1 + 3^{(n-1)/2^l})`.
pub fn pow2_minus_exponent(n: u32, l: u32) -> Result<u64> {
    check_n(n)?;
    let d = 1u32.checked_shl(l).filter(|d| (n - 1) % d == 0 && l >= 1);
    let Some(d) = d else {
        return domain(format!("2^{l} does not divide n - 1 = {}", n - 1));
    };
    Ok(reduce(&exact_div(BigInt::one() - pow3(n - 1), pow3((n - 1) / d) + 1u32), n))
}

/// Whether the exponents for `m` and `n - m` share a cyclotomic coset.
pub fn mirror_equivalence(n: u32, m: u32) -> Result<bool> {
    let (a, _) = zw_exponent(n, m)?;
    let (b, _) = zw_exponent(n, n - m)?;
    Ok(a.coset_full == b.coset_full)
}

/// One generated exponent as emitted by the command-line generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApnRecord {
    pub n: u32,
    pub m: u32,
    pub u: u32,
    pub branch: ParityBranch,
    pub r: u64,
    pub coset_full_min: u64,
    pub coset_half_min: u64,
    pub k: u64,
}

/// Exponents for every `m <= (n - 1) / 2` coprime to `n` (the mirror `n - m`
/// gives the same coset), or for a single `m`.
pub fn generate(n: u32, only_m: Option<u32>) -> Result<Vec<ApnRecord>> {
    check_n(n)?;
    let ms: Vec<u32> = match only_m {
        Some(m) => vec![m],
        None => (1..=(n - 1) / 2).filter(|m| m.gcd(&n) == 1).collect(),
    };
    ms.into_iter()
        .map(|m| {
            let (class, w) = zw_exponent(n, m)?;
            Ok(ApnRecord {
                n,
                m,
                u: w.u,
                branch: w.branch,
                r: w.r,
                coset_full_min: class.coset_full[0],
                coset_half_min: class.canon,
                k: w.k,
            })
        })
        .collect()
}
