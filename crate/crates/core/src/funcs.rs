//! Power maps, quadratic-character binomials and exponent bookkeeping.

use std::io::Write;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::field::{Elem, FieldCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FuncKind {
    /// `x^r`
    Power,
    /// `x^r (1 + u chi(x))`
    Binomial,
}

impl std::fmt::Display for FuncKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FuncKind::Power => "power",
            FuncKind::Binomial => "binomial",
        })
    }
}

/// What a [`FuncTable`] tabulates. `r` is already reduced into `[1, q-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuncLabel {
    pub kind: FuncKind,
    pub r: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<Elem>,
}

/// Reduces any integer exponent into `[1, q-1]`.
pub fn reduce_exponent(r: i128, q: u64) -> u64 {
    let m = q as i128 - 1;
    match r.rem_euclid(m) {
        0 => m as u64,
        t => t as u64,
    }
}

/// `x^r` with `0^r = 0`.
pub fn eval_power(field: &FieldCtx, r: i128, x: Elem) -> Elem {
    let e = reduce_exponent(r, field.q() as u64);
    field.pow_u(x, e)
}

/// `x^r (1 + u chi(x))`, zero at zero.
pub fn eval_binomial(field: &FieldCtx, r: i128, u: Elem, x: Elem) -> Result<Elem> {
    if u == 0 {
        return domain("binomial with u = 0 is the power map x^r");
    }
    let factor = match field.chi(x) {
        0 => return Ok(0),
        1 => field.add(1, u),
        _ => field.sub(1, u),
    };
    Ok(field.mul(eval_power(field, r, x), factor))
}

/// Evaluation table of a map F_q -> F_q, indexed by element id.
#[derive(Clone)]
pub struct FuncTable<'f> {
    field: &'f FieldCtx,
    values: Vec<Elem>,
    label: Option<FuncLabel>,
}

impl<'f> FuncTable<'f> {
    /// Tabulates a power map (`u` ignored) or a binomial in one pass over the
    /// discrete logs: the log of `x^r` advances by `r` per step.
    pub fn tabulate(field: &'f FieldCtx, kind: FuncKind, r: i128, u: Option<Elem>) -> Result<Self> {
        let q = field.q();
        let order = field.order() as u64;
        let r = reduce_exponent(r, q as u64);
        let (even_coef, odd_coef, u) = match kind {
            FuncKind::Power => (1, 1, None),
            FuncKind::Binomial => {
                let u = u.unwrap_or(1);
                if u == 0 {
                    return domain("binomial with u = 0 is the power map x^r");
                }
                if u >= q {
                    return domain(format!("u = {u} is not an element of the field"));
                }
                (field.add(1, u), field.sub(1, u), Some(u))
            }
        };
        let step = r % order;
        let mut values = vec![0; q as usize];
        let mut e = 0u64;
        for k in 0..field.order() {
            let coef = if k & 1 == 0 { even_coef } else { odd_coef };
            values[field.exp(k) as usize] = field.mul(coef, field.exp(e as u32));
            e += step;
            if e >= order {
                e -= order;
            }
        }
        Ok(FuncTable {
            field,
            values,
            label: Some(FuncLabel { kind, r, u }),
        })
    }

    pub fn power(field: &'f FieldCtx, r: i128) -> Self {
        Self::tabulate(field, FuncKind::Power, r, None).expect("power maps always tabulate")
    }

    /// Binomial `x^r (1 + u chi(x))`.
    pub fn binomial(field: &'f FieldCtx, r: i128, u: Elem) -> Result<Self> {
        Self::tabulate(field, FuncKind::Binomial, r, Some(u))
    }

    /// Wraps an arbitrary table of element ids.
    pub fn from_values(field: &'f FieldCtx, values: Vec<Elem>) -> Result<Self> {
        if values.len() != field.q() as usize {
            return domain(format!(
                "table has {} entries, field has {}",
                values.len(),
                field.q()
            ));
        }
        if let Some(v) = values.iter().find(|&&v| v >= field.q()) {
            return domain(format!("table value {v} is not an element id"));
        }
        Ok(FuncTable {
            field,
            values,
            label: None,
        })
    }

    pub fn field(&self) -> &'f FieldCtx {
        self.field
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    #[inline]
    pub fn at(&self, x: Elem) -> Elem {
        self.values[x as usize]
    }

    pub fn label(&self) -> Option<&FuncLabel> {
        self.label.as_ref()
    }

    /// Whether `delta_F(a, b)` and `beta_F(a, b)` reduce to the `a = 1` row.
    /// True for power maps, and for binomials when `q = 3 mod 4`.
    pub fn has_unit_reduction(&self) -> bool {
        match &self.label {
            Some(l) if l.kind == FuncKind::Power => true,
            Some(_) => self.field.q() % 4 == 3,
            None => false,
        }
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.values.len()];
        self.values
            .iter()
            .all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }

    /// Writes the label as a JSON line, then `input_id,output_id` CSV rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer(&mut out, &self.label)?;
        writeln!(out)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["input_id", "output_id"])?;
        for (x, v) in self.values.iter().enumerate() {
            w.serialize((x, v))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Orbit of `r mod m` under multiplication by `multiplier`, sorted.
pub fn coset(r: i128, m: u64, multiplier: u64) -> Vec<u64> {
    assert!(m >= 1, "coset modulus must be positive");
    let start = r.rem_euclid(m as i128) as u64;
    let mut out = vec![start];
    let mut cur = (start as u128 * multiplier as u128 % m as u128) as u64;
    while cur != start {
        out.push(cur);
        cur = (cur as u128 * multiplier as u128 % m as u128) as u64;
        if out.len() as u64 > m {
            // multiplier not invertible: the walk entered a cycle avoiding start
            break;
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// An exponent with its cyclotomic cosets modulo `q - 1` and `(q - 1) / 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentClass {
    pub r: u64,
    pub coset_full: Vec<u64>,
    pub coset_half: Vec<u64>,
    pub canon: u64,
}

impl ExponentClass {
    pub fn new(r: i128, p: u64, q: u64) -> Self {
        let r = reduce_exponent(r, q);
        let coset_full = coset(r as i128, q - 1, p);
        let coset_half = coset(r as i128, (q - 1) / 2, p);
        let canon = coset_half[0];
        ExponentClass {
            r,
            coset_full,
            coset_half,
            canon,
        }
    }

    pub fn in_field(r: i128, field: &FieldCtx) -> Self {
        Self::new(r, field.p() as u64, field.q() as u64)
    }
}

/// Orbit of `r mod m` under multiplication by `multiplier`, in walk order
/// starting from `r mod m` (the order tables usually print cosets in).
pub fn coset_orbit(r: i128, m: u64, multiplier: u64) -> Vec<u64> {
    let start = r.rem_euclid(m as i128) as u64;
    let mut out = vec![start];
    let mut cur = (start as u128 * multiplier as u128 % m as u128) as u64;
    while cur != start && (out.len() as u64) < m {
        out.push(cur);
        cur = (cur as u128 * multiplier as u128 % m as u128) as u64;
    }
    out
}

fn digit_sum(mut e: u64, p: u64) -> u64 {
    let mut s = 0;
    while e > 0 {
        s += e % p;
        e /= p;
    }
    s
}

/// Algebraic degree of `x^r (1 + chi(x)) = x^{e1} + x^{e2}`: the larger
/// base-p digit sum of the two exponents in `[1, q-1]`.
pub fn algebraic_degree_binomial(p: u64, q: u64, r: i128) -> Result<u64> {
    let half = (q - 1) / 2;
    if r.rem_euclid(half as i128) == 0 {
        return domain(format!(
            "r = {r} is a multiple of (q-1)/2 = {half}; the binomial degenerates"
        ));
    }
    let e1 = reduce_exponent(r, q);
    let e2 = reduce_exponent(r + half as i128, q);
    Ok(digit_sum(e1, p).max(digit_sum(e2, p)))
}

/// `gcd(r, q - 1)`.
pub fn gcd_class(r: i128, q: u64) -> u64 {
    let m = q as i128 - 1;
    r.rem_euclid(m).gcd(&m) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosets_from_tables() {
        assert_eq!(coset(7, 13, 3), vec![7, 8, 11]);
        assert_eq!(coset(26, 121, 3), vec![26, 49, 78, 97, 113]);
        assert_eq!(coset(-1, 13, 3), coset(12, 13, 3));
    }

    #[test]
    fn orbit_order() {
        assert_eq!(coset_orbit(26, 121, 3), vec![26, 78, 113, 97, 49]);
        assert_eq!(coset_orbit(12, 13, 3), vec![12, 10, 4]);
    }

    #[test]
    fn degrees() {
        assert_eq!(algebraic_degree_binomial(3, 27, 7).unwrap(), 4);
        assert_eq!(algebraic_degree_binomial(3, 27, 12).unwrap(), 5);
        assert_eq!(algebraic_degree_binomial(3, 243, 120).unwrap(), 9);
        assert!(algebraic_degree_binomial(3, 27, 13).is_err());
    }

    #[test]
    fn gcds() {
        assert_eq!(gcd_class(25, 27), 1);
        assert_eq!(gcd_class(1, 243), 1);
        assert_eq!(gcd_class(2 * 3i128.pow(2) + 1, 243), 1);
        assert_eq!(gcd_class(4, 27), 2);
    }

    #[test]
    fn reduce() {
        assert_eq!(reduce_exponent(0, 27), 26);
        assert_eq!(reduce_exponent(-8, 243), 234);
        assert_eq!(reduce_exponent(27, 27), 1);
    }

    #[test]
    fn power_table_matches_pow() {
        let f = FieldCtx::new(3, 3).unwrap();
        for r in [1i128, 2, 7, 20, 25, 26, 40] {
            let t = FuncTable::power(&f, r);
            for x in f.elements() {
                assert_eq!(t.at(x), eval_power(&f, r, x));
            }
        }
        let inv = FuncTable::power(&f, 25);
        for x in 1..27 {
            assert_eq!(inv.at(x), f.inv(x).unwrap());
        }
    }

    #[test]
    fn binomial_table_matches_pointwise() {
        let f = FieldCtx::new(3, 3).unwrap();
        for u in 1..27 {
            let t = FuncTable::binomial(&f, 7, u).unwrap();
            for x in f.elements() {
                assert_eq!(t.at(x), eval_binomial(&f, 7, u, x).unwrap());
            }
        }
        assert!(FuncTable::binomial(&f, 7, 0).is_err());
        assert!(eval_binomial(&f, 7, 0, 3).is_err());
    }

    #[test]
    fn binomial_u1_kills_non_squares() {
        let f = FieldCtx::new(3, 3).unwrap();
        let t = FuncTable::binomial(&f, 5, 1).unwrap();
        let zeros = (1..27).filter(|&x| t.at(x) == 0).count();
        assert_eq!(zeros, 13);
        for x in 1..27 {
            if f.chi(x) == 1 {
                assert_eq!(t.at(x), f.mul(2, f.pow_u(x, 5)));
            }
        }
    }

    #[test]
    fn half_period() {
        let f = FieldCtx::new(3, 3).unwrap();
        let a = FuncTable::binomial(&f, 7, 1).unwrap();
        let b = FuncTable::binomial(&f, 7 + 13, 1).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn permutation_iff_coprime() {
        let f = FieldCtx::new(3, 3).unwrap();
        for r in 1..26 {
            assert_eq!(FuncTable::power(&f, r).is_permutation(), gcd_class(r, 27) == 1);
        }
    }

    #[test]
    fn csv_export_shape() {
        let f = FieldCtx::new(3, 2).unwrap();
        let t = FuncTable::binomial(&f, 3, 1).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), r#"{"kind":"binomial","r":3,"u":1}"#);
        assert_eq!(lines.next().unwrap(), "input_id,output_id");
        assert_eq!(text.lines().count(), 2 + 9);
    }
}
