//! Boomerang counts `beta_F(a, b)`: ordered pairs `(x, y)` with
//! `F(x) - F(y) = b` and `F(x + a) - F(y + a) = b`.
//!
//! Both equations hold iff `F(x) - F(y) = b` and `D(x) = D(y)` where
//! `D(x) = F(x + a) - F(x)`. Grouping inputs by `D` therefore visits only
//! `sum_b delta_F(a, b)^2` pairs instead of `q^2`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diff::{self, sij_index};
use crate::error::{domain, Error, Result};
use crate::field::{Elem, FieldCtx, TritCodec};
use crate::funcs::{gcd_class, FuncKind, FuncTable};

/// One BCT row: `counts[b] = beta_F(a, b)` for `b != 0`; `counts[0]` is unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoomRow {
    pub a: Elem,
    pub counts: Vec<u32>,
}

impl BoomRow {
    pub fn max(&self) -> u32 {
        self.counts[1..].iter().copied().max().unwrap_or(0)
    }
}

/// Inputs grouped by `F(x + a) - F(x)`: `members[starts[d]..starts[d + 1]]`.
struct Buckets {
    starts: Vec<u32>,
    members: Vec<Elem>,
}

fn group_by(q: u32, key: impl Fn(Elem) -> Elem) -> Buckets {
    let keys: Vec<Elem> = (0..q).map(&key).collect();
    let mut starts = vec![0u32; q as usize + 1];
    for &k in &keys {
        starts[k as usize + 1] += 1;
    }
    for i in 0..q as usize {
        starts[i + 1] += starts[i];
    }
    let mut fill = starts.clone();
    let mut members = vec![0; q as usize];
    for (x, &k) in keys.iter().enumerate() {
        members[fill[k as usize] as usize] = x as Elem;
        fill[k as usize] += 1;
    }
    Buckets { starts, members }
}

impl Buckets {
    fn bucket(&self, k: usize) -> &[Elem] {
        &self.members[self.starts[k] as usize..self.starts[k + 1] as usize]
    }
}

fn diff_buckets(f: &FuncTable, a: Elem) -> Buckets {
    let field = f.field();
    group_by(field.q(), |x| field.sub(f.at(field.add(x, a)), f.at(x)))
}

/// Calls `visit(x, y, F(x) - F(y))` for every unordered pair `x < y` (in
/// bucket order) that shares a difference bucket. The reversed pair has the
/// negated difference.
fn for_each_bucket_pair(f: &FuncTable, bucket: &[Elem], mut visit: impl FnMut(Elem, Elem, Elem)) {
    let field = f.field();
    match field.trits() {
        Some(t) => {
            let packed: Vec<u32> = bucket.iter().map(|&x| t.pack(f.at(x))).collect();
            for i in 0..bucket.len() {
                for j in i + 1..bucket.len() {
                    let d = t.unpack(TritCodec::sub(packed[i], packed[j]));
                    visit(bucket[i], bucket[j], d);
                }
            }
        }
        None => {
            for i in 0..bucket.len() {
                for j in i + 1..bucket.len() {
                    visit(bucket[i], bucket[j], field.sub(f.at(bucket[i]), f.at(bucket[j])));
                }
            }
        }
    }
}

pub fn beta_row(f: &FuncTable, a: Elem) -> Result<BoomRow> {
    let field = f.field();
    let q = field.q() as usize;
    if a == 0 || a >= field.q() {
        return domain(format!("beta_row needs a nonzero element a, got {a}"));
    }
    let buckets = diff_buckets(f, a);
    let counts = (0..q)
        .into_par_iter()
        .filter(|&k| buckets.starts[k + 1] - buckets.starts[k] >= 2)
        .fold(
            || vec![0u32; q],
            |mut acc, k| {
                for_each_bucket_pair(f, buckets.bucket(k), |_, _, d| {
                    if d != 0 {
                        acc[d as usize] += 1;
                        acc[field.neg(d) as usize] += 1;
                    }
                });
                acc
            },
        )
        .reduce(
            || vec![0u32; q],
            |mut x, y| {
                x.iter_mut().zip(&y).for_each(|(s, t)| *s += t);
                x
            },
        );
    Ok(BoomRow { a, counts })
}

/// Reference implementation visiting all `q^2` ordered pairs.
pub fn beta_row_naive(f: &FuncTable, a: Elem) -> Result<BoomRow> {
    let field = f.field();
    if a == 0 || a >= field.q() {
        return domain(format!("beta_row needs a nonzero element a, got {a}"));
    }
    let mut counts = vec![0u32; field.q() as usize];
    for x in field.elements() {
        let fxa = f.at(field.add(x, a));
        for y in field.elements() {
            let d1 = field.sub(f.at(x), f.at(y));
            let d2 = field.sub(fxa, f.at(field.add(y, a)));
            if d1 == d2 && d1 != 0 {
                counts[d1 as usize] += 1;
            }
        }
    }
    Ok(BoomRow { a, counts })
}

/// Solutions `(x, y)` of the boomerang system for one `b`, visited in `O(q)`.
fn for_each_solution(f: &FuncTable, a: Elem, b: Elem, mut visit: impl FnMut(Elem, Elem)) -> Result<()> {
    let field = f.field();
    if a == 0 || a >= field.q() {
        return domain(format!("a must be a nonzero element, got {a}"));
    }
    if b == 0 || b >= field.q() {
        return domain(format!("b must be a nonzero element, got {b}"));
    }
    let d: Vec<Elem> = field
        .elements()
        .map(|x| field.sub(f.at(field.add(x, a)), f.at(x)))
        .collect();
    let preimages = group_by(field.q(), |x| f.at(x));
    for x in field.elements() {
        let target = field.sub(f.at(x), b);
        for &y in preimages.bucket(target as usize) {
            if d[y as usize] == d[x as usize] {
                visit(x, y);
            }
        }
    }
    Ok(())
}

pub fn beta(f: &FuncTable, a: Elem, b: Elem) -> Result<u32> {
    let mut n = 0;
    for_each_solution(f, a, b, |_, _| n += 1)?;
    Ok(n)
}

/// `beta_F(a, b)` looked up in the precomputed `a = 1` row.
pub fn beta_via_reduction(f: &FuncTable, unit_row: &BoomRow, a: Elem, b: Elem) -> Result<u32> {
    if unit_row.a != 1 {
        return domain("reduction lookups need the a = 1 row");
    }
    if b == 0 {
        return domain("beta is defined for nonzero b");
    }
    Ok(unit_row.counts[diff::unit_reduction(f, a, b, true)? as usize])
}

/// Boomerang spectrum `{i: nu_i}` with `nu_i = #{b != 0 : beta(1, b) = i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoomSpectrum {
    pub nu: BTreeMap<u32, u64>,
    pub beta: u32,
}

impl BoomSpectrum {
    pub fn from_row(row: &BoomRow) -> Self {
        let mut nu = BTreeMap::new();
        for &c in &row.counts[1..] {
            *nu.entry(c).or_insert(0) += 1;
        }
        let beta = nu.keys().next_back().copied().unwrap_or(0);
        BoomSpectrum { nu, beta }
    }

    pub fn check_identity(&self, q: u64) -> Result<()> {
        let total: u64 = self.nu.values().sum();
        if total != q - 1 {
            return Err(Error::InvariantViolation(format!(
                "boomerang spectrum {:?} over q = {q}: sum nu_i = {total}, expected {}",
                self.nu,
                q - 1
            )));
        }
        Ok(())
    }
}

pub fn boom_spectrum(f: &FuncTable) -> Result<BoomSpectrum> {
    let spectrum = BoomSpectrum::from_row(&beta_row(f, 1)?);
    spectrum.check_identity(f.field().q() as u64)?;
    Ok(spectrum)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum ShortcutVerdict {
    /// `beta = 0` without building a BCT row.
    ConfirmedZero,
    /// Some `b != 0` has `delta(1, b) >= 2`, so `beta > 0`.
    NonzeroWithWitness { b: Elem },
    Inapplicable { reason: String },
}

/// For `x^r (1 + chi(x))` with `q = 3 mod 4` and `gcd(r, q - 1)` in `{1, 2}`,
/// `beta = 0` exactly when `delta(1, b) <= 1` for every `b != 0`.
pub fn beta_zero_shortcut(f: &FuncTable) -> Result<ShortcutVerdict> {
    let field = f.field();
    let label = match f.label() {
        Some(l) if l.kind == FuncKind::Binomial && l.u == Some(1) => l,
        _ => {
            return Ok(ShortcutVerdict::Inapplicable {
                reason: "only binomials with u = 1 are covered".into(),
            })
        }
    };
    if field.q() % 4 != 3 {
        return Ok(ShortcutVerdict::Inapplicable {
            reason: format!("q = {} is not 3 mod 4", field.q()),
        });
    }
    let g = gcd_class(label.r as i128, field.q() as u64);
    if g > 2 {
        return Ok(ShortcutVerdict::Inapplicable {
            reason: format!("gcd(r, q - 1) = {g}"),
        });
    }
    let row = diff::delta_row(f, 1)?;
    Ok(match (1..field.q()).find(|&b| row.counts[b as usize] >= 2) {
        None => ShortcutVerdict::ConfirmedZero,
        Some(b) => ShortcutVerdict::NonzeroWithWitness { b },
    })
}

/// Solutions of the `a = 1` boomerang system split by the classes of `x` and
/// `y`; pairs with `x` or `y` in `{0, -1}` go to `boundary`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijklCounts {
    /// Indexed by `8i + 4j + 2k + l`.
    pub counts: [u32; 16],
    pub boundary: u32,
}

impl BijklCounts {
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> u32 {
        self.counts[8 * i + 4 * j + 2 * k + l]
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum::<u32>() + self.boundary
    }

    fn record(&mut self, field: &FieldCtx, x: Elem, y: Elem) {
        match (sij_index(field, x), sij_index(field, y)) {
            (Some(cx), Some(cy)) => self.counts[4 * cx + cy] += 1,
            _ => self.boundary += 1,
        }
    }

    /// Non-zero entries keyed by their four-digit index string, e.g. `"0001"`.
    pub fn nonzero(&self) -> BTreeMap<String, u32> {
        (0..16)
            .filter(|&i| self.counts[i] > 0)
            .map(|i| (format!("{:04b}", i), self.counts[i]))
            .collect()
    }
}

pub fn bijkl_decompose(f: &FuncTable, b: Elem) -> Result<BijklCounts> {
    let field = f.field();
    let mut out = BijklCounts::default();
    for_each_solution(f, 1, b, |x, y| out.record(field, x, y))?;
    Ok(out)
}

/// [`bijkl_decompose`] for every `b` (entry 0 unused).
pub fn bijkl_table(f: &FuncTable) -> Vec<BijklCounts> {
    let field = f.field();
    let buckets = diff_buckets(f, 1);
    let mut out = vec![BijklCounts::default(); field.q() as usize];
    for k in 0..field.q() as usize {
        for_each_bucket_pair(f, buckets.bucket(k), |x, y, d| {
            if d != 0 {
                out[d as usize].record(field, x, y);
                out[field.neg(d) as usize].record(field, y, x);
            }
        });
    }
    out
}
