//! Exhaustive searches over the exponent classes of `F_r(x) = x^r (1 + chi(x))`
//! on F_{3^n}, n odd.
//!
//! `F_r = F_{r + (q-1)/2}` and `F_{3r}` is linearly equivalent to `F_r`, so the
//! search space is one representative per coset of `r mod (q-1)/2` under
//! multiplication by 3, namely its minimum, for `r` in `[2, (q-1)/2)`.

use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use log::{info, warn};
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::apn;
use crate::boomerang::beta_row;
use crate::diff::delta_row;
use crate::error::{domain, Error, Result};
use crate::field::{Elem, FieldCtx, TritCodec};
use crate::funcs::{algebraic_degree_binomial, coset_orbit, gcd_class, ExponentClass, FuncTable};

/// Construction an exponent class is known to come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    /// APN exponent with parameters `m` and `u = m^{-1} mod n`.
    Zw { m: u32, u: u32 },
    /// `(3^{n+1} - 1) / (3^m + 1)` with `m | n + 1`.
    DivNPlusOne { m: u32 },
    /// `(1 - 3^{n-1}) / (1 + 3^m)` with `m | n - 1`.
    DivNMinusOne { m: u32 },
    /// `(3^{n+1} - 1) / (3^{(n+1)/2^l} + 1)`.
    Pow2NPlusOne { l: u32 },
    /// `(1 - 3^{n-1}) / (1 + 3^{(n-1)/2^l})`.
    Pow2NMinusOne { l: u32 },
    /// `2 * 3^{(n-1)/2} + 1`.
    MiddleExponent,
    /// `3^n - 3`.
    ThreeNMinusThree,
    /// `q - 2`.
    QMinusTwo,
    /// `(q + 1) / 4`.
    QPlusOneQuarter,
    Untagged,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Zw { m, u } => write!(f, "zw(m={m},u={u})"),
            Tag::DivNPlusOne { m } => write!(f, "div(n+1,m={m})"),
            Tag::DivNMinusOne { m } => write!(f, "div(n-1,m={m})"),
            Tag::Pow2NPlusOne { l } => write!(f, "pow2(n+1,l={l})"),
            Tag::Pow2NMinusOne { l } => write!(f, "pow2(n-1,l={l})"),
            Tag::MiddleExponent => f.write_str("2*3^l+1"),
            Tag::ThreeNMinusThree => f.write_str("3^n-3"),
            Tag::QMinusTwo => f.write_str("q-2"),
            Tag::QPlusOneQuarter => f.write_str("(q+1)/4"),
            Tag::Untagged => f.write_str("untagged"),
        }
    }
}

impl Serialize for Tag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Canonical class of every named construction for one `n`.
pub struct Attributor {
    n: u32,
    known: Vec<(u64, Tag)>,
}

impl Attributor {
    pub fn new(n: u32) -> Result<Self> {
        if n % 2 == 0 || n < 3 {
            return domain(format!("attribution needs odd n >= 3, got {n}"));
        }
        let q = 3u64.pow(n);
        let canon = |r: u64| ExponentClass::new(r as i128, 3, q).canon;
        let mut known = Vec::new();
        for m in 1..=(n - 1) / 2 {
            if m.gcd(&n) == 1 {
                let (class, w) = apn::zw_exponent(n, m)?;
                known.push((class.canon, Tag::Zw { m, u: w.u }));
            }
        }
        for d in apn::divisor_family(n)? {
            let tag = match d.branch {
                apn::DivisorBranch::NPlusOne => Tag::DivNPlusOne { m: d.m },
                apn::DivisorBranch::NMinusOne => Tag::DivNMinusOne { m: d.m },
            };
            known.push((canon(d.r), tag));
        }
        for l in 1..32 {
            if (n + 1) % (1 << l) == 0 {
                known.push((canon(apn::pow2_plus_exponent(n, l)?), Tag::Pow2NPlusOne { l }));
            }
            if (n - 1) % (1 << l) == 0 {
                known.push((canon(apn::pow2_minus_exponent(n, l)?), Tag::Pow2NMinusOne { l }));
            }
        }
        known.push((canon(2 * 3u64.pow((n - 1) / 2) + 1), Tag::MiddleExponent));
        known.push((canon(q - 3), Tag::ThreeNMinusThree));
        known.push((canon(q - 2), Tag::QMinusTwo));
        known.push((canon((q + 1) / 4), Tag::QPlusOneQuarter));
        Ok(Attributor { n, known })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Tags of the class containing exponent `r`.
    pub fn attribute(&self, r: u64) -> Vec<Tag> {
        let canon_r = ExponentClass::new(r as i128, 3, 3u64.pow(self.n)).canon;
        let mut tags: Vec<Tag> = self
            .known
            .iter()
            .filter(|(c, _)| *c == canon_r)
            .map(|&(_, t)| t)
            .collect();
        tags.sort();
        tags.dedup();
        if tags.is_empty() {
            tags.push(Tag::Untagged);
        }
        tags
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaValue {
    Exact(u32),
    NotComputed,
}

impl Serialize for BetaValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BetaValue::Exact(b) => s.serialize_u32(*b),
            BetaValue::NotComputed => s.serialize_str("not-computed"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaMethod {
    Shortcut,
    Bct,
}

/// One row of a scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub n: u32,
    pub canon_r: u64,
    /// Sorted coset of `canon_r` modulo `(q-1)/2`.
    pub coset_half: Vec<u64>,
    pub delta_at_zero: u32,
    pub max_delta_nonzero: u32,
    pub beta: BetaValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_method: Option<BetaMethod>,
    pub alg_degree: u64,
    pub gcd: u64,
    pub tags: Vec<Tag>,
}

impl ScanRecord {
    pub fn has_tag(&self, tag: Tag) -> bool {
        self.tags.contains(&tag)
    }
}

/// A class where `beta = 0` and `delta(1, b) <= 1 for all b != 0` disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: u32,
    pub canon_r: u64,
    pub gcd: u64,
    pub locally_pn: bool,
    pub beta: u32,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanReport {
    pub records: Vec<ScanRecord>,
    /// Classes breaking the observed equivalence between `beta = 0` and the
    /// locally-PN condition outside its proven range.
    pub counterexamples: Vec<Counterexample>,
    /// Whether the equivalence was checked with BCT rows for the classes the
    /// shortcut does not cover.
    pub conjecture_checked: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ScanOptions {
    /// Confirm `beta` with BCT rows even where the shortcut applies.
    pub bct_confirm: bool,
    /// Check `beta = 0 <=> locally-PN` with BCT rows where the shortcut does
    /// not apply. Defaults to on for `n <= 7`.
    pub conjecture_check: Option<bool>,
    /// Resume file for long screens: completed representatives, one per line.
    pub checkpoint: Option<PathBuf>,
    /// Representatives per checkpoint batch.
    pub batch: Option<usize>,
}

/// Read-only state shared by all screening tasks.
pub struct ScanCtx<'f> {
    field: &'f FieldCtx,
    /// `log(g^k + 1)` for each `k`, `u32::MAX` where `g^k = -1`.
    succ_log: Vec<u32>,
    attributor: Attributor,
}

/// Epoch-stamped membership set over element ids.
struct Stamps {
    marks: Vec<u32>,
    epoch: u32,
}

impl Stamps {
    fn new(q: u32) -> Self {
        Stamps {
            marks: vec![0; q as usize],
            epoch: 0,
        }
    }

    fn reset(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.marks.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
    }

    /// Marks `b`; returns false if it was already marked in this epoch.
    #[inline]
    fn insert(&mut self, b: Elem) -> bool {
        let slot = &mut self.marks[b as usize];
        if *slot == self.epoch {
            false
        } else {
            *slot = self.epoch;
            true
        }
    }
}

impl<'f> ScanCtx<'f> {
    pub fn new(field: &'f FieldCtx) -> Result<Self> {
        if field.p() != 3 || field.n() % 2 == 0 || field.n() < 3 {
            return domain(format!(
                "binomial scans need p = 3 and odd n >= 3 (the constructions require n odd); got p = {}, n = {}",
                field.p(),
                field.n()
            ));
        }
        let succ_log = (0..field.order())
            .map(|k| field.log(field.add(field.exp(k), 1)).unwrap_or(u32::MAX))
            .collect();
        Ok(ScanCtx {
            field,
            succ_log,
            attributor: Attributor::new(field.n())?,
        })
    }

    pub fn field(&self) -> &'f FieldCtx {
        self.field
    }

    pub fn attributor(&self) -> &Attributor {
        &self.attributor
    }

    fn half(&self) -> u64 {
        self.field.half_order() as u64
    }

    /// Whether `r` is the minimum of its coset modulo `(q-1)/2`.
    pub fn is_canonical(&self, r: u64) -> bool {
        let half = self.half();
        let r = r % half;
        if r == 0 {
            return false;
        }
        let mut cur = r * 3 % half;
        while cur != r {
            if cur < r {
                return false;
            }
            cur = cur * 3 % half;
        }
        true
    }

    /// Canonical representatives in `[2, (q-1)/2)`.
    pub fn representatives(&self) -> Vec<u64> {
        (2..self.half()).filter(|&r| self.is_canonical(r)).collect()
    }

    /// Early-abort screen for `delta(1, b) <= 1` on all `b != 0`. Inputs are
    /// visited in discrete-log order; returns the first `b != 0` reaching a
    /// count of 2, or `None` if the class passes.
    fn screen_with(&self, r: u64, stamps: &mut Stamps) -> Option<Elem> {
        let field = self.field;
        let t: &TritCodec = field.trits().expect("p = 3");
        let order = field.order() as u64;
        // 2 = -1 has log (q-1)/2; F(x) = 2 x^r on squares, 0 on non-squares
        let two_log = field.half_order() as u64;
        let r = r % order;
        stamps.reset();
        // x = 0 contributes F(1) - F(0) = 2
        stamps.insert(2);
        let mut kr = 0u64;
        for k in 0..order {
            let fx = if k & 1 == 0 {
                t.pack(field.exp_mod(two_log + kr))
            } else {
                0
            };
            let j = self.succ_log[k as usize];
            let fx1 = if j != u32::MAX && j & 1 == 0 {
                t.pack(field.exp_mod(two_log + j as u64 * r % order))
            } else {
                0
            };
            kr += r;
            if kr >= order {
                kr -= order;
            }
            let d = TritCodec::sub(fx1, fx);
            if d == 0 {
                continue;
            }
            let b = t.unpack(d);
            if !stamps.insert(b) {
                return Some(b);
            }
        }
        None
    }

    /// Standalone screen, allocating its own scratch space.
    pub fn screen(&self, r: u64) -> Option<Elem> {
        self.screen_with(r, &mut Stamps::new(self.field.q()))
    }

    /// Screens representatives in parallel; results follow input order.
    fn screen_many(&self, reps: &[u64]) -> Vec<Option<Elem>> {
        let q = self.field.q();
        reps.par_iter()
            .map_init(|| Stamps::new(q), |stamps, &r| self.screen_with(r, stamps))
            .collect()
    }

    /// Record with exact `delta(1, .)` statistics; `beta` filled by the caller.
    fn record(&self, r: u64, beta: BetaValue, beta_method: Option<BetaMethod>) -> Result<ScanRecord> {
        let field = self.field;
        let q = field.q() as u64;
        let f = FuncTable::binomial(field, r as i128, 1)?;
        let row = delta_row(&f, 1)?;
        let class = ExponentClass::new(r as i128, 3, q);
        Ok(ScanRecord {
            n: field.n(),
            canon_r: class.canon,
            coset_half: class.coset_half,
            delta_at_zero: row.counts[0],
            max_delta_nonzero: row.max_nonzero(),
            beta,
            beta_method,
            alg_degree: algebraic_degree_binomial(3, q, r as i128)?,
            gcd: gcd_class(r as i128, q),
            tags: self.attributor.attribute(class.canon),
        })
    }

    fn bct_beta(&self, r: u64) -> Result<u32> {
        let f = FuncTable::binomial(self.field, r as i128, 1)?;
        Ok(beta_row(&f, 1)?.max())
    }
}

fn shortcut_applies(gcd: u64) -> bool {
    gcd <= 2
}

/// Classes with boomerang uniformity 0.
///
/// Every class is screened for `delta(1, b) <= 1` on `b != 0`. Survivors with
/// `gcd(r, q-1)` in `{1, 2}` have `beta = 0` by the shortcut; the others get a
/// BCT row. With the conjecture check on, screen failures outside the
/// shortcut's range also get a BCT row, and any disagreement is reported.
pub fn scan_beta_zero(ctx: &ScanCtx, opts: &ScanOptions) -> Result<ScanReport> {
    let n = ctx.field.n();
    let q = ctx.field.q() as u64;
    let reps = ctx.representatives();
    let screened = ctx.screen_many(&reps);
    let check = opts.conjecture_check.unwrap_or(n <= 7);

    let outcomes: Vec<Result<(Option<ScanRecord>, Option<Counterexample>)>> = reps
        .par_iter()
        .zip(screened.par_iter())
        .map(|(&r, witness)| {
            let gcd = gcd_class(r as i128, q);
            let passes = witness.is_none();
            if passes {
                let (beta, method) = if shortcut_applies(gcd) && !opts.bct_confirm {
                    (BetaValue::Exact(0), Some(BetaMethod::Shortcut))
                } else if shortcut_applies(gcd) || check || opts.bct_confirm {
                    (BetaValue::Exact(ctx.bct_beta(r)?), Some(BetaMethod::Bct))
                } else {
                    (BetaValue::NotComputed, None)
                };
                match beta {
                    BetaValue::Exact(0) | BetaValue::NotComputed => {
                        Ok((Some(ctx.record(r, beta, method)?), None))
                    }
                    BetaValue::Exact(b) => {
                        if shortcut_applies(gcd) {
                            return Err(Error::InvariantViolation(format!(
                                "n={n} r={r}: locally-PN with gcd {gcd} but BCT gives beta = {b}"
                            )));
                        }
                        Ok((None, Some(Counterexample { n, canon_r: r, gcd, locally_pn: true, beta: b })))
                    }
                }
            } else if check && !shortcut_applies(gcd) {
                let b = ctx.bct_beta(r)?;
                let cx = (b == 0).then_some(Counterexample { n, canon_r: r, gcd, locally_pn: false, beta: 0 });
                let rec = if b == 0 {
                    Some(ctx.record(r, BetaValue::Exact(0), Some(BetaMethod::Bct))?)
                } else {
                    None
                };
                Ok((rec, cx))
            } else {
                Ok((None, None))
            }
        })
        .collect();

    let mut report = ScanReport {
        conjecture_checked: check,
        ..Default::default()
    };
    for o in outcomes {
        let (rec, cx) = o?;
        report.records.extend(rec);
        if let Some(cx) = cx {
            warn!(
                "n={} r={}: beta = {} but locally-PN = {} (gcd {})",
                cx.n, cx.canon_r, cx.beta, cx.locally_pn, cx.gcd
            );
            report.counterexamples.push(cx);
        }
    }
    Ok(report)
}

/// Classes with boomerang uniformity exactly 1, from full BCT rows.
/// Limited to `n <= 7` unless `bct_confirm` is set.
pub fn scan_beta_one(ctx: &ScanCtx, opts: &ScanOptions) -> Result<ScanReport> {
    let n = ctx.field.n();
    if n > 7 && !opts.bct_confirm {
        return Err(Error::Resource(format!(
            "a full BCT scan at n = {n} is expensive; pass the BCT confirmation flag to run it"
        )));
    }
    let q = ctx.field.q() as u64;
    let reps = ctx.representatives();
    let screened = ctx.screen_many(&reps);
    let records: Vec<Result<Option<ScanRecord>>> = reps
        .par_iter()
        .zip(screened.par_iter())
        .map(|(&r, witness)| {
            if witness.is_none() && shortcut_applies(gcd_class(r as i128, q)) {
                return Ok(None);
            }
            match ctx.bct_beta(r)? {
                1 => Ok(Some(ctx.record(r, BetaValue::Exact(1), Some(BetaMethod::Bct))?)),
                _ => Ok(None),
            }
        })
        .collect();
    let mut report = ScanReport::default();
    for r in records {
        report.records.extend(r?);
    }
    Ok(report)
}

/// Locally-PN classes (`delta(1, b) <= 1` for all `b != 0`) from the screen
/// alone; `beta` is left uncomputed.
pub fn scan_locally_pn(ctx: &ScanCtx, opts: &ScanOptions) -> Result<ScanReport> {
    let reps = ctx.representatives();
    let Some(path) = &opts.checkpoint else {
        let screened = ctx.screen_many(&reps);
        let records: Result<Vec<ScanRecord>> = reps
            .iter()
            .zip(&screened)
            .filter(|(_, w)| w.is_none())
            .map(|(&r, _)| ctx.record(r, BetaValue::NotComputed, None))
            .collect();
        return Ok(ScanReport {
            records: records?,
            ..Default::default()
        });
    };

    let mut ckpt = Checkpoint::open(path)?;
    let mut records = ckpt.hits.clone();
    let start = reps.partition_point(|&r| ckpt.last.is_some_and(|last| r <= last));
    if start > 0 {
        info!("resuming after r = {} ({} of {} classes done)", reps[start - 1], start, reps.len());
    }
    let batch = opts.batch.unwrap_or(4096).max(1);
    for chunk in reps[start..].chunks(batch) {
        let screened = ctx.screen_many(chunk);
        let mut hits = Vec::new();
        for (&r, w) in chunk.iter().zip(&screened) {
            if w.is_none() {
                hits.push(ctx.record(r, BetaValue::NotComputed, None)?);
            }
        }
        ckpt.commit(*chunk.last().expect("non-empty chunk"), &hits)?;
        records.extend(hits);
        info!(
            "n={}: screened through r = {} ({} hits so far)",
            ctx.field.n(),
            chunk.last().unwrap(),
            records.len()
        );
    }
    records.sort_by_key(|r| r.canon_r);
    records.dedup_by_key(|r| r.canon_r);
    Ok(ScanReport {
        records,
        ..Default::default()
    })
}

/// Progress file for long screens: one completed representative per line,
/// with hits appended as JSON lines to a sibling `.hits` file. Both are
/// synced after every batch.
struct Checkpoint {
    progress: File,
    hits_file: File,
    last: Option<u64>,
    hits: Vec<ScanRecord>,
}

#[derive(Deserialize)]
struct StoredRecord {
    n: u32,
    canon_r: u64,
    coset_half: Vec<u64>,
    delta_at_zero: u32,
    max_delta_nonzero: u32,
    alg_degree: u64,
    gcd: u64,
}

fn hits_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".hits");
    PathBuf::from(s)
}

impl Checkpoint {
    fn open(path: &Path) -> Result<Self> {
        let last = match File::open(path) {
            Ok(f) => {
                let mut last = None;
                for line in BufReader::new(f).lines() {
                    let line = line?;
                    let line = line.trim();
                    if !line.is_empty() {
                        last = Some(line.parse::<u64>().map_err(|e| {
                            Error::Parse(format!("checkpoint {}: {line:?}: {e}", path.display()))
                        })?);
                    }
                }
                last
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
            Err(e) => return Err(e.into()),
        };
        let hp = hits_path(path);
        let mut hits = Vec::new();
        if last.is_some() {
            if let Ok(f) = File::open(&hp) {
                for line in BufReader::new(f).lines() {
                    let line = line?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    let s: StoredRecord = serde_json::from_str(&line)?;
                    let q = 3u64.pow(s.n);
                    let attributor = Attributor::new(s.n)?;
                    hits.push(ScanRecord {
                        n: s.n,
                        canon_r: s.canon_r,
                        coset_half: s.coset_half,
                        delta_at_zero: s.delta_at_zero,
                        max_delta_nonzero: s.max_delta_nonzero,
                        beta: BetaValue::NotComputed,
                        beta_method: None,
                        alg_degree: s.alg_degree,
                        gcd: s.gcd,
                        tags: attributor.attribute(s.canon_r),
                    });
                    debug_assert!(s.canon_r < q);
                }
            }
        }
        let progress = OpenOptions::new().create(true).append(true).open(path)?;
        let hits_file = OpenOptions::new().create(true).append(true).open(&hp)?;
        if last.is_none() {
            progress.set_len(0)?;
            hits_file.set_len(0)?;
        }
        Ok(Checkpoint {
            progress,
            hits_file,
            last,
            hits,
        })
    }

    fn commit(&mut self, last: u64, hits: &[ScanRecord]) -> Result<()> {
        for h in hits {
            serde_json::to_writer(&mut self.hits_file, h)?;
            self.hits_file.write_all(b"\n")?;
        }
        self.hits_file.sync_data()?;
        writeln!(self.progress, "{last}")?;
        self.progress.sync_data()?;
        self.last = Some(last);
        Ok(())
    }
}

/// Markdown table: n, r, coset (in multiplication order from r), max delta,
/// algebraic degree, tags.
pub fn markdown_table(records: &[ScanRecord]) -> String {
    let mut s = String::from(
        "| n | r | Cyclotomic coset | max delta(1,b), b != 0 | Algebraic degree | Tags |\n|---|---|---|---|---|---|\n",
    );
    for r in records {
        let half = (3u64.pow(r.n) - 1) / 2;
        let orbit = coset_orbit(r.canon_r as i128, half, 3);
        let orbit: Vec<String> = orbit.iter().map(u64::to_string).collect();
        let tags: Vec<String> = r.tags.iter().map(Tag::to_string).collect();
        s.push_str(&format!(
            "| {} | {} | ({}) | {} | {} | {} |\n",
            r.n,
            r.canon_r,
            orbit.join(", "),
            r.max_delta_nonzero,
            r.alg_degree,
            tags.join(", ")
        ));
    }
    s
}
