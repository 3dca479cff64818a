//! Differential counts `delta_F(a, b) = #{x : F(x + a) - F(x) = b}`, their
//! spectra, and the split of the `a = 1` counts by the sign pattern
//! `(chi(x), chi(x + 1))`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::funcs::{FuncKind, FuncTable};

/// One DDT row: `counts[b] = delta_F(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffRow {
    pub a: Elem,
    pub counts: Vec<u32>,
}

impl DiffRow {
    /// Largest count over `b != 0`.
    pub fn max_nonzero(&self) -> u32 {
        self.counts[1..].iter().copied().max().unwrap_or(0)
    }
}

pub fn delta_row(f: &FuncTable, a: Elem) -> Result<DiffRow> {
    let field = f.field();
    if a == 0 || a >= field.q() {
        return domain(format!("delta_row needs a nonzero element a, got {a}"));
    }
    let mut counts = vec![0u32; field.q() as usize];
    for x in field.elements() {
        let d = field.sub(f.at(field.add(x, a)), f.at(x));
        counts[d as usize] += 1;
    }
    Ok(DiffRow { a, counts })
}

pub fn delta(f: &FuncTable, a: Elem, b: Elem) -> Result<u32> {
    let field = f.field();
    if a == 0 || a >= field.q() {
        return domain(format!("delta needs a nonzero element a, got {a}"));
    }
    if b >= field.q() {
        return domain(format!("b = {b} is not an element id"));
    }
    Ok(field
        .elements()
        .filter(|&x| field.sub(f.at(field.add(x, a)), f.at(x)) == b)
        .count() as u32)
}

/// The `b'` with `delta_F(a, b) = delta_F(1, b')` (and the same for the
/// boomerang counts with `boomerang = true`).
///
/// `F(ax) = a^r F(x)` when `chi(a) = 1`. When `chi(a) = -1` and `q = 3 mod 4`,
/// a binomial satisfies `F(ax) = (-a)^r F(-x)`; substituting `x -> -x - 1`
/// flips the sign of the difference once more for the DDT but not for the
/// symmetric boomerang system.
pub fn unit_reduction(f: &FuncTable, a: Elem, b: Elem, boomerang: bool) -> Result<Elem> {
    let field = f.field();
    let label = f
        .label()
        .ok_or_else(|| Error::Domain("reduction needs a power map or binomial".into()))?;
    if a == 0 {
        return domain("a must be nonzero");
    }
    let ar = field.pow_u(a, label.r);
    let scale = match (label.kind, field.chi(a)) {
        (FuncKind::Power, _) | (_, 1) => ar,
        (FuncKind::Binomial, _) => {
            if field.q() % 4 != 3 {
                return domain("binomial reduction to a = 1 needs q = 3 mod 4");
            }
            let odd = (label.r + u64::from(!boomerang)) % 2 == 1;
            if odd {
                field.neg(ar)
            } else {
                ar
            }
        }
    };
    field.div(b, scale)
}

/// `delta_F(a, b)` looked up in the precomputed `a = 1` row.
pub fn delta_via_reduction(f: &FuncTable, unit_row: &DiffRow, a: Elem, b: Elem) -> Result<u32> {
    if unit_row.a != 1 {
        return domain("reduction lookups need the a = 1 row");
    }
    Ok(unit_row.counts[unit_reduction(f, a, b, false)? as usize])
}

/// Differential spectrum `{i: omega_i}` with `omega_i = #{b : delta(1, b) = i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffSpectrum {
    pub omega: BTreeMap<u32, u64>,
    pub delta: u32,
}

impl DiffSpectrum {
    pub fn from_row(row: &DiffRow) -> Self {
        let mut omega = BTreeMap::new();
        for &c in &row.counts {
            *omega.entry(c).or_insert(0) += 1;
        }
        let delta = omega.keys().next_back().copied().unwrap_or(0);
        DiffSpectrum { omega, delta }
    }

    /// Checks `sum omega_i = sum i * omega_i = q`.
    pub fn check_identities(&self, q: u64) -> Result<()> {
        let count: u64 = self.omega.values().sum();
        let weighted: u64 = self.omega.iter().map(|(&i, &w)| i as u64 * w).sum();
        if count != q || weighted != q {
            return Err(Error::InvariantViolation(format!(
                "differential spectrum {:?} over q = {q}: sum omega_i = {count}, sum i*omega_i = {weighted}",
                self.omega
            )));
        }
        Ok(())
    }
}

/// Spectrum from the `a = 1` row, for functions whose rows all reduce to it.
pub fn diff_spectrum(f: &FuncTable) -> Result<DiffSpectrum> {
    let spectrum = DiffSpectrum::from_row(&delta_row(f, 1)?);
    spectrum.check_identities(f.field().q() as u64)?;
    Ok(spectrum)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalClass {
    Pn,
    LocallyPn,
    Apn,
    LocallyApn,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: LocalClass,
    /// Smallest `b` whose count rules out the next stronger class.
    pub witness: Option<Elem>,
}

/// Classifies from the `a = 1` row. The "locally" variants only look at `b`
/// outside the prime field.
pub fn classify_locally(f: &FuncTable) -> Result<Classification> {
    let field = f.field();
    let row = delta_row(f, 1)?;
    let first_above = |bound: u32, outside_prime: bool| {
        field
            .elements()
            .filter(|&b| !outside_prime || !field.in_prime_field(b))
            .find(|&b| row.counts[b as usize] > bound)
    };
    let checks = [
        (LocalClass::Pn, 1, false),
        (LocalClass::LocallyPn, 1, true),
        (LocalClass::Apn, 2, false),
        (LocalClass::LocallyApn, 2, true),
    ];
    let mut witness = None;
    for (class, bound, outside) in checks {
        match first_above(bound, outside) {
            None => return Ok(Classification { class, witness }),
            Some(b) => witness = Some(b),
        }
    }
    Ok(Classification {
        class: LocalClass::None,
        witness,
    })
}

/// Index of the sign-pattern class of `x`: `2i + j` where
/// `chi(x) = (-1)^i` and `chi(x + 1) = (-1)^j`; `None` for `x` in `{0, -1}`.
#[inline]
pub fn sij_index(field: &FieldCtx, x: Elem) -> Option<usize> {
    let cx = field.chi(x);
    let cx1 = field.chi(field.add(x, 1));
    if cx == 0 || cx1 == 0 {
        return None;
    }
    Some(2 * usize::from(cx < 0) + usize::from(cx1 < 0))
}

/// Sizes of `S_00, S_01, S_10, S_11` and the class of each element.
#[derive(Clone, Debug)]
pub struct SijPartition {
    pub sizes: [u64; 4],
    class: Vec<u8>,
}

impl SijPartition {
    pub fn class_of(&self, x: Elem) -> Option<usize> {
        match self.class[x as usize] {
            u8::MAX => None,
            c => Some(c as usize),
        }
    }
}

pub fn sij_partition(field: &FieldCtx) -> SijPartition {
    let mut sizes = [0u64; 4];
    let class = field
        .elements()
        .map(|x| match sij_index(field, x) {
            Some(c) => {
                sizes[c] += 1;
                c as u8
            }
            None => u8::MAX,
        })
        .collect();
    SijPartition { sizes, class }
}

/// Solution counts of `F(x + 1) - F(x) = b` split by the class of `x`;
/// `boundary` counts solutions at `x = 0` and `x = -1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DijCounts {
    /// Indexed by `2i + j`.
    pub d: [u32; 4],
    pub boundary: u32,
}

impl DijCounts {
    pub fn total(&self) -> u32 {
        self.d.iter().sum::<u32>() + self.boundary
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.d[2 * i + j]
    }
}

pub fn dij_decompose(f: &FuncTable, b: Elem) -> DijCounts {
    let field = f.field();
    let mut out = DijCounts::default();
    for x in field.elements() {
        let x1 = field.add(x, 1);
        if field.sub(f.at(x1), f.at(x)) != b {
            continue;
        }
        match sij_index(field, x) {
            Some(c) => out.d[c] += 1,
            None => out.boundary += 1,
        }
    }
    out
}

/// [`dij_decompose`] for every `b` in one pass.
pub fn dij_table(f: &FuncTable) -> Vec<DijCounts> {
    let field = f.field();
    let mut out = vec![DijCounts::default(); field.q() as usize];
    for x in field.elements() {
        let b = field.sub(f.at(field.add(x, 1)), f.at(x)) as usize;
        match sij_index(field, x) {
            Some(c) => out[b].d[c] += 1,
            None => out[b].boundary += 1,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf27() -> FieldCtx {
        FieldCtx::new(3, 3).unwrap()
    }

    #[test]
    fn identity_row() {
        let f = gf27();
        let id = FuncTable::power(&f, 1);
        let row = delta_row(&id, 5).unwrap();
        assert_eq!(row.counts[5], 27);
        assert_eq!(row.counts.iter().sum::<u32>(), 27);
        assert_eq!(delta(&id, 1, 1).unwrap(), 27);
        assert!(delta_row(&id, 0).is_err());
    }

    #[test]
    fn binomial_r7_zero_count() {
        let f = gf27();
        let t = FuncTable::binomial(&f, 7, 1).unwrap();
        assert_eq!(delta(&t, 1, 0).unwrap(), 7);
        let spectrum = diff_spectrum(&t).unwrap();
        assert_eq!(spectrum.omega, BTreeMap::from([(0, 6), (1, 20), (7, 1)]));
        assert_eq!(spectrum.delta, 7);
    }

    #[test]
    fn power_20_spectrum() {
        let f = gf27();
        let t = FuncTable::power(&f, 20);
        let spectrum = diff_spectrum(&t).unwrap();
        assert_eq!(spectrum.omega, BTreeMap::from([(0, 12), (1, 3), (2, 12)]));
    }

    #[test]
    fn identity_spectrum() {
        let f = gf27();
        let spectrum = diff_spectrum(&FuncTable::power(&f, 1)).unwrap();
        assert_eq!(spectrum.omega, BTreeMap::from([(0, 26), (27, 1)]));
    }

    #[test]
    fn reduction_exhaustive_gf27() {
        let f = gf27();
        for t in [
            FuncTable::binomial(&f, 7, 1).unwrap(),
            FuncTable::binomial(&f, 4, 2).unwrap(),
            FuncTable::power(&f, 20),
        ] {
            let unit = delta_row(&t, 1).unwrap();
            for a in 1..27 {
                let row = delta_row(&t, a).unwrap();
                for b in f.elements() {
                    assert_eq!(row.counts[b as usize], delta_via_reduction(&t, &unit, a, b).unwrap());
                }
            }
        }
    }

    #[test]
    fn classification() {
        let f = gf27();
        let c = classify_locally(&FuncTable::binomial(&f, 7, 1).unwrap()).unwrap();
        assert_eq!(c.class, LocalClass::LocallyPn);
        assert_eq!(c.witness, Some(0));
        let inv = classify_locally(&FuncTable::power(&f, 25)).unwrap();
        // delta(1, 1) = 3 for the inverse in characteristic 3
        assert_eq!(inv.class, LocalClass::LocallyApn);
        assert_eq!(inv.witness, Some(1));
        // x + 1 - x = 1 only hits the prime field
        let id = classify_locally(&FuncTable::power(&f, 1)).unwrap();
        assert_eq!(id.class, LocalClass::LocallyPn);
        // max delta(1, b) outside the prime field is 4 for x^5
        let five = classify_locally(&FuncTable::power(&f, 5)).unwrap();
        assert_eq!(five.class, LocalClass::None);
        assert!(five.witness.is_some());
    }

    #[test]
    fn partition_sizes() {
        assert_eq!(sij_partition(&gf27()).sizes, [6, 7, 6, 6]);
        let f = FieldCtx::new(3, 5).unwrap();
        assert_eq!(sij_partition(&f).sizes, [60, 61, 60, 60]);
        let f = FieldCtx::new(5, 1).unwrap();
        // q = 5: (q-5)/4 and (q-1)/4
        assert_eq!(sij_partition(&f).sizes, [0, 1, 1, 1]);
    }

    #[test]
    fn dij_sums_to_delta() {
        let f = gf27();
        let t = FuncTable::binomial(&f, 7, 1).unwrap();
        let row = delta_row(&t, 1).unwrap();
        let table = dij_table(&t);
        for b in f.elements() {
            let d = dij_decompose(&t, b);
            assert_eq!(d, table[b as usize]);
            assert_eq!(d.total(), row.counts[b as usize]);
        }
        assert_eq!(table[0].d, [0, 0, 0, 6]);
        assert_eq!(table[2].get(0, 1) + table[2].get(1, 0), 0);
    }
}
