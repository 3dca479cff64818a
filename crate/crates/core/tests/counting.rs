mod common;

use boomspec_core::boomerang::{beta, beta_row, beta_row_naive, beta_via_reduction, boom_spectrum};
use boomspec_core::diff::{delta, delta_row, delta_via_reduction, diff_spectrum, dij_decompose};
use boomspec_core::field::irreducible_moduli;
use boomspec_core::{FieldCtx, FuncTable};
use common::{bct_at, bct_row, ddt_row, sample, spectrum, Poly};
use proptest::prelude::*;

fn gf(n: u32) -> FieldCtx {
    FieldCtx::new(3, n).unwrap()
}

#[test]
fn function_values_match_oracle() {
    let f = gf(5);
    let o = Poly::new(3, f.modulus());
    for r in [2u64, 7, 26, 120, 241] {
        let t = FuncTable::power(&f, r as i128);
        assert_eq!(t.values(), o.table(|x| o.power(r, x)).as_slice());
        for u in [1u32, 2, 17] {
            let t = FuncTable::binomial(&f, r as i128, u).unwrap();
            assert_eq!(t.values(), o.table(|x| o.binomial(r, u, x)).as_slice(), "r={r} u={u}");
        }
    }
}

#[test]
fn ddt_rows_match_definition_at_n3() {
    let f = gf(3);
    let o = Poly::new(3, f.modulus());
    for r in 1..26 {
        for t in [FuncTable::power(&f, r), FuncTable::binomial(&f, r, 1).unwrap()] {
            assert!(delta_row(&t, 0).is_err());
            for a in 1..27 {
                let want = ddt_row(&o, t.values(), a);
                assert_eq!(delta_row(&t, a).unwrap().counts, want, "r={r} a={a}");
                assert_eq!(want.iter().sum::<u32>(), 27);
            }
        }
    }
}

#[test]
fn bct_rows_match_double_loop() {
    let f = gf(3);
    let o = Poly::new(3, f.modulus());
    for r in 1..26 {
        for u in [1, 2, 5] {
            let t = FuncTable::binomial(&f, r, u).unwrap();
            for a in 1..27 {
                let mut want = bct_row(&o, t.values(), a);
                want[0] = 0;
                assert_eq!(beta_row(&t, a).unwrap().counts, want, "r={r} u={u} a={a}");
                assert_eq!(beta_row_naive(&t, a).unwrap().counts, want);
            }
        }
    }
    let f = gf(5);
    let o = Poly::new(3, f.modulus());
    for r in [2, 16, 26, 67, 241] {
        let t = FuncTable::binomial(&f, r, 1).unwrap();
        for a in [1, 2, 100] {
            let mut want = bct_row(&o, t.values(), a);
            want[0] = 0;
            assert_eq!(beta_row(&t, a).unwrap().counts, want, "r={r} a={a}");
        }
    }
}

#[test]
fn pointwise_counts_agree_with_rows() {
    let f = gf(5);
    let o = Poly::new(3, f.modulus());
    let t = FuncTable::binomial(&f, 13, 1).unwrap();
    let drow = delta_row(&t, 7).unwrap();
    let brow = beta_row(&t, 7).unwrap();
    for b in sample(3, 200, 1, 243) {
        assert_eq!(delta(&t, 7, b).unwrap(), drow.counts[b as usize]);
        assert_eq!(beta(&t, 7, b).unwrap(), brow.counts[b as usize]);
        assert_eq!(bct_at(&o, t.values(), 7, b), brow.counts[b as usize]);
    }
}

#[test]
fn spectra_obey_counting_identities() {
    for n in [3, 5, 7] {
        let f = gf(n);
        let q = f.q() as u64;
        for r in [2, 5, 7, 13, 20, 26, 55, 80] {
            let t = FuncTable::binomial(&f, r, 1).unwrap();
            let d = diff_spectrum(&t).unwrap();
            assert_eq!(d.omega.values().sum::<u64>(), q);
            assert_eq!(d.omega.iter().map(|(&i, &w)| i as u64 * w).sum::<u64>(), q);
            let b = boom_spectrum(&t).unwrap();
            assert_eq!(b.nu.values().sum::<u64>(), q - 1);
        }
    }
}

#[test]
fn sign_pattern_split_sums_to_row() {
    let f = gf(5);
    for r in [2, 19, 26, 61] {
        let t = FuncTable::binomial(&f, r, 1).unwrap();
        let row = delta_row(&t, 1).unwrap();
        for b in f.elements() {
            assert_eq!(dij_decompose(&t, b).total(), row.counts[b as usize], "r={r} b={b}");
        }
    }
}

fn check_reduction(t: &FuncTable, pairs: impl Iterator<Item = (u32, u32)>) {
    let drow = delta_row(t, 1).unwrap();
    let brow = beta_row(t, 1).unwrap();
    let mut cache: std::collections::HashMap<u32, (Vec<u32>, Vec<u32>)> = Default::default();
    for (a, b) in pairs {
        let (d, bb) = cache.entry(a).or_insert_with(|| {
            (delta_row(t, a).unwrap().counts, beta_row(t, a).unwrap().counts)
        });
        assert_eq!(delta_via_reduction(t, &drow, a, b).unwrap(), d[b as usize], "delta a={a} b={b}");
        if b != 0 {
            assert_eq!(beta_via_reduction(t, &brow, a, b).unwrap(), bb[b as usize], "beta a={a} b={b}");
        }
    }
}

#[test]
fn reduction_to_unit_shift_exhaustive_n3() {
    let f = gf(3);
    for r in 1..26 {
        for t in [
            FuncTable::power(&f, r),
            FuncTable::binomial(&f, r, 1).unwrap(),
            FuncTable::binomial(&f, r, 2).unwrap(),
            FuncTable::binomial(&f, r, 11).unwrap(),
        ] {
            let pairs = (1..27).flat_map(|a| (0..27).map(move |b| (a, b)));
            check_reduction(&t, pairs);
        }
    }
}

#[test]
fn reduction_to_unit_shift_sampled() {
    for (n, seed) in [(5, 11), (7, 12)] {
        let f = gf(n);
        let q = f.q();
        let a_s = sample(seed, 20, 1, q);
        let b_s = sample(seed + 100, 1000, 0, q);
        for r in [13, 26, 80] {
            let t = FuncTable::binomial(&f, r, 1).unwrap();
            let pairs = b_s.iter().enumerate().map(|(i, &b)| (a_s[i % a_s.len()], b));
            check_reduction(&t, pairs);
        }
    }
}

#[test]
fn binomial_reduction_refused_when_minus_one_is_square() {
    let f = FieldCtx::new(3, 2).unwrap();
    let t = FuncTable::binomial(&f, 3, 1).unwrap();
    let row = delta_row(&t, 1).unwrap();
    // chi(a) = -1 requires the sign flip, which needs chi(-1) = -1
    let a = f.generator();
    assert_eq!(f.chi(a), -1);
    assert!(delta_via_reduction(&t, &row, a, 1).is_err());
}

#[test]
fn frobenius_coset_members_share_spectra() {
    let f = gf(5);
    let o = Poly::new(3, f.modulus());
    for r in [2u64, 13, 26, 67] {
        let base = FuncTable::binomial(&f, r as i128, 1).unwrap();
        let tripled = FuncTable::binomial(&f, 3 * r as i128, 1).unwrap();
        // F_{3r}(x) = F_r(x^3) since chi(x^3) = chi(x)
        for x in f.elements() {
            assert_eq!(tripled.at(x), base.at(o.pow(x, 3)));
        }
        assert_eq!(diff_spectrum(&base).unwrap(), diff_spectrum(&tripled).unwrap());
        assert_eq!(boom_spectrum(&base).unwrap(), boom_spectrum(&tripled).unwrap());
        // r and r + (q-1)/2 give the same binomial
        let shifted = FuncTable::binomial(&f, (r + 121) as i128, 1).unwrap();
        assert_eq!(base.values(), shifted.values());
    }
}

#[test]
fn oracle_spectra_match_library() {
    let f = gf(5);
    let o = Poly::new(3, f.modulus());
    for r in [2u64, 16, 26] {
        let t = FuncTable::binomial(&f, r as i128, 1).unwrap();
        let want = spectrum(&ddt_row(&o, t.values(), 1), false);
        assert_eq!(diff_spectrum(&t).unwrap().omega, want);
        let want = spectrum(&bct_row(&o, t.values(), 1), true);
        assert_eq!(boom_spectrum(&t).unwrap().nu, want);
    }
}

#[test]
fn spectra_do_not_depend_on_modulus() {
    for n in [3, 5] {
        let moduli: Vec<_> = irreducible_moduli(3, n).take(2).collect();
        let fields: Vec<_> = moduli.iter().map(|m| FieldCtx::with_modulus(3, n, m.clone()).unwrap()).collect();
        let half = (3i128.pow(n) - 1) / 2;
        for r in 1..half {
            let specs: Vec<_> = fields
                .iter()
                .map(|f| {
                    let t = FuncTable::binomial(f, r, 1).unwrap();
                    (diff_spectrum(&t).unwrap(), boom_spectrum(&t).unwrap())
                })
                .collect();
            assert_eq!(specs[0], specs[1], "n={n} r={r}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ddt_rows_sum_to_q(r in 1i128..242, a in 1u32..243, u in 1u32..243) {
        let f = gf(5);
        let t = FuncTable::binomial(&f, r, u).unwrap();
        let row = delta_row(&t, a).unwrap();
        prop_assert_eq!(row.counts.iter().sum::<u32>(), 243);
        let p = FuncTable::power(&f, r);
        prop_assert_eq!(delta_row(&p, a).unwrap().counts.iter().sum::<u32>(), 243);
    }

    #[test]
    fn bct_row_symmetric_in_sign(r in 1i128..242, a in 1u32..243) {
        // (x, y) -> (y, x) maps solutions for b to solutions for -b
        let f = gf(5);
        let t = FuncTable::binomial(&f, r, 1).unwrap();
        let row = beta_row(&t, a).unwrap();
        for b in f.elements() {
            prop_assert_eq!(row.counts[b as usize], row.counts[f.neg(b) as usize]);
        }
    }
}
