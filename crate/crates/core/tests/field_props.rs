mod common;

use boomspec_core::field::{default_modulus, irreducible_moduli, TritCodec};
use boomspec_core::FieldCtx;
use common::Poly;
use proptest::prelude::*;

fn fields() -> Vec<FieldCtx> {
    [(3, 1), (3, 2), (3, 3), (3, 4), (3, 5), (5, 2), (5, 3), (7, 2), (11, 1)]
        .iter()
        .map(|&(p, n)| FieldCtx::new(p, n).unwrap())
        .collect()
}

/// Trial division by every monic polynomial of degree 1..=n/2.
fn irreducible_by_trial(o: &Poly) -> bool {
    let p = o.p;
    let f: Vec<u64> = o.modulus.clone();
    for d in 1..=o.n / 2 {
        for tail in 0..p.pow(d as u32) {
            let mut g: Vec<u64> = (0..d).map(|i| tail / p.pow(i as u32) % p).collect();
            g.push(1);
            let mut r = f.clone();
            for k in (d..r.len()).rev() {
                let c = r[k];
                for i in 0..=d {
                    r[k - d + i] = (r[k - d + i] + p * p - c * g[i] % p) % p;
                }
            }
            if r[..d].iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[test]
fn default_modulus_is_first_irreducible_in_order() {
    for (p, n) in [(3u32, 2u32), (3, 3), (3, 4), (3, 5), (5, 2), (5, 3), (7, 2)] {
        let pp = p as u64;
        // candidates ordered by (c_{n-1}, ..., c_0): the tuple read as a base-p number
        let first = (0..pp.pow(n))
            .map(|k| {
                let mut d: Vec<u32> = (0..n).map(|i| (k / pp.pow(i) % pp) as u32).collect();
                d.push(1);
                d
            })
            .find(|d| irreducible_by_trial(&Poly::new(p, d)))
            .unwrap();
        assert_eq!(default_modulus(p, n), first, "p={p} n={n}");
        assert_eq!(irreducible_moduli(p, n).next().unwrap(), first);
    }
}

#[test]
fn enumerated_moduli_are_irreducible_and_counted() {
    // number of monic irreducibles of degree 3 over F_3 is (27 - 3) / 3 = 8
    let all: Vec<_> = irreducible_moduli(3, 3).collect();
    assert_eq!(all.len(), 8);
    for m in &all {
        assert!(irreducible_by_trial(&Poly::new(3, m)));
    }
    assert!(FieldCtx::with_modulus(3, 3, vec![0, 0, 0, 1]).is_err());
}

#[test]
fn generator_is_primitive() {
    for f in fields() {
        let o = Poly::new(f.p(), f.modulus());
        let g = f.generator();
        let mut seen = std::collections::HashSet::new();
        let mut x = 1;
        for _ in 0..f.order() {
            assert!(seen.insert(x));
            x = o.mul(x, g);
        }
        assert_eq!(x, 1);
        // smallest id with full order
        for h in 1..g {
            let mut k = 1;
            let mut y = h;
            while y != 1 {
                y = o.mul(y, h);
                k += 1;
            }
            assert!(k < f.order(), "p={} n={} h={h} has full order", f.p(), f.n());
        }
    }
}

#[test]
fn arithmetic_matches_polynomial_oracle_exhaustively_small() {
    for f in fields().into_iter().filter(|f| f.q() <= 125) {
        let o = Poly::new(f.p(), f.modulus());
        for a in f.elements() {
            assert_eq!(f.neg(a), o.sub(0, a));
            assert_eq!(f.chi(a), o.chi(a));
            for b in f.elements() {
                assert_eq!(f.add(a, b), o.add(a, b));
                assert_eq!(f.sub(a, b), o.sub(a, b));
                assert_eq!(f.mul(a, b), o.mul(a, b));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn ring_laws_and_oracle(idx in 0usize..9, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = &fields()[idx];
        let o = Poly::new(f.p(), f.modulus());
        let (a, b, c) = (a % f.q(), b % f.q(), c % f.q());
        prop_assert_eq!(f.mul(a, b), o.mul(a, b));
        prop_assert_eq!(f.add(a, b), o.add(a, b));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.exp(f.log(a).unwrap()), a);
        }
    }

    #[test]
    fn chi_is_multiplicative(idx in 0usize..9, a in any::<u32>(), b in any::<u32>()) {
        let f = &fields()[idx];
        let (a, b) = (a % f.q(), b % f.q());
        prop_assert_eq!(f.chi(f.mul(a, b)), f.chi(a) * f.chi(b));
        prop_assert_eq!(f.chi(a) == 0, a == 0);
    }

    #[test]
    fn power_laws(idx in 0usize..9, a in any::<u32>(), e1 in -500i128..500, e2 in -500i128..500) {
        let f = &fields()[idx];
        let a = a % f.q();
        prop_assume!(a != 0);
        let lhs = f.pow(a, e1 + e2).unwrap();
        let rhs = f.mul(f.pow(a, e1).unwrap(), f.pow(a, e2).unwrap());
        prop_assert_eq!(lhs, rhs);
        let o = Poly::new(f.p(), f.modulus());
        let e = e1.rem_euclid(f.order() as i128) as u64;
        prop_assert_eq!(f.pow(a, e1).unwrap(), o.pow(a, e));
    }

    #[test]
    fn trit_lanes_add_like_digits(n in 1u32..=9, a in any::<u32>(), b in any::<u32>()) {
        let q = 3u32.pow(n);
        let (a, b) = (a % q, b % q);
        let digits = |mut x: u32| (0..n).map(|_| { let d = x % 3; x /= 3; d }).collect::<Vec<_>>();
        let undigits = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * 3 + c);
        let field = FieldCtx::new(3, n).unwrap();
        {
            let t = field.trits().unwrap();
            let sum = t.unpack(TritCodec::add(t.pack(a), t.pack(b)));
            let want: Vec<u32> = digits(a).iter().zip(digits(b)).map(|(x, y)| (x + y) % 3).collect();
            prop_assert_eq!(sum, undigits(&want));
            let neg = t.unpack(TritCodec::neg(t.pack(a)));
            let want: Vec<u32> = digits(a).iter().map(|x| (3 - x) % 3).collect();
            prop_assert_eq!(neg, undigits(&want));
            prop_assert_eq!(t.unpack(TritCodec::sub(t.pack(a), t.pack(a))), 0);
        }
    }
}

#[test]
fn elements_parse_as_ids_or_digits() {
    let f = FieldCtx::new(3, 3).unwrap();
    assert_eq!(f.parse_element("5").unwrap(), 5);
    // 2 + 1*3 = 5
    assert_eq!(f.parse_element("poly:21").unwrap(), 5);
    assert_eq!(f.parse_element("poly:210").unwrap(), 5);
    assert!(f.parse_element("27").is_err());
    assert!(f.parse_element("poly:3").is_err());
    assert!(f.parse_element("x").is_err());
}

#[test]
fn memory_cap_is_enforced() {
    assert!(FieldCtx::builder(3, 5).max_elements(100).build().is_err());
    assert!(FieldCtx::builder(3, 4).max_elements(100).build().is_ok());
    assert!(FieldCtx::new(4, 2).is_err());
    assert!(FieldCtx::new(3, 0).is_err());
}
