//! Brute-force oracles written directly from the definitions, sharing nothing
//! with the library except the modulus digits and the id encoding.

#![allow(dead_code)]

use std::collections::HashMap;

/// F_{p^n} as polynomials over F_p, one digit vector per element.
pub struct Poly {
    pub p: u64,
    pub n: usize,
    pub q: u64,
    /// Monic modulus, constant term first, length `n + 1`.
    pub modulus: Vec<u64>,
}

impl Poly {
    pub fn new(p: u32, modulus: &[u32]) -> Self {
        let n = modulus.len() - 1;
        Poly {
            p: p as u64,
            n,
            q: (p as u64).pow(n as u32),
            modulus: modulus.iter().map(|&c| c as u64).collect(),
        }
    }

    pub fn digits(&self, mut id: u32) -> Vec<u64> {
        let mut d = vec![0; self.n];
        for slot in d.iter_mut() {
            *slot = id as u64 % self.p;
            id /= self.p as u32;
        }
        d
    }

    pub fn id(&self, d: &[u64]) -> u32 {
        d.iter().rev().fold(0u64, |acc, &c| acc * self.p + c) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        self.id(&x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        self.id(&x.iter().zip(&y).map(|(u, v)| (u + self.p - v) % self.p).collect::<Vec<_>>())
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * self.n];
        for (i, u) in x.iter().enumerate() {
            for (j, v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % self.p;
            }
        }
        for k in (self.n..2 * self.n).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..=self.n {
                let t = c * self.modulus[i] % self.p;
                prod[k - self.n + i] = (prod[k - self.n + i] + self.p - t) % self.p;
            }
        }
        self.id(&prod[..self.n])
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn chi(&self, a: u32) -> i32 {
        match self.pow(a, (self.q - 1) / 2) {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    pub fn minus_one(&self) -> u32 {
        (self.p - 1) as u32
    }

    /// `x^r (1 + u chi(x))` with `0^r = 0`.
    pub fn binomial(&self, r: u64, u: u32, x: u32) -> u32 {
        if x == 0 {
            return 0;
        }
        let c = match self.chi(x) {
            1 => self.add(1, u),
            _ => self.sub(1, u),
        };
        self.mul(self.pow(x, r), c)
    }

    pub fn power(&self, r: u64, x: u32) -> u32 {
        if x == 0 {
            0
        } else {
            self.pow(x, r)
        }
    }

    pub fn table(&self, f: impl Fn(u32) -> u32) -> Vec<u32> {
        (0..self.q as u32).map(f).collect()
    }
}

/// `#{x : F(x + a) - F(x) = b}` for every `b`.
pub fn ddt_row(o: &Poly, values: &[u32], a: u32) -> Vec<u32> {
    let mut counts = vec![0u32; o.q as usize];
    for x in 0..o.q as u32 {
        counts[o.sub(values[o.add(x, a) as usize], values[x as usize]) as usize] += 1;
    }
    counts
}

/// `#{(x, y) : F(x) - F(y) = b, F(x + a) - F(y + a) = b}` by the double loop.
pub fn bct_row(o: &Poly, values: &[u32], a: u32) -> Vec<u32> {
    let q = o.q as u32;
    let shifted: Vec<u32> = (0..q).map(|x| values[o.add(x, a) as usize]).collect();
    let mut counts = vec![0u32; q as usize];
    for x in 0..q {
        for y in 0..q {
            let b = o.sub(values[x as usize], values[y as usize]);
            if o.sub(shifted[x as usize], shifted[y as usize]) == b {
                counts[b as usize] += 1;
            }
        }
    }
    counts
}

/// Same count, but only for the pairs at the listed `b`; cheaper for sampling.
pub fn bct_at(o: &Poly, values: &[u32], a: u32, b: u32) -> u32 {
    let q = o.q as u32;
    let mut by_value: HashMap<u32, Vec<u32>> = HashMap::new();
    for y in 0..q {
        by_value.entry(values[y as usize]).or_default().push(y);
    }
    let mut count = 0;
    for x in 0..q {
        let target = o.sub(values[x as usize], b);
        if let Some(ys) = by_value.get(&target) {
            for &y in ys {
                let lhs = o.sub(values[o.add(x, a) as usize], values[o.add(y, a) as usize]);
                if lhs == b {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Histogram `{count: multiplicity}` over `b` of an `a = 1` row, skipping `b = 0`
/// when `skip_zero` is set.
pub fn spectrum(row: &[u32], skip_zero: bool) -> std::collections::BTreeMap<u32, u64> {
    let mut h = std::collections::BTreeMap::new();
    for (b, &c) in row.iter().enumerate() {
        if skip_zero && b == 0 {
            continue;
        }
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

/// Digit sum of `e` in base `p`.
pub fn weight(mut e: u64, p: u64) -> u64 {
    let mut s = 0;
    while e > 0 {
        s += e % p;
        e /= p;
    }
    s
}

/// Smallest member of `{r p^i mod m}`.
pub fn coset_min(r: u64, m: u64, p: u64) -> u64 {
    let mut best = r % m;
    let mut cur = r % m;
    loop {
        cur = cur * p % m;
        if cur == r % m {
            return best;
        }
        best = best.min(cur);
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Deterministic sample of `count` values in `[lo, hi)`.
pub fn sample(seed: u64, count: usize, lo: u32, hi: u32) -> Vec<u32> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(lo..hi)).collect()
}
