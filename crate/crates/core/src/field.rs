//! Arithmetic in F_{p^n} for odd primes p.
//!
//! Elements are ids in `[0, q)`: the id of `c_0 + c_1 x + ... + c_{n-1} x^{n-1}`
//! is `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`. Id 0 is zero and id 1 is one, and
//! the ids `0..p` are exactly the prime subfield.
//!
//! Addition is digit-wise. Multiplication, inversion, powers and the quadratic
//! character go through discrete-log tables built once per field. For `p = 3`
//! addition runs on a bit-sliced trit encoding (two 16-bit planes in a `u32`).

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::poly;

/// Element id.
pub type Elem = u32;

/// Largest field (number of elements) built unless the caller raises the cap.
pub const DEFAULT_MAX_ELEMENTS: u64 = 43_046_721; // 3^16

const NO_LOG: u32 = u32::MAX;

/// Immutable arithmetic context for F_{p^n}.
pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Elem,
    log: Vec<u32>,
    exp: Vec<Elem>,
    adder: Adder,
}

enum Adder {
    Trits(Box<TritCodec>),
    Digits { pows: Vec<u32> },
}

/// Bit-sliced encoding of F_3 vectors: the low 16 bits flag digits equal to 1,
/// the high 16 bits flag digits equal to 2.
pub struct TritCodec {
    pack: Vec<u32>,
    lo: [u32; 256],
    hi: [u32; 256],
}

impl TritCodec {
    fn new(q: u32, n: u32) -> Self {
        let mut pow3 = [0u32; 16];
        let mut acc = 1u32;
        for slot in pow3.iter_mut().take(n as usize) {
            *slot = acc;
            acc = acc.wrapping_mul(3);
        }
        let mut lo = [0u32; 256];
        let mut hi = [0u32; 256];
        for m in 0..256usize {
            for bit in 0..8 {
                if m >> bit & 1 == 1 {
                    lo[m] += pow3[bit];
                    hi[m] += pow3[bit + 8];
                }
            }
        }
        let pack = (0..q)
            .map(|mut id| {
                let mut w = 0u32;
                let mut bit = 0;
                while id > 0 {
                    match id % 3 {
                        1 => w |= 1 << bit,
                        2 => w |= 1 << (bit + 16),
                        _ => {}
                    }
                    id /= 3;
                    bit += 1;
                }
                w
            })
            .collect();
        TritCodec { pack, lo, hi }
    }

    #[inline(always)]
    pub fn pack(&self, id: Elem) -> u32 {
        self.pack[id as usize]
    }

    #[inline(always)]
    fn plane_value(&self, m: u32) -> u32 {
        self.lo[(m & 0xff) as usize] + self.hi[(m >> 8 & 0xff) as usize]
    }

    #[inline(always)]
    pub fn unpack(&self, w: u32) -> Elem {
        self.plane_value(w & 0xffff) + 2 * self.plane_value(w >> 16)
    }

    #[inline(always)]
    pub fn add(a: u32, b: u32) -> u32 {
        let x = a | b.rotate_left(16);
        (a | b).rotate_left(16) ^ x ^ x.rotate_left(16)
    }

    #[inline(always)]
    pub fn neg(a: u32) -> u32 {
        a.rotate_left(16)
    }

    #[inline(always)]
    pub fn sub(a: u32, b: u32) -> u32 {
        Self::add(a, b.rotate_left(16))
    }
}

/// Parameters for [`FieldCtx`] construction.
#[derive(Clone, Debug)]
pub struct FieldBuilder {
    p: u32,
    n: u32,
    modulus: Option<Vec<u32>>,
    max_elements: u64,
}

impl FieldBuilder {
    pub fn modulus(mut self, digits: Option<Vec<u32>>) -> Self {
        self.modulus = digits;
        self
    }

    pub fn max_elements(mut self, cap: u64) -> Self {
        self.max_elements = cap;
        self
    }

    pub fn build(self) -> Result<FieldCtx> {
        FieldCtx::construct(self)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl FieldCtx {
    /// Field with the default (lexicographically smallest) modulus.
    pub fn new(p: u32, n: u32) -> Result<Self> {
        Self::builder(p, n).build()
    }

    pub fn with_modulus(p: u32, n: u32, digits: Vec<u32>) -> Result<Self> {
        Self::builder(p, n).modulus(Some(digits)).build()
    }

    pub fn builder(p: u32, n: u32) -> FieldBuilder {
        FieldBuilder {
            p,
            n,
            modulus: None,
            max_elements: DEFAULT_MAX_ELEMENTS,
        }
    }

    fn construct(b: FieldBuilder) -> Result<Self> {
        let FieldBuilder {
            p,
            n,
            modulus,
            max_elements,
        } = b;
        if p < 3 || !is_prime(p) {
            return domain(format!("p = {p} is not an odd prime"));
        }
        if n == 0 {
            return domain("extension degree n must be at least 1");
        }
        let q = (p as u64).checked_pow(n).filter(|&q| q <= u32::MAX as u64 / 2);
        let q = match q {
            Some(q) if q <= max_elements => q as u32,
            _ => {
                return Err(Error::Resource(format!(
                    "field {p}^{n} exceeds the element cap of {max_elements}"
                )))
            }
        };
        let modulus = match modulus {
            Some(digits) => {
                validate_modulus(p, n, &digits)?;
                digits
            }
            None => default_modulus(p, n),
        };

        let generator = find_generator(p, n, q, &modulus);
        let (exp, log) = build_log_tables(p, n, q, &modulus, generator);
        let adder = if p == 3 && n <= 16 {
            Adder::Trits(Box::new(TritCodec::new(q, n)))
        } else {
            let mut pows = Vec::with_capacity(n as usize);
            let mut acc = 1u32;
            for _ in 0..n {
                pows.push(acc);
                acc = acc.wrapping_mul(p);
            }
            Adder::Digits { pows }
        };
        Ok(FieldCtx {
            p,
            n,
            q,
            modulus,
            generator,
            log,
            exp,
            adder,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of elements.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Order of the multiplicative group.
    pub fn order(&self) -> u32 {
        self.q - 1
    }

    /// `(q - 1) / 2`, also the discrete log of -1.
    pub fn half_order(&self) -> u32 {
        (self.q - 1) / 2
    }

    /// Modulus digits, constant term first; the last digit is the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn modulus_string(&self) -> String {
        format_digits(&self.modulus, self.p)
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    /// Embedding of an integer into the prime subfield.
    pub fn from_int(&self, k: i64) -> Elem {
        k.rem_euclid(self.p as i64) as Elem
    }

    pub fn one(&self) -> Elem {
        1
    }

    pub fn minus_one(&self) -> Elem {
        self.p - 1
    }

    pub fn in_prime_field(&self, a: Elem) -> bool {
        a < self.p
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.q
    }

    /// Trit codec, present for `p = 3`.
    pub fn trits(&self) -> Option<&TritCodec> {
        match &self.adder {
            Adder::Trits(t) => Some(t),
            Adder::Digits { .. } => None,
        }
    }

    /// Base-p digits of an element, constant term first, length n.
    pub fn digits(&self, mut a: Elem) -> Vec<u32> {
        (0..self.n)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Elem> {
        if digits.len() > self.n as usize || digits.iter().any(|&d| d >= self.p) {
            return domain(format!(
                "digit vector {digits:?} is not an element of F_{}^{}",
                self.p, self.n
            ));
        }
        Ok(digits.iter().rev().fold(0, |acc, &d| acc * self.p + d))
    }

    /// Parses an element given either as an integer id or as `poly:<digits>`
    /// (base-p digits, constant term first).
    pub fn parse_element(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let id = if let Some(rest) = s.strip_prefix("poly:") {
            let digits = parse_digits(rest, self.p)?;
            self.from_digits(&digits)?
        } else {
            s.parse::<u64>()
                .map_err(|e| Error::Parse(format!("element {s:?}: {e}")))?
                .try_into()
                .unwrap_or(u32::MAX)
        };
        if id >= self.q {
            return domain(format!("element id {id} is outside [0, {})", self.q));
        }
        Ok(id)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.adder {
            Adder::Trits(t) => t.unpack(TritCodec::add(t.pack(a), t.pack(b))),
            Adder::Digits { pows } => {
                let p = self.p;
                let (mut a, mut b) = (a, b);
                let mut out = 0;
                for &w in pows {
                    if a == 0 && b == 0 {
                        break;
                    }
                    out += (a % p + b % p) % p * w;
                    a /= p;
                    b /= p;
                }
                out
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.adder {
            Adder::Trits(t) => t.unpack(TritCodec::neg(t.pack(a))),
            Adder::Digits { pows } => {
                let p = self.p;
                let mut a = a;
                let mut out = 0;
                for &w in pows {
                    if a == 0 {
                        break;
                    }
                    out += (p - a % p) % p * w;
                    a /= p;
                }
                out
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        match &self.adder {
            Adder::Trits(t) => t.unpack(TritCodec::sub(t.pack(a), t.pack(b))),
            Adder::Digits { .. } => self.add(a, self.neg(b)),
        }
    }

    /// Discrete log to the base of the fixed generator; `None` at zero.
    #[inline]
    pub fn log(&self, a: Elem) -> Option<u32> {
        match self.log[a as usize] {
            NO_LOG => None,
            k => Some(k),
        }
    }

    /// `g^k` for `k` in `[0, q - 1)`.
    #[inline]
    pub fn exp(&self, k: u32) -> Elem {
        self.exp[k as usize]
    }

    /// `g^k` for any non-negative `k`.
    #[inline]
    pub fn exp_mod(&self, k: u64) -> Elem {
        self.exp[(k % self.order() as u64) as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] + self.log[b as usize];
        let qm1 = self.q - 1;
        self.exp[if s >= qm1 { s - qm1 } else { s } as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        match self.log(a) {
            None => domain("inverse of zero"),
            Some(0) => Ok(1),
            Some(k) => Ok(self.exp[(self.order() - k) as usize]),
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any integer `e`, reducing the exponent modulo `q - 1`.
    ///
    /// `0^0 = 1` and `0^e = 0` when `e mod (q-1)` is positive; a nonzero `e`
    /// divisible by `q - 1` at zero is rejected.
    pub fn pow(&self, a: Elem, e: i128) -> Result<Elem> {
        let qm1 = self.order() as i128;
        let reduced = e.rem_euclid(qm1) as u64;
        match self.log(a) {
            None if e == 0 => Ok(1),
            None if reduced == 0 => domain(format!(
                "0^{e}: exponent is a nonzero multiple of q - 1 = {qm1}"
            )),
            None => Ok(0),
            Some(k) => Ok(self.exp_mod(k as u64 * reduced)),
        }
    }

    /// `a^e` with a non-negative exponent where `0^e = 0` for `e > 0`.
    #[inline]
    pub fn pow_u(&self, a: Elem, e: u64) -> Elem {
        match self.log(a) {
            None => u32::from(e == 0),
            Some(k) => self.exp_mod(k as u64 * (e % self.order() as u64)),
        }
    }

    /// Quadratic character: 0 at zero, otherwise +1 on squares and -1 on non-squares.
    #[inline]
    pub fn chi(&self, a: Elem) -> i32 {
        match self.log[a as usize] {
            NO_LOG => 0,
            k if k & 1 == 0 => 1,
            _ => -1,
        }
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("q", &self.q)
            .field("modulus", &self.modulus_string())
            .field("generator", &self.generator)
            .finish()
    }
}

/// Formats digits as a string: one character per digit for `p <= 10`,
/// comma separated otherwise.
pub fn format_digits(digits: &[u32], p: u32) -> String {
    if p <= 10 {
        digits.iter().map(|d| char::from(b'0' + *d as u8)).collect()
    } else {
        digits
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Inverse of [`format_digits`].
pub fn parse_digits(s: &str, p: u32) -> Result<Vec<u32>> {
    let s = s.trim();
    let digits: Result<Vec<u32>> = if s.contains(',') || p > 10 {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("digit {t:?}: {e}")))
            })
            .collect()
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| Error::Parse(format!("digit {c:?} in {s:?}")))
            })
            .collect()
    };
    let digits = digits?;
    if digits.is_empty() {
        return Err(Error::Parse("empty digit string".into()));
    }
    if let Some(d) = digits.iter().find(|&&d| d >= p) {
        return Err(Error::Parse(format!("digit {d} is not below p = {p}")));
    }
    Ok(digits)
}

fn validate_modulus(p: u32, n: u32, digits: &[u32]) -> Result<()> {
    let fail = |reason: String| Error::Modulus {
        digits: format_digits(digits, p),
        reason,
    };
    if digits.len() != n as usize + 1 {
        return Err(fail(format!(
            "expected {} digits for a degree-{n} modulus, got {}",
            n + 1,
            digits.len()
        )));
    }
    if digits.iter().any(|&d| d >= p) {
        return Err(fail(format!("digits must be below p = {p}")));
    }
    if digits[n as usize] != 1 {
        return Err(fail("leading coefficient is not 1 (not monic)".into()));
    }
    poly::check_irreducible(digits, p).map_err(fail)
}

/// Monic irreducible polynomials of degree `n` over F_p in ascending order of
/// the coefficient tuple `(c_{n-1}, ..., c_0)`.
pub fn irreducible_moduli(p: u32, n: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(n);
    (0..count).filter_map(move |t| {
        let mut f: Vec<u32> = Vec::with_capacity(n as usize + 1);
        let mut t = t;
        for _ in 0..n {
            f.push((t % p as u64) as u32);
            t /= p as u64;
        }
        f.push(1);
        poly::check_irreducible(&f, p).is_ok().then_some(f)
    })
}

pub fn default_modulus(p: u32, n: u32) -> Vec<u32> {
    irreducible_moduli(p, n)
        .next()
        .expect("an irreducible polynomial exists in every degree")
}

fn find_generator(p: u32, n: u32, q: u32, modulus: &[u32]) -> Elem {
    let order = q as u64 - 1;
    let primes = poly::distinct_prime_factors(order);
    (1..q)
        .find(|&g| {
            let digits = id_digits(g, p, n);
            primes
                .iter()
                .all(|&l| poly::pow_mod(&digits, order / l, modulus, p) != [1])
        })
        .expect("the multiplicative group of a finite field is cyclic")
}

fn id_digits(mut a: u32, p: u32, n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (0..n)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Walks the powers of the generator, multiplying by it in the polynomial
/// basis, and records both directions of the bijection.
fn build_log_tables(p: u32, n: u32, q: u32, modulus: &[u32], g: Elem) -> (Vec<Elem>, Vec<u32>) {
    let n = n as usize;
    // x^n = -(c_0 + ... + c_{n-1} x^{n-1})
    let fold: Vec<u32> = modulus[..n].iter().map(|&c| (p - c) % p).collect();
    let g_digits = id_digits(g, p, n as u32);
    let mut place = vec![1u32; n];
    for i in 1..n {
        place[i] = place[i - 1] * p;
    }

    let mut cur = vec![0u32; n];
    cur[0] = 1;
    let mut shifted = vec![0u32; n];
    let mut acc = vec![0u32; n];
    let mut exp = Vec::with_capacity(q as usize - 1);
    let mut log = vec![NO_LOG; q as usize];
    for k in 0..q - 1 {
        let id: u32 = cur.iter().zip(&place).map(|(d, w)| d * w).sum();
        exp.push(id);
        log[id as usize] = k;

        acc.iter_mut().for_each(|c| *c = 0);
        shifted.copy_from_slice(&cur);
        for (i, &gc) in g_digits.iter().enumerate() {
            if i > 0 {
                let top = shifted[n - 1];
                for j in (1..n).rev() {
                    shifted[j] = (shifted[j - 1] + top * fold[j]) % p;
                }
                shifted[0] = top * fold[0] % p;
            }
            if gc != 0 {
                for (a, s) in acc.iter_mut().zip(&shifted) {
                    *a = (*a + gc * s) % p;
                }
            }
        }
        std::mem::swap(&mut cur, &mut acc);
    }
    debug_assert!(cur[0] == 1 && cur[1..].iter().all(|&c| c == 0));
    (exp, log)
}
