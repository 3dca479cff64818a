//! Dense polynomials over a prime field F_p, coefficients stored constant term first.
//!
//! Only what field construction needs: reduction, modular powers, gcd, and the
//! Rabin irreducibility test.

pub(crate) type Poly = Vec<u32>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn mul(a: &[u32], b: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x as u64 * y as u64;
        }
    }
    trim(out.into_iter().map(|c| (c % p as u64) as u32).collect())
}

/// Remainder of `a` modulo a nonzero `f`.
pub(crate) fn rem(a: &[u32], f: &[u32], p: u32) -> Poly {
    let df = degree(f).expect("division by zero polynomial");
    let lead_inv = inv_mod(f[df], p) as u64;
    let mut r: Vec<u64> = trim(a.to_vec()).into_iter().map(u64::from).collect();
    while r.len() > df {
        let top = r.len() - 1;
        let c = r[top] % p as u64 * lead_inv % p as u64;
        if c != 0 {
            let shift = top - df;
            for (i, &fc) in f[..=df].iter().enumerate() {
                let t = c * fc as u64 % p as u64;
                r[shift + i] = (r[shift + i] + p as u64 - t) % p as u64;
            }
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Poly {
    rem(&mul(a, b, p), f, p)
}

pub(crate) fn pow_mod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Poly {
    let mut result = rem(&[1], f, p);
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        e >>= 1;
    }
    result
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    // normalise to monic
    if let Some(d) = degree(&x) {
        let inv = inv_mod(x[d], p) as u64;
        for c in x.iter_mut() {
            *c = (*c as u64 * inv % p as u64) as u32;
        }
    }
    x
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub(crate) fn distinct_prime_factors(m: u64) -> Vec<u64> {
    prime_factors(m)
}

/// x^(p^k) mod f.
fn frobenius_power(k: u32, f: &[u32], p: u32) -> Poly {
    let mut h = rem(&[0, 1], f, p);
    for _ in 0..k {
        h = pow_mod(&h, p as u64, f, p);
    }
    h
}

/// Rabin's test. On failure returns a description of the test that failed,
/// including the common factor when one was found.
pub(crate) fn check_irreducible(f: &[u32], p: u32) -> Result<(), String> {
    let n = match degree(f) {
        Some(d) if d >= 1 => d as u32,
        _ => return Err("degree must be at least 1".into()),
    };
    if f[n as usize] != 1 {
        return Err("leading coefficient is not 1 (not monic)".into());
    }
    let x: Poly = vec![0, 1];
    for d in prime_factors(n as u64) {
        let k = n / d as u32;
        let h = sub(&frobenius_power(k, f, p), &x, p);
        let g = gcd(f, &h, p);
        if degree(&g).unwrap_or(0) > 0 {
            return Err(format!(
                "factor test gcd(x^({p}^{k}) - x, f) failed: common factor {} (f has an irreducible factor of degree dividing {k})",
                format_poly(&g)
            ));
        }
    }
    let h = sub(&frobenius_power(n, f, p), &x, p);
    if !rem(&h, f, p).is_empty() {
        return Err(format!(
            "factor test x^({p}^{n}) = x mod f failed (f has repeated or missing factors)"
        ));
    }
    Ok(())
}

pub(crate) fn format_poly(a: &[u32]) -> String {
    let terms: Vec<String> = a
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
