//! Dense polynomials over a prime field, coefficients low-to-high.
//!
//! Only what modulus selection needs: remainder, modular multiplication and
//! exponentiation, and enumeration of monic candidates.

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Remainder of `a` modulo a nonzero polynomial `m`.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut m = m.to_vec();
    trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let coef = r[top] * lead_inv % p;
        if coef != 0 {
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - coef * mi % p) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    rem(&out, m, p)
}

pub(crate) fn pow_x_mod(exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut base = rem(&[0, 1], m, p);
    let mut acc = rem(&[1], m, p);
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &base, m, p);
        }
        base = mul_mod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

/// Monic polynomial of degree `d` whose lower coefficients are the base-`p`
/// digits of `index`.
pub(crate) fn monic_from_index(index: u64, d: usize, p: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(d + 1);
    let mut v = index;
    for _ in 0..d {
        out.push(v % p);
        v /= p;
    }
    out.push(1);
    out
}

/// Trial division by every monic polynomial of degree `1..=d/2`.
pub(crate) fn is_irreducible_by_trial_division(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d <= 1 {
        return true;
    }
    for k in 1..=d / 2 {
        let count = p.pow(k as u32);
        for idx in 0..count {
            let g = monic_from_index(idx, k, p);
            if rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            while n.is_multiple_of(i) {
                n /= i;
            }
        }
        i += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// True when `X` has multiplicative order exactly `p^d - 1` modulo `f`.
pub(crate) fn x_is_primitive(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    let order = p.pow(d as u32) - 1;
    if f[0] == 0 {
        return false;
    }
    if pow_x_mod(order, f, p) != vec![1] {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|r| pow_x_mod(order / r, f, p) != vec![1])
}
