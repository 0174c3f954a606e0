//! Finite fields `F_{p^d}`.
//!
//! A [`FieldCtx`] fixes `p`, `d` and a monic irreducible modulus. Elements are
//! stored packed: the coefficient vector `(c_0, .., c_{d-1})` of the class
//! `c_0 + c_1 X + ..` becomes the integer `sum c_i p^i`, so the elements of a
//! context are exactly `0..p^d` and enumeration order is numeric order.
//!
//! [`FieldElem`] pairs a packed value with its context. Hot loops elsewhere in
//! the crate work on the packed `u64` directly through the `*_raw` methods.

mod poly;

pub(crate) use poly::{inv_mod as inv_mod_p, is_prime, prime_factors};

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};

/// Fields up to this size get log/exp tables on first multiplication.
const TABLE_LIMIT: u64 = 1 << 20;
/// Packed values must stay below this bound.
const SIZE_LIMIT: u64 = 1 << 62;

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Embedding {
    /// Images of `1, w, w^2, ..` of the small field, packed in the big field.
    root_powers: Vec<u64>,
    /// Big packed value -> small packed value, for pulling back.
    inverse: HashMap<u64, u64>,
}

/// Arithmetic context for `F_{p^d}`.
pub struct FieldCtx {
    p: u64,
    d: usize,
    modulus: Vec<u64>,
    size: u64,
    pow_p: Vec<u64>,
    mod_bits: u64,
    tables: OnceLock<Option<Tables>>,
    primitive: OnceLock<u64>,
    embeddings: RwLock<HashMap<Vec<u64>, Arc<Embedding>>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("d", &self.d)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Lexicographically smallest monic irreducible polynomial of degree `d`
/// over `F_p`, coefficients low-to-high.
pub fn smallest_irreducible(p: u64, d: usize) -> Result<Vec<u64>> {
    check_shape(p, d)?;
    let count = p.pow(d as u32);
    (0..count)
        .map(|idx| poly::monic_from_index(idx, d, p))
        .find(|f| (d == 1 || f[0] != 0) && poly::is_irreducible_by_trial_division(f, p))
        .ok_or_else(|| Error::Internal(format!("no irreducible of degree {d} over F_{p}")))
}

/// Lexicographically smallest monic polynomial of degree `d` over `F_p` for
/// which `X` generates the multiplicative group of the quotient field.
pub fn smallest_primitive(p: u64, d: usize) -> Result<Vec<u64>> {
    check_shape(p, d)?;
    let count = p.pow(d as u32);
    (0..count)
        .map(|idx| poly::monic_from_index(idx, d, p))
        .find(|f| poly::x_is_primitive(f, p))
        .ok_or_else(|| Error::Internal(format!("no primitive polynomial of degree {d} over F_{p}")))
}

fn check_shape(p: u64, d: usize) -> Result<()> {
    if !poly::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p >= 1 << 31 {
        return Err(Error::FieldTooLarge { p, d });
    }
    if d == 0 {
        return Err(Error::InvalidDegree(d));
    }
    match p.checked_pow(d as u32) {
        Some(s) if s < SIZE_LIMIT => Ok(()),
        _ => Err(Error::FieldTooLarge { p, d }),
    }
}

impl FieldCtx {
    /// Builds `F_{p^d}`. Without an explicit modulus the lexicographically
    /// smallest irreducible one is used; an explicit modulus is verified by
    /// trial division.
    pub fn new(p: u64, d: usize, modulus: Option<Vec<u64>>) -> Result<Arc<Self>> {
        check_shape(p, d)?;
        let modulus = match modulus {
            None => smallest_irreducible(p, d)?,
            Some(mut m) => {
                if m.len() != d + 1 || m[d] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus(d));
                }
                if !poly::is_irreducible_by_trial_division(&m, p) {
                    return Err(Error::ReducibleModulus(p));
                }
                m.truncate(d + 1);
                m
            }
        };
        let mut pow_p = Vec::with_capacity(d + 1);
        let mut acc = 1u64;
        for _ in 0..=d {
            pow_p.push(acc);
            acc = acc.saturating_mul(p);
        }
        let mod_bits = if p == 2 {
            modulus
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | (c << i))
        } else {
            0
        };
        Ok(Arc::new(FieldCtx {
            p,
            d,
            size: pow_p[d],
            modulus,
            pow_p,
            mod_bits,
            tables: OnceLock::new(),
            primitive: OnceLock::new(),
            embeddings: RwLock::new(HashMap::new()),
        }))
    }

    pub fn prime_field(p: u64) -> Result<Arc<Self>> {
        Self::new(p, 1, None)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Number of elements, `p^d`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    // ---- packed arithmetic -------------------------------------------------

    pub(crate) fn unpack(&self, mut v: u64, out: &mut [u64]) {
        for slot in out.iter_mut().take(self.d) {
            *slot = v % self.p;
            v /= self.p;
        }
    }

    pub(crate) fn pack(&self, digits: &[u64]) -> u64 {
        digits
            .iter()
            .take(self.d)
            .rev()
            .fold(0u64, |acc, &c| acc * self.p + c)
    }

    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.d == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        for i in 0..self.d {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * self.pow_p[i];
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg_raw(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0u64;
        for i in 0..self.d {
            let c = a % self.p;
            out += ((self.p - c) % self.p) * self.pow_p[i];
            a /= self.p;
        }
        out
    }

    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        self.add_raw(a, self.neg_raw(b))
    }

    /// Multiplies by a prime-field scalar `c < p`.
    pub fn scale_raw(&self, c: u64, a: u64) -> u64 {
        let c = c % self.p;
        if c == 0 {
            return 0;
        }
        if c == 1 {
            return a;
        }
        let mut a = a;
        let mut out = 0u64;
        for i in 0..self.d {
            out += (a % self.p * c % self.p) * self.pow_p[i];
            a /= self.p;
        }
        out
    }

    fn tables(&self) -> Option<&Tables> {
        self.tables
            .get_or_init(|| {
                if self.size > TABLE_LIMIT {
                    return None;
                }
                let g = self.primitive_raw();
                let n = (self.size - 1) as usize;
                let mut exp = vec![0u32; n];
                let mut log = vec![0u32; self.size as usize];
                let mut x = 1u64;
                for (i, slot) in exp.iter_mut().enumerate() {
                    *slot = x as u32;
                    log[x as usize] = i as u32;
                    x = self.mul_slow(x, g);
                }
                Some(Tables { exp, log })
            })
            .as_ref()
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.p == 2 {
            let mut prod: u128 = 0;
            let mut bb = b;
            let mut shift = 0;
            while bb != 0 {
                if bb & 1 == 1 {
                    prod ^= (a as u128) << shift;
                }
                bb >>= 1;
                shift += 1;
            }
            let modb = self.mod_bits as u128;
            for k in (self.d..2 * self.d).rev() {
                if prod >> k & 1 == 1 {
                    prod ^= modb << (k - self.d);
                }
            }
            return prod as u64;
        }
        let d = self.d;
        let p = self.p;
        let mut da = [0u64; 64];
        let mut db = [0u64; 64];
        self.unpack(a, &mut da);
        self.unpack(b, &mut db);
        let mut buf = [0u64; 128];
        for i in 0..d {
            if da[i] == 0 {
                continue;
            }
            for j in 0..d {
                buf[i + j] = (buf[i + j] + da[i] * db[j]) % p;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = buf[k];
            if c == 0 {
                continue;
            }
            for i in 0..d {
                let idx = k - d + i;
                buf[idx] = (buf[idx] + p - c * self.modulus[i] % p) % p;
            }
            buf[k] = 0;
        }
        self.pack(&buf[..d])
    }

    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        match self.tables() {
            Some(t) => {
                let n = self.size - 1;
                let e = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % n;
                t.exp[e as usize] as u64
            }
            None => self.mul_slow(a, b),
        }
    }

    pub fn pow_raw(&self, a: u64, mut e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = self.tables() {
            let n = self.size - 1;
            let l = (t.log[a as usize] as u128 * (e % n) as u128 % n as u128) as u64;
            return t.exp[l as usize] as u64;
        }
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv_raw(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = self.tables() {
            let n = self.size - 1;
            let l = (n - t.log[a as usize] as u64) % n;
            return Ok(t.exp[l as usize] as u64);
        }
        Ok(self.pow_raw(a, self.size - 2))
    }

    pub fn div_raw(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul_raw(a, self.inv_raw(b)?))
    }

    /// Packed value of the class of `X`.
    pub fn generator_raw(&self) -> u64 {
        if self.d == 1 {
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        }
    }

    /// Smallest packed value generating the multiplicative group.
    pub fn primitive_raw(&self) -> u64 {
        *self.primitive.get_or_init(|| {
            let n = self.size - 1;
            let factors = prime_factors(n);
            (1..self.size)
                .find(|&g| {
                    self.pow_raw_slow(g, n) == 1
                        && factors.iter().all(|&r| self.pow_raw_slow(g, n / r) != 1)
                })
                .expect("multiplicative group of a field is cyclic")
        })
    }

    fn pow_raw_slow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    /// `Tr_{F_{p^d}/F_s}(a)` for the subfield of size `s = p^k`, `k | d`.
    pub(crate) fn relative_trace_raw(&self, a: u64, sub_size: u64, steps: usize) -> u64 {
        let mut y = a;
        let mut acc = 0u64;
        for _ in 0..steps {
            acc = self.add_raw(acc, y);
            y = self.pow_raw(y, sub_size);
        }
        acc
    }

    // ---- elements ----------------------------------------------------------

    pub fn elem(self: &Arc<Self>, raw: u64) -> Result<FieldElem> {
        if raw >= self.size {
            return Err(Error::InvalidParameter(format!(
                "packed value {raw} outside F_{}",
                self.size
            )));
        }
        Ok(FieldElem {
            ctx: Arc::clone(self),
            v: raw,
        })
    }

    pub(crate) fn elem_unchecked(self: &Arc<Self>, raw: u64) -> FieldElem {
        debug_assert!(raw < self.size);
        FieldElem {
            ctx: Arc::clone(self),
            v: raw,
        }
    }

    pub fn zero(self: &Arc<Self>) -> FieldElem {
        self.elem_unchecked(0)
    }

    pub fn one(self: &Arc<Self>) -> FieldElem {
        self.elem_unchecked(1)
    }

    /// Image of an integer under `Z -> F_p -> F_{p^d}`.
    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElem {
        let p = self.p as i64;
        self.elem_unchecked(n.rem_euclid(p) as u64)
    }

    /// Element from its coefficient vector in the basis `1, w, w^2, ..`.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.d || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidParameter(format!(
                "coefficients {coeffs:?} do not describe an element of F_{}",
                self.size
            )));
        }
        Ok(self.elem_unchecked(self.pack(coeffs)))
    }

    /// The class `w` of `X` modulo the defining polynomial.
    pub fn generator(self: &Arc<Self>) -> FieldElem {
        self.elem_unchecked(self.generator_raw())
    }

    pub fn primitive_element(self: &Arc<Self>) -> FieldElem {
        self.elem_unchecked(self.primitive_raw())
    }

    /// All `p^d` elements, each exactly once, in packed order.
    pub fn enumerate(self: &Arc<Self>) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.size).map(move |v| self.elem_unchecked(v))
    }

    /// Parses a polynomial in the generator, e.g. `w^2+2*w+1`, `3`, `-w`.
    /// `ω` is accepted as a synonym of `w`.
    pub fn parse_elem(self: &Arc<Self>, text: &str) -> Result<FieldElem> {
        let cleaned: String = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == 'ω' { 'w' } else { c })
            .collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty field literal".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in cleaned.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !cleaned[..i].ends_with('^') {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);
        let gen = self.generator_raw();
        let mut acc = 0u64;
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let value = if let Some(pos) = body.find('w') {
                if self.d == 1 {
                    return Err(Error::Parse(format!("`w` is not defined in F_{}", self.p)));
                }
                let coef_str = body[..pos].trim_end_matches('*');
                let coef = if coef_str.is_empty() {
                    1
                } else {
                    parse_int(coef_str)?.rem_euclid(self.p as i64) as u64
                };
                let rest = &body[pos + 1..];
                let exp = if rest.is_empty() {
                    1
                } else {
                    let e = rest
                        .strip_prefix('^')
                        .ok_or_else(|| Error::Parse(format!("bad term `{term}`")))?;
                    let e = parse_int(e)?;
                    if e < 0 {
                        return Err(Error::Parse(format!("negative exponent in `{term}`")));
                    }
                    e as u64
                };
                self.scale_raw(coef, self.pow_raw(gen, exp))
            } else {
                parse_int(body)?.rem_euclid(self.p as i64) as u64
            };
            let value = if neg { self.neg_raw(value) } else { value };
            acc = self.add_raw(acc, value);
        }
        Ok(self.elem_unchecked(acc))
    }

    /// Formats a packed value as a polynomial in `w`.
    pub(crate) fn format_raw(&self, v: u64) -> String {
        if v == 0 {
            return "0".into();
        }
        let mut digits = [0u64; 64];
        self.unpack(v, &mut digits);
        let mut parts = Vec::new();
        for k in (0..self.d).rev() {
            let c = digits[k];
            if c == 0 {
                continue;
            }
            let part = match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "w".to_string(),
                (1, c) => format!("{c}*w"),
                (k, 1) => format!("w^{k}"),
                (k, c) => format!("{c}*w^{k}"),
            };
            parts.push(part);
        }
        parts.join("+")
    }

    // ---- subfields ---------------------------------------------------------

    fn embedding(&self, small: &FieldCtx) -> Result<Arc<Embedding>> {
        if small.p != self.p || !self.d.is_multiple_of(small.d) {
            return Err(Error::NotASubfield {
                small: small.size,
                big: self.size,
            });
        }
        if let Some(e) = self.embeddings.read().expect("lock").get(&small.modulus) {
            return Ok(Arc::clone(e));
        }
        let root = self.find_root(small)?;
        let mut root_powers = Vec::with_capacity(small.d);
        let mut x = 1u64;
        for _ in 0..small.d {
            root_powers.push(x);
            x = self.mul_raw(x, root);
        }
        let mut emb = Embedding {
            root_powers,
            inverse: HashMap::new(),
        };
        if small.size <= 1 << 16 {
            for v in 0..small.size {
                let img = self.apply_embedding(&emb, small, v);
                emb.inverse.insert(img, v);
            }
        }
        let emb = Arc::new(emb);
        self.embeddings
            .write()
            .expect("lock")
            .entry(small.modulus.clone())
            .or_insert_with(|| Arc::clone(&emb));
        Ok(emb)
    }

    /// Root of the small modulus inside `self`, found by scanning the
    /// subfield of size `small.size` (zero plus the powers of
    /// `g^((P-1)/(s-1))` for a primitive `g`).
    fn find_root(&self, small: &FieldCtx) -> Result<u64> {
        let eval = |y: u64| {
            small
                .modulus
                .iter()
                .rev()
                .fold(0u64, |acc, &c| self.add_raw(self.mul_raw(acc, y), c))
        };
        if small.d == 1 {
            // modulus X + c0 has the constant root -c0
            return Ok((self.p - small.modulus[0]) % self.p);
        }
        let g = self.primitive_raw();
        let h = self.pow_raw(g, (self.size - 1) / (small.size - 1));
        let mut y = 1u64;
        for _ in 0..small.size - 1 {
            if eval(y) == 0 {
                return Ok(y);
            }
            y = self.mul_raw(y, h);
        }
        Err(Error::Internal(format!(
            "no root of {:?} in F_{}",
            small.modulus, self.size
        )))
    }

    fn apply_embedding(&self, emb: &Embedding, small: &FieldCtx, v: u64) -> u64 {
        let mut digits = [0u64; 64];
        small.unpack(v, &mut digits);
        emb.root_powers
            .iter()
            .zip(digits.iter())
            .fold(0u64, |acc, (&rp, &c)| self.add_raw(acc, self.scale_raw(c, rp)))
    }

    /// Packed image of a packed element of `small` under the cached embedding.
    pub fn embed_raw(&self, small: &FieldCtx, v: u64) -> Result<u64> {
        let emb = self.embedding(small)?;
        Ok(self.apply_embedding(&emb, small, v))
    }

    /// Field homomorphism `F_{p^k} -> self`, found by root search and cached
    /// per pair of contexts.
    pub fn embed(self: &Arc<Self>, e: &FieldElem) -> Result<FieldElem> {
        if Arc::ptr_eq(self, &e.ctx) || **self == *e.ctx {
            return Ok(self.elem_unchecked(e.v));
        }
        let v = self.embed_raw(&e.ctx, e.v)?;
        Ok(self.elem_unchecked(v))
    }

    /// Preimage of `e` under the embedding of `small`, if it lies there.
    pub fn restrict(&self, e: &FieldElem, small: &Arc<FieldCtx>) -> Result<Option<FieldElem>> {
        e.check_ctx_of(self)?;
        let emb = self.embedding(small)?;
        if !emb.inverse.is_empty() {
            return Ok(emb.inverse.get(&e.v).map(|&v| small.elem_unchecked(v)));
        }
        Ok((0..small.size)
            .find(|&v| self.apply_embedding(&emb, small, v) == e.v)
            .map(|v| small.elem_unchecked(v)))
    }
}

fn parse_int(s: &str) -> Result<i64> {
    s.parse::<i64>()
        .map_err(|_| Error::Parse(format!("expected an integer, found `{s}`")))
}

/// `Tr_{F_{q^m}/F_q}(e) = sum_{i<m} e^{q^i}`, returned as an element of `sub`.
pub fn trace_to_subfield(e: &FieldElem, sub: &Arc<FieldCtx>) -> Result<FieldElem> {
    let big = e.ctx();
    let steps = subfield_steps(big, sub)?;
    let t = big.relative_trace_raw(e.v, sub.size, steps);
    big.restrict(&big.elem_unchecked(t), sub)?
        .ok_or_else(|| Error::Internal("trace left the subfield".into()))
}

/// True iff `y^q - y = d` has a solution in the field of `d`; there are then
/// exactly `q` of them.
pub fn artin_schreier_solvable(d: &FieldElem, sub: &Arc<FieldCtx>) -> Result<bool> {
    let big = d.ctx();
    let steps = subfield_steps(big, sub)?;
    Ok(big.relative_trace_raw(d.v, sub.size, steps) == 0)
}

fn subfield_steps(big: &FieldCtx, sub: &FieldCtx) -> Result<usize> {
    if big.p != sub.p || !big.d.is_multiple_of(sub.d) {
        return Err(Error::NotASubfield {
            small: sub.size,
            big: big.size,
        });
    }
    Ok(big.d / sub.d)
}

/// Element of a finite field.
///
/// Arithmetic operators panic when the operands come from different
/// contexts; the `try_*` methods return [`Error::ContextMismatch`] instead.
#[derive(Clone)]
pub struct FieldElem {
    ctx: Arc<FieldCtx>,
    v: u64,
}

impl FieldElem {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// Packed coefficient value.
    pub fn raw(&self) -> u64 {
        self.v
    }

    pub fn coeffs(&self) -> Vec<u64> {
        let mut d = vec![0u64; self.ctx.d];
        self.ctx.unpack(self.v, &mut d);
        d
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    pub fn is_one(&self) -> bool {
        self.v == 1
    }

    fn check_ctx_of(&self, ctx: &FieldCtx) -> Result<()> {
        if std::ptr::eq(Arc::as_ptr(&self.ctx), ctx) || *self.ctx == *ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn same(&self, other: &FieldElem) -> Result<()> {
        other.check_ctx_of(&self.ctx)
    }

    fn with(&self, v: u64) -> FieldElem {
        FieldElem {
            ctx: Arc::clone(&self.ctx),
            v,
        }
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(self.with(self.ctx.add_raw(self.v, other.v)))
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(self.with(self.ctx.sub_raw(self.v, other.v)))
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(self.with(self.ctx.mul_raw(self.v, other.v)))
    }

    pub fn try_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(self.with(self.ctx.div_raw(self.v, other.v)?))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(self.with(self.ctx.inv_raw(self.v)?))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.with(self.ctx.pow_raw(self.v, e))
    }

    /// `e -> e^p`.
    pub fn frobenius(&self) -> FieldElem {
        self.pow(self.ctx.p)
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && (Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx)
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.v.hash(state);
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ctx.format_raw(self.v))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ctx.format_raw(self.v))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$checked(rhs).expect("field context mismatch")
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$checked(&rhs).expect("field context mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.with(self.ctx.neg_raw(self.v))
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Arc<FieldCtx> {
        FieldCtx::new(2, 2, Some(vec![1, 1, 1])).unwrap()
    }

    #[test]
    fn make_field_examples() {
        let f2 = FieldCtx::prime_field(2).unwrap();
        assert_eq!(f2.size(), 2);
        assert_eq!(f4().size(), 4);
        let f9 = FieldCtx::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        assert_eq!(f9.size(), 9);
        // default modulus for F_9 is the smallest irreducible, X^2 + 1
        assert_eq!(FieldCtx::new(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FieldCtx::new(2, 2, None).unwrap().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn make_field_errors() {
        assert_eq!(FieldCtx::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert_eq!(
            FieldCtx::new(2, 2, Some(vec![1, 0, 1])).unwrap_err(),
            Error::ReducibleModulus(2)
        );
        assert_eq!(
            FieldCtx::new(2, 2, Some(vec![1, 1])).unwrap_err(),
            Error::BadModulus(2)
        );
        assert!(FieldCtx::new(2, 0, None).is_err());
    }

    #[test]
    fn arith_examples() {
        let f = f4();
        let w = f.generator();
        let w2 = &w * &w;
        assert!((&w * &w2).is_one());
        assert!(f.one().inv().unwrap().is_one());
        let f3 = FieldCtx::prime_field(3).unwrap();
        assert!((&f3.from_int(2) * &f3.from_int(2)).is_one());
        assert_eq!(f3.zero().inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = f4().generator();
        let b = FieldCtx::prime_field(2).unwrap().one();
        assert_eq!(a.try_add(&b).unwrap_err(), Error::ContextMismatch);
        assert_eq!(a.try_mul(&b).unwrap_err(), Error::ContextMismatch);
    }

    #[test]
    fn trace_examples() {
        let f = f4();
        let f2 = FieldCtx::prime_field(2).unwrap();
        assert!(trace_to_subfield(&f.one(), &f2).unwrap().is_zero());
        assert!(trace_to_subfield(&f.generator(), &f2).unwrap().is_one());
        let f9 = FieldCtx::new(3, 2, None).unwrap();
        let f3 = FieldCtx::prime_field(3).unwrap();
        assert_eq!(trace_to_subfield(&f9.one(), &f3).unwrap(), f3.from_int(2));
        let f8 = FieldCtx::new(2, 3, None).unwrap();
        assert!(matches!(
            trace_to_subfield(&f8.one(), &f),
            Err(Error::NotASubfield { .. })
        ));
    }

    #[test]
    fn artin_schreier_examples() {
        let f = f4();
        let f2 = FieldCtx::prime_field(2).unwrap();
        assert!(artin_schreier_solvable(&f.zero(), &f2).unwrap());
        assert!(artin_schreier_solvable(&f.one(), &f2).unwrap());
        let sols: Vec<_> = f
            .enumerate()
            .filter(|y| (&(y * y) - y).is_one())
            .collect();
        assert_eq!(sols, vec![f.generator(), &f.generator() * &f.generator()]);
        assert!(!artin_schreier_solvable(&f2.one(), &f2).unwrap());
    }

    #[test]
    fn enumerate_and_embed() {
        let f = f4();
        assert_eq!(f.enumerate().count(), 4);
        let f16 = FieldCtx::new(2, 4, None).unwrap();
        assert!(f16.embed(&f.one()).unwrap().is_one());
        let w = f16.embed(&f.generator()).unwrap();
        let w2 = f16.embed(&(&f.generator() * &f.generator())).unwrap();
        assert!((&w * &w2).is_one());
        assert_eq!(
            f16.restrict(&w, &f).unwrap().unwrap(),
            f.generator()
        );
    }

    #[test]
    fn parse_and_format() {
        let f9 = FieldCtx::new(3, 2, None).unwrap();
        for e in f9.enumerate() {
            assert_eq!(f9.parse_elem(&e.to_string()).unwrap(), e);
        }
        assert_eq!(f9.parse_elem("-1").unwrap(), f9.from_int(2));
        assert_eq!(f4().parse_elem("ω").unwrap(), f4().generator());
        assert!(FieldCtx::prime_field(3).unwrap().parse_elem("w").is_err());
    }

    #[test]
    fn primitive_modulus_search() {
        let f = smallest_primitive(2, 4).unwrap();
        assert_eq!(f, vec![1, 1, 0, 0, 1]);
        let ctx = FieldCtx::new(2, 4, Some(f)).unwrap();
        assert_eq!(ctx.primitive_raw(), ctx.generator_raw());
    }
}
