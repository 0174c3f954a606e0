//! Laurent polynomials `F_q[T, T^-1]` with the `T`-adic valuation, and points
//! of the projective line over them.
//!
//! The absolute value is only ever exposed through valuations:
//! `|x| < 1` iff `val(x) > 0` and `|x| > 1` iff `val(x) < 0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElem};

/// Valuation on the extended integers. `NegInfinity` only arises for the
/// point at infinity of the projective line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    NegInfinity,
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::NegInfinity => write!(f, "-inf"),
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// Finite-support Laurent polynomial over a finite field.
///
/// Terms are kept sorted by exponent with nonzero packed coefficients.
#[derive(Clone)]
pub struct LaurentPoly {
    ctx: Arc<FieldCtx>,
    terms: Vec<(i64, u64)>,
}

impl LaurentPoly {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        LaurentPoly {
            ctx: Arc::clone(ctx),
            terms: Vec::new(),
        }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        Self::monomial(&ctx.one(), 0)
    }

    pub fn constant(c: &FieldElem) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * T^k`.
    pub fn monomial(c: &FieldElem, k: i64) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(k, c.raw())]
        };
        LaurentPoly {
            ctx: Arc::clone(c.ctx()),
            terms,
        }
    }

    /// `T^k`.
    pub fn t_pow(ctx: &Arc<FieldCtx>, k: i64) -> Self {
        Self::monomial(&ctx.one(), k)
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add.
    pub fn from_terms(ctx: &Arc<FieldCtx>, terms: impl IntoIterator<Item = (i64, FieldElem)>) -> Result<Self> {
        let mut raw = Vec::new();
        for (k, c) in terms {
            if !Arc::ptr_eq(c.ctx(), ctx) && **c.ctx() != **ctx {
                return Err(Error::ContextMismatch);
            }
            raw.push((k, c.raw()));
        }
        Ok(Self::from_raw_terms(ctx, raw))
    }

    fn from_raw_terms(ctx: &Arc<FieldCtx>, mut raw: Vec<(i64, u64)>) -> Self {
        raw.sort_by_key(|t| t.0);
        let mut terms: Vec<(i64, u64)> = Vec::with_capacity(raw.len());
        for (k, c) in raw {
            match terms.last_mut() {
                Some(last) if last.0 == k => last.1 = ctx.add_raw(last.1, c),
                _ => terms.push((k, c)),
            }
        }
        terms.retain(|t| t.1 != 0);
        LaurentPoly {
            ctx: Arc::clone(ctx),
            terms,
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms == [(0, 1)]
    }

    /// Lowest exponent of the support; `Infinity` for zero.
    pub fn val(&self) -> Valuation {
        match self.terms.first() {
            Some(&(k, _)) => Valuation::Finite(k),
            None => Valuation::Infinity,
        }
    }

    /// Highest exponent of the support, `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `T^k`.
    pub fn coeff(&self, k: i64) -> FieldElem {
        let raw = self
            .terms
            .binary_search_by_key(&k, |t| t.0)
            .map(|i| self.terms[i].1)
            .unwrap_or(0);
        self.ctx.elem(raw).expect("stored coefficient is reduced")
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, FieldElem)> + '_ {
        self.terms
            .iter()
            .map(move |&(k, c)| (k, self.ctx.elem(c).expect("stored coefficient is reduced")))
    }

    /// True when the polynomial is `c * T^k` for a single term.
    pub fn as_monomial(&self) -> Option<(i64, FieldElem)> {
        match self.terms.as_slice() {
            [(k, c)] => Some((*k, self.ctx.elem(*c).expect("reduced"))),
            _ => None,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let ctx = &self.ctx;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let c = ctx.add_raw(a[i].1, b[j].1);
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Ok(LaurentPoly {
            ctx: Arc::clone(ctx),
            terms: out,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let ctx = &self.ctx;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(ctx));
        }
        let lo = self.terms[0].0 + other.terms[0].0;
        let hi = self.terms.last().expect("nonzero").0 + other.terms.last().expect("nonzero").0;
        let span = (hi - lo + 1) as usize;
        let mut acc = vec![0u64; span];
        for &(ka, ca) in &self.terms {
            for &(kb, cb) in &other.terms {
                let slot = &mut acc[(ka + kb - lo) as usize];
                *slot = ctx.add_raw(*slot, ctx.mul_raw(ca, cb));
            }
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .filter(|t| t.1 != 0)
            .map(|(i, c)| (lo + i as i64, c))
            .collect();
        Ok(LaurentPoly {
            ctx: Arc::clone(ctx),
            terms,
        })
    }

    /// Multiplies by the field scalar `c` (same context).
    pub fn scale(&self, c: &FieldElem) -> Result<Self> {
        self.try_mul(&Self::constant(c))
    }

    /// Multiplies by `T^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|&(e, c)| (e + k, c)).collect(),
        }
    }

    /// Inverse of a monomial unit `c T^k`; other elements have no inverse in
    /// the Laurent ring.
    pub fn monomial_inverse(&self) -> Option<Self> {
        let (k, c) = self.as_monomial()?;
        let inv = c.inv().ok()?;
        Some(Self::monomial(&inv, -k))
    }

    /// Parses the display grammar, e.g. `T^-1 + 1 + 2*T^3` or `(w+1)*T^2`.
    pub fn parse(ctx: &Arc<FieldCtx>, text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty Laurent literal".into()));
        }
        let mut parts = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        let bytes: Vec<char> = s.chars().collect();
        let mut offset = 0;
        for (i, &ch) in bytes.iter().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' if depth == 0 && i > 0 && bytes[i - 1] != '^' => {
                    parts.push(s[start..offset].to_string());
                    start = offset + 1;
                }
                _ => {}
            }
            offset += ch.len_utf8();
        }
        if depth != 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in `{text}`")));
        }
        parts.push(s[start..].to_string());
        let mut raw = Vec::new();
        for part in parts {
            if part.is_empty() {
                return Err(Error::Parse(format!("empty term in `{text}`")));
            }
            let (coef_str, exp) = match part.rfind('T') {
                Some(pos) => {
                    let rest = &part[pos + 1..];
                    let exp = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|e| e.parse::<i64>().ok())
                            .ok_or_else(|| Error::Parse(format!("bad exponent in `{part}`")))?
                    };
                    (part[..pos].trim_end_matches('*').to_string(), exp)
                }
                None => (part.clone(), 0),
            };
            let coef_str = coef_str
                .strip_prefix('(')
                .and_then(|c| c.strip_suffix(')'))
                .map(str::to_string)
                .unwrap_or(coef_str);
            let coef = if coef_str.is_empty() {
                ctx.one()
            } else if coef_str == "-" {
                -ctx.one()
            } else {
                ctx.parse_elem(&coef_str)?
            };
            raw.push((exp, coef.raw()));
        }
        Ok(Self::from_raw_terms(ctx, raw))
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx)
    }
}

impl Eq for LaurentPoly {}

impl std::hash::Hash for LaurentPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let p = self.ctx.p();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|&(k, c)| {
                let coef = if c < p {
                    c.to_string()
                } else {
                    format!("({})", self.ctx.format_raw(c))
                };
                let mono = match k {
                    0 => return coef,
                    1 => "T".to_string(),
                    k => format!("T^{k}"),
                };
                if c == 1 {
                    mono
                } else {
                    format!("{coef}*{mono}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .map(|&(k, c)| (k, self.ctx.neg_raw(c)))
                .collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("field context mismatch")
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$checked(&rhs).expect("field context mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

/// Point `[z0 : z1]` of the projective line over the Laurent ring.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    pub z0: LaurentPoly,
    pub z1: LaurentPoly,
}

impl ProjPoint {
    pub fn new(z0: LaurentPoly, z1: LaurentPoly) -> Result<Self> {
        z0.check(&z1)?;
        if z0.is_zero() && z1.is_zero() {
            return Err(Error::InvalidParameter("[0:0] is not a projective point".into()));
        }
        Ok(ProjPoint { z0, z1 })
    }

    /// The affine point `[z : 1]`.
    pub fn affine(z: LaurentPoly) -> Self {
        let one = LaurentPoly::one(z.ctx());
        ProjPoint { z0: z, z1: one }
    }

    /// The point `[1 : 0]`.
    pub fn infinity(ctx: &Arc<FieldCtx>) -> Self {
        ProjPoint {
            z0: LaurentPoly::one(ctx),
            z1: LaurentPoly::zero(ctx),
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.z1.is_zero()
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        &self.z0 * &other.z1 == &self.z1 * &other.z0
    }
}

impl Eq for ProjPoint {}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}]", self.z0, self.z1)
    }
}

/// Valuation of the affine coordinate `z0/z1`; `NegInfinity` at `[1:0]`.
pub fn proj_val(z: &ProjPoint) -> Valuation {
    match (z.z0.val(), z.z1.val()) {
        (_, Valuation::Infinity) => Valuation::NegInfinity,
        (Valuation::Infinity, _) => Valuation::Infinity,
        (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
        _ => unreachable!("Laurent valuations are never -inf"),
    }
}

/// Whether `z` lies on the circle `{ val(z - center) = radius_val }`,
/// computed as `val(z0 - center * z1) - val(z1)`.
pub fn on_circle(z: &ProjPoint, center: &LaurentPoly, radius_val: i64) -> Result<bool> {
    if z.is_infinity() {
        return Err(Error::PointAtInfinity);
    }
    let diff = z.z0.try_sub(&center.try_mul(&z.z1)?)?;
    let v = match (diff.val(), z.z1.val()) {
        (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
        (Valuation::Infinity, _) => Valuation::Infinity,
        _ => unreachable!("z1 is nonzero"),
    };
    Ok(v == Valuation::Finite(radius_val))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Arc<FieldCtx> {
        FieldCtx::prime_field(2).unwrap()
    }

    fn f3() -> Arc<FieldCtx> {
        FieldCtx::prime_field(3).unwrap()
    }

    #[test]
    fn valuation_examples() {
        let k = f3();
        let x = LaurentPoly::parse(&k, "T^-1 + 1").unwrap();
        assert_eq!(x.val(), Valuation::Finite(-1));
        let prod = &LaurentPoly::t_pow(&k, -1) * &LaurentPoly::t_pow(&k, 1);
        assert!(prod.is_one());
        let k2 = f2();
        let y = LaurentPoly::parse(&k2, "1 + T").unwrap();
        let s = &y + &y;
        assert!(s.is_zero());
        assert_eq!(s.val(), Valuation::Infinity);
    }

    #[test]
    fn proj_val_examples() {
        let k = f3();
        let one = LaurentPoly::one(&k);
        assert_eq!(proj_val(&ProjPoint::affine(one)), Valuation::Finite(0));
        assert_eq!(proj_val(&ProjPoint::infinity(&k)), Valuation::NegInfinity);
        let p = ProjPoint::affine(LaurentPoly::t_pow(&k, -1));
        assert_eq!(proj_val(&p), Valuation::Finite(-1));
        let origin = ProjPoint::affine(LaurentPoly::zero(&k));
        assert_eq!(proj_val(&origin), Valuation::Infinity);
    }

    #[test]
    fn on_circle_examples() {
        let k = f3();
        let zero = LaurentPoly::zero(&k);
        let one = ProjPoint::affine(LaurentPoly::one(&k));
        assert!(on_circle(&one, &zero, 0).unwrap());
        let t = ProjPoint::affine(LaurentPoly::t_pow(&k, 1));
        assert!(!on_circle(&t, &zero, 0).unwrap());
        let z = ProjPoint::affine(LaurentPoly::parse(&k, "T^-1 + 1").unwrap());
        assert!(on_circle(&z, &LaurentPoly::t_pow(&k, -1), 0).unwrap());
        assert_eq!(
            on_circle(&ProjPoint::infinity(&k), &zero, 0).unwrap_err(),
            Error::PointAtInfinity
        );
    }

    #[test]
    fn display_grammar() {
        let k = f3();
        let x = LaurentPoly::parse(&k, "T^-1 + 1 + 2*T^3").unwrap();
        assert_eq!(x.to_string(), "T^-1 + 1 + 2*T^3");
        assert_eq!(LaurentPoly::zero(&k).to_string(), "0");
        assert_eq!(LaurentPoly::parse(&k, "T").unwrap().to_string(), "T");
        assert_eq!(LaurentPoly::parse(&k, "2*T^1").unwrap().to_string(), "2*T");
        let f4 = FieldCtx::new(2, 2, None).unwrap();
        let y = LaurentPoly::parse(&f4, "(w+1)*T^-2 + w").unwrap();
        assert_eq!(y.to_string(), "(w+1)*T^-2 + (w)");
        assert_eq!(LaurentPoly::parse(&f4, &y.to_string()).unwrap(), y);
        assert!(LaurentPoly::parse(&k, "T^x").is_err());
        assert!(LaurentPoly::parse(&k, "1 +").is_err());
    }

    #[test]
    fn proj_point_equality_is_projective() {
        let k = f3();
        let z = ProjPoint::affine(LaurentPoly::parse(&k, "T^-1 + 2").unwrap());
        let s = LaurentPoly::parse(&k, "1 + T^2").unwrap();
        let scaled = ProjPoint::new(&z.z0 * &s, &z.z1 * &s).unwrap();
        assert_eq!(z, scaled);
        assert!(ProjPoint::new(LaurentPoly::zero(&k), LaurentPoly::zero(&k)).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Vec<(i64, u64)>> {
        prop::collection::vec((-6i64..6, 0u64..3), 0..5)
    }

    fn build(terms: Vec<(i64, u64)>) -> LaurentPoly {
        let k = f3();
        LaurentPoly::from_terms(&k, terms.into_iter().map(|(e, c)| (e, k.from_int(c as i64)))).unwrap()
    }

    proptest! {
        #[test]
        fn ultrametric(a in arb_poly(), b in arb_poly()) {
            let (x, y) = (build(a), build(b));
            let s = &x + &y;
            prop_assert!(s.val() >= x.val().min(y.val()));
            if x.val() != y.val() {
                prop_assert_eq!(s.val(), x.val().min(y.val()));
            }
        }

        #[test]
        fn valuation_is_additive(a in arb_poly(), b in arb_poly()) {
            let (x, y) = (build(a), build(b));
            let prod = &x * &y;
            match (x.val(), y.val()) {
                (Valuation::Finite(u), Valuation::Finite(v)) => prop_assert_eq!(prod.val(), Valuation::Finite(u + v)),
                _ => prop_assert!(prod.is_zero()),
            }
        }

        #[test]
        fn display_round_trip(a in arb_poly()) {
            let x = build(a);
            let k = f3();
            prop_assert_eq!(LaurentPoly::parse(&k, &x.to_string()).unwrap(), x);
        }

        #[test]
        fn proj_equality_invariant_under_scaling(a in arb_poly(), b in arb_poly(), s in arb_poly()) {
            let (x, y, s) = (build(a), build(b), build(s));
            prop_assume!(!(x.is_zero() && y.is_zero()) && !s.is_zero());
            let z = ProjPoint::new(x.clone(), y.clone()).unwrap();
            let w = ProjPoint::new(&x * &s, &y * &s).unwrap();
            prop_assert_eq!(&z, &w);
            prop_assert_eq!(&w, &z);
        }
    }
}
