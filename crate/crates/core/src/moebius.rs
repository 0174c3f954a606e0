//! Elements of `PGL(2, k)` with Laurent-polynomial entries.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElem};
use crate::laurent::{LaurentPoly, ProjPoint, Valuation};

/// The matrix `[[a, b], [c, d]]` up to a nonzero scalar.
#[derive(Clone)]
pub struct Mobius {
    pub a: LaurentPoly,
    pub b: LaurentPoly,
    pub c: LaurentPoly,
    pub d: LaurentPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MobiusClass {
    Identity,
    Hyperbolic,
    NonHyperbolic,
}

impl Mobius {
    pub fn new(a: LaurentPoly, b: LaurentPoly, c: LaurentPoly, d: LaurentPoly) -> Result<Self> {
        let m = Mobius { a, b, c, d };
        if m.try_det()?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(m)
    }

    pub fn identity(ctx: &Arc<FieldCtx>) -> Self {
        Mobius {
            a: LaurentPoly::one(ctx),
            b: LaurentPoly::zero(ctx),
            c: LaurentPoly::zero(ctx),
            d: LaurentPoly::one(ctx),
        }
    }

    /// `[[1, v], [0, 1]]`.
    pub fn translation(v: &LaurentPoly) -> Self {
        let ctx = v.ctx();
        Mobius {
            a: LaurentPoly::one(ctx),
            b: v.clone(),
            c: LaurentPoly::zero(ctx),
            d: LaurentPoly::one(ctx),
        }
    }

    /// `[[u, 0], [0, 1]]` for a nonzero constant `u`.
    pub fn diagonal(u: &FieldElem) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::Singular);
        }
        let ctx = u.ctx();
        Ok(Mobius {
            a: LaurentPoly::constant(u),
            b: LaurentPoly::zero(ctx),
            c: LaurentPoly::zero(ctx),
            d: LaurentPoly::one(ctx),
        })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.a.ctx()
    }

    fn try_det(&self) -> Result<LaurentPoly> {
        self.a.try_mul(&self.d)?.try_sub(&self.b.try_mul(&self.c)?)
    }

    pub fn det(&self) -> LaurentPoly {
        self.try_det().expect("entries share a context")
    }

    pub fn trace(&self) -> LaurentPoly {
        &self.a + &self.d
    }

    /// Matrix product `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Mobius) -> Result<Mobius> {
        let (m, n) = (self, other);
        let a = m.a.try_mul(&n.a)?.try_add(&m.b.try_mul(&n.c)?)?;
        let b = m.a.try_mul(&n.b)?.try_add(&m.b.try_mul(&n.d)?)?;
        let c = m.c.try_mul(&n.a)?.try_add(&m.d.try_mul(&n.c)?)?;
        let d = m.c.try_mul(&n.b)?.try_add(&m.d.try_mul(&n.d)?)?;
        Ok(Mobius { a, b, c, d })
    }

    /// Adjugate `[[d, -b], [-c, a]]`, projectively the inverse.
    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// `[a z0 + b z1 : c z0 + d z1]`.
    pub fn act(&self, z: &ProjPoint) -> Result<ProjPoint> {
        let z0 = self.a.try_mul(&z.z0)?.try_add(&self.b.try_mul(&z.z1)?)?;
        let z1 = self.c.try_mul(&z.z0)?.try_add(&self.d.try_mul(&z.z1)?)?;
        ProjPoint::new(z0, z1)
    }

    fn entries(&self) -> [&LaurentPoly; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// `self = lambda * other` for some nonzero scalar, checked by vanishing
    /// of every 2x2 minor of the two entry vectors.
    pub fn proj_eq(&self, other: &Mobius) -> bool {
        let x = self.entries();
        let y = other.entries();
        (0..4).all(|i| (i + 1..4).all(|j| x[i] * y[j] == x[j] * y[i]))
    }

    pub fn is_scalar(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// Identity if projectively scalar; otherwise hyperbolic iff
    /// `val(tr^2) < val(det)`, i.e. `|tr^2 / det| > 1`.
    pub fn classify(&self) -> MobiusClass {
        if self.is_scalar() {
            return MobiusClass::Identity;
        }
        let tr = self.trace();
        let tr2 = &tr * &tr;
        let det = self.det();
        match (tr2.val(), det.val()) {
            (Valuation::Finite(t), Valuation::Finite(d)) if t < d => MobiusClass::Hyperbolic,
            _ => MobiusClass::NonHyperbolic,
        }
    }

    /// Projectively equal matrix with the common monomial content removed:
    /// all entries divided by `c T^k`, where `k` is the least valuation among
    /// the entries and `c` the matching coefficient of the first entry
    /// attaining it.
    pub fn normalized(&self) -> Mobius {
        let lead = self
            .entries()
            .iter()
            .filter_map(|e| e.val().finite().map(|k| (k, e.coeff(k))))
            .min_by_key(|t| t.0);
        let Some((k, c)) = lead else {
            return self.clone();
        };
        let inv = c.inv().expect("leading coefficient is nonzero");
        let unit = LaurentPoly::monomial(&inv, -k);
        Mobius {
            a: &self.a * &unit,
            b: &self.b * &unit,
            c: &self.c * &unit,
            d: &self.d * &unit,
        }
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
