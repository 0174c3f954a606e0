//! The curves `X_{t,c} : (y^q - y)(x^q - x) = c` over `F_q`, `q = p^t`.
//!
//! The smooth model has the affine points plus `2q` points at infinity: over
//! `z = x^q - x = inf` the `x`-cover is totally ramified while `y^q - y = 0`
//! splits into `q` rational points, and symmetrically over `z = 0`. Those
//! points are rational over every extension of `F_q`, so
//! `N_m = #affine(F_{q^m}) + 2q`. [`tower_count`] recomputes the same number
//! fibre by fibre over the `z`-line as an independent check.

mod kernel;
pub mod zeta;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{check_budget, Error, Result};
use crate::ff::{artin_schreier_solvable, FieldCtx, FieldElem};
use crate::laurent::{LaurentPoly, Valuation};

pub use zeta::{
    lpoly_from_counts, predict_count, search_genus, verify_genus, weil_check, GenusOptions,
    GenusReport, LPolynomial,
};

pub const DEFAULT_COUNT_BUDGET: u128 = 100_000_000;

/// A member of the family over a finite field: `c` lives in `F_q^*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveParams {
    p: u64,
    t: usize,
    c: FieldElem,
}

impl CurveParams {
    pub fn new(p: u64, t: usize, c: FieldElem) -> Result<Self> {
        let field = FieldCtx::new(p, t, None)?;
        if **c.ctx() != *field {
            return Err(Error::ContextMismatch);
        }
        if c.is_zero() {
            return Err(Error::InvalidParameter("c = 0 is the singular fibre".into()));
        }
        Ok(CurveParams { p, t, c })
    }

    /// Parses `c` as an element of `F_{p^t}` (polynomial in `w`).
    pub fn from_literal(p: u64, t: usize, c: &str) -> Result<Self> {
        let field = FieldCtx::new(p, t, None)?;
        let c = field.parse_elem(c)?;
        Self::new(p, t, c)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn q(&self) -> u64 {
        self.field().size()
    }

    pub fn c(&self) -> &FieldElem {
        &self.c
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        self.c.ctx()
    }

    /// The genus `(q-1)^2`.
    pub fn genus(&self) -> usize {
        let q = self.q() as usize;
        (q - 1) * (q - 1)
    }

    /// `F_{q^m}`, with the default modulus.
    pub fn extension(&self, m: usize) -> Result<Arc<FieldCtx>> {
        if m == 0 {
            return Err(Error::InvalidDegree(0));
        }
        FieldCtx::new(self.p, self.t * m, None)
    }

    /// `q^m`, or `None` on overflow.
    pub fn ext_size(&self, m: usize) -> Option<u128> {
        (self.q() as u128).checked_pow(m as u32)
    }
}

/// The curve over a non-archimedean base `F_q((T))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MumfordParams {
    pub p: u64,
    pub t: usize,
    pub c: LaurentPoly,
}

impl MumfordParams {
    pub fn new(p: u64, t: usize, c: LaurentPoly) -> Result<Self> {
        if c.ctx().p() != p || c.ctx().degree() != t {
            return Err(Error::ContextMismatch);
        }
        if !mumford_condition(&c) {
            return Err(Error::InvalidParameter(format!(
                "c = {c} is not in the punctured unit disc"
            )));
        }
        Ok(MumfordParams { p, t, c })
    }
}

/// `0 < |c| < 1`, i.e. `c != 0` and `val(c) > 0`.
pub fn mumford_condition(c: &LaurentPoly) -> bool {
    match c.val() {
        Valuation::Infinity => {
            log::warn!("c = 0 is the degenerate fibre");
            false
        }
        Valuation::Finite(v) => v > 0,
        Valuation::NegInfinity => false,
    }
}

/// A point of the smooth model over some `F_{q^m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Affine { x: FieldElem, y: FieldElem },
    /// Over `z = inf`: `x = inf`, residue `y0 in F_q`.
    XInfty(FieldElem),
    /// Over `z = 0`: `y = inf`, residue `x0 in F_q`.
    YInfty(FieldElem),
}

impl CurvePoint {
    pub fn is_valid(&self, params: &CurveParams) -> bool {
        match self {
            CurvePoint::Affine { x, y } => {
                let q = params.q();
                if x.ctx() != y.ctx() {
                    return false;
                }
                let Ok(c) = x.ctx().embed(params.c()) else {
                    return false;
                };
                let lhs = (y.pow(q) - y.clone()) * (x.pow(q) - x.clone());
                lhs == c
            }
            CurvePoint::XInfty(r) | CurvePoint::YInfty(r) => r.ctx() == params.field(),
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
            CurvePoint::XInfty(y0) => write!(f, "(inf, {y0})"),
            CurvePoint::YInfty(x0) => write!(f, "({x0}, inf)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Naive,
    Trace,
}

/// `x -> x^q - x` on every packed element of `big`.
fn wp_table(big: &FieldCtx, q: u64) -> Vec<u64> {
    (0..big.size())
        .map(|v| big.sub_raw(big.pow_raw(v, q), v))
        .collect()
}

/// Number of `(x, y) in F_{q^m}^2` on the affine curve.
pub fn count_affine(params: &CurveParams, m: usize, method: CountMethod, budget: u128) -> Result<u64> {
    let size = params.ext_size(m).ok_or(Error::BudgetExceeded {
        needed: u128::MAX,
        budget,
    })?;
    match method {
        CountMethod::Naive => {
            check_budget(size.saturating_mul(size), budget)?;
            let big = params.extension(m)?;
            let c = big.embed(params.c())?.raw();
            let wp = wp_table(&big, params.q());
            let mut n = 0u64;
            for &sx in wp.iter().filter(|&&s| s != 0) {
                n += wp.iter().filter(|&&sy| big.mul_raw(sy, sx) == c).count() as u64;
            }
            Ok(n)
        }
        CountMethod::Trace => {
            check_budget(size, budget)?;
            let walk = kernel::TraceWalk::new(params.c(), m)?;
            let q = params.q();
            Ok(walk.count() * q * q)
        }
    }
}

/// `N_m`: affine points plus the `2q` points at infinity.
pub fn count_points(params: &CurveParams, m: usize, budget: u128) -> Result<u64> {
    Ok(count_affine(params, m, CountMethod::Trace, budget)? + 2 * params.q())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerCount {
    /// Contribution of `z in F_{q^m}^*`.
    pub finite: u64,
    pub at_zero: u64,
    pub at_infinity: u64,
    pub total: u64,
}

/// Counts points fibre by fibre over the `z`-line of the two covers
/// `x^q - x = z`, `y^q - y = c/z`.
pub fn tower_count(params: &CurveParams, m: usize, budget: u128) -> Result<TowerCount> {
    let size = params.ext_size(m).ok_or(Error::BudgetExceeded {
        needed: u128::MAX,
        budget,
    })?;
    check_budget(size, budget)?;
    let q = params.q();
    let big = params.extension(m)?;
    let c = big.embed(params.c())?;
    let sub = params.field();
    let mut finite = 0u64;
    for z in big.enumerate().skip(1) {
        let cz = c.try_div(&z)?;
        if artin_schreier_solvable(&z, sub)? && artin_schreier_solvable(&cz, sub)? {
            finite += q * q;
        }
    }
    // Over z = inf the x-cover has a single point; the y-fibre is y^q = y.
    let split = big.enumerate().filter(|y| y.pow(q) == *y).count() as u64;
    let at_infinity = split;
    let at_zero = split;
    Ok(TowerCount {
        finite,
        at_zero,
        at_infinity,
        total: finite + at_zero + at_infinity,
    })
}

/// All points over `F_{q^m}`, affine ones grouped by `x`.
pub fn rational_points(params: &CurveParams, m: usize, budget: u128) -> Result<Vec<CurvePoint>> {
    let size = params.ext_size(m).ok_or(Error::BudgetExceeded {
        needed: u128::MAX,
        budget,
    })?;
    check_budget(size, budget)?;
    let q = params.q();
    let big = params.extension(m)?;
    let c = big.embed(params.c())?.raw();
    let wp = wp_table(&big, q);
    let mut fibres: HashMap<u64, Vec<u64>> = HashMap::new();
    for (y, &s) in wp.iter().enumerate() {
        fibres.entry(s).or_default().push(y as u64);
    }
    let mut out = Vec::new();
    for (x, &s) in wp.iter().enumerate() {
        if s == 0 {
            continue;
        }
        let target = big.div_raw(c, s)?;
        if let Some(ys) = fibres.get(&target) {
            for &y in ys {
                out.push(CurvePoint::Affine {
                    x: big.elem(x as u64)?,
                    y: big.elem(y)?,
                });
            }
        }
    }
    for r in params.field().enumerate() {
        out.push(CurvePoint::XInfty(r.clone()));
        out.push(CurvePoint::YInfty(r));
    }
    Ok(out)
}
