//! The bound `F(g) = 2 sqrt(g) (sqrt(g) + 1)^2` against `12(g - 1)`.
//!
//! Expanding, `F(g) = 4g + 2(g + 1) sqrt(g) = 4g + sqrt(4 (g + 1)^2 g)`, so
//! `F(g)` is an integer exactly when `g` is a square and otherwise lies
//! strictly between `4g + isqrt(4 (g + 1)^2 g)` and the next integer.
//! Also `F(g) - 12(g - 1) = 2 (sqrt(g) + 1)(sqrt(g) - 2)(sqrt(g) - 3)`, which
//! vanishes at `g = 4, 9` and is negative exactly for `g = 5..=8`.

use num_integer::Roots;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::is_prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bracket {
    pub floor: u128,
    pub ceil: u128,
}

/// An exact real number that is either an integer or an irrational with an
/// isolating integer bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ExactValue {
    Integer(u128),
    Irrational { irrational: Bracket },
}

impl ExactValue {
    pub fn as_integer(&self) -> Option<u128> {
        match self {
            ExactValue::Integer(n) => Some(*n),
            ExactValue::Irrational { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    Less,
    Equal,
    Greater,
}

pub fn f_bound(g: u64) -> Result<ExactValue> {
    if g < 1 {
        return Err(Error::InvalidParameter("g must be at least 1".into()));
    }
    let g = g as u128;
    let radicand = (g + 1)
        .checked_mul(g + 1)
        .and_then(|x| x.checked_mul(4 * g))
        .ok_or_else(|| Error::InvalidParameter(format!("g = {g} is too large")))?;
    let r = radicand.sqrt();
    let floor = 4 * g + r;
    Ok(if r * r == radicand {
        ExactValue::Integer(floor)
    } else {
        ExactValue::Irrational {
            irrational: Bracket {
                floor,
                ceil: floor + 1,
            },
        }
    })
}

/// Sign of `F(g) - 12(g - 1)`.
pub fn compare(g: u64) -> Result<Comparison> {
    if g < 2 {
        return Err(Error::InvalidParameter("g must be at least 2".into()));
    }
    Ok(match g {
        4 | 9 => Comparison::Equal,
        5..=8 => Comparison::Less,
        _ => Comparison::Greater,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub g: u64,
    pub twelve: u128,
    pub comparison: Comparison,
    pub max_bound: ExactValue,
    #[serde(rename = "F_exact")]
    pub f_exact: ExactValue,
}

pub fn bound_report(g: u64) -> Result<BoundReport> {
    let comparison = compare(g)?;
    let f = f_bound(g)?;
    let twelve = 12 * (g as u128 - 1);
    let max_bound = match comparison {
        Comparison::Greater => f,
        _ => ExactValue::Integer(twelve),
    };
    Ok(BoundReport {
        g,
        twelve,
        comparison,
        max_bound,
        f_exact: f,
    })
}

/// The `t` with `g = (p^t - 1)^2`, if any.
pub fn admissible(g: u64, p: u64) -> Result<Option<u32>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if g < 1 {
        return Err(Error::InvalidParameter("g must be at least 1".into()));
    }
    let s = g.sqrt();
    if s * s != g {
        return Ok(None);
    }
    let mut n = s + 1;
    let mut t = 0;
    while n.is_multiple_of(p) {
        n /= p;
        t += 1;
    }
    Ok((n == 1 && t >= 1).then_some(t))
}

fn q_of(p: u64, t: u32) -> Result<u128> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if t < 1 {
        return Err(Error::InvalidDegree(0));
    }
    (p as u128)
        .checked_pow(t)
        .filter(|&q| q < 1 << 40)
        .ok_or(Error::FieldTooLarge { p, d: t as usize })
}

/// `(p^t - 1)^2`.
pub fn genus_formula(p: u64, t: u32) -> Result<u128> {
    let q = q_of(p, t)?;
    Ok((q - 1) * (q - 1))
}

/// `2 p^{2t} (p^t - 1)`, the order of `Z_p^{2t} x| D_{p^t - 1}`.
pub fn aut_order_formula(p: u64, t: u32) -> Result<u128> {
    let q = q_of(p, t)?;
    Ok(2 * q * q * (q - 1))
}
