//! Orbits and stabilizers of `A_t` on the rational points of `X_{t,c}`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Serialize, Serializer};

use super::{AutElem, AutGroup};
use crate::curve::{rational_points, CurveParams, CurvePoint};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Trivial,
    Z2,
    /// `Z_p^t x| Z_n`.
    B { t: usize, n: u64 },
    Other(String),
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Trivial => write!(f, "trivial"),
            Shape::Z2 => write!(f, "Z2"),
            Shape::B { t, n } => write!(f, "B({t},{n})"),
            Shape::Other(d) => write!(f, "other({d})"),
        }
    }
}

impl Serialize for Shape {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerTag {
    pub order: usize,
    pub shape: Shape,
}

/// `B(t, q-1)` needs order `q(q-1)` and a normal elementary abelian subgroup
/// of order `q`; since `q - 1` is prime to `p` that subgroup is the set of
/// elements with `h^p = 1`.
fn classify(stab: &[AutElem], p: u64, t: usize) -> StabilizerTag {
    let order = stab.len();
    let q = p.pow(t as u32);
    let shape = if order == 1 {
        Shape::Trivial
    } else if order as u64 == q * (q - 1) && has_normal_sylow(stab, p, q) {
        Shape::B { t, n: q - 1 }
    } else if order == 2 {
        Shape::Z2
    } else {
        Shape::Other(format!("order {order}"))
    };
    StabilizerTag { order, shape }
}

fn has_normal_sylow(h: &[AutElem], p: u64, q: u64) -> bool {
    let sylow: Vec<&AutElem> = h
        .iter()
        .filter(|x| x.is_identity() || x.order() == p)
        .collect();
    if sylow.len() as u64 != q {
        return false;
    }
    let keys: HashSet<u64> = sylow.iter().map(|x| x.key()).collect();
    let closed = sylow
        .iter()
        .all(|x| sylow.iter().all(|y| keys.contains(&x.compose(y).unwrap().key())));
    let abelian = sylow
        .iter()
        .all(|x| sylow.iter().all(|y| x.compose(y).unwrap() == y.compose(x).unwrap()));
    let normal = h.iter().all(|g| {
        let gi = g.inverse();
        sylow
            .iter()
            .all(|n| keys.contains(&g.compose(n).unwrap().compose(&gi).unwrap().key()))
    });
    closed && abelian && normal
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusOrbit {
    pub orbit_size: usize,
    pub representative: String,
    pub stabilizer: StabilizerTag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerCensus {
    pub m: usize,
    pub points: usize,
    pub orbits: usize,
    /// Orbits with nontrivial stabilizer.
    pub special: Vec<CensusOrbit>,
    pub orbit_stabilizer_ok: bool,
}

/// Orbit decomposition of `X(F_{q^m})` including the points at infinity.
pub fn stabilizer_census(params: &CurveParams, group: &AutGroup, m: usize, budget: u128) -> Result<StabilizerCensus> {
    if group.field() != params.field() {
        return Err(Error::ContextMismatch);
    }
    let pts = rational_points(params, m, budget)?;
    let index: HashMap<&CurvePoint, usize> = pts.iter().enumerate().map(|(i, pt)| (pt, i)).collect();
    let mut seen = vec![false; pts.len()];
    let mut special = Vec::new();
    let mut orbits = 0;
    let mut ok = true;
    let mut covered = 0;
    for (i, pt) in pts.iter().enumerate() {
        if seen[i] {
            continue;
        }
        orbits += 1;
        let mut orbit = HashSet::new();
        let mut stab = Vec::new();
        for phi in group.elements() {
            let img = phi.act(pt)?;
            let j = *index
                .get(&img)
                .ok_or_else(|| Error::Internal(format!("{img} is not a point of the curve")))?;
            if j == i {
                stab.push(phi.clone());
            }
            if orbit.insert(j) {
                seen[j] = true;
            }
        }
        covered += orbit.len();
        ok &= orbit.len() * stab.len() == group.order() && group.order().is_multiple_of(orbit.len());
        if stab.len() > 1 {
            special.push(CensusOrbit {
                orbit_size: orbit.len(),
                representative: pt.to_string(),
                stabilizer: classify(&stab, group.p(), group.t()),
            });
        }
    }
    ok &= covered == pts.len();
    special.sort_by_key(|o| (o.stabilizer.order, o.representative.clone()));
    Ok(StabilizerCensus {
        m,
        points: pts.len(),
        orbits,
        special,
        orbit_stabilizer_ok: ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusSearch {
    pub p: u64,
    pub t: usize,
    pub c: String,
    pub expected_branch_points: usize,
    pub expected_orders: Vec<usize>,
    pub tried: Vec<usize>,
    /// Degree at which the expected branch count was reached.
    pub m: Option<usize>,
    pub orders: Vec<usize>,
    pub census: Option<StabilizerCensus>,
    pub pass: bool,
}

/// Raises `m` until the number of orbits with nontrivial stabilizer reaches
/// the expected branch count (3 for odd `p`, 2 for `p = 2`).
pub fn census_search(params: &CurveParams, group: &AutGroup, m_max: usize, budget: u128) -> Result<CensusSearch> {
    let q = params.q() as usize;
    let p = params.p();
    let borel = q * (q - 1);
    let mut expected_orders = if p == 2 { vec![2, borel] } else { vec![2, 2, borel] };
    expected_orders.sort_unstable();
    let expected_branch_points = expected_orders.len();
    let mut tried = Vec::new();
    let mut found = None;
    for m in 1..=m_max {
        match params.ext_size(m) {
            Some(s) if s <= budget => {}
            _ => break,
        }
        tried.push(m);
        let census = stabilizer_census(params, group, m, budget)?;
        log::info!("census m = {m}: {} points, {} special orbits", census.points, census.special.len());
        if census.special.len() >= expected_branch_points {
            found = Some(census);
            break;
        }
    }
    let (orders, pass) = match &found {
        Some(c) => {
            let mut orders: Vec<usize> = c.special.iter().map(|o| o.stabilizer.order).collect();
            orders.sort_unstable();
            let borel_ok = c
                .special
                .iter()
                .any(|o| matches!(o.stabilizer.shape, Shape::B { .. }) && o.stabilizer.order == borel);
            let pass = orders == expected_orders && borel_ok && c.orbit_stabilizer_ok;
            (orders, pass)
        }
        None => (Vec::new(), false),
    };
    Ok(CensusSearch {
        p,
        t: params.t(),
        c: params.c().to_string(),
        expected_branch_points,
        expected_orders,
        tried,
        m: found.as_ref().map(|c| c.m),
        orders,
        census: found,
        pass,
    })
}
