//! The group `A_t = Z_p^{2t} x| D_{q-1}` acting on `X_{t,c}` by coordinate maps.
//!
//! An [`AutElem`] `(a, b, u, swap)` is the map
//! `(x, y) -> (u x~ + a, u^-1 y~ + b)` with `(x~, y~) = (y, x)` when `swap` is
//! set. Composition `phi o psi` applies `psi` first; for
//! `phi = (a, b, u, s)` and `psi = (a', b', u', s')` it works out to
//!
//! ```text
//! s = 0:  (u a' + a,  u^-1 b' + b,  u u',     s')
//! s = 1:  (u b' + a,  u^-1 a' + b,  u u'^-1,  not s')
//! ```

mod census;

pub use census::{
    census_search, stabilizer_census, CensusOrbit, CensusSearch, Shape, StabilizerCensus,
    StabilizerTag,
};

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::curve::{CurveParams, CurvePoint};
use crate::error::{check_budget, Error, Result};
use crate::ff::{FieldCtx, FieldElem};
use crate::report::{all_pass, Check};

pub const DEFAULT_GROUP_BUDGET: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AutElem {
    pub a: FieldElem,
    pub b: FieldElem,
    pub u: FieldElem,
    pub swap: bool,
}

impl AutElem {
    pub fn new(a: FieldElem, b: FieldElem, u: FieldElem, swap: bool) -> Result<Self> {
        if a.ctx() != b.ctx() || a.ctx() != u.ctx() {
            return Err(Error::ContextMismatch);
        }
        if u.is_zero() {
            return Err(Error::InvalidParameter("u must be nonzero".into()));
        }
        Ok(AutElem { a, b, u, swap })
    }

    pub fn identity(ctx: &Arc<FieldCtx>) -> Self {
        AutElem {
            a: ctx.zero(),
            b: ctx.zero(),
            u: ctx.one(),
            swap: false,
        }
    }

    /// `sigma_{a,b}: (x, y) -> (x + a, y + b)`.
    pub fn translation(a: &FieldElem, b: &FieldElem) -> Result<Self> {
        Self::new(a.clone(), b.clone(), a.ctx().one(), false)
    }

    /// `tau_u: (x, y) -> (u x, u^-1 y)`.
    pub fn torus(u: &FieldElem) -> Result<Self> {
        let ctx = u.ctx();
        Self::new(ctx.zero(), ctx.zero(), u.clone(), false)
    }

    /// `iota: (x, y) -> (y, x)`.
    pub fn iota(ctx: &Arc<FieldCtx>) -> Self {
        AutElem {
            swap: true,
            ..Self::identity(ctx)
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.a.ctx()
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.u.is_one() && !self.swap
    }

    /// `self o other`: apply `other` first.
    pub fn compose(&self, other: &AutElem) -> Result<AutElem> {
        if self.ctx() != other.ctx() {
            return Err(Error::ContextMismatch);
        }
        let f = self.ctx();
        let (a, b, u) = (self.a.raw(), self.b.raw(), self.u.raw());
        let (a2, b2, u2) = (other.a.raw(), other.b.raw(), other.u.raw());
        let ui = f.inv_raw(u)?;
        let (na, nb, nu) = if self.swap {
            (
                f.add_raw(f.mul_raw(u, b2), a),
                f.add_raw(f.mul_raw(ui, a2), b),
                f.div_raw(u, u2)?,
            )
        } else {
            (
                f.add_raw(f.mul_raw(u, a2), a),
                f.add_raw(f.mul_raw(ui, b2), b),
                f.mul_raw(u, u2),
            )
        };
        Ok(AutElem {
            a: f.elem_unchecked(na),
            b: f.elem_unchecked(nb),
            u: f.elem_unchecked(nu),
            swap: self.swap ^ other.swap,
        })
    }

    pub fn inverse(&self) -> AutElem {
        let ui = self.u.inv().expect("u is nonzero");
        if self.swap {
            AutElem {
                a: -(&self.u * &self.b),
                b: -(&ui * &self.a),
                u: self.u.clone(),
                swap: true,
            }
        } else {
            AutElem {
                a: -(&ui * &self.a),
                b: -(&self.u * &self.b),
                u: ui,
                swap: false,
            }
        }
    }

    /// Order by iterated composition.
    pub fn order(&self) -> u64 {
        let mut acc = self.clone();
        let mut n = 1;
        while !acc.is_identity() {
            acc = self.compose(&acc).expect("same context");
            n += 1;
        }
        n
    }

    /// Image of an affine point with coordinates in an extension of `F_q`.
    pub fn apply(&self, x: &FieldElem, y: &FieldElem) -> Result<(FieldElem, FieldElem)> {
        let big = x.ctx();
        let a = big.embed(&self.a)?;
        let b = big.embed(&self.b)?;
        let u = big.embed(&self.u)?;
        let ui = u.inv()?;
        let (xt, yt) = if self.swap { (y, x) } else { (x, y) };
        Ok((u.try_mul(xt)?.try_add(&a)?, ui.try_mul(yt)?.try_add(&b)?))
    }

    pub fn act(&self, pt: &CurvePoint) -> Result<CurvePoint> {
        let ui = self.u.inv()?;
        Ok(match pt {
            CurvePoint::Affine { x, y } => {
                let (x, y) = self.apply(x, y)?;
                CurvePoint::Affine { x, y }
            }
            CurvePoint::XInfty(y0) if !self.swap => CurvePoint::XInfty(ui.try_mul(y0)?.try_add(&self.b)?),
            CurvePoint::XInfty(y0) => CurvePoint::YInfty(self.u.try_mul(y0)?.try_add(&self.a)?),
            CurvePoint::YInfty(x0) if !self.swap => CurvePoint::YInfty(self.u.try_mul(x0)?.try_add(&self.a)?),
            CurvePoint::YInfty(x0) => CurvePoint::XInfty(ui.try_mul(x0)?.try_add(&self.b)?),
        })
    }

    /// Packs the tuple into an integer, injective for a fixed field.
    pub fn key(&self) -> u64 {
        let q = self.ctx().size();
        ((self.a.raw() * q + self.b.raw()) * q + self.u.raw()) * 2 + self.swap as u64
    }
}

impl fmt::Display for AutElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.a,
            self.b,
            self.u,
            if self.swap { "swap" } else { "no-swap" }
        )
    }
}

/// `2 q^2 (q - 1)`.
pub fn expected_order(p: u64, t: usize) -> u128 {
    let q = (p as u128).pow(t as u32);
    2 * q * q * (q - 1)
}

/// All of `A_t`, materialized.
#[derive(Clone, Debug)]
pub struct AutGroup {
    p: u64,
    t: usize,
    field: Arc<FieldCtx>,
    elems: Vec<AutElem>,
    index: HashMap<u64, usize>,
}

impl AutGroup {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[AutElem] {
        &self.elems
    }

    pub fn index_of(&self, e: &AutElem) -> Option<usize> {
        self.index.get(&e.key()).copied()
    }

    pub fn contains(&self, e: &AutElem) -> bool {
        self.index.contains_key(&e.key())
    }
}

/// Closure of `{sigma_{a,0}, sigma_{0,b}, tau_u, iota}` with `a, b` running
/// over an `F_p`-basis of `F_q` and `u` a primitive element.
pub fn full_group(p: u64, t: usize, budget: u128) -> Result<AutGroup> {
    check_budget(expected_order(p, t), budget)?;
    let field = FieldCtx::new(p, t, None)?;
    let zero = field.zero();
    let mut gens = Vec::new();
    for i in 0..t {
        let w = field.generator().pow(i as u64);
        gens.push(AutElem::translation(&w, &zero)?);
        gens.push(AutElem::translation(&zero, &w)?);
    }
    gens.push(AutElem::torus(&field.primitive_element())?);
    gens.push(AutElem::iota(&field));

    let id = AutElem::identity(&field);
    let mut index = HashMap::new();
    let mut elems = vec![id.clone()];
    index.insert(id.key(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let next = g.compose(&elems[i])?;
            let key = next.key();
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(key) {
                if elems.len() as u128 >= budget {
                    return Err(Error::BudgetExceeded {
                        needed: elems.len() as u128 + 1,
                        budget,
                    });
                }
                e.insert(elems.len());
                queue.push_back(elems.len());
                elems.push(next);
            }
        }
    }
    Ok(AutGroup {
        p,
        t,
        field,
        elems,
        index,
    })
}

/// `F(x, y) = (y^q - y)(x^q - x)` on packed values.
fn eq_lhs(f: &FieldCtx, q: u64, x: u64, y: u64) -> u64 {
    let wx = f.sub_raw(f.pow_raw(x, q), x);
    let wy = f.sub_raw(f.pow_raw(y, q), y);
    f.mul_raw(wy, wx)
}

/// Proves `F o phi = F` as polynomials by evaluation on `S x S`, where `S`
/// has `2q + 1` elements of `F_{q^m}`: `F o phi - F` has degree at most `q`
/// in each variable, so vanishing on the grid forces it to be zero. On the
/// curve `F = c`, so `phi` maps `X_{t,c}` to itself.
pub fn verify_preserves_equation(phi: &AutElem, params: &CurveParams, m: usize) -> Result<bool> {
    let q = params.q();
    let big = params.extension(m)?;
    let side = 2 * q + 1;
    if big.size() < side {
        return Err(Error::InvalidParameter(format!(
            "grid field of size {} is too small, need more than {}",
            big.size(),
            2 * q
        )));
    }
    if phi.ctx() != params.field() {
        return Err(Error::ContextMismatch);
    }
    let a = big.embed(&phi.a)?.raw();
    let b = big.embed(&phi.b)?.raw();
    let u = big.embed(&phi.u)?.raw();
    let ui = big.inv_raw(u)?;
    for x in 0..side {
        for y in 0..side {
            let (xt, yt) = if phi.swap { (y, x) } else { (x, y) };
            let nx = big.add_raw(big.mul_raw(u, xt), a);
            let ny = big.add_raw(big.mul_raw(ui, yt), b);
            if eq_lhs(&big, q, nx, ny) != eq_lhs(&big, q, x, y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest `m` for which `F_{q^m}` can hold the grid.
pub fn grid_degree(q: u64) -> usize {
    let mut m = 1;
    while q.pow(m as u32) <= 2 * q {
        m += 1;
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub p: u64,
    pub t: usize,
    pub order: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
}

fn closure(group: &AutGroup, gens: &[AutElem]) -> Result<HashSet<u64>> {
    let id = AutElem::identity(group.field());
    let mut seen = HashSet::from([id.key()]);
    let mut stack = vec![id];
    while let Some(e) = stack.pop() {
        for g in gens {
            let n = g.compose(&e)?;
            if seen.insert(n.key()) {
                stack.push(n);
            }
        }
    }
    Ok(seen)
}

/// Verifies `A = (E x E') x| D_{q-1}` element by element.
pub fn structure_check(group: &AutGroup) -> Result<StructureReport> {
    let f = group.field().clone();
    let q = f.size();
    let p = f.p();
    let zero = f.zero();
    let id = AutElem::identity(&f);
    let e: Vec<AutElem> = f
        .enumerate()
        .map(|a| AutElem::translation(&a, &zero))
        .collect::<Result<_>>()?;
    let e2: Vec<AutElem> = f
        .enumerate()
        .map(|b| AutElem::translation(&zero, &b))
        .collect::<Result<_>>()?;
    let mut checks = Vec::new();

    for (name, sub) in [("E", &e), ("E'", &e2)] {
        let keys: HashSet<u64> = sub.iter().map(AutElem::key).collect();
        let in_group = sub.iter().all(|x| group.contains(x));
        let closed = sub
            .iter()
            .all(|x| sub.iter().all(|y| keys.contains(&x.compose(y).unwrap().key())));
        let exponent_p = sub.iter().all(|x| x.is_identity() || x.order() == p);
        let abelian = sub
            .iter()
            .all(|x| sub.iter().all(|y| x.compose(y).unwrap() == y.compose(x).unwrap()));
        checks.push(Check::new(
            format!("{name}_elementary_abelian"),
            in_group && keys.len() as u64 == q && closed && exponent_p && abelian,
            format!("order {}, exponent {p}", keys.len()),
        ));
    }

    let ek: HashSet<u64> = e.iter().map(AutElem::key).collect();
    let meet: Vec<&AutElem> = e2.iter().filter(|x| ek.contains(&x.key())).collect();
    checks.push(Check::new(
        "E_meet_E'_trivial",
        meet.len() == 1 && meet[0].is_identity(),
        format!("|E & E'| = {}", meet.len()),
    ));

    let mut nontrivial_pairs = 0usize;
    let mut bad_commutators = 0usize;
    for x in &e {
        for y in &e2 {
            if x.is_identity() || y.is_identity() {
                continue;
            }
            nontrivial_pairs += 1;
            let comm = x.compose(y)?.compose(&x.inverse())?.compose(&y.inverse())?;
            if !comm.is_identity() {
                bad_commutators += 1;
            }
        }
    }
    checks.push(Check::new(
        "commutator_trivial",
        bad_commutators == 0,
        format!("{nontrivial_pairs} pairs, {bad_commutators} nontrivial commutators"),
    ));

    let mut ee: HashSet<u64> = HashSet::new();
    let mut ee_elems = Vec::new();
    for x in &e {
        for y in &e2 {
            let z = x.compose(y)?;
            if ee.insert(z.key()) {
                ee_elems.push(z);
            }
        }
    }
    let normal = group.elements().iter().all(|g| {
        let gi = g.inverse();
        ee_elems
            .iter()
            .all(|n| ee.contains(&g.compose(n).unwrap().compose(&gi).unwrap().key()))
    });
    checks.push(Check::new(
        "EE'_normal",
        ee.len() as u64 == q * q && normal,
        format!("|EE'| = {}, normal = {normal}", ee.len()),
    ));

    let iota = AutElem::iota(&f);
    let tori: Vec<AutElem> = f
        .enumerate()
        .skip(1)
        .map(|u| AutElem::torus(&u))
        .collect::<Result<_>>()?;
    let dihedral = closure(group, &[AutElem::torus(&f.primitive_element())?, iota.clone()])?;
    let iota_sq = iota.compose(&iota)?.is_identity();
    let conj_ok = tori.iter().all(|t| {
        let lhs = iota.compose(t).unwrap().compose(&iota).unwrap();
        lhs == AutElem::torus(&t.u.inv().unwrap()).unwrap()
    });
    let cyclic = tori.iter().any(|t| t.order() == q - 1);
    checks.push(Check::new(
        "dihedral",
        dihedral.len() as u64 == 2 * (q - 1) && iota_sq && conj_ok && cyclic,
        format!(
            "|<tau, iota>| = {}, iota^2 = 1: {iota_sq}, iota tau_u iota = tau_u^-1: {conj_ok}",
            dihedral.len()
        ),
    ));

    let meet_d = dihedral.intersection(&ee).count();
    let order_ok = ee.len() * dihedral.len() == group.order()
        && group.order() as u128 == expected_order(group.p(), group.t());
    checks.push(Check::new(
        "semidirect",
        order_ok && meet_d == 1 && dihedral.contains(&id.key()),
        format!(
            "|EE'| * |D| = {} * {} = {}, |EE' & D| = {meet_d}",
            ee.len(),
            dihedral.len(),
            group.order()
        ),
    ));

    let pass = all_pass(&checks);
    Ok(StructureReport {
        p: group.p(),
        t: group.t(),
        order: group.order(),
        checks,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::rational_points;
    use proptest::prelude::*;

    fn f(p: u64, t: usize) -> Arc<FieldCtx> {
        FieldCtx::new(p, t, None).unwrap()
    }

    #[test]
    fn composition_examples() {
        let k = f(3, 1);
        let iota = AutElem::iota(&k);
        assert!(iota.compose(&iota).unwrap().is_identity());
        let (a, b, a2, b2) = (k.from_int(1), k.from_int(2), k.from_int(2), k.from_int(2));
        let s = AutElem::translation(&a, &b).unwrap();
        let s2 = AutElem::translation(&a2, &b2).unwrap();
        assert_eq!(
            s.compose(&s2).unwrap(),
            AutElem::translation(&(&a + &a2), &(&b + &b2)).unwrap()
        );
        let k = f(5, 1);
        let u = k.from_int(2);
        let lhs = AutElem::iota(&k).compose(&AutElem::torus(&u).unwrap()).unwrap();
        let rhs = AutElem::new(k.zero(), k.zero(), u.inv().unwrap(), true).unwrap();
        assert_eq!(lhs, rhs);
        // evaluate on a symbolic-enough point
        let (x, y) = (k.from_int(3), k.from_int(4));
        assert_eq!(lhs.apply(&x, &y).unwrap(), (&u.inv().unwrap() * &y, &u * &x));
    }

    #[test]
    fn orders() {
        for (p, t, n) in [(2, 1, 8), (3, 1, 36), (2, 2, 96), (5, 1, 200)] {
            let g = full_group(p, t, DEFAULT_GROUP_BUDGET).unwrap();
            assert_eq!(g.order(), n);
        }
        assert!(matches!(full_group(3, 2, 1000), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn group_axioms_exhaustive() {
        for (p, t) in [(2, 1), (3, 1), (2, 2)] {
            let g = full_group(p, t, DEFAULT_GROUP_BUDGET).unwrap();
            let els = g.elements();
            for x in els {
                assert!(x.compose(&x.inverse()).unwrap().is_identity());
                assert!(x.inverse().compose(x).unwrap().is_identity());
                for y in els {
                    let xy = x.compose(y).unwrap();
                    assert!(g.contains(&xy));
                }
            }
            // associativity on a slice of triples
            for x in els.iter().step_by(5) {
                for y in els.iter().step_by(3) {
                    for z in els.iter().step_by(7) {
                        let l = x.compose(y).unwrap().compose(z).unwrap();
                        let r = x.compose(&y.compose(z).unwrap()).unwrap();
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn compose_matches_maps() {
        let g = full_group(3, 1, DEFAULT_GROUP_BUDGET).unwrap();
        let big = f(3, 2);
        let pts: Vec<(FieldElem, FieldElem)> = big
            .enumerate()
            .step_by(4)
            .map(|x| (x.clone(), &x * &big.from_int(2) + big.one()))
            .collect();
        for phi in g.elements() {
            for psi in g.elements().iter().step_by(5) {
                let comp = phi.compose(psi).unwrap();
                for (x, y) in &pts {
                    let (x1, y1) = psi.apply(x, y).unwrap();
                    assert_eq!(comp.apply(x, y).unwrap(), phi.apply(&x1, &y1).unwrap());
                }
            }
        }
    }

    #[test]
    fn preserves_equation() {
        for (p, t, c) in [(2, 1, "1"), (3, 1, "2"), (2, 2, "w")] {
            let params = CurveParams::from_literal(p, t, c).unwrap();
            let g = full_group(p, t, DEFAULT_GROUP_BUDGET).unwrap();
            let m = grid_degree(params.q());
            assert!(g
                .elements()
                .iter()
                .all(|phi| verify_preserves_equation(phi, &params, m).unwrap()));
        }
        let params = CurveParams::from_literal(3, 1, "1").unwrap();
        let k = params.field().clone();
        assert!(verify_preserves_equation(&AutElem::iota(&k), &params, 1).is_err());
    }

    #[test]
    fn act_on_infinity() {
        let k = f(3, 1);
        let (b, u, y0) = (k.from_int(1), k.from_int(2), k.from_int(2));
        let s = AutElem::translation(&k.zero(), &b).unwrap();
        assert_eq!(s.act(&CurvePoint::XInfty(y0.clone())).unwrap(), CurvePoint::XInfty(&y0 + &b));
        let t = AutElem::torus(&u).unwrap();
        assert_eq!(t.act(&CurvePoint::XInfty(k.zero())).unwrap(), CurvePoint::XInfty(k.zero()));
        assert_eq!(
            AutElem::iota(&k).act(&CurvePoint::XInfty(y0.clone())).unwrap(),
            CurvePoint::YInfty(y0)
        );
    }

    #[test]
    fn action_and_bijection() {
        for (p, t, c, m) in [(2, 1, "1", 2), (3, 1, "1", 2), (2, 2, "w", 2)] {
            let params = CurveParams::from_literal(p, t, c).unwrap();
            let g = full_group(p, t, DEFAULT_GROUP_BUDGET).unwrap();
            let pts = rational_points(&params, m, 1 << 20).unwrap();
            let set: HashSet<&CurvePoint> = pts.iter().collect();
            for phi in g.elements() {
                let img: HashSet<CurvePoint> = pts.iter().map(|pt| phi.act(pt).unwrap()).collect();
                assert_eq!(img.len(), pts.len());
                assert!(img.iter().all(|pt| set.contains(pt)));
            }
            for phi in g.elements().iter().step_by(3) {
                for psi in g.elements().iter().step_by(2) {
                    let comp = phi.compose(psi).unwrap();
                    for pt in &pts {
                        assert_eq!(comp.act(pt).unwrap(), phi.act(&psi.act(pt).unwrap()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn structure() {
        for (p, t) in [(2, 1), (3, 1), (2, 2)] {
            let g = full_group(p, t, DEFAULT_GROUP_BUDGET).unwrap();
            let r = structure_check(&g).unwrap();
            assert!(r.pass, "{:?}", r.checks);
        }
        let g = full_group(3, 1, DEFAULT_GROUP_BUDGET).unwrap();
        let r = structure_check(&g).unwrap();
        assert!(r.checks.iter().any(|c| c.detail.starts_with("4 pairs")));
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(a in 0u64..9, b in 0u64..9, u in 1u64..9, s: bool) {
            let k = f(3, 2);
            let e = AutElem::new(k.elem(a).unwrap(), k.elem(b).unwrap(), k.elem(u).unwrap(), s).unwrap();
            prop_assert!(e.compose(&e.inverse()).unwrap().is_identity());
            prop_assert_eq!(e.inverse().inverse(), e);
        }
    }
}
