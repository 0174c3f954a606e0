//! Groups of order `q^2` for `q in {2, 3, 4}`.
//!
//! Order 16 is built from metacyclic presentations
//! `<a, b | a^m = 1, b^k = a^s, b a b^-1 = a^r>`, direct products, and two
//! semidirect products `(C4 x C2) x| C2`, then handed to the permutation
//! engine through the regular representation. Invariants separate all 14.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{CayleyTable, PermGroup, DEFAULT_CLOSURE_BUDGET};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CatalogGroup {
    pub name: String,
    pub group: PermGroup,
    pub table: CayleyTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Invariants {
    pub order: usize,
    /// Element-order histogram of `G / [G, G]`.
    pub abelianization: Vec<(usize, usize)>,
    pub order_histogram: Vec<(usize, usize)>,
    pub center: usize,
}

fn histogram(orders: impl Iterator<Item = usize>) -> Vec<(usize, usize)> {
    let mut h = BTreeMap::new();
    for o in orders {
        *h.entry(o).or_insert(0) += 1;
    }
    h.into_iter().collect()
}

impl Invariants {
    pub fn of(t: &CayleyTable) -> Self {
        let n = t.order();
        let comms: Vec<usize> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| t.mul(t.mul(a, b), t.mul(t.inv(a), t.inv(b))))
            .collect();
        let derived = t.closure(&comms);
        let mut reps = vec![false; n];
        let mut quotient_orders = Vec::new();
        for x in 0..n {
            let rep = (0..n).filter(|&d| derived[d]).map(|d| t.mul(x, d)).min().unwrap();
            if std::mem::replace(&mut reps[rep], true) {
                continue;
            }
            let mut y = x;
            let mut k = 1;
            while !derived[y] {
                y = t.mul(x, y);
                k += 1;
            }
            quotient_orders.push(k);
        }
        Invariants {
            order: n,
            abelianization: histogram(quotient_orders.into_iter()),
            order_histogram: histogram((0..n).map(|a| t.elem_order(a))),
            center: (0..n).filter(|&a| (0..n).all(|b| t.commute(a, b))).count(),
        }
    }
}

/// `a^i b^j` packed as `i + m j`.
fn metacyclic(m: usize, k: usize, r: usize, s: usize) -> Result<CayleyTable> {
    let rpow: Vec<usize> = (0..k)
        .scan(1usize, |acc, _| {
            let v = *acc;
            *acc = *acc * r % m;
            Some(v)
        })
        .collect();
    CayleyTable::from_fn(m * k, |x, y| {
        let (i1, j1) = (x % m, x / m);
        let (i2, j2) = (y % m, y / m);
        let mut i = i1 + rpow[j1] * i2;
        let mut j = j1 + j2;
        if j >= k {
            j -= k;
            i += s;
        }
        i % m + m * j
    })
}

fn direct(a: &CayleyTable, b: &CayleyTable) -> Result<CayleyTable> {
    let na = a.order();
    CayleyTable::from_fn(na * b.order(), |x, y| {
        a.mul(x % na, y % na) + na * b.mul(x / na, y / na)
    })
}

fn cyclic(n: usize) -> Result<CayleyTable> {
    metacyclic(n, 1, 1, 0)
}

/// `(C4 x C2) x| C2`, the involution given on `(x, y)`.
fn semidirect_c4c2(theta: impl Fn(usize, usize) -> (usize, usize)) -> Result<CayleyTable> {
    let pack = |x: usize, y: usize, e: usize| x + 4 * y + 8 * e;
    CayleyTable::from_fn(16, |u, v| {
        let (x1, y1, e1) = (u % 4, (u / 4) % 2, u / 8);
        let (mut x2, mut y2, e2) = (v % 4, (v / 4) % 2, v / 8);
        if e1 == 1 {
            (x2, y2) = theta(x2, y2);
        }
        pack((x1 + x2) % 4, (y1 + y2) % 2, (e1 + e2) % 2)
    })
}

fn order16() -> Result<Vec<(&'static str, CayleyTable)>> {
    let c2 = cyclic(2)?;
    let c4 = cyclic(4)?;
    Ok(vec![
        ("C16", cyclic(16)?),
        ("C4xC4", metacyclic(4, 4, 1, 0)?),
        ("C8xC2", metacyclic(8, 2, 1, 0)?),
        ("C4xC2xC2", direct(&direct(&c4, &c2)?, &c2)?),
        ("C2^4", direct(&direct(&direct(&c2, &c2)?, &c2)?, &c2)?),
        ("C4:C4", metacyclic(4, 4, 3, 0)?),
        ("M16", metacyclic(8, 2, 5, 0)?),
        ("D16", metacyclic(8, 2, 7, 0)?),
        ("QD16", metacyclic(8, 2, 3, 0)?),
        ("Q16", metacyclic(8, 2, 7, 4)?),
        ("C2xD8", direct(&metacyclic(4, 2, 3, 0)?, &c2)?),
        ("C2xQ8", direct(&metacyclic(4, 2, 3, 2)?, &c2)?),
        // a -> ab, b -> b
        ("(C4xC2):C2", semidirect_c4c2(|x, y| (x, (y + x) % 2))?),
        // a -> a, b -> a^2 b: the central product C4*D8
        ("C4oD8", semidirect_c4c2(|x, y| ((x + 2 * y) % 4, y))?),
    ])
}

/// All groups of order `q^2` up to isomorphism, for `q in {2, 3, 4}`.
pub fn catalog(q: u64) -> Result<Vec<CatalogGroup>> {
    let tables: Vec<(&str, CayleyTable)> = match q {
        2 => vec![("C4", cyclic(4)?), ("C2^2", direct(&cyclic(2)?, &cyclic(2)?)?)],
        3 => vec![("C9", cyclic(9)?), ("C3^2", direct(&cyclic(3)?, &cyclic(3)?)?)],
        4 => order16()?,
        _ => return Err(Error::Unsupported(format!("no catalog for q = {q}"))),
    };
    tables
        .into_iter()
        .map(|(name, t)| {
            let group = PermGroup::closure(&t.regular_perms(), DEFAULT_CLOSURE_BUDGET)?;
            let table = group.cayley();
            Ok(CatalogGroup {
                name: name.to_string(),
                group,
                table,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn catalog_sizes() {
        for (q, n) in [(2, 2), (3, 2), (4, 14)] {
            let cat = catalog(q).unwrap();
            assert_eq!(cat.len(), n);
            let q2 = (q * q) as usize;
            assert!(cat.iter().all(|g| g.group.order() == q2 && g.table.order() == q2));
            let inv: HashSet<Invariants> = cat.iter().map(|g| Invariants::of(&g.table)).collect();
            assert_eq!(inv.len(), n, "invariants must separate the catalog");
        }
        assert!(catalog(5).is_err());
    }

    #[test]
    fn known_invariants() {
        let cat = catalog(4).unwrap();
        let get = |name: &str| Invariants::of(&cat.iter().find(|g| g.name == name).unwrap().table);
        assert_eq!(get("Q16").order_histogram, vec![(1, 1), (2, 1), (4, 10), (8, 4)]);
        assert_eq!(get("D16").center, 2);
        assert_eq!(get("C2^4").abelianization, vec![(1, 1), (2, 15)]);
        assert_eq!(get("C4oD8").center, 4);
        let abelian = cat.iter().filter(|g| Invariants::of(&g.table).center == 16).count();
        assert_eq!(abelian, 5);
    }
}
