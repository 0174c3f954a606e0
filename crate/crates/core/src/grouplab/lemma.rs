//! Exhaustive check of the direct-product lemma: if `G` has order `q^2`, is
//! generated by disjoint subgroups `E`, `E'` of order `q`, and a cyclic group
//! of order `q - 1` acts by automorphisms stabilizing both and simply
//! transitively on `E \ {1}` and `E' \ {1}`, then `G = E x E'`.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::{automorphisms, catalog, CayleyTable};
use crate::error::Result;

const AUT_BUDGET: u128 = 1 << 20;

type Mask = u128;

fn mask_of(member: &[bool]) -> Mask {
    member
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

fn elements(mask: Mask) -> Vec<usize> {
    (0..128).filter(|&i| mask >> i & 1 == 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaInstance {
    pub e: Vec<usize>,
    pub e_prime: Vec<usize>,
    /// The cyclic action, each automorphism as an image vector.
    pub action: Vec<Vec<usize>>,
}

fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&x| f[x]).collect()
}

fn is_identity(f: &[usize]) -> bool {
    f.iter().enumerate().all(|(i, &x)| i == x)
}

fn perm_order(f: &[usize]) -> usize {
    let mut acc = f.to_vec();
    let mut k = 1;
    while !is_identity(&acc) {
        acc = compose(f, &acc);
        k += 1;
    }
    k
}

fn simply_transitive(action: &[Vec<usize>], set: &[usize]) -> bool {
    let nontrivial: Vec<usize> = set.iter().copied().filter(|&x| x != 0).collect();
    nontrivial.iter().all(|&x| {
        nontrivial
            .iter()
            .all(|&y| action.iter().filter(|a| a[x] == y).count() == 1)
    })
}

impl LemmaInstance {
    /// Re-validates every hypothesis from scratch.
    pub fn check_hypotheses(&self, g: &CayleyTable, q: usize) -> bool {
        let n = g.order();
        let e: HashSet<usize> = self.e.iter().copied().collect();
        let e2: HashSet<usize> = self.e_prime.iter().copied().collect();
        let is_subgroup = |s: &HashSet<usize>| {
            s.len() == q && s.iter().all(|&a| s.iter().all(|&b| s.contains(&g.mul(a, b))))
        };
        let disjoint = e.intersection(&e2).count() == 1 && e.contains(&0);
        let union: Vec<usize> = e.union(&e2).copied().collect();
        let generates = g.closure(&union).iter().all(|&m| m);
        let autos_ok = self.action.iter().all(|a| {
            a.len() == n
                && (0..n).all(|x| (0..n).all(|y| a[g.mul(x, y)] == g.mul(a[x], a[y])))
                && self.e.iter().all(|x| e.contains(&a[*x]))
                && self.e_prime.iter().all(|x| e2.contains(&a[*x]))
        });
        let cyclic = self.action.len() == q - 1
            && self.action.iter().any(|a| perm_order(a) == q - 1)
            && self
                .action
                .iter()
                .all(|a| self.action.iter().all(|b| self.action.contains(&compose(a, b))));
        is_subgroup(&e)
            && is_subgroup(&e2)
            && disjoint
            && generates
            && autos_ok
            && cyclic
            && simply_transitive(&self.action, &self.e)
            && simply_transitive(&self.action, &self.e_prime)
    }

    /// The conclusion: `E` and `E'` commute elementwise and `|E E'| = q^2`.
    pub fn is_direct_product(&self, g: &CayleyTable) -> bool {
        let commute = self
            .e
            .iter()
            .all(|&a| self.e_prime.iter().all(|&b| g.commute(a, b)));
        let products: HashSet<usize> = self
            .e
            .iter()
            .flat_map(|&a| self.e_prime.iter().map(move |&b| g.mul(a, b)))
            .collect();
        commute && products.len() == g.order()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupLemma {
    pub name: String,
    pub subgroups_of_order_q: usize,
    pub disjoint_generating_pairs: usize,
    pub automorphisms: usize,
    pub cyclic_actions: usize,
    pub instances: usize,
    pub violations: usize,
}

/// Order-`q` subgroups, from closures of at most two elements.
fn order_q_subgroups(g: &CayleyTable, q: usize) -> Vec<Mask> {
    let n = g.order();
    let mut found = BTreeSet::new();
    for a in 0..n {
        for b in a..n {
            let member = g.closure(&[a, b]);
            if member.iter().filter(|&&m| m).count() == q {
                found.insert(mask_of(&member));
            }
        }
    }
    found.into_iter().collect()
}

/// Cyclic subgroups of order `q - 1` inside the automorphism list.
fn cyclic_actions(aut: &[Vec<usize>], q: usize) -> Vec<Vec<Vec<usize>>> {
    let mut seen = BTreeSet::new();
    for a in aut {
        if perm_order(a) != q - 1 {
            continue;
        }
        let mut powers = vec![a.clone()];
        while !is_identity(powers.last().unwrap()) {
            let next = compose(a, powers.last().unwrap());
            powers.push(next);
        }
        powers.sort();
        seen.insert(powers);
    }
    seen.into_iter().collect()
}

/// Every hypothesis-satisfying configuration in `g`, plus scan statistics.
pub fn lemma_instances(g: &CayleyTable, q: usize, name: &str) -> Result<(GroupLemma, Vec<LemmaInstance>)> {
    let full: Mask = if g.order() == 128 {
        Mask::MAX
    } else {
        (1 << g.order()) - 1
    };
    let subs = order_q_subgroups(g, q);
    let mut pairs = Vec::new();
    for (i, &e) in subs.iter().enumerate() {
        for &e2 in &subs[i + 1..] {
            if e & e2 == 1 && mask_of(&g.closure(&elements(e | e2))) == full {
                pairs.push((e, e2));
            }
        }
    }
    let aut = automorphisms(g, AUT_BUDGET)?;
    let actions = cyclic_actions(&aut, q);
    let mut instances = Vec::new();
    for &(e, e2) in &pairs {
        let (ev, e2v) = (elements(e), elements(e2));
        for action in &actions {
            let stabilizes = action.iter().all(|a| {
                ev.iter().all(|&x| e >> a[x] & 1 == 1) && e2v.iter().all(|&x| e2 >> a[x] & 1 == 1)
            });
            if stabilizes && simply_transitive(action, &ev) && simply_transitive(action, &e2v) {
                instances.push(LemmaInstance {
                    e: ev.clone(),
                    e_prime: e2v.clone(),
                    action: action.clone(),
                });
            }
        }
    }
    let violations = instances.iter().filter(|i| !i.is_direct_product(g)).count();
    Ok((
        GroupLemma {
            name: name.to_string(),
            subgroups_of_order_q: subs.len(),
            disjoint_generating_pairs: pairs.len(),
            automorphisms: aut.len(),
            cyclic_actions: actions.len(),
            instances: instances.len(),
            violations,
        },
        instances,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub q: u64,
    pub groups_scanned: usize,
    pub instances_found: usize,
    pub violations: Vec<String>,
    pub groups: Vec<GroupLemma>,
    pub pass: bool,
}

/// Scans the whole catalog of order `q^2`.
pub fn lemma_check(q: u64) -> Result<LemmaReport> {
    let cat = catalog(q)?;
    let per_group: Vec<GroupLemma> = cat
        .par_iter()
        .map(|g| lemma_instances(&g.table, q as usize, &g.name).map(|(s, _)| s))
        .collect::<Result<_>>()?;
    let violations: Vec<String> = per_group
        .iter()
        .filter(|g| g.violations > 0)
        .map(|g| format!("{}: {} instances are not direct products", g.name, g.violations))
        .collect();
    let instances_found = per_group.iter().map(|g| g.instances).sum();
    Ok(LemmaReport {
        q,
        groups_scanned: per_group.len(),
        instances_found,
        pass: violations.is_empty() && instances_found > 0,
        violations,
        groups: per_group,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q2() {
        let r = lemma_check(2).unwrap();
        assert!(r.pass);
        let c4 = r.groups.iter().find(|g| g.name == "C4").unwrap();
        assert_eq!(c4.instances, 0);
        let v4 = r.groups.iter().find(|g| g.name == "C2^2").unwrap();
        assert!(v4.instances > 0);
    }

    #[test]
    fn q3() {
        let r = lemma_check(3).unwrap();
        assert!(r.pass);
        assert!(r.groups.iter().find(|g| g.name == "C3^2").unwrap().instances > 0);
    }

    #[test]
    fn instances_revalidate() {
        for q in [2u64, 3] {
            for g in catalog(q).unwrap() {
                let (_, inst) = lemma_instances(&g.table, q as usize, &g.name).unwrap();
                assert!(inst.iter().all(|i| i.check_hypotheses(&g.table, q as usize)));
            }
        }
        let cat = catalog(4).unwrap();
        let v16 = cat.iter().find(|g| g.name == "C2^4").unwrap();
        let (stats, inst) = lemma_instances(&v16.table, 4, "C2^4").unwrap();
        assert!(stats.instances > 0);
        assert!(inst.iter().step_by(17).all(|i| i.check_hypotheses(&v16.table, 4)));
    }

    #[test]
    fn q4_automorphism_orders() {
        let r = lemma_check(4).unwrap();
        assert!(r.pass);
        assert_eq!(r.groups_scanned, 14);
        let expected = [
            ("C16", 8),
            ("C4xC4", 96),
            ("C8xC2", 16),
            ("C4xC2xC2", 192),
            ("C2^4", 20160),
            ("C4:C4", 32),
            ("M16", 16),
            ("D16", 32),
            ("QD16", 16),
            ("Q16", 32),
            ("C2xD8", 64),
            ("C2xQ8", 192),
            ("(C4xC2):C2", 32),
            ("C4oD8", 48),
        ];
        for (name, n) in expected {
            let g = r.groups.iter().find(|g| g.name == name).unwrap();
            assert_eq!(g.automorphisms, n, "{name}");
        }
    }
}
