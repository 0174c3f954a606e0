//! Small finite groups by brute force: permutation closures, Cayley tables,
//! automorphism groups, and the order-`q^2` direct-product lemma.

mod catalog;
mod lemma;

pub use catalog::{catalog, CatalogGroup, Invariants};
pub use lemma::{lemma_check, lemma_instances, GroupLemma, LemmaInstance, LemmaReport};

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

pub const DEFAULT_CLOSURE_BUDGET: usize = 1_000_000;

/// A bijection of `0..n`. Products apply the right factor first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen
                .get_mut(i as usize)
                .ok_or_else(|| Error::InvalidParameter(format!("image {i} out of range")))?;
            if *slot {
                return Err(Error::InvalidParameter(format!("image {i} repeated")));
            }
            *slot = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for cyc in cycles {
            for (k, &i) in cyc.iter().enumerate() {
                let j = cyc[(k + 1) % cyc.len()];
                if i as usize >= n || j as usize >= n {
                    return Err(Error::InvalidParameter(format!("point out of range in cycle {cyc:?}")));
                }
                images[i as usize] = j;
            }
        }
        Perm::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `self * other`: `i -> self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn order(&self) -> usize {
        let mut acc = self.clone();
        let mut n = 1;
        while !acc.is_identity() {
            acc = self.compose(&acc);
            n += 1;
        }
        n
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

/// A permutation group with all elements materialized.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl PermGroup {
    /// Breadth-first closure; element 0 is the identity.
    pub fn closure(gens: &[Perm], budget: usize) -> Result<Self> {
        let degree = gens.first().map_or(0, Perm::degree);
        if gens.iter().any(|g| g.degree() != degree) {
            return Err(Error::InvalidParameter("generators of different degree".into()));
        }
        let id = Perm::identity(degree);
        let mut index = HashMap::from([(id.clone(), 0)]);
        let mut elements = vec![id];
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let next = g.compose(&elements[i]);
                if !index.contains_key(&next) {
                    if elements.len() >= budget {
                        return Err(Error::BudgetExceeded {
                            needed: elements.len() as u128 + 1,
                            budget: budget as u128,
                        });
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        Ok(PermGroup {
            degree,
            generators: gens.to_vec(),
            elements,
            index,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, g: &Perm) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Multiplication table over the element list.
    pub fn cayley(&self) -> CayleyTable {
        let n = self.order();
        let mut mul = Vec::with_capacity(n * n);
        for a in &self.elements {
            for b in &self.elements {
                mul.push(self.index[&a.compose(b)]);
            }
        }
        let gens = self
            .generators
            .iter()
            .map(|g| self.index[g])
            .collect();
        CayleyTable::from_parts(n, mul, gens)
    }
}

/// Abstract group on `0..n` with identity `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    n: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    gens: Vec<usize>,
}

impl CayleyTable {
    fn from_parts(n: usize, mul: Vec<usize>, gens: Vec<usize>) -> Self {
        let inv = (0..n)
            .map(|a| (0..n).find(|&b| mul[a * n + b] == 0).expect("group table"))
            .collect();
        CayleyTable { n, mul, inv, gens }
    }

    /// Validates a table given by a product function; `0` must be the identity.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mul.push(f(a, b));
            }
        }
        let bad = |what: &str| Err(Error::InvalidParameter(format!("not a group: {what}")));
        if (0..n).any(|a| mul[a] != a || mul[a * n] != a) {
            return bad("identity");
        }
        for a in 0..n {
            let mut row = vec![false; n];
            for b in 0..n {
                let c = mul[a * n + b];
                if c >= n || row[c] {
                    return bad("latin square");
                }
                row[c] = true;
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a * n + b] * n + c] != mul[a * n + mul[b * n + c]] {
                        return bad("associativity");
                    }
                }
            }
        }
        let mut t = CayleyTable::from_parts(n, mul, Vec::new());
        t.gens = t.greedy_generators();
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn elem_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(a, x);
            k += 1;
        }
        k
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Subgroup generated by `gens`, as a membership vector.
    pub fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.n];
        member[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(g, x);
                if !member[y] {
                    member[y] = true;
                    stack.push(y);
                }
            }
        }
        member
    }

    /// Adds elements of largest order until they generate.
    fn greedy_generators(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = (1..self.n).collect();
        by_order.sort_by_key(|&a| (std::cmp::Reverse(self.elem_order(a)), a));
        let mut gens = Vec::new();
        let mut member = self.closure(&gens);
        for a in by_order {
            if member.iter().all(|&m| m) {
                break;
            }
            if !member[a] {
                gens.push(a);
                member = self.closure(&gens);
            }
        }
        gens
    }

    /// Left-regular representation on `0..n`.
    pub fn regular_perms(&self) -> Vec<Perm> {
        self.gens
            .iter()
            .map(|&g| Perm {
                images: (0..self.n).map(|x| self.mul(g, x) as u32).collect(),
            })
            .collect()
    }
}

/// Automorphisms of a table, each as the image vector of `0..n`.
pub fn automorphisms(g: &CayleyTable, budget: u128) -> Result<Vec<Vec<usize>>> {
    let gens = g.generators();
    let n = g.order();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| (1..n).filter(|&x| g.elem_order(x) == g.elem_order(s)).collect())
        .collect();
    let tuples = candidates
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    crate::error::check_budget(tuples, budget)?;

    // spanning tree: every element as gens[k] * parent
    let mut tree = vec![(usize::MAX, usize::MAX); n];
    let mut order = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for (k, &s) in gens.iter().enumerate() {
            let y = g.mul(s, x);
            if !seen[y] {
                seen[y] = true;
                tree[y] = (k, x);
                order.push(y);
            }
        }
    }

    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    'tuples: loop {
        let imgs: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        let mut phi = vec![usize::MAX; n];
        phi[0] = 0;
        for &y in &order[1..] {
            let (k, x) = tree[y];
            phi[y] = g.mul(imgs[k], phi[x]);
        }
        let mut hit = vec![false; n];
        let bijective = phi.iter().all(|&v| !std::mem::replace(&mut hit[v], true));
        let hom = bijective
            && (0..n).all(|x| gens.iter().enumerate().all(|(k, &s)| phi[g.mul(s, x)] == g.mul(imgs[k], phi[x])));
        if hom {
            out.push(phi);
        }
        for k in 0..choice.len() {
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                continue 'tuples;
            }
            choice[k] = 0;
        }
        break;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[u32]]) -> Perm {
        Perm::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn closure_examples() {
        let b = DEFAULT_CLOSURE_BUDGET;
        assert_eq!(PermGroup::closure(&[cyc(2, &[&[0, 1]])], b).unwrap().order(), 2);
        assert_eq!(
            PermGroup::closure(&[cyc(4, &[&[0, 1]]), cyc(4, &[&[2, 3]])], b).unwrap().order(),
            4
        );
        let s4 = PermGroup::closure(&[cyc(4, &[&[0, 1, 2, 3]]), cyc(4, &[&[0, 1]])], b).unwrap();
        assert_eq!(s4.order(), 24);
        // idempotent
        let again = PermGroup::closure(s4.elements(), b).unwrap();
        assert_eq!(again.order(), 24);
        assert!(PermGroup::closure(&[cyc(4, &[&[0, 1, 2, 3]]), cyc(4, &[&[0, 1]])], 10).is_err());
        assert!(Perm::new(vec![0, 0]).is_err());
    }

    #[test]
    fn lagrange_on_subgroups() {
        let s4 = PermGroup::closure(
            &[cyc(4, &[&[0, 1, 2, 3]]), cyc(4, &[&[0, 1]])],
            DEFAULT_CLOSURE_BUDGET,
        )
        .unwrap();
        let t = s4.cayley();
        for a in 0..24 {
            for b in (0..24).step_by(5) {
                let size = t.closure(&[a, b]).iter().filter(|&&m| m).count();
                assert_eq!(24 % size, 0);
            }
        }
    }

    fn cyclic(n: usize) -> CayleyTable {
        CayleyTable::from_fn(n, |a, b| (a + b) % n).unwrap()
    }

    #[test]
    fn aut_examples() {
        assert_eq!(automorphisms(&cyclic(3), 1 << 20).unwrap().len(), 2);
        let v4 = CayleyTable::from_fn(4, |a, b| a ^ b).unwrap();
        assert_eq!(automorphisms(&v4, 1 << 20).unwrap().len(), 6);
        let v16 = CayleyTable::from_fn(16, |a, b| a ^ b).unwrap();
        let aut = automorphisms(&v16, 1 << 20).unwrap();
        assert_eq!(aut.len(), 20160);
    }

    #[test]
    fn aut_is_group() {
        let t = CayleyTable::from_fn(8, |a, b| (a + b) % 8).unwrap();
        let aut = automorphisms(&t, 1 << 20).unwrap();
        let perms: Vec<Perm> = aut
            .iter()
            .map(|v| Perm::new(v.iter().map(|&x| x as u32).collect()).unwrap())
            .collect();
        let closed = PermGroup::closure(&perms, DEFAULT_CLOSURE_BUDGET).unwrap();
        assert_eq!(closed.order(), aut.len());
        assert_eq!(aut.len(), 4);
    }

    #[test]
    fn from_fn_rejects_non_groups() {
        assert!(CayleyTable::from_fn(3, |a, b| (a * b) % 3).is_err());
        assert!(CayleyTable::from_fn(3, |a, b| (a + 2 * b) % 3).is_err());
    }

    #[test]
    fn regular_rep_round_trip() {
        let t = cyclic(6);
        let g = PermGroup::closure(&t.regular_perms(), DEFAULT_CLOSURE_BUDGET).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.cayley().order(), 6);
    }
}
