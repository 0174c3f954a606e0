//! The explicit Schottky group of an Artin-Schreier-Mumford curve.
//!
//! With `q = p^t` and a parameter `C` in `k = F_q((T))`:
//!
//! * `E` is the group of translations `[[1, v], [0, 1]]`, `v` in `F_q`;
//! * `gamma = [[0, 1], [C, 0]]`, an involution in `PGL(2, k)`;
//! * `E' = gamma E gamma^-1`, lower unipotent matrices `[[1, 0], [C v, 1]]`;
//! * `Gamma` is generated by the `(q-1)^2` commutators
//!   `[e_v, e'_w] = e_v e'_w e_v^-1 e'_w^-1`, indexed by `(v, w)` in
//!   `(F_q^*)^2` in packed order of `v`, then `w`.
//!
//! Discreteness is certified by the valuation of `C`; freeness is probed by
//! evaluating every reduced word up to a given length.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_budget, Error, Result};
use crate::ff::{FieldCtx, FieldElem};
use crate::laurent::{on_circle, LaurentPoly, ProjPoint};
use crate::moebius::{Mobius, MobiusClass};
use crate::report::{all_pass, Check};

pub const DEFAULT_WORD_BUDGET: u128 = 1_000_000;

/// Generators of `E`, `E'` and `Gamma` for one choice of `C`.
#[derive(Clone, Debug)]
pub struct SchottkyData {
    pub p: u64,
    pub t: usize,
    pub q: u64,
    pub field: Arc<FieldCtx>,
    pub c_param: LaurentPoly,
    /// Nonzero elements `v` of `F_q`, in packed order.
    pub values: Vec<FieldElem>,
    pub e_gens: Vec<Mobius>,
    pub gamma: Mobius,
    pub eprime_gens: Vec<Mobius>,
    pub comm_gens: Vec<Mobius>,
    /// `comm_index[i] = (v, w)` for `comm_gens[i] = [e_v, e'_w]`.
    pub comm_index: Vec<(FieldElem, FieldElem)>,
    comm_inverses: Vec<Mobius>,
}

impl SchottkyData {
    /// Builds every generator list for `C` (an element of `F_{p^t}((T))`).
    pub fn build(p: u64, t: usize, c_param: LaurentPoly) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidDegree(0));
        }
        let field = FieldCtx::new(p, t, None)?;
        if **c_param.ctx() != *field {
            return Err(Error::ContextMismatch);
        }
        if c_param.is_zero() {
            return Err(Error::InvalidParameter("C must be nonzero".into()));
        }
        let zero = LaurentPoly::zero(&field);
        let one = LaurentPoly::one(&field);
        let gamma = Mobius::new(zero.clone(), one, c_param.clone(), zero)?;
        let gamma_inv = gamma.inverse();
        let values: Vec<FieldElem> = field.enumerate().skip(1).collect();
        let e_gens: Vec<Mobius> = values
            .iter()
            .map(|v| Mobius::translation(&LaurentPoly::constant(v)))
            .collect();
        let eprime_gens = e_gens
            .iter()
            .map(|e| Ok(gamma.compose(e)?.compose(&gamma_inv)?.normalized()))
            .collect::<Result<Vec<_>>>()?;
        let mut comm_gens = Vec::with_capacity(values.len() * values.len());
        let mut comm_index = Vec::with_capacity(values.len() * values.len());
        for (v, e) in values.iter().zip(&e_gens) {
            for (w, ep) in values.iter().zip(&eprime_gens) {
                let comm = e
                    .compose(ep)?
                    .compose(&e.inverse())?
                    .compose(&ep.inverse())?
                    .normalized();
                comm_gens.push(comm);
                comm_index.push((v.clone(), w.clone()));
            }
        }
        let comm_inverses = comm_gens.iter().map(|m| m.inverse().normalized()).collect();
        Ok(SchottkyData {
            p,
            t,
            q: field.size(),
            field,
            c_param,
            values,
            e_gens,
            gamma,
            eprime_gens,
            comm_gens,
            comm_index,
            comm_inverses,
        })
    }

    /// Parses `C` in the Laurent display grammar over `F_{p^t}`.
    pub fn build_from_literal(p: u64, t: usize, c_literal: &str) -> Result<Self> {
        let field = FieldCtx::new(p, t, None)?;
        let c = LaurentPoly::parse(&field, c_literal)?;
        Self::build(p, t, c)
    }

    /// Rank of `Gamma`, the number of commutator generators.
    pub fn rank(&self) -> usize {
        self.comm_gens.len()
    }

    /// Matrix of a signed letter: `+(i+1)` is `comm_gens[i]`, `-(i+1)` its
    /// inverse.
    pub fn letter(&self, l: i32) -> &Mobius {
        let i = l.unsigned_abs() as usize - 1;
        if l > 0 {
            &self.comm_gens[i]
        } else {
            &self.comm_inverses[i]
        }
    }

    /// Evaluates a word of signed letters.
    pub fn eval_word(&self, word: &[i32]) -> Result<Mobius> {
        word.iter().try_fold(Mobius::identity(&self.field), |acc, &l| {
            Ok(acc.compose(self.letter(l))?.normalized())
        })
    }

    fn alphabet(&self) -> Vec<i32> {
        (1..=self.rank() as i32).flat_map(|i| [i, -i]).collect()
    }
}

/// Number of reduced words of length exactly `len` in a free group of rank
/// `r`: `2r (2r-1)^(len-1)`.
pub fn reduced_word_count(r: u64, len: u32) -> u128 {
    if len == 0 {
        return 1;
    }
    2 * r as u128 * (2 * r as u128 - 1).pow(len - 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct Circle {
    pub center: String,
    pub radius_val: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscretenessCertificate {
    pub p: u64,
    pub t: usize,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "val_C")]
    pub val_c: i64,
    pub circles: [Circle; 2],
    pub disjoint: bool,
    pub accepted: bool,
    pub samples_checked: usize,
}

/// The isometric circles of `E` and `E'` are `{|z| = 1}` and
/// `{|z - C| = 1}`. They are disjoint exactly when `|C| > 1`, i.e.
/// `val(C) < 0`. For accepted `C` every sample point `lambda + mu T`
/// (`lambda` in `F_q^*`) of the first circle is confirmed to lie off the
/// second.
pub fn certify_discrete(data: &SchottkyData) -> Result<DiscretenessCertificate> {
    let val_c = data
        .c_param
        .val()
        .finite()
        .ok_or_else(|| Error::InvalidParameter("C must be nonzero".into()))?;
    let disjoint = val_c < 0;
    let zero = LaurentPoly::zero(&data.field);
    let mut samples_checked = 0;
    if disjoint {
        for lambda in &data.values {
            for mu in data.field.enumerate() {
                let z = ProjPoint::affine(
                    LaurentPoly::constant(lambda) + LaurentPoly::monomial(&mu, 1),
                );
                let on_unit = on_circle(&z, &zero, 0)?;
                let on_other = on_circle(&z, &data.c_param, 0)?;
                if !on_unit || on_other {
                    return Err(Error::Internal(format!(
                        "sample {z} contradicts the valuation certificate"
                    )));
                }
                samples_checked += 1;
            }
        }
    }
    Ok(DiscretenessCertificate {
        p: data.p,
        t: data.t,
        c: data.c_param.to_string(),
        val_c,
        circles: [
            Circle {
                center: zero.to_string(),
                radius_val: 0,
            },
            Circle {
                center: data.c_param.to_string(),
                radius_val: 0,
            },
        ],
        disjoint,
        accepted: disjoint,
        samples_checked,
    })
}

/// Depth-first iterator over reduced words, shortest prefixes first within
/// each branch. Matrices are built incrementally along the prefix tree.
pub struct ReducedWords<'a> {
    data: &'a SchottkyData,
    alphabet: Vec<i32>,
    max_len: usize,
    stack: Vec<(Vec<i32>, Mobius)>,
}

impl Iterator for ReducedWords<'_> {
    type Item = (Vec<i32>, Mobius);

    fn next(&mut self) -> Option<Self::Item> {
        let (word, m) = self.stack.pop()?;
        if word.len() < self.max_len {
            let last = *word.last().expect("stack holds nonempty words");
            for &l in self.alphabet.iter().rev() {
                if l == -last {
                    continue;
                }
                let mut w = word.clone();
                w.push(l);
                let child = m
                    .compose(self.data.letter(l))
                    .expect("generators share a context")
                    .normalized();
                self.stack.push((w, child));
            }
        }
        Some((word, m))
    }
}

/// Every reduced word of length `1..=max_len` exactly once, with its matrix.
/// Fails up front when the word count exceeds `budget`.
pub fn enumerate_reduced_words(data: &SchottkyData, max_len: usize, budget: u128) -> Result<ReducedWords<'_>> {
    if max_len == 0 {
        return Err(Error::InvalidParameter("word length must be at least 1".into()));
    }
    let r = data.rank() as u64;
    let total: u128 = (1..=max_len as u32).map(|l| reduced_word_count(r, l)).sum();
    check_budget(total, budget)?;
    let alphabet = data.alphabet();
    let stack = alphabet
        .iter()
        .rev()
        .map(|&l| (vec![l], data.letter(l).clone()))
        .collect();
    Ok(ReducedWords {
        data,
        alphabet,
        max_len,
        stack,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WordFailure {
    pub word: Vec<i32>,
    pub class: MobiusClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct FreenessReport {
    pub p: u64,
    pub t: usize,
    #[serde(rename = "C")]
    pub c: String,
    pub max_length: usize,
    pub rank: usize,
    pub words_tested: u128,
    pub matrices_evaluated: u128,
    pub all_nonidentity: bool,
    pub all_hyperbolic: bool,
    pub first_failure: Option<WordFailure>,
    pub pass: bool,
}

/// Matrices needed by [`freeness_check`]: all words shorter than `max_len`
/// plus one of each inverse pair at full length.
pub fn freeness_matrix_count(rank: usize, max_len: usize) -> u128 {
    let r = rank as u64;
    let inner: u128 = (1..max_len as u32).map(|l| reduced_word_count(r, l)).sum();
    inner + reduced_word_count(r, max_len as u32) / 2
}

#[derive(Default)]
struct SubtreeStats {
    tested: u128,
    evaluated: u128,
    failure: Option<WordFailure>,
}

/// Classifies every reduced word of length `1..=max_len`.
///
/// A word and its inverse are both non-identity or both identity, and share
/// `tr^2 / det`, so at full length only the lexicographically smaller of each
/// inverse pair is evaluated. Subtrees per first letter run in parallel; the
/// reported failure is the first in depth-first order.
pub fn freeness_check(data: &SchottkyData, max_len: usize, budget: u128) -> Result<FreenessReport> {
    if max_len == 0 {
        return Err(Error::InvalidParameter("word length must be at least 1".into()));
    }
    let needed = freeness_matrix_count(data.rank(), max_len);
    check_budget(needed, budget)?;
    let alphabet = data.alphabet();
    let rank_of: Vec<(i32, usize)> = alphabet.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let order = |l: i32| rank_of.iter().find(|e| e.0 == l).map(|e| e.1).expect("letter in alphabet");
    let stats: Vec<SubtreeStats> = alphabet
        .par_iter()
        .map(|&first| {
            let mut st = SubtreeStats::default();
            let mut word = vec![first];
            visit(data, &alphabet, &order, max_len, &mut word, data.letter(first).clone(), &mut st);
            st
        })
        .collect();
    let words_tested = stats.iter().map(|s| s.tested).sum();
    let matrices_evaluated = stats.iter().map(|s| s.evaluated).sum();
    let first_failure = stats.into_iter().find_map(|s| s.failure);
    let all_nonidentity = first_failure
        .as_ref()
        .is_none_or(|f| f.class != MobiusClass::Identity);
    let all_hyperbolic = first_failure.is_none();
    Ok(FreenessReport {
        p: data.p,
        t: data.t,
        c: data.c_param.to_string(),
        max_length: max_len,
        rank: data.rank(),
        words_tested,
        matrices_evaluated,
        all_nonidentity,
        all_hyperbolic,
        pass: first_failure.is_none(),
        first_failure,
    })
}

fn visit(
    data: &SchottkyData,
    alphabet: &[i32],
    order: &dyn Fn(i32) -> usize,
    max_len: usize,
    word: &mut Vec<i32>,
    m: Mobius,
    st: &mut SubtreeStats,
) -> bool {
    st.evaluated += 1;
    // a full-length word stands for itself and its inverse
    st.tested += if word.len() == max_len { 2 } else { 1 };
    let class = m.classify();
    if class != MobiusClass::Hyperbolic {
        st.failure = Some(WordFailure {
            word: word.clone(),
            class,
        });
        return false;
    }
    if word.len() == max_len {
        return true;
    }
    let last = *word.last().expect("nonempty");
    for &l in alphabet {
        if l == -last {
            continue;
        }
        word.push(l);
        let keep = word.len() < max_len || !inverse_is_smaller(word, order);
        if keep {
            let child = m.compose(data.letter(l)).expect("shared context").normalized();
            if !visit(data, alphabet, order, max_len, word, child, st) {
                word.pop();
                return false;
            }
        }
        word.pop();
    }
    true
}

fn inverse_is_smaller(word: &[i32], order: &dyn Fn(i32) -> usize) -> bool {
    let fwd = word.iter().map(|&l| order(l));
    let inv = word.iter().rev().map(|&l| order(-l));
    inv.lt(fwd)
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizerReport {
    pub p: u64,
    pub t: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Relations of the finite part of the normalizer inside `PGL(2, k)`: the
/// torus `diag(u, 1)`, `u` in `F_q^*`, normalizes `E` and permutes its
/// nontrivial elements simply transitively; `gamma^2 = 1`;
/// `gamma diag(u, 1) gamma^-1 = diag(u^-1, 1)`; `e^p = 1`; and `E'` consists
/// of the lower unipotent matrices `[[1, 0], [C v, 1]]`.
pub fn normalizer_relations_check(data: &SchottkyData) -> Result<NormalizerReport> {
    let mut checks = Vec::new();
    let n = data.values.len();

    // conj[u][v] = index of diag(u,1) e_v diag(u,1)^-1 among e_gens
    let mut conj = vec![vec![None; n]; n];
    let mut bad = Vec::new();
    for (iu, u) in data.values.iter().enumerate() {
        let du = Mobius::diagonal(u)?;
        let du_inv = du.inverse();
        for (iv, v) in data.values.iter().enumerate() {
            let img = du.compose(&data.e_gens[iv])?.compose(&du_inv)?;
            let uv = u * v;
            let expected = data.values.iter().position(|x| *x == uv).expect("F_q^* is closed");
            if img.proj_eq(&data.e_gens[expected]) {
                conj[iu][iv] = Some(expected);
            } else {
                bad.push(format!("u={u}, v={v}"));
            }
        }
    }
    checks.push(Check::new(
        "torus_normalizes_E",
        bad.is_empty(),
        if bad.is_empty() {
            format!("diag(u,1) e_v diag(u,1)^-1 = e_(uv) for all {} pairs", n * n)
        } else {
            format!("violations: {}", bad.join("; "))
        },
    ));

    let mut simply_transitive = true;
    for a in 0..n {
        for b in 0..n {
            let hits = (0..n).filter(|&u| conj[u][a] == Some(b)).count();
            simply_transitive &= hits == 1;
        }
    }
    checks.push(Check::new(
        "torus_simply_transitive_on_E",
        simply_transitive,
        format!("each ordered pair of nontrivial translations joined by exactly one u ({n}x{n} pairs)"),
    ));

    let orbit: std::collections::BTreeSet<usize> = (0..n).filter_map(|u| conj[u][0]).collect();
    checks.push(Check::new(
        "torus_orbit_size",
        orbit.len() == n,
        format!("orbit of e_1 has size {} (q-1 = {n})", orbit.len()),
    ));

    let g2 = data.gamma.compose(&data.gamma)?;
    checks.push(Check::new(
        "gamma_involution",
        g2.is_scalar(),
        format!("gamma^2 = {g2}"),
    ));

    let mut bad = Vec::new();
    for u in &data.values {
        let lhs = data
            .gamma
            .compose(&Mobius::diagonal(u)?)?
            .compose(&data.gamma.inverse())?;
        let rhs = Mobius::diagonal(&u.inv()?)?;
        if !lhs.proj_eq(&rhs) {
            bad.push(u.to_string());
        }
    }
    checks.push(Check::new(
        "gamma_inverts_torus",
        bad.is_empty(),
        if bad.is_empty() {
            "gamma diag(u,1) gamma^-1 = diag(u^-1,1) for all u".to_string()
        } else {
            format!("violations at u = {}", bad.join(", "))
        },
    ));

    let mut orders_ok = true;
    for e in &data.e_gens {
        let mut acc = Mobius::identity(&data.field);
        for _ in 0..data.p {
            acc = acc.compose(e)?;
        }
        orders_ok &= acc.is_scalar();
    }
    checks.push(Check::new(
        "translations_have_order_p",
        orders_ok,
        format!("e_v^{} = 1 for all v", data.p),
    ));

    let mut shape_ok = true;
    for (v, ep) in data.values.iter().zip(&data.eprime_gens) {
        let cv = data.c_param.scale(v)?;
        let expected = Mobius::new(
            LaurentPoly::one(&data.field),
            LaurentPoly::zero(&data.field),
            cv,
            LaurentPoly::one(&data.field),
        )?;
        shape_ok &= ep.proj_eq(&expected);
    }
    checks.push(Check::new(
        "eprime_lower_unipotent",
        shape_ok,
        "gamma e_v gamma^-1 = [[1,0],[C v,1]] for all v",
    ));

    Ok(NormalizerReport {
        p: data.p,
        t: data.t,
        pass: all_pass(&checks),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_counts() {
        for (p, t, r) in [(2, 1, 1), (3, 1, 4), (2, 2, 9)] {
            let d = SchottkyData::build_from_literal(p, t, "T^-1").unwrap();
            assert_eq!(d.e_gens.len() as u64, d.q - 1);
            assert_eq!(d.eprime_gens.len() as u64, d.q - 1);
            assert_eq!(d.rank(), r);
        }
        let f = FieldCtx::new(2, 1, None).unwrap();
        assert!(SchottkyData::build(2, 1, LaurentPoly::zero(&f)).is_err());
        let f3 = FieldCtx::prime_field(3).unwrap();
        assert_eq!(
            SchottkyData::build(2, 1, LaurentPoly::one(&f3)).unwrap_err(),
            Error::ContextMismatch
        );
    }

    #[test]
    fn certificate_examples() {
        let acc = certify_discrete(&SchottkyData::build_from_literal(3, 1, "T^-1").unwrap()).unwrap();
        assert!(acc.accepted && acc.disjoint);
        assert_eq!(acc.samples_checked, 2 * 3);
        for lit in ["1", "T"] {
            let rej = certify_discrete(&SchottkyData::build_from_literal(3, 1, lit).unwrap()).unwrap();
            assert!(!rej.accepted);
        }
    }

    #[test]
    fn certificate_is_monotone_in_the_exponent() {
        for v in -3i64..=3 {
            let d = SchottkyData::build_from_literal(2, 1, &format!("T^{}", -v)).unwrap();
            assert_eq!(certify_discrete(&d).unwrap().accepted, v >= 1);
        }
    }

    #[test]
    fn word_counts() {
        let d2 = SchottkyData::build_from_literal(2, 1, "T^-1").unwrap();
        assert_eq!(enumerate_reduced_words(&d2, 1, DEFAULT_WORD_BUDGET).unwrap().count(), 2);
        assert_eq!(enumerate_reduced_words(&d2, 3, DEFAULT_WORD_BUDGET).unwrap().count(), 6);
        let d3 = SchottkyData::build_from_literal(3, 1, "T^-1").unwrap();
        let words: Vec<_> = enumerate_reduced_words(&d3, 2, DEFAULT_WORD_BUDGET).unwrap().map(|w| w.0).collect();
        assert_eq!(words.len(), 64);
        let unique: std::collections::HashSet<_> = words.iter().cloned().collect();
        assert_eq!(unique.len(), 64);
        assert!(words.iter().all(|w| w.windows(2).all(|p| p[0] != -p[1])));
        assert!(matches!(
            enumerate_reduced_words(&d3, 8, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn word_matrices_are_products() {
        let d = SchottkyData::build_from_literal(3, 1, "T^-1").unwrap();
        for (word, m) in enumerate_reduced_words(&d, 3, DEFAULT_WORD_BUDGET).unwrap().step_by(17) {
            let direct = word
                .iter()
                .fold(Mobius::identity(&d.field), |acc, &l| acc.compose(d.letter(l)).unwrap());
            assert!(m.proj_eq(&direct), "word {word:?}");
        }
        let (a, b) = (vec![1, 2, -1], vec![3, 3]);
        let ab: Vec<i32> = a.iter().chain(&b).copied().collect();
        let lhs = d.eval_word(&ab).unwrap();
        let rhs = d.eval_word(&a).unwrap().compose(&d.eval_word(&b).unwrap()).unwrap();
        assert!(lhs.proj_eq(&rhs));
    }

    #[test]
    fn freeness_examples() {
        let d2 = SchottkyData::build_from_literal(2, 1, "T^-1").unwrap();
        let r = freeness_check(&d2, 12, DEFAULT_WORD_BUDGET).unwrap();
        assert!(r.pass && r.all_hyperbolic && r.all_nonidentity);
        assert_eq!(r.words_tested, 24);
        let bad = SchottkyData::build_from_literal(2, 1, "1").unwrap();
        let r = freeness_check(&bad, 2, DEFAULT_WORD_BUDGET).unwrap();
        assert!(!r.pass);
        assert_eq!(r.first_failure.unwrap().word.len(), 1);
        assert!(r.all_nonidentity);
    }

    #[test]
    fn freeness_matches_plain_enumeration() {
        // q = 3, short words: classify every enumerated word directly
        let d = SchottkyData::build_from_literal(3, 1, "T^-1").unwrap();
        let all_ok = enumerate_reduced_words(&d, 3, DEFAULT_WORD_BUDGET)
            .unwrap()
            .all(|(_, m)| m.classify() == MobiusClass::Hyperbolic);
        let r = freeness_check(&d, 3, DEFAULT_WORD_BUDGET).unwrap();
        assert_eq!(r.pass, all_ok);
        assert_eq!(r.words_tested, 8 + 56 + 392);
        assert_eq!(r.matrices_evaluated, freeness_matrix_count(4, 3));
    }

    #[test]
    fn normalizer_relations() {
        for (p, t) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let d = SchottkyData::build_from_literal(p, t, "T^-1").unwrap();
            let r = normalizer_relations_check(&d).unwrap();
            assert!(r.pass, "{p},{t}: {:?}", r.checks);
        }
        let d = SchottkyData::build_from_literal(3, 1, "T^-1").unwrap();
        let two = d.field.from_int(2);
        let du = Mobius::diagonal(&two).unwrap();
        let img = du.compose(&d.e_gens[0]).unwrap().compose(&du.inverse()).unwrap();
        assert!(img.proj_eq(&d.e_gens[1]));
    }
}
