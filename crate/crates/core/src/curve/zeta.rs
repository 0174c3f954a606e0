//! Zeta numerators from point counts.
//!
//! With `S_m = q^m + 1 - N_m` the power sums of the Frobenius eigenvalues,
//! the coefficients of `L(T) = sum a_k T^k` obey `k a_k = -sum_{i=1..k} S_i a_{k-i}`.
//! The first `g` counts fix `a_1..a_g`; the functional equation
//! `a_{2g-i} = q^{g-i} a_i` fills in the rest.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{count_affine, count_points, tower_count, CountMethod, CurveParams, DEFAULT_COUNT_BUDGET};
use crate::error::{Error, Result};
use crate::report::{all_pass, Check};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    q: u64,
    g: usize,
    coeffs: Vec<BigInt>,
}

impl LPolynomial {
    /// Validates `a_0 = 1` and the functional equation.
    pub fn new(q: u64, g: usize, coeffs: Vec<BigInt>) -> Result<Self> {
        let l = LPolynomial { q, g, coeffs };
        if l.coeffs.len() != 2 * g + 1 || !l.coeffs[0].is_one() || !l.satisfies_functional_equation() {
            return Err(Error::InvalidParameter("not a zeta numerator".into()));
        }
        Ok(l)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn satisfies_functional_equation(&self) -> bool {
        let q = BigInt::from(self.q);
        (0..=self.g).all(|i| {
            self.coeffs[2 * self.g - i] == q.pow((self.g - i) as u32) * &self.coeffs[i]
        })
    }

    /// Coefficients as JSON-friendly integers.
    pub fn to_json_ints(&self) -> Vec<JsonInt> {
        self.coeffs.iter().map(JsonInt::from).collect()
    }

    fn a(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }
}

/// An integer that serializes as a JSON number when it fits, else a string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> Self {
        v.to_i64().map_or_else(|| JsonInt::Big(v.to_string()), JsonInt::Small)
    }
}

fn power_sum(q: u64, m: usize, n: u64) -> BigInt {
    BigInt::from(q).pow(m as u32) + 1 - BigInt::from(n)
}

/// Builds `L` from `N_1..N_g`.
pub fn lpoly_from_counts(counts: &[u64], q: u64, g: usize) -> Result<LPolynomial> {
    if counts.len() != g {
        return Err(Error::InvalidParameter(format!(
            "expected {g} counts, got {}",
            counts.len()
        )));
    }
    let s: Vec<BigInt> = counts
        .iter()
        .enumerate()
        .map(|(i, &n)| power_sum(q, i + 1, n))
        .collect();
    let mut a = vec![BigInt::zero(); 2 * g + 1];
    a[0] = BigInt::one();
    for k in 1..=g {
        let sum: BigInt = (1..=k).map(|i| &s[i - 1] * &a[k - i]).sum();
        let (quot, rem) = (-sum).div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(Error::NonIntegral(k));
        }
        a[k] = quot;
    }
    let qb = BigInt::from(q);
    for i in 0..g {
        a[2 * g - i] = qb.pow((g - i) as u32) * &a[i];
    }
    Ok(LPolynomial { q, g, coeffs: a })
}

/// `N_m` as predicted by `L`.
pub fn predict_count(l: &LPolynomial, m: usize) -> BigInt {
    let mut s: Vec<BigInt> = Vec::with_capacity(m);
    for k in 1..=m {
        let tail: BigInt = (1..k).map(|i| &s[i - 1] * l.a(k - i)).sum();
        s.push(-(BigInt::from(k) * l.a(k)) - tail);
    }
    BigInt::from(l.q).pow(m as u32) + 1 - &s[m - 1]
}

/// `(N - q^m - 1)^2 <= 4 g^2 q^m`.
pub fn weil_check(n: u64, q: u64, m: usize, g: usize) -> bool {
    let qm = BigInt::from(q).pow(m as u32);
    let dev = BigInt::from(n) - &qm - 1;
    let g = BigInt::from(g);
    &dev * &dev <= BigInt::from(4) * &g * &g * qm
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusOptions {
    /// Cumulative field-element iterations for the trace counts.
    pub budget: u128,
    /// Naive cross-checks run where `q^(2m)` stays below this.
    pub naive_budget: u128,
    /// Tower cross-checks run where `q^m` stays below this.
    pub tower_budget: u128,
}

impl Default for GenusOptions {
    fn default() -> Self {
        GenusOptions {
            budget: DEFAULT_COUNT_BUDGET,
            naive_budget: 1_000_000,
            tower_budget: 1 << 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRecord {
    pub m: usize,
    #[serde(rename = "N")]
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub m: usize,
    pub predicted: JsonInt,
    pub computed: u64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusReport {
    pub p: u64,
    pub t: usize,
    pub c: String,
    pub g: usize,
    #[serde(rename = "L")]
    pub l: Vec<JsonInt>,
    pub counts: Vec<CountRecord>,
    pub predictions: Vec<Prediction>,
    pub predictions_checked: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Largest `M` with `sum_{m=1..M} q^m <= budget`.
fn max_extension(q: u64, budget: u128) -> usize {
    let mut spent = 0u128;
    let mut m = 0usize;
    let mut size = 1u128;
    loop {
        let Some(next) = size.checked_mul(q as u128) else {
            return m;
        };
        if spent + next > budget {
            return m;
        }
        spent += next;
        size = next;
        m += 1;
    }
}

fn cumulative_cost(q: u64, upto: usize) -> u128 {
    (1..=upto)
        .map(|m| (q as u128).checked_pow(m as u32).unwrap_or(u128::MAX))
        .fold(0u128, |a, b| a.saturating_add(b))
}

fn point_counts(params: &CurveParams, upto: usize, budget: u128) -> Result<Vec<u64>> {
    (1..=upto)
        .map(|m| {
            let n = count_points(params, m, budget)?;
            log::info!("N_{m} = {n}");
            Ok(n)
        })
        .collect()
}

/// Checks the genus hypothesis `g = (q-1)^2` against out-of-sample counts.
pub fn verify_genus(params: &CurveParams, opts: &GenusOptions) -> Result<GenusReport> {
    let q = params.q();
    let g = params.genus();
    let needed = cumulative_cost(q, g + 1);
    let m_max = max_extension(q, opts.budget);
    if m_max <= g {
        return Err(Error::BudgetExceeded {
            needed,
            budget: opts.budget,
        });
    }
    let counts = point_counts(params, m_max, opts.budget)?;
    let l = lpoly_from_counts(&counts[..g], q, g)?;

    let mut checks = Vec::new();
    checks.push(Check::new(
        "n1_is_2q",
        counts[0] == 2 * q,
        format!("N_1 = {}, 2q = {}", counts[0], 2 * q),
    ));
    checks.push(Check::new(
        "functional_equation",
        l.coeffs[0].is_one() && l.satisfies_functional_equation(),
        format!("a_2g = {}", l.coeffs[2 * g]),
    ));
    let roundtrip = (1..=g).all(|m| predict_count(&l, m) == BigInt::from(counts[m - 1]));
    checks.push(Check::new("round_trip", roundtrip, format!("m = 1..{g}")));

    let predictions: Vec<Prediction> = (g + 1..=m_max)
        .map(|m| {
            let predicted = predict_count(&l, m);
            let computed = counts[m - 1];
            Prediction {
                m,
                ok: predicted == BigInt::from(computed),
                predicted: JsonInt::from(&predicted),
                computed,
            }
        })
        .collect();
    let bad: Vec<usize> = predictions.iter().filter(|p| !p.ok).map(|p| p.m).collect();
    checks.push(Check::new(
        "out_of_sample",
        bad.is_empty(),
        format!("m = {}..{m_max}, mismatches {bad:?}", g + 1),
    ));

    let weil_bad: Vec<usize> = (1..=m_max)
        .filter(|&m| !weil_check(counts[m - 1], q, m, g))
        .collect();
    checks.push(Check::new(
        "weil",
        weil_bad.is_empty(),
        format!("violations at m = {weil_bad:?}"),
    ));

    let mut naive_ms = Vec::new();
    let mut naive_bad = Vec::new();
    for m in 1..=m_max {
        match params.ext_size(m) {
            Some(s) if s.saturating_mul(s) <= opts.naive_budget => {}
            _ => break,
        }
        let naive = count_affine(params, m, CountMethod::Naive, opts.naive_budget)?;
        if naive + 2 * q != counts[m - 1] {
            naive_bad.push(m);
        }
        naive_ms.push(m);
    }
    checks.push(Check::new(
        "naive_vs_trace",
        naive_bad.is_empty(),
        format!("m = {naive_ms:?}, mismatches {naive_bad:?}"),
    ));

    let mut tower_ms = Vec::new();
    let mut tower_bad = Vec::new();
    for m in 1..=m_max {
        match params.ext_size(m) {
            Some(s) if s <= opts.tower_budget => {}
            _ => break,
        }
        if tower_count(params, m, opts.tower_budget)?.total != counts[m - 1] {
            tower_bad.push(m);
        }
        tower_ms.push(m);
    }
    checks.push(Check::new(
        "tower",
        tower_bad.is_empty(),
        format!("m = {tower_ms:?}, mismatches {tower_bad:?}"),
    ));

    let pass = all_pass(&checks);
    Ok(GenusReport {
        p: params.p(),
        t: params.t(),
        c: params.c().to_string(),
        g,
        l: l.to_json_ints(),
        counts: counts
            .iter()
            .enumerate()
            .map(|(i, &n)| CountRecord { m: i + 1, n })
            .collect(),
        predictions_checked: predictions.len(),
        predictions,
        checks,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusSearch {
    pub tried: Vec<usize>,
    pub consistent: Vec<usize>,
    /// The consistent value when there is exactly one.
    pub genus: Option<usize>,
}

/// Tries every `g` in `1..=g_max` that the budget leaves room to test
/// out of sample.
pub fn search_genus(params: &CurveParams, g_max: usize, budget: u128) -> Result<GenusSearch> {
    let q = params.q();
    let m_max = max_extension(q, budget);
    if m_max < 2 {
        return Err(Error::BudgetExceeded {
            needed: cumulative_cost(q, 2),
            budget,
        });
    }
    let counts = point_counts(params, m_max, budget)?;
    let mut tried = Vec::new();
    let mut consistent = Vec::new();
    for g in 1..=g_max.min(m_max - 1) {
        tried.push(g);
        let Ok(l) = lpoly_from_counts(&counts[..g], q, g) else {
            continue;
        };
        let ok = (g + 1..=m_max).all(|m| predict_count(&l, m) == BigInt::from(counts[m - 1]))
            && (1..=m_max).all(|m| weil_check(counts[m - 1], q, m, g));
        if ok {
            consistent.push(g);
        }
    }
    let genus = (consistent.len() == 1).then(|| consistent[0]);
    Ok(GenusSearch {
        tried,
        consistent,
        genus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn lpoly_examples() {
        assert_eq!(lpoly_from_counts(&[4], 2, 1).unwrap().coeffs(), ints(&[1, 1, 2]).as_slice());
        assert_eq!(lpoly_from_counts(&[3], 2, 1).unwrap().coeffs(), ints(&[1, 0, 2]).as_slice());
        // a_1 = 1, a_2 = 2 over q = 2: S_1 = -1, S_2 = -(2*2) - S_1*a_1 = -3
        let l = lpoly_from_counts(&[4, 8], 2, 2).unwrap();
        assert_eq!(l.coeffs(), ints(&[1, 1, 2, 2, 4]).as_slice());
        assert!(matches!(lpoly_from_counts(&[4, 7], 2, 2), Err(Error::NonIntegral(2))));
        assert!(lpoly_from_counts(&[4], 2, 2).is_err());
    }

    #[test]
    fn predict_examples() {
        let l = LPolynomial::new(2, 1, ints(&[1, 1, 2])).unwrap();
        assert_eq!(predict_count(&l, 2), BigInt::from(8));
        let l = LPolynomial::new(2, 1, ints(&[1, 0, 2])).unwrap();
        assert_eq!(predict_count(&l, 1), BigInt::from(3));
        assert!(LPolynomial::new(2, 1, ints(&[1, 0, 3])).is_err());
    }

    #[test]
    fn weil_examples() {
        assert!(weil_check(4, 2, 1, 1));
        assert!(weil_check(2u64.pow(10) + 1, 2, 10, 0));
        assert!(!weil_check(100, 2, 1, 1));
    }

    #[test]
    fn genus_small() {
        let x = CurveParams::from_literal(2, 1, "1").unwrap();
        let opts = GenusOptions {
            budget: 1 << 16,
            ..GenusOptions::default()
        };
        let r = verify_genus(&x, &opts).unwrap();
        assert!(r.pass, "{:?}", r.checks);
        assert_eq!(r.l, vec![JsonInt::Small(1), JsonInt::Small(1), JsonInt::Small(2)]);
        assert!(r.predictions_checked >= 1);
    }

    #[test]
    fn genus_budget_too_small() {
        let x = CurveParams::from_literal(3, 1, "1").unwrap();
        let opts = GenusOptions {
            budget: 100,
            ..GenusOptions::default()
        };
        assert!(matches!(verify_genus(&x, &opts), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn search_finds_one() {
        let x = CurveParams::from_literal(2, 1, "1").unwrap();
        let s = search_genus(&x, 4, 1 << 14).unwrap();
        assert_eq!(s.genus, Some(1));
    }
}
