//! Closed-form trace bounds and the exact polynomial trace of a generic word,
//! with a checker for the constant-sign property of its coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::acosh;
use crate::word_algebra::{chain_entries, Ring};

/// Sparse multivariate polynomial with big-integer coefficients.
///
/// Exponent vectors are stored without trailing zeros, so the number of
/// variables never has to be declared.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        IntPoly::monomial(Vec::new(), c)
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        IntPoly::monomial(e, 1)
    }

    pub fn monomial(exps: Vec<u32>, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(exps), c);
        }
        IntPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms
            .get(&trim(exps.to_vec()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        let mut total = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    t *= num_traits::pow(point[i].clone(), p as usize);
                }
            }
            total += t;
        }
        total
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

impl Add for IntPoly {
    type Output = IntPoly;

    fn add(mut self, rhs: IntPoly) -> IntPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: IntPoly) -> IntPoly {
        let mut out = IntPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let n = e1.len().max(e2.len());
                let e: Vec<u32> = (0..n)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;

    fn neg(mut self) -> IntPoly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Ring for IntPoly {
    fn from_i64(v: i64) -> Self {
        IntPoly::constant(v)
    }
}

/// Formats with variable names `x0, x1, ...` unless names are supplied via
/// [`IntPoly::display_with`].
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.terms.keys().map(Vec::len).max().unwrap_or(0))
            .map(|i| format!("x{i}"))
            .collect();
        write!(f, "{}", self.display_with(&names))
    }
}

impl IntPoly {
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // Highest total degree first reads more naturally.
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by_key(|(e, _)| std::cmp::Reverse(e.iter().sum::<u32>()));
        for (i, (e, c)) in items.into_iter().enumerate() {
            let mono = monomial_name(e, names);
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs == BigInt::from(1) {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }
}

fn monomial_name(e: &[u32], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &p) in e.iter().enumerate() {
        match p {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{p}", names[i])),
        }
    }
    parts.join("*")
}

/// Variable names `m1..mk, n1..nk`, matching the layout of [`trace_polynomial`].
pub fn mn_names(k: usize) -> Vec<String> {
    (1..=k)
        .map(|i| format!("m{i}"))
        .chain((1..=k).map(|j| format!("n{j}")))
        .collect()
}

/// Variable names `p1..pk, q1..qk` used by the sign check.
pub fn pq_names(k: usize) -> Vec<String> {
    (1..=k)
        .map(|i| format!("p{i}"))
        .chain((1..=k).map(|j| format!("q{j}")))
        .collect()
}

/// Lower bound on `|tr w|` for a non-peripheral cyclic word of the given length.
pub fn min_trace_lower_bound(length: u64) -> Result<u64> {
    if length < 2 {
        return Err(Error::domain("length must be at least 2"));
    }
    if length % 2 == 1 {
        Ok(2 * length)
    } else {
        Ok((2 * length).max(4 * length - 6))
    }
}

fn check_pair(n0: i64, n1: i64) -> Result<()> {
    if n1 < 1 || n0 <= n1 {
        return Err(Error::domain(format!(
            "index pair ({n0}, {n1}) must satisfy n0 > n1 >= 1"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NStar {
    pub nstar: i64,
    pub a0_lower: f64,
}

/// `N* = N` for odd `N = n0 + n1`, `2N - 3` for even `N`, and the bound
/// `exp(-pi^2 / acosh N*)`.
pub fn nstar_bound(n0: i64, n1: i64) -> Result<NStar> {
    check_pair(n0, n1)?;
    let n = n0 + n1;
    let nstar = if n % 2 == 1 { n } else { 2 * n - 3 };
    let pi2 = std::f64::consts::PI.powi(2);
    Ok(NStar {
        nstar,
        a0_lower: (-pi2 / acosh(nstar as f64)).exp(),
    })
}

/// Minimal-trace lower bound `2 (2 max(n0, n1) - 1)`.
pub fn baribaud_bound(n0: i64, n1: i64) -> Result<i64> {
    check_pair(n0, n1)?;
    Ok(2 * (2 * n0.max(n1) - 1))
}

/// `exp(-pi^2 / log(2 max(n0, n1)))`.
pub fn eq10_bound(n0: i64, n1: i64) -> Result<f64> {
    if n0 < 1 || n1 < 1 || n0 == n1 {
        return Err(Error::domain(format!(
            "index pair ({n0}, {n1}) must be distinct positive integers"
        )));
    }
    let mx = n0.max(n1);
    let pi2 = std::f64::consts::PI.powi(2);
    Ok((-pi2 / ((2 * mx) as f64).ln()).exp())
}

pub const DEFAULT_K_MAX: usize = 4;
pub const HARD_K_MAX: usize = 6;

/// Diagonal entries of `A^{m_1} B^{-n_1} ... A^{m_k} B^{-n_k}` as polynomials
/// in `m_1..m_k` (variables `0..k`) and `n_1..n_k` (variables `k..2k`).
#[derive(Debug, Clone)]
pub struct TracePolynomial {
    pub k: usize,
    pub a11: IntPoly,
    pub a22: IntPoly,
}

impl TracePolynomial {
    pub fn trace(&self) -> IntPoly {
        self.a11.clone() + self.a22.clone()
    }
}

pub fn trace_polynomial(k: usize) -> Result<TracePolynomial> {
    trace_polynomial_with_limit(k, DEFAULT_K_MAX)
}

pub fn trace_polynomial_with_limit(k: usize, k_max: usize) -> Result<TracePolynomial> {
    check_k(k, k_max)?;
    let ms: Vec<IntPoly> = (0..k).map(IntPoly::var).collect();
    let ns: Vec<IntPoly> = (0..k).map(|j| IntPoly::var(k + j)).collect();
    let [a11, _, _, a22] = chain_entries(&ms, &ns);
    Ok(TracePolynomial { k, a11, a22 })
}

fn check_k(k: usize, k_max: usize) -> Result<()> {
    let k_max = k_max.min(HARD_K_MAX);
    if k == 0 || k > k_max {
        return Err(Error::domain(format!("k = {k} outside 1..={k_max}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Signs of `m_1..m_k` followed by `n_1..n_k`.
    pub sign_pattern: Vec<i8>,
    pub monomial: String,
    pub coefficient: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub k: usize,
    pub sign_patterns_checked: u64,
    pub verified: bool,
    pub counterexample: Option<Counterexample>,
}

/// Trace polynomial after substituting `m_i = s_i (1 + p_i)`,
/// `n_j = t_j (1 + q_j)`; variables are `p_1..p_k, q_1..q_k`.
pub fn signed_trace(k: usize, signs: &[i8]) -> IntPoly {
    assert_eq!(signs.len(), 2 * k);
    let shifted = |v: usize| {
        let s = IntPoly::constant(signs[v] as i64);
        s * (IntPoly::constant(1) + IntPoly::var(v))
    };
    let ms: Vec<IntPoly> = (0..k).map(shifted).collect();
    let ns: Vec<IntPoly> = (0..k).map(|j| shifted(k + j)).collect();
    let [a11, _, _, a22] = chain_entries(&ms, &ns);
    a11 + a22
}

fn pattern(k: usize, index: u64) -> Vec<i8> {
    (0..2 * k)
        .map(|bit| if index >> bit & 1 == 1 { -1 } else { 1 })
        .collect()
}

/// First coefficient whose sign differs from that of `p_1 q_1 ... p_k q_k`.
fn check_pattern(k: usize, signs: &[i8]) -> Option<Counterexample> {
    let poly = signed_trace(k, signs);
    let top = poly.coeff(&vec![1; 2 * k]);
    let names = pq_names(k);
    let bad = |monomial: &[u32], coefficient: &BigInt| Counterexample {
        sign_pattern: signs.to_vec(),
        monomial: {
            let m = monomial_name(monomial, &names);
            if m.is_empty() {
                "1".into()
            } else {
                m
            }
        },
        coefficient: coefficient.to_string(),
    };
    if top.is_zero() {
        return Some(bad(&vec![1; 2 * k], &top));
    }
    let found = poly
        .terms()
        .find(|(_, c)| c.sign() != top.sign())
        .map(|(e, c)| bad(e, c));
    found
}

pub fn conjecture_check(k: usize) -> Result<ConjectureReport> {
    conjecture_check_with_limit(k, DEFAULT_K_MAX)
}

/// Checks all `4^k` sign patterns; patterns run in parallel and the first
/// failing pattern in index order is reported.
pub fn conjecture_check_with_limit(k: usize, k_max: usize) -> Result<ConjectureReport> {
    check_k(k, k_max)?;
    let count = 1u64 << (2 * k);
    let failures: Vec<Counterexample> = (0..count)
        .into_par_iter()
        .filter_map(|i| check_pattern(k, &pattern(k, i)))
        .collect();
    let counterexample = failures.into_iter().next();
    Ok(ConjectureReport {
        k,
        sign_patterns_checked: count,
        verified: counterexample.is_none(),
        counterexample,
    })
}
