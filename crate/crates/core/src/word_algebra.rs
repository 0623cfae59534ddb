//! Words in the free group on `A`, `B` and their images in Γ(2).
//!
//! `A = [[1, 2], [0, 1]]`, `B = [[1, 0], [-2, 1]]`. Matrices use
//! arbitrary-precision entries so traces of long words never overflow.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Generator {
    A,
    B,
}

impl Generator {
    pub fn other(self) -> Generator {
        match self {
            Generator::A => Generator::B,
            Generator::B => Generator::A,
        }
    }
}

/// A generator power. The derived order (generator first, then exponent
/// value) is the total order used for canonical rotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable {
    pub generator: Generator,
    pub exponent: i64,
}

impl Syllable {
    pub fn new(generator: Generator, exponent: i64) -> Self {
        Syllable {
            generator,
            exponent,
        }
    }

    pub fn a(exponent: i64) -> Self {
        Syllable::new(Generator::A, exponent)
    }

    pub fn b(exponent: i64) -> Self {
        Syllable::new(Generator::B, exponent)
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = match self.generator {
            Generator::A => "A",
            Generator::B => "B",
        };
        if self.exponent == 1 {
            write!(f, "{g}")
        } else {
            write!(f, "{g}^{}", self.exponent)
        }
    }
}

fn fmt_syllables(s: &[Syllable], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if s.is_empty() {
        return write!(f, "1");
    }
    for (i, syl) in s.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        write!(f, "{syl}")?;
    }
    Ok(())
}

/// Freely reduced word with alternating generators. May be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    /// Merges adjacent syllables of the same generator and drops zero exponents.
    pub fn new(raw: impl IntoIterator<Item = Syllable>) -> Self {
        let mut out: Vec<Syllable> = Vec::new();
        for s in raw {
            if s.exponent == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.generator == s.generator => {
                    last.exponent += s.exponent;
                    if last.exponent == 0 {
                        out.pop();
                    }
                }
                _ => out.push(s),
            }
        }
        Word { syllables: out }
    }

    /// Builds `A^{m_1} B^{n_1} ... A^{m_k} B^{n_k}`. Zero entries are allowed
    /// and merged away.
    pub fn from_exponents(ms: &[i64], ns: &[i64]) -> Self {
        assert_eq!(
            ms.len(),
            ns.len(),
            "exponent vectors must have equal length"
        );
        Word::new(
            ms.iter()
                .zip(ns)
                .flat_map(|(&m, &n)| [Syllable::a(m), Syllable::b(n)]),
        )
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn to_matrix(&self) -> Mat2Z {
        product_matrix(&self.syllables)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_syllables(&self.syllables, f)
    }
}

/// Conjugacy-class representative: cyclically reduced and stored as the
/// lexicographically least rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    syllables: Vec<Syllable>,
}

impl CyclicWord {
    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn to_matrix(&self) -> Mat2Z {
        product_matrix(&self.syllables)
    }

    pub fn as_word(&self) -> Word {
        Word {
            syllables: self.syllables.clone(),
        }
    }

    /// Exponents `(m_j)`, `(n_j)` of the form `A^{m_1} B^{n_1} ... A^{m_k} B^{n_k}`,
    /// padding pure powers with a zero exponent.
    pub fn exponent_vectors(&self) -> (Vec<i64>, Vec<i64>) {
        let s = &self.syllables;
        if s.len() == 1 {
            return match s[0].generator {
                Generator::A => (vec![s[0].exponent], vec![0]),
                Generator::B => (vec![0], vec![s[0].exponent]),
            };
        }
        let ms = s.iter().step_by(2).map(|x| x.exponent).collect();
        let ns = s.iter().skip(1).step_by(2).map(|x| x.exponent).collect();
        (ms, ns)
    }

    pub fn is_pure_power(&self) -> bool {
        self.syllables.len() == 1
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_syllables(&self.syllables, f)
    }
}

impl Serialize for CyclicWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WordStats {
    pub length: u64,
    pub n0: i64,
    pub n1: i64,
    pub k: usize,
}

/// Exact 2×2 integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2Z {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2Z {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2Z { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2Z::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2Z::from_i64(1, 0, 0, 1)
    }

    /// `A^m = [[1, 2m], [0, 1]]`
    pub fn a_pow(m: i64) -> Self {
        Mat2Z::new(One::one(), BigInt::from(m) * 2, Zero::zero(), One::one())
    }

    /// `B^n = [[1, 0], [-2n, 1]]`
    pub fn b_pow(n: i64) -> Self {
        Mat2Z::new(One::one(), Zero::zero(), BigInt::from(n) * -2, One::one())
    }

    pub fn syllable(s: Syllable) -> Self {
        match s.generator {
            Generator::A => Mat2Z::a_pow(s.exponent),
            Generator::B => Mat2Z::b_pow(s.exponent),
        }
    }

    pub fn mul(&self, o: &Mat2Z) -> Mat2Z {
        Mat2Z {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl fmt::Display for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for Mat2Z {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = [
            [json_int(&self.a), json_int(&self.b)],
            [json_int(&self.c), json_int(&self.d)],
        ];
        rows.serialize(s)
    }
}

/// JSON value for a big integer: a number when it fits in `i64`, a decimal
/// string otherwise.
pub fn json_int(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

fn product_matrix(s: &[Syllable]) -> Mat2Z {
    s.iter().fold(Mat2Z::identity(), |acc, &syl| {
        acc.mul(&Mat2Z::syllable(syl))
    })
}

/// Parses `A^k B^k ...`; `^1` may be omitted and `A^{-2}` braces are accepted.
pub fn parse_word(text: &str) -> Result<Word> {
    let mut raw = Vec::new();
    for tok in text.split_whitespace() {
        raw.push(parse_token(tok)?);
    }
    Ok(Word::new(raw))
}

fn parse_token(tok: &str) -> Result<Syllable> {
    let mut chars = tok.chars();
    let generator = match chars.next() {
        Some('A') | Some('a') => Generator::A,
        Some('B') | Some('b') => Generator::B,
        _ => return Err(Error::Parse(format!("malformed token `{tok}`"))),
    };
    let rest = chars.as_str();
    let exponent = if rest.is_empty() {
        1
    } else {
        let e = rest
            .strip_prefix('^')
            .ok_or_else(|| Error::Parse(format!("malformed token `{tok}`")))?;
        let e = e
            .strip_prefix('{')
            .and_then(|x| x.strip_suffix('}'))
            .unwrap_or(e);
        let v: i64 = e
            .parse()
            .map_err(|_| Error::Parse(format!("malformed exponent in `{tok}`")))?;
        if v.unsigned_abs() > i32::MAX as u64 {
            return Err(Error::Parse(format!("exponent out of range in `{tok}`")));
        }
        v
    };
    if exponent == 0 {
        return Err(Error::Parse(format!("zero exponent in `{tok}`")));
    }
    Ok(Syllable::new(generator, exponent))
}

/// Cyclically reduces `w` and returns its least rotation.
pub fn canonical_cyclic(w: &Word) -> Result<CyclicWord> {
    let mut s: Vec<Syllable> = w.syllables.clone();
    while s.len() >= 2 && s[0].generator == s[s.len() - 1].generator {
        let last = s.pop().unwrap();
        s[0].exponent += last.exponent;
        if s[0].exponent == 0 {
            s.remove(0);
        }
    }
    if s.is_empty() {
        return Err(Error::domain("word reduces to the identity"));
    }
    Ok(CyclicWord {
        syllables: least_rotation(&s),
    })
}

/// Least rotation of an already cyclically reduced alternating sequence.
pub(crate) fn least_rotation(s: &[Syllable]) -> Vec<Syllable> {
    let n = s.len();
    let mut best = 0;
    for start in 1..n {
        let cmp = (0..n)
            .map(|i| s[(start + i) % n].cmp(&s[(best + i) % n]))
            .find(|c| *c != Ordering::Equal)
            .unwrap_or(Ordering::Equal);
        if cmp == Ordering::Less {
            best = start;
        }
    }
    (0..n).map(|i| s[(best + i) % n]).collect()
}

impl CyclicWord {
    /// Canonical form of `A^{m_1} B^{n_1} ... A^{m_k} B^{n_k}` with all
    /// exponents nonzero. Cheaper than `canonical_cyclic` because no
    /// reduction is needed.
    pub fn from_reduced_exponents(ms: &[i64], ns: &[i64]) -> Self {
        debug_assert!(ms.iter().chain(ns).all(|&e| e != 0));
        let s: Vec<Syllable> = ms
            .iter()
            .zip(ns)
            .flat_map(|(&m, &n)| [Syllable::a(m), Syllable::b(n)])
            .collect();
        CyclicWord {
            syllables: least_rotation(&s),
        }
    }
}

pub fn to_matrix(w: &CyclicWord) -> Mat2Z {
    w.to_matrix()
}

pub fn trace(w: &CyclicWord) -> BigInt {
    w.to_matrix().trace()
}

pub fn stats(w: &CyclicWord) -> WordStats {
    let mut st = WordStats {
        length: 0,
        n0: 0,
        n1: 0,
        k: 0,
    };
    for s in &w.syllables {
        st.length += s.exponent.unsigned_abs();
        match s.generator {
            Generator::A => {
                st.n0 += s.exponent;
                st.k += 1;
            }
            Generator::B => st.n1 += s.exponent,
        }
    }
    st
}

pub fn is_peripheral(w: &CyclicWord) -> bool {
    trace(w).abs() == BigInt::from(2)
}

/// Commutative ring operations needed by the index-chain sums.
pub trait Ring: Clone + Add<Output = Self> + Mul<Output = Self> {
    fn from_i64(v: i64) -> Self;
}

impl Ring for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

/// Entries of `A^{m_1} B^{-n_1} ... A^{m_k} B^{-n_k}` from the chain sums.
///
/// With the factors listed as `m_1, n_1, m_2, n_2, ...`, every entry is a sum
/// over strictly increasing chains of positions that alternate between `m`
/// and `n` factors. A chain starting at an `m` and ending at an `n` feeds
/// `a11`, `m`..`m` feeds `a12`, `n`..`n` feeds `a21` and `n`..`m` feeds
/// `a22`. Each chain contributes the product of its factors times `2` per
/// factor. The empty chain contributes 1 to both diagonal entries.
///
/// Returns `[a11, a12, a21, a22]`.
pub fn chain_entries<R: Ring>(ms: &[R], ns: &[R]) -> [R; 4] {
    assert_eq!(ms.len(), ns.len());
    let k = ms.len();
    // Position p in 0..2k: even p is m_{p/2}, odd p is n_{p/2}.
    let factor = |p: usize| -> R {
        let v = if p.is_multiple_of(2) {
            ms[p / 2].clone()
        } else {
            ns[p / 2].clone()
        };
        v * R::from_i64(2)
    };
    // sums[start_parity][end_parity] collects every chain.
    let zero = R::from_i64(0);
    let mut sums = [[zero.clone(), zero.clone()], [zero.clone(), zero]];
    // ending[p] = sum over chains whose last element is p.
    let mut ending: Vec<[Option<R>; 2]> = vec![[None, None]; 2 * k];
    for p in 0..2 * k {
        let fp = factor(p);
        let parity = p % 2;
        // Chains of length one start here.
        let mut acc: [Option<R>; 2] = [None, None];
        acc[parity] = Some(fp.clone());
        // Extend chains that ended at an earlier position of the other parity.
        for q in (0..p).filter(|q| q % 2 != parity) {
            for start in 0..2 {
                if let Some(v) = &ending[q][start] {
                    let ext = v.clone() * fp.clone();
                    acc[start] = Some(match acc[start].take() {
                        Some(a) => a + ext,
                        None => ext,
                    });
                }
            }
        }
        for start in 0..2 {
            if let Some(v) = &acc[start] {
                sums[start][parity] = sums[start][parity].clone() + v.clone();
            }
        }
        ending[p] = acc;
    }
    let one = R::from_i64(1);
    let [[m_m, m_n], [n_m, n_n]] = sums;
    [one.clone() + m_n, m_m, n_n, one + n_m]
}

/// Matrix of `w` recomputed from the chain sums only.
pub fn entry_formulas(w: &CyclicWord) -> Mat2Z {
    let (ms, ns) = w.exponent_vectors();
    let ms: Vec<BigInt> = ms.into_iter().map(BigInt::from).collect();
    // The chain sums are written for B^{-n} factors.
    let ns: Vec<BigInt> = ns.into_iter().map(|n| BigInt::from(-n)).collect();
    let [a, b, c, d] = chain_entries(&ms, &ns);
    Mat2Z::new(a, b, c, d)
}

/// `|a| - |b| - |c| + |d|`
pub fn tau(m: &Mat2Z) -> BigInt {
    m.a.abs() - m.b.abs() - m.c.abs() + m.d.abs()
}

/// `|a| > |b| > |d|` and `|a| > |c| > |d|`
pub fn is_decreasing(m: &Mat2Z) -> bool {
    let (a, b, c, d) = (m.a.abs(), m.b.abs(), m.c.abs(), m.d.abs());
    a > b && b > d && a > c && c > d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cw(text: &str) -> CyclicWord {
        canonical_cyclic(&parse_word(text).unwrap()).unwrap()
    }

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2Z {
        Mat2Z::from_i64(a, b, c, d)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse_word("A^2 B").unwrap().syllables(),
            &[Syllable::a(2), Syllable::b(1)]
        );
        assert_eq!(
            parse_word("A A B").unwrap().syllables(),
            &[Syllable::a(2), Syllable::b(1)]
        );
        assert_eq!(
            parse_word("A B^-1 B").unwrap().syllables(),
            &[Syllable::a(1)]
        );
        assert_eq!(parse_word("A^{-2} b").unwrap().to_string(), "A^-2 B");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_word("A^0"), Err(Error::Parse(_))));
        assert!(matches!(parse_word("C^2"), Err(Error::Parse(_))));
        assert!(matches!(parse_word("A^x"), Err(Error::Parse(_))));
        assert!(matches!(parse_word("A2"), Err(Error::Parse(_))));
    }

    #[test]
    fn canonical_examples() {
        let w = Word::new([Syllable::b(1), Syllable::a(2)]);
        assert_eq!(canonical_cyclic(&w).unwrap().to_string(), "A^2 B");
        let w = Word::new([Syllable::a(1), Syllable::b(1), Syllable::a(1)]);
        assert_eq!(canonical_cyclic(&w).unwrap().to_string(), "A^2 B");
        assert_eq!(cw("A^3 B^-2").to_string(), "A^3 B^-2");
        assert_eq!(cw("B^4").to_string(), "B^4");
        assert!(canonical_cyclic(&parse_word("A B A^-1 B^-1 B A B^-1 A^-1").unwrap()).is_err());
        assert!(canonical_cyclic(&Word::default()).is_err());
        // Cyclic reduction that cancels a whole boundary pair.
        assert_eq!(cw("A B^2 A^-1").to_string(), "B^2");
    }

    #[test]
    fn rotations_share_canonical_form() {
        let a = cw("A^2 B A B^-3 A^-1 B");
        let b = cw("A B^-3 A^-1 B A^2 B");
        let c = cw("B A B^-3 A^-1 B A^2");
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.syllables()[0].generator, Generator::A);
    }

    #[test]
    fn matrix_examples() {
        assert_eq!(cw("A^2 B").to_matrix(), m(-7, 4, -2, 1));
        assert_eq!(trace(&cw("A^2 B")), BigInt::from(-6));
        assert_eq!(parse_word("A B A B").unwrap().to_matrix(), m(5, -4, 4, -3));
        assert_eq!(parse_word("A B^-1").unwrap().to_matrix(), m(5, 2, 2, 1));
        assert_eq!(trace(&cw("A B^-1")), BigInt::from(6));
    }

    #[test]
    fn ab_power_induction_formula() {
        for k in 1..8i64 {
            let w = parse_word(&vec!["A B"; k as usize].join(" ")).unwrap();
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let expect = m(
                sign * (2 * k + 1),
                sign * -2 * k,
                sign * 2 * k,
                sign * (1 - 2 * k),
            );
            assert_eq!(w.to_matrix(), expect, "k = {k}");
        }
    }

    #[test]
    fn trace_examples() {
        for mm in 1..5 {
            for nn in 1..5 {
                let w = CyclicWord::from_reduced_exponents(&[mm], &[nn]);
                assert_eq!(trace(&w), BigInt::from(2 - 4 * mm * nn));
            }
        }
        assert!(is_peripheral(&cw("A B A B A B")));
        for l in (3..15).step_by(2) {
            let text = format!("A {}", vec!["A B"; (l - 1) / 2].join(" "));
            assert_eq!(trace(&cw(&text)).abs(), BigInt::from(2 * l as i64));
        }
    }

    #[test]
    fn stats_examples() {
        assert_eq!(
            stats(&cw("A^2 B")),
            WordStats {
                length: 3,
                n0: 2,
                n1: 1,
                k: 1
            }
        );
        assert_eq!(
            stats(&cw("A^3 B^-2")),
            WordStats {
                length: 5,
                n0: 3,
                n1: -2,
                k: 1
            }
        );
        assert_eq!(
            stats(&cw("A^2 B A B")),
            WordStats {
                length: 5,
                n0: 3,
                n1: 2,
                k: 2
            }
        );
    }

    #[test]
    fn peripheral_examples() {
        assert!(is_peripheral(&cw("A B A B A B")));
        assert!(!is_peripheral(&cw("A^2 B")));
        assert!(is_peripheral(&cw("A^5")));
    }

    #[test]
    fn entry_formula_examples() {
        // k = 1, first-row closed form [[1 + 4mn, 2m], [2n, 1]] for A^m B^{-n}.
        let w = cw("A B^-1");
        let e = entry_formulas(&w);
        assert_eq!(e, m(5, 2, 2, 1));
        assert_eq!(e.trace(), BigInt::from(6));
        let w = cw("A^2 B^-3");
        assert_eq!(entry_formulas(&w), w.to_matrix());
        for text in [
            "A^5",
            "B^-3",
            "A^2 B A B",
            "A^-1 B^2 A^3 B^-1 A B^4",
            "A B^-2 A^-2 B^3 A B A^7 B^-1",
        ] {
            let w = cw(text);
            assert_eq!(entry_formulas(&w), w.to_matrix(), "{text}");
        }
    }

    #[test]
    fn tau_examples() {
        let x = m(-7, 4, -2, 1);
        assert_eq!(tau(&x), BigInt::from(2));
        assert!(is_decreasing(&x));
        let k = 3;
        let x = m(2 * k + 1, 2 * k, -2 * k, -(2 * k - 1));
        assert_eq!(tau(&x), BigInt::zero());
        let id = Mat2Z::identity();
        // |1| - 0 - 0 + |1| by the definition.
        assert_eq!(tau(&id), BigInt::from(2));
        assert!(!is_decreasing(&id));
    }

    #[test]
    fn matrix_serializes_to_rows() {
        let v = serde_json::to_value(m(-7, 4, -2, 1)).unwrap();
        assert_eq!(v, serde_json::json!([[-7, 4], [-2, 1]]));
        let big = BigInt::from(i64::MAX) * 4;
        assert_eq!(json_int(&big), serde_json::Value::from(big.to_string()));
    }
}
