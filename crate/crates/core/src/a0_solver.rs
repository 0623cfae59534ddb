//! Minimal trace over cyclic words with prescribed exponent sums.
//!
//! Words `A^{m_1} B^{n_1} ... A^{m_k} B^{n_k}` with `sum m_j = n0` and
//! `sum n_j = n1` are generated length by length from signed compositions.
//! Only the least rotation of each class is kept, so every class is seen
//! exactly once without a hash set. The search stops as soon as the
//! length-dependent trace floor exceeds the best trace found.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hyperbolic::rho_from_trace;
use crate::trace_theory::min_trace_lower_bound;
use crate::word_algebra::{canonical_cyclic, json_int, stats, CyclicWord, Syllable, Word};

/// Default refusal threshold for the estimated number of candidate words.
pub const DEFAULT_BUDGET: f64 = 1e8;

fn ser_big<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    json_int(x).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct A0Result {
    /// Pair actually enumerated, after symmetry reduction.
    pub n0: i64,
    pub n1: i64,
    /// Pair as requested by the caller.
    pub requested: (i64, i64),
    #[serde(serialize_with = "ser_big")]
    pub t_min: BigInt,
    pub witnesses: Vec<CyclicWord>,
    pub a0: f64,
    pub words_examined: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct A0Options {
    /// Reduce to the orbit representative with `n0 > n1 > 0` and the smallest
    /// seed trace before enumerating.
    pub reduce: bool,
    /// Skip the search-size guard.
    pub force: bool,
    pub budget: f64,
}

impl Default for A0Options {
    fn default() -> Self {
        A0Options {
            reduce: true,
            force: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

fn check_pair(n0: i64, n1: i64) -> Result<()> {
    if n0 == 0 || n1 == 0 || n0 == n1 {
        return Err(Error::domain(format!(
            "index pair ({n0}, {n1}) needs distinct nonzero entries"
        )));
    }
    if n0.unsigned_abs() > 1 << 20 || n1.unsigned_abs() > 1 << 20 {
        return Err(Error::domain("index pair too large"));
    }
    Ok(())
}

/// Orbit of `(n0, n1)` under swap, negation and `(n0, n1) -> (-n0, n1 - n0)`.
pub fn symmetry_orbit(n0: i64, n1: i64) -> BTreeSet<(i64, i64)> {
    let mut orbit = BTreeSet::new();
    let mut stack = vec![(n0, n1)];
    while let Some((x, y)) = stack.pop() {
        if orbit.insert((x, y)) {
            stack.push((y, x));
            stack.push((-x, -y));
            stack.push((-x, y - x));
        }
    }
    orbit
}

/// Representative with `n0 > n1 > 0` and the smallest seed trace `4 n0 n1 - 2`.
pub fn reduce_pair(n0: i64, n1: i64) -> Result<(i64, i64)> {
    check_pair(n0, n1)?;
    symmetry_orbit(n0, n1)
        .into_iter()
        .filter(|&(x, y)| x > y && y > 0)
        .min_by_key(|&(x, y)| (x * y, x))
        .ok_or_else(|| Error::domain("no representative with n0 > n1 > 0"))
}

/// Calls `f` for every sequence of `k` nonzero integers with the given sum
/// (when `sum` is `Some`) and the given sum of absolute values.
fn signed_compositions(sum: Option<i64>, abs_total: i64, k: usize, f: &mut dyn FnMut(&[i64])) {
    let mut buf = vec![0i64; k];
    fn rec(
        buf: &mut Vec<i64>,
        pos: usize,
        sum: Option<i64>,
        abs_left: i64,
        f: &mut dyn FnMut(&[i64]),
    ) {
        let left = buf.len() - pos;
        if left == 0 {
            if abs_left == 0 && sum.is_none_or(|s| s == 0) {
                f(buf);
            }
            return;
        }
        if left == 1 {
            match sum {
                Some(s) => {
                    if s != 0 && s.abs() == abs_left {
                        buf[pos] = s;
                        f(buf);
                    }
                }
                None => {
                    if abs_left > 0 {
                        buf[pos] = abs_left;
                        f(buf);
                        buf[pos] = -abs_left;
                        f(buf);
                    }
                }
            }
            return;
        }
        for a in 1..=abs_left - (left as i64 - 1) {
            for v in [a, -a] {
                let rest_abs = abs_left - a;
                if let Some(s) = sum {
                    let rest = s - v;
                    if rest.abs() > rest_abs || (rest_abs - rest).rem_euclid(2) != 0 {
                        continue;
                    }
                }
                buf[pos] = v;
                rec(buf, pos + 1, sum.map(|s| s - v), rest_abs, f);
            }
        }
    }
    if k == 0 {
        return;
    }
    rec(&mut buf, 0, sum, abs_total, f);
}

/// Whether the interleaved sequence `m_1, n_1, ..., m_k, n_k` is the least of
/// its rotations by whole `(m, n)` pairs.
fn is_least_rotation(ms: &[i64], ns: &[i64]) -> bool {
    let k = ms.len();
    'rot: for j in 1..k {
        for i in 0..k {
            let a = (ms[(i + j) % k], ns[(i + j) % k]);
            let b = (ms[i], ns[i]);
            if a != b {
                if a < b {
                    return false;
                }
                continue 'rot;
            }
        }
    }
    true
}

/// `|tr|` of `prod A^{m_j} B^{n_j}` using the block form
/// `A^m B^n = [[1 - 4mn, 2m], [-2n, 1]]`, in `i128` with a big-integer
/// fallback on overflow.
pub(crate) fn abs_trace(ms: &[i64], ns: &[i64]) -> BigInt {
    if let Some(t) = abs_trace_i128(ms, ns) {
        return BigInt::from(t);
    }
    Word::from_exponents(ms, ns).to_matrix().trace().abs()
}

fn abs_trace_i128(ms: &[i64], ns: &[i64]) -> Option<i128> {
    let (mut a, mut b, mut c, mut d) = (1i128, 0i128, 0i128, 1i128);
    for (&m, &n) in ms.iter().zip(ns) {
        let (m, n) = (m as i128, n as i128);
        let p = 1i128.checked_sub(4i128.checked_mul(m)?.checked_mul(n)?)?;
        let (q, r) = (2 * m, -2 * n);
        let na = a.checked_mul(p)?.checked_add(b.checked_mul(r)?)?;
        let nb = a.checked_mul(q)?.checked_add(b)?;
        let nc = c.checked_mul(p)?.checked_add(d.checked_mul(r)?)?;
        let nd = c.checked_mul(q)?.checked_add(d)?;
        (a, b, c, d) = (na, nb, nc, nd);
    }
    a.checked_add(d).map(i128::abs)
}

/// Work units `(k, la)` for words of exact length `len` with the given sums.
fn units(n0: Option<i64>, n1: Option<i64>, len: i64) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for k in 1..=(len / 2) as usize {
        for la in k as i64..=len - k as i64 {
            let lb = len - la;
            let ok_a = n0.is_none_or(|s| la >= s.abs() && (la - s).rem_euclid(2) == 0);
            let ok_b = n1.is_none_or(|s| lb >= s.abs() && (lb - s).rem_euclid(2) == 0);
            if ok_a && ok_b && lb >= k as i64 {
                out.push((k, la));
            }
        }
    }
    out
}

/// Canonical words in one work unit, each passed to `f` with its exponents.
fn for_each_in_unit(
    n0: Option<i64>,
    n1: Option<i64>,
    len: i64,
    (k, la): (usize, i64),
    f: &mut dyn FnMut(&[i64], &[i64]),
) {
    let lb = len - la;
    let mut ns_list: Vec<Vec<i64>> = Vec::new();
    signed_compositions(n1, lb, k, &mut |ns| ns_list.push(ns.to_vec()));
    signed_compositions(n0, la, k, &mut |ms| {
        for ns in &ns_list {
            if is_least_rotation(ms, ns) {
                f(ms, ns);
            }
        }
    });
}

/// Every canonical cyclic word with exponent sums `(n0, n1)` and length at
/// most `max_length`, each exactly once, ordered by length.
pub fn enumerate_words(n0: i64, n1: i64, max_length: i64) -> Result<Vec<CyclicWord>> {
    check_pair(n0, n1)?;
    let mut out = Vec::new();
    for len in n0.abs() + n1.abs()..=max_length {
        for unit in units(Some(n0), Some(n1), len) {
            for_each_in_unit(Some(n0), Some(n1), len, unit, &mut |ms, ns| {
                out.push(CyclicWord::from_reduced_exponents(ms, ns));
            });
        }
    }
    Ok(out)
}

/// Number of `k`-tuples of nonzero integers with sum `t` and absolute sum `r`.
fn composition_count(t: i64, r: i64, k: usize) -> f64 {
    if (r - t).rem_euclid(2) != 0 || t.abs() > r {
        return 0.0;
    }
    let pos = (r + t) / 2;
    let neg = (r - t) / 2;
    let mut total = 0.0;
    for j in 0..=k {
        total += binom(k as i64, j as i64)
            * positive_compositions(pos, j)
            * positive_compositions(neg, k - j);
    }
    total
}

fn positive_compositions(n: i64, parts: usize) -> f64 {
    if parts == 0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    binom(n - 1, parts as i64 - 1)
}

fn binom(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of exponent tuples generated for words of exact length `len`
/// (before the rotation filter).
pub fn length_size(n0: i64, n1: i64, len: i64) -> f64 {
    units(Some(n0), Some(n1), len)
        .into_iter()
        .map(|(k, la)| composition_count(n0, la, k) * composition_count(n1, len - la, k))
        .sum()
}

/// Exact minimal trace for the pair, with symmetry reduction and the default
/// search-size guard.
pub fn exact_a0(n0: i64, n1: i64) -> Result<A0Result> {
    exact_a0_with(n0, n1, A0Options::default())
}

pub fn exact_a0_with(n0: i64, n1: i64, opts: A0Options) -> Result<A0Result> {
    check_pair(n0, n1)?;
    let (e0, e1) = if opts.reduce {
        reduce_pair(n0, n1)?
    } else {
        (n0, n1)
    };
    let seed = abs_trace(&[e0], &[e1]);
    let mut best = seed.clone();
    let mut witnesses: Vec<CyclicWord> = vec![CyclicWord::from_reduced_exponents(&[e0], &[e1])];
    let mut examined: u64 = 0;
    let mut generated: u64 = 0;
    let mut len = e0.abs() + e1.abs();
    loop {
        let floor = BigInt::from(min_trace_lower_bound(len.max(2) as u64)?);
        if BigInt::from(2 * len) > best {
            break;
        }
        if floor <= best {
            let size = length_size(e0, e1, len);
            if !opts.force && generated as f64 + size > opts.budget {
                return Err(Error::Budget(format!(
                    "pair ({e0}, {e1}) needs about {:.3e} candidate words up to length {len}",
                    generated as f64 + size
                )));
            }
            generated += size as u64;
            let found: Vec<(BigInt, Vec<CyclicWord>, u64)> = units(Some(e0), Some(e1), len)
                .into_par_iter()
                .map(|unit| {
                    let mut local_best: Option<BigInt> = None;
                    let mut local_w = Vec::new();
                    let mut count = 0u64;
                    for_each_in_unit(Some(e0), Some(e1), len, unit, &mut |ms, ns| {
                        count += 1;
                        let t = abs_trace(ms, ns);
                        debug_assert!(
                            t != BigInt::from(2),
                            "peripheral word with distinct nonzero sums"
                        );
                        let better = local_best.as_ref().is_none_or(|b| &t < b);
                        if better {
                            local_best = Some(t);
                            local_w.clear();
                            local_w.push(CyclicWord::from_reduced_exponents(ms, ns));
                        } else if local_best.as_ref() == Some(&t) {
                            local_w.push(CyclicWord::from_reduced_exponents(ms, ns));
                        }
                    });
                    (
                        local_best.unwrap_or_else(|| seed.clone() + 1),
                        local_w,
                        count,
                    )
                })
                .collect();
            for (t, ws, count) in found {
                examined += count;
                if ws.is_empty() {
                    continue;
                }
                if t < best {
                    best = t;
                    witnesses = ws;
                } else if t == best {
                    witnesses.extend(ws);
                }
            }
        }
        len += 1;
    }
    witnesses.sort();
    witnesses.dedup();
    let a0 = rho_from_trace(best.to_f64().unwrap_or(f64::INFINITY));
    Ok(A0Result {
        n0: e0,
        n1: e1,
        requested: (n0, n1),
        t_min: best,
        witnesses,
        a0,
        words_examined: examined,
    })
}

/// Swaps the roles of `A` and `B` and re-canonicalizes.
pub fn swap_generators(w: &CyclicWord) -> CyclicWord {
    let s = w
        .syllables()
        .iter()
        .map(|s| Syllable::new(s.generator.other(), s.exponent));
    canonical_cyclic(&Word::new(s)).expect("nonempty word stays nonempty")
}

/// Applies `(A, B) -> (A^{-1}, B^{-1})` and re-canonicalizes.
pub fn invert_generators(w: &CyclicWord) -> CyclicWord {
    let s = w
        .syllables()
        .iter()
        .map(|s| Syllable::new(s.generator, -s.exponent));
    canonical_cyclic(&Word::new(s)).expect("nonempty word stays nonempty")
}

/// Non-peripheral classes with `|tr| <= t_max` whose exponent sums satisfy
/// `n0 n1 > 0` and `|n0| != |n1|`, one per orbit of generator swap and
/// simultaneous inversion. Each orbit is represented by its member with
/// `n0 > n1 > 0`. Sorted by trace, then length, then canonical form.
pub fn candidates_below_trace(t_max: u64) -> Vec<CyclicWord> {
    if t_max < 6 {
        return Vec::new();
    }
    let max_len = (t_max / 2) as i64;
    let mut found: BTreeSet<(u64, u64, CyclicWord)> = BTreeSet::new();
    for len in 2..=max_len {
        for unit in units(None, None, len) {
            for_each_in_unit(None, None, len, unit, &mut |ms, ns| {
                let n0: i64 = ms.iter().sum();
                let n1: i64 = ns.iter().sum();
                if n0 * n1 <= 0 || n0.abs() == n1.abs() {
                    return;
                }
                let t = abs_trace(ms, ns);
                if t <= BigInt::from(2) || t > BigInt::from(t_max) {
                    return;
                }
                let w = CyclicWord::from_reduced_exponents(ms, ns);
                let rep = orbit_representative(&w);
                found.insert((t.to_u64().unwrap(), len as u64, rep));
            });
        }
    }
    found.into_iter().map(|(_, _, w)| w).collect()
}

fn orbit_representative(w: &CyclicWord) -> CyclicWord {
    let images = [
        w.clone(),
        swap_generators(w),
        invert_generators(w),
        invert_generators(&swap_generators(w)),
    ];
    images
        .into_iter()
        .find(|x| {
            let s = stats(x);
            s.n0 > s.n1 && s.n1 > 0
        })
        .expect("one image has n0 > n1 > 0")
}

/// CSV table `n0,n1,t_min,a0,witnesses,words_examined` for a list of results.
pub fn results_csv(results: &[A0Result]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::domain(e.to_string());
    w.write_record(["n0", "n1", "t_min", "a0", "witnesses", "words_examined"])
        .map_err(io)?;
    for r in results {
        let ws: Vec<String> = r.witnesses.iter().map(|w| w.to_string()).collect();
        w.write_record([
            r.requested.0.to_string(),
            r.requested.1.to_string(),
            r.t_min.to_string(),
            format!("{:.12e}", r.a0),
            ws.join(";"),
            r.words_examined.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::domain(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word_algebra::{parse_word, trace};

    fn cw(text: &str) -> CyclicWord {
        canonical_cyclic(&parse_word(text).unwrap()).unwrap()
    }

    #[test]
    fn compositions_are_complete() {
        let mut seen = Vec::new();
        signed_compositions(Some(1), 3, 2, &mut |v| seen.push(v.to_vec()));
        seen.sort();
        assert_eq!(seen, vec![vec![-1, 2], vec![2, -1]]);
        for (t, r, k) in [(3, 5, 2), (0, 4, 3), (-2, 6, 3), (4, 4, 2)] {
            let mut n = 0;
            signed_compositions(Some(t), r, k, &mut |_| n += 1);
            assert_eq!(n as f64, composition_count(t, r, k), "{t} {r} {k}");
        }
    }

    #[test]
    fn enumerate_examples() {
        let ws = enumerate_words(2, 1, 3).unwrap();
        assert_eq!(ws, vec![cw("A^2 B")]);
        let ws = enumerate_words(3, 2, 5).unwrap();
        assert!(ws.contains(&cw("A^3 B^2")));
        assert!(ws.contains(&cw("A^2 B A B")));
        let set: BTreeSet<_> = ws.iter().cloned().collect();
        assert_eq!(set.len(), ws.len());
        assert!(enumerate_words(2, 1, 2).unwrap().is_empty());
        assert!(enumerate_words(1, 1, 4).is_err());
        assert!(enumerate_words(0, 1, 4).is_err());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        // All words of length <= 7 with sums (2, -1) by brute force over
        // exponent tuples, deduplicated by canonical form.
        let (n0, n1, max_len) = (2i64, -1i64, 7i64);
        let mut brute = BTreeSet::new();
        for k in 1..=3usize {
            let range: Vec<i64> = (-6..=6).filter(|&x| x != 0).collect();
            let mut idx = vec![0usize; 2 * k];
            loop {
                let ms: Vec<i64> = idx[..k].iter().map(|&i| range[i]).collect();
                let ns: Vec<i64> = idx[k..].iter().map(|&i| range[i]).collect();
                let len: i64 = ms.iter().chain(&ns).map(|x| x.abs()).sum();
                if ms.iter().sum::<i64>() == n0 && ns.iter().sum::<i64>() == n1 && len <= max_len {
                    brute.insert(canonical_cyclic(&Word::from_exponents(&ms, &ns)).unwrap());
                }
                let mut p = 0;
                while p < idx.len() {
                    idx[p] += 1;
                    if idx[p] < range.len() {
                        break;
                    }
                    idx[p] = 0;
                    p += 1;
                }
                if p == idx.len() {
                    break;
                }
            }
        }
        let ours: BTreeSet<_> = enumerate_words(n0, n1, max_len)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(ours, brute);
    }

    #[test]
    fn least_rotation_check_agrees_with_canonical_form() {
        let ms = [1, 2, 1];
        let ns = [1, 1, 3];
        let canon = CyclicWord::from_reduced_exponents(&ms, &ns);
        let rotations = [
            ([1, 2, 1], [1, 1, 3]),
            ([2, 1, 1], [1, 3, 1]),
            ([1, 1, 2], [3, 1, 1]),
        ];
        let leading: Vec<_> = rotations
            .iter()
            .filter(|(m, n)| is_least_rotation(m, n))
            .collect();
        assert_eq!(leading.len(), 1);
        let (m, n) = leading[0];
        assert_eq!(&Word::from_exponents(m, n).syllables(), &canon.syllables());
    }

    #[test]
    fn i128_trace_matches_bigint() {
        for (ms, ns) in [
            (vec![3, -1, 2], vec![1, 4, -2]),
            (vec![1], vec![1]),
            (vec![-5, 2], vec![2, 2]),
        ] {
            let w = Word::from_exponents(&ms, &ns);
            assert_eq!(abs_trace(&ms, &ns), w.to_matrix().trace().abs());
        }
        // Overflowing the fast path falls back to big integers.
        let ms = vec![1_000_000; 12];
        let ns = vec![1_000_000; 12];
        assert!(abs_trace_i128(&ms, &ns).is_none());
        let w = Word::from_exponents(&ms, &ns);
        assert_eq!(abs_trace(&ms, &ns), w.to_matrix().trace().abs());
    }

    #[test]
    fn orbit_and_reduction() {
        let o = symmetry_orbit(2, 1);
        assert!(o.contains(&(1, 2)) && o.contains(&(-2, -1)) && o.contains(&(-2, -1)));
        assert_eq!(reduce_pair(2, 1).unwrap(), (2, 1));
        assert_eq!(reduce_pair(1, 2).unwrap(), (2, 1));
        assert_eq!(reduce_pair(4, 3).unwrap(), (4, 1));
        assert_eq!(reduce_pair(-3, -1).unwrap(), (3, 1));
        assert!(reduce_pair(2, 2).is_err());
    }

    #[test]
    fn a0_two_one() {
        let r = exact_a0(2, 1).unwrap();
        assert_eq!(r.t_min, BigInt::from(6));
        assert_eq!(r.witnesses, vec![cw("A^2 B")]);
        assert!((r.a0 - 0.003701599).abs() < 1e-9);
    }

    #[test]
    fn a0_three_one_and_four_one() {
        let r = exact_a0(3, 1).unwrap();
        assert_eq!(r.t_min, BigInt::from(10));
        let closed = (-std::f64::consts::PI.powi(2) / (5.0 + 2.0 * 6f64.sqrt()).ln()).exp();
        assert!((r.a0 - closed).abs() < 1e-15);
        let r = exact_a0(4, 1).unwrap();
        assert_eq!(r.t_min, BigInt::from(14));
        assert!((r.a0 - 0.023585).abs() < 1e-6);
        for w in &r.witnesses {
            let s = stats(w);
            assert_eq!((s.n0, s.n1), (4, 1));
            assert_eq!(trace(w).abs(), BigInt::from(14));
        }
    }

    #[test]
    fn unreduced_search_agrees() {
        let opts = A0Options {
            reduce: false,
            force: true,
            ..A0Options::default()
        };
        for (a, b) in [(3, 2), (2, 3), (4, 3), (3, 4), (-2, -1)] {
            let direct = exact_a0_with(a, b, opts).unwrap();
            let reduced = exact_a0(a, b).unwrap();
            assert_eq!(direct.t_min, reduced.t_min, "({a}, {b})");
            assert_eq!((direct.n0, direct.n1), (a, b));
        }
    }

    #[test]
    fn budget_guard() {
        let opts = A0Options {
            budget: 10.0,
            ..A0Options::default()
        };
        assert!(matches!(exact_a0_with(5, 2, opts), Err(Error::Budget(_))));
        assert!(exact_a0_with(2, 1, opts).is_ok());
        let forced = A0Options {
            force: true,
            ..opts
        };
        assert!(exact_a0_with(5, 2, forced).is_ok());
        assert_eq!(length_size(2, 1, 3), 1.0);
    }

    #[test]
    fn candidates_examples() {
        let c = candidates_below_trace(14);
        let want: Vec<CyclicWord> = ["A^2 B", "A^3 B", "A^2 B A B", "A^4 B", "A^2 B A B A B"]
            .iter()
            .map(|t| cw(t))
            .collect();
        assert_eq!(c, want);
        let c: Vec<String> = candidates_below_trace(6)
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(c, vec!["A^2 B"]);
        assert!(candidates_below_trace(2).is_empty());
    }

    #[test]
    fn csv_table() {
        let r = exact_a0(2, 1).unwrap();
        let text = results_csv(&[r]).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n0,n1,t_min,a0,witnesses,words_examined"
        );
        assert!(lines.next().unwrap().starts_with("2,1,6,"));
    }
}
