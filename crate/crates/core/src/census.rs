//! Square-completing quadruples, witness censuses and the checks built on
//! them.
//!
//! A quadruple `(a, ell, b, c)` is square-completing in `W` when the factors
//! `[a, a + ell)` and `[a + ell, a + 2 ell)` of `W +_b c` coincide. Indices
//! follow the word conventions: `a` is a 1-based letter index of the
//! extended word and `b` is a gap of `W`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::extremal::{insertion_square, is_extremal};
use crate::square::{is_square_free, squares_containing};
use crate::word::{insert_letters, Letter, Word};

/// Which half of the completed square holds the inserted letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    /// First half: `b <= a + ell - 2`.
    Plus,
    /// Second half: `b >= a + ell - 1`.
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quadruple {
    pub a: usize,
    pub ell: usize,
    pub b: usize,
    pub c: Letter,
}

impl Quadruple {
    pub fn new(a: usize, ell: usize, b: usize, c: Letter) -> Self {
        Quadruple { a, ell, b, c }
    }

    pub fn sign(&self) -> Sign {
        sign(self)
    }
}

impl Serialize for Quadruple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Quadruple", 5)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("ell", &self.ell)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("c", &self.c)?;
        st.serialize_field("sign", &self.sign())?;
        st.end()
    }
}

pub fn sign(q: &Quadruple) -> Sign {
    if q.b + 2 <= q.a + q.ell {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Literal check of the defining equality on `W +_b c`.
pub fn is_square_completing(w: &Word, q: &Quadruple) -> Result<bool> {
    w.check_gap(q.b)?;
    w.check_letter(q.c)?;
    let m = w.len() + 1;
    if q.ell == 0 {
        return Err(Error::range("half-length", 0, 1, m / 2));
    }
    if q.a == 0 || q.a + 2 * q.ell > m + 1 {
        return Err(Error::range(
            "square start",
            q.a,
            1,
            (m + 1).saturating_sub(2 * q.ell),
        ));
    }
    let ext = w.insert_at_gap(q.b, q.c)?;
    Ok(ext.factor(q.a, q.a + q.ell)? == ext.factor(q.a + q.ell, q.a + 2 * q.ell)?)
}

/// Canonical witness for the pair `(b, c)`: the square-completing quadruple
/// with the smallest `ell`, then the smallest `a`.
pub fn witness(w: &Word, b: usize, c: Letter) -> Result<Option<Quadruple>> {
    w.check_gap(b)?;
    w.check_letter(c)?;
    let s = w.as_slice();
    if is_square_free(w) {
        return Ok(insertion_square(s, b, c).map(|(a, ell)| Quadruple::new(a + 1, ell, b, c)));
    }
    // Squares of W itself may survive the insertion; fall back to a scan.
    let ext = insert_letters(s, b, c);
    let m = ext.len();
    for ell in 1..=m / 2 {
        for a in 0..=m - 2 * ell {
            if ext[a..a + ell] == ext[a + ell..a + 2 * ell] {
                return Ok(Some(Quadruple::new(a + 1, ell, b, c)));
            }
        }
    }
    Ok(None)
}

/// One canonical witness per blocked pair `(b, c)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    #[serde(rename = "n")]
    pub word_length: usize,
    #[serde(rename = "k")]
    pub alphabet_size: u32,
    pub exclude_adjacent: bool,
    /// Sorted by `(b, c)`; at most one entry per pair.
    pub entries: Vec<Quadruple>,
    /// `ell -> |A_ell|`.
    pub histogram: BTreeMap<usize, usize>,
}

impl Census {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count_at(&self, ell: usize) -> usize {
        self.histogram.get(&ell).copied().unwrap_or(0)
    }
}

/// Builds the witness census of a square-free word. With `exclude_adjacent`
/// the pairs whose letter equals a neighbour of the gap are skipped, which
/// leaves only witnesses with `ell >= 2`.
pub fn build_census(w: &Word, exclude_adjacent: bool) -> Result<Census> {
    if !is_square_free(w) {
        return Err(Error::Precondition(format!(
            "census requires a square-free word, {w} is not"
        )));
    }
    let s = w.as_slice();
    let entries: Vec<Quadruple> = (0..=w.len())
        .into_par_iter()
        .flat_map_iter(|b| {
            let adjacent = if exclude_adjacent && !w.is_empty() {
                w.adjacent_letters(b).expect("gap in range")
            } else {
                Vec::new()
            };
            w.alphabet()
                .filter(move |c| !adjacent.contains(c))
                .filter_map(move |c| {
                    insertion_square(s, b, c).map(|(a, ell)| Quadruple::new(a + 1, ell, b, c))
                })
        })
        .collect();
    let mut histogram = BTreeMap::new();
    for q in &entries {
        *histogram.entry(q.ell).or_insert(0) += 1;
    }
    Ok(Census {
        word_length: w.len(),
        alphabet_size: w.alphabet_size(),
        exclude_adjacent,
        entries,
        histogram,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `|A_L| <= 2n / (L - 1)` for `L >= 2`.
    PerLength,
    /// `sum_{ell = L}^{2L - 1} |A_ell| <= 320n / L` for `L >= 300`.
    Window,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Ok,
    /// Nothing to count: the bounded quantity is zero.
    Vacuous,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub kind: BoundKind,
    #[serde(rename = "L")]
    pub length: usize,
    pub actual: usize,
    pub limit: f64,
    pub slack: f64,
    pub status: BoundStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
    pub violations: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A census together with its bound checks, as written by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusDocument {
    pub word: Word,
    #[serde(flatten)]
    pub census: Census,
    pub bounds: Vec<BoundCheck>,
    pub violations: Vec<BoundCheck>,
}

impl CensusDocument {
    pub fn new(word: &Word, census: Census) -> Self {
        let BoundReport { checks, violations } = verify_counting_bounds(&census);
        CensusDocument {
            word: word.clone(),
            census,
            bounds: checks,
            violations,
        }
    }
}

/// Smallest `L` for which the window bound is asserted.
pub const WINDOW_MIN_LENGTH: usize = 300;

/// Evaluates both counting bounds on a census. Comparisons are exact
/// integer arithmetic; `limit` and `slack` are for display.
pub fn verify_counting_bounds(census: &Census) -> BoundReport {
    let n = census.word_length;
    let mut checks = Vec::new();
    for (&len, &actual) in census.histogram.range(2..) {
        // actual <= 2n / (len - 1)
        let ok = actual * (len - 1) <= 2 * n;
        let limit = 2.0 * n as f64 / (len - 1) as f64;
        checks.push(BoundCheck {
            kind: BoundKind::PerLength,
            length: len,
            actual,
            limit,
            slack: limit - actual as f64,
            status: if ok {
                BoundStatus::Ok
            } else {
                BoundStatus::Violated
            },
        });
    }
    let max_ell = census.histogram.keys().next_back().copied().unwrap_or(0);
    for len in WINDOW_MIN_LENGTH..=max_ell.max(WINDOW_MIN_LENGTH) {
        let actual: usize = census.histogram.range(len..2 * len).map(|(_, v)| v).sum();
        let limit = 320.0 * n as f64 / len as f64;
        let status = if actual == 0 {
            BoundStatus::Vacuous
        } else if actual * len <= 320 * n {
            BoundStatus::Ok
        } else {
            BoundStatus::Violated
        };
        checks.push(BoundCheck {
            kind: BoundKind::Window,
            length: len,
            actual,
            limit,
            slack: limit - actual as f64,
            status,
        });
    }
    let violations = checks
        .iter()
        .filter(|c| c.status == BoundStatus::Violated)
        .cloned()
        .collect();
    BoundReport { checks, violations }
}

/// All square-completing quadruples of a square-free word with
/// `ell <= ell_max`, ordered by `(b, c, ell, a)`.
pub fn square_completing_quadruples(w: &Word, ell_max: usize) -> Result<Vec<Quadruple>> {
    if !is_square_free(w) {
        return Err(Error::Precondition(format!("{w} is not square-free")));
    }
    let s = w.as_slice();
    Ok((0..=w.len())
        .into_par_iter()
        .flat_map_iter(|b| {
            w.alphabet().flat_map(move |c| {
                let ext = insert_letters(s, b, c);
                squares_containing(&ext, b, ell_max)
                    .into_iter()
                    .map(move |(a, ell)| Quadruple::new(a + 1, ell, b, c))
            })
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PropositionClause {
    /// Neither a coordinate gap of at least `L/5 - 2` nor `(b, c) = (b', c')`.
    Separation,
    /// Equal lengths with `|a - a'| < L - 1` and `(b, c) != (b', c')`.
    EqualLength,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropositionViolation {
    pub first: Quadruple,
    pub second: Quadruple,
    pub clause: PropositionClause,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropositionReport {
    pub n: usize,
    pub ell_max: usize,
    pub quadruples: usize,
    pub violations: Vec<PropositionViolation>,
}

/// Default length cap: the longest square that fits in an extension.
pub fn default_ell_max(w: &Word) -> usize {
    w.len().div_ceil(2)
}

/// Pair check of two same-sign quadruples; `None` when the dichotomy holds.
pub fn proposition_clause_failed(q: &Quadruple, r: &Quadruple) -> Option<PropositionClause> {
    debug_assert_eq!(q.sign(), r.sign());
    if q.b == r.b && q.c == r.c {
        return None;
    }
    let big = q.ell.max(r.ell) as i64;
    let far = |x: usize, y: usize| 5 * (x as i64 - y as i64).abs() >= big - 10;
    if !(far(q.a, r.a) || far(q.b, r.b) || far(q.ell, r.ell)) {
        return Some(PropositionClause::Separation);
    }
    if q.ell == r.ell && ((q.a as i64 - r.a as i64).abs()) < big - 1 {
        return Some(PropositionClause::EqualLength);
    }
    None
}

/// Enumerates every square-completing quadruple with `ell <= ell_max` and
/// checks the same-sign dichotomy on all pairs.
pub fn verify_key_proposition(w: &Word, ell_max: usize) -> Result<PropositionReport> {
    let all = square_completing_quadruples(w, ell_max)?;
    let mut violations = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let mut group: Vec<Quadruple> = all.iter().filter(|q| q.sign() == sign).copied().collect();
        group.sort_by_key(|q| (q.a, q.ell, q.b, q.c));
        // A failing pair always has |a - a'| < L - 1 < ell_max.
        let found: Vec<PropositionViolation> = (0..group.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let q = group[i];
                group[i + 1..]
                    .iter()
                    .take_while(move |r| r.a < q.a + ell_max)
                    .filter_map(move |r| {
                        proposition_clause_failed(&q, r).map(|clause| PropositionViolation {
                            first: q,
                            second: *r,
                            clause,
                        })
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        violations.extend(found);
    }
    Ok(PropositionReport {
        n: w.len(),
        ell_max,
        quadruples: all.len(),
        violations,
    })
}

/// Largest `ell` handled by the per-length bound in the constant below;
/// longer witnesses are covered by dyadic windows starting at this value + 1.
pub const HARMONIC_CUTOFF: usize = 319;

/// `sum_{ell=2}^{319} 2/(ell - 1) + sum_{j>=0} 320/(320 * 2^j)`, i.e.
/// `2 H_318 + 2`, exactly. Any witness census has fewer than this many
/// entries per letter of the word.
pub fn theorem2_constant() -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let harmonic = (1..HARMONIC_CUTOFF).fold(BigRational::zero(), |acc, m| {
        acc + BigRational::new(BigInt::one(), BigInt::from(m))
    });
    &two * harmonic + two
}

/// `14.7` as a rational; the census size bound per letter.
pub fn census_bound_per_letter() -> BigRational {
    BigRational::new(BigInt::from(147), BigInt::from(10))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    NotExtremal,
    /// Fewer than 17 letters: the count cannot rule extremality out.
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockedPairReport {
    pub n: usize,
    pub k: u32,
    /// `|A|` with adjacent letters excluded.
    pub census_size: usize,
    /// `(k - 2)(n + 1)`: the census size every extremal word would reach.
    pub threshold: u64,
    /// `14.7 n`, display only.
    pub limit: f64,
    pub bound_status: BoundStatus,
    pub conclusion: Conclusion,
    /// Direct extremality decision, computed whenever a conclusion is drawn.
    pub extremal_direct: Option<bool>,
    pub violations: Vec<String>,
}

/// Minimum alphabet size at which `(k - 2)(n + 1) > 14.7 n` for every `n`.
pub const NON_EXTREMAL_ALPHABET: u32 = 17;

/// Compares the non-adjacent census size against `14.7 n` and against the
/// `(k - 2)(n + 1)` count an extremal word would need.
pub fn blocked_pair_count_check(w: &Word) -> Result<BlockedPairReport> {
    let census = build_census(w, true)?;
    let n = w.len();
    let k = w.alphabet_size();
    let size = census.len();
    let bound_status = if n == 0 {
        BoundStatus::Vacuous
    } else if 10 * size < 147 * n {
        BoundStatus::Ok
    } else {
        BoundStatus::Violated
    };
    let threshold = u64::from(k.saturating_sub(2)) * (n as u64 + 1);
    let mut violations = Vec::new();
    if bound_status == BoundStatus::Violated {
        violations.push(format!("census size {size} is not below 14.7 * {n}"));
    }
    let (conclusion, extremal_direct) = if k >= NON_EXTREMAL_ALPHABET {
        let direct = is_extremal(w).extremal;
        if direct {
            violations.push(format!("{w} is extremal over {k} letters"));
        }
        if (size as u64) >= threshold {
            violations.push(format!(
                "census size {size} reaches the extremal threshold {threshold}"
            ));
        }
        (Conclusion::NotExtremal, Some(direct))
    } else {
        (Conclusion::Inapplicable, None)
    };
    Ok(BlockedPairReport {
        n,
        k,
        census_size: size,
        threshold,
        limit: 14.7 * n as f64,
        bound_status,
        conclusion,
        extremal_direct,
        violations,
    })
}

/// Decimal rendering used in reports.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::is_extremal;

    fn w(text: &str, k: u32) -> Word {
        Word::parse(text, k).unwrap()
    }

    #[test]
    fn completing_examples() {
        let abcab = w("abcab", 3);
        let q = Quadruple::new(1, 3, 5, Letter(2));
        assert!(is_square_completing(&abcab, &q).unwrap());
        assert_eq!(q.sign(), Sign::Minus);

        let aba = w("aba", 3);
        let q = Quadruple::new(2, 1, 2, Letter(1));
        assert!(is_square_completing(&aba, &q).unwrap());
        assert_eq!(q.sign(), Sign::Minus);
        assert!(!is_square_completing(&aba, &Quadruple::new(1, 2, 1, Letter(1))).unwrap());

        assert!(is_square_completing(&aba, &Quadruple::new(2, 2, 1, Letter(1))).is_err());
        assert!(is_square_completing(&aba, &Quadruple::new(1, 1, 4, Letter(1))).is_err());
        assert!(is_square_completing(&aba, &Quadruple::new(0, 1, 1, Letter(1))).is_err());
        assert!(is_square_completing(&aba, &Quadruple::new(1, 0, 1, Letter(1))).is_err());
    }

    #[test]
    fn sign_examples() {
        assert_eq!(Quadruple::new(1, 3, 1, Letter(0)).sign(), Sign::Plus);
        assert_eq!(Quadruple::new(1, 3, 5, Letter(0)).sign(), Sign::Minus);
        assert_eq!(Quadruple::new(2, 1, 1, Letter(0)).sign(), Sign::Plus);
        assert_eq!(Quadruple::new(2, 1, 2, Letter(0)).sign(), Sign::Minus);
        // b = 0 with a = 1, ell = 1 sits on the boundary b <= a + ell - 2
        assert_eq!(Quadruple::new(1, 1, 0, Letter(0)).sign(), Sign::Plus);
    }

    #[test]
    fn witness_examples() {
        assert_eq!(
            witness(&w("aba", 3), 1, Letter(0)).unwrap(),
            Some(Quadruple::new(1, 1, 1, Letter(0)))
        );
        assert_eq!(witness(&w("ab", 3), 2, Letter(0)).unwrap(), None);
        assert_eq!(
            witness(&w("abcab", 3), 5, Letter(2)).unwrap(),
            Some(Quadruple::new(1, 3, 5, Letter(2)))
        );
        assert!(witness(&w("ab", 3), 3, Letter(0)).is_err());
        // non-square-free input: the surviving square is the witness
        assert_eq!(
            witness(&w("aab", 3), 3, Letter(2)).unwrap(),
            Some(Quadruple::new(1, 1, 3, Letter(2)))
        );
    }

    #[test]
    fn census_examples() {
        let c = build_census(&w("010", 2), false).unwrap();
        assert_eq!(c.len(), 8);
        assert_eq!(c.histogram.values().sum::<usize>(), 8);
        assert_eq!(c.histogram.keys().copied().collect::<Vec<_>>(), vec![1, 2]);
        assert!(verify_counting_bounds(&c).holds());

        assert!(build_census(&w("a", 3), true).unwrap().is_empty());
        assert!(build_census(&w("aa", 3), true).is_err());

        let aba = w("aba", 2);
        let c = build_census(&aba, true).unwrap();
        let report = is_extremal(&aba);
        let expected = report
            .blocked_pairs
            .iter()
            .filter(|p| !aba.adjacent_letters(p.b).unwrap().contains(&p.c))
            .count();
        assert_eq!(c.len(), expected);
        assert!(c.entries.iter().all(|q| q.ell >= 2));
    }

    #[test]
    fn census_document_json() {
        let word = w("abcab", 3);
        let doc = CensusDocument::new(&word, build_census(&word, true).unwrap());
        let v = serde_json::to_value(&doc).unwrap();
        for key in [
            "n",
            "k",
            "exclude_adjacent",
            "entries",
            "histogram",
            "bounds",
            "violations",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let entry = &v["entries"][0];
        for key in ["a", "b", "c", "ell", "sign"] {
            assert!(entry.get(key).is_some(), "{key}");
        }
        assert_eq!(v["n"], 5);
    }

    #[test]
    fn empty_census_is_vacuous() {
        let c = build_census(&Word::empty(3).unwrap(), true).unwrap();
        let r = verify_counting_bounds(&c);
        assert!(r.holds());
        assert_eq!(r.checks.len(), 1);
        assert_eq!(r.checks[0].status, BoundStatus::Vacuous);
    }

    #[test]
    fn synthetic_bound_violation_is_reported() {
        let mut histogram = BTreeMap::new();
        histogram.insert(3, 50);
        histogram.insert(400, 3);
        let c = Census {
            word_length: 2,
            alphabet_size: 3,
            exclude_adjacent: true,
            entries: Vec::new(),
            histogram,
        };
        let r = verify_counting_bounds(&c);
        assert!(!r.holds());
        assert!(r
            .violations
            .iter()
            .any(|v| v.kind == BoundKind::PerLength && v.length == 3));
        assert!(r.violations.iter().any(|v| v.kind == BoundKind::Window));
    }

    #[test]
    fn proposition_small() {
        let r = verify_key_proposition(&w("aba", 3), 2).unwrap();
        assert!(r.violations.is_empty());
        assert!(r.quadruples > 0);
        let q = Quadruple::new(1, 3, 1, Letter(0));
        let r2 = Quadruple::new(3, 5, 1, Letter(0));
        assert_eq!(proposition_clause_failed(&q, &r2), None);
        // equal lengths close together with different pairs fail
        let q = Quadruple::new(10, 6, 10, Letter(0));
        let r2 = Quadruple::new(11, 6, 12, Letter(1));
        assert_eq!(
            proposition_clause_failed(&q, &r2),
            Some(PropositionClause::EqualLength)
        );
        let q = Quadruple::new(10, 40, 10, Letter(0));
        let r2 = Quadruple::new(11, 41, 12, Letter(1));
        assert_eq!(
            proposition_clause_failed(&q, &r2),
            Some(PropositionClause::Separation)
        );
    }

    #[test]
    fn quadruples_match_literal_definition() {
        let word = w("abcacbabcbac", 3);
        let all = square_completing_quadruples(&word, 6).unwrap();
        let n = word.len();
        let mut brute = Vec::new();
        for b in 0..=n {
            for c in word.alphabet() {
                for ell in 1..=6 {
                    for a in 1..=(n + 2).saturating_sub(2 * ell) {
                        let q = Quadruple::new(a, ell, b, c);
                        if is_square_completing(&word, &q).unwrap() {
                            brute.push(q);
                        }
                    }
                }
            }
        }
        let mut got = all.clone();
        got.sort();
        brute.sort();
        assert_eq!(got, brute);
    }

    #[test]
    fn constant_bounds() {
        let c = theorem2_constant();
        assert!(c < census_bound_per_letter());
        assert!(c > BigRational::from_integer(BigInt::from(14)));
    }

    #[test]
    fn blocked_pair_examples() {
        let r = blocked_pair_count_check(&w("010", 2)).unwrap();
        assert_eq!(r.threshold, 0);
        assert_eq!(r.conclusion, Conclusion::Inapplicable);
        assert!(r.violations.is_empty());
        let r = blocked_pair_count_check(&Word::from_values(&[0, 16, 3, 5], 17).unwrap()).unwrap();
        assert_eq!(r.conclusion, Conclusion::NotExtremal);
        assert_eq!(r.extremal_direct, Some(false));
        assert!(r.violations.is_empty());
    }
}
