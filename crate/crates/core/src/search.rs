//! Exhaustive search for extremal square-free words over a fixed alphabet.
//!
//! The search walks canonical square-free words (letters first appear in
//! increasing order) depth first. All canonical prefixes of a fixed shard
//! depth are generated up front and explored by independent workers; the
//! per-shard results are merged in shard order, so the report does not
//! depend on the number of threads.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extremal::insertion_square;
use crate::generate::orbit_size;
use crate::square::ends_with_square;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub alphabet_size: u32,
    pub max_len: usize,
    /// Worker threads; `0` uses the rayon default.
    pub threads: usize,
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
    pub shard_depth: usize,
}

impl SearchConfig {
    pub fn new(alphabet_size: u32, max_len: usize) -> Self {
        SearchConfig {
            alphabet_size,
            max_len,
            threads: 0,
            max_nodes: None,
            max_seconds: None,
            shard_depth: 8,
        }
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LengthCount {
    pub length: usize,
    /// Canonical representatives.
    pub canonical: u64,
    /// All square-free words of this length (orbit sizes summed).
    pub total: u64,
    pub extremal: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub alphabet_size: u32,
    pub max_length: usize,
    /// False when a budget stopped the search; counts are then partial.
    pub complete: bool,
    /// Canonical extremal words, by length and then lexicographically.
    pub extremal_words: Vec<Word>,
    pub min_extremal_length: Option<usize>,
    pub per_length: Vec<LengthCount>,
    pub nodes: u64,
    /// Wall-clock time; omitted from structured output.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SearchReport {
    /// Like `PartialEq` but ignoring wall-clock time.
    pub fn same_result(&self, other: &SearchReport) -> bool {
        SearchReport {
            elapsed: Duration::ZERO,
            ..self.clone()
        } == SearchReport {
            elapsed: Duration::ZERO,
            ..other.clone()
        }
    }
}

struct Limits {
    k: u32,
    max_len: usize,
    max_nodes: u64,
    deadline: Option<Instant>,
    nodes: AtomicU64,
    stop: AtomicBool,
}

impl Limits {
    const BATCH: u64 = 1024;

    fn charge(&self, local: &mut u64) -> bool {
        *local += 1;
        if !local.is_multiple_of(Self::BATCH) {
            return !self.stop.load(Ordering::Relaxed);
        }
        let total = self.nodes.fetch_add(Self::BATCH, Ordering::Relaxed) + Self::BATCH;
        if total > self.max_nodes || self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.stop.store(true, Ordering::Relaxed);
        }
        !self.stop.load(Ordering::Relaxed)
    }
}

#[derive(Default)]
struct Partial {
    counts: Vec<LengthCount>,
    extremal: Vec<Word>,
    nodes: u64,
}

impl Partial {
    fn new(max_len: usize) -> Self {
        Partial {
            counts: (0..=max_len)
                .map(|length| LengthCount {
                    length,
                    ..LengthCount::default()
                })
                .collect(),
            ..Partial::default()
        }
    }

    fn absorb(&mut self, other: Partial) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            a.canonical += b.canonical;
            a.total += b.total;
            a.extremal += b.extremal;
        }
        self.extremal.extend(other.extremal);
        self.nodes += other.nodes;
    }
}

/// Whether every insertion into the square-free word `s` closes a square.
/// Gaps are scanned right to left; appends are the cheapest refutation.
fn all_insertions_blocked(s: &[Letter], k: u32) -> bool {
    (0..=s.len())
        .rev()
        .all(|b| (0..k).all(|c| insertion_square(s, b, Letter(c)).is_some()))
}

/// Visits the canonical square-free word `buf` and its descendants.
/// Returns false when a budget was hit.
fn explore(buf: &mut Vec<Letter>, used: u32, limits: &Limits, out: &mut Partial) -> bool {
    if !limits.charge(&mut out.nodes) {
        return false;
    }
    let d = buf.len();
    let slot = &mut out.counts[d];
    slot.canonical += 1;
    slot.total = slot
        .total
        .saturating_add(orbit_size(limits.k, used as usize));

    let mut appendable = false;
    for c in 0..limits.k {
        buf.push(Letter(c));
        if !ends_with_square(buf) {
            appendable = true;
            if d < limits.max_len && c <= used {
                let next_used = if c == used { used + 1 } else { used };
                if !explore(buf, next_used, limits, out) {
                    buf.pop();
                    return false;
                }
            }
        }
        buf.pop();
    }
    if !appendable && all_insertions_blocked(buf, limits.k) {
        out.counts[d].extremal += 1;
        out.extremal.push(Word::from_trusted(buf.clone(), limits.k));
    }
    true
}

/// Canonical square-free words of length exactly `depth`, in lexicographic
/// order. Shorter words are not visited here.
fn shard_prefixes(k: u32, depth: usize) -> Vec<(Vec<Letter>, u32)> {
    fn go(
        buf: &mut Vec<Letter>,
        used: u32,
        k: u32,
        depth: usize,
        out: &mut Vec<(Vec<Letter>, u32)>,
    ) {
        if buf.len() == depth {
            out.push((buf.clone(), used));
            return;
        }
        for c in 0..=used.min(k - 1) {
            buf.push(Letter(c));
            if !ends_with_square(buf) {
                go(buf, if c == used { used + 1 } else { used }, k, depth, out);
            }
            buf.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 0, k, depth, &mut out);
    out
}

/// Visits canonical words shorter than the shard depth (sequentially) and
/// the subtrees below every shard prefix (in parallel).
fn run(limits: &Limits, shard_depth: usize) -> Partial {
    let mut total = Partial::new(limits.max_len);
    let depth = shard_depth.clamp(1, limits.max_len);

    // Words of length 1..depth-1 are visited without descending further.
    if depth > 1 {
        let shallow = Limits {
            k: limits.k,
            max_len: depth - 1,
            max_nodes: u64::MAX,
            deadline: None,
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
        };
        let mut head = Partial::new(depth - 1);
        explore(&mut vec![Letter(0)], 1, &shallow, &mut head);
        total.absorb(head);
    }

    let shards = shard_prefixes(limits.k, depth);
    let parts: Vec<Partial> = shards
        .into_par_iter()
        .map(|(prefix, used)| {
            let mut part = Partial::new(limits.max_len);
            let mut buf = prefix;
            explore(&mut buf, used, limits, &mut part);
            part
        })
        .collect();
    for part in parts {
        total.absorb(part);
    }
    total
}

/// Runs the exhaustive search up to `config.max_len`. A budget stop yields a
/// report with `complete == false`; other misconfigurations are errors.
pub fn find_extremal(config: &SearchConfig) -> Result<SearchReport> {
    let k = config.alphabet_size;
    if k == 0 {
        return Err(Error::Precondition("alphabet size must be positive".into()));
    }
    if config.max_nodes == Some(0) || config.max_seconds.is_some_and(|s| s <= 0.0) {
        return Err(Error::Precondition("budgets must be positive".into()));
    }
    let started = Instant::now();
    let limits = Limits {
        k,
        max_len: config.max_len,
        max_nodes: config.max_nodes.unwrap_or(u64::MAX),
        deadline: config
            .max_seconds
            .map(|s| started + Duration::from_secs_f64(s)),
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
    };
    let partial = if config.max_len == 0 {
        Partial::new(0)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
        pool.install(|| run(&limits, config.shard_depth))
    };
    let complete = !limits.stop.load(Ordering::Relaxed) && partial.nodes <= limits.max_nodes;

    let mut extremal_words = partial.extremal;
    extremal_words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut per_length = partial.counts;
    per_length.remove(0);
    Ok(SearchReport {
        alphabet_size: k,
        max_length: config.max_len,
        complete,
        min_extremal_length: extremal_words.first().map(Word::len),
        extremal_words,
        per_length,
        nodes: partial.nodes,
        elapsed: started.elapsed(),
    })
}

/// Iterative deepening until some length has an extremal word, giving up
/// after `config.max_len`. The returned report covers lengths up to the
/// first hit only.
pub fn find_first_extremal(config: &SearchConfig) -> Result<SearchReport> {
    let started = Instant::now();
    let mut last = None;
    for len in 1..=config.max_len {
        let report = find_extremal(&SearchConfig {
            max_len: len,
            ..config.clone()
        })?;
        let done = !report.complete || report.min_extremal_length.is_some();
        last = Some(report);
        if done {
            break;
        }
    }
    let mut report = match last {
        Some(r) => r,
        None => find_extremal(config)?,
    };
    report.elapsed = started.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::is_extremal;
    use crate::generate::enumerate_square_free;

    #[test]
    fn binary_search() {
        let r = find_extremal(&SearchConfig::new(2, 12)).unwrap();
        assert!(r.complete);
        let texts: Vec<String> = r.extremal_words.iter().map(|w| w.to_string()).collect();
        assert_eq!(texts, ["aba"]);
        assert_eq!(r.min_extremal_length, Some(3));
        let totals: Vec<u64> = r.per_length.iter().map(|c| c.total).collect();
        assert_eq!(totals[..4], [2, 2, 2, 0]);
    }

    #[test]
    fn counts_and_extremal_match_plain_enumeration() {
        for (k, max_n) in [(2, 6), (3, 12), (4, 8)] {
            for shard_depth in [1, 3, 20] {
                let config = SearchConfig {
                    shard_depth,
                    ..SearchConfig::new(k, max_n)
                };
                let r = find_extremal(&config).unwrap();
                for n in 1..=max_n {
                    let words: Vec<Word> =
                        enumerate_square_free(k, n).map(Result::unwrap).collect();
                    let count = &r.per_length[n - 1];
                    assert_eq!(count.length, n);
                    assert_eq!(count.canonical, words.len() as u64);
                    let extremal: Vec<&Word> =
                        words.iter().filter(|w| is_extremal(w).extremal).collect();
                    assert_eq!(count.extremal, extremal.len() as u64);
                }
            }
        }
    }

    #[test]
    fn node_budget_flags_incomplete() {
        let config = SearchConfig {
            max_nodes: Some(2000),
            shard_depth: 2,
            ..SearchConfig::new(3, 40)
        };
        let r = find_extremal(&config).unwrap();
        assert!(!r.complete);
        assert!(find_extremal(&SearchConfig {
            max_nodes: Some(0),
            ..SearchConfig::new(3, 4)
        })
        .is_err());
    }

    #[test]
    fn zero_length_search() {
        let r = find_extremal(&SearchConfig::new(3, 0)).unwrap();
        assert!(r.complete && r.per_length.is_empty() && r.extremal_words.is_empty());
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let one = find_extremal(&SearchConfig::new(3, 18).threads(1)).unwrap();
        let four = find_extremal(&SearchConfig::new(3, 18).threads(4)).unwrap();
        assert!(one.same_result(&four));
    }
}
