//! Square detection.
//!
//! `find_square_naive` is the cubic reference scan. `find_square_fast` is a
//! divide-and-conquer detector: every square either contains the middle
//! position of the current range or lies strictly on one side of it, and
//! the squares through a fixed position are found in linear time from four
//! longest-common-extension tables. Total cost is `O(n log n)` on every
//! input, square-free or not.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::lce::{lcp_against, z_function};
use crate::word::{Letter, Word};

/// A square `W[start, start + 2 * half)`; `start` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SquareOccurrence {
    pub start: usize,
    pub half: usize,
}

impl SquareOccurrence {
    pub fn end(&self) -> usize {
        self.start + 2 * self.half
    }

    pub fn holds_in(&self, w: &Word) -> bool {
        let s = w.as_slice();
        self.half > 0
            && self.start >= 1
            && self.end() <= s.len() + 1
            && s[self.start - 1..self.start - 1 + self.half]
                == s[self.start - 1 + self.half..self.end() - 1]
    }
}

/// Leftmost square, shortest first among those sharing a start.
pub fn find_square_naive(w: &Word) -> Option<SquareOccurrence> {
    let s = w.as_slice();
    let n = s.len();
    for start in 0..n {
        for half in 1..=(n - start) / 2 {
            if (0..half).all(|i| s[start + i] == s[start + half + i]) {
                return Some(SquareOccurrence {
                    start: start + 1,
                    half,
                });
            }
        }
    }
    None
}

/// Some square of `w` if one exists. Which occurrence is reported is
/// unspecified; existence always agrees with [`find_square_naive`].
pub fn find_square_fast(w: &Word) -> Option<SquareOccurrence> {
    find_in_range(w.as_slice(), 0, w.len()).map(|(a, half)| SquareOccurrence { start: a + 1, half })
}

pub fn is_square_free(w: &Word) -> bool {
    find_square_fast(w).is_none()
}

/// Slice-level square-freeness test.
pub fn has_square(s: &[Letter]) -> bool {
    find_in_range(s, 0, s.len()).is_some()
}

fn find_in_range(s: &[Letter], lo: usize, hi: usize) -> Option<(usize, usize)> {
    if hi - lo < 2 {
        return None;
    }
    let mid = lo + (hi - lo) / 2;
    if let Some((a, half)) = min_square_containing(&s[lo..hi], mid - lo) {
        return Some((lo + a, half));
    }
    find_in_range(s, lo, mid).or_else(|| find_in_range(s, mid + 1, hi))
}

/// Whether `s` ends with a square. Squares created by appending one letter
/// to a square-free word always end at the new letter, so this is the
/// incremental test used by prefix searches.
pub fn ends_with_square(s: &[Letter]) -> bool {
    let n = s.len();
    (1..=n / 2).any(|half| s[n - half..] == s[n - 2 * half..n - half])
}

/// Extension tables around one fixed position `p` of `s`.
struct Tables {
    p: usize,
    m: usize,
    /// Forward matches of `s[p + t]` against `s[p + half + t]`, by `half`.
    fwd_right: Vec<usize>,
    /// Backward matches of `s[p - 1 - t]` against `s[p + half - 1 - t]`.
    back_right: Vec<usize>,
    /// Forward matches of `s[p - half + t]` against `s[p + t]`.
    fwd_left: Vec<usize>,
    /// Backward matches of `s[p - half - 1 - t]` against `s[p - 1 - t]`.
    back_left: Vec<usize>,
}

impl Tables {
    fn new(s: &[Letter], p: usize) -> Self {
        let m = s.len();
        let suffix = &s[p..];
        let rev: Vec<Letter> = s.iter().rev().copied().collect();
        // Reversed prefix s[..p] is rev[m - p..].
        let rev_prefix = &rev[m - p..];
        Tables {
            p,
            m,
            fwd_right: z_function(suffix),
            back_right: lcp_against(rev_prefix, &rev),
            fwd_left: lcp_against(suffix, s),
            back_left: z_function(rev_prefix),
        }
    }

    /// Calls `visit(half, lo, hi)` for every `half` up to `max_half`, in
    /// increasing order, with the 0-based start interval `[lo, hi]` of the
    /// squares of that half-length containing position `p`. A half-length
    /// can report up to two disjoint intervals, lower one first.
    fn for_each<B>(
        &self,
        max_half: usize,
        mut visit: impl FnMut(usize, usize, usize) -> ControlFlow<B>,
    ) -> Option<B> {
        let (p, m) = (self.p as isize, self.m);
        for half in 1..=max_half.min(m / 2) {
            let h = half as isize;
            // p in the second half: mirror position q = p - half.
            if half <= self.p {
                let q = p - h;
                let back = self.back_left.get(half).copied().unwrap_or(0) as isize;
                let fwd = self.fwd_left[self.p - half] as isize;
                let lo = (q - back).max(q - h + 1).max(0);
                let hi = q.min(q + fwd - h);
                if lo <= hi {
                    if let ControlFlow::Break(b) = visit(half, lo as usize, hi as usize) {
                        return Some(b);
                    }
                }
            }
            // p in the first half.
            if self.p + half < m {
                let back = self.back_right[m - self.p - half] as isize;
                let fwd = self.fwd_right[half] as isize;
                let lo = (p - back).max(p - h + 1).max(0);
                let hi = p.min(p + fwd - h);
                if lo <= hi {
                    if let ControlFlow::Break(b) = visit(half, lo as usize, hi as usize) {
                        return Some(b);
                    }
                }
            }
        }
        None
    }
}

/// Shortest square of `s` covering 0-based position `p`, leftmost among
/// the shortest. Returns the 0-based start and the half-length.
pub(crate) fn min_square_containing(s: &[Letter], p: usize) -> Option<(usize, usize)> {
    debug_assert!(p < s.len());
    Tables::new(s, p).for_each(s.len() / 2, |half, lo, _| ControlFlow::Break((lo, half)))
}

/// Every square of `s` covering 0-based position `p` with half-length at
/// most `max_half`, as `(start, half)` pairs ordered by half then start.
pub(crate) fn squares_containing(s: &[Letter], p: usize, max_half: usize) -> Vec<(usize, usize)> {
    debug_assert!(p < s.len());
    let mut out = Vec::new();
    Tables::new(s, p).for_each::<()>(max_half, |half, lo, hi| {
        out.extend((lo..=hi).map(|a| (a, half)));
        ControlFlow::Continue(())
    });
    out
}
