//! Single-letter extensions and extremality.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::square::{is_square_free, min_square_containing};
use crate::word::{insert_letters, Letter, Word};

/// An insertion position: letter `c` at gap `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Insertion {
    pub b: usize,
    pub c: Letter,
}

/// Every extension `W +_b c`, ordered by gap and then by letter.
pub fn extensions(w: &Word) -> impl Iterator<Item = (usize, Letter, Word)> + '_ {
    (0..=w.len()).flat_map(move |b| {
        w.alphabet().map(move |c| {
            let ext = Word::from_trusted(insert_letters(w.as_slice(), b, c), w.alphabet_size());
            (b, c, ext)
        })
    })
}

/// Shortest (then leftmost) square of `W +_b c`, assuming `W` itself is
/// square-free so that any square must cover the inserted letter. The start
/// is 0-based in the extended word.
pub(crate) fn insertion_square(s: &[Letter], b: usize, c: Letter) -> Option<(usize, usize)> {
    let ext = insert_letters(s, b, c);
    min_square_containing(&ext, b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalityReport {
    pub word: Word,
    pub alphabet_size: u32,
    pub n: usize,
    pub square_free: bool,
    pub extremal: bool,
    pub square_free_extensions: Vec<Insertion>,
    pub blocked_pairs: Vec<Insertion>,
}

/// Classifies every extension of `w` and decides extremality.
///
/// Gaps are checked in parallel on the current rayon pool; the report is
/// assembled in gap-then-letter order so it does not depend on scheduling.
pub fn is_extremal(w: &Word) -> ExtremalityReport {
    let square_free = is_square_free(w);
    let s = w.as_slice();
    let per_gap: Vec<Vec<(Letter, bool)>> = (0..=w.len())
        .into_par_iter()
        .map(|b| {
            w.alphabet()
                .map(|c| {
                    let free = if square_free {
                        insertion_square(s, b, c).is_none()
                    } else {
                        is_square_free(&Word::from_trusted(
                            insert_letters(s, b, c),
                            w.alphabet_size(),
                        ))
                    };
                    (c, free)
                })
                .collect()
        })
        .collect();

    let mut square_free_extensions = Vec::new();
    let mut blocked_pairs = Vec::new();
    for (b, row) in per_gap.into_iter().enumerate() {
        for (c, free) in row {
            if free {
                square_free_extensions.push(Insertion { b, c });
            } else {
                blocked_pairs.push(Insertion { b, c });
            }
        }
    }
    ExtremalityReport {
        word: w.clone(),
        alphabet_size: w.alphabet_size(),
        n: w.len(),
        square_free,
        extremal: square_free && square_free_extensions.is_empty(),
        square_free_extensions,
        blocked_pairs,
    }
}

/// Looks for a square-free insertion among the last `num/den` of the gaps,
/// i.e. gaps `b >= n - ceil(n * num / den)`, scanning the largest gap first
/// and letters in increasing order.
pub fn has_square_free_extension_in_suffix(
    w: &Word,
    fraction_num: u64,
    fraction_den: u64,
) -> Result<Option<Insertion>> {
    if fraction_num == 0 || fraction_num > fraction_den {
        return Err(Error::Precondition(format!(
            "fraction {fraction_num}/{fraction_den} not in (0, 1]"
        )));
    }
    if !is_square_free(w) {
        return Err(Error::Precondition(format!("{w} is not square-free")));
    }
    let n = w.len() as u64;
    let span = (n * fraction_num).div_ceil(fraction_den);
    let lowest = (n - span) as usize;
    let s = w.as_slice();
    for b in (lowest..=w.len()).rev() {
        for c in w.alphabet() {
            if insertion_square(s, b, c).is_none() {
                return Ok(Some(Insertion { b, c }));
            }
        }
    }
    Ok(None)
}
