//! Square-free word sources: the ternary morphism fixed point, seeded random
//! words, and exhaustive enumeration of canonical representatives.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::square::ends_with_square;
use crate::word::{Letter, Word};

/// Images of the square-free morphism `0 -> 012, 1 -> 02, 2 -> 1`.
const MORPHISM: [&[u32]; 3] = [&[0, 1, 2], &[0, 2], &[1]];

/// Length-`n` prefix of the fixed point of `0 -> 012, 1 -> 02, 2 -> 1`
/// starting from `0`, over `alphabet_size >= 3` letters.
pub fn morphism_word_over(n: usize, alphabet_size: u32) -> Result<Word> {
    if alphabet_size < 3 {
        return Err(Error::Precondition(format!(
            "the morphism word needs 3 letters, alphabet has {alphabet_size}"
        )));
    }
    let mut out: Vec<u32> = MORPHISM[0].to_vec();
    let mut i = 1;
    while out.len() < n {
        let img = MORPHISM[out[i] as usize];
        out.extend_from_slice(img);
        i += 1;
    }
    out.truncate(n);
    Word::from_values(&out, alphabet_size)
}

pub fn morphism_word(n: usize) -> Word {
    morphism_word_over(n, 3).expect("ternary alphabet")
}

/// Default number of backtracking steps allowed in [`random_square_free`].
pub const DEFAULT_RANDOM_BUDGET: u64 = 10_000_000;

/// Seeded random square-free word built letter by letter with a shuffled
/// candidate order at each position, backtracking when every candidate
/// closes a square.
pub fn random_square_free(alphabet_size: u32, n: usize, seed: u64) -> Result<Word> {
    random_square_free_with_budget(alphabet_size, n, seed, DEFAULT_RANDOM_BUDGET)
}

pub fn random_square_free_with_budget(
    alphabet_size: u32,
    n: usize,
    seed: u64,
    max_steps: u64,
) -> Result<Word> {
    let longest = match alphabet_size {
        0 => 0,
        1 => 1,
        2 => 3,
        _ => usize::MAX,
    };
    if n > longest {
        return Err(Error::Precondition(format!(
            "no square-free word of length {n} over {alphabet_size} letters"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut word: Vec<Letter> = Vec::with_capacity(n);
    // Remaining candidates for each position, consumed from the back.
    let mut pending: Vec<Vec<Letter>> = Vec::with_capacity(n);
    let mut steps = 0u64;
    while word.len() < n {
        if pending.len() == word.len() {
            let mut order: Vec<Letter> = (0..alphabet_size).map(Letter).collect();
            order.shuffle(&mut rng);
            pending.push(order);
        }
        steps += 1;
        if steps > max_steps {
            return Err(Error::Budget(format!(
                "random square-free word of length {n}: {max_steps} steps exceeded"
            )));
        }
        match pending.last_mut().and_then(Vec::pop) {
            Some(c) => {
                word.push(c);
                if ends_with_square(&word) {
                    word.pop();
                }
            }
            None => {
                pending.pop();
                if word.pop().is_none() {
                    return Err(Error::Precondition(format!(
                        "no square-free word of length {n} over {alphabet_size} letters"
                    )));
                }
            }
        }
    }
    Word::new(word, alphabet_size)
}

/// Number of words in the renaming orbit of a word using `distinct` of the
/// `k` letters: `k (k - 1) ... (k - distinct + 1)`. Saturates.
pub fn orbit_size(k: u32, distinct: usize) -> u64 {
    (0..distinct as u64).fold(1u64, |acc, i| acc.saturating_mul(u64::from(k) - i))
}

/// All renamings of `w`, sorted and deduplicated.
pub fn orbit(w: &Word) -> Vec<Word> {
    let k = w.alphabet_size() as usize;
    let mut perm: Vec<Letter> = (0..k as u32).map(Letter).collect();
    let mut out = Vec::new();
    permutations(&mut perm, 0, &mut |p| {
        out.push(w.rename(p).expect("permutation"))
    });
    out.sort();
    out.dedup();
    out
}

fn permutations(p: &mut [Letter], i: usize, f: &mut dyn FnMut(&[Letter])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permutations(p, i + 1, f);
        p.swap(i, j);
    }
}

/// Default cap on DFS nodes visited by [`enumerate_square_free`].
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 200_000_000;

/// Canonical square-free words of one length, in lexicographic order.
///
/// Yields an error and stops once the node budget is exhausted.
#[derive(Debug, Clone)]
pub struct CanonicalSquareFree {
    k: u32,
    target: usize,
    word: Vec<Letter>,
    /// distinct[i]: number of distinct letters in word[..=i].
    distinct: Vec<u32>,
    /// next[d]: next letter value to try at position d.
    next: Vec<u32>,
    nodes: u64,
    max_nodes: u64,
    finished: bool,
}

impl CanonicalSquareFree {
    pub fn new(alphabet_size: u32, n: usize, max_nodes: u64) -> Self {
        CanonicalSquareFree {
            k: alphabet_size,
            target: n,
            word: Vec::with_capacity(n),
            distinct: Vec::with_capacity(n),
            next: vec![0; n],
            nodes: 0,
            max_nodes,
            finished: alphabet_size == 0,
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }
}

impl Iterator for CanonicalSquareFree {
    type Item = Result<Word>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        if self.target == 0 {
            self.finished = true;
            return Some(Ok(Word::from_trusted(Vec::new(), self.k)));
        }
        loop {
            let d = self.word.len();
            if d == self.target {
                self.word.pop();
                self.distinct.pop();
                continue;
            }
            let used = if d == 0 { 0 } else { self.distinct[d - 1] };
            let limit = (used + 1).min(self.k);
            let c = self.next[d];
            if c >= limit {
                if d == 0 {
                    self.finished = true;
                    return None;
                }
                self.next[d] = 0;
                self.word.pop();
                self.distinct.pop();
                continue;
            }
            self.next[d] += 1;
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                self.finished = true;
                return Some(Err(Error::Budget(format!(
                    "enumeration exceeded {} nodes",
                    self.max_nodes
                ))));
            }
            self.word.push(Letter(c));
            if ends_with_square(&self.word) {
                self.word.pop();
                continue;
            }
            self.distinct.push(if c == used { used + 1 } else { used });
            if self.word.len() == self.target {
                return Some(Ok(Word::from_trusted(self.word.clone(), self.k)));
            }
        }
    }
}

/// Canonical square-free words of length `n` over `k` letters.
pub fn enumerate_square_free(k: u32, n: usize) -> CanonicalSquareFree {
    CanonicalSquareFree::new(k, n, DEFAULT_ENUMERATION_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::square::{find_square_naive, is_square_free};

    fn collect(k: u32, n: usize) -> Vec<String> {
        enumerate_square_free(k, n)
            .map(|w| w.unwrap().to_string())
            .collect()
    }

    #[test]
    fn morphism_prefixes() {
        assert_eq!(
            morphism_word(5).as_slice(),
            Word::from_values(&[0, 1, 2, 0, 2], 3).unwrap().as_slice()
        );
        assert_eq!(morphism_word(12).to_string(), "abcacbabcbac");
        assert!(morphism_word(0).is_empty());
        assert!(find_square_naive(&morphism_word(300)).is_none());
        assert!(is_square_free(&morphism_word(1000)));
        assert_eq!(morphism_word_over(4, 5).unwrap().alphabet_size(), 5);
        assert!(morphism_word_over(4, 2).is_err());
    }

    #[test]
    fn random_words() {
        assert!(random_square_free(3, 0, 9).unwrap().is_empty());
        let a = random_square_free(3, 50, 1).unwrap();
        assert_eq!(a, random_square_free(3, 50, 1).unwrap());
        assert_eq!(a.len(), 50);
        assert!(find_square_naive(&a).is_none());
        assert_ne!(a, random_square_free(3, 50, 2).unwrap());
        assert!(matches!(
            random_square_free(2, 10, 0),
            Err(Error::Precondition(_))
        ));
        assert_eq!(random_square_free(2, 3, 0).unwrap().len(), 3);
        assert!(matches!(
            random_square_free_with_budget(3, 500, 0, 10),
            Err(Error::Budget(_))
        ));
        for seed in 0..20 {
            let w = random_square_free(17, 120, seed).unwrap();
            assert!(is_square_free(&w));
        }
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(collect(3, 1), ["a"]);
        assert_eq!(collect(3, 3), ["aba", "abc"]);
        assert!(collect(2, 4).is_empty());
        assert_eq!(collect(3, 0), [""]);
        assert_eq!(collect(2, 3), ["aba"]);
    }

    #[test]
    fn enumeration_budget() {
        let results: Vec<_> = CanonicalSquareFree::new(3, 20, 50).collect();
        assert!(matches!(results.last(), Some(Err(Error::Budget(_)))));
    }

    /// Brute-force count over all k^n words, independent of the DFS.
    fn brute_count(k: u32, n: usize) -> u64 {
        let mut count = 0;
        for mut code in 0..(k as u64).pow(n as u32) {
            let vals: Vec<u32> = (0..n)
                .map(|_| {
                    let v = (code % k as u64) as u32;
                    code /= k as u64;
                    v
                })
                .collect();
            if find_square_naive(&Word::from_values(&vals, k).unwrap()).is_none() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn orbit_weighted_counts_match_brute_force() {
        for (k, max_n) in [(2, 8), (3, 10), (4, 7)] {
            for n in 1..=max_n {
                let words: Vec<Word> = enumerate_square_free(k, n).map(Result::unwrap).collect();
                assert!(words.iter().all(|w| w.is_canonical() && is_square_free(w)));
                if n <= 10 {
                    assert!(words.iter().all(|w| find_square_naive(w).is_none()));
                }
                let total: u64 = words
                    .iter()
                    .map(|w| orbit_size(k, w.distinct_letters()))
                    .sum();
                assert_eq!(total, brute_count(k, n), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn orbits() {
        let o = orbit(&Word::parse("aba", 2).unwrap());
        let texts: Vec<String> = o.iter().map(|w| w.to_string()).collect();
        assert_eq!(texts, ["aba", "bab"]);
        assert_eq!(orbit(&Word::parse("abc", 3).unwrap()).len(), 6);
        assert_eq!(orbit_size(3, 2), 6);
        assert_eq!(orbit_size(17, 0), 1);
    }
}
