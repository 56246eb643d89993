//! Finite words over a `k`-letter alphabet.
//!
//! Letters of a word of length `n` are numbered `1..=n` from the left, and
//! the insertion points ("gaps") are numbered `0..=n`: gap `i` sits between
//! letter `i` and letter `i + 1`, gap `0` precedes the word and gap `n`
//! follows it. Every public index in this crate follows that convention;
//! 0-based slices only appear behind `as_slice`.
//!
//! Text format: for alphabets of at most 26 letters a word is written with
//! `a..z` (digit strings such as `010` are also accepted when `k <= 10`);
//! larger alphabets use comma-separated decimal letter values.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest alphabet whose words are written with `a..z`.
pub const MAX_CHAR_ALPHABET: u32 = 26;

/// Alphabet index of a letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Letter(pub u32);

impl Letter {
    pub fn value(self) -> u32 {
        self.0
    }

    /// Text form of the letter under an alphabet of size `k`.
    pub fn to_text(self, k: u32) -> String {
        if k <= MAX_CHAR_ALPHABET {
            char::from(b'a' + self.0 as u8).to_string()
        } else {
            self.0.to_string()
        }
    }

    pub fn parse(text: &str, k: u32) -> Result<Letter> {
        let w = Word::parse(text, k)?;
        match w.as_slice() {
            [c] => Ok(*c),
            _ => Err(Error::Parse(format!(
                "expected a single letter, got {text:?}"
            ))),
        }
    }
}

/// An immutable finite word together with the size of its alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    alphabet_size: u32,
}

impl Word {
    pub fn new(letters: Vec<Letter>, alphabet_size: u32) -> Result<Self> {
        check_alphabet(alphabet_size)?;
        if let Some(bad) = letters.iter().find(|c| c.0 >= alphabet_size) {
            return Err(Error::Parse(format!(
                "letter {} outside alphabet of size {alphabet_size}",
                bad.0
            )));
        }
        Ok(Word {
            letters,
            alphabet_size,
        })
    }

    pub fn from_values(values: &[u32], alphabet_size: u32) -> Result<Self> {
        Word::new(values.iter().copied().map(Letter).collect(), alphabet_size)
    }

    pub fn empty(alphabet_size: u32) -> Result<Self> {
        Word::new(Vec::new(), alphabet_size)
    }

    /// Callers guarantee every letter is inside the alphabet.
    pub(crate) fn from_trusted(letters: Vec<Letter>, alphabet_size: u32) -> Self {
        debug_assert!(letters.iter().all(|c| c.0 < alphabet_size));
        Word {
            letters,
            alphabet_size,
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn as_slice(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn alphabet(&self) -> impl Iterator<Item = Letter> {
        (0..self.alphabet_size).map(Letter)
    }

    /// Letter `i`, 1-based.
    pub fn letter(&self, i: usize) -> Result<Letter> {
        if i == 0 || i > self.len() {
            return Err(Error::range("letter index", i, 1, self.len()));
        }
        Ok(self.letters[i - 1])
    }

    /// The factor `W[a, b)`: letters `a, a + 1, ..., b - 1`.
    ///
    /// `a == b` gives the empty factor.
    pub fn factor(&self, a: usize, b: usize) -> Result<Word> {
        let n = self.len();
        if a == 0 || a > n + 1 {
            return Err(Error::range("factor start", a, 1, n + 1));
        }
        if b < a || b > n + 1 {
            return Err(Error::range("factor end", b, a, n + 1));
        }
        Ok(Word::from_trusted(
            self.letters[a - 1..b - 1].to_vec(),
            self.alphabet_size,
        ))
    }

    /// `W +_b c`: the word with `c` inserted at gap `b`.
    pub fn insert_at_gap(&self, b: usize, c: Letter) -> Result<Word> {
        self.check_gap(b)?;
        self.check_letter(c)?;
        Ok(Word::from_trusted(
            insert_letters(&self.letters, b, c),
            self.alphabet_size,
        ))
    }

    /// Deletes letter `i` (1-based).
    pub fn remove_letter(&self, i: usize) -> Result<Word> {
        if i == 0 || i > self.len() {
            return Err(Error::range("letter index", i, 1, self.len()));
        }
        let mut letters = self.letters.clone();
        letters.remove(i - 1);
        Ok(Word::from_trusted(letters, self.alphabet_size))
    }

    /// Distinct letters adjacent to gap `b`, ascending. One letter at the
    /// boundary gaps (or when both neighbours agree), two otherwise.
    pub fn adjacent_letters(&self, b: usize) -> Result<Vec<Letter>> {
        if self.is_empty() {
            return Err(Error::Precondition(
                "adjacent letters of the empty word".into(),
            ));
        }
        self.check_gap(b)?;
        let mut out = Vec::with_capacity(2);
        if b >= 1 {
            out.push(self.letters[b - 1]);
        }
        if b < self.len() {
            out.push(self.letters[b]);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Applies a renaming of the alphabet: letter `c` becomes `perm[c]`.
    pub fn rename(&self, perm: &[Letter]) -> Result<Word> {
        if perm.len() != self.alphabet_size as usize {
            return Err(Error::Precondition(format!(
                "renaming has {} entries, alphabet has {}",
                perm.len(),
                self.alphabet_size
            )));
        }
        let mut seen = vec![false; perm.len()];
        for p in perm {
            self.check_letter(*p)?;
            if std::mem::replace(&mut seen[p.0 as usize], true) {
                return Err(Error::Precondition("renaming is not a permutation".into()));
            }
        }
        Ok(Word::from_trusted(
            self.letters.iter().map(|c| perm[c.0 as usize]).collect(),
            self.alphabet_size,
        ))
    }

    /// Representative of the renaming orbit in which letters first appear in
    /// increasing order; this is the lexicographically least orbit member.
    pub fn canonical(&self) -> Word {
        let mut map = vec![u32::MAX; self.alphabet_size as usize];
        let mut next = 0;
        let letters = self
            .letters
            .iter()
            .map(|c| {
                let slot = &mut map[c.0 as usize];
                if *slot == u32::MAX {
                    *slot = next;
                    next += 1;
                }
                Letter(*slot)
            })
            .collect();
        Word::from_trusted(letters, self.alphabet_size)
    }

    pub fn is_canonical(&self) -> bool {
        let mut next = 0;
        for c in &self.letters {
            if c.0 == next {
                next += 1;
            } else if c.0 > next {
                return false;
            }
        }
        true
    }

    pub fn distinct_letters(&self) -> usize {
        let mut seen = vec![false; self.alphabet_size as usize];
        self.letters
            .iter()
            .filter(|c| !std::mem::replace(&mut seen[c.0 as usize], true))
            .count()
    }

    /// Parses the text format described in the module docs.
    pub fn parse(text: &str, alphabet_size: u32) -> Result<Word> {
        check_alphabet(alphabet_size)?;
        let text = text.trim();
        if text.is_empty() {
            return Word::empty(alphabet_size);
        }
        let values: Vec<u32> = if alphabet_size > MAX_CHAR_ALPHABET || text.contains(',') {
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|e| Error::Parse(format!("bad letter value {t:?}: {e}")))
                })
                .collect::<Result<_>>()?
        } else if text.bytes().all(|c| c.is_ascii_digit()) {
            text.bytes().map(|c| u32::from(c - b'0')).collect()
        } else {
            text.chars()
                .map(|ch| match ch {
                    'a'..='z' => Ok(ch as u32 - 'a' as u32),
                    _ => Err(Error::Parse(format!("unexpected character {ch:?}"))),
                })
                .collect::<Result<_>>()?
        };
        if let Some(bad) = values.iter().find(|v| **v >= alphabet_size) {
            return Err(Error::Parse(format!(
                "letter {} outside alphabet of size {alphabet_size} in {text:?}",
                Letter(*bad).to_text(alphabet_size.max(bad + 1))
            )));
        }
        Ok(Word::from_trusted(
            values.into_iter().map(Letter).collect(),
            alphabet_size,
        ))
    }

    pub(crate) fn check_gap(&self, b: usize) -> Result<()> {
        if b > self.len() {
            return Err(Error::range("gap", b, 0, self.len()));
        }
        Ok(())
    }

    pub(crate) fn check_letter(&self, c: Letter) -> Result<()> {
        if c.0 >= self.alphabet_size {
            return Err(Error::range(
                "letter",
                c.0 as usize,
                0,
                self.alphabet_size as usize - 1,
            ));
        }
        Ok(())
    }
}

fn check_alphabet(k: u32) -> Result<()> {
    if k == 0 || k == u32::MAX {
        return Err(Error::Parse(format!("invalid alphabet size {k}")));
    }
    Ok(())
}

/// 0-based splice of `c` after the first `b` letters.
pub(crate) fn insert_letters(letters: &[Letter], b: usize, c: Letter) -> Vec<Letter> {
    let mut out = Vec::with_capacity(letters.len() + 1);
    out.extend_from_slice(&letters[..b]);
    out.push(c);
    out.extend_from_slice(&letters[b..]);
    out
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet_size <= MAX_CHAR_ALPHABET {
            for c in &self.letters {
                write!(f, "{}", char::from(b'a' + c.0 as u8))?;
            }
            Ok(())
        } else {
            for (i, c) in self.letters.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", c.0)?;
            }
            Ok(())
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.letters
            .cmp(&other.letters)
            .then(self.alphabet_size.cmp(&other.alphabet_size))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(text: &str, k: u32) -> Word {
        Word::parse(text, k).unwrap()
    }

    #[test]
    fn factor_examples() {
        let bonobo = w("bonobo", 26);
        assert_eq!(bonobo.factor(1, 4).unwrap().to_string(), "bon");
        assert_eq!(bonobo.factor(4, 7).unwrap().to_string(), "obo");
        assert_eq!(w("abc", 3).factor(2, 2).unwrap().len(), 0);
    }

    #[test]
    fn factor_range_errors_name_the_bound() {
        let abc = w("abc", 3);
        match abc.factor(0, 2) {
            Err(Error::Range { what, .. }) => assert_eq!(what, "factor start"),
            other => panic!("{other:?}"),
        }
        match abc.factor(2, 5) {
            Err(Error::Range { what, value, .. }) => {
                assert_eq!(what, "factor end");
                assert_eq!(value, 5);
            }
            other => panic!("{other:?}"),
        }
        assert!(abc.factor(3, 2).is_err());
        assert!(abc.factor(4, 4).is_ok());
    }

    #[test]
    fn insertion_examples() {
        let c = Letter(2);
        assert_eq!(w("ab", 3).insert_at_gap(1, c).unwrap().to_string(), "acb");
        assert_eq!(w("ab", 3).insert_at_gap(0, c).unwrap().to_string(), "cab");
        assert_eq!(
            w("aba", 3).insert_at_gap(2, Letter(1)).unwrap().to_string(),
            "abba"
        );
        assert!(w("ab", 3).insert_at_gap(3, c).is_err());
        assert!(w("ab", 2).insert_at_gap(0, c).is_err());
    }

    #[test]
    fn adjacency() {
        let aba = w("aba", 2);
        assert_eq!(aba.adjacent_letters(1).unwrap(), vec![Letter(0), Letter(1)]);
        assert_eq!(aba.adjacent_letters(0).unwrap(), vec![Letter(0)]);
        assert_eq!(aba.adjacent_letters(3).unwrap(), vec![Letter(0)]);
        assert!(aba.adjacent_letters(4).is_err());
        assert!(matches!(
            Word::empty(2).unwrap().adjacent_letters(0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn parsing() {
        assert_eq!(w("aba", 2).as_slice(), &[Letter(0), Letter(1), Letter(0)]);
        assert_eq!(w("010", 2), w("aba", 2));
        assert_eq!(
            w("0,16,3", 17).as_slice(),
            &[Letter(0), Letter(16), Letter(3)]
        );
        assert!(matches!(Word::parse("abz", 3), Err(Error::Parse(_))));
        assert!(Word::parse("0,x", 30).is_err());
        assert!(Word::parse("3", 30).is_ok());
        assert!(Word::parse("ab", 0).is_err());
        assert_eq!(w("0,16,3", 17).to_string(), "aqd");
        assert_eq!(w("0,16,3", 30).to_string(), "0,16,3");
        assert_eq!(w("", 4).len(), 0);
    }

    #[test]
    fn canonical_form() {
        assert_eq!(w("cacb", 3).canonical().to_string(), "abac");
        assert!(w("abac", 3).is_canonical());
        assert!(!w("acab", 3).is_canonical());
        assert_eq!(w("cacb", 3).distinct_letters(), 3);
    }

    #[test]
    fn insertion_deletion_round_trip_exhaustive() {
        for k in 1..=3u32 {
            for n in 0..=8usize {
                let total = (k as usize).pow(n as u32);
                for code in 0..total {
                    let mut x = code;
                    let vals: Vec<u32> = (0..n)
                        .map(|_| {
                            let v = (x % k as usize) as u32;
                            x /= k as usize;
                            v
                        })
                        .collect();
                    let word = Word::from_values(&vals, k).unwrap();
                    assert_eq!(word.factor(1, n + 1).unwrap(), word);
                    for b in 0..=n {
                        for c in word.alphabet() {
                            let ext = word.insert_at_gap(b, c).unwrap();
                            assert_eq!(ext.factor(b + 1, b + 2).unwrap().as_slice(), &[c]);
                            assert_eq!(ext.remove_letter(b + 1).unwrap(), word);
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(k in 1u32..40, raw in proptest::collection::vec(any::<u32>(), 0..30)) {
            let word = Word::from_values(&raw.iter().map(|v| v % k).collect::<Vec<_>>(), k).unwrap();
            prop_assert_eq!(Word::parse(&word.to_string(), k).unwrap(), word);
        }

        #[test]
        fn canonical_is_rename_invariant(raw in proptest::collection::vec(0u32..4, 0..20), rot in 0u32..4) {
            let word = Word::from_values(&raw, 4).unwrap();
            let perm: Vec<Letter> = (0..4).map(|c| Letter((c + rot) % 4)).collect();
            let renamed = word.rename(&perm).unwrap();
            prop_assert_eq!(renamed.canonical(), word.canonical());
            prop_assert!(word.canonical() <= renamed);
        }
    }
}
