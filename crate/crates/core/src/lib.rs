//! Toolkit for extremal square-free words.
//!
//! A word is square-free when no factor has the form `XX`, and extremal
//! square-free when, in addition, inserting any single letter at any
//! position creates a square. The crate decides both properties, builds
//! censuses of square-completing quadruples with the counting checks that
//! rule out extremal words over 17 or more letters, generates nonchalant
//! words, and searches small alphabets exhaustively.

pub mod census;
pub mod error;
pub mod extremal;
pub mod generate;
pub mod lce;
pub mod nonchalant;
pub mod report;
pub mod search;
pub mod square;
pub mod word;

pub use census::{
    blocked_pair_count_check, build_census, is_square_completing, sign, theorem2_constant,
    verify_counting_bounds, verify_key_proposition, witness, Census, Quadruple, Sign,
};
pub use error::{Error, ErrorKind, Result};
pub use extremal::{
    extensions, has_square_free_extension_in_suffix, is_extremal, ExtremalityReport, Insertion,
};
pub use generate::{enumerate_square_free, morphism_word, random_square_free};
pub use nonchalant::{
    nonchalant_report, nonchalant_sequence, nonchalant_step, NonchalantError, NonchalantReport,
    NonchalantTrace,
};
pub use search::{find_extremal, find_first_extremal, SearchConfig, SearchReport};
pub use square::{find_square_fast, find_square_naive, is_square_free, SquareOccurrence};
pub use word::{Letter, Word};
