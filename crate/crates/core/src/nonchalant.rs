//! Nonchalant words: start from the empty word and repeatedly insert a letter
//! so the result stays square-free, preferring the shortest possible suffix
//! after the insertion point (the largest gap) and then the earliest letter.

use std::io::{self, Write};

use serde::Serialize;
use thiserror::Error;

use crate::error::Error;
use crate::extremal::{insertion_square, is_extremal, ExtremalityReport, Insertion};
use crate::square::is_square_free;
use crate::word::{insert_letters, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonchalantStep {
    /// `i` for the word `G_i`; the first recorded step is `i = 1`.
    pub index: usize,
    pub word: Word,
    /// Gap of `G_{i-1}` that received the new letter.
    pub gap: usize,
    pub letter: Letter,
    /// Longest prefix shared by `G_i` and every later word of the trace.
    pub stable_prefix_length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonchalantTrace {
    pub alphabet_size: u32,
    pub steps: Vec<NonchalantStep>,
}

/// The sequence ran into an extremal word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StuckAt {
    /// Steps produced before getting stuck.
    pub trace: NonchalantTrace,
    pub report: ExtremalityReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NonchalantError {
    #[error("stuck at extremal word {}", .0.report.word)]
    Stuck(Box<StuckAt>),
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// One greedy step from the square-free word `w`.
pub fn nonchalant_step(w: &Word) -> Result<(Insertion, Word), NonchalantError> {
    if !is_square_free(w) {
        return Err(Error::Precondition(format!("{w} is not square-free")).into());
    }
    match greedy_choice(w) {
        Some(ins) => {
            let next = Word::from_trusted(
                insert_letters(w.as_slice(), ins.b, ins.c),
                w.alphabet_size(),
            );
            Ok((ins, next))
        }
        None => Err(NonchalantError::Stuck(Box::new(StuckAt {
            trace: NonchalantTrace {
                alphabet_size: w.alphabet_size(),
                steps: Vec::new(),
            },
            report: is_extremal(w),
        }))),
    }
}

fn greedy_choice(w: &Word) -> Option<Insertion> {
    let s = w.as_slice();
    (0..=w.len())
        .rev()
        .flat_map(|b| w.alphabet().map(move |c| Insertion { b, c }))
        .find(|ins| insertion_square(s, ins.b, ins.c).is_none())
}

/// Runs `num_steps` greedy steps from the empty word.
pub fn nonchalant_sequence(
    alphabet_size: u32,
    num_steps: usize,
) -> Result<NonchalantTrace, NonchalantError> {
    if alphabet_size < 2 {
        return Err(Error::Precondition(format!(
            "nonchalant words need at least 2 letters, got {alphabet_size}"
        ))
        .into());
    }
    let mut current = Word::empty(alphabet_size)?;
    let mut steps = Vec::with_capacity(num_steps);
    for index in 1..=num_steps {
        match nonchalant_step(&current) {
            Ok((ins, next)) => {
                steps.push(NonchalantStep {
                    index,
                    word: next.clone(),
                    gap: ins.b,
                    letter: ins.c,
                    stable_prefix_length: 0,
                });
                current = next;
            }
            Err(NonchalantError::Stuck(mut stuck)) => {
                fill_stable_prefixes(&mut steps);
                stuck.trace.steps = steps;
                return Err(NonchalantError::Stuck(stuck));
            }
            Err(e) => return Err(e),
        }
    }
    fill_stable_prefixes(&mut steps);
    Ok(NonchalantTrace {
        alphabet_size,
        steps,
    })
}

fn fill_stable_prefixes(steps: &mut [NonchalantStep]) {
    let mut running = usize::MAX;
    let mut later: Option<&Word> = None;
    let mut values = vec![0; steps.len()];
    for (i, step) in steps.iter().enumerate().rev() {
        running = running.min(step.word.len());
        if let Some(next) = later {
            let common = step
                .word
                .as_slice()
                .iter()
                .zip(next.as_slice())
                .take_while(|(x, y)| x == y)
                .count();
            running = running.min(common);
        }
        values[i] = running;
        later = Some(&step.word);
    }
    for (step, v) in steps.iter_mut().zip(values) {
        step.stable_prefix_length = v;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Completed,
    Stuck,
}

/// Structured summary of a run, including the stuck case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonchalantReport {
    pub alphabet_size: u32,
    pub requested_steps: usize,
    pub outcome: Outcome,
    pub trace: NonchalantTrace,
    /// Extremality report of the word the run got stuck on.
    pub stuck_at: Option<ExtremalityReport>,
}

/// [`nonchalant_sequence`] with getting stuck folded into the report.
pub fn nonchalant_report(alphabet_size: u32, num_steps: usize) -> Result<NonchalantReport, Error> {
    let (outcome, trace, stuck_at) = match nonchalant_sequence(alphabet_size, num_steps) {
        Ok(trace) => (Outcome::Completed, trace, None),
        Err(NonchalantError::Stuck(stuck)) => {
            let StuckAt { trace, report } = *stuck;
            (Outcome::Stuck, trace, Some(report))
        }
        Err(NonchalantError::Invalid(e)) => return Err(e),
    };
    Ok(NonchalantReport {
        alphabet_size,
        requested_steps: num_steps,
        outcome,
        trace,
        stuck_at,
    })
}

impl NonchalantTrace {
    pub fn last_word(&self) -> Option<&Word> {
        self.steps.last().map(|s| &s.word)
    }

    /// Tab-separated records `i n b x stable_prefix word`. Words longer than
    /// `word_limit` are written as `-`.
    pub fn write_records<W: Write>(&self, out: &mut W, word_limit: usize) -> io::Result<()> {
        writeln!(out, "# i\tn\tb\tx\tstable_prefix\tword")?;
        for step in &self.steps {
            let word = if step.word.len() <= word_limit {
                step.word.to_string()
            } else {
                "-".to_string()
            };
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                step.index,
                step.word.len(),
                step.gap,
                step.letter.to_text(self.alphabet_size),
                step.stable_prefix_length,
                word
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str, k: u32) -> Word {
        Word::parse(text, k).unwrap()
    }

    #[test]
    fn step_examples() {
        let (ins, next) = nonchalant_step(&w("a", 3)).unwrap();
        assert_eq!((ins.b, next.to_string()), (1, "ab".to_string()));
        let (_, next) = nonchalant_step(&w("aba", 3)).unwrap();
        assert_eq!(next.to_string(), "abac");
        match nonchalant_step(&w("010", 2)) {
            Err(NonchalantError::Stuck(s)) => assert!(s.report.extremal),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            nonchalant_step(&w("aa", 2)),
            Err(NonchalantError::Invalid(_))
        ));
    }

    #[test]
    fn first_steps_ternary() {
        let trace = nonchalant_sequence(3, 6).unwrap();
        let words: Vec<String> = trace.steps.iter().map(|s| s.word.to_string()).collect();
        assert_eq!(words, ["a", "ab", "aba", "abac", "abaca", "abacab"]);
        assert_eq!(trace.steps[0].gap, 0);
        assert!(nonchalant_sequence(3, 0).unwrap().steps.is_empty());
    }

    #[test]
    fn binary_gets_stuck() {
        match nonchalant_sequence(2, 10) {
            Err(NonchalantError::Stuck(s)) => {
                assert_eq!(s.trace.steps.len(), 3);
                assert_eq!(s.report.word.to_string(), "aba");
            }
            other => panic!("{other:?}"),
        }
        assert!(nonchalant_sequence(1, 3).is_err());
    }

    #[test]
    fn stable_prefix_is_retrospective() {
        let trace = nonchalant_sequence(3, 40).unwrap();
        let steps = &trace.steps;
        for (i, step) in steps.iter().enumerate() {
            let expect = steps[i..]
                .iter()
                .map(|later| {
                    step.word
                        .as_slice()
                        .iter()
                        .zip(later.word.as_slice())
                        .take_while(|(x, y)| x == y)
                        .count()
                })
                .min()
                .unwrap();
            assert_eq!(step.stable_prefix_length, expect);
        }
        assert!(steps
            .windows(2)
            .all(|p| p[0].stable_prefix_length <= p[1].stable_prefix_length));
    }

    #[test]
    fn report_folds_stuck() {
        let r = nonchalant_report(2, 5).unwrap();
        assert_eq!(r.outcome, Outcome::Stuck);
        assert_eq!(r.stuck_at.unwrap().word.to_string(), "aba");
        let r = nonchalant_report(3, 5).unwrap();
        assert_eq!(r.outcome, Outcome::Completed);
        assert!(r.stuck_at.is_none());
        assert!(nonchalant_report(1, 5).is_err());
    }

    #[test]
    fn records_format() {
        let trace = nonchalant_sequence(3, 3).unwrap();
        let mut buf = Vec::new();
        trace.write_records(&mut buf, 2).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "1\t1\t0\ta\t1\ta");
        assert_eq!(lines[3], "3\t3\t2\ta\t3\t-");
    }
}
