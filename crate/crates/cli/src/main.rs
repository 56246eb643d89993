//! `sqfree` command-line entry point.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 parse or usage error,
//! 3 precondition error, 4 budget exhausted, 5 a checked property was
//! violated (counting bounds, dichotomy or census size).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sqfree::census::{
    blocked_pair_count_check, build_census, census_bound_per_letter, default_ell_max,
    rational_to_f64, theorem2_constant, verify_key_proposition, BoundStatus, CensusDocument,
};
use sqfree::extremal::is_extremal;
use sqfree::generate::{morphism_word_over, random_square_free};
use sqfree::nonchalant::{nonchalant_report, Outcome};
use sqfree::report::to_canonical_json;
use sqfree::search::{find_extremal, find_first_extremal, SearchConfig};
use sqfree::square::find_square_fast;
use sqfree::{Error, ErrorKind, Word};

const EXIT_IO: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_VIOLATION: u8 = 5;

#[derive(Debug, Parser)]
#[command(name = "sqfree", version)]
#[command(about = "Square-free and extremal square-free word toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: Format,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "SQFREE_THREADS", default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Morphism,
    Random,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide square-freeness and extremality of a word.
    Check {
        #[arg(long)]
        word: String,
        #[arg(long)]
        alphabet: u32,
    },
    /// Build the witness census of a square-free word.
    Census {
        #[arg(long)]
        word: String,
        #[arg(long)]
        alphabet: u32,
        /// Keep pairs whose letter equals a neighbour of the gap.
        #[arg(long)]
        include_adjacent: bool,
        /// Also write the JSON document to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Generate nonchalant words from the empty word.
    Nonchalant {
        #[arg(long)]
        alphabet: u32,
        #[arg(long)]
        steps: usize,
        /// Write tab-separated step records to this path.
        #[arg(long)]
        emit_trace: Option<PathBuf>,
        /// Words longer than this are omitted from trace records.
        #[arg(long, default_value_t = 200)]
        word_limit: usize,
    },
    /// Exhaustively search for extremal words.
    Search {
        #[arg(long)]
        alphabet: u32,
        #[arg(long)]
        max_len: usize,
        /// Stop at the first length that has an extremal word.
        #[arg(long)]
        first_hit: bool,
        #[arg(long, env = "SQFREE_MAX_NODES")]
        max_nodes: Option<u64>,
        #[arg(long, env = "SQFREE_MAX_SECONDS")]
        max_seconds: Option<f64>,
        #[arg(long, default_value_t = 8)]
        shard_depth: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Generate a square-free word.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        alphabet: u32,
        #[arg(long)]
        len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the counting bounds and the census size bound on a word.
    VerifyBounds {
        #[arg(long)]
        word: String,
        #[arg(long)]
        alphabet: u32,
        #[arg(long)]
        include_adjacent: bool,
    },
    /// Check the same-sign dichotomy on all square-completing quadruples.
    VerifyProposition {
        #[arg(long)]
        word: String,
        #[arg(long)]
        alphabet: u32,
        /// Longest half-length enumerated (default: every square that fits).
        #[arg(long)]
        ell_max: Option<usize>,
    },
}

/// What a subcommand produced: a document, its human rendering, and
/// whether a checked property failed.
struct Output {
    doc: serde_json::Value,
    human: String,
    violated: bool,
    incomplete: bool,
}

impl Output {
    fn ok(doc: serde_json::Value, human: String) -> Self {
        Output {
            doc,
            human,
            violated: false,
            incomplete: false,
        }
    }
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Check { word, alphabet } => {
            let w = Word::parse(word, *alphabet)?;
            let report = is_extremal(&w);
            let mut doc = to_value(&report);
            doc["square"] = to_value(&find_square_fast(&w));
            let human = format!(
                "word {w} (n = {}, k = {alphabet})\nsquare-free: {}\nextremal: {}\nsquare-free extensions: {}\nblocked pairs: {}",
                w.len(),
                report.square_free,
                report.extremal,
                report.square_free_extensions.len(),
                report.blocked_pairs.len()
            );
            Ok(Output::ok(doc, human))
        }
        Command::Census {
            word,
            alphabet,
            include_adjacent,
            json,
        } => {
            let w = Word::parse(word, *alphabet)?;
            let doc = CensusDocument::new(&w, build_census(&w, !include_adjacent)?);
            let value = to_value(&doc);
            if let Some(path) = json {
                write_file(path, &to_canonical_json(&value).expect("json"))?;
            }
            let mut human = format!(
                "census of {w}: {} entries (exclude_adjacent = {})\n",
                doc.census.len(),
                doc.census.exclude_adjacent
            );
            for (len, count) in &doc.census.histogram {
                human.push_str(&format!("  |A_{len}| = {count}\n"));
            }
            human.push_str(&bounds_summary(&doc));
            Ok(Output {
                violated: !doc.violations.is_empty(),
                ..Output::ok(value, human)
            })
        }
        Command::Nonchalant {
            alphabet,
            steps,
            emit_trace,
            word_limit,
        } => {
            let report = nonchalant_report(*alphabet, *steps)?;
            if let Some(path) = emit_trace {
                let mut buf = Vec::new();
                report
                    .trace
                    .write_records(&mut buf, *word_limit)
                    .map_err(|e| Failure::Io(e.to_string()))?;
                write_file(path, &String::from_utf8(buf).expect("utf8"))?;
            }
            let last = report.trace.steps.last();
            let mut human = format!(
                "{} steps over {alphabet} letters: {}",
                report.trace.steps.len(),
                match report.outcome {
                    Outcome::Completed => "completed".to_string(),
                    Outcome::Stuck => format!(
                        "stuck at extremal word {}",
                        report
                            .stuck_at
                            .as_ref()
                            .map(|r| r.word.to_string())
                            .unwrap_or_default()
                    ),
                }
            );
            if let Some(step) = last {
                human.push_str(&format!(
                    "\nlast word length {}, observed stable prefix {}",
                    step.word.len(),
                    step.stable_prefix_length
                ));
                if step.word.len() <= *word_limit {
                    human.push_str(&format!("\nlast word {}", step.word));
                }
            }
            Ok(Output::ok(to_value(&report), human))
        }
        Command::Search {
            alphabet,
            max_len,
            first_hit,
            max_nodes,
            max_seconds,
            shard_depth,
            json,
        } => {
            let config = SearchConfig {
                alphabet_size: *alphabet,
                max_len: *max_len,
                threads: cli.threads,
                max_nodes: *max_nodes,
                max_seconds: *max_seconds,
                shard_depth: *shard_depth,
            };
            let report = if *first_hit {
                find_first_extremal(&config)?
            } else {
                find_extremal(&config)?
            };
            let value = to_value(&report);
            if let Some(path) = json {
                write_file(path, &to_canonical_json(&value).expect("json"))?;
            }
            let mut human = format!(
                "alphabet {alphabet}, lengths 1..={}: {} ({} nodes, {:.2}s)\n",
                report.max_length,
                if report.complete {
                    "complete"
                } else {
                    "INCOMPLETE (budget)"
                },
                report.nodes,
                report.elapsed.as_secs_f64()
            );
            for c in &report.per_length {
                human.push_str(&format!(
                    "  n = {:>3}: {} canonical, {} total, {} extremal\n",
                    c.length, c.canonical, c.total, c.extremal
                ));
            }
            for w in &report.extremal_words {
                human.push_str(&format!("  extremal: {w}\n"));
            }
            Ok(Output {
                incomplete: !report.complete,
                ..Output::ok(value, human)
            })
        }
        Command::Gen {
            kind,
            alphabet,
            len,
            seed,
        } => {
            let w = match kind {
                GenKind::Morphism => morphism_word_over(*len, *alphabet)?,
                GenKind::Random => random_square_free(*alphabet, *len, *seed)?,
            };
            let doc = json!({ "word": w, "n": w.len(), "k": alphabet });
            Ok(Output::ok(doc, w.to_string()))
        }
        Command::VerifyBounds {
            word,
            alphabet,
            include_adjacent,
        } => {
            let w = Word::parse(word, *alphabet)?;
            let doc = CensusDocument::new(&w, build_census(&w, !include_adjacent)?);
            let count = blocked_pair_count_check(&w)?;
            let constant = theorem2_constant();
            let constant_ok = constant < census_bound_per_letter();
            let violated =
                !doc.violations.is_empty() || !count.violations.is_empty() || !constant_ok;
            let human = format!(
                "{}non-adjacent census size {} vs 14.7n = {:.1}: {:?}\nextremal threshold (k-2)(n+1) = {}: {:?}\nconstant 2*H_318 + 2 = {:.12}\n",
                bounds_summary(&doc),
                count.census_size,
                count.limit,
                count.bound_status,
                count.threshold,
                count.conclusion,
                rational_to_f64(&constant)
            );
            let value = json!({
                "census": doc,
                "blocked_pairs": count,
                "constant": {
                    "value": format!("{:.12}", rational_to_f64(&constant)),
                    "below_14_7": constant_ok,
                },
            });
            Ok(Output {
                violated,
                ..Output::ok(value, human)
            })
        }
        Command::VerifyProposition {
            word,
            alphabet,
            ell_max,
        } => {
            let w = Word::parse(word, *alphabet)?;
            let ell_max = ell_max.unwrap_or_else(|| default_ell_max(&w));
            let report = verify_key_proposition(&w, ell_max)?;
            let mut value = to_value(&report);
            value["word"] = to_value(&w);
            let human = format!(
                "{w}: {} quadruples with ell <= {ell_max}, {} violations",
                report.quadruples,
                report.violations.len()
            );
            Ok(Output {
                violated: !report.violations.is_empty(),
                ..Output::ok(value, human)
            })
        }
    }
}

fn bounds_summary(doc: &CensusDocument) -> String {
    let vacuous = doc
        .bounds
        .iter()
        .filter(|b| b.status == BoundStatus::Vacuous)
        .count();
    let mut out = format!(
        "bounds: {} checked, {} vacuous, {} violated\n",
        doc.bounds.len(),
        vacuous,
        doc.violations.len()
    );
    for v in &doc.violations {
        out.push_str(&format!(
            "  VIOLATED {:?} L = {}: {} > {:.3}\n",
            v.kind, v.length, v.actual, v.limit
        ));
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => to_canonical_json(&out.doc).expect("json"),
                Format::Human => format!("{}\n", out.human.trim_end()),
            };
            if io::stdout().write_all(text.as_bytes()).is_err() {
                return ExitCode::from(EXIT_IO);
            }
            if out.violated {
                eprintln!("error: a checked property was violated");
                ExitCode::from(EXIT_VIOLATION)
            } else if out.incomplete {
                eprintln!("error: budget exhausted, report is partial");
                ExitCode::from(EXIT_BUDGET)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Parse => EXIT_PARSE,
                ErrorKind::Precondition => EXIT_PRECONDITION,
                ErrorKind::Budget => EXIT_BUDGET,
            })
        }
    }
}
