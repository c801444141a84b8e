/*!
Command-line interface.

Subcommands: `validate` (structural check of a datum file), `analyze`
(full report, text or JSON), `enumerate` (exact-cover enumeration and
classification of a degree), `mozes` (arithmetic datum of a prime pair),
and `nf` (normal form of a word).

Exit codes: `0` success, `1` the input datum fails the defining
conditions, `2` unreadable or unparsable input (also clap's own code for
usage errors).
*/

use crate::enumeration::{classify, enumerate_relation_sets, EnumerationError, EquivalenceMode};
use crate::mozes::{conjectured_h1, mozes_datum, MozesError};
use crate::report::{analyze, census, class_name, AnalysisReport, CensusRow, ReportError};
use crate::vhdatum::{
    parse_datum, serialize_datum, Letter, NormalFormError, ParseError, SquarePartitionError,
    VHDatum, PROJECTION_LABELS,
};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};

/// Square-complex data on products of two trees.
#[derive(Parser, Debug)]
#[command(name = "bmgroups", version, about)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a datum file and check the defining conditions
    Validate {
        /// Datum file: header "m n", then one relator line per square
        file: PathBuf,
    },
    /// Full analysis: hypotheses, abelianization, shift group, K-groups
    Analyze {
        /// Datum file to analyze
        file: PathBuf,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
        /// Period bound for the aperiodicity witnesses
        #[arg(long, default_value_t = 3)]
        h3_bound: i64,
    },
    /// Enumerate all data of one degree and classify them
    Enumerate {
        /// First degree (even, at least 4)
        #[arg(short)]
        m: u32,
        /// Second degree (even, at least 4)
        #[arg(short)]
        n: u32,
        /// Relabelling group used for classification
        #[arg(long, value_enum, default_value_t = ModeArg::WithSwap)]
        mode: ModeArg,
        /// Write each class representative to DIR/<name>.bm
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Print the census table (name, size, H1, C)
        #[arg(long)]
        table: bool,
    },
    /// Build the arithmetic datum of two primes p ≠ l, both 1 mod 4
    Mozes {
        /// First prime
        #[arg(short)]
        p: u32,
        /// Second prime
        #[arg(short)]
        l: u32,
        /// Write the datum to FILE instead of stdout
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Analyze the datum and compare H1 against the closed form
        #[arg(long)]
        analyze: bool,
        /// Period bound for the aperiodicity witnesses under --analyze
        #[arg(long, default_value_t = 2)]
        h3_bound: i64,
    },
    /// Normal form of a word, given as whitespace-separated letters
    Nf {
        /// Datum file defining the group
        file: PathBuf,
        /// Word, e.g. "3 1 -2"
        word: String,
    },
}

/// Classification group, selectable on the command line.
#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum ModeArg {
    /// Signed generator permutations of each side
    SidePreserving,
    /// Side-preserving maps plus the side swap (when m = n)
    WithSwap,
}

impl From<ModeArg> for EquivalenceMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::SidePreserving => EquivalenceMode::SidePreserving,
            ModeArg::WithSwap => EquivalenceMode::WithSwap,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Word(#[from] NormalFormError),
    #[error(transparent)]
    Mozes(#[from] MozesError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Squares(#[from] SquarePartitionError),
    #[error("letter {0} is not a nonzero integer")]
    BadLetter(String),
}

impl CliError {
    /// `1` for failures of the defining conditions, `2` for bad input.
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Report(ReportError::InvalidDatum)
            | CliError::Word(NormalFormError::InvalidDatum)
            | CliError::Squares(_) => 1,
            _ => 2,
        }
    }
}

/// Runs a parsed command line, returning the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn read_datum(path: &Path) -> Result<VHDatum, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_datum(&text).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn execute(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Validate { file } => {
            let datum = read_datum(&file)?;
            let report = datum.validate();
            let tick = |b: bool| if b { "ok" } else { "FAIL" };
            println!(
                "degrees ({}, {}): {} tuples, {} expected — {}",
                datum.m(),
                datum.n(),
                report.actual_tuples,
                report.expected_tuples,
                tick(report.counts_ok()),
            );
            println!(
                "alphabets: {} ({} letters on the wrong side)",
                tick(report.sides_ok()),
                report.side_violations.len(),
            );
            println!(
                "closure under readings: {} ({} missing)",
                tick(report.closure_ok()),
                report.closure_missing.len(),
            );
            println!(
                "distinct readings: {} ({} degenerate tuples)",
                tick(report.distinctness_ok()),
                report.degenerate.len(),
            );
            for (label, ok) in PROJECTION_LABELS.iter().zip(report.projections_ok()) {
                println!("projection {label} bijective: {}", tick(ok));
            }
            if report.is_bm() {
                println!("verdict: valid");
                Ok(0)
            } else {
                println!("verdict: INVALID");
                Ok(1)
            }
        }
        Command::Analyze {
            file,
            json,
            h3_bound,
        } => {
            let datum = read_datum(&file)?;
            let report = analyze(&datum, h3_bound)?;
            print_analysis(&report, json);
            Ok(0)
        }
        Command::Enumerate {
            m,
            n,
            mode,
            out,
            table,
        } => {
            if table {
                let rows = census(m, n, mode.into())?;
                let total: usize = rows.iter().map(|r| r.size).sum();
                println!(
                    "{total} data of degree ({m}, {n}) fall into {} classes ({})",
                    rows.len(),
                    mode_label(mode),
                );
                print_census_table(&rows);
                if let Some(dir) = out {
                    write_census_files(&dir, m, n, &rows)?;
                }
            } else {
                let data = enumerate_relation_sets(m, n)?;
                let classes = classify(&data, mode.into());
                println!(
                    "{} data of degree ({m}, {n}) fall into {} classes ({})",
                    data.len(),
                    classes.len(),
                    mode_label(mode),
                );
                if let Some(dir) = out {
                    std::fs::create_dir_all(&dir).map_err(|source| CliError::Io {
                        path: dir.clone(),
                        source,
                    })?;
                    for (i, class) in classes.iter().enumerate() {
                        let name = class_name(m / 2, n / 2, i, classes.len());
                        let path = dir.join(format!("{name}.bm"));
                        write_file(&path, &serialize_datum(&class.canonical)?)?;
                    }
                    println!("wrote {} files to {}", classes.len(), dir.display());
                }
            }
            Ok(0)
        }
        Command::Mozes {
            p,
            l,
            out,
            analyze: run_analysis,
            h3_bound,
        } => {
            let datum = mozes_datum(p, l)?;
            let text = serialize_datum(&datum)?;
            match &out {
                Some(path) => {
                    write_file(path, &text)?;
                    println!(
                        "wrote degree ({}, {}) datum to {}",
                        datum.m(),
                        datum.n(),
                        path.display()
                    );
                }
                None => print!("{text}"),
            }
            if run_analysis {
                let report = analyze(&datum, h3_bound)?;
                print_analysis(&report, false);
                let closed = conjectured_h1(p, l)?.census_notation();
                let verdict = if report.h1.census == closed {
                    "AGREE"
                } else {
                    "DISAGREE"
                };
                println!("closed-form H1 {closed}: {verdict}");
            }
            Ok(0)
        }
        Command::Nf { file, word } => {
            let datum = read_datum(&file)?;
            let mut letters = Vec::new();
            for token in word.replace(',', " ").split_whitespace() {
                let value: i32 = token
                    .parse()
                    .map_err(|_| CliError::BadLetter(token.to_owned()))?;
                letters
                    .push(Letter::new(value).ok_or_else(|| CliError::BadLetter(token.to_owned()))?);
            }
            let nf = datum.normal_form(&letters)?;
            println!("{nf}");
            Ok(0)
        }
    }
}

fn mode_label(mode: ModeArg) -> &'static str {
    match mode {
        ModeArg::SidePreserving => "side-preserving",
        ModeArg::WithSwap => "with swap",
    }
}

fn print_analysis(report: &AnalysisReport, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("report serialization cannot fail")
        );
    } else {
        println!("{report}");
    }
}

fn print_census_table(rows: &[CensusRow]) {
    println!("{:<10} {:>5}  {:<16} {:<16}", "name", "size", "H1", "C");
    for row in rows {
        println!(
            "{:<10} {:>5}  {:<16} {:<16}",
            row.name, row.size, row.h1, row.c
        );
    }
}

fn write_census_files(dir: &Path, m: u32, n: u32, rows: &[CensusRow]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_owned(),
        source,
    })?;
    for row in rows {
        let content = format!("{m} {n}\n{}\n", row.relators.join("\n"));
        write_file(&dir.join(format!("{}.bm", row.name)), &content)?;
    }
    println!("wrote {} files to {}", rows.len(), dir.display());
    Ok(())
}
