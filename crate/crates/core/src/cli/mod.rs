//! Command-line surface. `main.rs` only parses arguments and calls
//! [`execute`].
//!
//! Exit codes: 0 success, 1 negative verdict under `--expect`, 2 input
//! error, 3 failed internal cross-check.

pub mod parse;
pub mod render;
pub mod report;

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classify::{enumerate_and_verify, threshold_report, EnumerationBounds, SCHEMA_VERSION};
use crate::divisor::normalize;
use crate::error::Error;
use crate::frational::failing_primes;
use crate::hj::{hj_expand, hj_tails, t_signature};
use crate::number::{format_rational, parse_rational};
use crate::resolution::{dual_graph, fundamental_cycle};

pub use parse::parse_divisor;
pub use render::{render_graph, GraphFormat};
pub use report::{analyze, AnalysisReport, AnalyzeOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CROSS_CHECK: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pdsing",
    version,
    about = "Invariants of graded rings R(P^1, D) for Q-divisors D"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expectation {
    Rational,
    FRational,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hirzebruch–Jung expansion of a rational number greater than 1.
    Hj {
        #[arg(allow_hyphen_values = true)]
        value: String,
        #[arg(long)]
        json: bool,
    },
    /// Full analysis of a divisor, e.g. "2 - 3/5 - 4/5 - 1/2".
    Analyze {
        #[arg(allow_hyphen_values = true)]
        divisor: String,
        /// Prime to test F-rationality at; repeatable.
        #[arg(long = "p", value_name = "PRIME")]
        primes: Vec<u64>,
        /// Cross-check the cycle by brute force and the known theorems.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
        /// Exit with status 1 unless the verdict holds (at every `--p`).
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
    },
    /// Primes at which a rational singularity fails to be F-rational.
    FailingPrimes {
        #[arg(allow_hyphen_values = true)]
        divisor: String,
        #[arg(long)]
        json: bool,
    },
    /// Check a classification table against an enumerated corpus.
    Classify {
        #[arg(long, value_parser = ["3", "4"])]
        multiplicity: String,
        #[arg(long, default_value_t = 9)]
        max_denominator: i64,
        #[arg(long, default_value_t = 8)]
        max_param: u64,
        #[arg(long, default_value_t = 4)]
        max_s: i64,
        #[arg(long, default_value_t = 5)]
        max_points: usize,
        #[arg(long, default_value_t = 60)]
        max_instance_denominator: i64,
        #[arg(long)]
        json: bool,
    },
    /// F-rationality of every bounded table instance at the given primes.
    Threshold {
        #[arg(long, value_parser = ["3", "4"])]
        multiplicity: String,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 8)]
        max_param: u64,
        #[arg(long)]
        json: bool,
    },
    /// Draw the dual graph with fundamental-cycle coefficients.
    Render {
        #[arg(allow_hyphen_values = true)]
        divisor: String,
        #[arg(long, value_enum, default_value_t = GraphFormat::Ascii)]
        format: GraphFormat,
    },
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    schema_version: u32,
    error: &'a str,
    message: String,
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

#[derive(Serialize)]
struct HjReport {
    schema_version: u32,
    value: String,
    expansion: Vec<i64>,
    tails: Vec<String>,
    t_signature: Vec<i64>,
}

#[derive(Serialize)]
struct FailingPrimesReport {
    schema_version: u32,
    divisor: crate::divisor::NormalizedDivisor,
    failing_primes: Vec<u64>,
}

/// Runs one command, writing its output to `out` and diagnostics to `err`;
/// returns the exit status.
pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let as_json = match &cli.command {
        Command::Hj { json, .. }
        | Command::Analyze { json, .. }
        | Command::FailingPrimes { json, .. }
        | Command::Classify { json, .. }
        | Command::Threshold { json, .. } => *json,
        Command::Render { .. } => false,
    };
    match run(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            if as_json {
                let _ = out.write_all(
                    json(&ErrorReport {
                        schema_version: SCHEMA_VERSION,
                        error: e.code(),
                        message: e.to_string(),
                    })
                    .as_bytes(),
                );
            }
            let _ = writeln!(err, "error [{}]: {e}", e.code());
            EXIT_INPUT
        }
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<i32, Error> {
    let mut emit = |text: String| {
        let _ = out.write_all(text.as_bytes());
    };
    match command {
        Command::Hj {
            value,
            json: as_json,
        } => {
            let x = parse_rational(&value)?;
            let seq = hj_expand(&x)?;
            let report = HjReport {
                schema_version: SCHEMA_VERSION,
                value: format_rational(&x),
                expansion: seq.entries().to_vec(),
                tails: hj_tails(&seq)?.iter().map(format_rational).collect(),
                t_signature: t_signature(&seq).entries().to_vec(),
            };
            if as_json {
                emit(json(&report));
            } else {
                emit(format!(
                    "{} = {}\ntails {}\nT = ({})\n",
                    report.value,
                    seq,
                    report.tails.join(" "),
                    report
                        .t_signature
                        .iter()
                        .map(i64::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                ));
            }
            Ok(EXIT_OK)
        }
        Command::Analyze {
            divisor,
            primes,
            verify,
            json: as_json,
            expect,
        } => {
            let raw = parse_divisor(&divisor)?;
            let report = analyze(&divisor, &raw, &AnalyzeOptions { primes, verify })?;
            emit(if as_json {
                json(&report)
            } else {
                report::to_text(&report)
            });
            if let Some(v) = &report.verification {
                if !v.passed() {
                    return Ok(EXIT_CROSS_CHECK);
                }
            }
            let negative = match expect {
                None => false,
                Some(Expectation::Rational) => !report.rationality.is_rational(),
                Some(Expectation::FRational) => {
                    !report.rationality.is_rational()
                        || report.f_rationality.iter().any(|v| !v.is_f_rational())
                }
            };
            Ok(if negative { EXIT_NEGATIVE } else { EXIT_OK })
        }
        Command::FailingPrimes {
            divisor,
            json: as_json,
        } => {
            let d = normalize(&parse_divisor(&divisor)?)?;
            let primes: Vec<u64> = failing_primes(&d)?.into_iter().collect();
            if as_json {
                emit(json(&FailingPrimesReport {
                    schema_version: SCHEMA_VERSION,
                    divisor: d,
                    failing_primes: primes,
                }));
            } else {
                let s: Vec<String> = primes.iter().map(u64::to_string).collect();
                emit(format!("{{{}}}\n", s.join(", ")));
            }
            Ok(EXIT_OK)
        }
        Command::Classify {
            multiplicity,
            max_denominator,
            max_param,
            max_s,
            max_points,
            max_instance_denominator,
            json: as_json,
        } => {
            let bounds = EnumerationBounds {
                max_s,
                max_points,
                max_denominator,
                max_param,
                max_instance_denominator,
            };
            let e: u64 = multiplicity.parse().expect("validated by clap");
            let report = enumerate_and_verify(&bounds, e)?;
            if as_json {
                emit(json(&report));
            } else {
                emit(format!(
                    "multiplicity {e}: {} divisors, {} rational, {} of multiplicity {e}, {} matched\n\
                     outside table: {}\nfalse positives: {}\ninstance failures: {}\n",
                    report.divisors_examined,
                    report.rational,
                    report.with_target_multiplicity,
                    report.matched,
                    report.outside_table.len(),
                    report.table_false_positives.len(),
                    report.instance_failures.len()
                ));
                for d in &report.outside_table {
                    emit(format!("  outside: {d}\n"));
                }
                for f in &report.instance_failures {
                    emit(format!(
                        "  failure: {} {:?}: {}\n",
                        f.family, f.params, f.reason
                    ));
                }
            }
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_CROSS_CHECK
            })
        }
        Command::Threshold {
            multiplicity,
            primes,
            max_param,
            json: as_json,
        } => {
            let e: u64 = multiplicity.parse().expect("validated by clap");
            let report = threshold_report(e, &primes, max_param)?;
            if as_json {
                emit(json(&report));
            } else {
                for t in &report.primes {
                    emit(format!(
                        "p = {}: {} of {} divisors not F-rational\n",
                        t.p, t.failure_count, t.divisors_checked
                    ));
                    for f in &t.failures {
                        emit(format!(
                            "  {} {} (n = {}, value {})\n",
                            f.family, f.divisor, f.witness.n, f.witness.value
                        ));
                    }
                    if let Some(w) = &t.sharpness {
                        emit(format!(
                            "  sharpness {}: multiplicity {}, {}\n",
                            w.divisor,
                            w.multiplicity,
                            if w.witness.is_some() {
                                "not F-rational"
                            } else {
                                "F-rational"
                            }
                        ));
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Render { divisor, format } => {
            let d = normalize(&parse_divisor(&divisor)?)?;
            let g = dual_graph(&d)?;
            let z = fundamental_cycle(&d).ok();
            emit(render_graph(&g, z.as_ref(), format));
            Ok(EXIT_OK)
        }
    }
}
