//! Command-line front end. Results go to `out`, diagnostics to `err`.
//!
//! Exit codes: 0 success, 1 a verification or witness failed, 2 usage or
//! input error, 3 materialization budget exceeded.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::Error;
use crate::perm::{Budget, TuplePerm, Word};
use crate::psi::psi_apply;
use crate::stability::{exact_rank_for_stable, stability_search, Status};
use crate::text::{parse_perm, parse_word_over};
use crate::transposition::{check_witnesses, classify, witness_points, Claim, ClassificationRecord, Transposition3};
use crate::verify::{emit_report, verify_theorem_with, ReportFormat, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "weylstab", version, about = "Stable permutations of [n]^t and transpositions of [n]^3")]
pub struct Cli {
    /// Materialization limit, in support entries.
    #[arg(long, global = true, env = "WEYLSTAB_BUDGET", default_value_t = Budget::DEFAULT.0)]
    budget: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the transposition exchanging two words of [n]^3.
    Classify {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Evaluate Ψ_k(u) at one point.
    PsiEval {
        #[arg(long)]
        n: u32,
        /// Cycle list such as "[(1,1,1) (2,2,2)]", or "id" with --arity.
        #[arg(long)]
        perm: String,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        point: String,
    },
    /// Search for an identity-tail certificate among Ψ_0..Ψ_{h_max}.
    Stability {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        perm: String,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(long, default_value_t = 4)]
        h_max: usize,
        /// Also compute the rank with the windowed prefix check.
        #[arg(long)]
        rank: bool,
    },
    /// Check the classifier on every transposition of [n]^3.
    Verify {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 4)]
        h_max: usize,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Evaluate the instability witnesses of an unstable transposition.
    Witness {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn no_csv(format: Format) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure::Usage("csv output is only available for `verify`".into()));
    }
    Ok(())
}

fn transposition(n: u32, a: &str, b: &str) -> Result<Transposition3, Failure> {
    let a = parse_word_over(a, n)?;
    let b = parse_word_over(b, n)?;
    Ok(Transposition3::new(n, a, b)?)
}

fn perm(n: u32, src: &str, arity: Option<usize>) -> Result<TuplePerm, Failure> {
    Ok(parse_perm(src, n, arity)?)
}

fn json_line(value: &impl serde::Serialize) -> Vec<u8> {
    let mut v = serde_json::to_vec(value).expect("serializable");
    v.push(b'\n');
    v
}

/// Output bytes and exit code of a successful dispatch.
fn dispatch(cli: &Cli) -> Result<(Vec<u8>, i32), Failure> {
    let budget = Budget(cli.budget);
    match &cli.command {
        Command::Classify { n, a, b } => {
            no_csv(cli.format)?;
            let t = transposition(*n, a, b)?;
            let c = classify(&t);
            let out = match cli.format {
                Format::Json => json_line(&ClassificationRecord::new(&t, c)),
                _ => format!("{t} n={n}: {} ({})\n", c.verdict(), c.label()).into_bytes(),
            };
            Ok((out, EXIT_OK))
        }
        Command::PsiEval { n, perm: src, arity, k, point } => {
            no_csv(cli.format)?;
            let u = perm(*n, src, *arity)?;
            let point: Word = parse_word_over(point, *n)?;
            let image = psi_apply(&u, *k, &point)?;
            let out = match cli.format {
                Format::Json => json_line(&json!({ "k": k, "input": point, "output": image })),
                _ => format!("{image}\n").into_bytes(),
            };
            Ok((out, EXIT_OK))
        }
        Command::Stability { n, perm: src, arity, h_max, rank } => {
            no_csv(cli.format)?;
            let u = perm(*n, src, *arity)?;
            let mut verdict = stability_search(&u, *h_max, budget)?;
            if *rank && verdict.is_stable() && verdict.rank_exact().is_none() {
                verdict = verdict.with_rank(exact_rank_for_stable(&u, &verdict, budget)?);
            }
            let out = match cli.format {
                Format::Json => json_line(&verdict),
                _ => match verdict.status {
                    Status::StableCertified { certificate_h, rank_upper, rank_exact } => {
                        let mut line = format!("stable: certificate at h={certificate_h}, rank <= {rank_upper}");
                        if let Some(r) = rank_exact {
                            line.push_str(&format!(", rank = {r} (windowed prefix check)"));
                        }
                        format!("{line}\n").into_bytes()
                    }
                    Status::Inconclusive { h_max } => {
                        format!("inconclusive: no certificate for h <= {h_max} (not a proof of instability)\n")
                            .into_bytes()
                    }
                },
            };
            Ok((out, EXIT_OK))
        }
        Command::Verify { n, h_max, jobs } => {
            if *jobs == Some(0) {
                return Err(Failure::Usage("--jobs must be at least 1".into()));
            }
            let opts = VerifyOptions { h_max: *h_max, budget, threads: *jobs };
            let report = verify_theorem_with(*n, &opts)?;
            let code = if report.theorem_holds() { EXIT_OK } else { EXIT_FAILED };
            let out = match cli.format {
                Format::Json => emit_report(&report, ReportFormat::Json)?,
                Format::Csv => emit_report(&report, ReportFormat::Csv)?,
                Format::Text => {
                    let mut s = format!(
                        "n={} total={} stable_count={} mismatches={} h_max={}\n",
                        report.n,
                        report.total,
                        report.stable_count,
                        report.mismatches.len(),
                        report.h_max
                    );
                    for (k, v) in report.branch_counts.iter().chain(&report.case_counts) {
                        s.push_str(&format!("  {k}: {v}\n"));
                    }
                    for m in &report.mismatches {
                        s.push_str(&format!(
                            "  MISMATCH {}: classifier {} ({}), rank1 {}, search {}\n",
                            m.transposition,
                            m.classifier_verdict,
                            m.classifier_label,
                            m.rank1_verdict,
                            if m.search_verdict.is_stable() { "stable" } else { "inconclusive" }
                        ));
                    }
                    s.into_bytes()
                }
            };
            Ok((out, code))
        }
        Command::Witness { n, a, b, r } => {
            no_csv(cli.format)?;
            let t = transposition(*n, a, b)?;
            let checks = check_witnesses(witness_points(&t, *r)?, budget)?;
            let code = if checks.iter().all(|c| c.passed()) { EXIT_OK } else { EXIT_FAILED };
            let out = match cli.format {
                Format::Json => json_line(&checks),
                _ => {
                    let mut s = String::new();
                    for c in &checks {
                        let w = &c.witness;
                        let claim = match w.claim {
                            Claim::Printed => "printed",
                            Claim::HeadOnly => "head_only",
                            Claim::Recomputed => "recomputed",
                        };
                        s.push_str(&format!(
                            "{} {} k={} {} -> {} [{claim}] no_identity_tail={}\n",
                            if c.passed() { "PASS" } else { "FAIL" },
                            w.target,
                            w.k,
                            w.input,
                            w.expected,
                            c.no_identity_tail
                        ));
                    }
                    s.into_bytes()
                }
            };
            Ok((out, code))
        }
    }
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = write!(err, "{e}");
            return EXIT_USAGE;
        }
    };
    match dispatch(&cli) {
        Ok((bytes, code)) => {
            let _ = out.write_all(&bytes);
            code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Budget(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_BUDGET
        }
    }
}
