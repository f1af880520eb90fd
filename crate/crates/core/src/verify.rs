//! Exhaustive check of the transposition classifier against the two
//! `Ψ`-based tests, over every transposition of `[n]^3`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{words, Budget, Word};
use crate::stability::{rank_one_check, stability_search, StabilityVerdict};
use crate::transposition::{classify, Branch, CaseTag, Classification, Transposition3};

/// Every unordered pair of distinct words of `[n]^3`, ordered by `(a, b)`.
pub fn enumerate_transpositions(n: u32) -> Result<impl Iterator<Item = Transposition3>> {
    if n < 2 {
        return Err(Error::AlphabetTooSmall { n, min: 2 });
    }
    let all: Vec<Word> = words(n, 3).collect();
    let pairs = (0..all.len()).flat_map(move |i| {
        let all = all.clone();
        (i + 1..all.len()).map(move |j| {
            Transposition3::new(n, all[i].clone(), all[j].clone()).expect("distinct words of [n]^3")
        })
    });
    Ok(pairs)
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub h_max: usize,
    pub budget: Budget,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { h_max: 4, budget: Budget::DEFAULT, threads: None }
    }
}

/// One row of the per-transposition listing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRow {
    pub a: Word,
    pub b: Word,
    pub verdict: String,
    pub label: String,
    pub rank1: bool,
    pub search_h: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub transposition: Transposition3,
    pub classifier_verdict: String,
    pub classifier_label: String,
    pub rank1_verdict: bool,
    pub search_verdict: StabilityVerdict,
}

/// Field order is the JSON key order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: u32,
    pub total: usize,
    pub stable_count: usize,
    pub branch_counts: BTreeMap<String, usize>,
    pub case_counts: BTreeMap<String, usize>,
    pub mismatches: Vec<Mismatch>,
    pub h_max: usize,
    pub budget: usize,
    /// An inconclusive search is counted as agreeing with "unstable".
    pub search_semantics: String,
    pub instances: Vec<InstanceRow>,
    /// Wall-clock time; not serialized and ignored by equality.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PartialEq for VerificationReport {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.total == other.total
            && self.stable_count == other.stable_count
            && self.branch_counts == other.branch_counts
            && self.case_counts == other.case_counts
            && self.mismatches == other.mismatches
            && self.h_max == other.h_max
            && self.budget == other.budget
            && self.search_semantics == other.search_semantics
            && self.instances == other.instances
    }
}

impl VerificationReport {
    pub fn theorem_holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

struct Outcome {
    t: Transposition3,
    class: Classification,
    rank1: bool,
    search: StabilityVerdict,
}

fn check_one(t: Transposition3, opts: &VerifyOptions) -> Result<Outcome> {
    let class = classify(&t);
    let u = t.perm();
    let rank1 = rank_one_check(&u, opts.budget)?;
    let search = stability_search(&u, opts.h_max, opts.budget)?;
    Ok(Outcome { t, class, rank1, search })
}

pub fn verify_theorem(n: u32, h_max: usize, budget: Budget) -> Result<VerificationReport> {
    verify_theorem_with(n, &VerifyOptions { h_max, budget, threads: None })
}

pub fn verify_theorem_with(n: u32, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let all: Vec<Transposition3> = enumerate_transpositions(n)?.collect();
    let total = all.len();
    let run = || -> Vec<Result<Outcome>> { all.into_par_iter().map(|t| check_one(t, opts)).collect() };
    let results = match opts.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(run),
        None => run(),
    };

    let mut outcomes = Vec::with_capacity(total);
    for (completed, r) in results.into_iter().enumerate() {
        match r {
            Ok(o) => outcomes.push(o),
            Err(cause) => return Err(Error::Aborted { completed, total, cause: Box::new(cause) }),
        }
    }

    let mut branch_counts: BTreeMap<String, usize> = Branch::ALL.iter().map(|b| (b.name().into(), 0)).collect();
    let mut case_counts: BTreeMap<String, usize> = CaseTag::ALL.iter().map(|c| (c.name().into(), 0)).collect();
    let mut mismatches = Vec::new();
    let mut instances = Vec::with_capacity(total);
    let mut stable_count = 0;
    for o in outcomes {
        let label = o.class.label().to_string();
        match o.class {
            Classification::StableRankOne { .. } => {
                stable_count += 1;
                *branch_counts.get_mut(&label).expect("all branches listed") += 1;
            }
            Classification::Unstable { .. } => *case_counts.get_mut(&label).expect("all cases listed") += 1,
        }
        let stable = o.class.is_stable();
        if stable != o.rank1 || stable != o.search.is_stable() {
            mismatches.push(Mismatch {
                transposition: o.t.clone(),
                classifier_verdict: o.class.verdict().into(),
                classifier_label: label.clone(),
                rank1_verdict: o.rank1,
                search_verdict: o.search,
            });
        }
        instances.push(InstanceRow {
            a: o.t.a().clone(),
            b: o.t.b().clone(),
            verdict: o.class.verdict().into(),
            label,
            rank1: o.rank1,
            search_h: o.search.certificate_h(),
        });
    }

    Ok(VerificationReport {
        n,
        total,
        stable_count,
        branch_counts,
        case_counts,
        mismatches,
        h_max: opts.h_max,
        budget: opts.budget.0,
        search_semantics: "one_sided".into(),
        instances,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::UnknownFormat(other.into())),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        })
    }
}

fn joined(w: &Word) -> String {
    w.letters().iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Serializes a report. JSON is pretty-printed with a trailing newline;
/// CSV is `;`-separated with a header row.
pub fn emit_report(report: &VerificationReport, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("report serializes");
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Csv => {
            let mut wtr = csv::WriterBuilder::new().delimiter(b';').from_writer(Vec::new());
            let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
            wtr.write_record(["a", "b", "verdict", "label", "rank1", "search_h"]).map_err(io)?;
            for row in &report.instances {
                let search_h = row.search_h.map_or_else(|| "none".to_string(), |h| h.to_string());
                wtr.write_record([
                    joined(&row.a),
                    joined(&row.b),
                    row.verdict.clone(),
                    row.label.clone(),
                    row.rank1.to_string(),
                    search_h,
                ])
                .map_err(io)?;
            }
            wtr.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))
        }
    }
}

pub fn parse_report(json: &[u8]) -> Result<VerificationReport> {
    serde_json::from_slice(json).map_err(|e| Error::Parse { offset: e.column(), message: e.to_string() })
}
