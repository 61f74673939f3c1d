//! Running checks and rendering their results.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::checks::{CheckId, Context};
use crate::scenario::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub anchor: &'static str,
    pub status: Status,
    /// Empty on pass; the failing identities or the error otherwise.
    pub residual: String,
    #[serde(skip)]
    pub wall: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scenario: String,
    pub n: usize,
    pub checks: Vec<CheckReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }
}

fn run_one(cx: &Context, id: CheckId) -> CheckReport {
    let start = Instant::now();
    let (status, residual) = match id.run(cx) {
        Ok(f) if f.is_empty() => (Status::Pass, String::new()),
        Ok(f) => (Status::Fail, f.residual()),
        Err(e) => (Status::Error, e.to_string()),
    };
    let spec = id.spec();
    CheckReport { name: spec.name, anchor: spec.anchor, status, residual, wall: start.elapsed() }
}

/// Runs `ids` in registry order; `jobs` caps the worker threads.
pub fn run_checks(scenario: &Scenario, ids: &[CheckId], jobs: Option<usize>) -> Report {
    let mut ids = ids.to_vec();
    ids.sort();
    ids.dedup();
    let cx = Context::new(scenario);
    let checks = run_all(&cx, &ids, jobs);
    Report { scenario: scenario.name.clone(), n: scenario.n, checks }
}

#[cfg(feature = "parallel")]
fn run_all(cx: &Context, ids: &[CheckId], jobs: Option<usize>) -> Vec<CheckReport> {
    use rayon::prelude::*;
    if jobs == Some(1) {
        return ids.iter().map(|&id| run_one(cx, id)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.unwrap_or(0)).build().expect("thread pool");
    pool.install(|| ids.par_iter().map(|&id| run_one(cx, id)).collect())
}

#[cfg(not(feature = "parallel"))]
fn run_all(cx: &Context, ids: &[CheckId], _jobs: Option<usize>) -> Vec<CheckReport> {
    ids.iter().map(|&id| run_one(cx, id)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("serializable report");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            let failed = report.checks.iter().filter(|c| c.status != Status::Pass).count();
            let _ = writeln!(s, "scenario {} (n = {}): {} checks, {} failed", report.scenario, report.n, report.checks.len(), failed);
            for c in &report.checks {
                let _ = writeln!(s, "{:<5} {:<28} {:>9.3} ms  {}", c.status.as_str(), c.name, c.wall.as_secs_f64() * 1e3, c.anchor);
                for line in c.residual.lines() {
                    let _ = writeln!(s, "      {line}");
                }
            }
            s
        }
    }
}
