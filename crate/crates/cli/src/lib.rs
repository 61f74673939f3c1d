//! Scenario files, the check registry and report rendering behind `pwlab`.

pub mod checks;
pub mod gallery;
pub mod report;
pub mod scenario;

pub use checks::CheckId;
pub use report::{emit_report, run_checks, Format, Report};
pub use scenario::{Scenario, ScenarioError};

/// Reports for several scenarios as one JSON array.
pub fn emit_reports_json(reports: &[Report]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("serializable report");
    s.push('\n');
    s
}
