use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pwlab::checks::REGISTRY;
use pwlab::{emit_report, emit_reports_json, gallery, run_checks, Format, Report, Scenario};

#[derive(Parser)]
#[command(name = "pwlab", version, about = "Exact checks of Patterson-Walker constructions over projective structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file, or of every bundled scenario.
    Check {
        scenario: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
        /// Worker threads (default: one per core).
        #[arg(long)]
        jobs: Option<usize>,
        /// Override the polynomial degree bound of the solution search.
        #[arg(long)]
        degree_bound: Option<u32>,
        #[arg(long, conflicts_with = "scenario")]
        gallery: bool,
    },
    /// List the available checks.
    Checks,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Checks => {
            let mut out = String::new();
            for c in &REGISTRY {
                let tag = if c.default { "" } else { " (opt-in)" };
                out += &format!("{:<28} {}{tag}\n{:<28} covers: {}\n", c.name, c.anchor, "", c.covers.join(", "));
            }
            emit(&out);
            ExitCode::SUCCESS
        }
        Command::Check { scenario, format, jobs, degree_bound, gallery } => {
            let mut scenarios = if gallery {
                gallery::all()
            } else {
                let Some(path) = scenario else {
                    eprintln!("error: give a scenario file or --gallery");
                    return ExitCode::from(2);
                };
                match Scenario::load(&path) {
                    Ok(s) => vec![s],
                    Err(e) => {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
            };
            if let Some(d) = degree_bound {
                for s in &mut scenarios {
                    s.options.degree_bound = d;
                }
            }
            let reports: Vec<Report> =
                scenarios.iter().map(|s| run_checks(s, &s.checks, jobs.or(s.options.jobs))).collect();
            let out = match (format, gallery) {
                (OutFormat::Json, true) => emit_reports_json(&reports),
                (OutFormat::Json, false) => emit_report(&reports[0], Format::Json),
                (OutFormat::Text, _) => reports.iter().map(|r| emit_report(r, Format::Text)).collect::<Vec<_>>().join("\n"),
            };
            emit(&out);
            if reports.iter().all(Report::passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}

// a closed pipe (`pwlab checks | head`) is not an error worth a panic
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|()| out.flush());
}
