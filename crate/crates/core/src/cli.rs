//! Command-line front end: `run`, `sweep`, `validate` and `calibrate`.
//!
//! Exit codes: 0 success, 1 tolerance breach or failed calibration, 2 bad
//! input (profile, scenario, flags), 3 I/O failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::harness::{replication_kpis, run_replications, RunSettings};
use crate::kpi::{
    aggregate, bar_chart, compare, compute_kpis, csv_row, KpiReport, COMPARISON_HEADER,
};
use crate::scenario::{self, Scenario, ScenarioError};
use crate::stochastics::{
    calibrate, CalibrationOutcome, CalibrationSettings, CalibrationTarget, Profile, ProfileError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "edsim",
    version,
    about = "Emergency department what-if simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one scenario and write event logs and a KPI report.
    Run {
        #[command(flatten)]
        common: Common,
        /// Catalog name, `baseline`, 8-field tuple or scenario JSON file.
        #[arg(long, default_value = "baseline")]
        scenario: String,
    },
    /// Compare catalog scenarios against the baseline with common random numbers.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Scenarios to compare; the whole catalog if none given.
        #[arg(long = "scenario", value_delimiter = ',')]
        scenarios: Vec<String>,
        /// Also write a bar chart of mean length of stay.
        #[arg(long)]
        svg: bool,
    },
    /// Check the baseline against the reference KPIs.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Fit the profile's free parameters to the reference KPIs.
    Calibrate {
        #[command(flatten)]
        common: Common,
        /// Maximum number of simulated candidate evaluations.
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Profile JSON; the built-in calibrated profile if absent.
    #[arg(long, env = "EDSIM_PROFILE")]
    pub profile: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub replications: u32,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..))]
    pub days: u32,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, default_value = "edsim-out")]
    pub out: PathBuf,
}

impl Common {
    pub fn settings(&self) -> RunSettings {
        RunSettings {
            master_seed: self.seed,
            replications: self.replications,
            days: self.days,
            jobs: self.jobs,
        }
    }

    pub fn load_profile(&self) -> Result<Profile, CliError> {
        match &self.profile {
            None => Ok(Profile::builtin()),
            Some(path) => Profile::load(path).map_err(CliError::Profile),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Profile(ProfileError),
    #[error("scenario `{spec}`: {source}")]
    Scenario { spec: String, source: ScenarioError },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            _ => EXIT_INPUT,
        }
    }
}

/// Reads a scenario from a catalog name, `baseline`, tuple literal or JSON
/// file. Returns the display name and the scenario.
pub fn resolve_scenario(spec: &str) -> Result<(String, Scenario), CliError> {
    let err = |source| CliError::Scenario {
        spec: spec.to_owned(),
        source,
    };
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        let (name, s) = Scenario::from_json(&text).map_err(err)?;
        return Ok((name.unwrap_or_else(|| s.to_string()), s));
    }
    let s = scenario::parse(spec).map_err(err)?;
    Ok((spec.trim().to_owned(), s))
}

fn write(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Run report as written to `report.json`.
#[derive(Debug, Serialize)]
pub struct RunReport<'a> {
    pub scenario: &'a str,
    pub tuple: String,
    pub seed: u64,
    pub profile: &'a str,
    pub notes: [&'static str; 3],
    pub kpis: &'a KpiReport,
}

const NOTES: [&str; 3] = [
    "in_per_day excludes patients sent away at triage",
    "los and wt_last exclude patients still in the department at the horizon (see censored)",
    "arrivals before warmup_minutes are excluded from every KPI",
];

fn cmd_run(common: &Common, spec: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let profile = common.load_profile()?;
    let (name, s) = resolve_scenario(spec)?;
    let settings = common.settings();
    let outputs = run_replications(&profile, &s, &settings);
    let kspec = settings.kpi_spec(&profile);
    let reports: Vec<KpiReport> = outputs
        .iter()
        .map(|o| compute_kpis(&o.log, &kspec))
        .collect();
    let report = aggregate(&reports).map_err(|e| CliError::Usage(e.to_string()))?;

    create_dir(&common.out)?;
    for (i, o) in outputs.iter().enumerate() {
        let path = common.out.join(format!("eventlog_rep{i:02}.csv"));
        write(&path, o.log.to_csv_string().as_bytes())?;
    }
    let doc = RunReport {
        scenario: &name,
        tuple: s.to_string(),
        seed: common.seed,
        profile: &profile.name,
        notes: NOTES,
        kpis: &report,
    };
    let mut json = serde_json::to_string_pretty(&doc).expect("report serialises");
    json.push('\n');
    write(&common.out.join("report.json"), json.as_bytes())?;
    let _ = writeln!(out, "{}", summary_line(&name, &report));
    if report.low_sample {
        let _ = writeln!(out, "note: low-sample run");
    }
    Ok(EXIT_OK)
}

fn summary_line(name: &str, r: &KpiReport) -> String {
    format!(
        "{name}: in={:.2}/day wt_first={:.2} wt_last={:.2} los={:.2} outliers green={:.2}% white={:.2}% censored={}",
        r.in_per_day,
        r.wt_first,
        r.wt_last,
        r.los,
        r.outlier(crate::model::UrgencyCode::Green),
        r.outlier(crate::model::UrgencyCode::White),
        r.censored
    )
}

fn cmd_sweep(
    common: &Common,
    names: &[String],
    svg: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let profile = common.load_profile()?;
    let targets: Vec<(String, Scenario)> = if names.is_empty() {
        scenario::catalog()
            .iter()
            .map(|(n, s)| ((*n).to_owned(), *s))
            .collect()
    } else {
        names
            .iter()
            .map(|n| resolve_scenario(n))
            .collect::<Result<_, _>>()?
    };
    let settings = common.settings();
    let baseline = aggregate(&replication_kpis(&profile, &Scenario::BASELINE, &settings))
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let mut rows = vec![
        COMPARISON_HEADER.to_owned(),
        csv_row("baseline", &baseline, ""),
    ];
    let mut bars = vec![("baseline".to_owned(), baseline.los)];
    for (name, s) in &targets {
        let report = aggregate(&replication_kpis(&profile, s, &settings))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let row = if settings.replications >= 2 {
            compare(&baseline, &report)
                .map_err(|e| CliError::Usage(e.to_string()))?
                .csv_row(name)
        } else {
            csv_row(name, &report, "")
        };
        rows.push(row);
        bars.push((name.clone(), report.los));
    }
    let mut csv = rows.join("\n");
    csv.push('\n');
    create_dir(&common.out)?;
    write(&common.out.join("sweep.csv"), csv.as_bytes())?;
    if svg {
        let chart = bar_chart("Mean length of stay", "min", &bars);
        write(&common.out.join("sweep.svg"), chart.as_bytes())?;
    }
    let _ = out.write_all(csv.as_bytes());
    Ok(EXIT_OK)
}

/// Whether `r` meets every reference tolerance, with one line per KPI.
pub fn validation_lines(r: &KpiReport) -> (bool, Vec<String>) {
    let t = CalibrationTarget::REFERENCE;
    let errs = t.relative_errors(r);
    let names = ["in", "wt_first", "wt_last", "los"];
    let got = [r.in_per_day, r.wt_first, r.wt_last, r.los];
    let want = [t.in_per_day, t.wt_first, t.wt_last, t.los];
    let mut ok = true;
    let lines = (0..4)
        .map(|i| {
            let pass = errs[i].abs() <= CalibrationTarget::TOLERANCES[i];
            ok &= pass;
            format!(
                "{:<9} target {:>8.2} got {:>8.2} delta {:>+7.2}% (tol ±{:.0}%) {}",
                names[i],
                want[i],
                got[i],
                100.0 * errs[i],
                100.0 * CalibrationTarget::TOLERANCES[i],
                if pass { "PASS" } else { "FAIL" }
            )
        })
        .collect();
    (ok, lines)
}

fn cmd_validate(common: &Common, out: &mut dyn Write) -> Result<i32, CliError> {
    let profile = common.load_profile()?;
    let report = aggregate(&replication_kpis(
        &profile,
        &Scenario::BASELINE,
        &common.settings(),
    ))
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let (ok, lines) = validation_lines(&report);
    for l in lines {
        let _ = writeln!(out, "{l}");
    }
    let _ = writeln!(out, "{}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_calibrate(common: &Common, budget: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let profile = common.load_profile()?;
    let settings = CalibrationSettings {
        run: common.settings(),
        budget,
        ..CalibrationSettings::default()
    };
    let outcome: CalibrationOutcome = calibrate(&profile, &CalibrationTarget::REFERENCE, &settings);
    create_dir(&common.out)?;
    write(
        &common.out.join("profile.json"),
        outcome.profile.to_json().as_bytes(),
    )?;
    write(
        &common.out.join("calibration_trace.csv"),
        outcome.trace_csv().as_bytes(),
    )?;
    if let Some(r) = &outcome.report {
        for l in validation_lines(r).1 {
            let _ = writeln!(out, "{l}");
        }
    }
    let _ = writeln!(out, "evaluations: {}", outcome.trace.len());
    if outcome.converged {
        let _ = writeln!(out, "CONVERGED");
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(out, "FAILED: budget exhausted, best-so-far profile written");
        Ok(EXIT_FAIL)
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Run { common, scenario } => cmd_run(common, scenario, out),
        Command::Sweep {
            common,
            scenarios,
            svg,
        } => cmd_sweep(common, scenarios, *svg, out),
        Command::Validate { common } => cmd_validate(common, out),
        Command::Calibrate { common, budget } => cmd_calibrate(common, *budget, out),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
