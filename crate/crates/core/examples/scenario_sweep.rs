//! Compares a few organisational changes against the current setting with
//! common random numbers and Welch tests.
//!
//! ```text
//! cargo run --release --example scenario_sweep -- F.1 G.5 "(-,-,120,-,15,50,-,30)"
//! ```

use edsim::harness::{replication_kpis, RunSettings};
use edsim::kpi::{aggregate, compare, COMPARISON_HEADER};
use edsim::scenario::{self, Scenario};
use edsim::stochastics::Profile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut specs: Vec<String> = std::env::args().skip(1).collect();
    if specs.is_empty() {
        specs = ["A.1", "B.1", "C.4", "F.1", "G.5", "Cb.15"]
            .map(String::from)
            .to_vec();
    }
    let profile = Profile::builtin();
    let settings = RunSettings::default();
    let baseline = aggregate(&replication_kpis(&profile, &Scenario::BASELINE, &settings))?;
    println!("{COMPARISON_HEADER}");
    for spec in &specs {
        let s = scenario::parse(spec)?;
        let r = aggregate(&replication_kpis(&profile, &s, &settings))?;
        let cmp = compare(&baseline, &r)?;
        println!("{}", cmp.csv_row(spec));
    }
    println!("baseline los {:.2}", baseline.los);
    Ok(())
}
