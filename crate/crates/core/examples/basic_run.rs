//! Ten 30-day replications of the current department and its KPIs.
//!
//! ```text
//! cargo run --release --example basic_run -- 7
//! ```

use edsim::harness::{run_report, RunSettings};
use edsim::model::UrgencyCode;
use edsim::scenario::Scenario;
use edsim::stochastics::Profile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(1);
    let settings = RunSettings {
        master_seed: seed,
        ..RunSettings::default()
    };
    let r = run_report(&Profile::builtin(), &Scenario::BASELINE, &settings);
    println!("replications      {} x {} days", r.replications, r.days);
    println!("admitted per day  {:.2}", r.in_per_day);
    println!("wait first visit  {:.2} min", r.wt_first);
    println!("wait last visit   {:.2} min", r.wt_last);
    println!("length of stay    {:.2} min", r.los);
    println!("green outliers    {:.2}%", r.outlier(UrgencyCode::Green));
    println!("white outliers    {:.2}%", r.outlier(UrgencyCode::White));
    println!("censored          {}", r.censored);
    Ok(())
}
