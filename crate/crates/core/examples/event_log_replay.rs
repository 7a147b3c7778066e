//! Recomputes KPIs from an event-log CSV written by `edsim run`.
//!
//! ```text
//! cargo run --example event_log_replay -- edsim-out/eventlog_rep00.csv 30
//! ```

use std::fs::File;
use std::io::BufReader;

use edsim::kpi::{compute_kpis, first_visit_waits, KpiSpec};
use edsim::model::{EventLog, UrgencyCode};
use edsim::stochastics::Profile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .ok_or("usage: event_log_replay <eventlog.csv> [days]")?;
    let days: u32 = args.next().map(|d| d.parse()).transpose()?.unwrap_or(30);

    let log = EventLog::read_csv(BufReader::new(File::open(&path)?))?;
    let spec = KpiSpec::new(days, Profile::builtin().thresholds);
    let report = compute_kpis(&log, &spec);
    println!("{} records", log.len());
    println!("{}", report.to_json());

    let waits = first_visit_waits(&log, &spec);
    for code in UrgencyCode::ALL {
        let mut w: Vec<_> = waits
            .iter()
            .filter(|(c, _)| *c == code)
            .map(|(_, w)| *w)
            .collect();
        if w.is_empty() {
            continue;
        }
        w.sort_unstable();
        println!(
            "{code:<6} n={:<6} median={:<4} p90={:<4} max={}",
            w.len(),
            w[w.len() / 2],
            w[w.len() * 9 / 10],
            w[w.len() - 1]
        );
    }
    Ok(())
}
