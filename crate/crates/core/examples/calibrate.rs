//! Detunes the built-in profile and lets the calibrator pull it back onto
//! the reference KPIs.
//!
//! ```text
//! cargo run --release --example calibrate -- 1.3 200
//! ```

use edsim::cli::validation_lines;
use edsim::stochastics::{calibrate, CalibrationSettings, CalibrationTarget, Profile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let factor: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(1.3);
    let budget: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(200);

    let mut start = Profile::builtin();
    let s = &mut start.service;
    for m in [&mut s.first_visit.general, &mut s.last_visit.general] {
        *m = m.scaled(factor);
    }
    start.lab_profile.scale /= factor;

    let settings = CalibrationSettings {
        budget,
        ..CalibrationSettings::default()
    };
    let outcome = calibrate(&start, &CalibrationTarget::REFERENCE, &settings);
    for row in outcome.trace.iter().step_by(10) {
        println!(
            "#{:<3} in {:>7.2} wt1 {:>6.2} wtl {:>6.2} los {:>7.2} f {:.5}",
            row.evaluation, row.in_per_day, row.wt_first, row.wt_last, row.los, row.objective
        );
    }
    if let Some(r) = &outcome.report {
        for line in validation_lines(r).1 {
            println!("{line}");
        }
    }
    println!(
        "{} after {} evaluations",
        if outcome.converged {
            "converged"
        } else {
            "not converged"
        },
        outcome.trace.len()
    );
    Ok(())
}
