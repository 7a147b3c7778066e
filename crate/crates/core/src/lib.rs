//! Discrete-event simulation of a hospital emergency department for
//! what-if analysis of organisational changes.
//!
//! The crate is layered: [`kernel`] holds generic event-calendar, shift and
//! queue machinery; [`stochastics`] samples everything random from a
//! versioned [`Profile`](stochastics::Profile); [`model`] wires patients
//! through triage, visits, laboratory and exams and writes an event log;
//! [`scenario`] describes the organisational changes to try; [`kpi`] turns
//! logs into length-of-stay and waiting-time figures; [`harness`] runs
//! replications in parallel; [`cli`] backs the `edsim` binary.
//!
//! ```
//! use edsim::{harness::RunSettings, scenario, stochastics::Profile};
//!
//! let profile = Profile::builtin();
//! let f1 = scenario::parse("F.1").unwrap();
//! let settings = RunSettings { replications: 2, days: 3, ..RunSettings::default() };
//! let report = edsim::harness::run_report(&profile, &f1, &settings);
//! assert!(report.los > 0.0);
//! ```

pub mod cli;
pub mod harness;
pub mod kernel;
pub mod kpi;
pub mod model;
pub mod scenario;
pub mod stochastics;
