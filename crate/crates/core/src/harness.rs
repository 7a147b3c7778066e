//! Replicated runs fanned out over a worker pool.

use rayon::prelude::*;

use crate::kpi::{aggregate, compute_kpis, KpiReport, KpiSpec};
use crate::model::{simulate, ReplicationOutput, SimConfig};
use crate::scenario::Scenario;
use crate::stochastics::Profile;

/// How many replications to run and how.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSettings {
    pub master_seed: u64,
    pub replications: u32,
    pub days: u32,
    /// Worker threads; 0 uses one per core.
    pub jobs: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            master_seed: 1,
            replications: 10,
            days: 30,
            jobs: 0,
        }
    }
}

impl RunSettings {
    pub fn config(&self, rep: u32) -> SimConfig {
        SimConfig::for_replication(self.master_seed, rep, self.days)
    }

    pub fn kpi_spec(&self, profile: &Profile) -> KpiSpec {
        KpiSpec::new(self.days, profile.thresholds)
    }

    fn map<T: Send>(&self, f: impl Fn(u32) -> T + Sync + Send) -> Vec<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .expect("worker pool");
        pool.install(|| (0..self.replications).into_par_iter().map(f).collect())
    }
}

/// Every replication's full output, in replication order.
pub fn run_replications(
    profile: &Profile,
    scenario: &Scenario,
    settings: &RunSettings,
) -> Vec<ReplicationOutput> {
    settings.map(|rep| simulate(profile, scenario, &settings.config(rep)))
}

/// Per-replication KPIs, discarding the logs as soon as they are measured.
pub fn replication_kpis(
    profile: &Profile,
    scenario: &Scenario,
    settings: &RunSettings,
) -> Vec<KpiReport> {
    let spec = settings.kpi_spec(profile);
    settings.map(|rep| {
        compute_kpis(
            &simulate(profile, scenario, &settings.config(rep)).log,
            &spec,
        )
    })
}

/// KPIs averaged over all replications.
pub fn run_report(profile: &Profile, scenario: &Scenario, settings: &RunSettings) -> KpiReport {
    aggregate(&replication_kpis(profile, scenario, settings)).expect("at least one replication")
}
