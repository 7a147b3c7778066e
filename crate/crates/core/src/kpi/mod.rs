//! Key performance indicators computed from event logs, aggregated over
//! replications and compared between scenarios.

mod compare;
mod svg;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{Minute, MINUTES_PER_DAY};
use crate::model::{EventKind, EventLog, UrgencyCode};
use crate::stochastics::Thresholds;

pub use compare::{
    compare, csv_row, welch_p_value, Comparison, Kpi, KpiDelta, ALPHA, COMPARISON_HEADER,
};
pub use svg::bar_chart;

#[derive(Debug, Error, PartialEq)]
pub enum KpiError {
    #[error("usage error: {0}")]
    Usage(String),
}

/// How a replication log is turned into KPIs.
#[derive(Debug, Clone, PartialEq)]
pub struct KpiSpec {
    /// Simulated days in the replication.
    pub days: u32,
    /// Patients arriving before this minute are ignored.
    pub warmup: Minute,
    pub thresholds: Thresholds,
}

impl KpiSpec {
    /// Drops the first simulated day unless the run is a single day long.
    pub fn new(days: u32, thresholds: Thresholds) -> Self {
        let warmup = if days > 1 {
            Minute::from(MINUTES_PER_DAY)
        } else {
            0
        };
        Self {
            days,
            warmup,
            thresholds,
        }
    }

    pub fn horizon(&self) -> Minute {
        Minute::from(self.days) * Minute::from(MINUTES_PER_DAY)
    }

    /// Days over which arrivals are counted.
    pub fn accounting_days(&self) -> f64 {
        (self.horizon() - self.warmup) as f64 / f64::from(MINUTES_PER_DAY)
    }
}

/// Per-replication values behind every mean of a [`KpiReport`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReplicationVectors {
    pub in_per_day: Vec<f64>,
    pub wt_first: Vec<f64>,
    pub wt_last: Vec<f64>,
    pub los: Vec<f64>,
    pub outlier_green: Vec<f64>,
    pub outlier_white: Vec<f64>,
}

/// KPIs of one replication, or the mean over several.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpiReport {
    pub replications: usize,
    /// Admitted patients per day; patients sent away at triage excluded.
    pub in_per_day: f64,
    /// Mean wait from first-visit queue entry to first-visit start, minutes.
    pub wt_first: f64,
    /// Mean wait from last-visit queue entry to last-visit start, minutes.
    pub wt_last: f64,
    /// Mean arrival-to-discharge time of discharged patients, minutes.
    pub los: f64,
    /// Percentage of patients of each code whose first-visit wait exceeded
    /// the code's threshold.
    pub outlier_pct: BTreeMap<String, f64>,
    /// Admitted patients still in the department at the horizon, excluded
    /// from `los`.
    pub censored: u64,
    /// Arrivals in the first `warmup_minutes` of a replication are ignored.
    pub warmup_minutes: Minute,
    pub days: u32,
    /// Fewer than two replications or a run too short for a warm-up.
    pub low_sample: bool,
    pub per_replication: ReplicationVectors,
}

impl KpiReport {
    pub fn outlier(&self, code: UrgencyCode) -> f64 {
        self.outlier_pct
            .get(&code.as_str().to_ascii_lowercase())
            .copied()
            .unwrap_or(0.0)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Trace {
    arrive: Option<Minute>,
    code: Option<UrgencyCode>,
    dismissed: bool,
    enqueue_first: Option<Minute>,
    start_first: Option<Minute>,
    enqueue_last: Option<Minute>,
    start_last: Option<Minute>,
    discharge: Option<Minute>,
}

fn mean(sum: f64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Per-patient timestamps in order of first appearance.
fn traces(log: &EventLog) -> Vec<Trace> {
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut out: Vec<Trace> = Vec::new();
    for r in log.iter() {
        let i = *index.entry(r.patient).or_insert_with(|| {
            out.push(Trace::default());
            out.len() - 1
        });
        let t = &mut out[i];
        match r.event {
            EventKind::Arrive => t.arrive = Some(r.time),
            EventKind::TriageDone => t.code = r.field("code").and_then(|c| c.parse().ok()),
            EventKind::DismissedAtTriage => t.dismissed = true,
            EventKind::EnqueueFirst => t.enqueue_first = Some(r.time),
            EventKind::StartFirst => t.start_first = Some(r.time),
            EventKind::EnqueueLast => t.enqueue_last = Some(r.time),
            EventKind::StartLast => t.start_last = Some(r.time),
            EventKind::Discharge => t.discharge = Some(r.time),
            _ => {}
        }
    }
    out
}

/// Admitted patient arriving inside the accounting window.
fn counted(t: &Trace, spec: &KpiSpec) -> bool {
    t.arrive
        .is_some_and(|a| a >= spec.warmup && a < spec.horizon())
        && !t.dismissed
        && t.enqueue_first.is_some()
}

const REPORTED: [UrgencyCode; 2] = [UrgencyCode::Green, UrgencyCode::White];

/// KPIs of a single replication log.
pub fn compute_kpis(log: &EventLog, spec: &KpiSpec) -> KpiReport {
    let horizon = spec.horizon();
    let (mut admitted, mut censored) = (0u64, 0u64);
    let (mut wt1, mut n1, mut wtl, mut nl, mut los, mut nlos) = (0.0, 0u64, 0.0, 0u64, 0.0, 0u64);
    let mut out_hits = [0u64; 4];
    let mut out_n = [0u64; 4];
    for t in traces(log).into_iter().filter(|t| counted(t, spec)) {
        let arrive = t.arrive.expect("counted");
        admitted += 1;
        let enq1 = t.enqueue_first.expect("checked");
        let done = |x: Option<Minute>| x.filter(|&v| v < horizon);
        if let Some(s) = done(t.start_first) {
            wt1 += (s - enq1) as f64;
            n1 += 1;
        }
        if let (Some(e), Some(s)) = (t.enqueue_last, done(t.start_last)) {
            wtl += (s - e) as f64;
            nl += 1;
        }
        match done(t.discharge) {
            Some(d) => {
                los += (d - arrive) as f64;
                nlos += 1;
            }
            None => censored += 1,
        }
        if let Some(code) = t.code {
            if let Some(thr) = spec.thresholds.get(code) {
                let waited = done(t.start_first).unwrap_or(horizon) - enq1;
                out_n[code.rank() as usize] += 1;
                if waited > Minute::from(thr) {
                    out_hits[code.rank() as usize] += 1;
                }
            }
        }
    }

    let days = spec.accounting_days();
    let in_per_day = if days > 0.0 {
        admitted as f64 / days
    } else {
        0.0
    };
    let mut outlier_pct = BTreeMap::new();
    for code in REPORTED {
        let i = code.rank() as usize;
        outlier_pct.insert(
            code.as_str().to_ascii_lowercase(),
            100.0 * mean(out_hits[i] as f64, out_n[i]),
        );
    }
    let (wt_first, wt_last, los) = (mean(wt1, n1), mean(wtl, nl), mean(los, nlos));
    let vectors = ReplicationVectors {
        in_per_day: vec![in_per_day],
        wt_first: vec![wt_first],
        wt_last: vec![wt_last],
        los: vec![los],
        outlier_green: vec![outlier_pct["green"]],
        outlier_white: vec![outlier_pct["white"]],
    };
    KpiReport {
        replications: 1,
        in_per_day,
        wt_first,
        wt_last,
        los,
        outlier_pct,
        censored,
        warmup_minutes: spec.warmup,
        days: spec.days,
        low_sample: true,
        per_replication: vectors,
    }
}

/// First-visit waits of the admitted patients counted by [`compute_kpis`],
/// with each patient's urgency code. Patients still waiting at the horizon
/// count with their wait so far.
pub fn first_visit_waits(log: &EventLog, spec: &KpiSpec) -> Vec<(UrgencyCode, Minute)> {
    let horizon = spec.horizon();
    traces(log)
        .into_iter()
        .filter(|t| counted(t, spec))
        .filter_map(|t| {
            let enq = t.enqueue_first?;
            let start = t.start_first.filter(|&s| s < horizon).unwrap_or(horizon);
            Some((t.code?, start - enq))
        })
        .collect()
}

fn avg(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Mean over replications, keeping every replication's values.
pub fn aggregate(reports: &[KpiReport]) -> Result<KpiReport, KpiError> {
    let first = reports
        .first()
        .ok_or_else(|| KpiError::Usage("cannot aggregate an empty list of reports".into()))?;
    let mut v = ReplicationVectors::default();
    for r in reports {
        let p = &r.per_replication;
        v.in_per_day.extend(&p.in_per_day);
        v.wt_first.extend(&p.wt_first);
        v.wt_last.extend(&p.wt_last);
        v.los.extend(&p.los);
        v.outlier_green.extend(&p.outlier_green);
        v.outlier_white.extend(&p.outlier_white);
    }
    let mut outlier_pct = BTreeMap::new();
    outlier_pct.insert("green".to_owned(), avg(&v.outlier_green));
    outlier_pct.insert("white".to_owned(), avg(&v.outlier_white));
    let n = v.los.len();
    Ok(KpiReport {
        replications: n,
        in_per_day: avg(&v.in_per_day),
        wt_first: avg(&v.wt_first),
        wt_last: avg(&v.wt_last),
        los: avg(&v.los),
        outlier_pct,
        censored: reports.iter().map(|r| r.censored).sum(),
        warmup_minutes: first.warmup_minutes,
        days: first.days,
        low_sample: n < 2 || first.warmup_minutes == 0,
        per_replication: v,
    })
}
