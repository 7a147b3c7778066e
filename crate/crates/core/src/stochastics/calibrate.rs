//! Fits the free profile parameters to published department KPIs.
//!
//! The arrival scale is fixed first by matching the admission rate. A
//! Nelder–Mead search then adjusts the first-visit, last-visit and laboratory
//! time scales, the first/last-visit margin and the green head start over
//! white patients. Outlier thresholds stay as configured; the head start
//! moves the outlier shares.

use serde::{Deserialize, Serialize};

use super::Profile;
use crate::harness::{run_replications, RunSettings};
use crate::kpi::{aggregate, compute_kpis, KpiReport};
use crate::model::UrgencyCode;
use crate::scenario::Scenario;

/// Department KPIs to reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTarget {
    pub in_per_day: f64,
    pub wt_first: f64,
    pub wt_last: f64,
    pub los: f64,
    pub outlier_green: f64,
    pub outlier_white: f64,
}

impl CalibrationTarget {
    /// Observed values of the reference department (simulation row of its
    /// validation table).
    pub const REFERENCE: CalibrationTarget = CalibrationTarget {
        in_per_day: 238.23,
        wt_first: 70.52,
        wt_last: 54.94,
        los: 208.60,
        outlier_green: 3.88,
        outlier_white: 25.47,
    };

    /// Acceptance tolerances, as relative errors, for In, WT_1st, WT_last
    /// and LoS.
    pub const TOLERANCES: [f64; 4] = [0.02, 0.10, 0.10, 0.05];

    /// Relative tolerance on the green and white outlier shares.
    pub const OUTLIER_TOLERANCE: f64 = 0.25;

    const WEIGHTS: [f64; 4] = [4.0, 1.0, 1.0, 4.0];
    const OUTLIER_WEIGHT: f64 = 0.1;

    fn values(&self) -> [f64; 4] {
        [self.in_per_day, self.wt_first, self.wt_last, self.los]
    }

    /// Relative errors of `r` for In, WT_1st, WT_last and LoS.
    pub fn relative_errors(&self, r: &KpiReport) -> [f64; 4] {
        let got = [r.in_per_day, r.wt_first, r.wt_last, r.los];
        let want = self.values();
        std::array::from_fn(|i| (got[i] - want[i]) / want[i])
    }

    /// Relative errors of the green and white outlier shares.
    pub fn outlier_errors(&self, r: &KpiReport) -> [f64; 2] {
        [
            (r.outlier(UrgencyCode::Green) - self.outlier_green) / self.outlier_green,
            (r.outlier(UrgencyCode::White) - self.outlier_white) / self.outlier_white,
        ]
    }

    /// Whether every error is within `fraction` of its tolerance.
    pub fn within(&self, r: &KpiReport, fraction: f64) -> bool {
        self.relative_errors(r)
            .iter()
            .zip(Self::TOLERANCES)
            .all(|(e, tol)| e.abs() <= tol * fraction)
    }

    pub fn objective(&self, r: &KpiReport) -> f64 {
        let main: f64 = self
            .relative_errors(r)
            .iter()
            .zip(Self::WEIGHTS)
            .map(|(e, w)| w * e * e)
            .sum();
        let outliers: f64 = self.outlier_errors(r).iter().map(|e| e * e).sum();
        main + Self::OUTLIER_WEIGHT * outliers
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationSettings {
    pub run: RunSettings,
    /// Maximum number of simulated evaluations.
    pub budget: usize,
    /// Stop once every KPI is within this fraction of its tolerance.
    pub stop_fraction: f64,
}

impl Default for CalibrationSettings {
    fn default() -> Self {
        Self {
            run: RunSettings::default(),
            budget: 200,
            stop_fraction: 0.5,
        }
    }
}

/// One evaluated candidate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub evaluation: usize,
    pub arrival_scale: f64,
    pub first_visit_scale: f64,
    pub last_visit_scale: f64,
    pub lab_scale: f64,
    pub margin: f64,
    pub green_head_start: f64,
    pub in_per_day: f64,
    pub wt_first: f64,
    pub wt_last: f64,
    pub los: f64,
    pub outlier_green: f64,
    pub outlier_white: f64,
    pub objective: f64,
}

impl TraceRow {
    pub const CSV_HEADER: &'static str =
        "evaluation,arrival_scale,first_visit_scale,last_visit_scale,lab_scale,margin,green_head_start,in,wt_first,wt_last,los,outlier_green,outlier_white,objective";

    pub fn csv(&self) -> String {
        format!(
            "{},{:.6},{:.6},{:.6},{:.6},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.8}",
            self.evaluation,
            self.arrival_scale,
            self.first_visit_scale,
            self.last_visit_scale,
            self.lab_scale,
            self.margin,
            self.green_head_start,
            self.in_per_day,
            self.wt_first,
            self.wt_last,
            self.los,
            self.outlier_green,
            self.outlier_white,
            self.objective
        )
    }
}

#[derive(Debug, Clone)]
pub struct CalibrationOutcome {
    /// Best profile found.
    pub profile: Profile,
    /// Baseline KPIs of `profile` under the calibration run settings.
    pub report: Option<KpiReport>,
    pub trace: Vec<TraceRow>,
    pub converged: bool,
}

impl CalibrationOutcome {
    pub fn trace_csv(&self) -> String {
        let mut s = String::from(TraceRow::CSV_HEADER);
        s.push('\n');
        for row in &self.trace {
            s.push_str(&row.csv());
            s.push('\n');
        }
        s
    }
}

/// Search coordinates: log first-visit scale, log last-visit scale, log lab
/// scale, margin in units of ten minutes and log head-start scale.
type Point = [f64; 5];

const MARGIN_UNIT: f64 = 10.0;

/// Head start the search begins from when the profile has none.
const DEFAULT_HEAD_START: f64 = 120.0;

fn apply(base: &Profile, arrival_scale: f64, x: &Point) -> Profile {
    let mut p = base.clone();
    p.arrival_rates.scale = arrival_scale;
    let s = &mut p.service;
    for m in [
        &mut s.first_visit.general,
        &mut s.first_visit.orthopaedic,
        &mut s.first_visit.dermatological,
    ] {
        *m = m.scaled(x[0].exp());
    }
    for m in [
        &mut s.last_visit.general,
        &mut s.last_visit.orthopaedic,
        &mut s.last_visit.dermatological,
    ] {
        *m = m.scaled(x[1].exp());
    }
    p.lab_profile.scale *= x[2].exp();
    p.discipline.first_visit_margin += MARGIN_UNIT * x[3];
    let h = base
        .discipline
        .green_head_start
        .unwrap_or(DEFAULT_HEAD_START);
    p.discipline.green_head_start = Some(h * x[4].exp());
    p
}

struct Evaluator<'a> {
    base: &'a Profile,
    target: &'a CalibrationTarget,
    settings: &'a CalibrationSettings,
    arrival_scale: f64,
    trace: Vec<TraceRow>,
    best: Option<(f64, Point, KpiReport)>,
    /// Best candidate whose main KPIs are within the stop fraction.
    best_ok: Option<(f64, Point, KpiReport)>,
    seen: Vec<(f64, Point, f64)>,
}

impl Evaluator<'_> {
    fn exhausted(&self) -> bool {
        self.trace.len() >= self.settings.budget
    }

    fn done(&self) -> bool {
        self.best_ok.as_ref().is_some_and(|(_, _, r)| {
            self.target
                .outlier_errors(r)
                .iter()
                .all(|e| e.abs() <= CalibrationTarget::OUTLIER_TOLERANCE)
        })
    }

    fn eval(&mut self, x: &Point) -> f64 {
        if let Some(&(_, _, f)) = self
            .seen
            .iter()
            .find(|(a, p, _)| *a == self.arrival_scale && p == x)
        {
            return f;
        }
        let profile = apply(self.base, self.arrival_scale, x);
        let spec = self.settings.run.kpi_spec(&profile);
        let reports: Vec<KpiReport> =
            run_replications(&profile, &Scenario::BASELINE, &self.settings.run)
                .iter()
                .map(|o| compute_kpis(&o.log, &spec))
                .collect();
        let r = aggregate(&reports).expect("at least one replication");
        let f = self.target.objective(&r);
        self.trace.push(TraceRow {
            evaluation: self.trace.len(),
            arrival_scale: self.arrival_scale,
            first_visit_scale: x[0].exp(),
            last_visit_scale: x[1].exp(),
            lab_scale: x[2].exp(),
            margin: profile.discipline.first_visit_margin,
            green_head_start: profile.discipline.green_head_start.unwrap_or(0.0),
            in_per_day: r.in_per_day,
            wt_first: r.wt_first,
            wt_last: r.wt_last,
            los: r.los,
            outlier_green: r.outlier(UrgencyCode::Green),
            outlier_white: r.outlier(UrgencyCode::White),
            objective: f,
        });
        self.seen.push((self.arrival_scale, *x, f));
        if self.target.within(&r, self.settings.stop_fraction)
            && self.best_ok.as_ref().is_none_or(|(bf, _, _)| f < *bf)
        {
            self.best_ok = Some((f, *x, r.clone()));
        }
        if self.best.as_ref().is_none_or(|(bf, _, _)| f < *bf) {
            self.best = Some((f, *x, r));
        }
        f
    }

    fn last_in(&self) -> f64 {
        self.trace.last().map_or(0.0, |t| t.in_per_day)
    }
}

/// Fits `start` to `target`. With a zero budget nothing is simulated and
/// the outcome is not converged.
pub fn calibrate(
    start: &Profile,
    target: &CalibrationTarget,
    settings: &CalibrationSettings,
) -> CalibrationOutcome {
    let mut ev = Evaluator {
        base: start,
        target,
        settings,
        arrival_scale: start.arrival_rates.scale,
        trace: Vec::new(),
        best: None,
        best_ok: None,
        seen: Vec::new(),
    };
    if settings.budget == 0 {
        return CalibrationOutcome {
            profile: start.clone(),
            report: None,
            trace: Vec::new(),
            converged: false,
        };
    }

    let origin = [0.0; 5];
    for _ in 0..3 {
        if ev.exhausted() {
            break;
        }
        ev.eval(&origin);
        let got = ev.last_in();
        if got <= 0.0 || ((got - target.in_per_day) / target.in_per_day).abs() < 0.002 {
            break;
        }
        ev.arrival_scale *= target.in_per_day / got;
        ev.best = None;
        ev.best_ok = None;
    }

    nelder_mead(&mut ev, origin);

    let converged = ev.best_ok.is_some();
    let (_, x, _) = ev
        .best_ok
        .clone()
        .or_else(|| ev.best.clone())
        .expect("budget > 0");
    let profile = apply(start, ev.arrival_scale, &x);
    let report = crate::harness::run_report(&profile, &Scenario::BASELINE, &settings.run);
    CalibrationOutcome {
        profile,
        report: Some(report),
        trace: ev.trace,
        converged,
    }
}

fn nelder_mead(ev: &mut Evaluator, x0: Point) {
    const STEP: Point = [0.15, 0.15, 0.15, 0.5, 0.4];
    let mut simplex: Vec<(f64, Point)> = Vec::with_capacity(STEP.len() + 1);
    for i in 0..=STEP.len() {
        if ev.exhausted() || ev.done() {
            return;
        }
        let mut x = x0;
        if i > 0 {
            x[i - 1] += STEP[i - 1];
        }
        let f = ev.eval(&x);
        simplex.push((f, x));
    }
    let lerp = |a: &Point, b: &Point, t: f64| -> Point {
        std::array::from_fn(|k| a[k] + t * (b[k] - a[k]))
    };
    while !ev.exhausted() && !ev.done() {
        simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = simplex.len() - 1;
        let centroid: Point =
            std::array::from_fn(|k| simplex[..n].iter().map(|(_, x)| x[k]).sum::<f64>() / n as f64);
        let worst = simplex[n];
        let xr = lerp(&centroid, &worst.1, -1.0);
        let fr = ev.eval(&xr);
        if fr < simplex[0].0 {
            if ev.exhausted() || ev.done() {
                simplex[n] = (fr, xr);
                continue;
            }
            let xe = lerp(&centroid, &worst.1, -2.0);
            let fe = ev.eval(&xe);
            simplex[n] = if fe < fr { (fe, xe) } else { (fr, xr) };
        } else if fr < simplex[n - 1].0 {
            simplex[n] = (fr, xr);
        } else {
            if ev.exhausted() || ev.done() {
                continue;
            }
            let (xc, fc) = if fr < worst.0 {
                let xc = lerp(&centroid, &worst.1, -0.5);
                (xc, ev.eval(&xc))
            } else {
                let xc = lerp(&centroid, &worst.1, 0.5);
                (xc, ev.eval(&xc))
            };
            if fc < fr.min(worst.0) {
                simplex[n] = (fc, xc);
            } else {
                let best = simplex[0].1;
                for item in simplex.iter_mut().skip(1) {
                    if ev.exhausted() || ev.done() {
                        return;
                    }
                    let x = lerp(&best, &item.1, 0.5);
                    *item = (ev.eval(&x), x);
                }
            }
        }
    }
}
