use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{KpiError, KpiReport};

/// Significance level of the per-KPI test.
pub const ALPHA: f64 = 0.05;

pub const COMPARISON_HEADER: &str =
    "scenario,in,wt_first,wt_last,los,outlier_green,outlier_white,flags";

/// The KPIs compared between scenarios, in report column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kpi {
    In,
    WtFirst,
    WtLast,
    Los,
    OutlierGreen,
    OutlierWhite,
}

impl Kpi {
    pub const ALL: [Kpi; 6] = [
        Kpi::In,
        Kpi::WtFirst,
        Kpi::WtLast,
        Kpi::Los,
        Kpi::OutlierGreen,
        Kpi::OutlierWhite,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kpi::In => "in",
            Kpi::WtFirst => "wt_first",
            Kpi::WtLast => "wt_last",
            Kpi::Los => "los",
            Kpi::OutlierGreen => "outlier_green",
            Kpi::OutlierWhite => "outlier_white",
        }
    }

    pub fn vector(self, r: &KpiReport) -> &[f64] {
        let v = &r.per_replication;
        match self {
            Kpi::In => &v.in_per_day,
            Kpi::WtFirst => &v.wt_first,
            Kpi::WtLast => &v.wt_last,
            Kpi::Los => &v.los,
            Kpi::OutlierGreen => &v.outlier_green,
            Kpi::OutlierWhite => &v.outlier_white,
        }
    }

    pub fn mean(self, r: &KpiReport) -> f64 {
        match self {
            Kpi::In => r.in_per_day,
            Kpi::WtFirst => r.wt_first,
            Kpi::WtLast => r.wt_last,
            Kpi::Los => r.los,
            Kpi::OutlierGreen => r.outlier(crate::model::UrgencyCode::Green),
            Kpi::OutlierWhite => r.outlier(crate::model::UrgencyCode::White),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KpiDelta {
    pub kpi: Kpi,
    pub baseline: f64,
    pub candidate: f64,
    pub delta: f64,
    pub p_value: f64,
    pub significant: bool,
}

/// A candidate scenario's KPIs against the baseline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub baseline: KpiReport,
    pub candidate: KpiReport,
    pub deltas: Vec<KpiDelta>,
}

impl Comparison {
    pub fn delta(&self, kpi: Kpi) -> &KpiDelta {
        self.deltas
            .iter()
            .find(|d| d.kpi == kpi)
            .expect("every KPI compared")
    }

    /// Names of the significantly changed KPIs, `;`-separated.
    pub fn flags(&self) -> String {
        self.deltas
            .iter()
            .filter(|d| d.significant)
            .map(|d| d.kpi.as_str())
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Comparison-table row for the candidate.
    pub fn csv_row(&self, scenario: &str) -> String {
        csv_row(scenario, &self.candidate, &self.flags())
    }
}

/// One row of the comparison table.
pub fn csv_row(scenario: &str, r: &KpiReport, flags: &str) -> String {
    let vals: Vec<String> = Kpi::ALL
        .iter()
        .map(|k| format!("{:.2}", k.mean(r)))
        .collect();
    format!("{scenario},{},{flags}", vals.join(","))
}

fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, var)
}

/// Two-sided p-value of Welch's unequal-variance t-test. Samples need at
/// least two values each.
pub fn welch_p_value(a: &[f64], b: &[f64]) -> f64 {
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let se2 = va / na + vb / nb;
    if se2 <= f64::EPSILON * (ma.abs() + mb.abs()).max(1.0) {
        return if (ma - mb).abs() <= 1e-12 * (ma.abs() + mb.abs()).max(1.0) {
            1.0
        } else {
            0.0
        };
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2.powi(2) / ((va / na).powi(2) / (na - 1.0) + (vb / nb).powi(2) / (nb - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
}

/// Per-KPI Welch test of `candidate` against `baseline` at [`ALPHA`].
pub fn compare(baseline: &KpiReport, candidate: &KpiReport) -> Result<Comparison, KpiError> {
    let (nb, nc) = (
        baseline.per_replication.los.len(),
        candidate.per_replication.los.len(),
    );
    if nb < 2 || nc < 2 {
        return Err(KpiError::Usage(format!(
            "comparison needs at least 2 replications per side, got {nb} and {nc}"
        )));
    }
    if nb != nc {
        return Err(KpiError::Usage(format!(
            "replication counts differ: {nb} vs {nc}"
        )));
    }
    let deltas = Kpi::ALL
        .iter()
        .map(|&kpi| {
            let p = welch_p_value(kpi.vector(baseline), kpi.vector(candidate));
            let (b, c) = (kpi.mean(baseline), kpi.mean(candidate));
            KpiDelta {
                kpi,
                baseline: b,
                candidate: c,
                delta: c - b,
                p_value: p,
                significant: p < ALPHA,
            }
        })
        .collect();
    Ok(Comparison {
        baseline: baseline.clone(),
        candidate: candidate.clone(),
        deltas,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{KpiReport, ReplicationVectors};
    use super::*;
    use std::collections::BTreeMap;

    fn report(los: Vec<f64>) -> KpiReport {
        let n = los.len();
        let v = ReplicationVectors {
            in_per_day: vec![238.0; n],
            wt_first: vec![70.0; n],
            wt_last: vec![55.0; n],
            los: los.clone(),
            outlier_green: vec![4.0; n],
            outlier_white: vec![25.0; n],
        };
        let mut outlier_pct = BTreeMap::new();
        outlier_pct.insert("green".into(), 4.0);
        outlier_pct.insert("white".into(), 25.0);
        KpiReport {
            replications: n,
            in_per_day: 238.0,
            wt_first: 70.0,
            wt_last: 55.0,
            los: los.iter().sum::<f64>() / n as f64,
            outlier_pct,
            censored: 0,
            warmup_minutes: 1440,
            days: 30,
            low_sample: false,
            per_replication: v,
        }
    }

    #[test]
    fn identical_runs_have_no_flags() {
        let b = report(vec![200.0, 210.0, 205.0]);
        let c = compare(&b, &b).unwrap();
        assert_eq!(c.flags(), "");
    }

    #[test]
    fn clear_los_shift_is_flagged() {
        let b = report(vec![208.0, 210.0, 207.0, 209.0, 211.0]);
        let c = report(vec![195.0, 196.0, 194.0, 197.0, 195.5]);
        let cmp = compare(&b, &c).unwrap();
        assert!(cmp.delta(Kpi::Los).significant);
        assert_eq!(cmp.flags(), "los");
    }

    #[test]
    fn order_does_not_matter() {
        let b = report(vec![200.0, 210.0, 205.0]);
        let c1 = report(vec![190.0, 199.0, 201.0]);
        let c2 = report(vec![201.0, 190.0, 199.0]);
        let p1 = compare(&b, &c1).unwrap().delta(Kpi::Los).p_value;
        let p2 = compare(&b, &c2).unwrap().delta(Kpi::Los).p_value;
        assert!((p1 - p2).abs() < 1e-12);
    }

    #[test]
    fn too_few_replications() {
        let b = report(vec![200.0]);
        assert!(matches!(compare(&b, &b), Err(KpiError::Usage(_))));
    }

    #[test]
    fn welch_matches_reference_value() {
        // scipy.stats.ttest_ind(a, b, equal_var=False) gives t = -2, df = 8,
        // p = 0.080516.
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [3.0, 4.0, 5.0, 6.0, 7.0];
        let p = welch_p_value(&a, &b);
        assert!((p - 0.080516).abs() < 1e-5, "p = {p}");
    }

    #[test]
    fn csv_row_shape() {
        let b = report(vec![200.0, 210.0]);
        let row = csv_row("A.1", &b, "los");
        assert_eq!(row, "A.1,238.00,70.00,55.00,205.00,4.00,25.00,los");
        assert_eq!(row.split(',').count(), COMPARISON_HEADER.split(',').count());
    }
}
