use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ServiceModel;
use crate::kernel::{ShiftCalendar, ShiftEntry};
use crate::model::{UrgencyCode, VisitType};

/// Supported major version of the profile file format.
pub const PROFILE_MAJOR: &str = "1";

const BUILTIN: &str = include_str!("../../profiles/default.json");

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("cannot read profile {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("profile is not valid JSON for the schema: {0}")]
    Syntax(String),
    #[error("profile failed validation:\n  - {}", .0.join("\n  - "))]
    Invalid(Vec<String>),
}

/// Per-code values.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerCode<T> {
    pub white: T,
    pub green: T,
    pub yellow: T,
    pub red: T,
}

impl<T: Copy> PerCode<T> {
    pub fn get(&self, code: UrgencyCode) -> T {
        match code {
            UrgencyCode::White => self.white,
            UrgencyCode::Green => self.green,
            UrgencyCode::Yellow => self.yellow,
            UrgencyCode::Red => self.red,
        }
    }
}

/// Per-visit-type values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerVisit<T> {
    pub general: T,
    pub orthopaedic: T,
    pub dermatological: T,
}

impl<T> PerVisit<T> {
    pub fn get(&self, v: VisitType) -> &T {
        match v {
            VisitType::General => &self.general,
            VisitType::Orthopaedic => &self.orthopaedic,
            VisitType::Dermatological => &self.dermatological,
        }
    }
}

/// Expected arrivals per hour of day, by urgency code, before `scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrivalRates {
    pub scale: f64,
    pub white: Vec<f64>,
    pub green: Vec<f64>,
    pub yellow: Vec<f64>,
    pub red: Vec<f64>,
}

impl ArrivalRates {
    pub fn by_code(&self, code: UrgencyCode) -> &[f64] {
        match code {
            UrgencyCode::White => &self.white,
            UrgencyCode::Green => &self.green,
            UrgencyCode::Yellow => &self.yellow,
            UrgencyCode::Red => &self.red,
        }
    }

    /// Scaled expected arrivals per day.
    pub fn daily_total(&self) -> f64 {
        UrgencyCode::ALL
            .iter()
            .map(|&c| self.by_code(c).iter().sum::<f64>())
            .sum::<f64>()
            * self.scale
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mixes {
    pub visit_type: PerVisit<f64>,
    pub needs_lab: f64,
    pub xray: f64,
    /// Share of patients with fewer than four extra examinations (lab and
    /// x-ray included).
    pub fewer_than_four_exams: f64,
    pub max_extra_exams: u32,
    pub non_walking: PerCode<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceSection {
    pub triage: ServiceModel,
    pub first_visit: PerVisit<ServiceModel>,
    pub last_visit: PerVisit<ServiceModel>,
    pub xray: ServiceModel,
    pub misc_exam: ServiceModel,
}

/// Laboratory turnaround by hour of dispatch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabProfile {
    /// Courier rounds leave on multiples of this many minutes.
    pub dispatch_interval: u32,
    /// Minutes from dispatch to the laboratory.
    pub transport: f64,
    /// Lower bound for the transport and waiting part after a lead-time cut.
    pub reduction_floor: u32,
    /// Coefficient of variation of the per-sample processing multiplier.
    pub variability_cv: f64,
    /// Queueing at the laboratory, minutes, by hour of dispatch.
    pub waiting: Vec<f64>,
    /// Analysis time, minutes, by hour of dispatch.
    pub effective: Vec<f64>,
    /// Reporting and other overheads, minutes, by hour of dispatch.
    pub miscellaneous: Vec<f64>,
    /// Calibration multiplier on `effective` and `miscellaneous`.
    #[serde(default = "one")]
    pub scale: f64,
}

fn one() -> f64 {
    1.0
}

/// First-visit wait (minutes) beyond which a patient counts as an outlier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    #[serde(default)]
    pub white: Option<u32>,
    #[serde(default)]
    pub green: Option<u32>,
    #[serde(default)]
    pub yellow: Option<u32>,
    #[serde(default)]
    pub red: Option<u32>,
}

impl Thresholds {
    pub fn get(&self, code: UrgencyCode) -> Option<u32> {
        match code {
            UrgencyCode::White => self.white,
            UrgencyCode::Green => self.green,
            UrgencyCode::Yellow => self.yellow,
            UrgencyCode::Red => self.red,
        }
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            white: Some(240),
            green: Some(120),
            yellow: None,
            red: None,
        }
    }
}

/// Staffing of every server pool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resources {
    /// General-visit teams, one entry per team, tagged `low` or `high`.
    pub teams: Vec<ShiftEntry>,
    pub orthopaedic: Vec<ShiftEntry>,
    pub dermatological: Vec<ShiftEntry>,
    pub xray: Vec<ShiftEntry>,
    /// Shift of each extra last-visit team added by a scenario.
    pub last_visit_team: Vec<ShiftEntry>,
    /// Night teams also cover the low-urgency posts when those are closed.
    pub night_pooling: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisciplineConfig {
    /// A team picks a waiting last visit over the head of its first-visit
    /// queue only if the last visit entered its queue more than this many
    /// minutes earlier. Negative values favour last visits.
    #[serde(default)]
    pub first_visit_margin: f64,
    /// Minutes of queue time a green patient is credited over a white one.
    /// Absent means green is always served before white.
    #[serde(default)]
    pub green_head_start: Option<f64>,
}

/// Everything stochastic or tunable about the department.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profile {
    pub version: String,
    #[serde(default)]
    pub name: String,
    pub arrival_rates: ArrivalRates,
    pub mixes: Mixes,
    pub service: ServiceSection,
    pub lab_profile: LabProfile,
    #[serde(default)]
    pub thresholds: Thresholds,
    pub resources: Resources,
    #[serde(default)]
    pub discipline: DisciplineConfig,
}

impl Profile {
    /// The calibrated profile shipped with the crate.
    pub fn builtin() -> Profile {
        Self::from_json(BUILTIN).expect("built-in profile is valid")
    }

    pub fn load(path: &Path) -> Result<Profile, ProfileError> {
        let text = std::fs::read_to_string(path).map_err(|source| ProfileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Profile, ProfileError> {
        let p: Profile =
            serde_json::from_str(text).map_err(|e| ProfileError::Syntax(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("profile serialises");
        s.push('\n');
        s
    }

    /// Semantic checks that the serde schema cannot express. Collects every
    /// problem rather than stopping at the first.
    pub fn validate(&self) -> Result<(), ProfileError> {
        let mut errs = Vec::new();
        let major = self.version.split('.').next().unwrap_or("");
        if major != PROFILE_MAJOR {
            errs.push(format!(
                "version `{}` unsupported, expected {PROFILE_MAJOR}.x",
                self.version
            ));
        }

        let ar = &self.arrival_rates;
        if !(ar.scale.is_finite() && ar.scale >= 0.0) {
            errs.push(format!("arrival_rates.scale = {} must be >= 0", ar.scale));
        }
        for code in UrgencyCode::ALL {
            let v = ar.by_code(code);
            if v.len() != 24 {
                errs.push(format!(
                    "arrival_rates.{code}: expected 24 hourly values, got {}",
                    v.len()
                ));
            }
            if v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                errs.push(format!(
                    "arrival_rates.{code}: rates must be finite and >= 0"
                ));
            }
        }

        let m = &self.mixes;
        let vt = &m.visit_type;
        let parts = [vt.general, vt.orthopaedic, vt.dermatological];
        if parts.iter().any(|x| !(0.0..=1.0).contains(x))
            || (parts.iter().sum::<f64>() - 1.0).abs() > 1e-6
        {
            errs.push("mixes.visit_type must be probabilities summing to 1".into());
        }
        for (name, p) in [
            ("needs_lab", m.needs_lab),
            ("xray", m.xray),
            ("fewer_than_four_exams", m.fewer_than_four_exams),
            ("non_walking.white", m.non_walking.white),
            ("non_walking.green", m.non_walking.green),
            ("non_walking.yellow", m.non_walking.yellow),
            ("non_walking.red", m.non_walking.red),
        ] {
            if !(0.0..=1.0).contains(&p) {
                errs.push(format!("mixes.{name} = {p} is not a probability"));
            }
        }
        if m.max_extra_exams < 2 {
            errs.push("mixes.max_extra_exams must be at least 2".into());
        } else if super::attributes::fit_misc_ratio(m).is_none() {
            errs.push(
                "mixes.fewer_than_four_exams is unreachable with the lab and x-ray rates".into(),
            );
        }

        let s = &self.service;
        let models = [
            ("triage", &s.triage),
            ("first_visit.general", &s.first_visit.general),
            ("first_visit.orthopaedic", &s.first_visit.orthopaedic),
            ("first_visit.dermatological", &s.first_visit.dermatological),
            ("last_visit.general", &s.last_visit.general),
            ("last_visit.orthopaedic", &s.last_visit.orthopaedic),
            ("last_visit.dermatological", &s.last_visit.dermatological),
            ("xray", &s.xray),
            ("misc_exam", &s.misc_exam),
        ];
        for (name, model) in models {
            if let Err(e) = model.validate() {
                errs.push(format!("service.{name}: {e}"));
            }
        }

        let lab = &self.lab_profile;
        if lab.dispatch_interval == 0 {
            errs.push("lab_profile.dispatch_interval must be positive".into());
        }
        for (name, x) in [
            ("transport", lab.transport),
            ("variability_cv", lab.variability_cv),
            ("scale", lab.scale),
        ] {
            if !(x.is_finite() && x >= 0.0) {
                errs.push(format!("lab_profile.{name} = {x} must be >= 0"));
            }
        }
        for (name, v) in [
            ("waiting", &lab.waiting),
            ("effective", &lab.effective),
            ("miscellaneous", &lab.miscellaneous),
        ] {
            if v.len() != 24 {
                errs.push(format!(
                    "lab_profile.{name}: expected 24 hourly values, got {}",
                    v.len()
                ));
            }
            if v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                errs.push(format!("lab_profile.{name}: components must be >= 0"));
            }
        }

        let r = &self.resources;
        for (name, entries) in [
            ("teams", &r.teams),
            ("orthopaedic", &r.orthopaedic),
            ("dermatological", &r.dermatological),
            ("xray", &r.xray),
            ("last_visit_team", &r.last_visit_team),
        ] {
            if let Err(e) = ShiftCalendar::new(entries.clone()) {
                errs.push(format!("resources.{name}: {e}"));
            }
        }
        if let Some(bad) = r.teams.iter().find(|e| e.area != "low" && e.area != "high") {
            errs.push(format!(
                "resources.teams: area `{}` must be `low` or `high`",
                bad.area
            ));
        }

        let margin = self.discipline.first_visit_margin;
        if !margin.is_finite() {
            errs.push(format!(
                "discipline.first_visit_margin = {margin} must be finite"
            ));
        }

        if let Some(h) = self.discipline.green_head_start {
            if !(h.is_finite() && h >= 0.0) {
                errs.push(format!("discipline.green_head_start = {h} must be >= 0"));
            }
        }

        if errs.is_empty() {
            Ok(())
        } else {
            Err(ProfileError::Invalid(errs))
        }
    }

    /// Copy with every visit and exam service mean multiplied by `factor`.
    pub fn with_service_scale(&self, factor: f64) -> Profile {
        let mut p = self.clone();
        let s = &mut p.service;
        for m in [
            &mut s.first_visit.general,
            &mut s.first_visit.orthopaedic,
            &mut s.first_visit.dermatological,
            &mut s.last_visit.general,
            &mut s.last_visit.orthopaedic,
            &mut s.last_visit.dermatological,
            &mut s.xray,
            &mut s.misc_exam,
            &mut s.triage,
        ] {
            *m = m.scaled(factor);
        }
        p
    }
}
