use rand::Rng;
use rand_distr::StandardNormal;

use super::{lognormal_from_normal, ArrivalProfile, Mixes, Profile};
use crate::kernel::{Minute, RngStream};
use crate::model::{ArrivalMode, ExamKind, UrgencyCode, VisitType};

/// Largest number of miscellaneous exams a patient can need.
fn misc_cap(m: &Mixes) -> u32 {
    m.max_extra_exams.saturating_sub(2)
}

/// pmf of the geometric law with ratio `q`, truncated to `0..=cap`.
fn truncated_geometric(q: f64, cap: u32) -> Vec<f64> {
    let raw: Vec<f64> = (0..=cap).map(|k| q.powi(k as i32)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// P(lab + x-ray + misc < 4) for misc ratio `q`, with lab and x-ray
/// independent Bernoulli draws.
pub fn fewer_than_four_probability(m: &Mixes, q: f64) -> f64 {
    let pmf = truncated_geometric(q, misc_cap(m));
    let cdf = |k: usize| pmf.iter().take(k + 1).sum::<f64>();
    let (l, x) = (m.needs_lab, m.xray);
    let both_absent = (1.0 - l) * (1.0 - x);
    let one = l * (1.0 - x) + (1.0 - l) * x;
    let both = l * x;
    both_absent * cdf(3) + one * cdf(2) + both * cdf(1)
}

/// Geometric ratio for the miscellaneous-exam count that makes the share of
/// patients with fewer than four extra exams equal `m.fewer_than_four_exams`.
/// `None` if the target is out of reach.
pub fn fit_misc_ratio(m: &Mixes) -> Option<f64> {
    let target = m.fewer_than_four_exams;
    let (mut lo, mut hi) = (0.0_f64, 1.0 - 1e-9);
    let f = |q| fewer_than_four_probability(m, q) - target;
    if f(lo) < -1e-12 || f(hi) > 1e-12 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Everything random about one patient, drawn once at arrival so that
/// scenarios sharing a seed see the same patients.
#[derive(Debug, Clone, PartialEq)]
pub struct PatientDraws {
    pub urgency: UrgencyCode,
    pub visit_type: VisitType,
    pub arrival_mode: ArrivalMode,
    pub needs_lab: bool,
    pub xray: bool,
    pub misc_exams: u32,
    /// Compared with the scenario's lab-at-triage share.
    pub lab_at_triage_u: f64,
    /// Compared with the scenario's white-dismissal share.
    pub dismiss_u: f64,
    pub triage: f64,
    pub first_visit: f64,
    pub last_visit: f64,
    /// One duration per entry of [`Self::extra_exams`].
    pub exam_durations: Vec<f64>,
    /// Multiplier on the laboratory processing time.
    pub lab_multiplier: f64,
}

impl PatientDraws {
    /// Extra examinations in execution order: x-ray first, then the rest.
    pub fn extra_exams(&self) -> Vec<ExamKind> {
        let mut v = Vec::with_capacity(1 + self.misc_exams as usize);
        if self.xray {
            v.push(ExamKind::Xray);
        }
        v.extend(std::iter::repeat_n(
            ExamKind::Misc,
            self.misc_exams as usize,
        ));
        v
    }

    /// Extra examinations counting the laboratory.
    pub fn exam_count(&self) -> u32 {
        u32::from(self.needs_lab) + u32::from(self.xray) + self.misc_exams
    }
}

/// Draws patient attributes from a profile.
#[derive(Debug, Clone)]
pub struct AttributeSampler {
    profile: Profile,
    arrivals: ArrivalProfile,
    misc_cdf: Vec<f64>,
}

impl AttributeSampler {
    pub fn new(profile: &Profile) -> Self {
        let q =
            fit_misc_ratio(&profile.mixes).expect("validated profile has a reachable exam target");
        let mut acc = 0.0;
        let misc_cdf = truncated_geometric(q, misc_cap(&profile.mixes))
            .into_iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Self {
            profile: profile.clone(),
            arrivals: ArrivalProfile::new(&profile.arrival_rates),
            misc_cdf,
        }
    }

    pub fn arrivals(&self) -> &ArrivalProfile {
        &self.arrivals
    }

    /// Draws a patient arriving at `arrival`. Consumes a fixed sequence of
    /// variates from `rng`.
    pub fn draw(&self, arrival: Minute, rng: &mut RngStream) -> PatientDraws {
        let mixes = &self.profile.mixes;
        let hour = (arrival.rem_euclid(1440) / 60) as usize;

        let urgency = self.arrivals.code_for(hour, rng.uniform());
        let u_visit = rng.uniform();
        let vt = &mixes.visit_type;
        let visit_type = if u_visit < vt.general {
            VisitType::General
        } else if u_visit < vt.general + vt.orthopaedic {
            VisitType::Orthopaedic
        } else {
            VisitType::Dermatological
        };
        let arrival_mode = if rng.uniform() < mixes.non_walking.get(urgency) {
            ArrivalMode::NonWalking
        } else {
            ArrivalMode::Walking
        };
        let needs_lab = rng.uniform() < mixes.needs_lab;
        let xray = rng.uniform() < mixes.xray;
        let u_misc = rng.uniform();
        let misc_exams = self
            .misc_cdf
            .iter()
            .position(|&c| u_misc < c)
            .unwrap_or(self.misc_cdf.len() - 1) as u32;
        let lab_at_triage_u = rng.uniform();
        let dismiss_u = rng.uniform();

        let svc = &self.profile.service;
        let triage = svc.triage.sample(rng);
        let first_visit = svc.first_visit.get(visit_type).sample(rng);
        let last_visit = svc.last_visit.get(visit_type).sample(rng);
        let mut exam_durations = Vec::with_capacity(1 + misc_exams as usize);
        if xray {
            exam_durations.push(svc.xray.sample(rng));
        }
        for _ in 0..misc_exams {
            exam_durations.push(svc.misc_exam.sample(rng));
        }
        let z: f64 = rng.sample(StandardNormal);
        let lab_multiplier = lognormal_from_normal(1.0, self.profile.lab_profile.variability_cv, z);

        PatientDraws {
            urgency,
            visit_type,
            arrival_mode,
            needs_lab,
            xray,
            misc_exams,
            lab_at_triage_u,
            dismiss_u,
            triage,
            first_visit,
            last_visit,
            exam_durations,
            lab_multiplier,
        }
    }
}
