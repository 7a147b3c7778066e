use rand_distr::{Distribution, Exp};

use super::ArrivalRates;
use crate::kernel::RngStream;
use crate::model::UrgencyCode;

/// Piecewise-constant hourly arrival intensities, per urgency code.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalProfile {
    rates: [[f64; 24]; 4],
    totals: [f64; 24],
    peak: f64,
}

impl ArrivalProfile {
    pub fn new(rates: &ArrivalRates) -> Self {
        let mut table = [[0.0; 24]; 4];
        for code in UrgencyCode::ALL {
            for (h, r) in rates.by_code(code).iter().take(24).enumerate() {
                table[code.rank() as usize][h] = r * rates.scale;
            }
        }
        Self::from_table(table)
    }

    /// Every arrival is green, at `per_hour` per hour around the clock.
    pub fn flat(per_hour: f64) -> Self {
        let mut table = [[0.0; 24]; 4];
        table[UrgencyCode::Green.rank() as usize] = [per_hour; 24];
        Self::from_table(table)
    }

    pub fn from_table(rates: [[f64; 24]; 4]) -> Self {
        let mut totals = [0.0; 24];
        for (h, t) in totals.iter_mut().enumerate() {
            *t = rates.iter().map(|row| row[h]).sum();
        }
        let peak = totals.iter().copied().fold(0.0, f64::max);
        Self {
            rates,
            totals,
            peak,
        }
    }

    /// Expected arrivals per hour during hour-of-day `hour`.
    pub fn rate(&self, hour: usize) -> f64 {
        self.totals[hour % 24]
    }

    pub fn daily_mean(&self) -> f64 {
        self.totals.iter().sum()
    }

    /// Urgency code of an arrival during `hour`, chosen by inverse CDF on `u`.
    pub fn code_for(&self, hour: usize, u: f64) -> UrgencyCode {
        let h = hour % 24;
        let total = self.totals[h];
        let mut acc = 0.0;
        for code in UrgencyCode::ALL {
            acc += self.rates[code.rank() as usize][h];
            if u * total < acc {
                return code;
            }
        }
        // Only reachable through rounding when u is within an ulp of 1.
        UrgencyCode::ALL
            .into_iter()
            .rev()
            .find(|c| self.rates[c.rank() as usize][h] > 0.0)
            .unwrap_or(UrgencyCode::Green)
    }
}

fn hour_of(t: f64) -> usize {
    ((t / 60.0).floor() as i64).rem_euclid(24) as usize
}

/// Minutes from `now` to the next arrival of the non-homogeneous Poisson
/// process, by thinning a homogeneous process at the peak rate. `None` if
/// the profile has no arrivals at all.
pub fn sample_interarrival(profile: &ArrivalProfile, now: f64, rng: &mut RngStream) -> Option<f64> {
    if profile.peak <= 0.0 {
        return None;
    }
    let candidate_gap = Exp::new(profile.peak / 60.0).expect("positive peak rate");
    let mut t = now;
    loop {
        t += candidate_gap.sample(rng);
        if rng.uniform() * profile.peak < profile.totals[hour_of(t)] {
            return Some(t - now);
        }
    }
}
