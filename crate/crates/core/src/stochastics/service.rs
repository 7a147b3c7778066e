use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::kernel::RngStream;

/// Distribution of a service duration, in minutes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ServiceModel {
    /// Parameterised by mean and coefficient of variation.
    Lognormal {
        mean: f64,
        cv: f64,
    },
    Triangular {
        min: f64,
        mode: f64,
        max: f64,
    },
    /// Resamples one of the observed values uniformly.
    Empirical {
        values: Vec<f64>,
    },
}

impl ServiceModel {
    pub fn lognormal(mean: f64, cv: f64) -> Self {
        Self::Lognormal { mean, cv }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Lognormal { mean, .. } => *mean,
            Self::Triangular { min, mode, max } => (min + mode + max) / 3.0,
            Self::Empirical { values } => values.iter().sum::<f64>() / values.len() as f64,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let finite_nonneg = |x: f64| x.is_finite() && x >= 0.0;
        match self {
            Self::Lognormal { mean, cv } => {
                if !(finite_nonneg(*mean) && finite_nonneg(*cv)) {
                    return Err(format!(
                        "lognormal mean {mean} / cv {cv} must be finite and >= 0"
                    ));
                }
            }
            Self::Triangular { min, mode, max } => {
                if !(finite_nonneg(*min) && min <= mode && mode <= max && max.is_finite()) {
                    return Err(format!(
                        "triangular needs 0 <= min <= mode <= max, got {min}/{mode}/{max}"
                    ));
                }
            }
            Self::Empirical { values } => {
                if values.is_empty() || !values.iter().all(|x| finite_nonneg(*x)) {
                    return Err("empirical needs at least one finite value >= 0".into());
                }
            }
        }
        Ok(())
    }

    /// Same shape with every duration multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            Self::Lognormal { mean, cv } => Self::Lognormal {
                mean: mean * factor,
                cv: *cv,
            },
            Self::Triangular { min, mode, max } => Self::Triangular {
                min: min * factor,
                mode: mode * factor,
                max: max * factor,
            },
            Self::Empirical { values } => Self::Empirical {
                values: values.iter().map(|v| v * factor).collect(),
            },
        }
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        match self {
            Self::Lognormal { mean, cv } => {
                let z: f64 = rng.sample(StandardNormal);
                lognormal_from_normal(*mean, *cv, z)
            }
            Self::Triangular { min, mode, max } => {
                let u = rng.uniform();
                let span = max - min;
                if span <= 0.0 {
                    return *min;
                }
                let split = (mode - min) / span;
                if u < split {
                    min + (u * span * (mode - min)).sqrt()
                } else {
                    max - ((1.0 - u) * span * (max - mode)).sqrt()
                }
            }
            Self::Empirical { values } => {
                let i = ((rng.uniform() * values.len() as f64) as usize).min(values.len() - 1);
                values[i]
            }
        }
    }
}

/// Lognormal variate with the given mean and coefficient of variation,
/// driven by the standard normal `z`.
pub fn lognormal_from_normal(mean: f64, cv: f64, z: f64) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    let s2 = (1.0 + cv * cv).ln();
    (mean.ln() - 0.5 * s2 + s2.sqrt() * z).exp()
}
