//! All input randomness and the profile file that parameterises it.

mod arrivals;
mod attributes;
pub mod calibrate;
mod lab;
mod profile;
mod service;

pub use arrivals::{sample_interarrival, ArrivalProfile};
pub use attributes::{fewer_than_four_probability, fit_misc_ratio, AttributeSampler, PatientDraws};
pub use calibrate::{
    calibrate, CalibrationOutcome, CalibrationSettings, CalibrationTarget, TraceRow,
};
pub use lab::{lab_pipeline, next_dispatch, LabTimes};
pub use profile::{
    ArrivalRates, DisciplineConfig, LabProfile, Mixes, PerCode, PerVisit, Profile, ProfileError,
    Resources, ServiceSection, Thresholds, PROFILE_MAJOR,
};
pub use service::{lognormal_from_normal, ServiceModel};
