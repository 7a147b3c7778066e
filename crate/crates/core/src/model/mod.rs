//! The emergency-department process network.
//!
//! Patients arrive, are triaged, wait for a first visit in a room matching
//! their urgency and visit type, go through the laboratory and extra exams
//! (lab first), then return to the team that saw them for a last visit
//! before discharge. Every transition is written to an [`EventLog`].

mod log;
mod patient;
mod rooms;
mod sim;

pub use log::{EventKind, EventLog, LogRecord, CSV_HEADER};
pub use patient::{ArrivalMode, ExamKind, Patient, Timestamps, UrgencyCode, VisitType};
pub use rooms::{first_visit_queue, serves_first_visit, FirstQueue, PoolKind, RoomMap, ServerId};
pub use sim::{
    admit, first_visit_discipline, simulate, ReplicationOutput, SimConfig, TriageOutcome,
};
