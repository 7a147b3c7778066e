use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::kernel::Minute;

/// Triage colour, least to most urgent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UrgencyCode {
    White,
    Green,
    Yellow,
    Red,
}

impl UrgencyCode {
    pub const ALL: [UrgencyCode; 4] = [Self::White, Self::Green, Self::Yellow, Self::Red];

    /// Static priority rank used by the waiting-room queues.
    pub fn rank(self) -> u8 {
        self as u8
    }

    pub fn from_rank(rank: u8) -> Option<Self> {
        Self::ALL.get(rank as usize).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::White => "WHITE",
            Self::Green => "GREEN",
            Self::Yellow => "YELLOW",
            Self::Red => "RED",
        }
    }

    /// White and green patients are low-urgency.
    pub fn is_low_urgency(self) -> bool {
        self <= Self::Green
    }
}

impl fmt::Display for UrgencyCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for UrgencyCode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown urgency code `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VisitType {
    General,
    Orthopaedic,
    Dermatological,
}

impl VisitType {
    pub const ALL: [VisitType; 3] = [Self::General, Self::Orthopaedic, Self::Dermatological];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::General => "GENERAL",
            Self::Orthopaedic => "ORTHOPAEDIC",
            Self::Dermatological => "DERMATOLOGICAL",
        }
    }
}

impl fmt::Display for VisitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrivalMode {
    Walking,
    NonWalking,
}

impl ArrivalMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Walking => "walking",
            Self::NonWalking => "non-walking",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExamKind {
    Xray,
    Misc,
}

impl ExamKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Xray => "XRAY",
            Self::Misc => "MISC",
        }
    }
}

/// Stage timestamps. Each is set when the stage is reached.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Timestamps {
    pub arrive: Option<Minute>,
    pub triage_done: Option<Minute>,
    pub enqueue_first: Option<Minute>,
    pub start_first: Option<Minute>,
    pub end_first: Option<Minute>,
    pub lab_result: Option<Minute>,
    pub enqueue_last: Option<Minute>,
    pub start_last: Option<Minute>,
    pub discharge: Option<Minute>,
}

/// A patient moving through the department.
#[derive(Debug, Clone)]
pub struct Patient {
    pub id: u64,
    pub arrival_mode: ArrivalMode,
    pub urgency: UrgencyCode,
    pub visit_type: VisitType,
    pub needs_lab: bool,
    pub lab_at_triage: bool,
    pub extra_exams: Vec<ExamKind>,
    pub times: Timestamps,
    /// Team post that performed the first visit; the last visit returns to it.
    pub first_team: Option<super::ServerId>,
}
