//! Organisational what-if scenarios.
//!
//! A scenario is the 8-tuple `(t, p, tau_g, tau_w, e, l, a, r)`; an unset
//! field keeps the current ED setting. Scenarios are written either as a
//! tuple literal such as `(-,-,120,-,5,-,-,10)` or by catalog name (`C.4`).

mod catalog;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use catalog::CATALOG;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("malformed scenario tuple: {0}")]
    Parse(String),
    #[error("scenario tuple needs 8 fields, got {0}")]
    Arity(usize),
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
}

/// Scenario parameters. `None` means "unchanged".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    /// Team shifts start and end this many hours later.
    pub t: Option<u32>,
    /// Non-zero gives last visits priority over first visits.
    pub p: Option<u32>,
    /// Green patients waiting longer than this (minutes) go to the head of the queue.
    pub tau_g: Option<u32>,
    /// Same for white patients.
    pub tau_w: Option<u32>,
    /// Percentage of white patients dismissed at triage.
    pub e: Option<u32>,
    /// Percentage of laboratory requests issued at triage.
    pub l: Option<u32>,
    /// Additional teams dedicated to last visits.
    pub a: Option<u32>,
    /// Laboratory lead-time reduction in minutes.
    pub r: Option<u32>,
}

impl Scenario {
    pub const BASELINE: Scenario = Scenario {
        t: None,
        p: None,
        tau_g: None,
        tau_w: None,
        e: None,
        l: None,
        a: None,
        r: None,
    };

    pub fn validate(&self) -> Result<(), ScenarioError> {
        for (name, value) in [("e", self.e), ("l", self.l)] {
            if let Some(x) = value {
                if x > 100 {
                    return Err(ScenarioError::Validation(format!(
                        "{name} = {x} is a percentage and must be at most 100"
                    )));
                }
            }
        }
        if let Some(t) = self.t {
            if t >= 24 {
                return Err(ScenarioError::Validation(format!(
                    "t = {t} hours must be below 24"
                )));
            }
        }
        Ok(())
    }

    pub fn is_baseline(&self) -> bool {
        *self == Self::BASELINE
    }

    pub fn shift_offset_minutes(&self) -> u32 {
        self.t.unwrap_or(0) * 60
    }

    pub fn last_visit_priority(&self) -> bool {
        self.p.unwrap_or(0) > 0
    }

    pub fn dismiss_fraction(&self) -> f64 {
        f64::from(self.e.unwrap_or(0)) / 100.0
    }

    pub fn lab_at_triage_fraction(&self) -> f64 {
        f64::from(self.l.unwrap_or(0)) / 100.0
    }

    pub fn extra_last_visit_teams(&self) -> u32 {
        self.a.unwrap_or(0)
    }

    pub fn lab_reduction(&self) -> u32 {
        self.r.unwrap_or(0)
    }

    fn fields(&self) -> [Option<u32>; 8] {
        [
            self.t, self.p, self.tau_g, self.tau_w, self.e, self.l, self.a, self.r,
        ]
    }

    fn from_fields(f: [Option<u32>; 8]) -> Self {
        let [t, p, tau_g, tau_w, e, l, a, r] = f;
        Self {
            t,
            p,
            tau_g,
            tau_w,
            e,
            l,
            a,
            r,
        }
    }

    /// Parses a tuple literal. Whitespace is ignored and `-` or `--` marks an
    /// unset field; the surrounding parentheses are optional.
    pub fn parse_tuple(text: &str) -> Result<Self, ScenarioError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(&compact);
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 8 {
            return Err(ScenarioError::Arity(parts.len()));
        }
        let mut fields = [None; 8];
        for (slot, part) in fields.iter_mut().zip(&parts) {
            *slot = match *part {
                "-" | "--" => None,
                num => Some(
                    num.parse::<u32>()
                        .map_err(|_| ScenarioError::Parse(format!("field `{num}` in `{text}`")))?,
                ),
            };
        }
        let s = Self::from_fields(fields);
        s.validate()?;
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<(Option<String>, Self), ScenarioError> {
        let doc: ScenarioDoc =
            serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        let s = Self::from_fields([
            doc.t, doc.p, doc.tau_g, doc.tau_w, doc.e, doc.l, doc.a, doc.r,
        ]);
        s.validate()?;
        Ok((doc.name, s))
    }

    pub fn to_json(&self, name: Option<&str>) -> String {
        let [t, p, tau_g, tau_w, e, l, a, r] = self.fields();
        serde_json::to_string(&ScenarioDoc {
            name: name.map(str::to_owned),
            t,
            p,
            tau_g,
            tau_w,
            e,
            l,
            a,
            r,
        })
        .expect("scenario serialises")
    }
}

/// On-disk scenario form: every field present, `null` when unset.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    #[serde(default)]
    name: Option<String>,
    t: Option<u32>,
    p: Option<u32>,
    tau_g: Option<u32>,
    tau_w: Option<u32>,
    e: Option<u32>,
    l: Option<u32>,
    a: Option<u32>,
    r: Option<u32>,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .fields()
            .iter()
            .map(|x| x.map_or_else(|| "-".to_owned(), |v| v.to_string()))
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Scenario {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Resolves a scenario spec: `baseline`, a catalog name, or a tuple literal.
pub fn parse(spec: &str) -> Result<Scenario, ScenarioError> {
    let trimmed = spec.trim();
    if trimmed.starts_with('(') || trimmed.contains(',') {
        return Scenario::parse_tuple(trimmed);
    }
    if trimmed.eq_ignore_ascii_case("baseline") {
        return Ok(Scenario::BASELINE);
    }
    lookup(trimmed).ok_or_else(|| ScenarioError::UnknownScenario(trimmed.to_owned()))
}

pub fn lookup(name: &str) -> Option<Scenario> {
    CATALOG.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// All catalog entries in publication order.
pub fn catalog() -> &'static [(&'static str, Scenario)] {
    &CATALOG
}
