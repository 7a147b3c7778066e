use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use crate::kernel::Minute;

/// Patient state transitions recorded in the event log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    Arrive,
    TriageDone,
    DismissedAtTriage,
    EnqueueFirst,
    Promoted,
    StartFirst,
    EndFirst,
    LabDraw,
    LabDispatch,
    LabResult,
    StartExam,
    EndExam,
    EnqueueLast,
    StartLast,
    Discharge,
}

impl EventKind {
    pub const ALL: [EventKind; 15] = [
        Self::Arrive,
        Self::TriageDone,
        Self::DismissedAtTriage,
        Self::EnqueueFirst,
        Self::Promoted,
        Self::StartFirst,
        Self::EndFirst,
        Self::LabDraw,
        Self::LabDispatch,
        Self::LabResult,
        Self::StartExam,
        Self::EndExam,
        Self::EnqueueLast,
        Self::StartLast,
        Self::Discharge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Arrive => "ARRIVE",
            Self::TriageDone => "TRIAGE_DONE",
            Self::DismissedAtTriage => "DISMISSED_AT_TRIAGE",
            Self::EnqueueFirst => "ENQUEUE_FIRST",
            Self::Promoted => "PROMOTED",
            Self::StartFirst => "START_FIRST",
            Self::EndFirst => "END_FIRST",
            Self::LabDraw => "LAB_DRAW",
            Self::LabDispatch => "LAB_DISPATCH",
            Self::LabResult => "LAB_RESULT",
            Self::StartExam => "START_EXAM",
            Self::EndExam => "END_EXAM",
            Self::EnqueueLast => "ENQUEUE_LAST",
            Self::StartLast => "START_LAST",
            Self::Discharge => "DISCHARGE",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EventKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown event `{s}`"))
    }
}

/// One row of the log: `rep_id,time_min,patient_id,event,detail`.
///
/// `detail` is a `;`-separated list of `key=value` pairs and never contains
/// commas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogRecord {
    pub rep: u32,
    pub time: Minute,
    pub patient: u64,
    pub event: EventKind,
    pub detail: String,
}

impl LogRecord {
    /// Value of `key` in the detail field.
    pub fn field(&self, key: &str) -> Option<&str> {
        self.detail.split(';').find_map(|kv| {
            let (k, v) = kv.split_once('=')?;
            (k == key).then_some(v)
        })
    }
}

pub const CSV_HEADER: &str = "rep_id,time_min,patient_id,event,detail";

/// Ordered record of every transition in one replication.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventLog {
    pub records: Vec<LogRecord>,
}

impl EventLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, rep: u32, time: Minute, patient: u64, event: EventKind, detail: String) {
        debug_assert!(!detail.contains(','), "detail must not contain commas");
        self.records.push(LogRecord {
            rep,
            time,
            patient,
            event,
            detail,
        });
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LogRecord> {
        self.records.iter()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.rep, r.time, r.patient, r.event, r.detail
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("log is ASCII")
    }

    pub fn read_csv<R: BufRead>(input: R) -> io::Result<Self> {
        let bad = |line: usize, what: String| {
            io::Error::new(io::ErrorKind::InvalidData, format!("line {line}: {what}"))
        };
        let mut log = EventLog::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if i == 0 {
                if line != CSV_HEADER {
                    return Err(bad(1, format!("unexpected header `{line}`")));
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.splitn(5, ',').collect();
            if cols.len() != 5 {
                return Err(bad(i + 1, "expected 5 columns".into()));
            }
            log.records.push(LogRecord {
                rep: cols[0].parse().map_err(|e| bad(i + 1, format!("{e}")))?,
                time: cols[1].parse().map_err(|e| bad(i + 1, format!("{e}")))?,
                patient: cols[2].parse().map_err(|e| bad(i + 1, format!("{e}")))?,
                event: cols[3].parse().map_err(|e| bad(i + 1, e))?,
                detail: cols[4].to_owned(),
            });
        }
        Ok(log)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut log = EventLog::new();
        log.push(0, 0, 1, EventKind::Arrive, "mode=walking".into());
        log.push(0, 5, 1, EventKind::StartFirst, "server=high#0".into());
        log.push(0, 9, 1, EventKind::Discharge, String::new());
        let text = log.to_csv_string();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(EventLog::read_csv(text.as_bytes()).unwrap(), log);
    }

    #[test]
    fn detail_fields() {
        let r = LogRecord {
            rep: 0,
            time: 0,
            patient: 0,
            event: EventKind::StartLast,
            detail: "team=low#0;server=high#0".into(),
        };
        assert_eq!(r.field("team"), Some("low#0"));
        assert_eq!(r.field("server"), Some("high#0"));
        assert_eq!(r.field("nope"), None);
    }

    #[test]
    fn rejects_bad_header() {
        assert!(EventLog::read_csv("a,b\n".as_bytes()).is_err());
    }
}
