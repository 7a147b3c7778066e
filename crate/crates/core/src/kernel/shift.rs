use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Minute;

pub const MINUTES_PER_DAY: u32 = 1440;

#[derive(Debug, Error, PartialEq)]
pub enum ShiftError {
    #[error("shift entry {index}: start {start} must be in [0, 1440)")]
    BadStart { index: usize, start: u32 },
    #[error("shift entry {index}: end {end} must be in [0, 1440]")]
    BadEnd { index: usize, end: u32 },
    #[error("shift entry {index}: start and end are both {start}")]
    Empty { index: usize, start: u32 },
}

/// One staffed interval of the day. `start` is inclusive and `end` exclusive;
/// an interval with `end < start` wraps past midnight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftEntry {
    pub start: u32,
    pub end: u32,
    pub capacity: u32,
    #[serde(default)]
    pub area: String,
}

impl ShiftEntry {
    pub fn new(start: u32, end: u32, capacity: u32, area: &str) -> Self {
        Self {
            start,
            end,
            capacity,
            area: area.to_owned(),
        }
    }

    fn covers(&self, minute: u32) -> bool {
        if self.start < self.end {
            (self.start..self.end).contains(&minute)
        } else {
            minute >= self.start || minute < self.end
        }
    }
}

/// Daily staffing pattern, repeated every day, optionally shifted later by
/// a fixed offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftCalendar {
    entries: Vec<ShiftEntry>,
    offset: u32,
}

impl ShiftCalendar {
    pub fn new(entries: Vec<ShiftEntry>) -> Result<Self, ShiftError> {
        for (index, e) in entries.iter().enumerate() {
            if e.start >= MINUTES_PER_DAY {
                return Err(ShiftError::BadStart {
                    index,
                    start: e.start,
                });
            }
            if e.end > MINUTES_PER_DAY {
                return Err(ShiftError::BadEnd { index, end: e.end });
            }
            if e.start == e.end {
                return Err(ShiftError::Empty {
                    index,
                    start: e.start,
                });
            }
        }
        Ok(Self { entries, offset: 0 })
    }

    /// Same capacity around the clock.
    pub fn constant(capacity: u32) -> Self {
        Self {
            entries: vec![ShiftEntry::new(0, MINUTES_PER_DAY, capacity, "")],
            offset: 0,
        }
    }

    /// Shifts every entry `minutes` later.
    pub fn with_offset(mut self, minutes: u32) -> Self {
        self.offset = minutes % MINUTES_PER_DAY;
        self
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn entries(&self) -> &[ShiftEntry] {
        &self.entries
    }

    /// Sub-calendar holding only the entries tagged `area`.
    pub fn area(&self, area: &str) -> ShiftCalendar {
        ShiftCalendar {
            entries: self
                .entries
                .iter()
                .filter(|e| e.area == area)
                .cloned()
                .collect(),
            offset: self.offset,
        }
    }

    /// Summed capacity of all entries covering `minute_of_day`.
    pub fn capacity_at(&self, minute_of_day: u32) -> u32 {
        debug_assert!(minute_of_day < MINUTES_PER_DAY);
        let local = (minute_of_day + MINUTES_PER_DAY - self.offset) % MINUTES_PER_DAY;
        self.entries
            .iter()
            .filter(|e| e.covers(local))
            .map(|e| e.capacity)
            .sum()
    }

    pub fn capacity_at_time(&self, t: Minute) -> u32 {
        self.capacity_at(t.rem_euclid(MINUTES_PER_DAY as Minute) as u32)
    }

    /// Minutes of the day (after offset) where capacity may change.
    pub fn boundaries(&self) -> Vec<u32> {
        let mut b: Vec<u32> = self
            .entries
            .iter()
            .flat_map(|e| [e.start, e.end % MINUTES_PER_DAY])
            .map(|m| (m + self.offset) % MINUTES_PER_DAY)
            .collect();
        b.sort_unstable();
        b.dedup();
        b
    }

    /// Largest capacity reached at any minute of the day.
    pub fn max_capacity(&self) -> u32 {
        let b = self.boundaries();
        if b.is_empty() {
            return 0;
        }
        b.iter().map(|&m| self.capacity_at(m)).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn teams() -> ShiftCalendar {
        ShiftCalendar::new(vec![
            ShiftEntry::new(480, 1200, 1, "low"),
            ShiftEntry::new(480, 1200, 1, "low"),
            ShiftEntry::new(480, 1200, 1, "high"),
            ShiftEntry::new(480, 1200, 1, "high"),
            ShiftEntry::new(1200, 480, 1, "high"),
            ShiftEntry::new(1200, 480, 1, "high"),
        ])
        .unwrap()
    }

    #[test]
    fn low_area_day_capacity() {
        assert_eq!(teams().area("low").capacity_at(600), 2);
    }

    #[test]
    fn high_area_night_capacity() {
        assert_eq!(teams().area("high").capacity_at(1320), 2);
    }

    #[test]
    fn offset_moves_day_shift() {
        let low = teams().area("low").with_offset(120);
        assert_eq!(low.capacity_at(540), 0);
        assert_eq!(low.capacity_at(600), 2);
        assert_eq!(low.capacity_at(1319), 2);
        assert_eq!(low.capacity_at(1320), 0);
    }

    #[test]
    fn boundary_start_inclusive_end_exclusive() {
        let low = teams().area("low");
        assert_eq!(low.capacity_at(479), 0);
        assert_eq!(low.capacity_at(480), 2);
        assert_eq!(low.capacity_at(1199), 2);
        assert_eq!(low.capacity_at(1200), 0);
    }

    #[test]
    fn wrapping_entry_covers_midnight() {
        let night = teams().area("high");
        assert_eq!(night.capacity_at(0), 2);
        assert_eq!(night.capacity_at(479), 2);
        assert_eq!(night.max_capacity(), 2);
    }

    #[test]
    fn rejects_bad_entries() {
        assert_eq!(
            ShiftCalendar::new(vec![ShiftEntry::new(1440, 10, 1, "")]),
            Err(ShiftError::BadStart {
                index: 0,
                start: 1440
            })
        );
        assert!(ShiftCalendar::new(vec![ShiftEntry::new(10, 10, 1, "")]).is_err());
        assert!(ShiftCalendar::new(vec![ShiftEntry::new(10, 1441, 1, "")]).is_err());
    }

    #[test]
    fn time_maps_onto_day() {
        let low = teams().area("low");
        assert_eq!(low.capacity_at_time(3 * 1440 + 600), 2);
        assert_eq!(low.capacity_at_time(3 * 1440 + 1300), 0);
    }
}
