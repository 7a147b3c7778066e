use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::Minute;

/// Simulation clock. Only the calendar moves it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimClock {
    now: Minute,
}

impl SimClock {
    pub fn now(&self) -> Minute {
        self.now
    }

    fn advance_to(&mut self, t: Minute) {
        assert!(t >= self.now, "clock moved backwards: {t} < {}", self.now);
        self.now = t;
    }
}

/// An event waiting in the calendar.
#[derive(Debug, Clone)]
pub struct Scheduled<E> {
    pub time: Minute,
    pub seq: u64,
    pub event: E,
}

impl<E> PartialEq for Scheduled<E> {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.seq == other.seq
    }
}

impl<E> Eq for Scheduled<E> {}

impl<E> PartialOrd for Scheduled<E> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<E> Ord for Scheduled<E> {
    // BinaryHeap is a max-heap; reverse so the earliest (time, seq) pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .cmp(&self.time)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Future event list ordered by `(time, insertion sequence)`.
#[derive(Debug)]
pub struct EventCalendar<E> {
    heap: BinaryHeap<Scheduled<E>>,
    next_seq: u64,
    clock: SimClock,
}

impl<E> Default for EventCalendar<E> {
    fn default() -> Self {
        Self::new()
    }
}

impl<E> EventCalendar<E> {
    pub fn new() -> Self {
        Self {
            heap: BinaryHeap::new(),
            next_seq: 0,
            clock: SimClock::default(),
        }
    }

    pub fn now(&self) -> Minute {
        self.clock.now()
    }

    /// Inserts `event` at absolute time `at` and returns its sequence number.
    ///
    /// # Panics
    /// Scheduling into the past means the model is corrupted, so it aborts.
    pub fn schedule(&mut self, at: Minute, event: E) -> u64 {
        assert!(
            at >= self.clock.now(),
            "event scheduled in the past: {at} < {}",
            self.clock.now()
        );
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Scheduled {
            time: at,
            seq,
            event,
        });
        seq
    }

    /// Removes the earliest event and advances the clock to its time.
    pub fn pop(&mut self) -> Option<Scheduled<E>> {
        let next = self.heap.pop()?;
        self.clock.advance_to(next.time);
        Some(next)
    }

    pub fn peek_time(&self) -> Option<Minute> {
        self.heap.peek().map(|s| s.time)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}
