use super::{EntityId, Minute};

/// A waiting item. Higher `class` means more urgent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueueEntry {
    pub entity: EntityId,
    pub class: u8,
    pub enqueued_at: Minute,
    pub seq: u64,
    pub promoted_at: Option<Minute>,
}

/// Queue discipline: static class priority, FIFO inside a class, and optional
/// aging that moves long waiters to the head.
///
/// Classes given a head start share one band instead of strict priority:
/// inside the band, items are served by `enqueued_at - head_start`, so a
/// class with a larger head start overtakes earlier arrivals of the others
/// by at most that many minutes. The band ranks where its most urgent member
/// would.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Discipline {
    /// Per-class promotion threshold in minutes. An item is promoted once
    /// its wait strictly exceeds the threshold.
    pub thresholds: Vec<Option<Minute>>,
    /// Classes at or above this rank stay ahead of promoted items.
    pub pinned_from: Option<u8>,
    /// Per-class head start in minutes; `None` keeps strict priority.
    pub head_start: Vec<Option<Minute>>,
}

impl Discipline {
    pub fn threshold(&self, class: u8) -> Option<Minute> {
        self.thresholds.get(class as usize).copied().flatten()
    }

    pub fn promotes(&self) -> bool {
        self.thresholds.iter().any(Option::is_some)
    }

    /// First whole minute at which `entry` qualifies for promotion.
    pub fn promotion_time(&self, class: u8, enqueued_at: Minute) -> Option<Minute> {
        self.threshold(class).map(|tau| enqueued_at + tau + 1)
    }

    pub fn head_start(&self, class: u8) -> Option<Minute> {
        self.head_start.get(class as usize).copied().flatten()
    }

    /// Sort key of an item: smaller is served first.
    pub fn rank(&self, e: &QueueEntry) -> (u8, i64, i64, u64) {
        let pinned = self.pinned_from.is_some_and(|p| e.class >= p);
        match (pinned, e.promoted_at) {
            (true, _) => (0, -i64::from(e.class), 0, e.seq),
            (false, Some(at)) => (1, at, 0, e.seq),
            (false, None) => match self.head_start(e.class) {
                Some(h) => {
                    let band = (0..self.head_start.len())
                        .filter(|&c| self.head_start[c].is_some())
                        .max()
                        .unwrap_or(0) as i64;
                    (2, -band, e.enqueued_at - h, e.seq)
                }
                None => (2, -i64::from(e.class), 0, e.seq),
            },
        }
    }
}

/// Waiting line with class priorities and sticky promotion.
#[derive(Debug, Clone, Default)]
pub struct PromotionQueue {
    items: Vec<QueueEntry>,
    next_seq: u64,
}

impl PromotionQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entity: EntityId, class: u8, now: Minute) -> u64 {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.items.push(QueueEntry {
            entity,
            class,
            enqueued_at: now,
            seq,
            promoted_at: None,
        });
        seq
    }

    /// Marks every item whose wait exceeds its class threshold. Returns the
    /// newly promoted items with their promotion times. Promotion never
    /// reverts.
    pub fn promote_due(&mut self, now: Minute, d: &Discipline) -> Vec<(EntityId, Minute)> {
        let mut fresh = Vec::new();
        for e in self.items.iter_mut().filter(|e| e.promoted_at.is_none()) {
            if let Some(at) = d.promotion_time(e.class, e.enqueued_at) {
                if at <= now {
                    e.promoted_at = Some(at);
                    fresh.push((e.entity, at));
                }
            }
        }
        fresh
    }

    /// Head of the queue among items accepted by `eligible`, without
    /// promoting anything.
    pub fn peek_next<F>(&self, d: &Discipline, eligible: F) -> Option<&QueueEntry>
    where
        F: Fn(&QueueEntry) -> bool,
    {
        self.items
            .iter()
            .filter(|e| eligible(e))
            .min_by_key(|e| d.rank(e))
    }

    /// Applies due promotions, then removes and returns the head among
    /// eligible items.
    pub fn dequeue_next<F>(
        &mut self,
        now: Minute,
        d: &Discipline,
        eligible: F,
    ) -> Option<QueueEntry>
    where
        F: Fn(&QueueEntry) -> bool,
    {
        self.promote_due(now, d);
        let seq = self.peek_next(d, eligible)?.seq;
        self.remove_seq(seq)
    }

    pub fn remove(&mut self, entity: EntityId) -> Option<QueueEntry> {
        let idx = self.items.iter().position(|e| e.entity == entity)?;
        Some(self.items.remove(idx))
    }

    fn remove_seq(&mut self, seq: u64) -> Option<QueueEntry> {
        let idx = self.items.iter().position(|e| e.seq == seq)?;
        Some(self.items.remove(idx))
    }

    pub fn get(&self, entity: EntityId) -> Option<&QueueEntry> {
        self.items.iter().find(|e| e.entity == entity)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &QueueEntry> {
        self.items.iter()
    }
}
