use super::{EntityId, Minute, ShiftCalendar};

/// Start and end of one service, in simulation minutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ServiceInterval {
    pub slot: usize,
    pub start: Minute,
    pub end: Minute,
}

/// A set of numbered server slots whose availability follows a shift calendar.
///
/// Slot `i` is on duty at time `t` iff `i < capacity_at(t)`. A slot that goes
/// off duty while busy keeps its patient until the service ends and only then
/// stops taking work, so shift changes never preempt.
#[derive(Debug, Clone)]
pub struct ResourcePool {
    id: String,
    calendar: Option<ShiftCalendar>,
    slots: Vec<Option<EntityId>>,
}

impl ResourcePool {
    pub fn new(id: &str, calendar: ShiftCalendar) -> Self {
        let n = calendar.max_capacity() as usize;
        Self {
            id: id.to_owned(),
            calendar: Some(calendar),
            slots: vec![None; n],
        }
    }

    /// A pool that always has one more idle slot.
    pub fn unlimited(id: &str) -> Self {
        Self {
            id: id.to_owned(),
            calendar: None,
            slots: Vec::new(),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn calendar(&self) -> Option<&ShiftCalendar> {
        self.calendar.as_ref()
    }

    /// `None` for unlimited pools.
    pub fn capacity_at(&self, t: Minute) -> Option<u32> {
        self.calendar.as_ref().map(|c| c.capacity_at_time(t))
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn is_on_duty(&self, slot: usize, t: Minute) -> bool {
        match self.capacity_at(t) {
            Some(cap) => slot < cap as usize,
            None => true,
        }
    }

    pub fn is_idle(&self, slot: usize, t: Minute) -> bool {
        self.is_on_duty(slot, t) && self.slots.get(slot).is_none_or(|s| s.is_none())
    }

    pub fn occupant(&self, slot: usize) -> Option<EntityId> {
        self.slots.get(slot).copied().flatten()
    }

    /// Lowest-numbered on-duty slot that is free.
    pub fn idle_slot(&self, t: Minute) -> Option<usize> {
        match self.capacity_at(t) {
            Some(cap) => {
                (0..(cap as usize).min(self.slots.len())).find(|&i| self.slots[i].is_none())
            }
            None => Some(
                self.slots
                    .iter()
                    .position(Option::is_none)
                    .unwrap_or(self.slots.len()),
            ),
        }
    }

    /// Occupies `slot` with `entity` for `duration` minutes from `now`.
    ///
    /// # Panics
    /// If the slot is busy or off duty; callers check with [`Self::is_idle`].
    pub fn seize(
        &mut self,
        slot: usize,
        entity: EntityId,
        now: Minute,
        duration: Minute,
    ) -> ServiceInterval {
        assert!(duration >= 0, "negative service duration {duration}");
        assert!(
            self.is_idle(slot, now),
            "pool {}: slot {slot} not idle at {now}",
            self.id
        );
        if self.calendar.is_none() && slot >= self.slots.len() {
            self.slots.resize(slot + 1, None);
        }
        self.slots[slot] = Some(entity);
        ServiceInterval {
            slot,
            start: now,
            end: now + duration,
        }
    }

    /// Frees `slot`, returning whoever held it.
    ///
    /// # Panics
    /// If the slot was idle.
    pub fn release(&mut self, slot: usize) -> EntityId {
        self.slots
            .get_mut(slot)
            .and_then(Option::take)
            .unwrap_or_else(|| panic!("pool {}: release of idle slot {slot}", self.id))
    }

    pub fn busy_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    /// Busy slots that are already off duty and will retire when done.
    pub fn draining(&self, t: Minute) -> usize {
        self.slots
            .iter()
            .enumerate()
            .filter(|(i, s)| s.is_some() && !self.is_on_duty(*i, t))
            .count()
    }
}
