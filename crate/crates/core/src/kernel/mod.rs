//! Generic discrete-event machinery.
//!
//! Nothing in here knows about emergency departments: the calendar orders
//! opaque events, pools hand out server slots according to a shift calendar,
//! and the promotion queue implements class-priority FIFO with sticky aging.

mod calendar;
mod pool;
mod queue;
mod rng;
mod shift;

pub use calendar::{EventCalendar, Scheduled, SimClock};
pub use pool::{ResourcePool, ServiceInterval};
pub use queue::{Discipline, PromotionQueue, QueueEntry};
pub use rng::{derive_seed, RngStream};
pub use shift::{ShiftCalendar, ShiftEntry, ShiftError, MINUTES_PER_DAY};

/// Simulation time in whole minutes since the start of the run.
pub type Minute = i64;

/// Opaque identifier of whatever flows through the kernel.
pub type EntityId = u64;

/// Rounds a sampled real duration to whole minutes, halves rounding up.
pub fn round_minutes(x: f64) -> Minute {
    debug_assert!(x.is_finite());
    (x + 0.5).floor() as Minute
}
