use std::fmt;
use std::str::FromStr;

use crate::kernel::{Minute, ResourcePool, ShiftCalendar, ShiftEntry};
use crate::scenario::Scenario;
use crate::stochastics::Profile;

use super::{UrgencyCode, VisitType};

/// Server pools of the department.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PoolKind {
    /// Dedicated last-visit team added by a scenario.
    LastVisit,
    Low,
    High,
    Orthopaedic,
    Dermatological,
    Xray,
    Misc,
}

impl PoolKind {
    pub const ALL: [PoolKind; 7] = [
        Self::LastVisit,
        Self::Low,
        Self::High,
        Self::Orthopaedic,
        Self::Dermatological,
        Self::Xray,
        Self::Misc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::LastVisit => "last",
            Self::Low => "low",
            Self::High => "high",
            Self::Orthopaedic => "ortho",
            Self::Dermatological => "derm",
            Self::Xray => "xray",
            Self::Misc => "misc",
        }
    }

    /// Pools whose slots are doctor teams doing first and last visits.
    pub fn is_visit_team(self) -> bool {
        matches!(
            self,
            Self::Low | Self::High | Self::Orthopaedic | Self::Dermatological
        )
    }
}

/// One server slot, e.g. `high#1`. Visit-team slots are the "teams" that
/// patients return to for the last visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ServerId {
    pub pool: PoolKind,
    pub slot: usize,
}

impl ServerId {
    pub fn new(pool: PoolKind, slot: usize) -> Self {
        Self { pool, slot }
    }
}

impl fmt::Display for ServerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.pool.as_str(), self.slot)
    }
}

impl FromStr for ServerId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (pool, slot) = s
            .split_once('#')
            .ok_or_else(|| format!("bad server id `{s}`"))?;
        let pool = PoolKind::ALL
            .into_iter()
            .find(|p| p.as_str() == pool)
            .ok_or_else(|| format!("unknown pool `{pool}`"))?;
        let slot = slot.parse().map_err(|_| format!("bad slot in `{s}`"))?;
        Ok(Self { pool, slot })
    }
}

/// Waiting lines for the first visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstQueue {
    General,
    Orthopaedic,
    Dermatological,
}

impl FirstQueue {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::General => "general",
            Self::Orthopaedic => "ortho",
            Self::Dermatological => "derm",
        }
    }
}

/// Red patients go to the high-urgency general room whatever their visit
/// type; everyone else queues for the room matching the visit type.
pub fn first_visit_queue(urgency: UrgencyCode, visit: VisitType) -> FirstQueue {
    match (urgency, visit) {
        (UrgencyCode::Red, _) | (_, VisitType::General) => FirstQueue::General,
        (_, VisitType::Orthopaedic) => FirstQueue::Orthopaedic,
        (_, VisitType::Dermatological) => FirstQueue::Dermatological,
    }
}

/// Whether a slot of `pool` may take the first visit of a patient waiting
/// in `queue` with code `urgency`. High-urgency rooms take anyone from the
/// general line (urgent codes rank first); low-urgency rooms only white and
/// green.
pub fn serves_first_visit(pool: PoolKind, queue: FirstQueue, urgency: UrgencyCode) -> bool {
    match (pool, queue) {
        (PoolKind::High, FirstQueue::General) => true,
        (PoolKind::Low, FirstQueue::General) => urgency.is_low_urgency(),
        (PoolKind::Orthopaedic, FirstQueue::Orthopaedic) => true,
        (PoolKind::Dermatological, FirstQueue::Dermatological) => true,
        _ => false,
    }
}

/// All server pools for one replication.
#[derive(Debug, Clone)]
pub struct RoomMap {
    pools: Vec<(PoolKind, ResourcePool)>,
    night_pooling: bool,
}

fn calendar(entries: &[ShiftEntry]) -> ShiftCalendar {
    ShiftCalendar::new(entries.to_vec()).expect("validated profile")
}

impl RoomMap {
    pub fn new(profile: &Profile, scenario: &Scenario) -> Self {
        let r = &profile.resources;
        let teams = calendar(&r.teams).with_offset(scenario.shift_offset_minutes());
        let mut pools = vec![
            (PoolKind::Low, ResourcePool::new("low", teams.area("low"))),
            (
                PoolKind::High,
                ResourcePool::new("high", teams.area("high")),
            ),
            (
                PoolKind::Orthopaedic,
                ResourcePool::new("ortho", calendar(&r.orthopaedic)),
            ),
            (
                PoolKind::Dermatological,
                ResourcePool::new("derm", calendar(&r.dermatological)),
            ),
            (PoolKind::Xray, ResourcePool::new("xray", calendar(&r.xray))),
            (PoolKind::Misc, ResourcePool::unlimited("misc")),
        ];
        let extra = scenario.extra_last_visit_teams();
        if extra > 0 {
            let entries = r
                .last_visit_team
                .iter()
                .map(|e| ShiftEntry {
                    capacity: e.capacity * extra,
                    ..e.clone()
                })
                .collect();
            pools.insert(
                0,
                (
                    PoolKind::LastVisit,
                    ResourcePool::new(
                        "last",
                        ShiftCalendar::new(entries).expect("validated profile"),
                    ),
                ),
            );
        }
        Self {
            pools,
            night_pooling: r.night_pooling,
        }
    }

    pub fn pool(&self, kind: PoolKind) -> Option<&ResourcePool> {
        self.pools.iter().find(|(k, _)| *k == kind).map(|(_, p)| p)
    }

    pub fn pool_mut(&mut self, kind: PoolKind) -> Option<&mut ResourcePool> {
        self.pools
            .iter_mut()
            .find(|(k, _)| *k == kind)
            .map(|(_, p)| p)
    }

    pub fn has_last_visit_team(&self) -> bool {
        self.pool(PoolKind::LastVisit).is_some()
    }

    /// Capacity-limited slots in dispatch order.
    pub fn dispatch_order(&self) -> Vec<ServerId> {
        self.pools
            .iter()
            .filter(|(k, _)| *k != PoolKind::Misc)
            .flat_map(|(k, p)| (0..p.slot_count()).map(move |i| ServerId::new(*k, i)))
            .collect()
    }

    pub fn is_idle(&self, s: ServerId, t: Minute) -> bool {
        self.pool(s.pool).is_some_and(|p| p.is_idle(s.slot, t))
    }

    pub fn is_on_duty(&self, s: ServerId, t: Minute) -> bool {
        self.pool(s.pool).is_some_and(|p| p.is_on_duty(s.slot, t))
    }

    /// Off-duty posts whose pending last visits `server` takes over at `t`.
    /// With `c` slots on duty in a pool, off-duty slot `j` is covered by slot
    /// `j % c` of the same pool. With night pooling, off-duty low-urgency
    /// posts are covered the same way by the high-urgency slots.
    pub fn covered_posts(&self, server: ServerId, t: Minute) -> Vec<ServerId> {
        if !server.pool.is_visit_team() || !self.is_on_duty(server, t) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cover = |from: PoolKind, on_duty: usize| {
            let Some(p) = self.pool(from) else { return };
            if on_duty == 0 {
                return;
            }
            out.extend(
                (0..p.slot_count())
                    .filter(|&j| !p.is_on_duty(j, t) && j % on_duty == server.slot)
                    .map(|j| ServerId::new(from, j)),
            );
        };
        let on_duty = |k: PoolKind| {
            self.pool(k)
                .and_then(|p| p.capacity_at(t))
                .map_or(0, |c| c as usize)
        };
        cover(server.pool, on_duty(server.pool));
        if self.night_pooling && server.pool == PoolKind::High {
            cover(PoolKind::Low, on_duty(PoolKind::High));
        }
        out
    }

    /// Union of every pool's shift boundaries, as minutes of the day.
    pub fn boundaries(&self) -> Vec<u32> {
        let mut b: Vec<u32> = self
            .pools
            .iter()
            .filter_map(|(_, p)| p.calendar())
            .flat_map(|c| c.boundaries())
            .collect();
        b.sort_unstable();
        b.dedup();
        b
    }
}
