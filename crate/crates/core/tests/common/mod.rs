//! Log-replay checks shared by the integration tests. They read nothing but
//! the event log and the profile's shift calendars.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use edsim::kernel::Minute;
use edsim::model::{EventKind, EventLog, LogRecord, PoolKind, RoomMap, ServerId, UrgencyCode};
use edsim::scenario::Scenario;
use edsim::stochastics::Profile;

/// Per-patient view of a log.
#[derive(Debug, Default, Clone)]
pub struct Trace {
    pub code: Option<UrgencyCode>,
    pub visit: String,
    pub lab: bool,
    pub exams: Vec<String>,
    pub times: BTreeMap<&'static str, Minute>,
    pub first_server: Option<ServerId>,
    pub last_team: Option<ServerId>,
    pub lab_result: Option<Minute>,
    pub exam_starts: Vec<Minute>,
    pub dismissed: bool,
}

pub fn traces(log: &EventLog) -> BTreeMap<u64, Trace> {
    let mut out: BTreeMap<u64, Trace> = BTreeMap::new();
    for r in log.iter() {
        let t = out.entry(r.patient).or_default();
        t.times.entry(r.event.as_str()).or_insert(r.time);
        match r.event {
            EventKind::TriageDone => {
                t.code = r.field("code").map(|c| c.parse().expect("code"));
                t.visit = r.field("visit").unwrap_or_default().to_owned();
                t.lab = r.field("lab") == Some("1");
                t.exams = match r.field("exams") {
                    Some("none") | None => Vec::new(),
                    Some(e) => e.split('+').map(str::to_owned).collect(),
                };
            }
            EventKind::StartFirst => t.first_server = server(r),
            EventKind::StartLast => t.last_team = r.field("team").map(|s| s.parse().expect("team")),
            EventKind::LabResult => t.lab_result = Some(r.time),
            EventKind::StartExam => t.exam_starts.push(r.time),
            EventKind::DismissedAtTriage => t.dismissed = true,
            _ => {}
        }
    }
    out
}

fn server(r: &LogRecord) -> Option<ServerId> {
    r.field("server").map(|s| s.parse().expect("server id"))
}

/// Violation counts per invariant.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Violations {
    pub clock: usize,
    pub chain: usize,
    pub capacity: usize,
    pub lab_precedence: usize,
    pub red_immediacy: usize,
    pub affinity: usize,
    pub flow: usize,
}

impl Violations {
    pub fn total(&self) -> usize {
        self.clock
            + self.chain
            + self.capacity
            + self.lab_precedence
            + self.red_immediacy
            + self.affinity
            + self.flow
    }

    pub fn add(&mut self, o: &Violations) {
        self.clock += o.clock;
        self.chain += o.chain;
        self.capacity += o.capacity;
        self.lab_precedence += o.lab_precedence;
        self.red_immediacy += o.red_immediacy;
        self.affinity += o.affinity;
        self.flow += o.flow;
    }
}

const CHAIN: [&str; 8] = [
    "ARRIVE",
    "TRIAGE_DONE",
    "ENQUEUE_FIRST",
    "START_FIRST",
    "END_FIRST",
    "ENQUEUE_LAST",
    "START_LAST",
    "DISCHARGE",
];

/// Replays `log` and counts broken invariants. `drained` asks for every
/// admitted patient to be discharged.
pub fn check_log(
    log: &EventLog,
    profile: &Profile,
    scenario: &Scenario,
    drained: bool,
) -> Violations {
    let mut v = Violations::default();
    let rooms = RoomMap::new(profile, scenario);

    let mut prev = Minute::MIN;
    for r in log.iter() {
        if r.time < prev {
            v.clock += 1;
        }
        prev = r.time;
    }

    let tr = traces(log);
    for t in tr.values() {
        if t.dismissed {
            if t.times.len() != 3 {
                v.flow += 1;
            }
            continue;
        }
        let stamps: Vec<Minute> = CHAIN
            .iter()
            .filter_map(|k| t.times.get(k).copied())
            .collect();
        if t.times.contains_key("DISCHARGE") && stamps.len() != CHAIN.len() {
            v.chain += 1;
        }
        if stamps.windows(2).any(|w| w[0] > w[1]) {
            v.chain += 1;
        }
        if drained && !t.times.contains_key("DISCHARGE") {
            v.flow += 1;
        }
        if t.lab {
            if let Some(&s) = t.exam_starts.iter().min() {
                if t.lab_result.is_none_or(|l| s < l) {
                    v.lab_precedence += 1;
                }
            }
            if let (Some(&e), Some(l)) = (t.times.get("ENQUEUE_LAST"), t.lab_result) {
                if e < l {
                    v.lab_precedence += 1;
                }
            }
        }
        if scenario.extra_last_visit_teams() == 0 {
            if let (Some(f), Some(l)) = (t.first_server, t.last_team) {
                if f != l {
                    v.affinity += 1;
                }
            }
        }
    }

    let mut busy: HashMap<ServerId, u64> = HashMap::new();
    let mut per_pool: HashMap<PoolKind, usize> = HashMap::new();
    let mut red_waiting: Vec<(u64, Minute)> = Vec::new();
    let mut must_start_now: HashSet<u64> = HashSet::new();
    let high_slots = rooms.pool(PoolKind::High).map_or(0, |p| p.slot_count());
    for r in log.iter() {
        let code = tr[&r.patient].code;
        match r.event {
            EventKind::StartFirst | EventKind::StartLast | EventKind::StartExam => {
                let s = server(r).expect("start has server");
                if busy.insert(s, r.patient).is_some() {
                    v.capacity += 1;
                }
                if s.pool != PoolKind::Misc {
                    if !rooms.is_on_duty(s, r.time) {
                        v.capacity += 1;
                    }
                    let n = per_pool.entry(s.pool).or_default();
                    *n += 1;
                    if *n > rooms.pool(s.pool).map_or(0, |p| p.slot_count()) {
                        v.capacity += 1;
                    }
                }
                let is_red_first =
                    r.event == EventKind::StartFirst && code == Some(UrgencyCode::Red);
                if is_red_first {
                    red_waiting.retain(|(p, _)| *p != r.patient);
                    must_start_now.remove(&r.patient);
                } else if s.pool == PoolKind::High && !red_waiting.is_empty() {
                    v.red_immediacy += 1;
                }
            }
            EventKind::EndFirst | EventKind::EndExam | EventKind::Discharge => {
                let s = server(r).expect("end has server");
                if busy.remove(&s) != Some(r.patient) {
                    v.capacity += 1;
                }
                if s.pool != PoolKind::Misc {
                    *per_pool.entry(s.pool).or_default() -= 1;
                }
            }
            EventKind::EnqueueFirst if code == Some(UrgencyCode::Red) => {
                let idle = (0..high_slots)
                    .map(|i| ServerId::new(PoolKind::High, i))
                    .filter(|s| rooms.is_on_duty(*s, r.time) && !busy.contains_key(s))
                    .count();
                if idle > red_waiting.len() {
                    must_start_now.insert(r.patient);
                }
                red_waiting.push((r.patient, r.time));
            }
            _ => {}
        }
        // A red patient that found an idle room must start within the same minute.
        if must_start_now
            .iter()
            .any(|p| tr[p].times["ENQUEUE_FIRST"] < r.time)
        {
            v.red_immediacy += must_start_now.len();
            must_start_now.clear();
        }
    }
    v.red_immediacy += must_start_now
        .iter()
        .filter(|p| tr[p].times.get("START_FIRST") != tr[p].times.get("ENQUEUE_FIRST"))
        .count();
    v
}

/// Independent replay of the first-visit discipline on a single-line log:
/// red first, then promoted patients by promotion time, then yellow, then
/// green and white by queue entry with green credited `head_start`
/// minutes. Returns (starts checked, mismatches, promotions seen).
pub fn replay_first_visit_order(
    log: &EventLog,
    tau_g: Option<Minute>,
    tau_w: Option<Minute>,
    head_start: Minute,
) -> (usize, usize, usize) {
    struct Waiting {
        code: UrgencyCode,
        enq: Minute,
        order: usize,
        promoted: Option<Minute>,
    }
    let tr = traces(log);
    let mut waiting: BTreeMap<u64, Waiting> = BTreeMap::new();
    let mut order = 0;
    let (mut checked, mut mismatches, mut promotions) = (0, 0, 0);
    let tau = |c: UrgencyCode| match c {
        UrgencyCode::Green => tau_g,
        UrgencyCode::White => tau_w,
        _ => None,
    };
    for r in log.iter() {
        match r.event {
            EventKind::EnqueueFirst => {
                let code = tr[&r.patient].code.expect("triaged");
                waiting.insert(
                    r.patient,
                    Waiting {
                        code,
                        enq: r.time,
                        order,
                        promoted: None,
                    },
                );
                order += 1;
            }
            EventKind::Promoted => {
                promotions += 1;
                let w = waiting.get_mut(&r.patient).expect("promoted while waiting");
                let due = tau(w.code).map(|t| w.enq + t + 1);
                if due != Some(r.time) || w.promoted.is_some() {
                    mismatches += 1;
                }
                w.promoted = Some(r.time);
            }
            EventKind::StartFirst => {
                checked += 1;
                let overdue = waiting.values().any(|w| {
                    w.promoted.is_none() && tau(w.code).is_some_and(|t| w.enq + t < r.time)
                });
                let best = waiting
                    .iter()
                    .min_by_key(|(_, w)| match (w.code, w.promoted) {
                        (UrgencyCode::Red, _) => (0, 0, w.order),
                        (_, Some(p)) => (1, p, w.order),
                        (UrgencyCode::Yellow, None) => (2, 0, w.order),
                        (UrgencyCode::Green, None) => (3, w.enq - head_start, w.order),
                        (UrgencyCode::White, None) => (3, w.enq, w.order),
                    })
                    .map(|(p, _)| *p);
                if overdue || best != Some(r.patient) {
                    mismatches += 1;
                }
                waiting.remove(&r.patient);
            }
            _ => {}
        }
    }
    (checked, mismatches, promotions)
}
