use std::collections::VecDeque;

use crate::kernel::{
    derive_seed, round_minutes, Discipline, EventCalendar, Minute, PromotionQueue, RngStream,
    MINUTES_PER_DAY,
};
use crate::scenario::Scenario;
use crate::stochastics::{
    lab_pipeline, sample_interarrival, AttributeSampler, PatientDraws, Profile,
};

use super::rooms::{
    first_visit_queue, serves_first_visit, FirstQueue, PoolKind, RoomMap, ServerId,
};
use super::{EventKind, EventLog, ExamKind, Patient, Timestamps, UrgencyCode};

/// Outcome of triage for one patient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriageOutcome {
    /// White patient sent elsewhere; takes no further part.
    Dismissed,
    Admitted {
        lab_at_triage: bool,
    },
}

/// Applies the scenario's triage policies to a patient's draws.
pub fn admit(draws: &PatientDraws, scenario: &Scenario) -> TriageOutcome {
    if draws.urgency == UrgencyCode::White && draws.dismiss_u < scenario.dismiss_fraction() {
        return TriageOutcome::Dismissed;
    }
    TriageOutcome::Admitted {
        lab_at_triage: draws.needs_lab && draws.lab_at_triage_u < scenario.lab_at_triage_fraction(),
    }
}

/// Queue discipline for the first-visit lines under `scenario`: red first,
/// then promoted green/white patients, then yellow, then green and white.
/// Green is served strictly before white unless the profile gives it a
/// finite head start.
pub fn first_visit_discipline(profile: &Profile, scenario: &Scenario) -> Discipline {
    let tau = |x: Option<u32>| x.map(Minute::from);
    let head_start = match profile.discipline.green_head_start {
        Some(h) => vec![Some(0), Some(round_minutes(h)), None, None],
        None => Vec::new(),
    };
    Discipline {
        thresholds: vec![tau(scenario.tau_w), tau(scenario.tau_g), None, None],
        pinned_from: Some(UrgencyCode::Red.rank()),
        head_start,
    }
}

/// Parameters of a single replication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub rep: u32,
    /// Replication seed; see [`SimConfig::for_replication`].
    pub seed: u64,
    pub days: u32,
    /// Keep running after the horizon, without new arrivals, until every
    /// patient has left.
    pub drain: bool,
    /// Stop generating arrivals after this many patients.
    pub max_patients: Option<u64>,
}

impl SimConfig {
    /// Replication `rep` of a run with `master_seed`. The seed depends only
    /// on the pair, so every scenario sees the same patients.
    pub fn for_replication(master_seed: u64, rep: u32, days: u32) -> Self {
        Self {
            rep,
            seed: derive_seed(master_seed, u64::from(rep)),
            days,
            drain: false,
            max_patients: None,
        }
    }

    pub fn horizon(&self) -> Minute {
        Minute::from(self.days) * Minute::from(MINUTES_PER_DAY)
    }
}

/// Everything a replication produces.
#[derive(Debug, Clone)]
pub struct ReplicationOutput {
    pub log: EventLog,
    pub patients: Vec<Patient>,
    pub horizon: Minute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    First,
    Exam,
    Last,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Event {
    Arrival,
    TriageDone(usize),
    Promote,
    LabDispatch(usize),
    LabResult(usize),
    EndService {
        server: ServerId,
        pid: usize,
        stage: Stage,
    },
    ShiftChange,
}

#[derive(Debug, Clone, Copy)]
struct LastEntry {
    pid: usize,
    team: ServerId,
    enqueued_at: Minute,
    seq: u64,
}

#[derive(Debug, Clone, Copy)]
enum Job {
    First(FirstQueue, usize),
    Last(usize),
    Xray(usize),
}

struct PatientState {
    patient: Patient,
    draws: PatientDraws,
    exams: Vec<ExamKind>,
    next_exam: usize,
    first_done: bool,
    lab_pending: bool,
    in_exam: bool,
    first_queue: FirstQueue,
}

struct Sim<'a> {
    profile: &'a Profile,
    scenario: &'a Scenario,
    cfg: &'a SimConfig,
    sampler: AttributeSampler,
    discipline: Discipline,
    margin: f64,
    rooms: RoomMap,
    order: Vec<ServerId>,
    boundaries: Vec<u32>,
    cal: EventCalendar<Event>,
    arrivals_rng: RngStream,
    next_arrival: f64,
    patients: Vec<PatientState>,
    general: PromotionQueue,
    ortho: PromotionQueue,
    derm: PromotionQueue,
    last: Vec<LastEntry>,
    last_seq: u64,
    xray: VecDeque<usize>,
    in_system: usize,
    log: EventLog,
}

/// Runs one replication of the department under `scenario`.
pub fn simulate(profile: &Profile, scenario: &Scenario, cfg: &SimConfig) -> ReplicationOutput {
    let rooms = RoomMap::new(profile, scenario);
    let mut sim = Sim {
        profile,
        scenario,
        cfg,
        sampler: AttributeSampler::new(profile),
        discipline: first_visit_discipline(profile, scenario),
        margin: profile.discipline.first_visit_margin,
        order: rooms.dispatch_order(),
        boundaries: rooms.boundaries(),
        rooms,
        cal: EventCalendar::new(),
        arrivals_rng: RngStream::new(cfg.seed, "arrivals"),
        next_arrival: 0.0,
        patients: Vec::new(),
        general: PromotionQueue::new(),
        ortho: PromotionQueue::new(),
        derm: PromotionQueue::new(),
        last: Vec::new(),
        last_seq: 0,
        xray: VecDeque::new(),
        in_system: 0,
        log: EventLog::new(),
    };
    sim.run();
    ReplicationOutput {
        log: sim.log,
        patients: sim.patients.into_iter().map(|p| p.patient).collect(),
        horizon: cfg.horizon(),
    }
}

impl Sim<'_> {
    fn now(&self) -> Minute {
        self.cal.now()
    }

    fn horizon(&self) -> Minute {
        self.cfg.horizon()
    }

    fn emit(&mut self, pid: usize, event: EventKind, detail: String) {
        let now = self.now();
        self.log.push(self.cfg.rep, now, pid as u64, event, detail);
    }

    fn run(&mut self) {
        self.schedule_next_arrival();
        self.schedule_next_shift_change(0);
        while let Some(t) = self.cal.peek_time() {
            if !self.cfg.drain && t >= self.horizon() {
                break;
            }
            let ev = self.cal.pop().expect("peeked");
            self.handle(ev.event);
            self.dispatch();
        }
    }

    fn arrivals_open(&self) -> bool {
        self.cfg
            .max_patients
            .is_none_or(|n| (self.patients.len() as u64) < n)
    }

    fn schedule_next_arrival(&mut self) {
        if !self.arrivals_open() {
            return;
        }
        let Some(gap) = sample_interarrival(
            self.sampler.arrivals(),
            self.next_arrival,
            &mut self.arrivals_rng,
        ) else {
            return;
        };
        self.next_arrival += gap;
        let at = round_minutes(self.next_arrival);
        if at < self.horizon() {
            self.cal.schedule(at, Event::Arrival);
        }
    }

    /// Boundaries only matter while someone could be waiting for a server.
    fn schedule_next_shift_change(&mut self, after: Minute) {
        if self.boundaries.is_empty() || (after >= self.horizon() && self.in_system == 0) {
            return;
        }
        let day = after.div_euclid(Minute::from(MINUTES_PER_DAY));
        let next = (day..=day + 1)
            .flat_map(|d| {
                self.boundaries
                    .iter()
                    .map(move |&b| d * Minute::from(MINUTES_PER_DAY) + Minute::from(b))
            })
            .find(|&t| t > after)
            .expect("boundaries repeat daily");
        self.cal.schedule(next, Event::ShiftChange);
    }

    fn handle(&mut self, ev: Event) {
        match ev {
            Event::Arrival => self.on_arrival(),
            Event::TriageDone(pid) => self.on_triage_done(pid),
            Event::Promote | Event::ShiftChange => {}
            Event::LabDispatch(pid) => self.emit(pid, EventKind::LabDispatch, String::new()),
            Event::LabResult(pid) => {
                self.patients[pid].lab_pending = false;
                self.patients[pid].patient.times.lab_result = Some(self.now());
                self.emit(pid, EventKind::LabResult, String::new());
                self.advance(pid);
            }
            Event::EndService { server, pid, stage } => self.on_end_service(server, pid, stage),
        }
        if ev == Event::ShiftChange {
            let now = self.now();
            self.schedule_next_shift_change(now);
        }
    }

    fn on_arrival(&mut self) {
        let now = self.now();
        let pid = self.patients.len();
        let mut rng = RngStream::substream(self.cfg.seed, "patient", pid as u64);
        let draws = self.sampler.draw(now, &mut rng);
        let exams = draws.extra_exams();
        let patient = Patient {
            id: pid as u64,
            arrival_mode: draws.arrival_mode,
            urgency: draws.urgency,
            visit_type: draws.visit_type,
            needs_lab: draws.needs_lab,
            lab_at_triage: false,
            extra_exams: exams.clone(),
            times: Timestamps {
                arrive: Some(now),
                ..Timestamps::default()
            },
            first_team: None,
        };
        let triage = round_minutes(draws.triage);
        self.patients.push(PatientState {
            first_queue: first_visit_queue(patient.urgency, patient.visit_type),
            patient,
            draws,
            exams,
            next_exam: 0,
            first_done: false,
            lab_pending: false,
            in_exam: false,
        });
        self.in_system += 1;
        let mode = self.patients[pid].patient.arrival_mode.as_str();
        self.emit(pid, EventKind::Arrive, format!("mode={mode}"));
        self.cal.schedule(now + triage, Event::TriageDone(pid));
        self.schedule_next_arrival();
    }

    fn on_triage_done(&mut self, pid: usize) {
        let now = self.now();
        let st = &mut self.patients[pid];
        st.patient.times.triage_done = Some(now);
        let exams = if st.exams.is_empty() {
            "none".to_owned()
        } else {
            st.exams
                .iter()
                .map(|e| e.as_str())
                .collect::<Vec<_>>()
                .join("+")
        };
        let detail = format!(
            "code={};visit={};lab={};exams={exams}",
            st.patient.urgency,
            st.patient.visit_type,
            u8::from(st.patient.needs_lab)
        );
        let outcome = admit(&st.draws, self.scenario);
        self.emit(pid, EventKind::TriageDone, detail);

        let lab_at_triage = match outcome {
            TriageOutcome::Dismissed => {
                self.emit(pid, EventKind::DismissedAtTriage, String::new());
                self.in_system -= 1;
                return;
            }
            TriageOutcome::Admitted { lab_at_triage } => lab_at_triage,
        };
        if lab_at_triage {
            self.patients[pid].patient.lab_at_triage = true;
            self.start_lab(pid, "triage");
        }

        let st = &mut self.patients[pid];
        st.patient.times.enqueue_first = Some(now);
        let class = st.patient.urgency.rank();
        let queue = st.first_queue;
        match queue {
            FirstQueue::General => self.general.push(pid as u64, class, now),
            FirstQueue::Orthopaedic => self.ortho.push(pid as u64, class, now),
            FirstQueue::Dermatological => self.derm.push(pid as u64, class, now),
        };
        self.emit(
            pid,
            EventKind::EnqueueFirst,
            format!("queue={}", queue.as_str()),
        );
        if let Some(at) = self.discipline.promotion_time(class, now) {
            self.cal.schedule(at, Event::Promote);
        }
    }

    fn start_lab(&mut self, pid: usize, origin: &str) {
        let now = self.now();
        let st = &mut self.patients[pid];
        st.lab_pending = true;
        let times = lab_pipeline(
            &self.profile.lab_profile,
            now,
            st.draws.lab_multiplier,
            self.scenario.lab_reduction(),
        );
        self.emit(pid, EventKind::LabDraw, format!("at={origin}"));
        self.cal.schedule(times.dispatch, Event::LabDispatch(pid));
        self.cal.schedule(times.result, Event::LabResult(pid));
    }

    fn on_end_service(&mut self, server: ServerId, pid: usize, stage: Stage) {
        let now = self.now();
        let released = self
            .rooms
            .pool_mut(server.pool)
            .expect("server pool exists")
            .release(server.slot);
        debug_assert_eq!(released, pid as u64);
        match stage {
            Stage::First => {
                let st = &mut self.patients[pid];
                st.first_done = true;
                st.patient.times.end_first = Some(now);
                self.emit(pid, EventKind::EndFirst, format!("server={server}"));
                let st = &self.patients[pid];
                if st.patient.needs_lab && !st.patient.lab_at_triage {
                    self.start_lab(pid, "first");
                }
            }
            Stage::Exam => {
                let st = &mut self.patients[pid];
                let kind = st.exams[st.next_exam];
                st.next_exam += 1;
                st.in_exam = false;
                self.emit(
                    pid,
                    EventKind::EndExam,
                    format!("exam={};server={server}", kind.as_str()),
                );
            }
            Stage::Last => {
                self.patients[pid].patient.times.discharge = Some(now);
                self.emit(pid, EventKind::Discharge, format!("server={server}"));
                self.in_system -= 1;
                return;
            }
        }
        self.advance(pid);
    }

    /// Moves a patient past the first visit: exams once the lab result is
    /// in, then the last-visit queue.
    fn advance(&mut self, pid: usize) {
        let now = self.now();
        let st = &self.patients[pid];
        if !st.first_done || st.lab_pending || st.in_exam || st.patient.times.enqueue_last.is_some()
        {
            return;
        }
        if let Some(&kind) = st.exams.get(st.next_exam) {
            self.patients[pid].in_exam = true;
            match kind {
                ExamKind::Xray => self.xray.push_back(pid),
                ExamKind::Misc => {
                    let pool = self.rooms.pool_mut(PoolKind::Misc).expect("misc pool");
                    let slot = pool.idle_slot(now).expect("unlimited");
                    let server = ServerId::new(PoolKind::Misc, slot);
                    self.start_exam(server, pid);
                }
            }
            return;
        }
        let team = st.patient.first_team.expect("first visit done");
        self.patients[pid].patient.times.enqueue_last = Some(now);
        self.last.push(LastEntry {
            pid,
            team,
            enqueued_at: now,
            seq: self.last_seq,
        });
        self.last_seq += 1;
        self.emit(pid, EventKind::EnqueueLast, format!("team={team}"));
    }

    fn start_exam(&mut self, server: ServerId, pid: usize) {
        let now = self.now();
        let st = &self.patients[pid];
        let kind = st.exams[st.next_exam];
        let duration = round_minutes(st.draws.exam_durations[st.next_exam]);
        let iv = self.rooms.pool_mut(server.pool).expect("exam pool").seize(
            server.slot,
            pid as u64,
            now,
            duration,
        );
        self.emit(
            pid,
            EventKind::StartExam,
            format!("exam={};server={server}", kind.as_str()),
        );
        self.cal.schedule(
            iv.end,
            Event::EndService {
                server,
                pid,
                stage: Stage::Exam,
            },
        );
    }

    fn sweep_promotions(&mut self) {
        if !self.discipline.promotes() {
            return;
        }
        let now = self.now();
        let mut fresh = self.general.promote_due(now, &self.discipline);
        fresh.extend(self.ortho.promote_due(now, &self.discipline));
        fresh.extend(self.derm.promote_due(now, &self.discipline));
        for (pid, at) in fresh {
            debug_assert_eq!(at, now, "promotion logged late");
            let code = self.patients[pid as usize].patient.urgency;
            self.emit(pid as usize, EventKind::Promoted, format!("code={code}"));
        }
    }

    fn dispatch(&mut self) {
        self.sweep_promotions();
        let now = self.now();
        loop {
            let mut started = false;
            for i in 0..self.order.len() {
                let server = self.order[i];
                if !self.rooms.is_idle(server, now) {
                    continue;
                }
                if let Some(job) = self.pick(server) {
                    self.start(server, job);
                    started = true;
                }
            }
            if !started {
                break;
            }
        }
    }

    fn queue(&self, q: FirstQueue) -> &PromotionQueue {
        match q {
            FirstQueue::General => &self.general,
            FirstQueue::Orthopaedic => &self.ortho,
            FirstQueue::Dermatological => &self.derm,
        }
    }

    fn queue_mut(&mut self, q: FirstQueue) -> &mut PromotionQueue {
        match q {
            FirstQueue::General => &mut self.general,
            FirstQueue::Orthopaedic => &mut self.ortho,
            FirstQueue::Dermatological => &mut self.derm,
        }
    }

    /// Oldest waiting last visit among entries accepted by `f`.
    fn oldest_last<F: Fn(&LastEntry) -> bool>(&self, f: F) -> Option<usize> {
        self.last
            .iter()
            .enumerate()
            .filter(|(_, e)| f(e))
            .min_by_key(|(_, e)| (e.enqueued_at, e.seq))
            .map(|(i, _)| i)
    }

    fn pick(&self, server: ServerId) -> Option<Job> {
        let now = self.now();
        match server.pool {
            PoolKind::LastVisit => self.oldest_last(|_| true).map(Job::Last),
            PoolKind::Xray => self.xray.front().map(|&pid| Job::Xray(pid)),
            PoolKind::Misc => None,
            PoolKind::Low | PoolKind::High | PoolKind::Orthopaedic | PoolKind::Dermatological => {
                let line = match server.pool {
                    PoolKind::Orthopaedic => FirstQueue::Orthopaedic,
                    PoolKind::Dermatological => FirstQueue::Dermatological,
                    _ => FirstQueue::General,
                };
                let first = self.queue(line).peek_next(&self.discipline, |e| {
                    let code = UrgencyCode::from_rank(e.class).expect("valid rank");
                    serves_first_visit(server.pool, line, code)
                });
                let covered = self.rooms.covered_posts(server, now);
                let last = self.oldest_last(|e| e.team == server || covered.contains(&e.team));
                match (first, last) {
                    (None, None) => None,
                    (Some(f), None) => Some(Job::First(line, f.entity as usize)),
                    (None, Some(l)) => Some(Job::Last(l)),
                    (Some(f), Some(l)) => {
                        let l_entry = &self.last[l];
                        let take_last = if f.class == UrgencyCode::Red.rank() {
                            false
                        } else if self.scenario.last_visit_priority() {
                            true
                        } else if f.promoted_at.is_some() {
                            false
                        } else {
                            (l_entry.enqueued_at as f64) + self.margin < f.enqueued_at as f64
                        };
                        Some(if take_last {
                            Job::Last(l)
                        } else {
                            Job::First(line, f.entity as usize)
                        })
                    }
                }
            }
        }
    }

    fn start(&mut self, server: ServerId, job: Job) {
        let now = self.now();
        match job {
            Job::First(line, pid) => {
                self.queue_mut(line).remove(pid as u64).expect("queued");
                let duration = round_minutes(self.patients[pid].draws.first_visit);
                let iv = self.rooms.pool_mut(server.pool).expect("team pool").seize(
                    server.slot,
                    pid as u64,
                    now,
                    duration,
                );
                let p = &mut self.patients[pid].patient;
                p.first_team = Some(server);
                p.times.start_first = Some(now);
                self.emit(pid, EventKind::StartFirst, format!("server={server}"));
                self.cal.schedule(
                    iv.end,
                    Event::EndService {
                        server,
                        pid,
                        stage: Stage::First,
                    },
                );
            }
            Job::Last(idx) => {
                let entry = self.last.remove(idx);
                let pid = entry.pid;
                let duration = round_minutes(self.patients[pid].draws.last_visit);
                let iv = self.rooms.pool_mut(server.pool).expect("team pool").seize(
                    server.slot,
                    pid as u64,
                    now,
                    duration,
                );
                self.patients[pid].patient.times.start_last = Some(now);
                self.emit(
                    pid,
                    EventKind::StartLast,
                    format!("team={};server={server}", entry.team),
                );
                self.cal.schedule(
                    iv.end,
                    Event::EndService {
                        server,
                        pid,
                        stage: Stage::Last,
                    },
                );
            }
            Job::Xray(pid) => {
                self.xray.pop_front();
                self.start_exam(server, pid);
            }
        }
    }
}
