mod common;

use edsim::harness::{run_report, RunSettings};
use edsim::kernel::{derive_seed, ShiftEntry};
use edsim::model::{simulate, EventKind, PoolKind, ServerId, SimConfig};
use edsim::scenario::{self, Scenario, CATALOG};
use edsim::stochastics::Profile;
use proptest::prelude::*;

fn drained(seed: u64, days: u32) -> SimConfig {
    SimConfig {
        drain: true,
        ..SimConfig::for_replication(seed, 0, days)
    }
}

fn any_scenario() -> impl Strategy<Value = Scenario> {
    prop_oneof![
        Just(Scenario::BASELINE),
        (0..CATALOG.len()).prop_map(|i| CATALOG[i].1),
        (
            0u32..3,
            0u32..2,
            prop::option::of(30u32..240),
            prop::option::of(30u32..240),
            0u32..=100,
            0u32..=100,
            0u32..2,
            0u32..40
        )
            .prop_map(|(t, p, tau_g, tau_w, e, l, a, r)| Scenario {
                t: Some(t),
                p: Some(p),
                tau_g,
                tau_w,
                e: Some(e),
                l: Some(l),
                a: Some(a),
                r: Some(r),
            }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn invariants_hold_for_any_scenario(seed in any::<u64>(), s in any_scenario()) {
        let profile = Profile::builtin();
        let out = simulate(&profile, &s, &drained(seed, 2));
        let v = common::check_log(&out.log, &profile, &s, true);
        prop_assert_eq!(v.total(), 0, "{:?} under {}", v, s);
    }

    #[test]
    fn same_seed_same_log(seed in any::<u64>(), s in any_scenario()) {
        let profile = Profile::builtin();
        let cfg = SimConfig::for_replication(seed, 3, 2);
        prop_assert_eq!(simulate(&profile, &s, &cfg).log, simulate(&profile, &s, &cfg).log);
    }

    #[test]
    fn dismissal_never_adds_white_patients(seed in any::<u64>()) {
        let profile = Profile::builtin();
        let cfg = SimConfig::for_replication(seed, 0, 3);
        let admitted_white = |e: u32| {
            let s = Scenario { e: Some(e), ..Scenario::BASELINE };
            let log = simulate(&profile, &s, &cfg).log;
            let whites: Vec<u64> = log
                .iter()
                .filter(|r| r.event == EventKind::TriageDone && r.field("code") == Some("WHITE"))
                .map(|r| r.patient)
                .collect();
            let dismissed = log.iter().filter(|r| r.event == EventKind::DismissedAtTriage).count();
            whites.len() - dismissed
        };
        let counts: Vec<usize> = [0, 5, 10, 15, 20, 100].iter().map(|&e| admitted_white(e)).collect();
        prop_assert!(counts.windows(2).all(|w| w[1] <= w[0]), "{:?}", counts);
        prop_assert_eq!(counts[5], 0);
    }
}

#[test]
fn baseline_tuple_matches_no_scenario() {
    let profile = Profile::builtin();
    let cfg = SimConfig::for_replication(5, 0, 3);
    let unset = scenario::parse("(-,-,-,-,-,-,-,-)").unwrap();
    assert_eq!(
        simulate(&profile, &Scenario::BASELINE, &cfg).log,
        simulate(&profile, &unset, &cfg).log
    );
}

#[test]
fn fifo_within_class_on_one_team() {
    let mut profile = Profile::builtin();
    profile.resources.teams = vec![ShiftEntry::new(0, 1440, 1, "high")];
    profile.mixes.visit_type.general = 1.0;
    profile.mixes.visit_type.orthopaedic = 0.0;
    profile.mixes.visit_type.dermatological = 0.0;
    profile.discipline.green_head_start = None;
    let mut mismatches = 0;
    for seed in 0..30 {
        let cfg = SimConfig {
            max_patients: Some(40),
            ..drained(derive_seed(seed, 1), 1)
        };
        let out = simulate(&profile, &Scenario::BASELINE, &cfg);
        mismatches += common::replay_first_visit_order(&out.log, None, None, i64::MAX / 4).1;
    }
    assert_eq!(mismatches, 0);
}

#[test]
fn extra_team_takes_last_visits() {
    let profile = Profile::builtin();
    let cfg = SimConfig::for_replication(2, 0, 3);
    let f1 = scenario::parse("F.1").unwrap();
    let log = simulate(&profile, &f1, &cfg).log;
    let starts: Vec<ServerId> = log
        .iter()
        .filter(|r| r.event == EventKind::StartLast)
        .map(|r| r.field("server").unwrap().parse().unwrap())
        .collect();
    assert!(!starts.is_empty());
    assert!(starts.iter().any(|s| s.pool == PoolKind::LastVisit));
}

#[test]
fn lab_at_triage_for_every_lab_patient_when_l_is_100() {
    let profile = Profile::builtin();
    let cfg = SimConfig::for_replication(4, 0, 2);
    let d4 = scenario::parse("D.4").unwrap();
    let log = simulate(&profile, &d4, &cfg).log;
    let draws: Vec<&str> = log
        .iter()
        .filter(|r| r.event == EventKind::LabDraw)
        .map(|r| r.field("at").unwrap())
        .collect();
    assert!(!draws.is_empty());
    assert!(draws.iter().all(|a| *a == "triage"));
}

#[test]
fn longer_services_lengthen_stays() {
    let profile = Profile::builtin();
    let settings = RunSettings {
        replications: 3,
        days: 6,
        ..RunSettings::default()
    };
    let base = run_report(&profile, &Scenario::BASELINE, &settings);
    let slow = run_report(
        &profile.with_service_scale(2.0),
        &Scenario::BASELINE,
        &settings,
    );
    assert!(slow.los > base.los, "{} vs {}", slow.los, base.los);
}

#[test]
fn last_visit_priority_cuts_last_visit_wait() {
    let profile = Profile::builtin();
    let settings = RunSettings {
        replications: 2,
        days: 6,
        ..RunSettings::default()
    };
    let base = run_report(&profile, &Scenario::BASELINE, &settings);
    let b1 = run_report(&profile, &scenario::parse("B.1").unwrap(), &settings);
    assert!(b1.wt_last < base.wt_last);
}
