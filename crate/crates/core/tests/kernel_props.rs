use std::collections::BTreeMap;

use edsim::kernel::{
    derive_seed, Discipline, EventCalendar, PromotionQueue, ResourcePool, RngStream, ShiftCalendar,
    ShiftEntry,
};
use proptest::prelude::*;

fn entry() -> impl Strategy<Value = ShiftEntry> {
    (0u32..1440, 1u32..1440, 1u32..4).prop_map(|(start, len, cap)| {
        let end = (start + len) % 1440;
        let end = if end == 0 { 1440 } else { end };
        ShiftEntry::new(start, end, cap, "")
    })
}

proptest! {
    #[test]
    fn calendar_pops_in_time_then_insertion_order(times in prop::collection::vec(0i64..500, 1..200)) {
        let mut cal = EventCalendar::new();
        for (i, t) in times.iter().enumerate() {
            cal.schedule(*t, i);
        }
        let mut expected: Vec<(i64, usize)> = times.iter().copied().zip(0..).collect();
        expected.sort();
        let mut got = Vec::new();
        while let Some(s) = cal.pop() {
            prop_assert_eq!(cal.now(), s.time);
            got.push((s.time, s.event));
        }
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn shift_capacity_matches_minute_table(entries in prop::collection::vec(entry(), 0..5), offset in 0u32..1440) {
        let mut table = [0u32; 1440];
        for e in &entries {
            let len = match (e.end + 1440 - e.start) % 1440 {
                0 => 1440,
                n => n,
            };
            for k in 0..len {
                table[((e.start + k + offset) % 1440) as usize] += e.capacity;
            }
        }
        let cal = ShiftCalendar::new(entries).unwrap().with_offset(offset);
        for (m, want) in table.iter().enumerate() {
            prop_assert_eq!(cal.capacity_at(m as u32), *want, "minute {}", m);
        }
        prop_assert_eq!(cal.max_capacity(), table.iter().copied().max().unwrap_or(0));
    }

    #[test]
    fn pool_never_exceeds_on_duty_slots(entries in prop::collection::vec(entry(), 1..4), starts in prop::collection::vec((0i64..2880, 1i64..200), 1..60)) {
        let cal = ShiftCalendar::new(entries).unwrap();
        let mut pool = ResourcePool::new("p", cal.clone());
        let mut running: Vec<(i64, usize)> = Vec::new();
        let mut starts = starts;
        starts.sort();
        for (i, (t, d)) in starts.into_iter().enumerate() {
            running.retain(|&(end, slot)| {
                if end <= t {
                    pool.release(slot);
                    false
                } else {
                    true
                }
            });
            if let Some(slot) = pool.idle_slot(t) {
                prop_assert!(slot < cal.capacity_at_time(t) as usize);
                let iv = pool.seize(slot, i as u64, t, d);
                running.push((iv.end, slot));
            }
            prop_assert!(pool.busy_count() - pool.draining(t) <= cal.capacity_at_time(t) as usize);
        }
    }

    #[test]
    fn fifo_within_class_without_promotion(classes in prop::collection::vec(0u8..4, 1..80)) {
        let d = Discipline::default();
        let mut q = PromotionQueue::new();
        for (i, c) in classes.iter().enumerate() {
            q.push(i as u64, *c, i as i64);
        }
        let mut served = Vec::new();
        while let Some(e) = q.dequeue_next(1000, &d, |_| true) {
            served.push((e.class, e.entity));
        }
        let mut want: Vec<(u8, u64)> = classes.iter().copied().zip(0u64..).collect();
        want.sort_by_key(|&(c, id)| (std::cmp::Reverse(c), id));
        prop_assert_eq!(served, want);
    }

    #[test]
    fn promoted_items_are_not_overtaken(
        arrivals in prop::collection::vec((0u8..3, 0i64..30), 1..40),
        tau in 1i64..60,
        service in 1i64..20,
    ) {
        let d = Discipline {
            thresholds: vec![Some(tau), Some(tau), None],
            pinned_from: None,
            head_start: Vec::new(),
        };
        let mut arrivals = arrivals;
        arrivals.sort_by_key(|a| a.1);
        let mut q = PromotionQueue::new();
        let mut now = 0;
        let mut next = 0;
        let mut served: BTreeMap<u64, i64> = BTreeMap::new();
        let mut promoted_at: BTreeMap<u64, i64> = BTreeMap::new();
        while next < arrivals.len() || !q.is_empty() {
            while next < arrivals.len() && arrivals[next].1 <= now {
                q.push(next as u64, arrivals[next].0, arrivals[next].1);
                next += 1;
            }
            for (id, at) in q.promote_due(now, &d) {
                promoted_at.insert(id, at);
            }
            if let Some(e) = q.dequeue_next(now, &d, |_| true) {
                served.insert(e.entity, now);
            }
            now += service;
        }
        for (&p, &at) in &promoted_at {
            for (o, &(class, _)) in arrivals.iter().enumerate() {
                let o = o as u64;
                let lower = class < arrivals[p as usize].0;
                let unpromoted_then = promoted_at.get(&o).is_none_or(|&x| x > at);
                if lower && unpromoted_then && served[&o] >= at {
                    prop_assert!(served[&p] < served[&o], "{} promoted at {} overtaken by {}", p, at, o);
                }
            }
        }
    }

    #[test]
    fn streams_are_reproducible(seed in any::<u64>(), index in 0u64..1000) {
        let a: Vec<f64> = {
            let mut r = RngStream::substream(seed, "patient", index);
            (0..8).map(|_| r.uniform()).collect()
        };
        let mut r = RngStream::substream(seed, "patient", index);
        let b: Vec<f64> = (0..8).map(|_| r.uniform()).collect();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.iter().all(|u| (0.0..1.0).contains(u)));
        let mut other = RngStream::substream(seed, "patient", index + 1);
        prop_assert_ne!(a[0], other.uniform());
        prop_assert_ne!(derive_seed(seed, index), derive_seed(seed, index + 1));
    }
}

#[test]
fn service_across_shift_change_completes() {
    let cal = ShiftCalendar::new(vec![ShiftEntry::new(480, 1200, 1, "")]).unwrap();
    let mut pool = ResourcePool::new("day", cal);
    let iv = pool.seize(0, 7, 1150, 90);
    assert_eq!(iv.end, 1240);
    assert!(!pool.is_on_duty(0, 1210));
    assert_eq!(pool.draining(1210), 1);
    assert_eq!(pool.release(0), 7);
    assert_eq!(pool.idle_slot(1240), None);
    assert_eq!(pool.idle_slot(1440 + 480), Some(0));
}
