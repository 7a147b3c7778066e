//! The first-visit queue discipline on a hand-made waiting room: red first,
//! then patients promoted after waiting past their threshold, then yellow,
//! then green and white.

use edsim::kernel::PromotionQueue;
use edsim::model::{first_visit_discipline, UrgencyCode};
use edsim::scenario;
use edsim::stochastics::Profile;

fn main() {
    let mut profile = Profile::builtin();
    profile.discipline.green_head_start = Some(30.0);
    let c3 = scenario::parse("C.3").expect("catalog entry");
    let d = first_visit_discipline(&profile, &c3);

    let arrivals = [
        (UrgencyCode::White, 0),
        (UrgencyCode::Green, 10),
        (UrgencyCode::Yellow, 20),
        (UrgencyCode::White, 25),
        (UrgencyCode::Green, 40),
        (UrgencyCode::Red, 70),
        (UrgencyCode::Green, 75),
    ];
    let mut q = PromotionQueue::new();
    for (i, (code, t)) in arrivals.iter().enumerate() {
        q.push(i as u64, code.rank(), *t);
    }
    // One patient is called every 25 minutes from t = 80.
    let mut now = 80;
    while let Some(e) = q.dequeue_next(now, &d, |_| true) {
        let (code, t) = arrivals[e.entity as usize];
        let how = match e.promoted_at {
            Some(at) => format!("promoted at {at}"),
            None => "by class".to_owned(),
        };
        println!(
            "t={now:>3}  patient {} {code:<6} queued at {t:>2}  {how}",
            e.entity
        );
        now += 25;
    }
}
