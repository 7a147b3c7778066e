use super::LabProfile;
use crate::kernel::{round_minutes, Minute};

/// Timeline of one laboratory request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabTimes {
    pub draw: Minute,
    pub dispatch: Minute,
    pub result: Minute,
}

/// First courier round at or after `draw`.
pub fn next_dispatch(draw: Minute, interval: u32) -> Minute {
    let i = Minute::from(interval.max(1));
    draw.div_euclid(i) * i + if draw.rem_euclid(i) == 0 { 0 } else { i }
}

fn hourly(v: &[f64], t: Minute) -> f64 {
    v[(t.rem_euclid(1440) / 60) as usize]
}

impl LabProfile {
    /// Mean turnaround components (waiting, effective, miscellaneous) for a
    /// dispatch during hour-of-day `hour`.
    pub fn components(&self, hour: usize) -> (f64, f64, f64) {
        (
            self.waiting[hour],
            self.effective[hour] * self.scale,
            self.miscellaneous[hour] * self.scale,
        )
    }
}

/// Schedules a sample drawn at `draw`.
///
/// The batching wait, transport and laboratory queue make up the part a
/// faster transport system can shorten: `reduction` minutes come off it, but
/// never below `reduction_floor`. The cut is taken from the batching wait
/// first, so the sample also leaves earlier. Processing time follows the
/// hour of the scheduled courier round, scaled by the patient's multiplier.
pub fn lab_pipeline(lab: &LabProfile, draw: Minute, multiplier: f64, reduction: u32) -> LabTimes {
    let dispatch = next_dispatch(draw, lab.dispatch_interval);
    let batch = dispatch - draw;
    let queue = round_minutes(hourly(&lab.waiting, dispatch));
    let processing = round_minutes(
        (hourly(&lab.effective, dispatch) + hourly(&lab.miscellaneous, dispatch))
            * lab.scale
            * multiplier,
    );
    let lead = batch + round_minutes(lab.transport) + queue;
    let reduced = if reduction > 0 {
        let floor = Minute::from(lab.reduction_floor).min(lead);
        (lead - Minute::from(reduction)).max(floor)
    } else {
        lead
    };
    let cut = lead - reduced;
    LabTimes {
        draw,
        dispatch: dispatch - cut.min(batch),
        result: draw + reduced + processing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastics::Profile;

    fn lab() -> LabProfile {
        Profile::builtin().lab_profile
    }

    #[test]
    fn dispatch_rounds_up_to_half_hour() {
        assert_eq!(next_dispatch(605, 30), 630);
        assert_eq!(next_dispatch(630, 30), 630);
        assert_eq!(next_dispatch(0, 30), 0);
        assert_eq!(next_dispatch(1439, 30), 1440);
    }

    #[test]
    fn result_after_dispatch() {
        let l = lab();
        for draw in 0..3000 {
            for r in [0, 10, 30, 120] {
                let t = lab_pipeline(&l, draw, 1.0, r);
                assert!(
                    t.draw <= t.dispatch && t.dispatch <= t.result,
                    "{t:?} r={r}"
                );
            }
        }
    }

    #[test]
    fn reduction_cuts_lead_time_exactly_when_above_floor() {
        let l = lab();
        let base = lab_pipeline(&l, 605, 1.0, 0);
        let fast = lab_pipeline(&l, 605, 1.0, 30);
        assert_eq!(base.result - fast.result, 30);
        assert_eq!(fast.dispatch, 605);
    }

    #[test]
    fn reduction_respects_floor() {
        let mut l = lab();
        l.transport = 0.0;
        l.waiting = vec![0.0; 24];
        let t = lab_pipeline(&l, 600, 1.0, 30);
        let base = lab_pipeline(&l, 600, 1.0, 0);
        assert_eq!(base.result, t.result);
        let t = lab_pipeline(&l, 601, 1.0, 30);
        let processing = lab_pipeline(&l, 601, 1.0, 0).result - 630;
        assert_eq!(t.result - 601 - processing, 5);
    }
}
