//! Team staffing over the day for the current shifts and with shifts moved
//! one or two hours later.

use edsim::kernel::ShiftCalendar;
use edsim::stochastics::Profile;

fn main() {
    let profile = Profile::builtin();
    let teams = ShiftCalendar::new(profile.resources.teams.clone()).expect("valid profile");
    println!("hour  low high | +1h low high | +2h low high");
    for hour in 0..24u32 {
        let m = hour * 60;
        let row: Vec<String> = [0, 60, 120]
            .iter()
            .map(|&off| {
                let cal = teams.clone().with_offset(off);
                format!(
                    "{:>3} {:>4}",
                    cal.area("low").capacity_at(m),
                    cal.area("high").capacity_at(m)
                )
            })
            .collect();
        println!("{hour:>4}  {}", row.join(" |     "));
    }
    println!("boundaries: {:?}", teams.boundaries());
}
