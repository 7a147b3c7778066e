//! Laboratory turnaround for a sample drawn at each hour of the day, with and
//! without a lead-time reduction.
//!
//! ```text
//! cargo run --example lab_pipeline -- 30
//! ```

use edsim::stochastics::{lab_pipeline, Profile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let reduction: u32 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(30);
    let lab = Profile::builtin().lab_profile;
    println!("draw   dispatch result  turnaround | -{reduction}m: result turnaround");
    for hour in 0..24 {
        let draw = hour * 60 + 7;
        let a = lab_pipeline(&lab, draw, 1.0, 0);
        let b = lab_pipeline(&lab, draw, 1.0, reduction);
        println!(
            "{:02}:{:02}  {:>8} {:>6} {:>11} | {:>13} {:>10}",
            draw / 60,
            draw % 60,
            a.dispatch,
            a.result,
            a.result - draw,
            b.result,
            b.result - draw
        );
    }
    Ok(())
}
