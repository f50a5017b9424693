//! Largest violation along the scan line for each bit and squeezing.
//!
//!     cargo run --release --example optimize_violation

use bitbell::bitcorr::BitIndex;
use bitbell::chsh::{self, Evaluator, Method, ScanSpec, SettingKind};

fn main() -> bitbell::Result<()> {
    let eval = Evaluator::new(Method::Analytic);
    println!("{:>5} {:>3} {:>9} {:>11}", "r", "y", "J*", "S*");
    for r in [0.5, 1.0, 1.5] {
        for y in 1..=3 {
            let spec = ScanSpec::new(SettingKind::Displacement, r, BitIndex::new(y)?, 0.0, 2.0, 2);
            let best = chsh::maximize_violation(&spec, &eval)?;
            println!("{r:>5} {y:>3} {:>9.5} {:>11.8}", best.j, best.s);
        }
    }
    Ok(())
}
