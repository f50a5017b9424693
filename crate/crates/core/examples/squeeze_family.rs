//! Local squeezing instead of displacement: the lowest bit cannot violate
//! (every populated count pair has even total), the second one can.
//!
//!     cargo run --release --example squeeze_family

use bitbell::bitcorr::BitIndex;
use bitbell::chsh::{self, Evaluator, Method, ScanSpec, SettingKind};

fn main() -> bitbell::Result<()> {
    let eval = Evaluator::new(Method::Analytic);
    for r in [0.5, 1.0, 1.25] {
        let s1 = chsh::scan_j(&ScanSpec::new(SettingKind::LocalSqueeze, r, BitIndex::new(1)?, 0.0, 0.5, 11), &eval)?;
        let worst = s1.rows.iter().map(|row| (row.result.s - 2.0).abs()).fold(0.0, f64::max);
        let spec = ScanSpec::new(SettingKind::LocalSqueeze, r, BitIndex::new(2)?, 0.0, 0.5, 2);
        let best = chsh::maximize_violation(&spec, &eval)?;
        println!("r = {r:<4}  max |S1 - 2| = {worst:.1e}   S2* = {:.6} at J = {:.4}", best.s, best.j);
    }
    Ok(())
}
