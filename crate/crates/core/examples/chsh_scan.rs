//! S(J) for the displacement settings a = b = 0, a' = J, b' = -J.
//!
//!     cargo run --release --example chsh_scan [r] [y]

use bitbell::bitcorr::BitIndex;
use bitbell::chsh::{self, Evaluator, Method, ScanSpec, SettingKind};

fn main() -> bitbell::Result<()> {
    let mut args = std::env::args().skip(1);
    let r: f64 = args.next().map_or(0.5, |s| s.parse().expect("r"));
    let y: u32 = args.next().map_or(2, |s| s.parse().expect("y"));

    let spec = ScanSpec::new(SettingKind::Displacement, r, BitIndex::new(y)?, 0.0, 1.0, 21);
    let curve = chsh::scan_j(&spec, &Evaluator::new(Method::Analytic))?;
    println!("{:>6} {:>10} {:>9}", "J", "S", "err");
    for row in &curve.rows {
        let mark = if row.result.s > 2.0 { "  <- violation" } else { "" };
        println!("{:>6.2} {:>10.6} {:>9.1e}{mark}", row.j, row.result.s, row.result.err);
    }
    if let Some(best) = curve.max_s() {
        println!("largest on grid: S = {:.6} at J = {:.2}", best.result.s, best.j);
    }
    Ok(())
}
