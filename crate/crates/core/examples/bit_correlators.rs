//! Correlations between the y-th bits of the two photon counts.
//!
//!     cargo run --release --example bit_correlators

use bitbell::bitcorr::{self, BitIndex};
use bitbell::chsh::{Evaluator, MeasurementSetting, Method};
use num_complex::Complex64;

fn main() -> bitbell::Result<()> {
    let eval = Evaluator::new(Method::Analytic);
    let r = 1.0;
    for alpha in [0.0, 0.2, 0.5] {
        let setting = MeasurementSetting::displacement(Complex64::new(alpha, 0.0), Complex64::new(-alpha, 0.0));
        let (dist, cutoff) = eval.distribution(r, setting)?;
        print!("r = {r}, alpha = {alpha:<4} (n_max {:>3}):", cutoff.n_max());
        for y in 1..=3 {
            let c = bitcorr::correlator(&dist, BitIndex::new(y)?);
            print!("  E{y} = {:+.6}", c.value);
        }
        println!();
        // the second and third bits also have block-partition forms
        let p2 = bitcorr::correlator_partition_y2(&dist);
        let p3 = bitcorr::correlator_partition_y3(&dist);
        println!("{:>36} partition forms: {p2:+.6}  {p3:+.6}", "");
    }
    Ok(())
}
