//! Closed-form photon-count probabilities for both state families.
//!
//!     cargo run --example probabilities

use bitbell::analytic::{self, SqueezeParams};
use num_complex::Complex64;

fn main() -> bitbell::Result<()> {
    let r = 0.5;
    let (z1, z2) = (Complex64::new(0.3, 0.0), Complex64::new(-0.3, 0.0));

    println!("displaced two-mode squeezed vacuum, r = {r}, z = ({z1}, {z2})");
    for n1 in 0..4 {
        let row: Vec<String> = (0..4).map(|n2| format!("{:.6}", analytic::displaced_prob(r, z1, z2, n1, n2))).collect();
        println!("  n1 = {n1}: {}", row.join("  "));
    }

    let params = SqueezeParams::new(r, 0.3, -0.3)?;
    println!("\nlocally squeezed, r = {r}, r+ = 0.3, r- = -0.3 (odd totals vanish)");
    for n1 in 0..4 {
        let row: Vec<String> = (0..4).map(|n2| analytic::squeezed_prob(params, n1, n2).map(|p| format!("{p:.6}"))).collect::<Result<_, _>>()?;
        println!("  n1 = {n1}: {}", row.join("  "));
    }

    // whole grids come from recurrences; their mass shows the truncation
    let grid = analytic::displaced_distribution(r, z1, z2, 64)?;
    println!("\ndisplaced grid n <= 64: total {:.15}, tail {:.1e}", grid.total(), grid.tail_mass());
    let grid = analytic::squeezed_distribution(params, 64)?;
    println!("squeezed grid  n <= 64: total {:.15}, tail {:.1e}", grid.total(), grid.tail_mass());
    Ok(())
}
