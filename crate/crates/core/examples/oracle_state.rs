//! Brute-force Fock-space construction of the same states, compared with
//! the closed forms.
//!
//!     cargo run --release --example oracle_state

use bitbell::analytic::{self, SqueezeParams};
use bitbell::fock::{self, FockCutoff, Mode, OracleConfig};
use num_complex::Complex64;

fn main() -> bitbell::Result<()> {
    let (r, z1, z2) = (1.0, Complex64::new(0.5, 0.1), Complex64::new(-0.2, 0.0));

    // step by step at a fixed cutoff
    let cutoff = FockCutoff::with_default_guard(64)?;
    let state = fock::apply_two_mode_squeeze(&fock::vacuum(cutoff), r)?;
    let state = fock::apply_displacement(&state, Mode::Two, z2)?;
    let state = fock::apply_displacement(&state, Mode::One, z1)?;
    println!("n_max = 64: norm^2 {:.15}, lost {:.1e}, edge bound {:.1e}", state.norm_sqr(), state.tail_mass(), fock::tail_bound(&state, 4));

    // or let the cutoff grow until the truncation estimate is below 1e-10
    let cfg = OracleConfig::default();
    let state = fock::prepare_displaced(&cfg, r, z1, z2)?;
    println!("adaptive cutoff: n_max = {}", state.cutoff().n_max());
    let mut worst: f64 = 0.0;
    for n1 in 0..=10 {
        for n2 in 0..=10 {
            let p = state.amplitude(n1, n2).norm_sqr();
            worst = worst.max((p - analytic::displaced_prob(r, z1, z2, n1, n2)).abs());
        }
    }
    println!("displaced: max |oracle - closed form| over n <= 10 = {worst:.2e}");

    let (rp, rm) = (0.4, -0.3);
    let state = fock::prepare_squeezed(&cfg, r, rp, rm)?;
    let params = SqueezeParams::new(r, rp, rm)?;
    let mut worst: f64 = 0.0;
    for n1 in 0..=10 {
        for n2 in 0..=10 {
            worst = worst.max((state.amplitude(n1, n2).norm_sqr() - analytic::squeezed_prob(params, n1, n2)?).abs());
        }
    }
    println!("squeezed:  max |oracle - closed form| over n <= 10 = {worst:.2e} (n_max = {})", state.cutoff().n_max());
    Ok(())
}
