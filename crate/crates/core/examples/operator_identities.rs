//! Reordering identities for exponentials of quadratic ladder operators,
//! checked in the 2x2 representation and in truncated Fock space.
//!
//!     cargo run --release --example operator_identities

use bitbell::fock::FockCutoff;
use bitbell::lie::{self, Identity};

fn main() -> bitbell::Result<()> {
    let (c1, c2) = (0.1, -0.12);
    let d = lie::decompose_su11(c1, c2)?;
    println!("e^(c1 A^2) e^(c2 A+^2) = e^(b1 A+^2) e^(b2 (A+A + 1/2)) e^(b3 A^2)");
    println!("  c = ({c1}, {c2}) -> b = ({:.12}, {:.12}, {:.12})", d.beta1, d.beta2, d.beta3);
    println!("  2x2 closure: {:.1e}", lie::rhs_matrix(d).max_abs_diff(&lie::lhs_matrix(c1, c2)));

    let cutoff = FockCutoff::new(48, 16)?;
    for id in Identity::ALL {
        println!("  {id:?}: max deviation {:.1e}", lie::verify_identity(id, c1, c2, cutoff)?);
    }
    println!("  composed exponential: {:.1e}", lie::verify_bch_compose(c1, c2, cutoff)?);

    // residuals come from truncation; they fall as the guard band widens
    for guard in [2, 8, 24] {
        let dev = lie::verify_identity(Identity::Su11, 0.2, 0.2, FockCutoff::new(12, guard)?)?;
        println!("  Su11 at (0.2, 0.2), n_max 12, guard {guard:>2}: {dev:.1e}");
    }
    Ok(())
}
