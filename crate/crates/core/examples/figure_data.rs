//! Writes the curves of one figure as CSV into a directory, as
//! `bitbell figure` does.
//!
//!     cargo run --release --example figure_data [fig3a] [out-dir]

use bitbell::cli::{self, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let id = args.next().unwrap_or_else(|| "fig3a".into());
    let dir = args.next().unwrap_or_else(|| "figure-data".into());

    let fig = cli::figure(&id)?;
    let cfg = RunConfig { steps: 101, ..RunConfig::default() };
    std::fs::create_dir_all(&dir)?;
    for curve in cli::figure_curves(&fig, &cfg)? {
        let path = std::path::Path::new(&dir).join(cli::figure_file_name(fig.id, curve.spec.r, cfg.format));
        cli::write_atomic(&path, cli::render_curve(&curve, cfg.format).as_bytes())?;
        println!("wrote {}", path.display());
        if let Some(best) = curve.max_s() {
            println!("r = {}: max S = {:.6} at J = {:.2}", curve.spec.r, best.result.s, best.j);
        }
    }
    Ok(())
}
