//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so
//! the lines reach the console in order; exits nonzero if any fails.

use std::time::{Duration, Instant};

use bitbell::bitcorr::{self, BitIndex};
use bitbell::chsh::{self, ChshResult, Evaluator, Method, ScanSpec, SettingKind};
use bitbell::cli::suites;
use bitbell::fock::{JointDistribution, OracleConfig};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const TSIRELSON: f64 = 2.0 * std::f64::consts::SQRT_2;
/// A violation must clear 2 by more than roundoff and truncation error.
const MARGIN: f64 = 1e-9;

fn violates(s: f64) -> bool {
    s > 2.0 + MARGIN
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// `S` for bits `ys` on the 201-point grid `J` in `[0, 2]`.
struct Curves {
    j: Vec<f64>,
    /// `s[k][i]`: bit `ys[k]` at `j[i]`; `None` where evaluation failed
    s: Vec<Vec<Option<f64>>>,
}

impl Curves {
    fn compute(kind: SettingKind, r: f64, ys: &[u32]) -> Curves {
        let bits: Vec<BitIndex> = ys.iter().map(|&y| BitIndex::new(y).unwrap()).collect();
        let spec = ScanSpec::new(kind, r, bits[0], 0.0, 2.0, 201);
        let eval = Evaluator::new(Method::Analytic);
        let j: Vec<f64> = (0..spec.steps).map(|i| spec.j_at(i)).collect();
        let rows: Vec<Option<Vec<ChshResult>>> = j.par_iter().map(|&j| chsh::s_values(&spec.quad(j), &bits, &eval).ok()).collect();
        let s = (0..bits.len()).map(|k| rows.iter().map(|row| row.as_ref().map(|v| v[k].s)).collect()).collect();
        Curves { j, s }
    }

    fn failed(&self) -> usize {
        self.s.iter().map(|c| c.iter().filter(|v| v.is_none()).count()).sum()
    }

    fn max(&self, k: usize) -> f64 {
        self.s[k].iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t = Instant::now();
    let mut out = f();
    let took = t.elapsed();
    if let Some(limit) = limit {
        if took > limit {
            out.passed = false;
            out.detail.push_str(&format!("; over the {}s budget", limit.as_secs()));
        }
    }
    (out, took)
}

fn cross(displaced: bool) -> Outcome {
    let cfg = OracleConfig::default();
    let mut worst: f64 = 0.0;
    let rs = if displaced { suites::DISPLACED_RS } else { suites::SQUEEZED_RS };
    for r in rs {
        let d = if displaced {
            suites::cross_displaced(&cfg, r, &suites::DISPLACED_ZS)
        } else {
            suites::cross_squeezed(&cfg, r, &suites::SQUEEZED_ZS)
        };
        match d {
            Ok(d) => worst = worst.max(d),
            Err(e) => return outcome(false, format!("r = {r}: {e}")),
        }
    }
    outcome(worst <= 1e-8, format!("max |closed form - oracle| = {worst:.2e} over n1, n2 <= 10"))
}

/// Displacement-family curves for bits 1..=3 at r = 0.5, 1, 1.5.
fn displacement_curves() -> Vec<(f64, Curves)> {
    [0.5, 1.0, 1.5].into_iter().map(|r| (r, Curves::compute(SettingKind::Displacement, r, &[1, 2, 3]))).collect()
}

fn first_bit(curves: &[(f64, Curves)]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (r, c) in curves {
        let at_zero = c.s[0][0].map_or(f64::INFINITY, |s| (s - 2.0).abs());
        let max = c.max(0);
        ok &= c.failed() == 0 && violates(max) && at_zero <= 1e-9 && max <= TSIRELSON + 1e-6;
        parts.push(format!("r={r}: max S1 {max:.4}, |S1(0)-2| {at_zero:.1e}"));
    }
    outcome(ok, parts.join("; "))
}

fn second_bit(curves: &[(f64, Curves)]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    // witness: the grid point where the smaller of S1 and S2 is largest
    let mut joint: Option<(f64, f64, f64)> = None;
    for (r, c) in curves {
        let max = c.max(1);
        ok &= c.failed() == 0 && violates(max);
        parts.push(format!("r={r}: max S2 {max:.4}"));
        for i in 0..c.j.len() {
            if let (Some(s1), Some(s2)) = (c.s[0][i], c.s[1][i]) {
                let low = s1.min(s2);
                if violates(low) && joint.is_none_or(|(_, _, best)| low > best) {
                    joint = Some((*r, c.j[i], low));
                }
            }
        }
    }
    match joint {
        Some((r, j, low)) => parts.push(format!("S1 and S2 both >= {low:.4} at r={r}, J={j}")),
        None => {
            ok = false;
            parts.push("no J with S1 > 2 and S2 > 2".into());
        }
    }
    outcome(ok, parts.join("; "))
}

fn third_bit(curves: &[(f64, Curves)]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (r, c) in curves {
        let (s2, s3) = (c.max(1), c.max(2));
        ok &= c.failed() == 0 && violates(s3) && s3 < s2;
        parts.push(format!("r={r}: max S3 {s3:.4} < max S2 {s2:.4}"));
    }
    outcome(ok, parts.join("; "))
}

fn squeeze_family() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in [0.5, 1.0, 1.25] {
        let c = Curves::compute(SettingKind::LocalSqueeze, r, &[1, 2]);
        let parity = c.s[0].iter().flatten().map(|s| (s - 2.0).abs()).fold(0.0, f64::max);
        let max = c.max(1);
        ok &= c.failed() == 0 && violates(max) && parity <= 1e-9;
        parts.push(format!("r={r}: max S2 {max:.4}, max |S1-2| {parity:.1e}, failed {}", c.failed()));
    }
    outcome(ok, parts.join("; "))
}

fn identities() -> Outcome {
    match suites::identity_checks() {
        Ok(checks) => {
            let failing: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            let worst_seeded = checks.iter().filter(|c| c.name.ends_with("/seeded")).map(|c| c.value).fold(0.0, f64::max);
            if failing.is_empty() {
                outcome(true, format!("{} checks, worst seeded deviation {worst_seeded:.1e}", checks.len()))
            } else {
                outcome(false, format!("failing: {}", failing.join(", ")))
            }
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn partitions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let w: Vec<f64> = (0..144).map(|_| rng.random::<f64>()).collect();
        let total: f64 = w.iter().sum();
        let probs = Array2::from_shape_vec((12, 12), w.into_iter().map(|x| x / total).collect()).unwrap();
        let d = JointDistribution::new(probs, 0.0).unwrap();
        worst = worst.max((bitcorr::correlator_partition_y2(&d) - bitcorr::correlator(&d, BitIndex::new(2).unwrap()).value).abs());
        worst = worst.max((bitcorr::correlator_partition_y3(&d) - bitcorr::correlator(&d, BitIndex::new(3).unwrap()).value).abs());
    }
    outcome(worst <= 1e-12, format!("max difference {worst:.1e} over 100 grids"))
}

fn determinism() -> Outcome {
    let run = |threads: &str| -> Result<Vec<(String, Vec<u8>)>, String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_bitbell"))
            .args(["--threads", threads, "figure", "fig3a", "--dir"])
            .arg(dir.path())
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(String::from_utf8_lossy(&out.stderr).into_owned());
        }
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.path())
            .map_err(|e| e.to_string())?
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        Ok(files)
    };
    match (run("1"), run("4")) {
        (Ok(a), Ok(b)) => {
            let names: Vec<&str> = a.iter().map(|(n, _)| n.as_str()).collect();
            outcome(a.len() == 3 && a == b, format!("{} identical across --threads 1 / 4", names.join(", ")))
        }
        (Err(e), _) | (_, Err(e)) => outcome(false, e),
    }
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let mut all = true;
    let mut report = |id: u32, name: &str, (o, took): (Outcome, Duration)| {
        all &= o.passed;
        println!("{} criterion {id} ({name}, {:.1}s): {}", if o.passed { "PASS" } else { "FAIL" }, took.as_secs_f64(), o.detail);
    };

    report(1, "displaced oracle equivalence", timed(secs(60), || cross(true)));
    report(2, "squeezed oracle equivalence", timed(secs(60), || cross(false)));

    let t = Instant::now();
    let curves = displacement_curves();
    let shared = t.elapsed();
    println!("      (displacement curves for bits 1-3 computed together in {:.1}s)", shared.as_secs_f64());
    let (o, took) = timed(None, || first_bit(&curves));
    let o = if shared + took > Duration::from_secs(120) { outcome(false, format!("{}; over the 120s budget", o.detail)) } else { o };
    report(3, "first-bit violation", (o, shared + took));
    report(4, "second-bit violation", timed(None, || second_bit(&curves)));
    report(5, "third-bit ordering", timed(None, || third_bit(&curves)));
    report(6, "squeeze family", timed(None, squeeze_family));
    report(7, "operator identities", timed(secs(60), identities));
    report(8, "partition forms", timed(secs(5), partitions));
    report(9, "determinism", timed(None, determinism));

    if !all {
        std::process::exit(1);
    }
}
