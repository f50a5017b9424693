use std::path::PathBuf;
use std::process::ExitCode;

use bitbell::chsh::{Method, SettingKind};
use bitbell::cli::{self, CliError, CliResult, Format, ProbMethod, ProbQuery, RunConfig, Suite};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

#[derive(Parser)]
#[command(name = "bitbell", version, about = "Bitwise Bell inequalities for two-mode squeezed light")]
struct Cli {
    /// worker threads for scans (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// key = value config file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    #[value(alias = "displaced")]
    Displacement,
    #[value(alias = "squeezed")]
    Squeeze,
}

impl From<Family> for SettingKind {
    fn from(f: Family) -> Self {
        match f {
            Family::Displacement => SettingKind::Displacement,
            Family::Squeeze => SettingKind::LocalSqueeze,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Analytic,
    Oracle,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Probability of one count pair
    Prob(ProbArgs),
    /// S(J) along a line of settings
    Scan(RunArgs),
    /// All curves of one figure
    Figure {
        id: String,
        /// output directory
        #[arg(long, default_value = ".")]
        dir: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a verification suite and print a JSON report
    Verify {
        #[arg(value_parser = ["identities", "cross", "parity", "all"], default_value = "all")]
        suite: String,
    },
    /// Largest S along the scan line
    Optimize(RunArgs),
}

#[derive(Args)]
struct ProbArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, allow_hyphen_values = true)]
    r: f64,
    /// displacement of mode 1, e.g. 0.3 or 0.3+0.1i
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    z1: Complex64,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    z2: Complex64,
    /// local squeeze of mode 1
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    rp: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    rm: f64,
    #[arg(long)]
    n1: usize,
    #[arg(long)]
    n2: usize,
    #[arg(long, value_enum, default_value = "analytic")]
    method: MethodArg,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    #[arg(long)]
    y: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    j_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    j_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    guard: Option<usize>,
    #[arg(long)]
    eps_tail: Option<f64>,
    #[arg(long)]
    max_bit: Option<u32>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn base_config(path: &Option<PathBuf>) -> CliResult<RunConfig> {
    match path {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    }
}

impl RunArgs {
    fn apply(&self, mut cfg: RunConfig) -> CliResult<RunConfig> {
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f.clone() { cfg.$f = v.into(); })* };
        }
        set!(family, r, y, j_min, j_max, steps, guard, eps_tail, max_bit);
        if self.n_max.is_some() {
            cfg.n_max = self.n_max;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        match self.method {
            Some(MethodArg::Analytic) => cfg.method = Method::Analytic,
            Some(MethodArg::Oracle) => cfg.method = Method::Oracle,
            Some(MethodArg::Both) => return Err(CliError::Config("--method both applies to prob only".into())),
            None => {}
        }
        if let Some(f) = self.format {
            cfg.format = match f {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(cfg: &RunConfig, text: &str) -> CliResult<()> {
    match &cfg.out {
        Some(path) => Ok(cli::write_atomic(path, text.as_bytes())?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let file_cfg = base_config(&cli.config)?;
    match cli.cmd {
        Cmd::Prob(a) => {
            let q = ProbQuery {
                family: a.family.into(),
                r: a.r,
                mode1: if matches!(a.family, Family::Squeeze) { a.rp.into() } else { a.z1 },
                mode2: if matches!(a.family, Family::Squeeze) { a.rm.into() } else { a.z2 },
                n1: a.n1,
                n2: a.n2,
            };
            let method = match a.method {
                MethodArg::Analytic => ProbMethod::Analytic,
                MethodArg::Oracle => ProbMethod::Oracle,
                MethodArg::Both => ProbMethod::Both,
            };
            let ans = cli::prob(&q, method, &file_cfg.oracle())?;
            match (ans.analytic, ans.oracle, ans.difference()) {
                (Some(a), Some(o), Some(d)) => {
                    println!("analytic {a:.16e}\noracle   {o:.16e}\ndiff     {d:.3e}");
                    if d > file_cfg.cross_tol {
                        eprintln!("mismatch above cross_tol = {:e}", file_cfg.cross_tol);
                        return Ok(ExitCode::from(1));
                    }
                }
                (Some(p), None, _) | (None, Some(p), _) => println!("{p:.16e}"),
                _ => unreachable!("at least one method runs"),
            }
        }
        Cmd::Scan(a) => {
            let cfg = a.apply(file_cfg)?;
            let curve = cli::scan(&cfg)?;
            emit(&cfg, &cli::render_curve(&curve, cfg.format))?;
        }
        Cmd::Figure { id, dir, run } => {
            let fig = cli::figure(&id)?;
            let cfg = run.apply(file_cfg)?;
            for path in cli::write_figure(&fig, &cfg, &dir)? {
                println!("{}", path.display());
            }
        }
        Cmd::Verify { suite } => {
            let suite = Suite::parse(&suite).expect("clap restricts the values");
            let report = cli::run_suite(suite, &file_cfg.oracle(), file_cfg.cross_tol)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
            if !report.passed {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Optimize(a) => {
            let cfg = a.apply(file_cfg)?;
            let best = cli::optimize(&cfg)?;
            eprintln!("J* = {:.6}  S* = {:.12}", best.j_star, best.s_star);
            emit(&cfg, &format!("{}\n", serde_json::to_string(&best).expect("report serialises")))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
