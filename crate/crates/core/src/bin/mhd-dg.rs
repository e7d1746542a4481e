use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mhd_dg::config::parse_times;
use mhd_dg::driver::{convergence_study, run};
use mhd_dg::{Case, OutputFormat, Result, RunConfig};

#[derive(Parser)]
#[command(name = "mhd-dg", version, about = "Modal DG solver for 2D ideal MHD")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark case to its final time.
    Solve(SolveArgs),
    /// Measure L² errors and convergence orders on a sequence of meshes.
    Converge(ConvergeArgs),
}

#[derive(Args)]
struct Common {
    /// Polynomial degree (0, 1 or 2).
    #[arg(long = "k")]
    degree: Option<usize>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    t_final: Option<f64>,
    /// Disable the oscillation-eliminating damping step.
    #[arg(long)]
    no_oe: bool,
    /// Disable the locally divergence-free projection.
    #[arg(long)]
    no_ldf: bool,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    max_steps: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    case: Option<Case>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    /// Comma-separated output times.
    #[arg(long)]
    snapshots: Option<String>,
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Output directory for snapshots and the run summary.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-quadrature-point samples next to each snapshot.
    #[arg(long)]
    dump_quadrature: bool,
    /// `key = value` configuration file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ConvergeArgs {
    #[arg(long, default_value = "vortex")]
    case: Case,
    /// Comma-separated mesh sizes n (meshes are n × n).
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    meshes: Vec<usize>,
    #[command(flatten)]
    common: Common,
}

impl Common {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(k) = self.degree {
            cfg.degree = k;
        }
        if let Some(c) = self.cfl {
            cfg.cfl = c;
        }
        if self.t_final.is_some() {
            cfg.t_final = self.t_final;
        }
        if self.no_oe {
            cfg.oe_enabled = false;
        }
        if self.no_ldf {
            cfg.ldf_enabled = false;
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        if let Some(m) = self.max_steps {
            cfg.max_steps = m;
        }
    }
}

fn solve(args: SolveArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::new(args.case.unwrap_or(Case::Vortex)),
    };
    if let Some(case) = args.case {
        cfg.set("case", case.name())?;
    }
    if let Some(nx) = args.nx {
        cfg.nx = nx;
    }
    if let Some(ny) = args.ny {
        cfg.ny = ny;
    }
    if let Some(s) = &args.snapshots {
        cfg.snapshots = parse_times(s)?;
    }
    if let Some(f) = args.format {
        cfg.format = f;
    }
    if args.out.is_some() {
        cfg.out_dir = args.out.clone();
    }
    cfg.dump_quadrature |= args.dump_quadrature;
    args.common.apply(&mut cfg);
    let summary = run(&cfg)?;
    print!("{summary}");
    Ok(())
}

fn converge(args: ConvergeArgs) -> Result<()> {
    let mut cfg = RunConfig::new(args.case);
    args.common.apply(&mut cfg);
    let report = convergence_study(&cfg, &args.meshes)?;
    print!("{report}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Converge(a) => converge(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
