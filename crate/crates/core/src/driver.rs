//! Run orchestration: time loop, snapshots, summaries and the convergence study.

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use crate::basis::BasisSpec;
use crate::cases::{init_field, Case};
use crate::config::RunConfig;
use crate::diagnostics::{
    center_extrema, conservation_audit, convergence_order, divergence_report, l2_error,
    DivergenceReport, Extrema,
};
use crate::error::{MhdError, Result};
use crate::field::{ModalField, Scheme};
use crate::output::{quadrature_csv_string, write_snapshot};
use crate::physics::{BX, ENER, MX, NVAR, RHO};
use crate::time::{compute_dt, Filter, Integrator, StepOptions};

/// Components reported by the accuracy study: ρ, ρu_x, B_x, E.
pub const ERROR_COMPONENTS: [(usize, &str); 4] = [(RHO, "rho"), (MX, "rho_ux"), (BX, "Bx"), (ENER, "E")];

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub case: Case,
    pub nx: usize,
    pub ny: usize,
    pub t: f64,
    pub steps: usize,
    pub wall_seconds: f64,
    pub divergence: DivergenceReport,
    pub totals_initial: [f64; NVAR],
    pub totals_final: [f64; NVAR],
    pub extrema: Extrema,
    /// L² errors of `ERROR_COMPONENTS` when the case has an exact solution.
    pub errors: Option<[f64; 4]>,
    pub snapshots: Vec<PathBuf>,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "case            {}", self.case)?;
        writeln!(f, "mesh            {}x{}", self.nx, self.ny)?;
        writeln!(f, "time            {}", self.t)?;
        writeln!(f, "steps           {}", self.steps)?;
        writeln!(f, "wall_seconds    {:.3}", self.wall_seconds)?;
        writeln!(f, "divB_max        {:.6e}", self.divergence.max)?;
        writeln!(f, "divB_l2         {:.6e}", self.divergence.l2)?;
        writeln!(f, "B_max           {:.6e}", self.divergence.max_field)?;
        writeln!(f, "rho_min         {:.10e}", self.extrema.rho_min)?;
        writeln!(f, "rho_max         {:.10e}", self.extrema.rho_max)?;
        writeln!(f, "p_min           {:.10e}", self.extrema.p_min)?;
        writeln!(f, "p_max           {:.10e}", self.extrema.p_max)?;
        let names = ["rho", "rho_ux", "rho_uy", "rho_uz", "E", "Bx", "By", "Bz"];
        for (v, name) in names.iter().enumerate() {
            writeln!(
                f,
                "total_{name:<9} {:.16e} -> {:.16e}",
                self.totals_initial[v], self.totals_final[v]
            )?;
        }
        if let Some(errs) = self.errors {
            for ((_, name), e) in ERROR_COMPONENTS.iter().zip(errs) {
                writeln!(f, "l2_error_{name:<7} {e:.6e}")?;
            }
        }
        Ok(())
    }
}

/// A run in progress: the scheme, the stepper and the current solution.
pub struct Simulation {
    pub config: RunConfig,
    pub integrator: Integrator,
    pub field: ModalField,
    pub t: f64,
    pub steps: usize,
}

impl Simulation {
    pub fn new(config: RunConfig) -> Result<Self> {
        config.validate()?;
        let spec = config.case.spec();
        let mesh = spec.mesh(config.nx, config.ny)?;
        let scheme = Scheme::new(mesh, BasisSpec::new(config.degree)?, spec.gamma);
        let options = StepOptions {
            filter: if config.oe_enabled { Filter::Oe } else { Filter::Off },
            ldf: config.ldf_enabled,
        };
        let integrator = Integrator::new(scheme, options);
        let mut field = init_field(&spec, &integrator.scheme)?;
        if config.ldf_enabled {
            field = integrator.projector.apply(&field);
        }
        Ok(Simulation {
            config,
            integrator,
            field,
            t: 0.0,
            steps: 0,
        })
    }

    pub fn scheme(&self) -> &Scheme {
        &self.integrator.scheme
    }

    /// Takes one step towards `target` (clipped so it lands exactly) and
    /// returns the step size used.
    pub fn step_towards(&mut self, target: f64) -> Result<f64> {
        if self.steps >= self.config.max_steps {
            return Err(MhdError::Config(format!(
                "step limit {} reached at t = {}",
                self.config.max_steps, self.t
            )));
        }
        let dt = compute_dt(self.scheme(), &self.field, self.config.cfl, self.t, target)?;
        self.field = self.integrator.step(&self.field, dt)?;
        self.t = if dt == target - self.t { target } else { self.t + dt };
        self.steps += 1;
        Ok(dt)
    }

    /// Steps until `target`, landing on it exactly.
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        while self.t < target {
            self.step_towards(target)?;
        }
        Ok(())
    }

    pub fn snapshot_path(&self, t: f64) -> Option<PathBuf> {
        self.config.out_dir.as_ref().map(|d| {
            d.join(format!(
                "{}_t{:.6}.{}",
                self.config.case,
                t,
                self.config.format.extension()
            ))
        })
    }

    fn write_outputs(&self, written: &mut Vec<PathBuf>) -> Result<()> {
        if let Some(path) = self.snapshot_path(self.t) {
            write_snapshot(self.scheme(), &self.field, self.t, self.config.format, &path)?;
            written.push(path.clone());
            if self.config.dump_quadrature {
                let qpath = path.with_extension("quad.csv");
                std::fs::write(&qpath, quadrature_csv_string(self.scheme(), &self.field))
                    .map_err(|e| MhdError::io(&qpath, e))?;
                written.push(qpath);
            }
        }
        Ok(())
    }
}

fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| MhdError::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Runs a case to its final time, writing snapshots and a summary.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    with_workers(config.workers, || run_inner(config))?
}

fn run_inner(config: &RunConfig) -> Result<RunSummary> {
    let start = Instant::now();
    let mut sim = Simulation::new(config.clone())?;
    let t_final = config.final_time();
    let totals_initial = conservation_audit(&sim.field);

    let mut stops: Vec<f64> = config.snapshots.clone();
    stops.push(t_final);
    stops.sort_by(|a, b| a.total_cmp(b));
    stops.dedup();

    let mut written = Vec::new();
    for &stop in &stops {
        sim.advance_to(stop)?;
        sim.write_outputs(&mut written)?;
    }

    let scheme = sim.scheme();
    let spec = config.case.spec();
    let errors = spec.exact.map(|exact| {
        ERROR_COMPONENTS.map(|(c, _)| l2_error(scheme, &sim.field, exact, sim.t, c))
    });
    let summary = RunSummary {
        case: config.case,
        nx: config.nx,
        ny: config.ny,
        t: sim.t,
        steps: sim.steps,
        wall_seconds: start.elapsed().as_secs_f64(),
        divergence: divergence_report(scheme, &sim.field),
        totals_initial,
        totals_final: conservation_audit(&sim.field),
        extrema: center_extrema(scheme, &sim.field),
        errors,
        snapshots: written,
    };
    if let Some(dir) = &config.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| MhdError::io(dir, e))?;
        let path = dir.join(format!("{}_summary.txt", config.case));
        std::fs::write(&path, summary.to_string()).map_err(|e| MhdError::io(&path, e))?;
    }
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub errors: [f64; 4],
    /// Orders against the previous row; `None` on the first row.
    pub orders: Option<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub case: Case,
    pub degree: usize,
    pub rows: Vec<ConvergenceRow>,
}

impl fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<10}", "mesh")?;
        for (_, name) in ERROR_COMPONENTS {
            write!(f, " {:>12} {:>6}", format!("{name}_L2"), "order")?;
        }
        writeln!(f)?;
        for row in &self.rows {
            write!(f, "{:<10}", format!("{}x{}", row.n, row.n))?;
            for c in 0..4 {
                let order = row.orders.map(|o| format!("{:.2}", o[c])).unwrap_or_default();
                write!(f, " {:>12} {:>6}", format!("{:.2E}", row.errors[c]), order)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Runs an exact-solution case on `n × n` meshes and tabulates errors and orders.
pub fn convergence_study(base: &RunConfig, meshes: &[usize]) -> Result<ConvergenceReport> {
    if base.case.spec().exact.is_none() {
        return Err(MhdError::Config(format!(
            "case {} has no exact solution",
            base.case
        )));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in meshes {
        let mut cfg = base.clone();
        cfg.nx = n;
        cfg.ny = n;
        cfg.snapshots.clear();
        cfg.out_dir = None;
        let summary = run(&cfg)?;
        let errors = summary.errors.expect("exact solution checked above");
        let orders = match rows.last() {
            Some(prev) => {
                let mut o = [0.0; 4];
                for c in 0..4 {
                    o[c] = convergence_order(&[prev.errors[c], errors[c]])?[0];
                }
                Some(o)
            }
            None => None,
        };
        rows.push(ConvergenceRow { n, errors, orders });
    }
    Ok(ConvergenceReport {
        case: base.case,
        degree: base.degree,
        rows,
    })
}
