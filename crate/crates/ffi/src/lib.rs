//! C ABI for the `mhd-dg` solver.
//!
//! A solver is an opaque `MhdSolver*` created by [`mhd_solver_create`] and
//! released with [`mhd_solver_free`]. Every fallible call returns an
//! [`MhdStatus`]; on failure [`mhd_last_error`] describes the most recent
//! error on the calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use mhd_dg::diagnostics::{conservation_audit, divergence_report};
use mhd_dg::driver::Simulation;
use mhd_dg::output::write_snapshot;
use mhd_dg::physics::NVAR;
use mhd_dg::{Case, MhdError, OutputFormat, RunConfig};

/// Result codes of the C API.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MhdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownCase = 3,
    NonPositiveDensity = 4,
    NegativePressure = 5,
    NonFiniteResidual = 6,
    InadmissibleState = 7,
    Io = 8,
    Panic = 9,
}

/// Snapshot file formats.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MhdFormat {
    Csv = 0,
    Vtk = 1,
}

/// Opaque solver handle.
pub struct MhdSolver {
    sim: Simulation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &MhdError) -> MhdStatus {
    match e {
        MhdError::NonPositiveDensity { .. } => MhdStatus::NonPositiveDensity,
        MhdError::NegativePressure { .. } => MhdStatus::NegativePressure,
        MhdError::NonFiniteResidual { .. } | MhdError::NonFiniteSpeed => MhdStatus::NonFiniteResidual,
        MhdError::InadmissibleState { .. } | MhdError::InadmissibleInitialData { .. } => {
            MhdStatus::InadmissibleState
        }
        MhdError::UnknownCase(_) => MhdStatus::UnknownCase,
        MhdError::Io { .. } => MhdStatus::Io,
        MhdError::NonPositiveError(_) | MhdError::Config(_) => MhdStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (MhdStatus, String)>) -> MhdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MhdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MhdStatus::Panic
        }
    }
}

fn lift(e: MhdError) -> (MhdStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (MhdStatus, String) {
    (MhdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn solver_mut<'a>(s: *mut MhdSolver) -> Result<&'a mut MhdSolver, (MhdStatus, String)> {
    s.as_mut().ok_or_else(|| null("solver"))
}

unsafe fn solver_ref<'a>(s: *const MhdSolver) -> Result<&'a MhdSolver, (MhdStatus, String)> {
    s.as_ref().ok_or_else(|| null("solver"))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (MhdStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (MhdStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Creates a solver for `case` on an `nx × ny` mesh with degree `k`.
///
/// # Safety
/// `case_name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mhd_solver_create(
    case_name: *const c_char,
    nx: usize,
    ny: usize,
    k: usize,
    cfl: f64,
    oe: bool,
    ldf: bool,
    out: *mut *mut MhdSolver,
) -> MhdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let case: Case = c_str(case_name, "case name")?.parse().map_err(lift)?;
        let mut config = RunConfig::new(case);
        config.nx = nx;
        config.ny = ny;
        config.degree = k;
        config.cfl = cfl;
        config.oe_enabled = oe;
        config.ldf_enabled = ldf;
        let sim = Simulation::new(config).map_err(lift)?;
        *out = Box::into_raw(Box::new(MhdSolver { sim }));
        Ok(())
    })
}

/// Releases a solver. Null is ignored.
///
/// # Safety
/// `solver` must come from [`mhd_solver_create`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mhd_solver_free(solver: *mut MhdSolver) {
    if !solver.is_null() {
        drop(Box::from_raw(solver));
    }
}

/// Advances the solution to time `t`, landing on it exactly.
///
/// # Safety
/// `solver` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mhd_solver_advance_to(solver: *mut MhdSolver, t: f64) -> MhdStatus {
    guard(|| {
        let s = solver_mut(solver)?;
        if !t.is_finite() {
            return Err((MhdStatus::InvalidArgument, format!("target time {t} is not finite")));
        }
        s.sim.advance_to(t).map_err(lift)
    })
}

/// Current time and number of steps taken so far.
///
/// # Safety
/// `solver` must be a live handle; `t` and `steps` may be null.
#[no_mangle]
pub unsafe extern "C" fn mhd_solver_time(solver: *const MhdSolver, t: *mut f64, steps: *mut usize) -> MhdStatus {
    guard(|| {
        let s = solver_ref(solver)?;
        if let Some(t) = t.as_mut() {
            *t = s.sim.t;
        }
        if let Some(n) = steps.as_mut() {
            *n = s.sim.steps;
        }
        Ok(())
    })
}

/// Writes the 8 domain integrals `[ρ, ρu_x, ρu_y, ρu_z, E, B_x, B_y, B_z]`.
///
/// # Safety
/// `solver` must be a live handle and `totals` point to 8 doubles.
#[no_mangle]
pub unsafe extern "C" fn mhd_solver_conservation(solver: *const MhdSolver, totals: *mut f64) -> MhdStatus {
    guard(|| {
        let s = solver_ref(solver)?;
        if totals.is_null() {
            return Err(null("totals"));
        }
        let audit = conservation_audit(&s.sim.field);
        std::slice::from_raw_parts_mut(totals, NVAR).copy_from_slice(&audit);
        Ok(())
    })
}

/// Maximum and area-weighted L² norm of `∇·B` inside cells, plus `max |B|`.
///
/// # Safety
/// `solver` must be a live handle; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn mhd_solver_divergence(
    solver: *const MhdSolver,
    max: *mut f64,
    l2: *mut f64,
    max_field: *mut f64,
) -> MhdStatus {
    guard(|| {
        let s = solver_ref(solver)?;
        let r = divergence_report(s.sim.scheme(), &s.sim.field);
        for (p, v) in [(max, r.max), (l2, r.l2), (max_field, r.max_field)] {
            if let Some(p) = p.as_mut() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// Cell average of the 8 conserved variables in cell `(i, j)`.
///
/// # Safety
/// `solver` must be a live handle and `out` point to 8 doubles.
#[no_mangle]
pub unsafe extern "C" fn mhd_solver_cell_average(
    solver: *const MhdSolver,
    i: usize,
    j: usize,
    out: *mut f64,
) -> MhdStatus {
    guard(|| {
        let s = solver_ref(solver)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mesh = &s.sim.scheme().mesh;
        if i >= mesh.nx || j >= mesh.ny {
            return Err((
                MhdStatus::InvalidArgument,
                format!("cell ({i}, {j}) outside {}x{} mesh", mesh.nx, mesh.ny),
            ));
        }
        let avg = s.sim.field.average(mesh.index(i, j));
        std::slice::from_raw_parts_mut(out, NVAR).copy_from_slice(&avg);
        Ok(())
    })
}

/// Writes a cell-centre snapshot of the current state to `path`.
///
/// # Safety
/// `solver` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mhd_solver_write_snapshot(
    solver: *const MhdSolver,
    path: *const c_char,
    format: MhdFormat,
) -> MhdStatus {
    guard(|| {
        let s = solver_ref(solver)?;
        let path = Path::new(c_str(path, "path")?);
        let format = match format {
            MhdFormat::Csv => OutputFormat::Csv,
            MhdFormat::Vtk => OutputFormat::Vtk,
        };
        write_snapshot(s.sim.scheme(), &s.sim.field, s.sim.t, format, path).map_err(lift)
    })
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mhd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
