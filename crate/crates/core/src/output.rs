//! Snapshot writers: cell-center CSV tables and legacy ASCII VTK.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::config::OutputFormat;
use crate::error::{MhdError, Result};
use crate::field::{eval_with, ModalField, Scheme};
use crate::physics::{BX, BY, NVAR};

pub const CSV_HEADER: &str = "x,y,rho,ux,uy,uz,p,Bx,By,Bz,mach,pmag,divB";

const FIELDS: [&str; 11] = ["rho", "ux", "uy", "uz", "p", "Bx", "By", "Bz", "mach", "pmag", "divB"];

/// Derived quantities at the center of `cell`, in `FIELDS` order. No
/// admissibility check: a negative pressure shows up as is.
fn center_values(scheme: &Scheme, field: &ModalField, cell: usize) -> [f64; 11] {
    let t = &scheme.tables;
    let nb = t.spec.n_basis();
    let u = field.eval(cell, 0.0, 0.0);
    point_values(scheme, &u, &t.spec.eval_grad(0.0, 0.0, t.hx, t.hy), &field.coeffs[cell], nb)
}

fn point_values(
    scheme: &Scheme,
    u: &[f64; NVAR],
    grad: &[[f64; 2]; 6],
    coeffs: &crate::field::Coeffs,
    nb: usize,
) -> [f64; 11] {
    let rho = u[0];
    let vel = [u[1] / rho, u[2] / rho, u[3] / rho];
    let b = [u[5], u[6], u[7]];
    let pmag = 0.5 * (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
    let kinetic = 0.5 * rho * (vel[0] * vel[0] + vel[1] * vel[1] + vel[2] * vel[2]);
    let p = (scheme.gamma - 1.0) * (u[4] - kinetic - pmag);
    let c = (scheme.gamma * p / rho).sqrt();
    let speed = (vel[0] * vel[0] + vel[1] * vel[1] + vel[2] * vel[2]).sqrt();
    let div: f64 = (0..nb)
        .map(|k| coeffs[k][BX] * grad[k][0] + coeffs[k][BY] * grad[k][1])
        .sum();
    [rho, vel[0], vel[1], vel[2], p, b[0], b[1], b[2], speed / c, pmag, div]
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// One row per cell, row-major (x fastest), 17 significant digits.
pub fn csv_string(scheme: &Scheme, field: &ModalField) -> String {
    let mut s = String::with_capacity(field.n_cells() * 300);
    s.push_str(CSV_HEADER);
    s.push('\n');
    for cell in 0..field.n_cells() {
        let (x, y) = scheme.mesh.center(cell);
        let vals = center_values(scheme, field, cell);
        s.push_str(&num(x));
        s.push(',');
        s.push_str(&num(y));
        for v in vals {
            s.push(',');
            s.push_str(&num(v));
        }
        s.push('\n');
    }
    s
}

/// Legacy ASCII `STRUCTURED_POINTS` with every field as `CELL_DATA` scalars.
pub fn vtk_string(scheme: &Scheme, field: &ModalField, t: f64, title: &str) -> String {
    let m = &scheme.mesh;
    let mut s = String::new();
    let _ = writeln!(s, "# vtk DataFile Version 3.0");
    let _ = writeln!(s, "{title} t={t}");
    let _ = writeln!(s, "ASCII");
    let _ = writeln!(s, "DATASET STRUCTURED_POINTS");
    let _ = writeln!(s, "DIMENSIONS {} {} 1", m.nx + 1, m.ny + 1);
    let _ = writeln!(s, "ORIGIN {} {} 0", num(m.x_lo), num(m.y_lo));
    let _ = writeln!(s, "SPACING {} {} 1", num(m.hx), num(m.hy));
    let _ = writeln!(s, "CELL_DATA {}", m.n_cells());
    let values: Vec<[f64; 11]> = (0..field.n_cells())
        .map(|c| center_values(scheme, field, c))
        .collect();
    for (k, name) in FIELDS.iter().enumerate() {
        let _ = writeln!(s, "SCALARS {name} double 1");
        let _ = writeln!(s, "LOOKUP_TABLE default");
        for v in &values {
            let _ = writeln!(s, "{}", num(v[k]));
        }
    }
    s
}

/// Values at every volume quadrature point, for debugging.
pub fn quadrature_csv_string(scheme: &Scheme, field: &ModalField) -> String {
    let t = &scheme.tables;
    let nb = t.spec.n_basis();
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for (cell, c) in field.coeffs.iter().enumerate() {
        for p in &t.volume {
            let (x, y) = scheme.mesh.to_physical(cell, p.xr, p.yr);
            let u = eval_with(c, &p.phi, nb);
            let vals = point_values(scheme, &u, &p.grad, c, nb);
            let _ = write!(s, "{},{}", num(x), num(y));
            for v in vals {
                let _ = write!(s, ",{}", num(v));
            }
            s.push('\n');
        }
    }
    s
}

pub fn write_snapshot(
    scheme: &Scheme,
    field: &ModalField,
    t: f64,
    format: OutputFormat,
    path: &Path,
) -> Result<()> {
    let text = match format {
        OutputFormat::Csv => csv_string(scheme, field),
        OutputFormat::Vtk => vtk_string(scheme, field, t, "mhd-dg snapshot"),
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| MhdError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| MhdError::io(path, e))
}
