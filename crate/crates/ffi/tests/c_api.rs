use std::ffi::{CStr, CString};
use std::ptr;

use mhd_dg_ffi::*;

fn create(case: &str, n: usize, oe: bool, ldf: bool) -> *mut MhdSolver {
    let name = CString::new(case).unwrap();
    let mut s = ptr::null_mut();
    let st = unsafe { mhd_solver_create(name.as_ptr(), n, n, 2, 0.15, oe, ldf, &mut s) };
    assert_eq!(st, MhdStatus::Ok);
    assert!(!s.is_null());
    s
}

fn last_error() -> String {
    let p = mhd_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn advance_and_query() {
    let s = create("vortex", 8, true, true);
    let mut before = [0.0; 8];
    let mut after = [0.0; 8];
    unsafe {
        assert_eq!(mhd_solver_conservation(s, before.as_mut_ptr()), MhdStatus::Ok);
        assert_eq!(mhd_solver_advance_to(s, 0.25), MhdStatus::Ok);
        let (mut t, mut steps) = (0.0, 0usize);
        assert_eq!(mhd_solver_time(s, &mut t, &mut steps), MhdStatus::Ok);
        assert_eq!(t, 0.25);
        assert!(steps > 0);
        assert_eq!(mhd_solver_conservation(s, after.as_mut_ptr()), MhdStatus::Ok);
        let (mut dmax, mut dl2, mut bmax) = (1.0, 1.0, 0.0);
        assert_eq!(mhd_solver_divergence(s, &mut dmax, &mut dl2, &mut bmax), MhdStatus::Ok);
        assert!(dmax <= 1e-12 * bmax);
        let mut avg = [0.0; 8];
        assert_eq!(mhd_solver_cell_average(s, 3, 4, avg.as_mut_ptr()), MhdStatus::Ok);
        assert!(avg[0] > 0.0);
        mhd_solver_free(s);
    }
    for v in [0, 1, 2, 4] {
        assert!((after[v] - before[v]).abs() <= 1e-11 * before[v].abs());
    }
}

#[test]
fn error_codes() {
    let name = CString::new("nope").unwrap();
    let mut s = ptr::null_mut();
    let st = unsafe { mhd_solver_create(name.as_ptr(), 8, 8, 2, 0.15, true, true, &mut s) };
    assert_eq!(st, MhdStatus::UnknownCase);
    assert!(s.is_null());
    assert!(last_error().contains("nope"));

    let name = CString::new("vortex").unwrap();
    let st = unsafe { mhd_solver_create(name.as_ptr(), 8, 8, 3, 0.15, true, true, &mut s) };
    assert_eq!(st, MhdStatus::InvalidArgument);

    let st = unsafe { mhd_solver_create(ptr::null(), 8, 8, 2, 0.15, true, true, &mut s) };
    assert_eq!(st, MhdStatus::NullPointer);

    unsafe {
        assert_eq!(mhd_solver_advance_to(ptr::null_mut(), 1.0), MhdStatus::NullPointer);
        let s = create("vortex", 4, true, true);
        let mut avg = [0.0; 8];
        assert_eq!(mhd_solver_cell_average(s, 4, 0, avg.as_mut_ptr()), MhdStatus::InvalidArgument);
        assert_eq!(mhd_solver_advance_to(s, f64::NAN), MhdStatus::InvalidArgument);
        mhd_solver_free(s);
        mhd_solver_free(ptr::null_mut());
    }
}

#[test]
fn snapshot_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ot.csv");
    let s = create("orszag_tang", 6, true, true);
    let p = CString::new(path.to_str().unwrap()).unwrap();
    unsafe {
        assert_eq!(mhd_solver_write_snapshot(s, p.as_ptr(), MhdFormat::Csv), MhdStatus::Ok);
        let bad = CString::new(dir.path().join("f/x").to_str().unwrap()).unwrap();
        std::fs::write(dir.path().join("f"), "file, not a directory").unwrap();
        assert_eq!(mhd_solver_write_snapshot(s, bad.as_ptr(), MhdFormat::Vtk), MhdStatus::Io);
        mhd_solver_free(s);
    }
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1 + 36);
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/mhd_dg.h")).unwrap();
    for f in [
        "mhd_solver_create",
        "mhd_solver_free",
        "mhd_solver_advance_to",
        "mhd_solver_time",
        "mhd_solver_conservation",
        "mhd_solver_divergence",
        "mhd_solver_cell_average",
        "mhd_solver_write_snapshot",
        "mhd_last_error",
        "typedef struct MhdSolver MhdSolver",
    ] {
        assert!(header.contains(f), "{f} missing from header");
    }
}
