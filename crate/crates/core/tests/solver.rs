use mhd_dg::cases::init_field;
use mhd_dg::dg::residual;
use mhd_dg::diagnostics::{conservation_audit, divergence_report};
use mhd_dg::driver::{run, Simulation};
use mhd_dg::oe::all_deltas;
use mhd_dg::output::csv_string;
use mhd_dg::physics::NVAR;
use mhd_dg::time::compute_dt;
use mhd_dg::{BasisSpec, Case, RunConfig, Scheme, Stage};

fn config(case: Case, n: usize) -> RunConfig {
    let mut c = RunConfig::new(case);
    c.nx = n;
    c.ny = n;
    c
}

fn vortex_scheme(n: usize) -> (Scheme, mhd_dg::ModalField) {
    let spec = Case::Vortex.spec();
    let scheme = Scheme::new(spec.mesh(n, n).unwrap(), BasisSpec::new(2).unwrap(), spec.gamma);
    let f = init_field(&spec, &scheme).unwrap();
    (scheme, f)
}

#[test]
fn vortex_residual_has_zero_total_rate() {
    let (scheme, f) = vortex_scheme(16);
    let r = residual(&scheme, &f, Stage::Rk(1)).unwrap();
    let area = scheme.mesh.cell_area();
    for v in 0..NVAR {
        let total: f64 = r.coeffs.iter().map(|c| c[0][v] * area).sum();
        assert!(total.abs() <= 1e-12, "component {v}: {total}");
    }
}

#[test]
fn one_vortex_step_conserves_totals() {
    let mut sim = Simulation::new(config(Case::Vortex, 16)).unwrap();
    let before = conservation_audit(&sim.field);
    sim.step_towards(1.0).unwrap();
    let after = conservation_audit(&sim.field);
    for v in 0..NVAR {
        assert!((after[v] - before[v]).abs() <= 1e-12 * before[v].abs().max(1.0), "component {v}");
    }
}

#[test]
fn damping_vanishes_under_refinement_for_smooth_data() {
    let measure = |n: usize| {
        let (scheme, f) = vortex_scheme(n);
        let dt = compute_dt(&scheme, &f, 0.15, 0.0, f64::INFINITY).unwrap();
        let d = all_deltas(&scheme, &f).unwrap();
        d.iter().flat_map(|x| x.iter()).fold(0.0f64, |a, &b| a.max(b)) * dt
    };
    let (a, b, c) = (measure(16), measure(32), measure(64));
    assert!(a > b && b > c);
    // at least first order in h
    assert!(a / b >= 2.0 && b / c >= 2.0, "{a} {b} {c}");
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let fields: Vec<_> = [1, 3]
        .iter()
        .map(|&w| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(w).build().unwrap();
            pool.install(|| {
                let mut sim = Simulation::new(config(Case::OrszagTang, 12)).unwrap();
                for _ in 0..5 {
                    sim.step_towards(f64::INFINITY).unwrap();
                }
                (csv_string(sim.scheme(), &sim.field), sim.field)
            })
        })
        .collect();
    assert_eq!(fields[0].1.coeffs, fields[1].1.coeffs);
    assert_eq!(fields[0].0, fields[1].0);
}

#[test]
fn snapshots_land_on_requested_times() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(Case::OrszagTang, 8);
    cfg.t_final = Some(0.05);
    cfg.snapshots = vec![0.0, 0.0123, 0.05];
    cfg.out_dir = Some(dir.path().to_path_buf());
    let summary = run(&cfg).unwrap();
    assert_eq!(summary.t, 0.05);
    let names: Vec<String> = summary
        .snapshots
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(
        names,
        ["orszag_tang_t0.000000.csv", "orszag_tang_t0.012300.csv", "orszag_tang_t0.050000.csv"]
    );
    for p in &summary.snapshots {
        assert_eq!(std::fs::read_to_string(p).unwrap().lines().count(), 65);
    }
    let text = std::fs::read_to_string(dir.path().join("orszag_tang_summary.txt")).unwrap();
    assert!(text.contains("divB_max"));
    assert!(text.contains("total_rho"));
}

#[test]
fn loop_initial_field_is_divergence_free_inside_cells() {
    let sim = Simulation::new(config(Case::Loop, 32)).unwrap();
    let d = divergence_report(sim.scheme(), &sim.field);
    assert!(d.max <= 1e-12 * d.max_field.max(1e-300), "{d:?}");
}

#[test]
fn orszag_tang_smoke_run() {
    let mut cfg = config(Case::OrszagTang, 32);
    cfg.t_final = Some(0.5);
    let s = run(&cfg).unwrap();
    assert!(s.extrema.finite && s.extrema.rho_min > 0.0 && s.extrema.p_min > 0.0);
}

#[test]
fn vortex_error_decreases_with_refinement() {
    let mut errs = Vec::new();
    for n in [8, 16] {
        let mut cfg = config(Case::Vortex, n);
        cfg.t_final = Some(0.5);
        errs.push(run(&cfg).unwrap().errors.unwrap());
    }
    for c in 0..4 {
        assert!(errs[1][c] < errs[0][c]);
    }
}

#[test]
fn step_limit_is_reported() {
    let mut cfg = config(Case::Vortex, 8);
    cfg.t_final = Some(1.0);
    cfg.max_steps = 3;
    let e = run(&cfg).unwrap_err();
    assert!(e.to_string().contains("step limit"));
}
