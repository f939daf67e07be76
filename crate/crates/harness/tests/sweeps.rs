use encdec_core::noise::ErrorKind;
use encdec_core::observables::ValueKind;
use encdec_core::stats::mean_sem;
use encdec_core::theory::critical_alpha;
use encdec_harness::collapse::{fidelity_curves, run_data_collapse, CollapseOptions};
use encdec_harness::config::linspace;
use encdec_harness::selfavg::{run_selfaveraging_study, FitStatus};
use encdec_harness::sweep::SizeResult;
use encdec_harness::{run_noisy_device, run_quenched_sweep, Backend, ExperimentConfig, ExperimentKind, HarnessError};

fn half_crossing(size: &SizeResult) -> Option<f64> {
    let pts: Vec<(f64, f64)> = size
        .points
        .iter()
        .map(|p| (p.strength, mean_sem(&p.records.iter().map(|r| r.parts.fidelity).collect::<Vec<_>>()).0))
        .collect();
    pts.windows(2)
        .find(|w| w[0].1 >= 0.5 && w[1].1 < 0.5)
        .map(|w| w[0].0 + (w[0].1 - 0.5) / (w[0].1 - w[1].1) * (w[1].0 - w[0].0))
}

#[test]
fn zero_rotation_recovers_input_exactly() {
    let config = ExperimentConfig {
        experiment_id: "zero".into(),
        sizes: vec![4, 8],
        grid: vec![0.0],
        realizations: 30,
        observables: vec![ValueKind::Entanglement, ValueKind::Thermodynamic],
        q: vec![2.0],
        ..Default::default()
    };
    let sweep = run_quenched_sweep(&config).unwrap();
    for size in &sweep.sizes {
        let point = &size.points[0];
        let f: Vec<f64> = point.records.iter().map(|r| r.parts.fidelity).collect();
        let (m, s) = mean_sem(&f);
        assert!((m - 1.0).abs() < 1e-12 && s < 1e-12, "N={} mean {m} sem {s}", size.n);
        for r in &point.records {
            assert!(r.values.iter().all(|v| v.value.abs() < 1e-9), "{:?}", r.values);
        }
    }
}

#[test]
fn noiseless_device_matches_clean_sweep() {
    let grid = vec![0.4, 1.0, 1.4];
    let device = ExperimentConfig {
        experiment_id: "dev".into(),
        kind: ExperimentKind::NoisyDevice,
        model: ErrorKind::DeviceNoise,
        epsilon: Some(0.0),
        sizes: vec![6],
        grid: grid.clone(),
        realizations: 20,
        trajectories: 3,
        backend: Backend::Trajectory,
        ..Default::default()
    };
    let clean = ExperimentConfig {
        experiment_id: "clean".into(),
        sizes: vec![6],
        grid,
        realizations: 20,
        depth_factor: Some(1),
        ..Default::default()
    };
    let a = run_noisy_device(&device).unwrap();
    let b = run_quenched_sweep(&clean).unwrap();
    for (pa, pb) in a.sizes[0].points.iter().zip(&b.sizes[0].points) {
        for (ra, rb) in pa.records.iter().zip(&pb.records) {
            assert_eq!(ra.seed, rb.seed);
            assert!((ra.parts.fidelity - rb.parts.fidelity).abs() < 1e-12);
        }
    }
}

#[test]
fn device_density_and_trajectory_agree_without_noise() {
    let base = ExperimentConfig {
        experiment_id: "dev0".into(),
        kind: ExperimentKind::NoisyDevice,
        model: ErrorKind::DeviceNoise,
        epsilon: Some(0.0),
        sizes: vec![4],
        grid: vec![0.9],
        realizations: 10,
        trajectories: 2,
        backend: Backend::Trajectory,
        ..Default::default()
    };
    let a = run_noisy_device(&base).unwrap();
    let b = run_noisy_device(&ExperimentConfig { backend: Backend::Density, ..base }).unwrap();
    for (ra, rb) in a.sizes[0].points[0].records.iter().zip(&b.sizes[0].points[0].records) {
        assert!((ra.parts.fidelity - rb.parts.fidelity).abs() < 1e-10);
    }
}

#[test]
fn device_epsilon_out_of_range_is_rejected() {
    let config = ExperimentConfig {
        kind: ExperimentKind::NoisyDevice,
        model: ErrorKind::DeviceNoise,
        epsilon: Some(1.5),
        grid: vec![0.5],
        backend: Backend::Trajectory,
        ..Default::default()
    };
    assert!(matches!(run_noisy_device(&config), Err(HarnessError::Config(_))));
}

#[test]
fn lower_rate_shifts_transition_to_stronger_noise() {
    let grid = linspace(0.9, 1.5, 13).unwrap();
    let config = |rate: f64| ExperimentConfig {
        experiment_id: format!("rate{rate}"),
        sizes: vec![12],
        rate: Some(rate),
        grid: grid.clone(),
        realizations: 150,
        ..Default::default()
    };
    let half = half_crossing(&run_quenched_sweep(&config(0.5)).unwrap().sizes[0]).unwrap();
    let quarter = half_crossing(&run_quenched_sweep(&config(0.25)).unwrap().sizes[0]).unwrap();
    assert!(quarter > half + 0.05, "r=1/4 crossing {quarter} vs r=1/2 {half}");
    assert!((quarter - critical_alpha(0.25).unwrap().value).abs() < 0.1);
}

#[test]
fn noiseless_selfaveraging_fit_is_degenerate() {
    let config = ExperimentConfig {
        experiment_id: "sa0".into(),
        kind: ExperimentKind::Selfavg,
        sizes: vec![4, 6, 8, 10],
        grid: vec![0.0],
        realizations: 40,
        ..Default::default()
    };
    let (_, report) = run_selfaveraging_study(&config).unwrap();
    let fit = report.fit("fidelity", 0.0).unwrap();
    assert_eq!(fit.status, FitStatus::Degenerate);
    assert!(fit.rate.is_none());
    assert!(report.differences.iter().all(|d| d.difference.abs() < 1e-14));
}

#[test]
fn selfaveraging_needs_four_sizes() {
    let config = ExperimentConfig {
        kind: ExperimentKind::Selfavg,
        sizes: vec![4, 6, 8],
        grid: vec![1.0],
        realizations: 40,
        ..Default::default()
    };
    assert!(matches!(run_selfaveraging_study(&config), Err(HarnessError::Config(_))));
}

#[test]
fn coherent_monte_carlo_collapses_with_unit_exponent() {
    let config = ExperimentConfig {
        experiment_id: "mc_collapse".into(),
        sizes: vec![8, 10, 12, 14],
        grid: linspace(0.9, 1.4, 11).unwrap(),
        realizations: 200,
        ..Default::default()
    };
    let sweep = run_quenched_sweep(&config).unwrap();
    let options = CollapseOptions { nu_range: (0.3, 4.0), critical_range: (0.95, 1.35), bootstrap: 50, seed: 2 };
    let fit = run_data_collapse(&fidelity_curves(&sweep), &options).unwrap();
    assert!((fit.nu - 1.0).abs() <= 0.3, "nu = {}", fit.nu);
    assert!(fit.nu_ci.0 <= fit.nu && fit.nu <= fit.nu_ci.1);
}
