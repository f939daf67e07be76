use encdec_core::noise::ErrorKind;
use encdec_core::theory::{
    annealed_fidelity_coherent, annealed_fidelity_depolarizing, codespace_slopes, critical_alpha, critical_alpha_printed,
    critical_lambda,
    half_fidelity_point, ScalingFunction, Strengths,
};

fn coherent(n: usize, a: f64) -> f64 {
    annealed_fidelity_coherent(n, n / 2, Strengths::Uniform(a)).unwrap()
}

fn depolarizing(n: usize, l: f64) -> f64 {
    annealed_fidelity_depolarizing(n, n / 2, Strengths::Uniform(l)).unwrap()
}

#[test]
fn step_limit_of_the_annealed_fidelity() {
    let ac = critical_alpha(0.5).unwrap().value;
    let lc = critical_lambda(0.5).unwrap().value;
    let curves: [(&dyn Fn(usize, f64) -> f64, f64); 2] = [(&coherent, ac), (&depolarizing, lc)];
    for (f, c) in curves {
        let mut below = 0.0;
        let mut above = 1.0;
        for j in 6..=12 {
            let n = 1usize << j;
            let (lo, hi) = (f(n, c - 0.05), f(n, c + 0.05));
            assert!(lo >= below && hi <= above, "N = {n}: {lo} {hi}");
            (below, above) = (lo, hi);
            assert!((f(n, c) - 0.5).abs() < 1e-6, "N = {n}");
        }
        assert!(below > 1.0 - 1e-6 && above < 1e-6);
    }
}

#[test]
fn scaling_forms_are_one_half_at_the_critical_point() {
    let logistic = ScalingFunction::logistic_depolarizing(0.5).unwrap();
    let erf = ScalingFunction::erf(0.7332, Some(0.8864), Some(0.3272)).unwrap();
    for n in [8, 64, 512] {
        assert!((logistic.eval(n, critical_lambda(0.5).unwrap().value) - 0.5).abs() < 1e-15);
        assert!((erf.eval(n, 0.7332) - 0.5).abs() < 1e-15);
    }
}

#[test]
fn logistic_form_tracks_the_exact_depolarizing_curve() {
    let lc = critical_lambda(0.5).unwrap().value;
    let logistic = ScalingFunction::logistic_depolarizing(0.5).unwrap();
    // 1 / (1 + exp(256 * 0.01 / 0.94281))
    assert!((logistic.eval(256, lc + 0.01) - 0.0622).abs() < 5e-4);
    let worst = (0..=100)
        .map(|i| lc - 0.05 + 0.001 * i as f64)
        .map(|l| (logistic.eval(256, l) - depolarizing(256, l)).abs())
        .fold(0.0, f64::max);
    assert!(worst < 0.01, "max deviation {worst}");
}

#[test]
fn codespace_entanglement_breakpoint_tends_to_threshold() {
    let bp = codespace_slopes(1e9, 0.5, 0.1).unwrap().entanglement_breakpoint;
    assert!((bp - critical_alpha(0.5).unwrap().value).abs() < 1e-6);
    // away from r = 1/2 the limit is the printed threshold form
    for r in [0.25, 0.75] {
        let bp = codespace_slopes(1e9, r, 0.1).unwrap().entanglement_breakpoint;
        assert!((bp - critical_alpha_printed(r).unwrap().value).abs() < 1e-6, "r = {r}");
    }
}

#[test]
fn finite_size_half_point_approaches_threshold() {
    for kind in [ErrorKind::Coherent, ErrorKind::Depolarizing] {
        let limit = match kind {
            ErrorKind::Coherent => critical_alpha(0.25).unwrap().value,
            _ => critical_lambda(0.25).unwrap().value,
        };
        let gaps: Vec<f64> =
            [16, 64, 256, 1024].iter().map(|&n| (half_fidelity_point(kind, n, 0.25).unwrap() - limit).abs()).collect();
        assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "{kind:?}: {gaps:?}");
        assert!(gaps[3] < 1e-2);
    }
}
