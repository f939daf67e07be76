//! Finite-size data collapse: find the critical strength and exponent that
//! put all curves `y(s; N)` on one master curve of `x = (s - c) N^(1/nu)`.

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use encdec_core::observables::ValueKind;
use encdec_core::rng::rng_from_seed;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::sweep::SweepResult;
use crate::table::AggregatedRow;

/// One size's curve. `samples[i]` holds the per-realization values behind
/// `y[i]`, aligned by realization across points, when available.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub id: String,
    pub n: usize,
    pub strengths: Vec<f64>,
    pub values: Vec<f64>,
    pub sems: Vec<f64>,
    #[serde(skip)]
    pub samples: Option<Vec<Vec<f64>>>,
}

impl Curve {
    pub fn new(id: impl Into<String>, n: usize, strengths: Vec<f64>, values: Vec<f64>) -> Self {
        let sems = vec![0.0; values.len()];
        Self { id: id.into(), n, strengths, values, sems, samples: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollapseOptions {
    pub nu_range: (f64, f64),
    pub critical_range: (f64, f64),
    pub bootstrap: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollapseFit {
    pub critical: f64,
    pub nu: f64,
    pub residual: f64,
    /// 95% bootstrap interval.
    pub critical_ci: (f64, f64),
    pub nu_ci: (f64, f64),
    pub curve_ids: Vec<String>,
}

/// Interior knots of the least-squares master curve for `points` data points.
fn interior_knots(points: usize) -> usize {
    (points / 8).clamp(2, 8)
}

/// Cubic B-spline basis values at `x` for the clamped knot vector `t`.
fn bspline_row(t: &[f64], x: f64, out: &mut [f64]) {
    let m = out.len();
    let last = t[t.len() - 1];
    // Degree-zero indicator; the right end belongs to the last nonempty span.
    let mut b: Vec<f64> = (0..t.len() - 1)
        .map(|i| {
            let inside = t[i] <= x && (x < t[i + 1] || (x == last && t[i + 1] == last && t[i] < last));
            if inside { 1.0 } else { 0.0 }
        })
        .collect();
    for p in 1..=3 {
        for i in 0..t.len() - 1 - p {
            let left = if t[i + p] > t[i] { (x - t[i]) / (t[i + p] - t[i]) * b[i] } else { 0.0 };
            let right =
                if t[i + p + 1] > t[i + 1] { (t[i + p + 1] - x) / (t[i + p + 1] - t[i + 1]) * b[i + 1] } else { 0.0 };
            b[i] = left + right;
        }
    }
    out.copy_from_slice(&b[..m]);
}

/// Mean squared deviation of `(x, y)` from its least-squares cubic spline
/// with knots at quantiles of `x`.
pub fn spline_residual(points: &mut [(f64, f64)]) -> f64 {
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = points.len();
    let (lo, hi) = (points[0].0, points[n - 1].0);
    if !(hi - lo > 1e-12 * (1.0 + lo.abs().max(hi.abs()))) {
        return f64::INFINITY;
    }
    let inner = interior_knots(n);
    let mut t = vec![lo; 4];
    for j in 1..=inner {
        let pos = j as f64 * (n - 1) as f64 / (inner + 1) as f64;
        let (i, frac) = (pos.floor() as usize, pos.fract());
        let x = points[i].0 + frac * (points[(i + 1).min(n - 1)].0 - points[i].0);
        t.push(x.clamp(lo, hi));
    }
    t.extend([hi; 4]);
    let m = inner + 4;
    let mut a = DMatrix::<f64>::zeros(n, m);
    let mut row = vec![0.0; m];
    for (r, &(x, _)) in points.iter().enumerate() {
        bspline_row(&t, x, &mut row);
        for (c, &v) in row.iter().enumerate() {
            a[(r, c)] = v;
        }
    }
    let y = DVector::from_iterator(n, points.iter().map(|p| p.1));
    let Ok(coef) = a.clone().svd(true, true).solve(&y, 1e-12) else {
        return f64::INFINITY;
    };
    (a * coef - y).norm_squared() / n as f64
}

/// Collapse residual at critical strength `c` and exponent `nu`.
pub fn collapse_residual(curves: &[Curve], c: f64, nu: f64) -> f64 {
    if !(nu > 0.0) {
        return f64::INFINITY;
    }
    let mut pts: Vec<(f64, f64)> = curves
        .iter()
        .flat_map(|cv| {
            let scale = (cv.n as f64).powf(1.0 / nu);
            cv.strengths.iter().zip(&cv.values).map(move |(&s, &y)| ((s - c) * scale, y))
        })
        .collect();
    spline_residual(&mut pts)
}

fn check_curves(curves: &[Curve]) -> Result<()> {
    let mut sizes: Vec<usize> = curves.iter().map(|c| c.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 3 {
        return Err(HarnessError::Analysis(format!("collapse needs at least 3 distinct sizes, got {}", sizes.len())));
    }
    for c in curves {
        if c.strengths.len() != c.values.len() || c.strengths.len() < 2 {
            return Err(HarnessError::Analysis(format!("curve {} needs at least two aligned points", c.id)));
        }
    }
    let lo = curves.iter().map(|c| c.strengths.iter().copied().fold(f64::INFINITY, f64::min)).fold(f64::MIN, f64::max);
    let hi = curves.iter().map(|c| c.strengths.iter().copied().fold(f64::NEG_INFINITY, f64::max)).fold(f64::MAX, f64::min);
    if lo >= hi {
        return Err(HarnessError::Analysis("curve strength windows do not overlap".into()));
    }
    Ok(())
}

struct Objective<'a> {
    curves: &'a [Curve],
    options: &'a CollapseOptions,
}

impl Objective<'_> {
    /// Parameters are `(c, ln nu)`; leaving the search box costs infinity.
    fn eval(&self, p: &[f64]) -> f64 {
        let (c, nu) = (p[0], p[1].exp());
        let (clo, chi) = self.options.critical_range;
        let (nlo, nhi) = self.options.nu_range;
        if c < clo || c > chi || nu < nlo || nu > nhi {
            return f64::INFINITY;
        }
        collapse_residual(self.curves, c, nu)
    }
}

impl CostFunction for Objective<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self.eval(p))
    }
}

const GRID_POINTS: usize = 31;

/// Best `(c, nu, residual)`: coarse grid, then Nelder-Mead from the best cell.
fn optimize(curves: &[Curve], options: &CollapseOptions, start: Option<(f64, f64)>) -> Result<(f64, f64, f64)> {
    let obj = Objective { curves, options };
    let (clo, chi) = options.critical_range;
    let (lnlo, lnhi) = (options.nu_range.0.ln(), options.nu_range.1.ln());
    let (c0, l0) = match start {
        Some((c, nu)) => (c, nu.ln()),
        None => {
            let mut best = (f64::INFINITY, clo, lnlo);
            for i in 0..GRID_POINTS {
                let c = clo + (chi - clo) * i as f64 / (GRID_POINTS - 1) as f64;
                for j in 0..GRID_POINTS {
                    let l = lnlo + (lnhi - lnlo) * j as f64 / (GRID_POINTS - 1) as f64;
                    let r = obj.eval(&[c, l]);
                    if r < best.0 {
                        best = (r, c, l);
                    }
                }
            }
            (best.1, best.2)
        }
    };
    let dc = (chi - clo) / (GRID_POINTS - 1) as f64;
    let dl = (lnhi - lnlo) / (GRID_POINTS - 1) as f64;
    let simplex = vec![vec![c0, l0], vec![(c0 + dc).min(chi), l0], vec![c0, (l0 + dl).min(lnhi)]];
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(1e-12)
        .map_err(|e| HarnessError::Analysis(e.to_string()))?;
    let res = Executor::new(obj, solver)
        .configure(|s| s.max_iters(400))
        .run()
        .map_err(|e| HarnessError::Analysis(e.to_string()))?;
    let best = res.state.best_param.clone().unwrap_or(vec![c0, l0]);
    let r = res.state.best_cost;
    let (c, nu) = (best[0], best[1].exp());
    if !r.is_finite() {
        return Err(HarnessError::Analysis("collapse objective is not finite anywhere in the search box".into()));
    }
    Ok((c, nu, r))
}

fn percentile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let (i, f) = (pos.floor() as usize, pos.fract());
    sorted[i] + f * (sorted[(i + 1).min(sorted.len() - 1)] - sorted[i])
}

/// One bootstrap replicate of the curves: realizations resampled with
/// replacement when available, Gaussian perturbation by the standard error otherwise.
fn resample<R: Rng>(curves: &[Curve], rng: &mut R) -> Vec<Curve> {
    curves
        .iter()
        .map(|c| {
            let values = match &c.samples {
                Some(samples) if !samples.is_empty() && !samples[0].is_empty() => {
                    let m = samples[0].len();
                    let idx: Vec<usize> = (0..m).map(|_| rng.random_range(0..m)).collect();
                    samples.iter().map(|s| idx.iter().map(|&i| s[i]).sum::<f64>() / m as f64).collect()
                }
                _ => c.values.iter().zip(&c.sems).map(|(&y, &e)| y + e * rng.sample::<f64, _>(StandardNormal)).collect(),
            };
            Curve { values, samples: None, ..c.clone() }
        })
        .collect()
}

pub fn run_data_collapse(curves: &[Curve], options: &CollapseOptions) -> Result<CollapseFit> {
    check_curves(curves)?;
    let (nlo, nhi) = options.nu_range;
    if !(nlo > 0.0 && nhi > nlo) || !(options.critical_range.1 > options.critical_range.0) {
        return Err(HarnessError::Analysis("invalid collapse search ranges".into()));
    }
    let (c, nu, residual) = optimize(curves, options, None)?;
    let mut rng = rng_from_seed(options.seed);
    let (mut cs, mut nus) = (Vec::new(), Vec::new());
    for _ in 0..options.bootstrap {
        let replica = resample(curves, &mut rng);
        if let Ok((bc, bn, _)) = optimize(&replica, options, Some((c, nu))) {
            cs.push(bc);
            nus.push(bn);
        }
    }
    let interval = |v: &mut Vec<f64>, est: f64| {
        if v.is_empty() {
            return (est, est);
        }
        v.sort_by(f64::total_cmp);
        (percentile(v, 0.025), percentile(v, 0.975))
    };
    Ok(CollapseFit {
        critical: c,
        nu,
        residual,
        critical_ci: interval(&mut cs, c),
        nu_ci: interval(&mut nus, nu),
        curve_ids: curves.iter().map(|c| c.id.clone()).collect(),
    })
}

/// Best collapse residual at fixed `nu`, minimizing over the critical strength.
pub fn best_residual_at_nu(curves: &[Curve], nu: f64, critical_range: (f64, f64)) -> Result<(f64, f64)> {
    check_curves(curves)?;
    let (lo, hi) = critical_range;
    let f = |c: f64| collapse_residual(curves, c, nu);
    let mut best = (f64::INFINITY, lo);
    for i in 0..=200 {
        let c = lo + (hi - lo) * i as f64 / 200.0;
        let r = f(c);
        if r < best.0 {
            best = (r, c);
        }
    }
    let step = (hi - lo) / 200.0;
    let (mut a, mut b) = ((best.1 - step).max(lo), (best.1 + step).min(hi));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let (x1, x2) = (b - g * (b - a), a + g * (b - a));
        if f(x1) < f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    let c = 0.5 * (a + b);
    Ok((c, f(c).min(best.0)))
}

/// Fidelity-like curves per size from aggregated rows.
pub fn curves_from_rows(rows: &[AggregatedRow], kind: ValueKind, q: Option<f64>) -> Vec<Curve> {
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
        .into_iter()
        .filter_map(|n| {
            let sel: Vec<&AggregatedRow> =
                rows.iter().filter(|r| r.n == n && r.kind == kind.name() && r.q == q).collect();
            (!sel.is_empty()).then(|| Curve {
                id: format!("{}_N{n}", sel[0].experiment_id),
                n,
                strengths: sel.iter().map(|r| r.strength).collect(),
                values: sel.iter().map(|r| r.mean).collect(),
                sems: sel.iter().map(|r| r.sem).collect(),
                samples: None,
            })
        })
        .collect()
}

/// Fidelity curves per size with per-realization samples for the bootstrap.
pub fn fidelity_curves(sweep: &SweepResult) -> Vec<Curve> {
    sweep
        .sizes
        .iter()
        .map(|size| {
            let samples: Vec<Vec<f64>> =
                size.points.iter().map(|p| p.records.iter().map(|r| r.parts.fidelity).collect()).collect();
            let aligned = samples.windows(2).all(|w| w[0].len() == w[1].len());
            Curve {
                id: format!("{}_N{}", sweep.config.experiment_id, size.n),
                n: size.n,
                strengths: size.points.iter().map(|p| p.strength).collect(),
                values: samples.iter().map(|s| encdec_core::stats::mean(s)).collect(),
                sems: samples.iter().map(|s| encdec_core::stats::sem(s)).collect(),
                samples: aligned.then_some(samples),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spline_reproduces_a_cubic() {
        let mut pts: Vec<(f64, f64)> = (0..40).map(|i| {
            let x = i as f64 / 39.0;
            (x, x * x * x - 0.5 * x)
        }).collect();
        assert!(spline_residual(&mut pts) < 1e-20);
    }

    #[test]
    fn bspline_partition_of_unity() {
        let t = [0.0, 0.0, 0.0, 0.0, 0.3, 0.7, 1.0, 1.0, 1.0, 1.0];
        let mut row = [0.0; 6];
        for x in [0.0, 0.1, 0.3, 0.55, 0.99, 1.0] {
            bspline_row(&t, x, &mut row);
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-14, "{x}");
        }
    }

    #[test]
    fn single_size_and_disjoint_windows_are_rejected() {
        let a = Curve::new("a", 8, vec![0.0, 1.0], vec![1.0, 0.0]);
        assert!(check_curves(&[a.clone(), a.clone(), a.clone()]).is_err());
        let b = Curve::new("b", 10, vec![2.0, 3.0], vec![1.0, 0.0]);
        let c = Curve::new("c", 12, vec![0.0, 1.0], vec![1.0, 0.0]);
        assert!(check_curves(&[a, b, c]).is_err());
    }
}
