//! Small statistics toolkit: compensated sums, standard errors, jackknife
//! and straight-line fits.

use crate::error::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub fn sum(xs: &[f64]) -> f64 {
    let mut s = CompensatedSum::default();
    xs.iter().for_each(|&x| s.add(x));
    s.value()
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    sum(xs) / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let mut s = CompensatedSum::default();
    xs.iter().for_each(|&x| s.add((x - m) * (x - m)));
    s.value() / (n - 1) as f64
}

/// Unbiased sample covariance.
pub fn covariance(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return 0.0;
    }
    let (mx, my) = (mean(&xs[..n]), mean(&ys[..n]));
    let mut s = CompensatedSum::default();
    xs.iter().zip(ys).for_each(|(&x, &y)| s.add((x - mx) * (y - my)));
    s.value() / (n - 1) as f64
}

/// Standard error of the mean.
pub fn sem(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Mean and standard error.
pub fn mean_sem(xs: &[f64]) -> (f64, f64) {
    (mean(xs), sem(xs))
}

/// Delete-one jackknife result.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jackknife {
    /// Statistic of the full sample.
    pub estimate: f64,
    /// `n * full - (n - 1) * mean(leave-one-out)`, free of the `O(1/n)` bias
    /// of nonlinear statistics such as ratios of means.
    pub corrected: f64,
    pub error: f64,
}

/// Delete-one jackknife of a statistic of paired samples. The statistic is
/// handed the column sums over the retained samples and the retained count,
/// so each leave-one-out value costs O(columns) once the totals are known.
pub fn jackknife_from_sums<F>(columns: &[&[f64]], stat: F) -> Result<Jackknife>
where
    F: Fn(&[f64], usize) -> f64,
{
    let n = columns.first().map_or(0, |c| c.len());
    if n < 2 {
        return Err(Error::InsufficientSample { needed: 2, got: n });
    }
    if columns.iter().any(|c| c.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: columns.iter().map(|c| c.len()).min().unwrap_or(0) });
    }
    let totals: Vec<f64> = columns.iter().map(|c| sum(c)).collect();
    let full = stat(&totals, n);
    let mut loo = vec![0.0; columns.len()];
    let mut vals = Vec::with_capacity(n);
    for i in 0..n {
        for (slot, (t, c)) in loo.iter_mut().zip(totals.iter().zip(columns)) {
            *slot = t - c[i];
        }
        vals.push(stat(&loo, n - 1));
    }
    let m = mean(&vals);
    let mut s = CompensatedSum::default();
    vals.iter().for_each(|&v| s.add((v - m) * (v - m)));
    let error = ((n - 1) as f64 / n as f64 * s.value()).sqrt();
    let corrected = n as f64 * full - (n - 1) as f64 * m;
    Ok(Jackknife { estimate: full, corrected, error })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least-squares straight line.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return Err(Error::InsufficientSample { needed: 2, got: n.min(ys.len()) });
    }
    let (mx, my) = (mean(xs), mean(ys));
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientSample { needed: 2, got: 1 });
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LineFit { slope, intercept: my - slope * mx, r_squared })
}
