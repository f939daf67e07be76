//! Critical widths of site-disordered noise. With per-site rates
//! `a_i = log2(2 - 3 lambda_i / 2)` or `log2(2 cos^2(alpha_i / 2))`, the
//! annealed fidelity flips where the site average of `a_i` equals `r`; for
//! large `N` that is where `E[a_i](W) = r`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::critical::{check_rate, CriticalPoint, CriticalSource};
use super::quadrature::{bisect, integrate, integrate_split};
use crate::error::{Error, Result};
use crate::noise::ErrorKind;

const QUAD_TOL: f64 = 1e-10;
/// Gaussian tail beyond this many widths is negligible at `QUAD_TOL`.
const GAUSS_CUTOFF: f64 = 14.0;

fn site_rate(kind: ErrorKind, s: f64) -> f64 {
    match kind {
        ErrorKind::DepolarizingDisordered => (2.0 - 1.5 * s).log2(),
        _ => (2.0 * (s / 2.0).cos().powi(2)).log2(),
    }
}

/// `E[g(a_i)]` for disorder width `width`.
fn expect(kind: ErrorKind, width: f64, g: impl Fn(f64) -> f64) -> Result<f64> {
    match kind {
        ErrorKind::DepolarizingDisordered => {
            if !(0.0..=1.0).contains(&width) {
                return Err(Error::OutOfDomain { name: "W", value: width, domain: "[0, 1]" });
            }
            if width == 0.0 {
                return Ok(g(site_rate(kind, 0.0)));
            }
            Ok(integrate(|l| g(site_rate(kind, l)), 0.0, width, QUAD_TOL)? / width)
        }
        ErrorKind::CoherentDisordered => {
            if !(width > 0.0 && width.is_finite()) {
                return Err(Error::OutOfDomain { name: "W", value: width, domain: "(0, inf)" });
            }
            let norm = 2.0 / (width * (2.0 * PI).sqrt());
            let hi = GAUSS_CUTOFF * width;
            // log2 cos^2 diverges at odd multiples of pi
            let splits: Vec<f64> = (0..).map(|m| (2 * m + 1) as f64 * PI).take_while(|&x| x < hi).collect();
            integrate_split(
                |a| norm * (-0.5 * (a / width).powi(2)).exp() * g(site_rate(kind, a)),
                0.0,
                hi,
                &splits,
                QUAD_TOL,
            )
        }
        _ => Err(Error::NotDisordered),
    }
}

/// Mean site rate `E[a_i]` at disorder width `width`.
pub fn disorder_mean_rate(kind: ErrorKind, width: f64) -> Result<f64> {
    expect(kind, width, |a| a)
}

/// Standard deviation of the site rate at disorder width `width`.
pub fn disorder_site_rate_std(kind: ErrorKind, width: f64) -> Result<f64> {
    let m = disorder_mean_rate(kind, width)?;
    let m2 = expect(kind, width, |a| a * a)?;
    Ok((m2 - m * m).max(0.0).sqrt())
}

fn bracket(kind: ErrorKind) -> Result<(f64, f64)> {
    match kind {
        ErrorKind::DepolarizingDisordered => Ok((0.0, 1.0)),
        ErrorKind::CoherentDisordered => Ok((1e-6, 20.0)),
        _ => Err(Error::NotDisordered),
    }
}

/// Disorder width at which `E[a_i] = r`.
pub fn solve_disordered_critical(kind: ErrorKind, r: f64) -> Result<CriticalPoint> {
    check_rate(r)?;
    let (lo, hi) = bracket(kind)?;
    let w = bisect(|w| Ok(disorder_mean_rate(kind, w)? - r), lo, hi, 1e-9)?;
    Ok(CriticalPoint { kind, rate: r, value: w, source: CriticalSource::TranscendentalSolve })
}

/// Constants of the error-function scaling form near the critical width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderConstants {
    pub critical: f64,
    /// `-dE[a_i]/dW` at the critical width.
    pub alpha1: f64,
    /// Standard deviation of `a_i` at the critical width.
    pub amplitude: f64,
}

pub fn disorder_scaling_constants(kind: ErrorKind, r: f64) -> Result<DisorderConstants> {
    let wc = solve_disordered_critical(kind, r)?.value;
    let h = 1e-4 * wc.max(1e-3);
    let slope = (disorder_mean_rate(kind, wc + h)? - disorder_mean_rate(kind, wc - h)?) / (2.0 * h);
    Ok(DisorderConstants { critical: wc, alpha1: -slope, amplitude: disorder_site_rate_std(kind, wc)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depolarizing_mean_has_closed_form() {
        // (1/W) int_0^W log2(2 - 3l/2) dl via the antiderivative of y log2 y
        let w = 0.6;
        let prim = |y: f64| (y * y.log2() - y / std::f64::consts::LN_2) / -1.5;
        let exact = (prim(2.0 - 1.5 * w) - prim(2.0)) / w;
        let v = disorder_mean_rate(ErrorKind::DepolarizingDisordered, w).unwrap();
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn zero_width_limit() {
        assert_eq!(disorder_mean_rate(ErrorKind::DepolarizingDisordered, 0.0).unwrap(), 1.0);
        let v = disorder_mean_rate(ErrorKind::CoherentDisordered, 1e-4).unwrap();
        assert!((v - 1.0).abs() < 1e-6);
    }

    #[test]
    fn critical_widths_at_half_rate() {
        let d = solve_disordered_critical(ErrorKind::DepolarizingDisordered, 0.5).unwrap();
        assert!((d.value - 0.7332).abs() < 5e-4, "{}", d.value);
        let c = solve_disordered_critical(ErrorKind::CoherentDisordered, 0.5).unwrap();
        assert!((c.value - 1.0589).abs() < 5e-3, "{}", c.value);
    }

    #[test]
    fn uniform_kinds_rejected() {
        assert_eq!(solve_disordered_critical(ErrorKind::Coherent, 0.5), Err(Error::NotDisordered));
    }
}
