use serde::{Deserialize, Serialize};

use super::closed_form::{annealed_fidelity_coherent, annealed_fidelity_depolarizing, Strengths};
use crate::error::{Error, Result};
use crate::noise::ErrorKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalSource {
    ClosedForm,
    TranscendentalSolve,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub kind: ErrorKind,
    pub rate: f64,
    pub value: f64,
    pub source: CriticalSource,
}

pub(crate) fn check_rate(r: f64) -> Result<()> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { name: "r", value: r, domain: "[0, 1]" })
    }
}

/// Coherent threshold `2 arccos(2^((r-1)/2))`: where `2^N cos^(2N)(alpha/2)`
/// stops outgrowing `2^k` as `N -> inf` at fixed `r = k/N`.
pub fn critical_alpha(r: f64) -> Result<CriticalPoint> {
    check_rate(r)?;
    Ok(CriticalPoint {
        kind: ErrorKind::Coherent,
        rate: r,
        value: 2.0 * (0.5 * (r - 1.0)).exp2().acos(),
        source: CriticalSource::ClosedForm,
    })
}

/// The alternative threshold `2 arccos(2^(-r/2))`. Agrees with
/// [`critical_alpha`] only at `r = 1/2`; kept for comparison.
pub fn critical_alpha_printed(r: f64) -> Result<CriticalPoint> {
    check_rate(r)?;
    Ok(CriticalPoint {
        kind: ErrorKind::Coherent,
        rate: r,
        value: 2.0 * (-0.5 * r).exp2().acos(),
        source: CriticalSource::ClosedForm,
    })
}

/// Depolarizing threshold `4 (1 - 2^(r-1)) / 3`.
pub fn critical_lambda(r: f64) -> Result<CriticalPoint> {
    check_rate(r)?;
    Ok(CriticalPoint {
        kind: ErrorKind::Depolarizing,
        rate: r,
        value: 4.0 * (1.0 - (r - 1.0).exp2()) / 3.0,
        source: CriticalSource::ClosedForm,
    })
}

/// Strength at which the annealed fidelity of an `N`-qubit register with
/// `k = round(rN)` crosses 1/2, by bisection.
pub fn half_fidelity_point(kind: ErrorKind, n: usize, r: f64) -> Result<f64> {
    check_rate(r)?;
    let k = ((r * n as f64).round() as usize).max(1);
    let (lo, hi) = match kind {
        ErrorKind::Coherent => (0.0, std::f64::consts::FRAC_PI_2),
        ErrorKind::Depolarizing => (0.0, 1.0),
        _ => return Err(Error::InvalidLayout(format!("no closed-form fidelity for {}", kind.name()))),
    };
    let f = |s: f64| -> Result<f64> {
        let v = match kind {
            ErrorKind::Coherent => annealed_fidelity_coherent(n, k, Strengths::Uniform(s))?,
            _ => annealed_fidelity_depolarizing(n, k, Strengths::Uniform(s))?,
        };
        Ok(v - 0.5)
    };
    let (mut a, mut b) = (lo, hi);
    if f(a)? < 0.0 || f(b)? > 0.0 {
        return Err(Error::NoRoot { lo, hi });
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if f(m)? > 0.0 {
            a = m;
        } else {
            b = m;
        }
        if b - a < 1e-14 {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_rate_values() {
        // 2 arccos(2^(-1/4)) evaluated independently
        assert!((critical_alpha(0.5).unwrap().value - 1.143_717_740).abs() < 1e-8);
        assert!((critical_lambda(0.5).unwrap().value - 0.390524).abs() < 1e-6);
        let a = critical_alpha(0.5).unwrap().value;
        assert!((critical_alpha_printed(0.5).unwrap().value - a).abs() < 1e-14);
    }

    #[test]
    fn rate_endpoints() {
        assert_eq!(critical_lambda(1.0).unwrap().value, 0.0);
        assert!((critical_lambda(0.0).unwrap().value - 2.0 / 3.0).abs() < 1e-15);
        assert!((critical_alpha(0.0).unwrap().value - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(critical_alpha(1.5).is_err());
    }

    #[test]
    fn large_register_crossing_matches_threshold() {
        let a = half_fidelity_point(ErrorKind::Coherent, 2048, 0.5).unwrap();
        assert!((a - critical_alpha(0.5).unwrap().value).abs() < 1e-3);
        let l = half_fidelity_point(ErrorKind::Depolarizing, 2048, 0.5).unwrap();
        assert!((l - critical_lambda(0.5).unwrap().value).abs() < 1e-3);
    }
}
