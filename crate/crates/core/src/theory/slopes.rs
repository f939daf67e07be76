//! Large-`N` prefactors of the Renyi entropies. Each is zero below the
//! critical strength, grows in between, and saturates at one beyond a
//! `q`-dependent breakpoint.

use std::f64::consts::PI;

use super::critical::{check_rate, critical_alpha, critical_lambda};
use crate::error::{Error, Result};

/// `q / (q - 1)`, with its `q -> inf` limit.
fn index_factor(q: f64) -> Result<f64> {
    if q.is_nan() || q <= 1.0 {
        return Err(Error::UnsupportedRenyiIndex(q));
    }
    Ok(if q.is_infinite() { 1.0 } else { q / (q - 1.0) })
}

/// `1 / q`, zero at `q = inf`.
fn inverse_index(q: f64) -> f64 {
    if q.is_infinite() {
        0.0
    } else {
        1.0 / q
    }
}

fn check_angle(alpha: f64) -> Result<()> {
    if (0.0..PI).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { name: "alpha", value: alpha, domain: "[0, pi)" })
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { name: "lambda", value: lambda, domain: "[0, 1]" })
    }
}

fn check_rate_open(r: f64) -> Result<()> {
    check_rate(r)?;
    if r == 0.0 {
        return Err(Error::OutOfDomain { name: "r", value: r, domain: "(0, 1]" });
    }
    Ok(())
}

fn check_fraction(r: f64, r1: f64) -> Result<()> {
    if !(r1 > 0.0 && r1 <= r / 2.0 + 1e-15) {
        return Err(Error::OutOfDomain { name: "r1", value: r1, domain: "(0, r/2]" });
    }
    Ok(())
}

fn angle_from_log2_cos(l: f64) -> f64 {
    2.0 * l.exp2().min(1.0).acos()
}

/// Strength where the entanglement prefactor of `X1` (fraction `r1`) reaches one.
pub fn entanglement_breakpoint(q: f64, r: f64, r1: f64) -> Result<f64> {
    index_factor(q)?;
    check_rate_open(r)?;
    check_fraction(r, r1)?;
    let iq = inverse_index(q);
    // log2 cos(alpha/2) = (r - r1 - 1)/2 + r1/(2q)
    Ok(angle_from_log2_cos(0.5 * (r - r1 - 1.0) + 0.5 * r1 * iq))
}

/// Entanglement prefactor `a_q` of the decoded logical state: entropy of
/// `X1` over `|X1|` at large `N`, with `r1 = |X1| / N`.
pub fn slope_entanglement_logical(q: f64, r: f64, r1: f64, alpha: f64) -> Result<f64> {
    let f = index_factor(q)?;
    check_rate_open(r)?;
    check_fraction(r, r1)?;
    check_angle(alpha)?;
    let lo = critical_alpha(r)?.value;
    let hi = entanglement_breakpoint(q, r, r1)?;
    if alpha <= lo {
        return Ok(0.0);
    }
    if alpha >= hi {
        return Ok(1.0);
    }
    let l = (alpha / 2.0).cos().log2();
    Ok((-2.0 * f * (l + 0.5 * (1.0 - r)) / r1).clamp(0.0, 1.0))
}

/// Depolarizing strength where the thermodynamic prefactor reaches one.
pub fn thermo_breakpoint(q: f64, r: f64) -> Result<f64> {
    index_factor(q)?;
    check_rate_open(r)?;
    Ok((4.0 - (1.0 + r * inverse_index(q)).exp2()) / 3.0)
}

/// Thermodynamic-entropy prefactor of the decoded logical state (entropy over `k`).
pub fn slope_thermo_logical(q: f64, r: f64, lambda: f64) -> Result<f64> {
    let f = index_factor(q)?;
    check_rate_open(r)?;
    check_lambda(lambda)?;
    let lo = critical_lambda(r)?.value;
    let hi = thermo_breakpoint(q, r)?;
    if lambda <= lo {
        return Ok(0.0);
    }
    if lambda >= hi {
        return Ok(1.0);
    }
    Ok((f * (r + 1.0 - (4.0 - 3.0 * lambda).log2()) / r).clamp(0.0, 1.0))
}

/// Strength where the logical participation dimension reaches one.
pub fn participation_breakpoint(q: f64, r: f64) -> Result<f64> {
    index_factor(q)?;
    check_rate_open(r)?;
    // log2 cos(alpha/2) = -(1 - r/q)/2
    Ok(angle_from_log2_cos(-0.5 * (1.0 - r * inverse_index(q))))
}

/// Multifractal dimension `D_q` of the decoded logical state in the computational basis.
pub fn dimension_participation_logical(q: f64, r: f64, alpha: f64) -> Result<f64> {
    let f = index_factor(q)?;
    check_rate_open(r)?;
    check_angle(alpha)?;
    let lo = critical_alpha(r)?.value;
    let hi = participation_breakpoint(q, r)?;
    if alpha <= lo {
        return Ok(0.0);
    }
    if alpha >= hi {
        return Ok(1.0);
    }
    let l2 = 2.0 * (alpha / 2.0).cos().log2();
    Ok((f * ((r - 1.0) - l2) / r).clamp(0.0, 1.0))
}

/// Prefactors of the state before post-selection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CodespaceSlopes {
    /// Entanglement of the logical register with the ancillas, over `k`.
    pub entanglement: f64,
    /// Participation entropy of the full register, over `N`.
    pub participation: f64,
    pub entanglement_breakpoint: f64,
    pub participation_breakpoint: f64,
}

pub fn codespace_slopes(q: f64, r: f64, alpha: f64) -> Result<CodespaceSlopes> {
    let f = index_factor(q)?;
    check_rate_open(r)?;
    check_angle(alpha)?;
    let iq = inverse_index(q);
    let l = (alpha / 2.0).cos().log2();
    let ent_bp = angle_from_log2_cos(0.5 * r * iq - 0.5 * r);
    // the participation breakpoint is where the D_q expression itself hits one
    let part_bp = angle_from_log2_cos(-0.5 * (1.0 - iq));
    let ent = if alpha >= ent_bp { 1.0 } else { (-2.0 * f * l / r).clamp(0.0, 1.0) };
    let part = if alpha >= part_bp { 1.0 } else { (-2.0 * f * l).clamp(0.0, 1.0) };
    Ok(CodespaceSlopes {
        entanglement: ent,
        participation: part,
        entanglement_breakpoint: ent_bp,
        participation_breakpoint: part_bp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values_at_half_rate() {
        let a = slope_entanglement_logical(2.0, 0.5, 0.25, 1.2).unwrap();
        assert!((a - 0.4315).abs() < 5e-4, "{a}");
        // 2 arccos(2^(-5/16)) evaluated independently
        assert!((entanglement_breakpoint(2.0, 0.5, 0.25).unwrap() - 1.269_415_0).abs() < 1e-6);
        assert!((slope_thermo_logical(2.0, 0.5, 0.5).unwrap() - 0.7123).abs() < 5e-4);
        assert!((thermo_breakpoint(2.0, 0.5).unwrap() - 0.54053).abs() < 1e-5);
        assert!((dimension_participation_logical(2.0, 0.5, 1.2).unwrap() - 0.2158).abs() < 5e-4);
        // 2 arccos(2^(-3/8)) evaluated independently
        assert!((participation_breakpoint(2.0, 0.5).unwrap() - 1.380_441_71).abs() < 1e-7);
    }

    #[test]
    fn codespace_values() {
        let s = codespace_slopes(2.0, 0.5, 0.8).unwrap();
        let direct = -8.0 * (0.4f64).cos().log2();
        assert!((s.entanglement - direct).abs() < 1e-14);
        assert!((s.entanglement - 0.94905).abs() < 1e-4);
        let z = codespace_slopes(3.0, 0.5, 0.0).unwrap();
        assert_eq!((z.entanglement, z.participation), (0.0, 0.0));
    }

    #[test]
    fn codespace_breakpoint_tends_to_threshold() {
        let a = codespace_slopes(1e9, 0.5, 0.1).unwrap().entanglement_breakpoint;
        assert!((a - critical_alpha(0.5).unwrap().value).abs() < 1e-6);
    }

    #[test]
    fn continuity_at_breakpoints() {
        let eps = 2e-15;
        for q in [2.0, 3.0, 5.0, f64::INFINITY] {
            for r in [0.25, 0.5, 0.75] {
                let r1 = r / 4.0;
                let lo = critical_alpha(r).unwrap().value;
                let hi = entanglement_breakpoint(q, r, r1).unwrap();
                assert!(slope_entanglement_logical(q, r, r1, lo + eps).unwrap() < 1e-12);
                assert!(1.0 - slope_entanglement_logical(q, r, r1, hi - eps).unwrap() < 1e-12);
                let hi = participation_breakpoint(q, r).unwrap();
                assert!(dimension_participation_logical(q, r, lo + eps).unwrap() < 1e-12);
                assert!(1.0 - dimension_participation_logical(q, r, hi - eps).unwrap() < 1e-12);
                let lo = critical_lambda(r).unwrap().value;
                let hi = thermo_breakpoint(q, r).unwrap();
                assert!(slope_thermo_logical(q, r, lo + eps).unwrap() < 1e-12);
                assert!(1.0 - slope_thermo_logical(q, r, hi - eps).unwrap() < 1e-12);
                let c = codespace_slopes(q, r, 0.3).unwrap();
                let below = codespace_slopes(q, r, c.entanglement_breakpoint - eps).unwrap();
                assert!(1.0 - below.entanglement < 1e-12);
                let below = codespace_slopes(q, r, c.participation_breakpoint - eps).unwrap();
                assert!(1.0 - below.participation < 1e-12);
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(slope_entanglement_logical(1.0, 0.5, 0.25, 1.0).is_err());
        assert!(slope_entanglement_logical(2.0, 0.5, 0.3, 1.0).is_err());
        assert!(slope_thermo_logical(2.0, 0.5, 1.2).is_err());
        assert!(codespace_slopes(0.5, 0.5, 1.0).is_err());
    }
}
