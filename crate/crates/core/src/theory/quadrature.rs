//! Adaptive Gauss-Kronrod (7/15) quadrature and bisection root finding.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const MAX_DEPTH: u32 = 60;

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> (f64, f64) {
    let (v, e) = kronrod(f, a, b);
    if e <= tol || depth >= MAX_DEPTH || (b - a) < 1e-14 * (1.0 + a.abs()) {
        return (v, e);
    }
    let m = 0.5 * (a + b);
    let (v1, e1) = adapt(f, a, m, 0.5 * tol, depth + 1);
    let (v2, e2) = adapt(f, m, b, 0.5 * tol, depth + 1);
    (v1 + v2, e1 + e2)
}

/// Integral of `f` over `[a, b]` to absolute tolerance `tol`. The integrand
/// is never evaluated at the endpoints, so integrable endpoint
/// singularities are fine.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = adapt(&f, a, b, tol, 0);
    if !v.is_finite() || e > 100.0 * tol {
        return Err(Error::QuadratureFailed(e));
    }
    Ok(v)
}

/// Integral over `[a, b]` split at the given interior points.
pub fn integrate_split<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, splits: &[f64], tol: f64) -> Result<f64> {
    let mut pts = vec![a];
    pts.extend(splits.iter().copied().filter(|&s| s > a && s < b));
    pts.push(b);
    let share = tol / (pts.len() - 1) as f64;
    pts.windows(2).map(|w| integrate(&f, w[0], w[1], share)).sum()
}

/// Root of a continuous `f` with a sign change on `[lo, hi]`, by bisection to width `xtol`.
pub fn bisect<F: FnMut(f64) -> Result<f64>>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoRoot { lo, hi });
    }
    let mut sa = fa.signum();
    while b - a > xtol {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == sa {
            a = m;
            sa = fm.signum();
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x * x * x - 2.0 * x, 0.0, 3.0, 1e-12).unwrap();
        assert!((v - (81.0 / 4.0 - 9.0)).abs() < 1e-12);
    }

    #[test]
    fn log_singularity() {
        // int_0^1 ln x dx = -1
        let v = integrate(|x: f64| x.ln(), 0.0, 1.0, 1e-10).unwrap();
        assert!((v + 1.0).abs() < 1e-9);
    }

    #[test]
    fn bisection_finds_sqrt_two() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-13).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
        assert!(bisect(|x| Ok(x * x + 1.0), 0.0, 2.0, 1e-6).is_err());
    }
}
