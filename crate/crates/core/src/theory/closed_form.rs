use crate::error::{Error, Result};

/// Noise strength on each qubit: one shared value or one per site.
#[derive(Clone, Copy, Debug)]
pub enum Strengths<'a> {
    Uniform(f64),
    PerSite(&'a [f64]),
}

fn check_sizes(n: usize, k: usize) -> Result<()> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidLayout(format!("need 1 <= k <= N, got N = {n}, k = {k}")));
    }
    Ok(())
}

/// `log2 prod_i c(s_i)` over the register.
fn log2_product(n: usize, strengths: Strengths<'_>, per_site: impl Fn(f64) -> f64) -> Result<f64> {
    match strengths {
        Strengths::Uniform(s) => Ok(n as f64 * per_site(s).log2()),
        Strengths::PerSite(s) => {
            if s.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: s.len() });
            }
            Ok(s.iter().map(|&x| per_site(x).log2()).sum())
        }
    }
}

/// Annealed fidelity given `log2 c`, where `c` is the per-register
/// attenuation (`prod cos^2(alpha_i/2)` or `prod (1 - 3 lambda_i/4)`).
///
/// With `D = 2^N`, `K = 2^k` and `x = D c` the fidelity is
/// `(D-1)(x+1) / (x(D-K) + DK - 1)`; it is evaluated after dividing through
/// by `D 2^m`, `m = max(log2 x, k)`, so nothing overflows for large `N`.
pub fn annealed_fidelity_from_log2(n: usize, k: usize, log2_c: f64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    let log2_x = nf + log2_c;
    let m = log2_x.max(kf);
    let xp = (log2_x - m).exp2();
    let kp = (kf - m).exp2();
    let num = (1.0 - (-nf).exp2()) * (xp + (-m).exp2());
    let den = xp + kp - (log2_x + kf - nf - m).exp2() - (-nf - m).exp2();
    num / den
}

/// Annealed fidelity under coherent `Z` rotations.
pub fn annealed_fidelity_coherent(n: usize, k: usize, strengths: Strengths<'_>) -> Result<f64> {
    check_sizes(n, k)?;
    let l = log2_product(n, strengths, |a| (a / 2.0).cos().powi(2))?;
    Ok(annealed_fidelity_from_log2(n, k, l))
}

/// Annealed fidelity under depolarizing noise.
pub fn annealed_fidelity_depolarizing(n: usize, k: usize, strengths: Strengths<'_>) -> Result<f64> {
    check_sizes(n, k)?;
    let check = |l: f64| {
        if (0.0..=1.0).contains(&l) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { name: "lambda", value: l, domain: "[0, 1]" })
        }
    };
    match strengths {
        Strengths::Uniform(l) => check(l)?,
        Strengths::PerSite(s) => s.iter().try_for_each(|&l| check(l))?,
    }
    let l = log2_product(n, strengths, |l| 1.0 - 0.75 * l)?;
    Ok(annealed_fidelity_from_log2(n, k, l))
}

/// Haar averages `(E[m2], E[p2])` for attenuation `c`; only sensible for
/// moderate `N` where `4^N` fits comfortably in a double.
pub fn annealed_moments(n: usize, k: usize, c: f64) -> (f64, f64) {
    let d = (n as f64).exp2();
    let kd = (k as f64).exp2();
    let be = (d * d * c - 1.0) / (d * d - 1.0);
    let bs = d * (1.0 - c) / (d * d - 1.0);
    (be + bs, be + kd * bs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(n: usize, k: usize, c: f64) -> f64 {
        let (d, kd) = ((n as f64).exp2(), (k as f64).exp2());
        let x = d * c;
        (d - 1.0) * (x + 1.0) / (x * (d - kd) + d * kd - 1.0)
    }

    #[test]
    fn noiseless_is_perfect() {
        for n in [2, 7, 40, 4096] {
            assert_eq!(annealed_fidelity_coherent(n, n / 2 + 1, Strengths::Uniform(0.0)).unwrap(), 1.0);
            assert_eq!(annealed_fidelity_depolarizing(n, 1, Strengths::Uniform(0.0)).unwrap(), 1.0);
        }
    }

    #[test]
    fn two_qubit_quarter_turn() {
        let f = annealed_fidelity_coherent(2, 1, Strengths::Uniform(std::f64::consts::FRAC_PI_2)).unwrap();
        assert!((f - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn full_depolarization_gives_maximally_mixed() {
        for (n, k) in [(2, 1), (6, 3), (10, 7), (64, 32)] {
            let f = annealed_fidelity_depolarizing(n, k, Strengths::Uniform(1.0)).unwrap();
            let target = (-(k as f64)).exp2();
            assert!(((f - target) / target).abs() < 1e-12);
        }
    }

    #[test]
    fn log_space_matches_direct_formula() {
        for n in 2..=20 {
            for k in 1..=n {
                for &c in &[0.3f64, 0.77, 0.999] {
                    let a = annealed_fidelity_from_log2(n, k, c.log2());
                    assert!((a - direct(n, k, c)).abs() < 1e-12, "N={n} k={k} c={c}");
                }
            }
        }
    }

    #[test]
    fn moments_ratio_is_fidelity() {
        let (m, p) = annealed_moments(6, 3, 0.42);
        assert!((m / p - direct(6, 3, 0.42)).abs() < 1e-14);
    }

    #[test]
    fn per_site_equal_values_reduce_to_uniform() {
        let s = [0.9; 12];
        let a = annealed_fidelity_coherent(12, 6, Strengths::PerSite(&s)).unwrap();
        let b = annealed_fidelity_coherent(12, 6, Strengths::Uniform(0.9)).unwrap();
        assert!((a - b).abs() < 1e-14);
        let a = annealed_fidelity_depolarizing(12, 6, Strengths::PerSite(&[0.2; 12])).unwrap();
        let b = annealed_fidelity_depolarizing(12, 6, Strengths::Uniform(0.2)).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn huge_registers_stay_finite() {
        let f = annealed_fidelity_coherent(100_000, 50_000, Strengths::Uniform(1.0)).unwrap();
        assert!(f.is_finite() && (0.0..=1.0).contains(&f));
    }

    #[test]
    fn bad_sizes_rejected() {
        assert!(annealed_fidelity_coherent(4, 5, Strengths::Uniform(0.1)).is_err());
        assert!(annealed_fidelity_depolarizing(4, 2, Strengths::Uniform(1.5)).is_err());
        assert!(annealed_fidelity_depolarizing(4, 2, Strengths::PerSite(&[0.1; 3])).is_err());
    }
}
