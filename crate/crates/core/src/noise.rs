//! Error models, their Kraus representations, and channel application.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{MixedState, PureState, QuantumState};

pub type Mat2 = [[C64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// Same angle `alpha` of `exp(-i alpha Z / 2)` on every qubit.
    Coherent,
    /// Angles drawn per qubit from `N(0, W^2)`.
    CoherentDisordered,
    /// Same depolarizing probability `lambda` on every qubit.
    Depolarizing,
    /// Probabilities drawn per qubit from `U[0, W]`.
    DepolarizingDisordered,
    /// Layered device model: depolarizing `epsilon` at randomly masked sites
    /// after each brick-wall layer plus a coherent layer of angle `alpha`.
    DeviceNoise,
}

impl ErrorKind {
    pub fn name(self) -> &'static str {
        match self {
            ErrorKind::Coherent => "coherent",
            ErrorKind::CoherentDisordered => "coherent_disordered",
            ErrorKind::Depolarizing => "depolarizing",
            ErrorKind::DepolarizingDisordered => "depolarizing_disordered",
            ErrorKind::DeviceNoise => "device_noise",
        }
    }

    pub fn is_coherent(self) -> bool {
        matches!(self, ErrorKind::Coherent | ErrorKind::CoherentDisordered)
    }

    pub fn is_disordered(self) -> bool {
        matches!(self, ErrorKind::CoherentDisordered | ErrorKind::DepolarizingDisordered)
    }

    /// Validate a strength parameter (angle, probability or disorder width).
    pub fn check_strength(self, value: f64) -> Result<()> {
        let ok = match self {
            ErrorKind::Coherent | ErrorKind::DeviceNoise => (0.0..=std::f64::consts::FRAC_PI_2).contains(&value),
            ErrorKind::Depolarizing | ErrorKind::DepolarizingDisordered => (0.0..=1.0).contains(&value),
            ErrorKind::CoherentDisordered => value > 0.0 && value.is_finite(),
        };
        if ok {
            return Ok(());
        }
        let (name, domain) = match self {
            ErrorKind::Coherent | ErrorKind::DeviceNoise => ("alpha", "[0, pi/2]"),
            ErrorKind::Depolarizing => ("lambda", "[0, 1]"),
            ErrorKind::DepolarizingDisordered => ("W", "[0, 1]"),
            ErrorKind::CoherentDisordered => ("W", "(0, inf)"),
        };
        Err(Error::OutOfDomain { name, value, domain })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    kind: ErrorKind,
    /// `alpha`, `lambda`, or the disorder width `W`.
    strength: f64,
    epsilon: Option<f64>,
    sites: Option<Vec<f64>>,
}

impl ErrorModel {
    pub fn new(kind: ErrorKind, strength: f64) -> Result<Self> {
        if kind == ErrorKind::DeviceNoise {
            return Self::device_noise(0.0, strength);
        }
        kind.check_strength(strength)?;
        Ok(Self { kind, strength, epsilon: None, sites: None })
    }

    pub fn coherent(alpha: f64) -> Result<Self> {
        Self::new(ErrorKind::Coherent, alpha)
    }

    pub fn depolarizing(lambda: f64) -> Result<Self> {
        Self::new(ErrorKind::Depolarizing, lambda)
    }

    pub fn coherent_disordered(width: f64) -> Result<Self> {
        Self::new(ErrorKind::CoherentDisordered, width)
    }

    pub fn depolarizing_disordered(width: f64) -> Result<Self> {
        Self::new(ErrorKind::DepolarizingDisordered, width)
    }

    pub fn device_noise(epsilon: f64, alpha: f64) -> Result<Self> {
        ErrorKind::DeviceNoise.check_strength(alpha)?;
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::OutOfDomain { name: "epsilon", value: epsilon, domain: "[0, 1]" });
        }
        Ok(Self { kind: ErrorKind::DeviceNoise, strength: alpha, epsilon: Some(epsilon), sites: None })
    }

    pub fn kind(&self) -> ErrorKind {
        self.kind
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    pub fn disorder_width(&self) -> Option<f64> {
        self.kind.is_disordered().then_some(self.strength)
    }

    /// Realized per-site values, if this is a disorder instance.
    pub fn realized_sites(&self) -> Option<&[f64]> {
        self.sites.as_deref()
    }

    /// Draw one disorder realization over `n` qubits.
    pub fn instantiate_disorder<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<ErrorModel> {
        let w = self.strength;
        let sites = match self.kind {
            ErrorKind::DepolarizingDisordered => (0..n).map(|_| w * rng.random::<f64>()).collect(),
            ErrorKind::CoherentDisordered => (0..n).map(|_| w * rng.sample::<f64, _>(StandardNormal)).collect(),
            _ => return Err(Error::NotDisordered),
        };
        Ok(ErrorModel { sites: Some(sites), ..self.clone() })
    }

    /// Per-site angle or probability acting on each of `n` qubits. For the
    /// device model these are the coherent angles.
    pub fn site_strengths(&self, n: usize) -> Result<Vec<f64>> {
        if self.kind.is_disordered() {
            let s = self.sites.as_ref().ok_or(Error::MissingSiteStrengths)?;
            if s.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: s.len() });
            }
            return Ok(s.clone());
        }
        Ok(vec![self.strength; n])
    }

    pub fn kraus_set(&self, n: usize) -> Result<KrausSet> {
        let s = self.site_strengths(n)?;
        let sites = match self.kind {
            ErrorKind::Coherent | ErrorKind::CoherentDisordered | ErrorKind::DeviceNoise => {
                s.iter().map(|&a| vec![z_rotation(a)]).collect()
            }
            ErrorKind::Depolarizing | ErrorKind::DepolarizingDisordered => {
                s.iter().map(|&l| depolarizing_kraus(l)).collect()
            }
        };
        Ok(KrausSet { sites })
    }
}

/// One list of single-qubit Kraus operators per site.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    pub sites: Vec<Vec<Mat2>>,
}

impl KrausSet {
    /// Largest `|sum_mu K^dag K - I|` entry over all sites.
    pub fn completeness_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for ops in &self.sites {
            for r in 0..2 {
                for c in 0..2 {
                    let v: C64 = ops.iter().map(|k| k[0][r].conj() * k[0][c] + k[1][r].conj() * k[1][c]).sum();
                    let target = if r == c { 1.0 } else { 0.0 };
                    dev = dev.max((v - target).norm());
                }
            }
        }
        dev
    }

    /// Apply `rho -> sum K rho K^dag` site by site.
    pub fn apply(&self, rho: &MixedState) -> Result<MixedState> {
        let n = rho.layout().n_qubits();
        if self.sites.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.sites.len() });
        }
        let mut cur = rho.clone();
        for (q, ops) in self.sites.iter().enumerate() {
            let mut acc: Option<MixedState> = None;
            for k in ops {
                let mut term = cur.clone();
                crate::state::kernel::apply_one(term.data_mut(), k, q + n);
                let kc = k.map(|row| row.map(|z| z.conj()));
                crate::state::kernel::apply_one(term.data_mut(), &kc, q);
                acc = Some(match acc {
                    None => term,
                    Some(mut a) => {
                        a.data_mut().iter_mut().zip(term.data()).for_each(|(x, y)| *x += y);
                        a
                    }
                });
            }
            cur = acc.unwrap_or(cur);
        }
        Ok(cur)
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn z_rotation(alpha: f64) -> Mat2 {
    [[C64::from_polar(1.0, -alpha / 2.0), c(0.0, 0.0)], [c(0.0, 0.0), C64::from_polar(1.0, alpha / 2.0)]]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Mat2 {
        match self {
            Pauli::I => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
            Pauli::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            Pauli::Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
            Pauli::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        }
    }

    fn scaled(self, s: f64) -> Mat2 {
        self.matrix().map(|row| row.map(|z| z * s))
    }
}

pub fn depolarizing_kraus(lambda: f64) -> Vec<Mat2> {
    let (a, b) = ((1.0 - 0.75 * lambda).sqrt(), (0.25 * lambda).sqrt());
    vec![Pauli::I.scaled(a), Pauli::X.scaled(b), Pauli::Y.scaled(b), Pauli::Z.scaled(b)]
}

/// Diagonal of `prod_i exp(-i alpha_i Z_i / 2)`: bit 0 picks up `exp(-i alpha/2)`.
pub fn coherent_phases(angles: &[f64]) -> Vec<C64> {
    let n = angles.len();
    let base: f64 = -0.5 * angles.iter().sum::<f64>();
    let mut theta = vec![0.0f64; 1 << n];
    theta[0] = base;
    for (q, &a) in angles.iter().enumerate() {
        let m = 1usize << q;
        for x in 0..m {
            theta[x | m] = theta[x] + a;
        }
    }
    theta.into_iter().map(|t| C64::from_polar(1.0, t)).collect()
}

fn check_sites(n: usize, values: &[f64]) -> Result<()> {
    if values.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: values.len() });
    }
    Ok(())
}

pub fn apply_coherent_layer(state: &mut PureState, angles: &[f64]) -> Result<()> {
    check_sites(state.layout().n_qubits(), angles)?;
    let phases = coherent_phases(angles);
    state.amplitudes_mut().iter_mut().zip(&phases).for_each(|(a, p)| *a *= p);
    Ok(())
}

pub fn apply_coherent_layer_mixed(rho: &mut MixedState, angles: &[f64]) -> Result<()> {
    check_sites(rho.layout().n_qubits(), angles)?;
    rho.apply_diagonal(&coherent_phases(angles))
}

/// Independent depolarizing channel with probability `rates[i]` on qubit `i`.
pub fn apply_depolarizing_layer(rho: &mut MixedState, rates: &[f64]) -> Result<()> {
    check_sites(rho.layout().n_qubits(), rates)?;
    for (q, &l) in rates.iter().enumerate() {
        if !(0.0..=1.0).contains(&l) {
            return Err(Error::OutOfDomain { name: "lambda", value: l, domain: "[0, 1]" });
        }
        if l > 0.0 {
            rho.depolarize_qubit(q, l)?;
        }
    }
    Ok(())
}

pub fn apply_pauli(state: &mut PureState, q: usize, p: Pauli) -> Result<()> {
    state.layout().check_qubit(q)?;
    let amps = state.amplitudes_mut();
    let m = 1usize << q;
    match p {
        Pauli::I => {}
        Pauli::X => (0..amps.len()).filter(|i| i & m == 0).for_each(|i| amps.swap(i, i | m)),
        Pauli::Z => amps.iter_mut().enumerate().filter(|(i, _)| i & m != 0).for_each(|(_, a)| *a = -*a),
        Pauli::Y => {
            for i in (0..amps.len()).filter(|i| i & m == 0) {
                let (a0, a1) = (amps[i], amps[i | m]);
                amps[i] = c(0.0, -1.0) * a1;
                amps[i | m] = c(0.0, 1.0) * a0;
            }
        }
    }
    Ok(())
}

/// Probability that a depolarizing site with rate `lambda` applies a non-identity Pauli.
pub fn error_probability(lambda: f64) -> f64 {
    0.75 * lambda
}

/// Probability that no site applies a non-identity Pauli.
pub fn no_error_probability(rates: &[f64]) -> f64 {
    rates.iter().map(|&l| 1.0 - error_probability(l)).product()
}

fn random_error_pauli<R: Rng + ?Sized>(rng: &mut R) -> Pauli {
    match rng.random_range(0..3) {
        0 => Pauli::X,
        1 => Pauli::Y,
        _ => Pauli::Z,
    }
}

/// Unconditioned Pauli trajectory: identity with probability `1 - 3l/4`,
/// otherwise X, Y, Z with `l/4` each.
pub fn sample_pauli_trajectory<R: Rng + ?Sized>(rng: &mut R, rates: &[f64]) -> Vec<Pauli> {
    rates
        .iter()
        .map(|&l| if rng.random::<f64>() < error_probability(l) { random_error_pauli(rng) } else { Pauli::I })
        .collect()
}

/// Trajectory conditioned on at least one error, returned as `(site, Pauli)`
/// events in site order. The first error site is drawn from its exact
/// conditional law; later sites are then independent.
pub fn sample_conditional_errors<R: Rng + ?Sized>(rng: &mut R, rates: &[f64]) -> Option<Vec<(usize, Pauli)>> {
    let mut weights = Vec::with_capacity(rates.len());
    let mut survive = 1.0;
    for &l in rates {
        let p = error_probability(l);
        weights.push(survive * p);
        survive *= 1.0 - p;
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let mut u = rng.random::<f64>() * total;
    let mut first = weights.len() - 1;
    for (s, &w) in weights.iter().enumerate() {
        if u < w {
            first = s;
            break;
        }
        u -= w;
    }
    while weights[first] == 0.0 {
        first -= 1;
    }
    let mut events = vec![(first, random_error_pauli(rng))];
    for (s, &l) in rates.iter().enumerate().skip(first + 1) {
        if rng.random::<f64>() < error_probability(l) {
            events.push((s, random_error_pauli(rng)));
        }
    }
    Some(events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::SystemLayout;
    use crate::rng::rng_from_seed;

    #[test]
    fn kraus_sets_are_complete() {
        let m = ErrorModel::depolarizing(0.3).unwrap();
        assert!(m.kraus_set(3).unwrap().completeness_deviation() < 1e-14);
        let m = ErrorModel::coherent(0.7).unwrap();
        assert!(m.kraus_set(3).unwrap().completeness_deviation() < 1e-14);
    }

    #[test]
    fn domains_enforced() {
        assert!(ErrorModel::coherent(2.0).is_err());
        assert!(ErrorModel::depolarizing(-0.1).is_err());
        assert!(ErrorModel::coherent_disordered(0.0).is_err());
        assert!(ErrorModel::depolarizing_disordered(0.0).is_ok());
        assert!(ErrorModel::device_noise(1.5, 0.1).is_err());
    }

    #[test]
    fn disorder_needs_disordered_kind() {
        let mut rng = rng_from_seed(1);
        let m = ErrorModel::coherent(0.1).unwrap();
        assert_eq!(m.instantiate_disorder(4, &mut rng), Err(Error::NotDisordered));
        let d = ErrorModel::depolarizing_disordered(0.4).unwrap();
        assert_eq!(d.site_strengths(4), Err(Error::MissingSiteStrengths));
        let r = d.instantiate_disorder(4, &mut rng).unwrap();
        assert!(r.site_strengths(4).unwrap().iter().all(|&l| (0.0..0.4).contains(&l)));
    }

    #[test]
    fn zero_width_disorder_is_noiseless() {
        let mut rng = rng_from_seed(3);
        let d = ErrorModel::depolarizing_disordered(0.0).unwrap().instantiate_disorder(5, &mut rng).unwrap();
        assert_eq!(d.site_strengths(5).unwrap(), vec![0.0; 5]);
    }

    #[test]
    fn coherent_phase_convention() {
        let p = coherent_phases(&[0.4]);
        assert!((p[0] - C64::from_polar(1.0, -0.2)).norm() < 1e-15);
        assert!((p[1] - C64::from_polar(1.0, 0.2)).norm() < 1e-15);
    }

    #[test]
    fn paulis_match_matrices() {
        let l = SystemLayout::bare(2).unwrap();
        let amps: Vec<C64> = (0..4).map(|i| c(i as f64 + 1.0, 0.5 * i as f64)).collect();
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            let mut a = PureState::from_amplitudes(l.clone(), amps.clone()).unwrap();
            let mut b = a.clone();
            apply_pauli(&mut a, 1, p).unwrap();
            b.apply_single_qubit(&p.matrix(), 1).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn conditional_errors_always_fire() {
        let mut rng = rng_from_seed(8);
        let rates = [0.0, 0.01, 0.0, 0.02];
        for _ in 0..500 {
            let ev = sample_conditional_errors(&mut rng, &rates).unwrap();
            assert!(!ev.is_empty());
            assert!(ev.iter().all(|&(s, _)| s == 1 || s == 3));
        }
        assert!(sample_conditional_errors(&mut rng, &[0.0, 0.0]).is_none());
    }

    #[test]
    fn conditional_first_site_law() {
        // two sites with error probability p each: P(first = 0 | any) = 1/(2-p)
        let lambda = 0.8;
        let p = error_probability(lambda);
        let mut rng = rng_from_seed(21);
        let n = 200_000;
        let hits = (0..n)
            .filter(|_| sample_conditional_errors(&mut rng, &[lambda, lambda]).unwrap()[0].0 == 0)
            .count();
        let expect = 1.0 / (2.0 - p);
        let se = (expect * (1.0 - expect) / n as f64).sqrt();
        assert!((hits as f64 / n as f64 - expect).abs() < 4.0 * se);
    }
}
