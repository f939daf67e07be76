//! One realization: seeds, circuit, logical input, and its evaluation at every grid point.

use encdec_core::circuit::{BrickwallCircuit, NoisySchedule};
use encdec_core::decoding::{
    device_density, device_trajectories, Decoded, EncodedRealization, NoiseLayer, ObservableRequest, Representation,
};
use encdec_core::noise::{ErrorKind, ErrorModel};
use encdec_core::observables::RunRecord;
use encdec_core::rng::{stream_rng, stream_seed, substream_seed, Stage};
use encdec_core::state::PureState;
use encdec_core::{Error, SystemLayout, C64};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::config::{Backend, ExperimentConfig, InitialState};
use crate::error::Result;

/// Result of one realization at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Record(Box<RunRecord>),
    /// Post-selection probability below the degeneracy threshold.
    Degenerate { p2: f64 },
}

/// Everything shared by the realizations of one system size.
#[derive(Clone, Debug)]
pub struct SizeContext<'a> {
    pub config: &'a ExperimentConfig,
    pub n: usize,
    pub layout: SystemLayout,
    pub depth: usize,
    pub request: ObservableRequest,
    /// Master seed specialized to this size.
    pub size_seed: u64,
}

impl<'a> SizeContext<'a> {
    pub fn new(config: &'a ExperimentConfig, n: usize) -> Result<Self> {
        Ok(Self {
            config,
            n,
            layout: config.layout(n)?,
            depth: config.depth(n),
            request: config.request(),
            size_seed: substream_seed(config.seed, n as u64),
        })
    }

    pub fn gate_seed(&self, realization: u64) -> u64 {
        stream_seed(self.size_seed, realization, Stage::Gates)
    }
}

/// Logical input state of one realization.
pub fn initial_state(kind: InitialState, k: usize, size_seed: u64, realization: u64) -> Result<PureState> {
    let layout = SystemLayout::bare(k)?;
    Ok(match kind {
        InitialState::AllZero => PureState::zero(layout),
        InitialState::Ghz => PureState::ghz(k)?,
        InitialState::ProductRandom => {
            let mut rng = stream_rng(size_seed, realization, Stage::Initial);
            let qubits: Vec<[C64; 2]> = (0..k)
                .map(|_| {
                    let mut g = || rng.sample::<f64, _>(StandardNormal);
                    let (a, b) = (C64::new(g(), g()), C64::new(g(), g()));
                    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
                    [a / norm, b / norm]
                })
                .collect();
            PureState::product(&qubits)?
        }
    })
}

enum Prepared {
    Encoded(EncodedRealization),
    Device { schedule: NoisySchedule, reference: PureState },
}

/// Run realization `index` over the whole grid. Common random numbers: the
/// circuit, input, disorder pattern and trajectory stream are shared by
/// every grid point.
pub fn run_realization(ctx: &SizeContext<'_>, index: u64) -> Result<Vec<Outcome>> {
    let config = ctx.config;
    let gate_seed = ctx.gate_seed(index);
    let circuit = BrickwallCircuit::build(&ctx.layout, ctx.depth, gate_seed)?;
    let reference = initial_state(config.initial_state, ctx.layout.n_logical(), ctx.size_seed, index)?;
    let prepared = if config.model == ErrorKind::DeviceNoise {
        let eps = config.epsilon.unwrap_or(0.0);
        let mut rng = stream_rng(ctx.size_seed, index, Stage::NoiseMask);
        Prepared::Device { schedule: NoisySchedule::sample(circuit, eps, &mut rng)?, reference }
    } else {
        Prepared::Encoded(EncodedRealization::new(circuit, reference)?)
    };
    let trajectory_seed = stream_seed(ctx.size_seed, index, Stage::Trajectory);
    config
        .grid
        .iter()
        .map(|&s| {
            let model = model_at(ctx, index, s)?;
            let mut rng = encdec_core::rng::rng_from_seed(trajectory_seed);
            let decoded = match &prepared {
                Prepared::Device { schedule, reference } => match config.backend {
                    Backend::Density => device_density(schedule, reference, s),
                    _ => device_trajectories(schedule, reference, s, config.trajectories, &mut rng),
                }
                .map(|parts| Decoded { parts, values: Vec::new() }),
                Prepared::Encoded(enc) => {
                    let noise = NoiseLayer::from_model(&model, ctx.n)?;
                    match (config.backend, &noise) {
                        (Backend::Trajectory, NoiseLayer::Depolarizing(rates)) => enc
                            .depolarizing_trajectories(rates, config.trajectories, &mut rng)
                            .map(|parts| Decoded { parts, values: Vec::new() }),
                        (Backend::Density, _) => enc.decode(&noise, Representation::Density, &ctx.request),
                        _ => enc.decode(&noise, Representation::Pure, &ctx.request),
                    }
                }
            };
            match decoded {
                Ok(d) => Ok(Outcome::Record(Box::new(RunRecord {
                    realization: index,
                    seed: gate_seed,
                    model,
                    strength: s,
                    parts: d.parts,
                    values: d.values,
                }))),
                Err(Error::DegeneratePostSelection(p2)) => Ok(Outcome::Degenerate { p2 }),
                Err(e) => Err(e.into()),
            }
        })
        .collect()
}

/// Error model of realization `index` at strength `s`; disordered models draw
/// their unit pattern from the realization's disorder stream, so every
/// strength rescales the same pattern.
fn model_at(ctx: &SizeContext<'_>, index: u64, s: f64) -> Result<ErrorModel> {
    let config = ctx.config;
    let model = match config.model {
        ErrorKind::DeviceNoise => ErrorModel::device_noise(config.epsilon.unwrap_or(0.0), s)?,
        kind => ErrorModel::new(kind, s)?,
    };
    if config.model.is_disordered() {
        let mut rng = stream_rng(ctx.size_seed, index, Stage::Disorder);
        return Ok(model.instantiate_disorder(ctx.n, &mut rng)?);
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_product_inputs_are_normalized_and_reproducible() {
        let a = initial_state(InitialState::ProductRandom, 3, 7, 2).unwrap();
        let b = initial_state(InitialState::ProductRandom, 3, 7, 2).unwrap();
        let c = initial_state(InitialState::ProductRandom, 3, 7, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disorder_pattern_is_shared_across_strengths() {
        let config = ExperimentConfig {
            model: ErrorKind::DepolarizingDisordered,
            backend: Backend::Density,
            sizes: vec![4],
            grid: vec![0.2, 0.4],
            ..Default::default()
        };
        let ctx = SizeContext::new(&config, 4).unwrap();
        let a = model_at(&ctx, 3, 0.2).unwrap();
        let b = model_at(&ctx, 3, 0.4).unwrap();
        for (x, y) in a.realized_sites().unwrap().iter().zip(b.realized_sites().unwrap()) {
            assert!((2.0 * x - y).abs() < 1e-15);
        }
    }
}
