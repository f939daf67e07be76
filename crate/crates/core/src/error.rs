use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("gate acts twice on qubit {0}")]
    RepeatedQubit(usize),
    #[error("operator is not unitary (deviation {0:.3e})")]
    NonUnitary(f64),
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("states or circuits built for different layouts")]
    LayoutMismatch,
    #[error("post-selection probability {0:.3e} is below the degeneracy floor")]
    DegeneratePostSelection(f64),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("eigenvalue {0:.3e} is too negative to be rounding error")]
    NegativeEigenvalue(f64),
    #[error("Renyi index {0} is not supported (need q > 0, q != 1)")]
    UnsupportedRenyiIndex(f64),
    #[error("weights sum to {0}, not 1")]
    Unnormalized(f64),
    #[error("subsystem is empty")]
    EmptySubsystem,
    #[error("{name} = {value} lies outside {domain}")]
    OutOfDomain { name: &'static str, value: f64, domain: &'static str },
    #[error("error model is not disordered")]
    NotDisordered,
    #[error("error model has no realized site strengths")]
    MissingSiteStrengths,
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSample { needed: usize, got: usize },
    #[error("no root of the critical condition in [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },
    #[error("replica count {0} unsupported (need an even number between 2 and 6)")]
    UnsupportedReplicas(usize),
    #[error("Gram matrix is singular for these dimensions")]
    SingularGram,
    #[error("quadrature did not converge (error estimate {0:.3e})")]
    QuadratureFailed(f64),
    #[error("missing constant: {0}")]
    MissingConstant(&'static str),
    #[error("data collapse input invalid: {0}")]
    InvalidCollapse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
