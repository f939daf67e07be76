//! Exact annealed averages, critical points, large-size entropy slopes,
//! finite-size scaling forms and a Weingarten-calculus cross-check.

mod closed_form;
mod critical;
mod disorder;
pub mod quadrature;
mod scaling;
mod slopes;
pub mod symmetric_group;
mod weingarten;

pub use closed_form::{
    annealed_fidelity_coherent, annealed_fidelity_depolarizing, annealed_fidelity_from_log2, annealed_moments,
    Strengths,
};
pub use critical::{
    critical_alpha, critical_alpha_printed, critical_lambda, half_fidelity_point, CriticalPoint, CriticalSource,
};
pub use disorder::{
    disorder_mean_rate, disorder_scaling_constants, disorder_site_rate_std, solve_disordered_critical,
    DisorderConstants,
};
pub use scaling::{ScalingForm, ScalingFunction, DEFAULT_ERF_ALPHA1, DEFAULT_ERF_AMPLITUDE};
pub use slopes::{
    codespace_slopes, dimension_participation_logical, entanglement_breakpoint, participation_breakpoint,
    slope_entanglement_logical, slope_thermo_logical, thermo_breakpoint, CodespaceSlopes,
};
pub use weingarten::{weingarten_fidelity_oracle, WeingartenTable};
