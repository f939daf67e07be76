//! Finite-size scaling forms of the fidelity near its transition.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use super::critical::critical_lambda;
use crate::error::{Error, Result};

pub const DEFAULT_ERF_ALPHA1: f64 = 0.8864;
pub const DEFAULT_ERF_AMPLITUDE: f64 = 0.3272;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingForm {
    /// `1 / (1 + exp(N (s - s_c) / scale))`, exponent `nu = 1`.
    LogisticNu1,
    /// `(1 + erf(alpha1 sqrt(N) (s_c - s) / (sqrt(2) A))) / 2`, exponent `nu = 2`.
    ErfNu2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFunction {
    pub form: ScalingForm,
    pub critical: f64,
    /// Logistic width; unused by the error-function form.
    pub scale: f64,
    pub alpha1: f64,
    pub amplitude: f64,
}

impl ScalingFunction {
    pub fn logistic(critical: f64, scale: f64) -> Self {
        Self { form: ScalingForm::LogisticNu1, critical, scale, alpha1: f64::NAN, amplitude: f64::NAN }
    }

    /// Large-`N` form of the uniform depolarizing fidelity at rate `r`.
    pub fn logistic_depolarizing(r: f64) -> Result<Self> {
        let lc = critical_lambda(r)?.value;
        Ok(Self::logistic(lc, 4.0 / 3.0 - lc))
    }

    pub fn erf(critical: f64, alpha1: Option<f64>, amplitude: Option<f64>) -> Result<Self> {
        let alpha1 = alpha1.ok_or(Error::MissingConstant("alpha1"))?;
        let amplitude = amplitude.ok_or(Error::MissingConstant("amplitude"))?;
        Ok(Self { form: ScalingForm::ErfNu2, critical, scale: f64::NAN, alpha1, amplitude })
    }

    pub fn nu(&self) -> f64 {
        match self.form {
            ScalingForm::LogisticNu1 => 1.0,
            ScalingForm::ErfNu2 => 2.0,
        }
    }

    pub fn eval(&self, n: usize, s: f64) -> f64 {
        let nf = n as f64;
        match self.form {
            ScalingForm::LogisticNu1 => 1.0 / (1.0 + (nf * (s - self.critical) / self.scale).exp()),
            ScalingForm::ErfNu2 => {
                let z = self.alpha1 * nf.sqrt() * (self.critical - s) / (std::f64::consts::SQRT_2 * self.amplitude);
                0.5 * (1.0 + erf(z))
            }
        }
    }
}
