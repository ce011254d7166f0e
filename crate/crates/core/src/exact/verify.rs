use crate::calculus::differentiate;
use crate::expr::{canonicalize, Expr};
use crate::sample::SampleConfig;

use super::check::sampled_deviation;
use super::DifferentialForm;

/// Sampling used when a gradient component does not match symbolically.
pub fn verification_sampling() -> SampleConfig {
    SampleConfig::default().with_samples(20).with_tolerance(1e-6)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarVerdict {
    pub var: String,
    pub symbolic: bool,
    /// `Some(deviation)` when the numeric fallback ran; `None` inside means
    /// too few valid points.
    pub numeric: Option<Option<f64>>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub passed: bool,
    pub per_var: Vec<VarVerdict>,
}

impl VerificationReport {
    pub fn failed_vars(&self) -> Vec<&str> {
        self.per_var.iter().filter(|v| !v.passed).map(|v| v.var.as_str()).collect()
    }

    pub fn used_numeric(&self) -> bool {
        self.per_var.iter().any(|v| v.numeric.is_some() && v.passed)
    }
}

/// Checks `∂φ/∂x_i = M_i` for every entry.
pub fn verify_solution(form: &DifferentialForm, phi: &Expr, cfg: &SampleConfig) -> VerificationReport {
    let per_var: Vec<VarVerdict> = form
        .entries()
        .iter()
        .map(|(var, m)| {
            let d = differentiate(phi, var);
            if canonicalize(&d) == canonicalize(m) {
                return VarVerdict { var: var.clone(), symbolic: true, numeric: None, passed: true };
            }
            let deviation = sampled_deviation(&d, m, cfg);
            let passed = matches!(deviation, Some(dev) if dev <= cfg.tolerance);
            VarVerdict { var: var.clone(), symbolic: false, numeric: Some(deviation), passed }
        })
        .collect();
    VerificationReport { passed: per_var.iter().all(|v| v.passed), per_var }
}
