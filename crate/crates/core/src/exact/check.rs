use crate::calculus::differentiate;
use crate::expr::{canonicalize, eval_numeric, free_vars, render, Expr};
use crate::sample::SampleConfig;

use super::DifferentialForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMethod {
    Symbolic,
    /// At least one residual was nonzero symbolically but vanished at every
    /// sample point.
    NumericFallback,
}

impl CheckMethod {
    pub fn label(self) -> &'static str {
        match self {
            CheckMethod::Symbolic => "symbolic",
            CheckMethod::NumericFallback => "numeric-fallback",
        }
    }
}

/// A pair `(x_i, x_j)` whose mixed partials disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFailure {
    pub vars: (String, String),
    /// `∂M_i/∂x_j - ∂M_j/∂x_i`, canonicalized.
    pub residual: Expr,
    /// Largest relative deviation seen while sampling, when any point was
    /// valid.
    pub max_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactnessReport {
    pub exact: bool,
    pub failures: Vec<PairFailure>,
    pub method: CheckMethod,
    /// Pairs accepted only by the numeric fallback.
    pub numeric_pairs: Vec<(String, String)>,
}

/// Largest `|a - b| / max(1, |a|, |b|)` over sampled points, or `None` when
/// too few points were valid.
pub(crate) fn sampled_deviation(a: &Expr, b: &Expr, cfg: &SampleConfig) -> Option<f64> {
    let vars: Vec<String> = free_vars(a).union(&free_vars(b)).cloned().collect();
    let devs = cfg
        .collect_at_least(&vars, |p| {
            let va = eval_numeric(a, p).ok()?;
            let vb = eval_numeric(b, p).ok()?;
            Some((va - vb).abs() / va.abs().max(vb.abs()).max(1.0))
        })
        .ok()?;
    Some(devs.into_iter().fold(0.0, f64::max))
}

/// Pairwise mixed-partial test `∂M_i/∂x_j = ∂M_j/∂x_i`, symbolic first with
/// a sampled fallback for residuals the normal form cannot cancel.
pub fn check_exact(form: &DifferentialForm, cfg: &SampleConfig) -> ExactnessReport {
    let entries = form.entries();
    let mut failures = Vec::new();
    let mut numeric_pairs = Vec::new();
    for i in 0..entries.len() {
        for j in (i + 1)..entries.len() {
            let (xi, mi) = &entries[i];
            let (xj, mj) = &entries[j];
            let lhs = differentiate(mi, xj);
            let rhs = differentiate(mj, xi);
            let residual = canonicalize(&lhs).sub(&canonicalize(&rhs));
            if residual.is_zero() {
                continue;
            }
            let deviation = sampled_deviation(&lhs, &rhs, cfg);
            match deviation {
                Some(d) if d <= cfg.tolerance => numeric_pairs.push((xi.clone(), xj.clone())),
                _ => failures.push(PairFailure {
                    vars: (xi.clone(), xj.clone()),
                    residual: render(&residual),
                    max_deviation: deviation,
                }),
            }
        }
    }
    let method = if numeric_pairs.is_empty() { CheckMethod::Symbolic } else { CheckMethod::NumericFallback };
    ExactnessReport { exact: failures.is_empty(), failures, method, numeric_pairs }
}
