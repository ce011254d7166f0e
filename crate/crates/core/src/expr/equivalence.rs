use super::{canonicalize, eval_numeric, free_vars, Expr};
use crate::sample::{SampleConfig, SampleError};

/// How two expressions relate as functions.
///
/// `Equal` is a symbolic verdict (identical canonical forms). The other two
/// are numeric and therefore probabilistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equivalence {
    Equal,
    DifferByConstant { offset: f64 },
    Different,
}

impl Equivalence {
    /// Equal or differing only by an additive constant.
    pub fn is_match(&self) -> bool {
        !matches!(self, Equivalence::Different)
    }

    pub fn is_numeric(&self) -> bool {
        !matches!(self, Equivalence::Equal)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Equivalence::Equal => "Equal",
            Equivalence::DifferByConstant { .. } => "DifferByConstant",
            Equivalence::Different => "Different",
        }
    }
}

/// Compares `a` and `b` canonically, then numerically on `cfg`'s box.
pub fn equivalence(a: &Expr, b: &Expr, cfg: &SampleConfig) -> Result<Equivalence, SampleError> {
    if canonicalize(a) == canonicalize(b) {
        return Ok(Equivalence::Equal);
    }
    let vars: Vec<String> = free_vars(a).union(&free_vars(b)).cloned().collect();
    let diffs = cfg.collect_at_least(&vars, |p| {
        let va = eval_numeric(a, p).ok()?;
        let vb = eval_numeric(b, p).ok()?;
        Some((va - vb, va.abs().max(vb.abs()).max(1.0)))
    })?;
    let (offset, scale0) = diffs[0];
    let constant = diffs
        .iter()
        .all(|&(d, scale)| (d - offset).abs() <= cfg.tolerance * scale.max(scale0));
    Ok(if constant { Equivalence::DifferByConstant { offset } } else { Equivalence::Different })
}
