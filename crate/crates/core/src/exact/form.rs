use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::expr::Expr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("a differential form needs at least one entry")]
    Empty,
    #[error("variable `{0}` has more than one differential")]
    DuplicateVariable(String),
}

/// `M_1 dx_1 + ... + M_n dx_n = 0`.
///
/// Entry order is the variable order both solvers process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialForm {
    entries: Vec<(String, Expr)>,
}

impl DifferentialForm {
    pub fn new(entries: Vec<(String, Expr)>) -> Result<DifferentialForm, FormError> {
        if entries.is_empty() {
            return Err(FormError::Empty);
        }
        let mut seen = BTreeSet::new();
        for (v, _) in &entries {
            if !seen.insert(v.as_str()) {
                return Err(FormError::DuplicateVariable(v.clone()));
            }
        }
        Ok(DifferentialForm { entries })
    }

    pub fn entries(&self) -> &[(String, Expr)] {
        &self.entries
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(v, _)| v.as_str())
    }

    pub fn var_list(&self) -> Vec<String> {
        self.entries.iter().map(|(v, _)| v.clone()).collect()
    }

    pub fn coefficient(&self, var: &str) -> Option<&Expr> {
        self.entries.iter().find(|(v, _)| v == var).map(|(_, c)| c)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::format_form(self))
    }
}
