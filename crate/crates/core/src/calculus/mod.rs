//! Differentiation, integration over the supported class, and the basic
//! function predicates.
//!
//! A function `f` is *basic of type one* in `v` when differentiating in `v`
//! and integrating back (constant zero) returns `f` unchanged; it is *basic of
//! type two* when that holds for every variable it depends on. Constants are
//! never basic: their derivative vanishes.

mod diff;
mod integrate;

use thiserror::Error;

use crate::expr::{canonicalize, free_vars, Expr};

pub use diff::{differentiate, differentiate_sum};
pub use integrate::{integrate, integrate_sum};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalculusError {
    #[error("term `{term}` is outside the integrable class with respect to `{var}`")]
    NotIntegrable { term: Expr, var: String },
}

pub fn is_basic_type_one(f: &Expr, var: &str) -> Result<bool, CalculusError> {
    let round = integrate(&differentiate(f, var), var)?;
    Ok(canonicalize(&round) == canonicalize(f))
}

pub fn is_basic_type_two(f: &Expr) -> Result<bool, CalculusError> {
    let vars = free_vars(f);
    if vars.is_empty() {
        return Ok(false);
    }
    for v in &vars {
        if !is_basic_type_one(f, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expression;

    fn p(s: &str) -> Expr {
        parse_expression(s).unwrap()
    }

    #[test]
    fn mixed_function_is_basic_only_in_y() {
        let f = p("sin(x)*cos(y) + sin(y)");
        assert!(!is_basic_type_one(&f, "x").unwrap());
        assert!(is_basic_type_one(&f, "y").unwrap());
        assert!(!is_basic_type_two(&f).unwrap());
    }

    #[test]
    fn separable_product_is_type_two() {
        assert!(is_basic_type_two(&p("sin(x)*cos(y)")).unwrap());
        assert!(is_basic_type_two(&p("sin(y)")).unwrap());
        assert!(is_basic_type_two(&p("e^x*sin(y)*cos(z)")).unwrap());
        assert!(is_basic_type_two(&p("ln(y)/z")).unwrap());
    }

    #[test]
    fn constants_are_not_basic() {
        assert!(!is_basic_type_one(&p("5"), "x").unwrap());
        assert!(!is_basic_type_two(&p("5")).unwrap());
        assert!(!is_basic_type_one(&p("sin(x) + 3"), "x").unwrap());
    }

    #[test]
    fn non_integrable_derivative_propagates() {
        assert!(is_basic_type_one(&p("tan(x)"), "x").is_err());
    }
}
