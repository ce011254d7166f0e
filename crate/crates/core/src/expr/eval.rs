use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use thiserror::Error;

use super::{Expr, Func, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
}

/// Values for the free variables of an expression.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Assignment(BTreeMap<String, f64>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment(BTreeMap::new())
    }

    pub fn with(mut self, var: impl Into<String>, value: f64) -> Assignment {
        self.0.insert(var.into(), value);
        self
    }

    pub fn set(&mut self, var: impl Into<String>, value: f64) {
        self.0.insert(var.into(), value);
    }

    pub fn get(&self, var: &str) -> Option<f64> {
        self.0.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl<S: Into<String>> FromIterator<(S, f64)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, f64)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn finite(value: f64, what: &str) -> Result<f64, EvalError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(EvalError::Domain(format!("{what} is not finite")))
    }
}

/// Real power with exact handling of rational exponents: odd roots of
/// negative bases are real, even roots are domain errors.
fn real_pow(base: f64, exponent: &Expr, exp_value: f64) -> Result<f64, EvalError> {
    if base == 0.0 && exp_value < 0.0 {
        return Err(EvalError::Domain("division by zero".into()));
    }
    if let Expr::Const(k) = exponent {
        if k.is_integer() {
            if let Some(n) = k.numer().to_i32() {
                return finite(base.powi(n), "power");
            }
        }
        if base < 0.0 {
            let denom_odd = k.denom().bit(0);
            if !denom_odd {
                return Err(EvalError::Domain("even root of a negative number".into()));
            }
            let magnitude = (-base).powf(exp_value);
            let sign = if k.numer().bit(0) { -1.0 } else { 1.0 };
            return finite(sign * magnitude, "power");
        }
        return finite(base.powf(exp_value), "power");
    }
    if base < 0.0 {
        return Err(EvalError::Domain("negative base with symbolic exponent".into()));
    }
    finite(base.powf(exp_value), "power")
}

/// Evaluates `e` in double precision at the point `a`.
pub fn eval_numeric(e: &Expr, a: &Assignment) -> Result<f64, EvalError> {
    match e {
        Expr::Const(c) => Ok(rational_to_f64(c)),
        Expr::Named(n) => Ok(n.value()),
        Expr::Var(v) => a.get(v).ok_or_else(|| EvalError::UnboundVariable(v.clone())),
        Expr::Add(ops) => ops.iter().try_fold(0.0, |acc, op| Ok(acc + eval_numeric(op, a)?)),
        Expr::Mul(ops) => ops.iter().try_fold(1.0, |acc, op| Ok(acc * eval_numeric(op, a)?)),
        Expr::Pow(b, x) => {
            let base = eval_numeric(b, a)?;
            let exp = eval_numeric(x, a)?;
            real_pow(base, x, exp)
        }
        Expr::Apply(f, arg) => {
            let v = eval_numeric(arg, a)?;
            match f {
                Func::Sin => Ok(v.sin()),
                Func::Cos => Ok(v.cos()),
                Func::Tan => finite(v.tan(), "tan"),
                Func::Exp => finite(v.exp(), "exp"),
                Func::Ln if v <= 0.0 => Err(EvalError::Domain(format!("ln of nonpositive value {v}"))),
                Func::Ln => Ok(v.ln()),
                Func::Sqrt if v < 0.0 => Err(EvalError::Domain(format!("sqrt of negative value {v}"))),
                Func::Sqrt => Ok(v.sqrt()),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{rational, NamedConst};

    #[test]
    fn product_vanishes_at_origin() {
        let e = Expr::mul([Expr::sin(Expr::var("x")), Expr::cos(Expr::var("y"))]);
        let a = Assignment::new().with("x", 0.0).with("y", 0.7);
        assert_eq!(eval_numeric(&e, &a).unwrap(), 0.0);
    }

    #[test]
    fn log_ratio_at_e() {
        let e = Expr::div(Expr::ln(Expr::var("y")), Expr::var("z"));
        let a = Assignment::new().with("y", NamedConst::E.value()).with("z", 2.0);
        assert!((eval_numeric(&e, &a).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_at_zero_is_domain_error() {
        let e = Expr::div(Expr::one(), Expr::mul([Expr::var("y"), Expr::var("z")]));
        let a = Assignment::new().with("y", 0.0).with("z", 1.0);
        assert!(matches!(eval_numeric(&e, &a), Err(EvalError::Domain(_))));
    }

    #[test]
    fn unbound_variable() {
        let e = Expr::var("q");
        assert_eq!(eval_numeric(&e, &Assignment::new()), Err(EvalError::UnboundVariable("q".into())));
    }

    #[test]
    fn rational_roots_of_negatives() {
        let cube = Expr::pow(Expr::var("x"), Expr::Const(rational(1, 3)));
        let a = Assignment::new().with("x", -8.0);
        assert!((eval_numeric(&cube, &a).unwrap() + 2.0).abs() < 1e-12);
        let half = Expr::pow(Expr::var("x"), Expr::Const(rational(1, 2)));
        assert!(eval_numeric(&half, &a).is_err());
        let ln = Expr::ln(Expr::var("x"));
        assert!(eval_numeric(&ln, &a).is_err());
    }
}
