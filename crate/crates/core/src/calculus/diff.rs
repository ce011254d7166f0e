use num_traits::{One, Zero};

use crate::expr::{canonicalize, integer, render, rational, Expr, Func, Monomial, Rational, TermSum};

/// Partial derivative of `e` with respect to `var`, canonicalized.
pub fn differentiate(e: &Expr, var: &str) -> Expr {
    render(&differentiate_sum(&canonicalize(e), var))
}

/// Partial derivative of a canonical sum.
pub fn differentiate_sum(s: &TermSum, var: &str) -> TermSum {
    let mut out = TermSum::zero();
    for (monomial, coefficient) in s.iter() {
        if !monomial.contains_var(var) {
            continue;
        }
        out.add_assign(&differentiate_term(monomial, var).scale(coefficient));
    }
    out
}

/// Product rule over the factors of one monomial.
fn differentiate_term(m: &Monomial, var: &str) -> TermSum {
    let mut out = TermSum::zero();
    for (i, (atom, exp)) in m.factors().iter().enumerate() {
        if !atom.contains_var(var) {
            continue;
        }
        let d_atom = differentiate_atom(atom, var);
        if d_atom.is_zero() {
            continue;
        }
        let rest = m.with_exponent(i, exp - Rational::one());
        out.add_assign(&d_atom.mul_monomial(&rest).scale(exp));
    }
    out
}

fn differentiate_atom(atom: &Expr, var: &str) -> TermSum {
    match atom {
        Expr::Var(v) if v == var => TermSum::one(),
        Expr::Var(_) | Expr::Named(_) | Expr::Const(_) => TermSum::zero(),
        Expr::Apply(f, arg) => {
            let inner = differentiate_sum(&canonicalize(arg), var);
            if inner.is_zero() {
                return TermSum::zero();
            }
            let arg = arg.as_ref().clone();
            let outer = match f {
                Func::Sin => TermSum::atom(Expr::cos(arg)),
                Func::Cos => TermSum::atom(Expr::sin(arg)).scale(&integer(-1)),
                Func::Tan => canonicalize(&Expr::powi(Expr::cos(arg), -2)),
                Func::Exp => TermSum::atom(atom.clone()),
                Func::Ln => canonicalize(&Expr::powi(arg, -1)),
                Func::Sqrt => canonicalize(&Expr::mul([
                    Expr::Const(rational(1, 2)),
                    Expr::pow(arg, Expr::Const(rational(-1, 2))),
                ])),
            };
            outer.mul(&inner)
        }
        Expr::Pow(base, exponent) => {
            if let Expr::Const(k) = exponent.as_ref() {
                let d_base = differentiate_sum(&canonicalize(base), var);
                if d_base.is_zero() || k.is_zero() {
                    return TermSum::zero();
                }
                let lowered = canonicalize(&Expr::pow(
                    base.as_ref().clone(),
                    Expr::Const(k - Rational::one()),
                ));
                return lowered.mul(&d_base).scale(k);
            }
            // d(b^x) = b^x * (x' ln b + x b' / b)
            let b = base.as_ref().clone();
            let x = exponent.as_ref().clone();
            let dx = differentiate_sum(&canonicalize(&x), var);
            let db = differentiate_sum(&canonicalize(&b), var);
            let log_part = dx.mul(&canonicalize(&Expr::ln(b.clone())));
            let base_part = canonicalize(&x).mul(&db).mul(&canonicalize(&Expr::powi(b, -1)));
            TermSum::atom(atom.clone()).mul(&log_part.add(&base_part))
        }
        Expr::Mul(_) | Expr::Add(_) => differentiate_sum(&canonicalize(atom), var),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expression;

    fn d(src: &str, var: &str) -> TermSum {
        canonicalize(&differentiate(&parse_expression(src).unwrap(), var))
    }

    fn c(src: &str) -> TermSum {
        canonicalize(&parse_expression(src).unwrap())
    }

    #[test]
    fn worked_example_partials() {
        assert_eq!(d("2*y*cos(x)*e^z", "x"), c("-2*y*sin(x)*e^z"));
        assert_eq!(d("ln(y)/z", "y"), c("1/(y*z)"));
        assert!(d("7", "x").is_zero());
    }

    #[test]
    fn chain_and_power_rules() {
        assert_eq!(d("sin(3*x)", "x"), c("3*cos(3*x)"));
        assert_eq!(d("x^4", "x"), c("4*x^3"));
        assert_eq!(d("1/x", "x"), c("-1/x^2"));
        assert_eq!(d("tan(x)", "x"), c("1/cos(x)^2"));
        assert_eq!(d("sqrt(x)", "x"), c("1/(2*x^(1/2))"));
        assert_eq!(d("e^(x*y)", "x"), c("y*e^(x*y)"));
        assert_eq!(d("ln(x^2 + 1)", "x"), c("2*x/(x^2 + 1)"));
        assert_eq!(d("x^y", "y"), c("x^y*ln(x)"));
        assert_eq!(d("x^y", "x"), c("y*x^y/x"));
    }

    #[test]
    fn product_rule() {
        assert_eq!(d("x*e^x", "x"), c("e^x + x*e^x"));
        assert_eq!(d("x*y", "z"), TermSum::zero());
    }
}
