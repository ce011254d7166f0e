//! Table-driven antiderivatives.
//!
//! A term is integrable in `v` when its `v`-dependent factors form one of:
//! `v^k`, `exp(a v)`, `sin(a v)`, `cos(a v)`, `ln(a v)`, `v^m exp|sin|cos(a v)`
//! for a positive integer `m`, or `v^k ln(a v)`. Factors free of `v` pass
//! through. Every table entry has one fixed representative with integration
//! constant zero.

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::CalculusError;
use crate::expr::{canonicalize, integer, render, Expr, Func, Monomial, Rational, TermSum};

/// Antiderivative of `e` in `var` with zero integration constant.
pub fn integrate(e: &Expr, var: &str) -> Result<Expr, CalculusError> {
    integrate_sum(&canonicalize(e), var).map(|s| render(&s))
}

pub fn integrate_sum(s: &TermSum, var: &str) -> Result<TermSum, CalculusError> {
    let v = Expr::var(var);
    let mut out = TermSum::zero();
    if !s.constant().is_zero() {
        out.add_term(Monomial::atom(v.clone()), s.constant().clone());
    }
    for (monomial, coefficient) in s.iter() {
        let (free, dep) = monomial.split_on(var);
        let anti = if dep.is_one() {
            TermSum::atom(v.clone())
        } else {
            antiderivative(&dep, var).ok_or_else(|| CalculusError::NotIntegrable {
                term: crate::expr::CanonicalTerm {
                    coefficient: coefficient.clone(),
                    monomial: monomial.clone(),
                }
                .to_expr(),
                var: var.to_string(),
            })?
        };
        out.add_assign(&anti.mul_monomial(&free).scale(coefficient));
    }
    Ok(out)
}

/// `a` when `arg` is canonically `a * var`.
fn linear_coefficient(arg: &Expr, var: &str) -> Option<Rational> {
    let s = canonicalize(arg);
    let (m, c) = s.as_single_term()?;
    match m.factors() {
        [(Expr::Var(v), e)] if v == var && e.is_one() => Some(c.clone()),
        _ => None,
    }
}

fn var_power(var: &str, k: &Rational) -> TermSum {
    TermSum::term(Rational::one(), Monomial::from_factors([(Expr::var(var), k.clone())]))
}

fn antiderivative(dep: &Monomial, var: &str) -> Option<TermSum> {
    match dep.factors() {
        [(Expr::Var(_), k)] => Some(power_rule(var, k)),
        [(Expr::Apply(f, arg), e)] if e.is_one() => {
            let a = linear_coefficient(arg, var)?;
            let arg = arg.as_ref().clone();
            let inv = a.recip();
            Some(match f {
                Func::Exp => TermSum::atom(Expr::exp(arg)).scale(&inv),
                Func::Sin => TermSum::atom(Expr::cos(arg)).scale(&-inv),
                Func::Cos => TermSum::atom(Expr::sin(arg)).scale(&inv),
                // v ln(a v) - v
                Func::Ln => TermSum::atom(Expr::ln(arg))
                    .mul(&var_power(var, &Rational::one()))
                    .sub(&var_power(var, &Rational::one())),
                Func::Tan | Func::Sqrt => return None,
            })
        }
        [(Expr::Var(_), m), (Expr::Apply(f, arg), e)] if e.is_one() => {
            let a = linear_coefficient(arg, var)?;
            let arg = arg.as_ref().clone();
            match f {
                Func::Ln => Some(power_times_log(var, m, arg)),
                Func::Exp | Func::Sin | Func::Cos => {
                    if !m.is_integer() || !m.is_positive() {
                        return None;
                    }
                    let m = m.to_u32()?;
                    Some(match f {
                        Func::Exp => poly_exp(var, m, &a, arg),
                        Func::Sin => poly_trig(var, m, &a, &arg, true),
                        _ => poly_trig(var, m, &a, &arg, false),
                    })
                }
                Func::Tan | Func::Sqrt => None,
            }
        }
        _ => None,
    }
}

/// `v^(k+1)/(k+1)`, or `ln(v)` for `k = -1`.
fn power_rule(var: &str, k: &Rational) -> TermSum {
    if *k == integer(-1) {
        return TermSum::atom(Expr::ln(Expr::var(var)));
    }
    let k1 = k + Rational::one();
    var_power(var, &k1).scale(&k1.recip())
}

/// `∫ v^k ln(a v) dv`.
fn power_times_log(var: &str, k: &Rational, arg: Expr) -> TermSum {
    let log = TermSum::atom(Expr::ln(arg));
    if *k == integer(-1) {
        return log.mul(&log).scale(&Rational::new(1.into(), 2.into()));
    }
    let k1 = k + Rational::one();
    let p = var_power(var, &k1);
    log.mul(&p).scale(&k1.recip()).sub(&p.scale(&(&k1 * &k1).recip()))
}

/// `∫ v^m exp(a v) dv = exp(a v) Σ_k (-1)^k m!/(m-k)! v^(m-k) / a^(k+1)`.
fn poly_exp(var: &str, m: u32, a: &Rational, arg: Expr) -> TermSum {
    let mut poly = TermSum::zero();
    let mut falling = Rational::one();
    let mut a_pow = a.clone();
    for k in 0..=m {
        let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
        let coeff = sign * &falling / &a_pow;
        poly.add_assign(&var_power(var, &integer(i64::from(m - k))).scale(&coeff));
        falling *= integer(i64::from(m - k));
        a_pow *= a;
    }
    poly.mul(&TermSum::atom(Expr::exp(arg)))
}

/// `∫ v^m sin(a v) dv` (`sine = true`) or `∫ v^m cos(a v) dv`, by repeated
/// integration by parts.
fn poly_trig(var: &str, m: u32, a: &Rational, arg: &Expr, sine: bool) -> TermSum {
    let inv = a.recip();
    let sin = TermSum::atom(Expr::sin(arg.clone()));
    let cos = TermSum::atom(Expr::cos(arg.clone()));
    let vm = var_power(var, &integer(i64::from(m)));
    if sine {
        // -v^m cos/a + (m/a) ∫ v^(m-1) cos
        let head = vm.mul(&cos).scale(&-inv.clone());
        if m == 0 {
            return head;
        }
        let tail = poly_trig(var, m - 1, a, arg, false).scale(&(integer(i64::from(m)) * &inv));
        head.add(&tail)
    } else {
        // v^m sin/a - (m/a) ∫ v^(m-1) sin
        let head = vm.mul(&sin).scale(&inv);
        if m == 0 {
            return head;
        }
        let tail = poly_trig(var, m - 1, a, arg, true).scale(&(integer(-i64::from(m)) * &inv));
        head.add(&tail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::differentiate;
    use crate::parser::parse_expression;

    fn i(src: &str, var: &str) -> TermSum {
        canonicalize(&integrate(&parse_expression(src).unwrap(), var).unwrap())
    }

    fn c(src: &str) -> TermSum {
        canonicalize(&parse_expression(src).unwrap())
    }

    #[test]
    fn worked_example_integrals() {
        assert_eq!(i("1/(y*z)", "y"), c("ln(y)/z"));
        assert_eq!(i("cos(x)*cos(y)", "x"), c("sin(x)*cos(y)"));
    }

    // Expected values below are checked independently by differentiating
    // the stated antiderivative.
    #[test]
    fn by_parts_entries() {
        let anti = c("(x - 1)*e^x");
        assert_eq!(canonicalize(&differentiate(&render(&anti), "x")), c("x*e^x"));
        assert_eq!(i("x*e^x", "x"), anti);

        let anti = c("x*ln(x) - x");
        assert_eq!(canonicalize(&differentiate(&render(&anti), "x")), c("ln(x)"));
        assert_eq!(i("ln(x)", "x"), anti);

        let anti = c("-x^2*cos(x) + 2*x*sin(x) + 2*cos(x)");
        assert_eq!(canonicalize(&differentiate(&render(&anti), "x")), c("x^2*sin(x)"));
        assert_eq!(i("x^2*sin(x)", "x"), anti);
    }

    #[test]
    fn table_entries() {
        assert_eq!(i("x^3", "x"), c("x^4/4"));
        assert_eq!(i("1/x", "x"), c("ln(x)"));
        assert_eq!(i("x^(-1/2)", "x"), c("2*x^(1/2)"));
        assert_eq!(i("e^(2*x)", "x"), c("e^(2*x)/2"));
        assert_eq!(i("sin(3*x)", "x"), c("-cos(3*x)/3"));
        assert_eq!(i("5", "x"), c("5*x"));
        assert_eq!(i("y", "x"), c("x*y"));
        assert_eq!(i("ln(x)/x", "x"), c("ln(x)^2/2"));
        assert_eq!(i("x*ln(x)", "x"), c("x^2*ln(x)/2 - x^2/4"));
        assert_eq!(i("-ln(y)/z^2", "z"), c("ln(y)/z"));
    }

    #[test]
    fn outside_class_is_reported() {
        let err = integrate(&parse_expression("e^(x^2)").unwrap(), "x").unwrap_err();
        let CalculusError::NotIntegrable { term, var } = err;
        assert_eq!(var, "x");
        assert_eq!(canonicalize(&term), c("e^(x^2)"));
        assert!(integrate(&parse_expression("tan(x)").unwrap(), "x").is_err());
        assert!(integrate(&parse_expression("1/(x + 1)").unwrap(), "x").is_err());
        assert!(integrate(&parse_expression("sin(x)*cos(x)").unwrap(), "x").is_err());
        assert!(integrate(&parse_expression("e^x/x").unwrap(), "x").is_err());
    }
}
