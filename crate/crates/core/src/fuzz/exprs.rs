use rand::seq::SliceRandom;
use rand::Rng;

use super::{random_coefficient, small_nonzero, VARIABLES};
use crate::exact::DifferentialForm;
use crate::expr::{rational, Expr, Func, NamedConst, Rational};

/// An expression inside the integrable class together with its variable of
/// integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Integrand {
    pub expr: Expr,
    pub var: String,
}

fn pick<R: Rng, T: Clone>(rng: &mut R, items: &[T]) -> T {
    items.choose(rng).expect("nonempty pool").clone()
}

fn pow_const(base: Expr, k: Rational) -> Expr {
    Expr::pow(base, Expr::Const(k))
}

/// `a * v` with `a` drawn from ±1..3 and 1/2.
fn linear<R: Rng>(rng: &mut R, v: &Expr, positive: bool) -> Expr {
    let a = if rng.gen_bool(0.2) {
        rational(1, 2)
    } else if positive {
        rational(rng.gen_range(1..=3), 1)
    } else {
        rational(small_nonzero(rng, 3), 1)
    };
    Expr::mul([Expr::Const(a), v.clone()])
}

/// The part of a term that depends on the integration variable.
fn dependent_part<R: Rng>(rng: &mut R, v: &Expr) -> Expr {
    let powers = [
        rational(-3, 1),
        rational(-2, 1),
        rational(-1, 1),
        rational(1, 1),
        rational(2, 1),
        rational(3, 1),
        rational(4, 1),
        rational(1, 2),
        rational(-1, 2),
        rational(3, 2),
    ];
    let func = |rng: &mut R, v: &Expr| {
        let arg = linear(rng, v, false);
        match rng.gen_range(0..3) {
            0 => Expr::exp(arg),
            1 => Expr::sin(arg),
            _ => Expr::cos(arg),
        }
    };
    match rng.gen_range(0..5) {
        0 => pow_const(v.clone(), pick(rng, &powers)),
        1 => func(rng, v),
        2 => Expr::ln(linear(rng, v, true)),
        3 => Expr::mul([Expr::powi(v.clone(), rng.gen_range(1..=3)), func(rng, v)]),
        _ => {
            let k = pick(rng, &[rational(-2, 1), rational(-1, 1), rational(1, 1), rational(2, 1)]);
            Expr::mul([pow_const(v.clone(), k), Expr::ln(linear(rng, v, true))])
        }
    }
}

/// A factor free of the integration variable.
fn free_factor<R: Rng>(rng: &mut R, others: &[&str]) -> Expr {
    let w = Expr::var(pick(rng, others));
    match rng.gen_range(0..5) {
        0 => Expr::powi(w, pick(rng, &[-2, -1, 1, 2, 3])),
        1 => Expr::sin(w),
        2 => Expr::cos(w),
        3 => Expr::exp(w),
        _ => Expr::ln(w),
    }
}

/// A sum of one to three terms, each integrable in the returned variable.
pub fn random_integrable<R: Rng>(rng: &mut R) -> Integrand {
    let var = pick(rng, &VARIABLES[..3]);
    let others: Vec<&str> = VARIABLES[..3].iter().copied().filter(|w| *w != var).collect();
    let v = Expr::var(var);
    let terms = (0..rng.gen_range(1..=3)).map(|_| {
        let mut factors = vec![random_coefficient(rng)];
        if rng.gen_bool(0.85) {
            factors.push(dependent_part(rng, &v));
        }
        for _ in 0..rng.gen_range(0..=2) {
            factors.push(free_factor(rng, &others));
        }
        Expr::mul(factors)
    });
    Integrand { expr: Expr::add(terms.collect::<Vec<_>>()), var: var.to_string() }
}

/// An arbitrary expression over `x`, `y`, `z` of at most the given depth,
/// covering every node kind the parser can produce.
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..6) {
            0 => Expr::Const(rational(rng.gen_range(-9..=9), rng.gen_range(1..=4))),
            1 => Expr::Named(pick(rng, &[NamedConst::E, NamedConst::Pi])),
            _ => Expr::var(pick(rng, &VARIABLES[..3])),
        };
    }
    match rng.gen_range(0..6) {
        0 => Expr::apply(pick(rng, &Func::ALL), random_expr(rng, depth - 1)),
        1 => {
            let exponent = match rng.gen_range(0..3) {
                0 => Expr::int(rng.gen_range(-3..=3)),
                1 => Expr::Const(pick(rng, &[rational(1, 2), rational(-1, 2), rational(2, 3), rational(-3, 2)])),
                _ => random_expr(rng, depth - 1),
            };
            Expr::pow(random_expr(rng, depth - 1), exponent)
        }
        2 | 3 => Expr::mul((0..rng.gen_range(2..=3)).map(|_| random_expr(rng, depth - 1)).collect::<Vec<_>>()),
        4 => Expr::add((0..rng.gen_range(2..=3)).map(|_| random_expr(rng, depth - 1)).collect::<Vec<_>>()),
        _ => Expr::neg(random_expr(rng, depth - 1)),
    }
}

/// A form in one to four distinct variables with arbitrary coefficients.
pub fn random_form<R: Rng>(rng: &mut R) -> DifferentialForm {
    let n = rng.gen_range(1..=4);
    let mut vars: Vec<&str> = VARIABLES[..4].to_vec();
    vars.shuffle(rng);
    let entries = vars[..n].iter().map(|v| (v.to_string(), random_expr(rng, 2))).collect();
    DifferentialForm::new(entries).expect("distinct variables")
}
