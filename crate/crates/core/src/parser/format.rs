use num_traits::{One, Signed, Zero};

use crate::exact::DifferentialForm;
use crate::expr::{canonicalize, Expr, Func, NamedConst, Rational};

// Binding strength of a printed fragment, loosest first.
const ADD: u8 = 1;
const MUL: u8 = 2;
const UNARY: u8 = 3;
const POW: u8 = 4;
const ATOM: u8 = 5;

struct Printed {
    text: String,
    prec: u8,
}

impl Printed {
    fn new(text: impl Into<String>, prec: u8) -> Printed {
        Printed { text: text.into(), prec }
    }

    /// The text, parenthesized unless it binds at least as tightly as `min`.
    fn at_least(self, min: u8) -> String {
        if self.prec >= min {
            self.text
        } else {
            format!("({})", self.text)
        }
    }
}

fn print_rational(c: &Rational) -> Printed {
    if c.is_integer() {
        let prec = if c.is_negative() { UNARY } else { ATOM };
        Printed::new(c.numer().to_string(), prec)
    } else {
        Printed::new(format!("{}/{}", c.numer(), c.denom()), MUL)
    }
}

fn print(e: &Expr) -> Printed {
    match e {
        Expr::Const(c) => print_rational(c),
        Expr::Named(n) => Printed::new(n.name(), ATOM),
        Expr::Var(v) => Printed::new(v.clone(), ATOM),
        Expr::Apply(Func::Exp, arg) => {
            Printed::new(format!("e^{}", print(arg).at_least(UNARY)), POW)
        }
        Expr::Apply(f, arg) => Printed::new(format!("{}({})", f.name(), print(arg).text), ATOM),
        Expr::Pow(base, exponent) => {
            if let Expr::Const(k) = exponent.as_ref() {
                if k.is_negative() {
                    return Printed::new(format!("1/{}", reciprocal_factor(base, &-k)), MUL);
                }
            }
            let base = match base.as_ref() {
                Expr::Named(NamedConst::E) => "e".to_string(),
                other => print(other).at_least(ATOM),
            };
            Printed::new(format!("{base}^{}", print(exponent).at_least(UNARY)), POW)
        }
        Expr::Mul(ops) => print_product(ops),
        Expr::Add(ops) => print_sum(ops),
    }
}

/// Whether `base` may share a parenthesized denominator with other factors.
/// A sum or a zero may not: `1/(2*(x + 1))` reads back as the reciprocal of
/// `2*x + 2`, and `1/(2*0)` loses the 2.
fn groups_in_denominator(base: &Expr) -> bool {
    let c = canonicalize(base);
    c.as_single_term().is_some() || c.as_constant().is_some_and(|k| !k.is_zero())
}

/// `base^k` for a positive `k`, printed to sit after a `/`.
fn reciprocal_factor(base: &Expr, k: &Rational) -> String {
    if k.is_one() {
        print(base).at_least(UNARY)
    } else {
        print(&Expr::pow(base.clone(), Expr::Const(k.clone()))).at_least(UNARY)
    }
}

fn print_product(ops: &[Expr]) -> Printed {
    let mut coefficient = Rational::one();
    let mut numer: Vec<String> = Vec::new();
    let mut denom: Vec<String> = Vec::new();
    let mut single_prec = ATOM;
    let mut chain = false;
    for op in ops {
        match op {
            Expr::Const(c) => coefficient *= c,
            Expr::Pow(base, exponent)
                if matches!(exponent.as_ref(), Expr::Const(k) if k.is_negative()) =>
            {
                let Expr::Const(k) = exponent.as_ref() else { unreachable!() };
                chain |= !groups_in_denominator(base);
                denom.push(reciprocal_factor(base, &-k));
            }
            other => {
                let p = print(other);
                single_prec = p.prec;
                numer.push(p.at_least(UNARY));
            }
        }
    }
    if coefficient.is_zero() {
        numer.insert(0, "0".to_string());
    } else {
        let magnitude = coefficient.numer().abs();
        if !magnitude.is_one() || numer.is_empty() {
            numer.insert(0, magnitude.to_string());
        }
        if !coefficient.denom().is_one() {
            denom.insert(0, coefficient.denom().to_string());
        }
    }
    let negative = coefficient.is_negative();
    let mut text = String::new();
    if negative {
        text.push('-');
    }
    text.push_str(&numer.join("*"));
    match denom.len() {
        0 => {}
        1 => {
            text.push('/');
            text.push_str(&denom[0]);
        }
        _ if chain => {
            for d in &denom {
                text.push('/');
                text.push_str(d);
            }
        }
        _ => {
            text.push_str("/(");
            text.push_str(&denom.join("*"));
            text.push(')');
        }
    }
    let prec = if numer.len() > 1 || !denom.is_empty() {
        MUL
    } else if negative {
        UNARY.min(single_prec)
    } else {
        single_prec
    };
    Printed::new(text, prec)
}

fn print_sum(ops: &[Expr]) -> Printed {
    let mut text = String::new();
    for (i, op) in ops.iter().enumerate() {
        if i == 0 {
            text.push_str(&print(op).at_least(ADD));
        } else if op.is_negated() {
            text.push_str(" - ");
            text.push_str(&print(&Expr::neg(op.clone())).at_least(MUL));
        } else {
            text.push_str(" + ");
            text.push_str(&print(op).at_least(MUL));
        }
    }
    Printed::new(text, ADD)
}

/// Prints `e` with minimal parentheses; the output parses back to an
/// expression with the same canonical form.
pub fn format_expr(e: &Expr) -> String {
    print(e).text
}

/// Prints a form as `M dx + N dy = 0`, wrapping sum coefficients in
/// parentheses.
pub fn format_form(f: &DifferentialForm) -> String {
    let mut text = String::new();
    for (i, (var, coefficient)) in f.entries().iter().enumerate() {
        let negative = coefficient.is_negated();
        let magnitude = if negative { Expr::neg(coefficient.clone()) } else { coefficient.clone() };
        match (i, negative) {
            (0, true) => text.push('-'),
            (0, false) => {}
            (_, true) => text.push_str(" - "),
            (_, false) => text.push_str(" + "),
        }
        let is_one = matches!(&magnitude, Expr::Const(c) if c.is_one());
        if !is_one {
            text.push_str(&print(&magnitude).at_least(MUL));
            text.push(' ');
        }
        text.push('d');
        text.push_str(var);
    }
    text.push_str(" = 0");
    text
}
