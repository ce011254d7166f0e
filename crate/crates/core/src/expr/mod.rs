//! Immutable symbolic expressions.
//!
//! [`Expr`] is the tree every other module works on. Constructors keep the
//! structural invariants (flattened sums and products, no unary `Add`/`Mul`,
//! rationals in lowest terms); [`canonicalize`] maps an expression to the
//! [`TermSum`] normal form used for term identity.

mod canonical;
mod equivalence;
mod eval;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use canonical::{canonicalize, render, CanonicalTerm, Monomial, TermSum};
pub use equivalence::{equivalence, Equivalence};
pub use eval::{eval_numeric, Assignment, EvalError};

/// Exact rational number used for every coefficient and literal.
pub type Rational = num_rational::BigRational;

/// Builds a rational from a numerator and denominator.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Builds an integer-valued rational.
pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// The named mathematical constants the grammar recognizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NamedConst {
    E,
    Pi,
}

impl NamedConst {
    pub fn name(self) -> &'static str {
        match self {
            NamedConst::E => "e",
            NamedConst::Pi => "pi",
        }
    }

    pub fn value(self) -> f64 {
        match self {
            NamedConst::E => std::f64::consts::E,
            NamedConst::Pi => std::f64::consts::PI,
        }
    }
}

/// Elementary functions. Variant order is alphabetical by name, which is the
/// order atoms sort in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Cos,
    Exp,
    Ln,
    Sin,
    Sqrt,
    Tan,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Cos, Func::Exp, Func::Ln, Func::Sin, Func::Sqrt, Func::Tan];

    pub fn name(self) -> &'static str {
        match self {
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Sqrt => "sqrt",
            Func::Tan => "tan",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// A symbolic expression.
///
/// The derived ordering is the total order used to sort atoms inside
/// canonical terms: node kind first (in variant order), then function name,
/// then operands recursively, with variables compared lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Const(Rational),
    Named(NamedConst),
    Var(String),
    Apply(Func, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Mul(Vec<Expr>),
    Add(Vec<Expr>),
}

impl Expr {
    pub fn constant(value: Rational) -> Expr {
        Expr::Const(value)
    }

    pub fn int(value: i64) -> Expr {
        Expr::Const(integer(value))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn named(c: NamedConst) -> Expr {
        Expr::Named(c)
    }

    pub fn apply(f: Func, arg: Expr) -> Expr {
        Expr::Apply(f, Box::new(arg))
    }

    pub fn sin(arg: Expr) -> Expr {
        Expr::apply(Func::Sin, arg)
    }

    pub fn cos(arg: Expr) -> Expr {
        Expr::apply(Func::Cos, arg)
    }

    pub fn exp(arg: Expr) -> Expr {
        Expr::apply(Func::Exp, arg)
    }

    pub fn ln(arg: Expr) -> Expr {
        Expr::apply(Func::Ln, arg)
    }

    pub fn pow(base: Expr, exponent: Expr) -> Expr {
        Expr::Pow(Box::new(base), Box::new(exponent))
    }

    pub fn powi(base: Expr, exponent: i64) -> Expr {
        Expr::pow(base, Expr::int(exponent))
    }

    /// Sum of `operands`, flattening nested sums. Zero operands give `0`,
    /// one operand is returned unchanged.
    pub fn add(operands: impl IntoIterator<Item = Expr>) -> Expr {
        let mut flat = Vec::new();
        for op in operands {
            match op {
                Expr::Add(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Expr::zero(),
            1 => flat.pop().unwrap(),
            _ => Expr::Add(flat),
        }
    }

    /// Product of `operands`, flattening nested products. Zero operands give
    /// `1`, one operand is returned unchanged.
    pub fn mul(operands: impl IntoIterator<Item = Expr>) -> Expr {
        let mut flat = Vec::new();
        for op in operands {
            match op {
                Expr::Mul(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Expr::one(),
            1 => flat.pop().unwrap(),
            _ => Expr::Mul(flat),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Expr) -> Expr {
        match e {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Mul(mut ops) => {
                if let Some(Expr::Const(c)) = ops.first_mut() {
                    *c = -c.clone();
                    if c.is_one() {
                        ops.remove(0);
                        return Expr::mul(ops);
                    }
                    return Expr::Mul(ops);
                }
                ops.insert(0, Expr::int(-1));
                Expr::Mul(ops)
            }
            other => Expr::Mul(vec![Expr::int(-1), other]),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::add([a, Expr::neg(b)])
    }

    /// `a / b`, represented as `a * b^-1` (or plain `b^-1` when `a` is one).
    #[allow(clippy::should_implement_trait)]
    pub fn div(a: Expr, b: Expr) -> Expr {
        let recip = Expr::powi(b, -1);
        match a {
            Expr::Const(c) if c.is_one() => recip,
            other => Expr::mul([other, recip]),
        }
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    /// True when the expression carries a leading negative coefficient, so it
    /// prints as a subtraction inside a sum.
    pub fn is_negated(&self) -> bool {
        match self {
            Expr::Const(c) => c.is_negative(),
            Expr::Mul(ops) => matches!(ops.first(), Some(Expr::Const(c)) if c.is_negative()),
            _ => false,
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Expr::Const(_) | Expr::Named(_) => false,
            Expr::Var(v) => v == name,
            Expr::Apply(_, arg) => arg.contains_var(name),
            Expr::Pow(b, e) => b.contains_var(name) || e.contains_var(name),
            Expr::Mul(ops) | Expr::Add(ops) => ops.iter().any(|o| o.contains_var(name)),
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) | Expr::Named(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Apply(_, arg) => arg.collect_vars(out),
            Expr::Pow(b, e) => {
                b.collect_vars(out);
                e.collect_vars(out);
            }
            Expr::Mul(ops) | Expr::Add(ops) => ops.iter().for_each(|o| o.collect_vars(out)),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Named(_) | Expr::Var(_) => 1,
            Expr::Apply(_, arg) => 1 + arg.size(),
            Expr::Pow(b, e) => 1 + b.size() + e.size(),
            Expr::Mul(ops) | Expr::Add(ops) => 1 + ops.iter().map(Expr::size).sum::<usize>(),
        }
    }
}

/// The set of variables appearing in `e`.
pub fn free_vars(e: &Expr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    e.collect_vars(&mut out);
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::format_expr(self))
    }
}
