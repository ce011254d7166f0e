//! Canonical sum-of-products normal form.
//!
//! A [`TermSum`] is a rational constant plus a map from [`Monomial`] (a sorted
//! product of atoms raised to rational powers) to a nonzero rational
//! coefficient. Canonicalization distributes products over sums, merges like
//! terms and sorts factors. No trigonometric or logarithmic identities are
//! applied.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{free_vars, integer, Expr, Func, NamedConst, Rational};

/// Largest integer power of a multi-term sum that is expanded. Higher powers
/// stay as an opaque atom.
const MAX_EXPANSION: i64 = 16;

/// A product of atoms with rational exponents, sorted by atom.
///
/// Atoms are never `Add`, `Mul` or `Const` nodes, exponents are never zero,
/// and no atom appears twice.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Expr, Rational)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn atom(atom: Expr) -> Monomial {
        Monomial(vec![(atom, Rational::one())])
    }

    /// Builds a monomial from arbitrary factors, sorting and merging
    /// repeated atoms.
    pub fn from_factors(factors: impl IntoIterator<Item = (Expr, Rational)>) -> Monomial {
        let mut merged: BTreeMap<Expr, Rational> = BTreeMap::new();
        for (atom, exp) in factors {
            *merged.entry(atom).or_insert_with(Rational::zero) += exp;
        }
        Monomial(merged.into_iter().filter(|(_, e)| !e.is_zero()).collect())
    }

    pub fn factors(&self) -> &[(Expr, Rational)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = &self.0[i];
            let (b, eb) = &other.0[j];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    out.push((a.clone(), ea.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b.clone(), eb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = ea + eb;
                    if !e.is_zero() {
                        out.push((a.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Multiplies every exponent by `k`.
    pub fn pow(&self, k: &Rational) -> Monomial {
        if k.is_zero() {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(a, e)| (a.clone(), e * k)).collect())
    }

    /// Splits into the factors that mention `var` and those that do not.
    pub fn split_on(&self, var: &str) -> (Monomial, Monomial) {
        let (dep, free): (Vec<_>, Vec<_>) =
            self.0.iter().cloned().partition(|(a, _)| a.contains_var(var));
        (Monomial(free), Monomial(dep))
    }

    /// Replaces the exponent of factor `index`, dropping it when zero.
    pub(crate) fn with_exponent(&self, index: usize, exp: Rational) -> Monomial {
        let mut out = self.0.clone();
        if exp.is_zero() {
            out.remove(index);
        } else {
            out[index].1 = exp;
        }
        Monomial(out)
    }

    pub fn contains_var(&self, var: &str) -> bool {
        self.0.iter().any(|(a, _)| a.contains_var(var))
    }

    /// Factors in reading order: numerator before denominator, named
    /// constants, then bare variables, then everything else, each group by
    /// the variables it mentions. Canonical order breaks ties.
    fn display_order(&self) -> Vec<&(Expr, Rational)> {
        let mut factors: Vec<&(Expr, Rational)> = self.0.iter().collect();
        factors.sort_by_cached_key(|(atom, exp)| {
            let group = match atom {
                Expr::Named(_) => 0,
                Expr::Var(_) => 1,
                _ => 2,
            };
            (exp.is_negative(), group, free_vars(atom))
        });
        factors
    }

    /// Variables in the order the factors display, used to order terms.
    fn display_key(&self) -> Vec<String> {
        self.display_order().into_iter().flat_map(|(atom, _)| free_vars(atom)).collect()
    }

    fn factor_exprs(&self) -> impl Iterator<Item = Expr> + '_ {
        self.display_order().into_iter().map(|(atom, exp)| {
            if exp.is_one() {
                atom.clone()
            } else {
                Expr::pow(atom.clone(), Expr::Const(exp.clone()))
            }
        })
    }

    pub fn to_expr(&self) -> Expr {
        Expr::mul(self.factor_exprs())
    }
}

/// One coefficient-times-monomial entry of a [`TermSum`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalTerm {
    pub coefficient: Rational,
    pub monomial: Monomial,
}

impl CanonicalTerm {
    pub fn to_expr(&self) -> Expr {
        term_expr(&self.coefficient, &self.monomial)
    }

    pub fn to_sum(&self) -> TermSum {
        TermSum::term(self.coefficient.clone(), self.monomial.clone())
    }
}

fn term_expr(coefficient: &Rational, monomial: &Monomial) -> Expr {
    if monomial.is_one() {
        return Expr::Const(coefficient.clone());
    }
    if coefficient.is_one() {
        return monomial.to_expr();
    }
    Expr::mul(std::iter::once(Expr::Const(coefficient.clone())).chain(monomial.factor_exprs()))
}

/// Canonical sum: a constant plus like-term-merged products.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermSum {
    terms: BTreeMap<Monomial, Rational>,
    constant: Rational,
}

impl Default for TermSum {
    fn default() -> Self {
        TermSum::zero()
    }
}

impl TermSum {
    pub fn zero() -> TermSum {
        TermSum { terms: BTreeMap::new(), constant: Rational::zero() }
    }

    pub fn from_constant(c: Rational) -> TermSum {
        TermSum { terms: BTreeMap::new(), constant: c }
    }

    pub fn one() -> TermSum {
        TermSum::from_constant(Rational::one())
    }

    pub fn atom(atom: Expr) -> TermSum {
        TermSum::term(Rational::one(), Monomial::atom(atom))
    }

    pub fn term(coefficient: Rational, monomial: Monomial) -> TermSum {
        let mut out = TermSum::zero();
        out.add_term(monomial, coefficient);
        out
    }

    /// Adds `coefficient * monomial`, merging with an existing like term.
    pub fn add_term(&mut self, monomial: Monomial, coefficient: Rational) {
        if coefficient.is_zero() {
            return;
        }
        if monomial.is_one() {
            self.constant += coefficient;
            return;
        }
        match self.terms.entry(monomial) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coefficient;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    /// Number of non-constant terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when the sum has no non-constant terms.
    pub fn as_constant(&self) -> Option<&Rational> {
        self.terms.is_empty().then_some(&self.constant)
    }

    /// The term when the sum is exactly one term with zero constant.
    pub fn as_single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 && self.constant.is_zero() {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> impl Iterator<Item = CanonicalTerm> + '_ {
        self.terms
            .iter()
            .map(|(m, c)| CanonicalTerm { coefficient: c.clone(), monomial: m.clone() })
    }

    pub fn coefficient_of(&self, monomial: &Monomial) -> Option<&Rational> {
        self.terms.get(monomial)
    }

    pub fn add(&self, other: &TermSum) -> TermSum {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &TermSum) {
        self.constant += &other.constant;
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &TermSum) -> TermSum {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TermSum {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, k: &Rational) -> TermSum {
        if k.is_zero() {
            return TermSum::zero();
        }
        TermSum {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    pub fn mul(&self, other: &TermSum) -> TermSum {
        let mut out = TermSum::from_constant(&self.constant * &other.constant);
        if !other.constant.is_zero() {
            for (m, c) in &self.terms {
                out.add_term(m.clone(), c * &other.constant);
            }
        }
        if !self.constant.is_zero() {
            for (m, c) in &other.terms {
                out.add_term(m.clone(), c * &self.constant);
            }
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Multiplies every term by a monomial.
    pub fn mul_monomial(&self, monomial: &Monomial) -> TermSum {
        let mut out = TermSum::zero();
        if !self.constant.is_zero() {
            out.add_term(monomial.clone(), self.constant.clone());
        }
        for (m, c) in &self.terms {
            out.add_term(m.mul(monomial), c.clone());
        }
        out
    }

    pub fn to_expr(&self) -> Expr {
        render(self)
    }
}

impl fmt::Display for TermSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(self))
    }
}

/// Converts a canonical sum back to an expression: terms ordered by the
/// variables they mention, then the constant.
pub fn render(t: &TermSum) -> Expr {
    let mut terms: Vec<(&Monomial, &Rational)> = t.terms.iter().collect();
    terms.sort_by_cached_key(|(m, _)| m.display_key());
    let mut ops: Vec<Expr> = terms.into_iter().map(|(m, c)| term_expr(c, m)).collect();
    if !t.constant.is_zero() || ops.is_empty() {
        ops.push(Expr::Const(t.constant.clone()));
    }
    Expr::add(ops)
}

/// Maps `e` to its canonical sum-of-products form.
pub fn canonicalize(e: &Expr) -> TermSum {
    match e {
        Expr::Const(c) => TermSum::from_constant(c.clone()),
        Expr::Named(_) | Expr::Var(_) => TermSum::atom(e.clone()),
        Expr::Add(ops) => {
            let mut out = TermSum::zero();
            for op in ops {
                out.add_assign(&canonicalize(op));
            }
            out
        }
        Expr::Mul(ops) => {
            let mut out = TermSum::one();
            for op in ops {
                out = out.mul(&canonicalize(op));
                if out.is_zero() {
                    break;
                }
            }
            out
        }
        Expr::Pow(base, exponent) => canonical_pow(base, exponent),
        Expr::Apply(f, arg) => canonical_apply(*f, arg),
    }
}

fn is_euler(t: &TermSum) -> bool {
    match t.as_single_term() {
        Some((m, c)) => {
            c.is_one()
                && matches!(m.factors(), [(Expr::Named(NamedConst::E), e)] if e.is_one())
        }
        None => false,
    }
}

fn canonical_apply(f: Func, arg: &Expr) -> TermSum {
    let a = canonicalize(arg);
    match f {
        Func::Sqrt => return pow_rational(&a, &Rational::new(BigInt::one(), BigInt::from(2))),
        Func::Exp => {
            if let Some(c) = a.as_constant() {
                return pow_rational(&TermSum::atom(Expr::Named(NamedConst::E)), c);
            }
        }
        Func::Ln => {
            if a.as_constant().is_some_and(|c| c.is_one()) {
                return TermSum::zero();
            }
            if is_euler(&a) {
                return TermSum::one();
            }
        }
        Func::Sin | Func::Tan => {
            if a.is_zero() {
                return TermSum::zero();
            }
        }
        Func::Cos => {
            if a.is_zero() {
                return TermSum::one();
            }
        }
    }
    TermSum::atom(Expr::apply(f, render(&a)))
}

fn canonical_pow(base: &Expr, exponent: &Expr) -> TermSum {
    // (a^m)^k = a^(m k) for integers m > 0 > k. Folding before expanding keeps
    // `((x + 1)^2)^-1` and `(x + 1)^-2` on the same atom.
    if let (Expr::Pow(inner, m), Expr::Const(k)) = (base, exponent) {
        if let Expr::Const(m) = m.as_ref() {
            if m.is_integer() && k.is_integer() && m.is_positive() && k.is_negative() {
                return canonical_pow(inner, &Expr::Const(m * k));
            }
        }
    }
    let b = canonicalize(base);
    let x = canonicalize(exponent);
    if let Some(k) = x.as_constant() {
        return pow_rational(&b, k);
    }
    if is_euler(&b) {
        return TermSum::atom(Expr::apply(Func::Exp, render(&x)));
    }
    TermSum::atom(Expr::pow(render(&b), render(&x)))
}

fn rat_pow_int(c: &Rational, k: i64) -> Rational {
    let mut base = if k < 0 { c.recip() } else { c.clone() };
    let mut n = k.unsigned_abs();
    let mut acc = Rational::one();
    while n > 0 {
        if n & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        n >>= 1;
    }
    acc
}

/// Exact `q`-th root of a positive rational, when one exists.
fn rat_root(c: &Rational, q: u32) -> Option<Rational> {
    if !c.is_positive() {
        return None;
    }
    let n = c.numer().nth_root(q);
    let d = c.denom().nth_root(q);
    (num_traits::pow(n.clone(), q as usize) == *c.numer()
        && num_traits::pow(d.clone(), q as usize) == *c.denom())
    .then(|| Rational::new(n, d))
}

/// Splits `k` into an `i64` numerator and `u32` denominator.
fn split_exponent(k: &Rational) -> Option<(i64, u32)> {
    Some((k.numer().to_i64()?, k.denom().to_u32()?))
}

fn pow_rational(base: &TermSum, k: &Rational) -> TermSum {
    if k.is_zero() {
        return TermSum::one();
    }
    if k.is_one() {
        return base.clone();
    }
    let Some((p, q)) = split_exponent(k) else {
        return atomize(base, k);
    };

    if let Some(c) = base.as_constant() {
        if c.is_zero() {
            // Every negative power of zero becomes the same undefined atom,
            // so `0^(-1/2)` and `(0^(1/2))^-1` agree.
            return if p > 0 { TermSum::zero() } else { TermSum::atom(Expr::pow(Expr::zero(), Expr::int(-1))) };
        }
        if q == 1 {
            return TermSum::from_constant(rat_pow_int(c, p));
        }
        return match rat_root(c, q) {
            Some(root) => TermSum::from_constant(rat_pow_int(&root, p)),
            None => atomize(base, k),
        };
    }

    if let Some((m, c)) = base.as_single_term() {
        if q == 1 {
            return TermSum::term(rat_pow_int(c, p), m.pow(k));
        }
        // Fractional powers only distribute over factors whose own exponent
        // has an odd numerator, and only for a positive coefficient; anything
        // else can change sign or domain.
        let odd = m.factors().iter().all(|(_, e)| e.numer().is_odd());
        if c.is_positive() && odd {
            let coeff = pow_rational(&TermSum::from_constant(c.clone()), k);
            return coeff.mul_monomial(&m.pow(k));
        }
        return atomize(base, k);
    }

    if q == 1 && p > 0 && p <= MAX_EXPANSION {
        let mut out = TermSum::one();
        for _ in 0..p {
            out = out.mul(base);
        }
        return out;
    }
    atomize(base, k)
}

/// Wraps a base that cannot be distributed into an opaque power atom.
///
/// Negative integer powers become `(base^-1)^n`; fractional powers `p/q`
/// become `(base^(1/q))^p`, so equal powers of the same base always share an
/// atom.
fn atomize(base: &TermSum, k: &Rational) -> TermSum {
    let rb = render(base);
    match split_exponent(k) {
        Some((p, 1)) if p < 0 => {
            TermSum::term(Rational::one(), Monomial(vec![(Expr::powi(rb, -1), integer(-p))]))
        }
        Some((p, q)) if q > 1 => TermSum::term(
            Rational::one(),
            Monomial(vec![(
                Expr::pow(rb, Expr::Const(Rational::new(BigInt::one(), BigInt::from(q)))),
                integer(p),
            )]),
        ),
        _ => TermSum::atom(Expr::pow(rb, Expr::Const(k.clone()))),
    }
}
