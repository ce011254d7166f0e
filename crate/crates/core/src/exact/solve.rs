use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::calculus::{differentiate_sum, integrate_sum, CalculusError};
use crate::expr::{canonicalize, equivalence, free_vars, render, CanonicalTerm, Equivalence, Expr, TermSum};
use crate::sample::{DomainBox, SampleConfig};

use super::check::{check_exact, CheckMethod, ExactnessReport};
use super::verify::{verification_sampling, verify_solution, VerificationReport};
use super::DifferentialForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct OperationTally {
    pub integrations: usize,
    pub differentiations: usize,
}

impl OperationTally {
    pub fn total(&self) -> usize {
        self.integrations + self.differentiations
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Basic,
    Standard,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Basic => "basic",
            Method::Standard => "standard",
        }
    }
}

/// A potential `φ` with `dφ` equal to the form; the equation's solution is
/// `φ = C`.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub potential: Expr,
    pub method: Method,
    pub tally: OperationTally,
    pub exactness: CheckMethod,
    pub verification: VerificationReport,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("the form is not exact")]
    NotExact(ExactnessReport),
    #[error(transparent)]
    NotIntegrable(#[from] CalculusError),
    #[error("the candidate potential does not reproduce the form (failing: {})", .0.failed_vars().join(", "))]
    VerificationFailed(VerificationReport),
    #[error("residual for `{var}` still depends on an earlier variable: {residual}")]
    ResidualContamination { var: String, residual: Expr },
}

/// Sampling configurations used by the solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub exactness: SampleConfig,
    pub verification: SampleConfig,
    /// Used when deciding whether two distinct terms differ by a constant.
    pub merge: SampleConfig,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            exactness: SampleConfig::default(),
            verification: verification_sampling(),
            merge: SampleConfig::default(),
        }
    }
}

impl SolveOptions {
    pub fn with_domain(mut self, domain: DomainBox) -> SolveOptions {
        self.exactness.domain = domain.clone();
        self.verification.domain = domain.clone();
        self.merge.domain = domain;
        self
    }
}

fn require_exact(form: &DifferentialForm, opts: &SolveOptions) -> Result<CheckMethod, SolveError> {
    let report = check_exact(form, &opts.exactness);
    if report.exact {
        Ok(report.method)
    } else {
        Err(SolveError::NotExact(report))
    }
}

/// `∫ M_i dx_i` for every entry, in form order.
fn integrate_entries(form: &DifferentialForm) -> Result<Vec<TermSum>, CalculusError> {
    form.entries().iter().map(|(v, m)| integrate_sum(&canonicalize(m), v)).collect()
}

/// One distinct term of the integral union with the entries it came from.
#[derive(Debug, Clone, PartialEq)]
struct TermClass {
    term: CanonicalTerm,
    sources: Vec<usize>,
}

/// Distinct terms across all integrals, in order of first appearance.
fn union_terms(integrals: &[TermSum]) -> Vec<TermClass> {
    let mut classes: Vec<TermClass> = Vec::new();
    for (i, t) in integrals.iter().enumerate() {
        for term in t.terms() {
            match classes.iter_mut().find(|c| c.term == term) {
                Some(c) => c.sources.push(i),
                None => classes.push(TermClass { term, sources: vec![i] }),
            }
        }
    }
    classes
}

/// The basic function method: integrate every coefficient in its own
/// variable, then keep one copy of each distinct term.
pub fn solve_basic(form: &DifferentialForm) -> Result<Solution, SolveError> {
    solve_basic_with(form, &SolveOptions::default())
}

pub fn solve_basic_with(form: &DifferentialForm, opts: &SolveOptions) -> Result<Solution, SolveError> {
    let exactness = require_exact(form, opts)?;
    let integrals = integrate_entries(form)?;
    let tally = OperationTally { integrations: integrals.len(), differentiations: 0 };
    let mut classes = union_terms(&integrals);
    let mut warnings = Vec::new();

    // Terms that are not canonically identical but differ by a constant.
    let mut i = 0;
    while i < classes.len() {
        let a = classes[i].term.to_expr();
        let vars_a = free_vars(&a);
        let mut j = i + 1;
        while j < classes.len() {
            let b = classes[j].term.to_expr();
            let same_vars = free_vars(&b) == vars_a;
            let merge = same_vars
                && matches!(equivalence(&a, &b, &opts.merge), Ok(Equivalence::DifferByConstant { .. }));
            if merge {
                warnings.push(format!("merged `{b}` into `{a}`: the two terms differ by a constant"));
                let gone = classes.remove(j);
                classes[i].sources.extend(gone.sources);
            } else {
                j += 1;
            }
        }
        i += 1;
    }

    let mut kept = TermSum::zero();
    for c in &classes {
        kept.add_assign(&c.term.to_sum());
    }
    let potential = render(&kept);
    let verification = verify_solution(form, &potential, &opts.verification);
    if !verification.passed {
        return Err(SolveError::VerificationFailed(verification));
    }
    Ok(Solution { potential, method: Method::Basic, tally, exactness, verification, warnings })
}

/// The textbook method: integrate the first coefficient, then for each later
/// variable integrate what its coefficient adds beyond `∂φ/∂x_i`.
pub fn solve_standard(form: &DifferentialForm) -> Result<Solution, SolveError> {
    solve_standard_with(form, &SolveOptions::default())
}

pub fn solve_standard_with(form: &DifferentialForm, opts: &SolveOptions) -> Result<Solution, SolveError> {
    let exactness = require_exact(form, opts)?;
    let entries = form.entries();
    let mut tally = OperationTally::default();
    let (x1, m1) = &entries[0];
    let mut phi = integrate_sum(&canonicalize(m1), x1)?;
    tally.integrations += 1;
    let mut processed: BTreeSet<&str> = BTreeSet::from([x1.as_str()]);
    for (xi, mi) in &entries[1..] {
        let d = differentiate_sum(&phi, xi);
        tally.differentiations += 1;
        let residual = canonicalize(mi).sub(&d);
        let rendered = render(&residual);
        if free_vars(&rendered).iter().any(|v| processed.contains(v.as_str())) {
            return Err(SolveError::ResidualContamination { var: xi.clone(), residual: rendered });
        }
        if !residual.is_zero() {
            phi.add_assign(&integrate_sum(&residual, xi)?);
            tally.integrations += 1;
        }
        processed.insert(xi);
    }
    let potential = render(&phi);
    let verification = verify_solution(form, &potential, &opts.verification);
    if !verification.passed {
        return Err(SolveError::VerificationFailed(verification));
    }
    Ok(Solution { potential, method: Method::Standard, tally, exactness, verification, warnings: Vec::new() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Multiplicity {
    pub term: Expr,
    pub observed: usize,
    /// Number of form variables the term depends on.
    pub expected: usize,
}

impl Multiplicity {
    pub fn matches(&self) -> bool {
        self.observed == self.expected
    }
}

/// How often each distinct term appears across the per-variable integrals,
/// against the number of form variables it depends on.
pub fn term_multiplicity_diagnostic(form: &DifferentialForm) -> Result<Vec<Multiplicity>, CalculusError> {
    let integrals = integrate_entries(form)?;
    let form_vars: BTreeSet<String> = form.var_list().into_iter().collect();
    Ok(union_terms(&integrals)
        .into_iter()
        .map(|c| {
            let term = c.term.to_expr();
            let expected = free_vars(&term).intersection(&form_vars).count();
            Multiplicity { term, observed: c.sources.len(), expected }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_expression, parse_form};

    const WORKED: &str = "(e^x*sin(y)*cos(z) - 2*y*sin(x)*e^z) dx \
        + (e^x*cos(y)*cos(z) + 2*cos(x)*e^z + 1/(y*z)) dy \
        + (-e^x*sin(y)*sin(z) + 2*y*cos(x)*e^z - ln(y)/z^2) dz";

    fn c(src: &str) -> TermSum {
        canonicalize(&parse_expression(src).unwrap())
    }

    #[test]
    fn worked_example_both_methods() {
        let f = parse_form(WORKED).unwrap();
        let expected = c("e^x*sin(y)*cos(z) + 2*y*cos(x)*e^z + ln(y)/z");
        let basic = solve_basic(&f).unwrap();
        assert_eq!(canonicalize(&basic.potential), expected);
        assert_eq!(basic.tally, OperationTally { integrations: 3, differentiations: 0 });
        assert!(basic.warnings.is_empty());
        let standard = solve_standard(&f).unwrap();
        assert_eq!(canonicalize(&standard.potential), expected);
        assert_eq!(standard.tally.differentiations, 2);
    }

    #[test]
    fn small_forms() {
        let basic = solve_basic(&parse_form("cos(x)*cos(y) dx - sin(x)*sin(y) dy").unwrap()).unwrap();
        assert_eq!(canonicalize(&basic.potential), c("sin(x)*cos(y)"));
        let f = parse_form("(y + 1) dx + x dy").unwrap();
        let basic = solve_basic(&f).unwrap();
        let standard = solve_standard(&f).unwrap();
        assert_eq!(canonicalize(&basic.potential), c("x*y + x"));
        assert_eq!(canonicalize(&basic.potential), canonicalize(&standard.potential));
        let standard = solve_standard(&parse_form("2*x*y dx + x^2 dy").unwrap()).unwrap();
        assert_eq!(canonicalize(&standard.potential), c("x^2*y"));
        // the y residual is zero, so only one integration happens
        assert_eq!(standard.tally, OperationTally { integrations: 1, differentiations: 1 });
    }

    #[test]
    fn non_exact_rejected() {
        let f = parse_form("y dx - x dy").unwrap();
        assert!(matches!(solve_basic(&f), Err(SolveError::NotExact(_))));
        assert!(matches!(solve_standard(&f), Err(SolveError::NotExact(_))));
    }

    #[test]
    fn non_integrable_coefficient() {
        let f = parse_form("e^(x^2) dx").unwrap();
        assert!(matches!(solve_basic(&f), Err(SolveError::NotIntegrable(_))));
    }

    #[test]
    fn multiplicities() {
        let m = term_multiplicity_diagnostic(&parse_form(WORKED).unwrap()).unwrap();
        let find = |src: &str| m.iter().find(|t| canonicalize(&t.term) == c(src)).unwrap().clone();
        assert_eq!(find("e^x*sin(y)*cos(z)").observed, 3);
        assert_eq!(find("ln(y)/z").observed, 2);
        assert!(m.iter().all(Multiplicity::matches));

        let m = term_multiplicity_diagnostic(&parse_form("(y + 1) dx + x dy").unwrap()).unwrap();
        let find = |src: &str| m.iter().find(|t| canonicalize(&t.term) == c(src)).unwrap().clone();
        assert_eq!((find("x*y").observed, find("x*y").expected), (2, 2));
        assert_eq!((find("x").observed, find("x").expected), (1, 1));

        let m = term_multiplicity_diagnostic(&parse_form("2*x dx").unwrap()).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].observed, m[0].expected), (1, 1));
    }
}
