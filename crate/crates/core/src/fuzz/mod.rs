//! Seeded random potentials, the exact forms they induce, and round-trip
//! trials of both solvers against them.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`): the generator for a trial is
//! `ChaCha8Rng::seed_from_u64(seed)` switched to stream `stream`, so a
//! `(seed, stream)` pair reproduces a trial bit for bit on every platform,
//! and trials never share generator state.

mod exprs;
mod trial;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::calculus::differentiate;
use crate::exact::DifferentialForm;
use crate::expr::{canonicalize, rational, Expr, Monomial};
use crate::sample::DomainBox;

pub use exprs::{random_expr, random_form, random_integrable, Integrand};
pub use trial::{round_trip, run_trials, run_trials_sequential, FuzzConfig, FuzzSummary, TrialReport};

pub const VARIABLES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
pub const MAX_VARS: usize = VARIABLES.len();
pub const MAX_TERMS: usize = 8;

/// Attempts to find a fresh monomial before dropping a term.
const RESAMPLE_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("number of variables must be in 2..={MAX_VARS}, got {0}")]
    VarCount(usize),
    #[error("number of terms must be in 1..={MAX_TERMS}, got {0}")]
    TermCount(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub stream: u64,
    pub num_vars: usize,
    pub num_terms: usize,
}

impl GenConfig {
    pub fn new(seed: u64, num_vars: usize, num_terms: usize) -> Result<GenConfig, GenError> {
        if !(2..=MAX_VARS).contains(&num_vars) {
            return Err(GenError::VarCount(num_vars));
        }
        if !(1..=MAX_TERMS).contains(&num_terms) {
            return Err(GenError::TermCount(num_terms));
        }
        Ok(GenConfig { seed, stream: 0, num_vars, num_terms })
    }

    pub fn with_stream(mut self, stream: u64) -> GenConfig {
        self.stream = stream;
        self
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    pub fn vars(&self) -> Vec<String> {
        VARIABLES[..self.num_vars].iter().map(|v| v.to_string()).collect()
    }
}

/// A generated potential with the box its numeric checks should sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub expr: Expr,
    pub vars: Vec<String>,
    pub domain: DomainBox,
    pub warnings: Vec<String>,
}

pub(crate) fn small_nonzero<R: Rng>(rng: &mut R, max: i64) -> i64 {
    let k = rng.gen_range(1..=max);
    if rng.gen_bool(0.5) {
        k
    } else {
        -k
    }
}

/// Nonzero rational with numerator in ±1..5 and denominator in 1..5.
pub(crate) fn random_coefficient<R: Rng>(rng: &mut R) -> Expr {
    Expr::Const(rational(small_nonzero(rng, 5), rng.gen_range(1..=5)))
}

/// `a * v` for a small nonzero integer `a`.
fn scaled<R: Rng>(rng: &mut R, v: &Expr) -> Expr {
    Expr::mul([Expr::int(small_nonzero(rng, 3)), v.clone()])
}

/// One univariate atom: `v^k`, `sin(a v)`, `cos(a v)`, `exp(a v)` or `ln(v)`.
fn random_atom<R: Rng>(rng: &mut R, var: &str) -> Expr {
    let v = Expr::var(var);
    match rng.gen_range(0..5) {
        0 => Expr::powi(v, rng.gen_range(1..=4)),
        1 => Expr::sin(scaled(rng, &v)),
        2 => Expr::cos(scaled(rng, &v)),
        3 => Expr::exp(scaled(rng, &v)),
        _ => Expr::ln(v),
    }
}

/// A sum of distinct products of univariate atoms with rational
/// coefficients; every term is a basic function of type two.
pub fn generate_potential(cfg: &GenConfig) -> Potential {
    let mut rng = cfg.rng();
    let vars = cfg.vars();
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut terms = Vec::with_capacity(cfg.num_terms);
    let mut warnings = Vec::new();
    for _ in 0..cfg.num_terms {
        let mut found = None;
        for _ in 0..RESAMPLE_CAP {
            let count = rng.gen_range(1..=vars.len());
            let mut used: Vec<&String> = vars.choose_multiple(&mut rng, count).collect();
            used.sort();
            let mut factors = vec![random_coefficient(&mut rng)];
            factors.extend(used.iter().map(|v| random_atom(&mut rng, v)));
            let term = Expr::mul(factors);
            let canonical = canonicalize(&term);
            let Some((monomial, _)) = canonical.as_single_term() else { continue };
            if seen.insert(monomial.clone()) {
                found = Some(term);
                break;
            }
        }
        match found {
            Some(t) => terms.push(t),
            None => warnings.push("no fresh term found; term count reduced".to_string()),
        }
    }
    Potential { expr: Expr::add(terms), vars, domain: DomainBox::default(), warnings }
}

/// The form `dφ`: entry `i` is `∂φ/∂vars[i]`.
pub fn derive_form(phi: &Expr, vars: &[String]) -> DifferentialForm {
    let entries = vars.iter().map(|v| (v.clone(), differentiate(phi, v))).collect();
    DifferentialForm::new(entries).expect("variable list is nonempty and distinct")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::is_basic_type_two;
    use crate::exact::{check_exact, CheckMethod};
    use crate::parser::{parse_expression, parse_form};
    use crate::sample::SampleConfig;

    #[test]
    fn generation_is_deterministic() {
        let cfg = GenConfig::new(42, 3, 5).unwrap();
        assert_eq!(generate_potential(&cfg), generate_potential(&cfg));
        let other = generate_potential(&cfg.with_stream(1));
        assert_ne!(generate_potential(&cfg).expr, other.expr);
    }

    #[test]
    fn term_count_and_shape() {
        for seed in 0..40 {
            let cfg = GenConfig::new(seed, 2 + (seed as usize % 5), 1 + (seed as usize % 8)).unwrap();
            let p = generate_potential(&cfg);
            assert!(p.warnings.is_empty());
            let canonical = canonicalize(&p.expr);
            assert_eq!(canonical.len(), cfg.num_terms);
            assert!(canonical.constant() == &rational(0, 1));
            for term in canonical.terms() {
                assert!(is_basic_type_two(&term.to_expr()).unwrap(), "{}", term.to_expr());
            }
        }
    }

    #[test]
    fn derived_forms_are_exact() {
        for seed in 0..20 {
            let cfg = GenConfig::new(seed, 4, 6).unwrap();
            let p = generate_potential(&cfg);
            let r = check_exact(&derive_form(&p.expr, &p.vars), &SampleConfig::default());
            assert!(r.exact);
            assert_eq!(r.method, CheckMethod::Symbolic);
        }
    }

    #[test]
    fn derive_known_forms() {
        let vars = ["x".to_string(), "y".to_string()];
        let f = derive_form(&parse_expression("x*y").unwrap(), &vars);
        let g = parse_form("y dx + x dy").unwrap();
        for ((a, m), (b, n)) in f.entries().iter().zip(g.entries()) {
            assert_eq!(a, b);
            assert_eq!(canonicalize(m), canonicalize(n));
        }
        let f = derive_form(&parse_expression("sin(x)*cos(y)").unwrap(), &vars);
        let g = parse_form("cos(x)*cos(y) dx - sin(x)*sin(y) dy").unwrap();
        for ((_, m), (_, n)) in f.entries().iter().zip(g.entries()) {
            assert_eq!(canonicalize(m), canonicalize(n));
        }
    }

    #[test]
    fn config_bounds() {
        assert_eq!(GenConfig::new(0, 1, 1), Err(GenError::VarCount(1)));
        assert_eq!(GenConfig::new(0, 7, 1), Err(GenError::VarCount(7)));
        assert_eq!(GenConfig::new(0, 2, 0), Err(GenError::TermCount(0)));
        assert_eq!(GenConfig::new(0, 2, 9), Err(GenError::TermCount(9)));
    }
}
