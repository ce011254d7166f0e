use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{derive_form, generate_potential, GenConfig, GenError, MAX_TERMS, MAX_VARS};
use crate::exact::{solve_basic_with, solve_standard_with, OperationTally, Solution, SolveError, SolveOptions};
use crate::expr::{equivalence, Expr};
use crate::par;
use crate::sample::SampleConfig;

/// A batch of trials sharing one master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: u64,
    pub min_vars: usize,
    pub max_vars: usize,
    pub max_terms: usize,
}

impl FuzzConfig {
    pub fn new(seed: u64, trials: u64, min_vars: usize, max_vars: usize, max_terms: usize) -> Result<FuzzConfig, GenError> {
        if !(2..=MAX_VARS).contains(&min_vars) {
            return Err(GenError::VarCount(min_vars));
        }
        if !(min_vars..=MAX_VARS).contains(&max_vars) {
            return Err(GenError::VarCount(max_vars));
        }
        if !(1..=MAX_TERMS).contains(&max_terms) {
            return Err(GenError::TermCount(max_terms));
        }
        Ok(FuzzConfig { seed, trials, min_vars, max_vars, max_terms })
    }

    /// The generator settings for trial `index`. Sizes are drawn from a
    /// stream separate from the one the potential itself uses.
    pub fn trial_config(&self, index: u64) -> GenConfig {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x9e37_79b9_7f4a_7c15);
        rng.set_stream(index);
        let num_vars = rng.gen_range(self.min_vars..=self.max_vars);
        let num_terms = rng.gen_range(1..=self.max_terms);
        GenConfig { seed: self.seed, stream: index, num_vars, num_terms }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub index: u64,
    pub seed: u64,
    pub stream: u64,
    pub num_vars: usize,
    pub num_terms: usize,
    pub potential: String,
    pub form: String,
    pub basic: Option<String>,
    pub standard: Option<String>,
    /// Verdict of the basic potential against the generated one.
    pub basic_verdict: Option<String>,
    pub standard_verdict: Option<String>,
    /// Verdict of the two solver outputs against each other.
    pub cross_verdict: Option<String>,
    pub basic_tally: Option<OperationTally>,
    pub standard_tally: Option<OperationTally>,
    pub warnings: Vec<String>,
    pub errors: Vec<String>,
    pub passed: bool,
}

fn compare(a: &Expr, b: &Expr, cfg: &SampleConfig) -> (Option<String>, bool) {
    match equivalence(a, b, cfg) {
        Ok(v) => (Some(v.label().to_string()), v.is_match()),
        Err(e) => (Some(format!("unsampleable: {e}")), false),
    }
}

fn solver_error(name: &str, e: &SolveError) -> String {
    format!("{name}: {e}")
}

/// Generates a potential, derives its form, solves it both ways and compares
/// all three potentials. Solver failures are recorded, never propagated.
pub fn round_trip(cfg: &GenConfig) -> TrialReport {
    let generated = generate_potential(cfg);
    let form = derive_form(&generated.expr, &generated.vars);
    let opts = SolveOptions::default().with_domain(generated.domain.clone());
    let sampling = SampleConfig::default().with_domain(generated.domain.clone());

    let basic = solve_basic_with(&form, &opts);
    let standard = solve_standard_with(&form, &opts);
    let mut errors = Vec::new();
    let mut warnings = generated.warnings.clone();
    let mut passed = true;

    let mut against_generated = |s: &Result<Solution, SolveError>, name: &str| match s {
        Ok(sol) => {
            let (verdict, ok) = compare(&generated.expr, &sol.potential, &sampling);
            passed &= ok;
            verdict
        }
        Err(e) => {
            errors.push(solver_error(name, e));
            passed = false;
            None
        }
    };
    let basic_verdict = against_generated(&basic, "basic");
    let standard_verdict = against_generated(&standard, "standard");
    let cross_verdict = match (&basic, &standard) {
        (Ok(b), Ok(s)) => {
            let (verdict, ok) = compare(&b.potential, &s.potential, &sampling);
            passed &= ok;
            verdict
        }
        _ => None,
    };
    if let Ok(b) = &basic {
        warnings.extend(b.warnings.iter().cloned());
    }

    TrialReport {
        index: cfg.stream,
        seed: cfg.seed,
        stream: cfg.stream,
        num_vars: cfg.num_vars,
        num_terms: cfg.num_terms,
        potential: generated.expr.to_string(),
        form: form.to_string(),
        basic: basic.as_ref().ok().map(|s| s.potential.to_string()),
        standard: standard.as_ref().ok().map(|s| s.potential.to_string()),
        basic_verdict,
        standard_verdict,
        cross_verdict,
        basic_tally: basic.as_ref().ok().map(|s| s.tally),
        standard_tally: standard.as_ref().ok().map(|s| s.tally),
        warnings,
        errors,
        passed,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub trials: u64,
    pub passes: u64,
    pub reports: Vec<TrialReport>,
}

impl FuzzSummary {
    fn from_reports(reports: Vec<TrialReport>) -> FuzzSummary {
        FuzzSummary {
            trials: reports.len() as u64,
            passes: reports.iter().filter(|r| r.passed).count() as u64,
            reports,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passes == self.trials
    }

    pub fn failures(&self) -> impl Iterator<Item = &TrialReport> {
        self.reports.iter().filter(|r| !r.passed)
    }
}

/// Runs every trial, in parallel when the `parallel` feature is on. Reports
/// are in trial order either way.
pub fn run_trials(cfg: &FuzzConfig) -> FuzzSummary {
    FuzzSummary::from_reports(par::map_indexed(cfg.trials, |i| round_trip(&cfg.trial_config(i))))
}

pub fn run_trials_sequential(cfg: &FuzzConfig) -> FuzzSummary {
    FuzzSummary::from_reports(par::map_indexed_sequential(cfg.trials, |i| round_trip(&cfg.trial_config(i))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::canonicalize;
    use crate::parser::parse_expression;

    #[test]
    fn single_term_round_trips_exactly() {
        for seed in 0..10 {
            let r = round_trip(&GenConfig::new(seed, 3, 1).unwrap());
            assert!(r.passed, "{r:?}");
            assert_eq!(r.basic_verdict.as_deref(), Some("Equal"));
            let generated = canonicalize(&parse_expression(&r.potential).unwrap());
            let solved = canonicalize(&parse_expression(r.basic.as_ref().unwrap()).unwrap());
            assert_eq!(generated, solved);
        }
    }

    #[test]
    fn basic_tally_is_variable_count() {
        for seed in 0..10 {
            let r = round_trip(&GenConfig::new(seed, 2 + seed as usize % 4, 4).unwrap());
            assert!(r.passed, "{r:?}");
            assert_eq!(r.basic_tally, Some(OperationTally { integrations: r.num_vars, differentiations: 0 }));
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let cfg = FuzzConfig::new(7, 24, 2, 4, 5).unwrap();
        let a = run_trials(&cfg);
        assert_eq!(a, run_trials_sequential(&cfg));
        assert!(a.all_passed(), "{:?}", a.failures().collect::<Vec<_>>());
    }
}
