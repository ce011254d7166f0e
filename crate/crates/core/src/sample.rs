//! Seeded point sampling over axis-aligned boxes.
//!
//! Every numeric check in the crate draws its points through here, so a fixed
//! seed reproduces a check exactly. Points come from a ChaCha8 stream seeded
//! from [`SampleConfig::seed`].

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expr::Assignment;

pub const DEFAULT_INTERVAL: (f64, f64) = (0.5, 2.0);

/// Attempts allowed per required point before giving up.
pub const REJECTION_CAP: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("only {found} of {needed} sample points avoided domain errors")]
    InsufficientSamples { needed: usize, found: usize },
    #[error("empty interval [{lo}, {hi}] for `{var}`")]
    EmptyInterval { var: String, lo: f64, hi: f64 },
}

/// A closed interval per variable; variables without an explicit entry use
/// the default interval.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainBox {
    default: (f64, f64),
    intervals: BTreeMap<String, (f64, f64)>,
}

impl Default for DomainBox {
    fn default() -> Self {
        DomainBox { default: DEFAULT_INTERVAL, intervals: BTreeMap::new() }
    }
}

impl DomainBox {
    pub fn uniform(lo: f64, hi: f64) -> Result<DomainBox, SampleError> {
        check_interval("*", lo, hi)?;
        Ok(DomainBox { default: (lo, hi), intervals: BTreeMap::new() })
    }

    pub fn with_interval(mut self, var: impl Into<String>, lo: f64, hi: f64) -> Result<DomainBox, SampleError> {
        let var = var.into();
        check_interval(&var, lo, hi)?;
        self.intervals.insert(var, (lo, hi));
        Ok(self)
    }

    pub fn interval(&self, var: &str) -> (f64, f64) {
        self.intervals.get(var).copied().unwrap_or(self.default)
    }

    pub fn width(&self, var: &str) -> f64 {
        let (lo, hi) = self.interval(var);
        hi - lo
    }

    pub fn sample<R: Rng>(&self, vars: &[String], rng: &mut R) -> Assignment {
        vars.iter()
            .map(|v| {
                let (lo, hi) = self.interval(v);
                let x = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
                (v.clone(), x)
            })
            .collect()
    }
}

fn check_interval(var: &str, lo: f64, hi: f64) -> Result<(), SampleError> {
    if lo.is_finite() && hi.is_finite() && lo <= hi {
        Ok(())
    } else {
        Err(SampleError::EmptyInterval { var: var.to_string(), lo, hi })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    /// Points requested.
    pub samples: usize,
    /// Fewest valid points a verdict may rest on.
    pub min_valid: usize,
    /// Relative tolerance for value comparisons.
    pub tolerance: f64,
    pub domain: DomainBox,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            samples: 32,
            min_valid: 16,
            tolerance: 1e-9,
            domain: DomainBox::default(),
            seed: 0x5eed_e9ac,
        }
    }
}

impl SampleConfig {
    pub fn with_samples(mut self, samples: usize) -> SampleConfig {
        self.samples = samples;
        self.min_valid = self.min_valid.min(samples);
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> SampleConfig {
        self.tolerance = tolerance;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> SampleConfig {
        self.seed = seed;
        self
    }

    pub fn with_domain(mut self, domain: DomainBox) -> SampleConfig {
        self.domain = domain;
        self
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Draws points until `samples` of them are accepted by `probe`, which
    /// returns `None` to reject a point. Gives up after [`REJECTION_CAP`]
    /// attempts per requested point.
    pub fn collect<T>(
        &self,
        vars: &[String],
        mut probe: impl FnMut(&Assignment) -> Option<T>,
    ) -> Vec<T> {
        let mut rng = self.rng();
        let mut out = Vec::with_capacity(self.samples);
        let mut attempts = 0;
        while out.len() < self.samples && attempts < self.samples * REJECTION_CAP {
            attempts += 1;
            let point = self.domain.sample(vars, &mut rng);
            if let Some(v) = probe(&point) {
                out.push(v);
            }
        }
        out
    }

    /// Like [`collect`](Self::collect) but fails when fewer than `min_valid`
    /// points were accepted.
    pub fn collect_at_least<T>(
        &self,
        vars: &[String],
        probe: impl FnMut(&Assignment) -> Option<T>,
    ) -> Result<Vec<T>, SampleError> {
        let out = self.collect(vars, probe);
        if out.len() < self.min_valid.max(1) {
            return Err(SampleError::InsufficientSamples { needed: self.min_valid.max(1), found: out.len() });
        }
        Ok(out)
    }
}

/// `|value - reference| / max(1, |reference|)`.
pub fn relative_deviation(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1.0)
}
