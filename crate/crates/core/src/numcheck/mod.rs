//! Numeric checks that do not go through the symbolic pipeline: finite
//! difference gradients and line-integral reconstruction of potentials.
//!
//! Path independence relies on the sampling box being simply connected,
//! which every [`DomainBox`] is.

mod quad;

use thiserror::Error;

use crate::exact::DifferentialForm;
use crate::expr::{eval_numeric, free_vars, Assignment, Expr};
use crate::sample::{relative_deviation, SampleConfig, SampleError};

pub use crate::sample::DomainBox;
pub use quad::{adaptive_simpson, QuadratureError};

pub const GRADIENT_TOLERANCE: f64 = 1e-5;
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;
pub const PATH_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error(transparent)]
    Sampling(#[from] SampleError),
    #[error("domain error integrating the `{var}` coefficient: {reason}")]
    Domain { var: String, reason: String },
    #[error("quadrature for the `{var}` coefficient missed its tolerance (error estimate {estimate:e})")]
    QuadratureFailure { var: String, estimate: f64 },
    #[error("point has {got} coordinates but the form has {expected} variables")]
    Dimension { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientReport {
    pub passed: bool,
    pub max_deviation: f64,
    /// Largest deviation per form variable, in form order.
    pub per_var: Vec<(String, f64)>,
    pub points: usize,
}

/// Compares central differences of `phi` (step `1e-5` times the interval
/// width) with each coefficient at `points` sampled points.
pub fn gradient_check(phi: &Expr, form: &DifferentialForm, domain: &DomainBox, points: usize) -> Result<GradientReport, NumError> {
    let mut vars = free_vars(phi);
    for (v, m) in form.entries() {
        vars.insert(v.clone());
        vars.extend(free_vars(m));
    }
    let vars: Vec<String> = vars.into_iter().collect();
    let cfg = SampleConfig { samples: points, min_valid: points, domain: domain.clone(), ..SampleConfig::default() };
    let rows = cfg.collect_at_least(&vars, |p| {
        form.entries()
            .iter()
            .map(|(v, m)| {
                let h = 1e-5 * domain.width(v).max(f64::EPSILON);
                let x = p.get(v)?;
                let mut shifted = p.clone();
                shifted.set(v.clone(), x + h);
                let up = eval_numeric(phi, &shifted).ok()?;
                shifted.set(v.clone(), x - h);
                let down = eval_numeric(phi, &shifted).ok()?;
                let fd = (up - down) / (2.0 * h);
                let exact = eval_numeric(m, p).ok()?;
                Some(relative_deviation(exact, fd))
            })
            .collect::<Option<Vec<f64>>>()
    })?;
    let per_var: Vec<(String, f64)> = form
        .vars()
        .enumerate()
        .map(|(i, v)| (v.to_string(), rows.iter().map(|r| r[i]).fold(0.0, f64::max)))
        .collect();
    let max_deviation = per_var.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    Ok(GradientReport { passed: max_deviation < GRADIENT_TOLERANCE, max_deviation, per_var, points: rows.len() })
}

/// Line integral of the form along an axis-aligned path, one segment per
/// variable, visiting variables in `order` (indices into the form).
fn line_integral(form: &DifferentialForm, base: &[f64], target: &[f64], order: &[usize]) -> Result<f64, NumError> {
    let entries = form.entries();
    for point in [base, target] {
        if point.len() != entries.len() {
            return Err(NumError::Dimension { expected: entries.len(), got: point.len() });
        }
    }
    let mut current: Vec<f64> = base.to_vec();
    let mut total = 0.0;
    for &i in order {
        let (var, m) = &entries[i];
        let fixed: Assignment = entries.iter().zip(&current).map(|((v, _), x)| (v.clone(), *x)).collect();
        let f = |t: f64| {
            let mut p = fixed.clone();
            p.set(var.clone(), t);
            eval_numeric(m, &p).map_err(|e| e.to_string())
        };
        total += adaptive_simpson(f, current[i], target[i], QUADRATURE_TOLERANCE).map_err(|e| match e {
            QuadratureError::Domain(reason) => NumError::Domain { var: var.clone(), reason },
            QuadratureError::Tolerance { estimate } => NumError::QuadratureFailure { var: var.clone(), estimate },
        })?;
        current[i] = target[i];
    }
    Ok(total)
}

/// `φ(target) - φ(base)` recovered from the form alone, moving along each
/// variable in form order. Points list coordinates in form order.
pub fn reconstruct_potential(form: &DifferentialForm, base: &[f64], target: &[f64]) -> Result<f64, NumError> {
    let order: Vec<usize> = (0..form.len()).collect();
    line_integral(form, base, target, &order)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathReport {
    pub forward: f64,
    pub reversed: f64,
    pub difference: f64,
    pub passed: bool,
}

/// Reconstructs along form order and reversed order and compares.
pub fn path_independence_check(form: &DifferentialForm, base: &[f64], target: &[f64]) -> Result<PathReport, NumError> {
    let forward = reconstruct_potential(form, base, target)?;
    let order: Vec<usize> = (0..form.len()).rev().collect();
    let reversed = line_integral(form, base, target, &order)?;
    let difference = (forward - reversed).abs();
    Ok(PathReport { forward, reversed, difference, passed: difference < PATH_TOLERANCE })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_expression, parse_form};

    const WORKED: &str = "(e^x*sin(y)*cos(z) - 2*y*sin(x)*e^z) dx \
        + (e^x*cos(y)*cos(z) + 2*cos(x)*e^z + 1/(y*z)) dy \
        + (2*y*cos(x)*e^z - e^x*sin(y)*sin(z) - ln(y)/z^2) dz";

    // Independent of the parser: the worked potential in plain f64.
    fn worked_potential(x: f64, y: f64, z: f64) -> f64 {
        x.exp() * y.sin() * z.cos() + 2.0 * y * x.cos() * z.exp() + y.ln() / z
    }

    #[test]
    fn gradient_of_product() {
        let phi = parse_expression("x*y").unwrap();
        let d = DomainBox::default();
        assert!(gradient_check(&phi, &parse_form("y dx + x dy").unwrap(), &d, 20).unwrap().passed);
        let bad = gradient_check(&phi, &parse_form("y dx + 2*x dy").unwrap(), &d, 20).unwrap();
        assert!(!bad.passed);
        assert!(bad.per_var[0].1 < GRADIENT_TOLERANCE);
        assert!((bad.per_var[1].1 - 1.0).abs() < 1e-6, "{:?}", bad.per_var);
    }

    #[test]
    fn gradient_of_worked_example() {
        let phi = parse_expression("e^x*sin(y)*cos(z) + 2*y*cos(x)*e^z + ln(y)/z").unwrap();
        let r = gradient_check(&phi, &parse_form(WORKED).unwrap(), &DomainBox::default(), 20).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn reconstruction() {
        let f = parse_form("y dx + x dy").unwrap();
        assert!((reconstruct_potential(&f, &[0.0, 0.0], &[1.0, 2.0]).unwrap() - 2.0).abs() < 1e-9);
        let zero = parse_form("0 dx + 0 dy").unwrap();
        assert_eq!(reconstruct_potential(&zero, &[0.3, 1.0], &[1.7, -2.0]).unwrap(), 0.0);
        let w = parse_form(WORKED).unwrap();
        let got = reconstruct_potential(&w, &[1.0, 1.0, 1.0], &[1.5, 1.2, 0.8]).unwrap();
        let want = worked_potential(1.5, 1.2, 0.8) - worked_potential(1.0, 1.0, 1.0);
        assert!((got - want).abs() < PATH_TOLERANCE, "{got} vs {want}");
    }

    #[test]
    fn path_independence() {
        assert!(path_independence_check(&parse_form(WORKED).unwrap(), &[1.0, 1.0, 1.0], &[1.5, 1.2, 0.8]).unwrap().passed);
        assert!(path_independence_check(&parse_form("2*x*y dx + x^2 dy").unwrap(), &[0.5, 0.5], &[2.0, 1.5]).unwrap().passed);
        let r = path_independence_check(&parse_form("y dx - x dy").unwrap(), &[1.0, 1.0], &[2.0, 2.0]).unwrap();
        assert!(!r.passed);
        assert!((r.forward + 1.0).abs() < 1e-9 && (r.reversed - 1.0).abs() < 1e-9);
    }

    #[test]
    fn singular_path_is_an_error() {
        let f = parse_form("ln(x) dx").unwrap();
        assert!(matches!(reconstruct_potential(&f, &[-1.0], &[1.0]), Err(NumError::Domain { .. })));
        assert!(matches!(reconstruct_potential(&f, &[1.0, 2.0], &[1.0]), Err(NumError::Dimension { .. })));
    }
}
