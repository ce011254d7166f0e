use thiserror::Error;

const MAX_DEPTH: u32 = 48;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("integrand failed: {0}")]
    Domain(String),
    #[error("error estimate {estimate:e} above tolerance")]
    Tolerance { estimate: f64 },
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn eval<F: FnMut(f64) -> Result<f64, String>>(f: &mut F, t: f64) -> Result<f64, QuadratureError> {
    let v = f(t).map_err(QuadratureError::Domain)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(QuadratureError::Domain(format!("non-finite value at {t}")))
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn refine<F: FnMut(f64) -> Result<f64, String>>(
    f: &mut F,
    p: Panel,
    tol: f64,
    depth: u32,
) -> Result<(f64, f64), QuadratureError> {
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let flm = eval(f, lm)?;
    let frm = eval(f, rm)?;
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if delta.abs() <= 15.0 * tol {
        return Ok((left + right + delta / 15.0, delta.abs() / 15.0));
    }
    if depth == 0 {
        return Err(QuadratureError::Tolerance { estimate: delta.abs() / 15.0 });
    }
    let (l, el) = refine(f, Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left }, tol / 2.0, depth - 1)?;
    let (r, er) = refine(f, Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right }, tol / 2.0, depth - 1)?;
    Ok((l + r, el + er))
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to an estimated absolute
/// error of `tol`. Deterministic; `a > b` gives the negated integral.
pub fn adaptive_simpson<F: FnMut(f64) -> Result<f64, String>>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64, QuadratureError> {
    if a == b {
        return Ok(0.0);
    }
    let fa = eval(&mut f, a)?;
    let fb = eval(&mut f, b)?;
    let fm = eval(&mut f, 0.5 * (a + b))?;
    let whole = simpson(a, b, fa, fm, fb);
    refine(&mut f, Panel { a, b, fa, fm, fb, whole }, tol, MAX_DEPTH).map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_integrals() {
        let v = adaptive_simpson(|t| Ok(t.sin()), 0.0, std::f64::consts::PI, 1e-10).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
        let v = adaptive_simpson(|t| Ok(t.exp()), 1.0, 0.0, 1e-10).unwrap();
        assert!((v + (std::f64::consts::E - 1.0)).abs() < 1e-9);
        assert_eq!(adaptive_simpson(|_| Ok(1.0), 2.0, 2.0, 1e-8).unwrap(), 0.0);
    }

    #[test]
    fn failing_integrand() {
        let r = adaptive_simpson(|t| if t < 0.0 { Err("negative".into()) } else { Ok(t) }, -1.0, 1.0, 1e-8);
        assert!(matches!(r, Err(QuadratureError::Domain(_))));
    }
}
