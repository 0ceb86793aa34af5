//! Richardson-extrapolated central differences for analytic functions.

use num_complex::Complex64;

use crate::error::{Error, Result};

fn richardson<F: Fn(f64) -> Complex64>(d: F, h: f64) -> Complex64 {
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

/// f'(s) from central differences at steps `h1` and `h2`, each extrapolated
/// once; the two estimates must agree to `agree`.
pub fn derivative<F>(f: F, s: Complex64, h1: f64, h2: f64, agree: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let central = |h: f64| -> Result<Complex64> { Ok((f(s + h)? - f(s - h)?) / (2.0 * h)) };
    let est = |h: f64| -> Result<Complex64> {
        let a = central(h)?;
        let b = central(h / 2.0)?;
        Ok(richardson(|x| if x == h { a } else { b }, h))
    };
    let d1 = est(h1)?;
    let d2 = est(h2)?;
    let diff = (d1 - d2).norm();
    if diff > agree * d2.norm().max(1.0) {
        return Err(Error::Convergence { what: format!("numerical derivative at {s}"), achieved: diff });
    }
    Ok(d2)
}

/// Residue and constant Laurent coefficient of `f` at a simple pole `s0`,
/// from g(s) = (s − s0)f(s): residue = g(s0), constant term = g'(s0).
pub fn simple_pole_laurent<F>(f: F, s0: Complex64, h1: f64, h2: f64, agree: f64) -> Result<(Complex64, Complex64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let g = |s: Complex64| -> Result<Complex64> { Ok((s - s0) * f(s)?) };
    let mean = |h: f64| -> Result<Complex64> { Ok((g(s0 + h)? + g(s0 - h)?) / 2.0) };
    let res_est = |h: f64| -> Result<Complex64> {
        let a = mean(h)?;
        let b = mean(h / 2.0)?;
        Ok((4.0 * b - a) / 3.0)
    };
    let r1 = res_est(h1)?;
    let r2 = res_est(h2)?;
    if (r1 - r2).norm() > agree * r2.norm().max(1.0) {
        return Err(Error::Convergence { what: format!("residue at {s0}"), achieved: (r1 - r2).norm() });
    }
    let slope = derivative(g, s0, h1, h2, agree)?;
    Ok((r2, slope))
}
