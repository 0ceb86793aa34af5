//! Modified Bessel function K_ν(x) of complex order.
//!
//! Uses K_ν(x) = ½∫ exp(−x cosh u − νu) du over the line Im u = φ, where
//! the line is rotated towards the saddle point so that the integrand does
//! not cancel catastrophically for large |Im ν|.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::complex::c;
use crate::error::{Error, Result};
use crate::quad::{integrate, linspace, QuadratureConfig};

pub const DEFAULT_TOL: f64 = 1e-12;

/// K_ν(x) for x > 0.
pub fn k_bessel(nu: Complex64, x: f64) -> Result<Complex64> {
    k_bessel_tol(nu, x, DEFAULT_TOL)
}

fn normalize_order(nu: Complex64) -> Complex64 {
    if nu.re < 0.0 || (nu.re == 0.0 && nu.im < 0.0) {
        -nu
    } else {
        nu
    }
}

pub fn k_bessel_tol(nu: Complex64, x: f64, tol: f64) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("K-Bessel needs x > 0, got {x}")));
    }
    let nu = normalize_order(nu);
    let (a, b) = (nu.re, nu.im);
    let tau = b.abs();
    let phi0 = if tau == 0.0 { 0.0 } else { (tau / x).min(1.0).asin().min(FRAC_PI_2 - 1.0 / (1.0 + tau)) };
    let phi = -b.signum() * phi0;
    let cp = phi.cos();
    let exponent = |t: f64| -> Complex64 {
        let u = c(t, phi);
        -x * u.cosh() - nu * u
    };
    let re_exp = |t: f64| -x * t.cosh() * cp - a * t + b * phi;
    let t_peak = -(a / (x * cp)).asinh();
    let peak = re_exp(t_peak);
    let drop = 40.0 + tol.ln().abs();
    let find_edge = |dir: f64| -> f64 {
        let mut step = 0.5;
        let mut t = t_peak + dir * step;
        while re_exp(t) > peak - drop {
            step *= 1.5;
            t = t_peak + dir * step;
            if step > 800.0 {
                break;
            }
        }
        t
    };
    let (lo, hi) = (find_edge(-1.0), find_edge(1.0));
    let samples = 256;
    let mut variation = 0.0;
    let mut prev = exponent(lo).im;
    for j in 1..=samples {
        let t = lo + (hi - lo) * j as f64 / samples as f64;
        let cur = exponent(t).im;
        variation += (cur - prev).abs();
        prev = cur;
    }
    let panels = ((variation / std::f64::consts::PI).ceil() as usize).clamp(4, 20_000);
    let nodes = linspace(lo, hi, panels);
    // Mass of |integrand| sets the attainable absolute accuracy.
    let mass_cfg = QuadratureConfig { max_subdivisions: panels + 2000, ..QuadratureConfig::with_tol(1e-300, 1e-4) };
    let mass = integrate(|t| c((exponent(t).re - peak).exp(), 0.0), &nodes, &mass_cfg).value.re;
    let cfg = QuadratureConfig {
        abs_tol: (1e-3 * tol * mass).max(100.0 * f64::EPSILON * mass),
        rel_tol: tol,
        max_subdivisions: panels + 6000,
        tail_cutoff: hi,
    };
    let r = integrate(|t| (exponent(t) - peak).exp(), &nodes, &cfg);
    let r = r.require("K-Bessel quadrature")?;
    let scale = peak.exp();
    let mut v = 0.5 * scale * r.value;
    if b == 0.0 {
        v.im = 0.0;
    }
    Ok(v)
}
