//! The oscillatory integral
//! I_k(r,s) = ∫ (1+u²)^{−s} ((u−i)/(u+i))^k e^{−iru/2} du
//! and its integrated-by-parts forms.
//!
//! The real line is deformed into a hairpin in the lower half plane: up the
//! ray Re u = −U, across Im u = −η through the saddle of the phase, and back
//! down Re u = U. On the rays the integrand decays like e^{−r|Im u|/2}, so
//! no tail bound is needed.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::complex::{c, I};
use crate::error::{Error, Result};
use crate::quad::{integrate, linspace, QuadratureConfig};
use crate::specfun::bessel::k_bessel;
use crate::specfun::gamma::ln_gamma;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Which algebraic form of the integrand to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrandForm {
    /// (1+u²)^{−s}.
    Original,
    /// Integrated by parts once.
    OnceByParts,
    /// Integrated by parts twice; absolutely convergent for Re s > −1/2.
    TwiceByParts,
}

/// I_k(r,s) from the twice-integrated form.
pub fn oscillatory_i(k: u32, r: f64, s: Complex64) -> Result<Complex64> {
    oscillatory_i_form(k, r, s, IntegrandForm::TwiceByParts, DEFAULT_TOL)
}

/// k = 0 closed form 2√π (r/4)^{s−1/2} K_{s−1/2}(r/2) / Γ(s).
fn i_zero(r: f64, s: Complex64) -> Result<Complex64> {
    let kb = k_bessel(s - 0.5, r / 2.0)?;
    let pre = ((s - 0.5) * (r / 4.0).ln() - ln_gamma(s)?).exp();
    Ok(2.0 * PI.sqrt() * pre * kb)
}

fn check_args(r: f64, s: Complex64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("oscillatory integral needs r > 0, got {r}")));
    }
    if s.re < 0.25 {
        return Err(Error::domain(format!("oscillatory integral needs Re(s) >= 1/4, got {s}")));
    }
    Ok(())
}

pub fn oscillatory_i_form(k: u32, r: f64, s: Complex64, form: IntegrandForm, tol: f64) -> Result<Complex64> {
    check_args(r, s)?;
    if k == 0 {
        return i_zero(r, s);
    }
    let kf = k as f64;
    let amplitude = move |u: Complex64| -> Complex64 {
        let p = u * u + 1.0;
        let lp = p.ln();
        let rot = ((u - I) / (u + I)).powu(k);
        let wave = (-I * (r / 2.0) * u).exp();
        let body = match form {
            IntegrandForm::Original => (-s * lp).exp(),
            IntegrandForm::OnceByParts => 4.0 / r * (kf + I * s * u) * (-(s + 1.0) * lp).exp(),
            IntegrandForm::TwiceByParts => {
                let poly = -(2.0 * s + 1.0) * s * u * u + 2.0 * I * kf * (2.0 * s + 1.0) * u + (2.0 * kf * kf + s);
                8.0 / (r * r) * poly * (-(s + 2.0) * lp).exp()
            }
        };
        body * rot * wave
    };
    hairpin(k, r, amplitude, tol)
}

/// Saddle depth η and half-width U of the hairpin.
pub fn hairpin_geometry(k: u32, r: f64) -> (f64, f64) {
    let ratio = 4.0 * k as f64 / r;
    let eta = (1.0 - ratio).max(0.0).sqrt();
    let half = (2.0 * ratio).sqrt().max(1.0) + 1.0;
    (eta, half)
}

fn hairpin<F: Fn(Complex64) -> Complex64>(k: u32, r: f64, f: F, tol: f64) -> Result<Complex64> {
    let (eta, half) = hairpin_geometry(k, r);
    let depth = 2.0 / r * (40.0 + tol.ln().abs()) + 1.0;
    let width = 2.0 * half;
    // Parameter τ: [0, depth] up the left ray, [depth, depth + width]
    // across, [depth + width, 2 depth + width] down the right ray.
    let t1 = depth;
    let t2 = depth + width;
    let t3 = 2.0 * depth + width;
    let g = |tau: f64| -> Complex64 {
        if tau <= t1 {
            let u = c(-half, -(eta + depth) + tau);
            f(u) * I
        } else if tau <= t2 {
            let u = c(-half + (tau - t1), -eta);
            f(u)
        } else {
            let u = c(half, -eta - (tau - t2));
            f(u) * (-I)
        }
    };
    let panel = PI / (r / 2.0 + 2.0 * k as f64);
    let across = ((width / panel).ceil() as usize).max(4);
    let ray_panels = ((depth * r / 4.0).ceil() as usize).clamp(4, 400);
    let mut points = linspace(0.0, t1, ray_panels);
    points.pop();
    let mut mid = linspace(t1, t2, across);
    mid.pop();
    points.extend(mid);
    points.extend(linspace(t2, t3, ray_panels));
    let mass_cfg = QuadratureConfig { max_subdivisions: points.len() + 2000, ..QuadratureConfig::with_tol(1e-300, 1e-4) };
    let mass = integrate(|t| c(g(t).norm(), 0.0), &points, &mass_cfg).value.re;
    let cfg = QuadratureConfig {
        abs_tol: (1e-4 * tol * mass).max(100.0 * f64::EPSILON * mass),
        rel_tol: tol,
        max_subdivisions: points.len() + 20_000,
        tail_cutoff: t3,
    };
    let res = integrate(g, &points, &cfg).require("oscillatory integral")?;
    Ok(res.value)
}
