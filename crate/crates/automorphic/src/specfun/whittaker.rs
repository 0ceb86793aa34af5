//! Whittaker functions W_{∓k, s−1/2}(r) from their integral representations,
//! and the Mellin moment of a product of two K-Bessel functions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::complex::c;
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadratureConfig};
use crate::specfun::gamma::{complex_gamma, ln_gamma};
use crate::specfun::oscillatory::oscillatory_i;

pub const DEFAULT_TOL: f64 = 1e-11;

/// ln of the integrand e^{−ru}(u/(u+1))^k (u(u+1))^{s−1}, written in w with u = w^p
/// and including the Jacobian p w^{p−1}.
fn log_integrand(k: f64, s: Complex64, r: f64, p: f64, w: f64) -> Complex64 {
    let lw = w.ln();
    let u = w.powf(p);
    let l1 = u.ln_1p();
    let lu = p * lw;
    c(p.ln() + (p - 1.0) * lw - r * u + k * (lu - l1), 0.0) + (s - 1.0) * (lu + l1)
}

/// ∫₀^∞ e^{−ru}(u/(u+1))^k u^{s−1}(u+1)^{s−1} du.
pub fn whittaker_minus_integral(k: f64, s: Complex64, r: f64, tol: f64) -> Result<Complex64> {
    if !(r > 0.0) || s.re <= 0.0 || k < 0.0 {
        return Err(Error::domain(format!("W_minus integral needs r > 0, Re s > 0, k >= 0 (k={k}, s={s}, r={r})")));
    }
    let lj = integral_log_scaled(k, s, r, tol)?;
    Ok(lj.1 * lj.0.exp())
}

/// Returns (log scale, integral / e^{log scale}).
fn integral_log_scaled(k: f64, s: Complex64, r: f64, tol: f64) -> Result<(f64, Complex64)> {
    let p = (1.0 / (s.re + k)).ceil().max(1.0);
    let sigma = s.re;
    // Log-magnitude of the u-integrand.
    let mag = |u: f64| -r * u + (sigma + k - 1.0) * u.ln() + (sigma - k - 1.0) * u.ln_1p();
    // Its maximum on u > 0: solve d/du = 0 by bisection when it exists.
    let dmag = |u: f64| -r + (sigma + k - 1.0) / u + (sigma - k - 1.0) / (1.0 + u);
    let u_peak = if dmag(1e-12) <= 0.0 {
        0.0
    } else {
        let (mut lo, mut hi) = (1e-12, 1.0);
        while dmag(hi) > 0.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if dmag(m) > 0.0 {
                lo = m;
            } else {
                hi = m;
            }
        }
        0.5 * (lo + hi)
    };
    let u_ref = if u_peak > 0.0 { u_peak } else { (1.0 / r).min(1.0) };
    let scale = mag(u_ref);
    let drop = 40.0 + tol.ln().abs();
    let mut upper = u_ref.max(1.0 / r) * 2.0;
    while mag(upper) > scale - drop {
        upper *= 1.5;
    }
    let mut pts_u = vec![0.0];
    for frac in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let x = frac * u_ref.max(1.0 / r);
        if x < upper {
            pts_u.push(x);
        }
    }
    pts_u.push(upper);
    pts_u.sort_by(f64::total_cmp);
    pts_u.dedup();
    let pts_w: Vec<f64> = pts_u.iter().map(|&u| u.powf(1.0 / p)).collect();
    let f = |w: f64| -> Complex64 {
        if w == 0.0 {
            return c(0.0, 0.0);
        }
        (log_integrand(k, s, r, p, w) - scale).exp()
    };
    let cfg = QuadratureConfig { max_subdivisions: 5000, ..QuadratureConfig::with_tol(tol * 1e-3, tol) };
    let res = integrate(f, &pts_w, &cfg).require("Whittaker integral")?;
    Ok((scale, res.value))
}

/// W_{−k, s−1/2}(r) for k ≥ 0, Re s > 0, r > 0.
pub fn whittaker_w_minus(k: f64, s: Complex64, r: f64) -> Result<Complex64> {
    if !(r > 0.0) || s.re <= 0.0 || !(k >= 0.0) {
        return Err(Error::domain(format!("W_minus needs r > 0, Re s > 0, k >= 0 (k={k}, s={s}, r={r})")));
    }
    let (scale, j) = integral_log_scaled(k, s, r, DEFAULT_TOL)?;
    let pre = (s * r.ln() - r / 2.0 - ln_gamma(s + k)? + scale).exp();
    Ok(pre * j)
}

/// W_{k, s−1/2}(r) = 4^{s−1}π^{−1}(−1)^kΓ(s+k)r^{1−s}I_k(r,s).
pub fn whittaker_w_plus(k: u32, s: Complex64, r: f64) -> Result<Complex64> {
    if !(r > 0.0) || s.re <= 0.25 {
        return Err(Error::domain(format!("W_plus needs r > 0, Re s > 1/4 (s={s}, r={r})")));
    }
    let ik = oscillatory_i(k, r, s)?;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let pre = ((s - 1.0) * 4f64.ln() + ln_gamma(s + k as f64)? + (1.0 - s) * r.ln()).exp();
    Ok(sign / PI * pre * ik)
}

/// Upper bound F(r,σ) for the modulus of [`whittaker_minus_integral`].
pub fn minus_integral_bound(r: f64, sigma: f64) -> f64 {
    let g = |x: f64| complex_gamma(c(x, 0.0)).map(|v| v.re).unwrap_or(f64::INFINITY);
    if sigma <= 1.0 {
        r.powf(-sigma) * g(sigma)
    } else {
        r.powf(-sigma) * 2f64.powf(sigma - 1.0) * (g(sigma) + r.powf(1.0 - sigma) * g(2.0 * sigma - 1.0))
    }
}

/// ∫₀^∞ K_μ(ay)K_ν(ay)y^{s−1}dy in closed form:
/// 2^{s−3}a^{−s}Γ((s±μ±ν)/2)/Γ(s).
pub fn bessel_moment(mu: Complex64, nu: Complex64, s: Complex64, a: f64) -> Result<Complex64> {
    if !(a > 0.0) {
        return Err(Error::domain(format!("Bessel moment needs a > 0, got {a}")));
    }
    if s.re <= mu.re.abs() + nu.re.abs() {
        return Err(Error::domain(format!("Bessel moment diverges: Re s = {} <= |Re mu| + |Re nu|", s.re)));
    }
    let lg = ln_gamma((s + mu + nu) / 2.0)?
        + ln_gamma((s + mu - nu) / 2.0)?
        + ln_gamma((s - mu + nu) / 2.0)?
        + ln_gamma((s - mu - nu) / 2.0)?
        - ln_gamma(s)?;
    Ok((lg + (s - 3.0) * 2f64.ln() - s * a.ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::linspace;
    use crate::specfun::bessel::k_bessel;

    #[test]
    fn minus_reduces_to_bessel() {
        for &(s, x) in &[(c(0.5, 1.0), 0.7), (c(1.3, -2.0), 2.5), (c(0.6, 0.0), 10.0)] {
            let w = whittaker_w_minus(0.0, s, 2.0 * x).unwrap();
            let kb = (2.0 * x / PI).sqrt() * k_bessel(s - 0.5, x).unwrap();
            assert!((w - kb).norm() < 1e-9 * kb.norm(), "{w} {kb}");
        }
    }

    #[test]
    fn minus_matches_plain_integration() {
        // Independent trapezoid-free check: fixed Simpson on a truncated range.
        let (k, s, r) = (1.0, c(1.0, 0.0), 2.0);
        let n = 200_000;
        let h = 30.0 / n as f64;
        let f = |u: f64| (-r * u).exp() * (u / (u + 1.0)).powf(k);
        let mut acc = f(0.0) + f(30.0);
        for j in 1..n {
            acc += if j % 2 == 1 { 4.0 } else { 2.0 } * f(j as f64 * h);
        }
        let j = acc * h / 3.0;
        let expect = r * (-r / 2.0).exp() * j;
        let w = whittaker_w_minus(k, s, r).unwrap();
        assert!((w.re - expect).abs() < 1e-9 * expect && w.im.abs() < 1e-14, "{w} {expect}");
    }

    #[test]
    fn minus_within_trivial_bound() {
        let (k, s, r) = (1.0, c(1.5, 0.0), 4.0);
        let j = whittaker_minus_integral(k, s, r, 1e-10).unwrap();
        assert!(j.norm() <= minus_integral_bound(r, s.re));
    }

    #[test]
    fn plus_reduces_to_bessel() {
        let s = c(0.75, 1.5);
        let r = 3.0;
        let w = whittaker_w_plus(0, s, r).unwrap();
        let kb = (r / PI).sqrt() * k_bessel(s - 0.5, r / 2.0).unwrap();
        assert!((w - kb).norm() < 1e-9 * kb.norm());
    }

    #[test]
    fn plus_matches_original_representation() {
        // W_{1,1/2}(4) from the real-line form with a large cutoff.
        let (k, s, r) = (1u32, c(1.0, 0.0), 4.0);
        let f = |u: f64| {
            let uc = c(u, 0.0);
            let rot = (uc - crate::complex::I) / (uc + crate::complex::I);
            rot / (1.0 + u * u) * c(0.0, -r * u / 2.0).exp()
        };
        let l = 4000.0;
        let n = (2.0 * l / 0.5) as usize;
        let cfg = QuadratureConfig { max_subdivisions: n + 10000, ..QuadratureConfig::with_tol(1e-14, 1e-13) };
        let ik = integrate(f, &linspace(-l, l, n), &cfg).value;
        let expect = -1.0 / PI * ik; // 4^0 Γ(2) r^0 (−1)^1 / π
        let w = whittaker_w_plus(k, s, r).unwrap();
        assert!((w - expect).norm() < 1e-6 * w.norm(), "{w} {expect}");
        // Closed form W_{1,1/2}(r) = r e^{−r/2}.
        assert!((w.re - r * (-r / 2.0).exp()).abs() < 1e-9);
    }

    #[test]
    fn plus_conjugation() {
        let s = c(0.7, 2.0);
        let a = whittaker_w_plus(2, s, 5.0).unwrap();
        let b = whittaker_w_plus(2, s.conj(), 5.0).unwrap();
        assert!((a - b.conj()).norm() < 1e-9 * a.norm());
    }

    #[test]
    fn moment_matches_quadrature() {
        let (mu, nu, s, a) = (c(0.0, 1.0), c(0.0, -1.0), c(3.0, 0.0), 2.0 * PI);
        let f = |y: f64| k_bessel(mu, a * y).unwrap() * k_bessel(nu, a * y).unwrap() * y * y;
        let cfg = QuadratureConfig::with_tol(1e-16, 1e-10);
        let q = integrate(f, &[1e-9, 0.05, 0.2, 0.5, 1.0, 2.0, 6.0], &cfg).value;
        let m = bessel_moment(mu, nu, s, a).unwrap();
        assert!((q - m).norm() < 1e-6 * m.norm(), "{q} {m}");
        let swapped = bessel_moment(nu, mu, s, a).unwrap();
        assert!((swapped - m).norm() < 1e-15 * m.norm());
    }

    #[test]
    fn moment_domain() {
        assert!(bessel_moment(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), 1.0).is_err());
    }
}
