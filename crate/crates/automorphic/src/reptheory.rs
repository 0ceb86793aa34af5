//! Principal series on the compact picture: K-vectors as even Fourier series
//! on the rotation group, intertwining coefficients, Sobolev norms, the
//! complexified elements g_ε and their growth probes, and the tensor-product
//! function Ψ^{r,s} on basis vectors.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::complex::{c, I};
use crate::eisenstein::{EisensteinSeries, TailPolicy};
use crate::error::{Error, Result};
use crate::lattice::{HyperbolicPoint, LatticeModel};
use crate::quad::{integrate_real, QuadratureConfig};
use crate::specfun::probes::log_log_slope;

/// Smallest and largest θ-grid exponents tried by the adaptive transform.
pub const MIN_GRID_EXP: u32 = 6;
pub const MAX_GRID_EXP: u32 = 22;
/// Energy fraction allowed in the top 10% of modes before the grid is refined.
pub const SPECTRAL_TAIL: f64 = 1e-10;
/// Default distance kept from the cancellation lines s = r and s = 1 − r.
pub const DELTA_POLE: f64 = 1e-3;

/// 𝔦_{s,2υ} = (−1)^υΓ(s)²/(Γ(s+υ)Γ(s−υ)) as ∏_{j=1}^{|υ|}(j − s)/(s + j − 1).
pub fn intertwining_coeff(s: Complex64, upsilon: i32) -> Result<Complex64> {
    let mut acc = c(1.0, 0.0);
    for j in 1..=upsilon.unsigned_abs() {
        let den = s + (j as f64 - 1.0);
        if den == c(0.0, 0.0) {
            return Err(Error::pole(format!("intertwining coefficient at s = {s}, weight {upsilon}")));
        }
        acc *= (j as f64 - s) / den;
    }
    Ok(acc)
}

/// A π-periodic function on K, stored by its coefficients on e_{2υ}(k_θ) = e^{2iυθ}
/// and optionally by samples at θ_j = πj/N.
#[derive(Debug, Clone, PartialEq)]
pub struct KVector {
    pub coefficients: BTreeMap<i32, Complex64>,
    pub samples: Option<Vec<Complex64>>,
}

impl KVector {
    pub fn from_coefficients(coefficients: BTreeMap<i32, Complex64>) -> Self {
        Self { coefficients, samples: None }
    }

    /// The basis vector e_{2υ}.
    pub fn basis(upsilon: i32) -> Self {
        Self::from_coefficients(BTreeMap::from([(upsilon, c(1.0, 0.0))]))
    }

    pub fn coefficient(&self, upsilon: i32) -> Complex64 {
        self.coefficients.get(&upsilon).copied().unwrap_or_default()
    }

    /// Value at k_θ from the coefficients.
    pub fn value(&self, theta: f64) -> Complex64 {
        self.coefficients.iter().map(|(&u, &a)| a * (2.0 * I * (u as f64 * theta)).exp()).sum()
    }

    /// L²(K) norm (Haar probability measure) from the coefficients.
    pub fn norm(&self) -> f64 {
        self.coefficients.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// L²(K) norm from the samples (trapezoid rule, exact for resolved vectors).
    pub fn grid_norm(&self) -> Option<f64> {
        let v = self.samples.as_ref()?;
        Some((v.iter().map(|z| z.norm_sqr()).sum::<f64>() / v.len() as f64).sqrt())
    }

    /// Fraction of ‖v‖² carried by the outer 10% of stored modes.
    pub fn spectral_tail(&self) -> f64 {
        let total: f64 = self.coefficients.values().map(|a| a.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let reach = self.coefficients.keys().map(|u| u.unsigned_abs()).max().unwrap_or(0);
        let cut = reach - reach / 10;
        let outer: f64 = self.coefficients.iter().filter(|(u, _)| u.unsigned_abs() > cut).map(|(_, a)| a.norm_sqr()).sum();
        outer / total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SobolevOrder(f64);

impl SobolevOrder {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::Invalid(format!("Sobolev order must be a finite β >= 0, got {beta}")));
        }
        Ok(Self(beta))
    }

    pub fn beta(self) -> f64 {
        self.0
    }
}

/// S_β(v) = (Σ (1 + |υ|^β)²|a_{2υ}|²)^{1/2}, with 0^β = 0 for β > 0.
pub fn sobolev_norm(v: &KVector, beta: SobolevOrder) -> f64 {
    v.coefficients
        .iter()
        .map(|(&u, a)| {
            let w = 1.0 + (u.unsigned_abs() as f64).powf(beta.0);
            w * w * a.norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

/// A complex 2×2 matrix of determinant one on which v_g has positive real part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElementU {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl GroupElementU {
    pub fn new(a: Complex64, b: Complex64, c_: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c_;
        let scale = 1.0 + a.norm() * d.norm() + b.norm() * c_.norm();
        if (det - 1.0).norm() > 1e-12 * scale {
            return Err(Error::Invalid(format!("determinant {det} is not 1")));
        }
        let g = Self { a, b, c: c_, d };
        let (lo, size) = (g.min_re_v(), g.v_scale());
        if !(lo > 1e-12 * size) {
            return Err(Error::domain(format!("min Re v_g = {lo:e} is not positive; element outside the domain")));
        }
        Ok(g)
    }

    pub fn identity() -> Self {
        Self { a: c(1.0, 0.0), b: c(0.0, 0.0), c: c(0.0, 0.0), d: c(1.0, 0.0) }
    }

    /// diag(e^{(π/4−ε)i}, e^{−(π/4−ε)i}).
    pub fn g_eps(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 0.2) {
            return Err(Error::Invalid(format!("ε must lie in (0, 1/5), got {eps}")));
        }
        let a = (I * (PI / 4.0 - eps)).exp();
        Self::new(a, c(0.0, 0.0), c(0.0, 0.0), a.conj())
    }

    pub fn real(a: f64, b: f64, c_: f64, d: f64) -> Result<Self> {
        Self::new(c(a, 0.0), c(b, 0.0), c(c_, 0.0), c(d, 0.0))
    }

    fn quadratic(&self) -> (Complex64, Complex64, Complex64) {
        (self.a * self.a + self.b * self.b, self.a * self.c + self.b * self.d, self.c * self.c + self.d * self.d)
    }

    /// Exact minimum over θ of Re v_g(k_θ).
    pub fn min_re_v(&self) -> f64 {
        let (qa, qb, qc) = self.quadratic();
        0.5 * (qa.re + qc.re) - (0.25 * (qc.re - qa.re).powi(2) + qb.re * qb.re).sqrt()
    }

    fn v_scale(&self) -> f64 {
        let (qa, qb, qc) = self.quadratic();
        qa.norm() + qb.norm() + qc.norm()
    }
}

/// v_g(k_θ) = (a²+b²)sin²θ + (ac+bd)sin2θ + (c²+d²)cos²θ.
pub fn v_g(g: &GroupElementU, theta: f64) -> Complex64 {
    let (qa, qb, qc) = g.quadratic();
    let (sn, cs) = theta.sin_cos();
    qa * (sn * sn) + qb * (2.0 * theta).sin() + qc * (cs * cs)
}

fn transform_on_grid(s: Complex64, g: &GroupElementU, q: u32) -> Result<KVector> {
    let n = 1usize << q;
    let mut data = Vec::with_capacity(n);
    for j in 0..n {
        let v = v_g(g, PI * j as f64 / n as f64);
        if !(v.re > 0.0) {
            return Err(Error::domain(format!("Re v_g = {} at θ_{j} on a grid of {n}", v.re)));
        }
        data.push((-s * v.ln()).exp());
    }
    let samples = data.clone();
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut data);
    let scale = 1.0 / n as f64;
    let half = (n / 2) as i32;
    let coefficients = data
        .into_iter()
        .enumerate()
        .map(|(j, a)| {
            let j = j as i32;
            (if j < half { j } else { j - n as i32 }, a * scale)
        })
        .collect();
    Ok(KVector { coefficients, samples: Some(samples) })
}

/// π^s(g)e₀ = v_g^{−s} (principal branch). With `q = None` the grid 2^q is
/// doubled until the outer 10% of modes carries less than [`SPECTRAL_TAIL`] of
/// the energy, then doubled once more so the coefficient amplitudes (not just
/// the energy) are resolved.
pub fn pi_g_e0(s: Complex64, g: &GroupElementU, q: Option<u32>) -> Result<KVector> {
    if let Some(q) = q {
        if !(1..=MAX_GRID_EXP).contains(&q) {
            return Err(Error::Invalid(format!("grid exponent {q} outside 1..={MAX_GRID_EXP}")));
        }
        return transform_on_grid(s, g, q);
    }
    let mut last = 1.0;
    for q in MIN_GRID_EXP..=MAX_GRID_EXP {
        let v = transform_on_grid(s, g, q)?;
        last = v.spectral_tail();
        if last < SPECTRAL_TAIL {
            return transform_on_grid(s, g, (q + 1).min(MAX_GRID_EXP));
        }
    }
    Err(Error::Convergence { what: format!("spectral resolution of π^{s}(g)e₀ on 2^{MAX_GRID_EXP} points"), achieved: last })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormGrowthReport {
    pub eps: f64,
    pub t: Vec<f64>,
    pub norm_sq: Vec<f64>,
    /// Least-squares slope of log ‖π^{1/2+it}(g_ε)e₀‖² against t.
    pub slope: f64,
    /// e^{intercept} of the same fit.
    pub constant: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

/// ‖π^{1/2+it}(g)e₀‖² = (1/π)∫_0^π |v|^{−1}e^{2t·arg v} dθ.
pub fn pi_norm_sq(g: &GroupElementU, t: f64, tol: f64) -> Result<f64> {
    let cfg = QuadratureConfig { abs_tol: 0.0, rel_tol: tol, max_subdivisions: 20_000, ..QuadratureConfig::default() };
    let points: Vec<f64> = (0..=8).map(|j| PI * j as f64 / 8.0).collect();
    let res = integrate_real(
        |th| {
            let v = v_g(g, th);
            (2.0 * t * v.arg() - v.norm().ln()).exp()
        },
        &points,
        &cfg,
    );
    res.require("norm of π(g)e₀")?;
    Ok(res.value.re / PI)
}

/// Fits log ‖π^{1/2+it}(g_ε)e₀‖² against t.
pub fn norm_growth_probe(eps: f64, t_grid: &[f64]) -> Result<NormGrowthReport> {
    let g = GroupElementU::g_eps(eps)?;
    if t_grid.len() < 2 {
        return Err(Error::Invalid("norm-growth fit needs at least two t values".into()));
    }
    let norm_sq = t_grid.par_iter().map(|&t| pi_norm_sq(&g, t, 1e-10)).collect::<Result<Vec<_>>>()?;
    let logs: Vec<f64> = norm_sq.iter().map(|v| v.ln()).collect();
    let (slope, intercept) = linear_fit(t_grid, &logs);
    Ok(NormGrowthReport {
        eps,
        t: t_grid.to_vec(),
        norm_sq,
        slope,
        constant: intercept.exp(),
        lower_bound: PI - 12.0 * eps,
        upper_bound: PI,
    })
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SobolevGrowthReport {
    pub beta: f64,
    pub t: f64,
    pub eps: Vec<f64>,
    pub sobolev: Vec<f64>,
    /// S_β·ε^β per grid point.
    pub scaled: Vec<f64>,
    pub max_scaled: f64,
    /// max/min of `scaled` over the grid.
    pub spread: f64,
    /// Log-log slope of S_β against ε.
    pub slope: f64,
}

/// S_β(π^{1/2+it}(g_ε)e₀) across an ε grid.
pub fn sobolev_growth_probe(beta: f64, t: f64, eps_grid: &[f64]) -> Result<SobolevGrowthReport> {
    let order = SobolevOrder::new(beta)?;
    if eps_grid.len() < 2 {
        return Err(Error::Invalid("Sobolev-growth fit needs at least two ε values".into()));
    }
    let s = c(0.5, t);
    let sobolev = eps_grid
        .par_iter()
        .map(|&eps| {
            let v = pi_g_e0(s, &GroupElementU::g_eps(eps)?, None)?;
            let tail = v.spectral_tail().sqrt();
            if tail > 1e-8 {
                return Err(Error::Convergence { what: format!("θ-grid resolution at ε = {eps}"), achieved: tail });
            }
            Ok(sobolev_norm(&v, order))
        })
        .collect::<Result<Vec<_>>>()?;
    let scaled: Vec<f64> = eps_grid.iter().zip(&sobolev).map(|(e, s)| s * e.powf(beta)).collect();
    let max_scaled = scaled.iter().cloned().fold(f64::MIN, f64::max);
    let min_scaled = scaled.iter().cloned().fold(f64::MAX, f64::min);
    Ok(SobolevGrowthReport {
        beta,
        t,
        eps: eps_grid.to_vec(),
        slope: log_log_slope(eps_grid, &sobolev),
        sobolev,
        scaled,
        max_scaled,
        spread: max_scaled / min_scaled,
    })
}

/// Errors when (r, s) lies within `delta` of the lines s = r or s = 1 − r.
pub fn check_cancellation_distance(r: Complex64, s: Complex64, delta: f64) -> Result<()> {
    let d = (r - s).norm().min((r + s - 1.0).norm());
    if d < delta * (1.0 - 1e-9) {
        return Err(Error::pole(format!("(r, s) = ({r}, {s}) is {d:e} from a cancellation line (limit {delta:e})")));
    }
    Ok(())
}

/// Ψ^{r,s}(e_{2υ} ⊗ e_{2σ}) at (z, k_θ):
/// e_{2(υ+σ)}(k_θ)·[E(z,r,2υ)E(z,s,2σ) − E(z,r+s,2w) − φ(s)𝔦_{s,2σ}E(z,r+1−s,2w)
/// − φ(r)𝔦_{r,2υ}E(z,1−r+s,2w) − 𝔦_{r,2υ}𝔦_{s,2σ}φ(r)φ(s)E(z,2−r−s,2w)] with w = υ+σ.
/// The height and rotation normalizations are trivial for a single cusp at ∞.
#[allow(clippy::too_many_arguments)]
pub fn psi_tensor_basis(
    model: &dyn LatticeModel,
    z: HyperbolicPoint,
    theta: f64,
    r: Complex64,
    s: Complex64,
    upsilon: i32,
    sigma: i32,
    policy: TailPolicy,
) -> Result<Complex64> {
    let w = upsilon + sigma;
    if w == 0 {
        check_cancellation_distance(r, s, DELTA_POLE)?;
    }
    let e = |arg: Complex64, weight: i32| EisensteinSeries::new(model, arg, weight, policy)?.eval(z);
    let (phi_r, phi_s) = (model.scattering(r)?, model.scattering(s)?);
    let (ir, is) = (intertwining_coeff(r, upsilon)?, intertwining_coeff(s, sigma)?);
    let bracket = e(r, upsilon)? * e(s, sigma)?
        - e(r + s, w)?
        - phi_s * is * e(r + 1.0 - s, w)?
        - phi_r * ir * e(1.0 - r + s, w)?
        - ir * is * phi_r * phi_s * e(2.0 - r - s, w)?;
    Ok((2.0 * I * (w as f64 * theta)).exp() * bracket)
}
