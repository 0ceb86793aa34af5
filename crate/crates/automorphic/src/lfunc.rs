//! The Rankin–Selberg L-function of |E(·, ½ + it₀)|², its gamma factor, the
//! coefficient sums Σ|ψ_m|² with their predicted main terms, smooth cutoffs
//! with Mellin transforms, and scans of mean-square growth on the critical line.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{c, serde_complex, I};
use crate::error::{Error, Result};
use crate::lattice::LatticeModel;
use crate::quad::{integrate, integrate_real, QuadratureConfig};
use crate::renorm::{rn_triple_product, TripleMode};
use crate::specfun::probes::log_log_slope;
use crate::specfun::{digamma, ln_gamma, riemann_zeta};

/// The Eisenstein parameter s₀ = ½ + it₀ and the lattice it lives on.
#[derive(Clone, Copy)]
pub struct LSpec<'m> {
    pub t0: f64,
    /// Re s₀; only ½ is supported.
    pub sigma0: f64,
    pub model: &'m dyn LatticeModel,
}

impl<'m> LSpec<'m> {
    pub fn new(model: &'m dyn LatticeModel, t0: f64) -> Result<Self> {
        if !t0.is_finite() {
            return Err(Error::Invalid(format!("t0 must be finite, got {t0}")));
        }
        Ok(Self { t0, sigma0: 0.5, model })
    }

    pub fn s0(&self) -> Complex64 {
        c(self.sigma0, self.t0)
    }

    fn require_nonzero_t0(&self) -> Result<()> {
        if self.t0 == 0.0 {
            return Err(Error::domain("the coefficient-sum asymptotics need t0 != 0"));
        }
        Ok(())
    }
}

/// G(s) = Γ(s/2 + it₀)Γ(s/2 − it₀)Γ(s/2)²/(8π^sΓ(s)).
pub fn gamma_factor(spec: &LSpec<'_>, s: Complex64) -> Result<Complex64> {
    let h = s / 2.0;
    let t = c(0.0, spec.t0);
    let lg = ln_gamma(h + t)? + ln_gamma(h - t)? + 2.0 * ln_gamma(h + (spec.sigma0 - 0.5))?;
    let lg_den = ln_gamma(s).unwrap_or(c(f64::INFINITY, 0.0));
    if lg_den.re.is_infinite() {
        return Ok(c(0.0, 0.0));
    }
    let v = (lg - lg_den - s * PI.ln()).exp() / 8.0;
    Ok(if s.im == 0.0 { c(v.re, 0.0) } else { v })
}

/// |ψ_m(s₀)|² for m = 1..=m (index 0 unused).
pub fn coefficient_squares(spec: &LSpec<'_>, m: usize) -> Result<Vec<f64>> {
    let limit = spec.model.divisors().limit();
    if m > limit {
        return Err(Error::SieveLimit { limit, requested: m });
    }
    Ok(spec.model.fourier_coefficients(spec.s0(), m)?.into_iter().map(|z| z.norm_sqr()).collect())
}

/// Σ_{0<|m|≤M}|ψ_m(s₀)|²/|m|^s.
pub fn l_series(spec: &LSpec<'_>, s: Complex64, m: usize) -> Result<Complex64> {
    let sq = coefficient_squares(spec, m)?;
    let mut acc = c(0.0, 0.0);
    for (k, v) in sq.iter().enumerate().skip(1) {
        acc += *v * (-s * (k as f64).ln()).exp();
    }
    Ok(2.0 * acc)
}

/// (8cosh(πt₀)/|ζ(1+2it₀)|²)·ζ(s)²ζ(s+2it₀)ζ(s−2it₀)/ζ(2s).
pub fn l_closed_form(spec: &LSpec<'_>, s: Complex64) -> Result<Complex64> {
    let t2 = c(0.0, 2.0 * spec.t0);
    let pre = 8.0 * (PI * spec.t0).cosh() / riemann_zeta(1.0 + t2)?.norm_sqr();
    let z = riemann_zeta(s)?;
    Ok(pre * z * z * riemann_zeta(s + t2)? * riemann_zeta(s - t2)? / riemann_zeta(2.0 * s)?)
}

/// S(M) = Σ_{0<|m|≤M}|ψ_m(s₀)|².
pub fn coeff_sum(spec: &LSpec<'_>, m: usize) -> Result<f64> {
    Ok(coeff_sums(spec, &[m])?[0])
}

/// S(M) for several M from one sieve pass.
pub fn coeff_sums(spec: &LSpec<'_>, ms: &[usize]) -> Result<Vec<f64>> {
    let top = ms.iter().copied().max().unwrap_or(0);
    let sq = coefficient_squares(spec, top)?;
    let mut prefix = vec![0.0; top + 1];
    for k in 1..=top {
        prefix[k] = prefix[k - 1] + 2.0 * sq[k];
    }
    Ok(ms.iter().map(|&m| prefix[m]).collect())
}

/// Constants of the predicted coefficient-sum asymptotics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticConstants {
    pub t0: f64,
    /// Coefficient of M log M: 16cosh(πt₀)/(μπ).
    pub main_loglinear: f64,
    /// Coefficient of M.
    pub main_linear: f64,
    #[serde(with = "serde_complex")]
    pub c_one: Complex64,
    #[serde(with = "serde_complex")]
    pub c_osc: Complex64,
    /// Real poles ζ ∈ (½, 1) of the scattering function with their constants.
    pub c_poles: Vec<(f64, [f64; 2])>,
}

impl AsymptoticConstants {
    /// A·M log M + B·M + Re(c_osc M^{1+2it₀}) + Σ c_ζ M^ζ.
    pub fn prediction(&self, m: f64) -> f64 {
        let osc = self.c_osc * ((1.0 + 2.0 * I * self.t0) * m.ln()).exp();
        let poles: f64 = self.c_poles.iter().map(|(z, cz)| cz[0] * m.powf(*z)).sum();
        self.main_loglinear * m * m.ln() + self.main_linear * m + osc.re + poles
    }
}

/// Real poles of φ in (½, 1), located by sign changes of 1/φ on a grid.
pub fn exceptional_poles(model: &dyn LatticeModel) -> Result<Vec<f64>> {
    let inv = |s: f64| -> Result<f64> { Ok(1.0 / model.scattering(c(s, 0.0))?.re) };
    let n = 400;
    let mut poles = Vec::new();
    let mut prev = inv(0.5 + 0.5 / n as f64)?;
    for j in 2..n {
        let s = 0.5 + 0.5 * j as f64 / n as f64;
        let cur = inv(s)?;
        if prev.signum() != cur.signum() {
            let (mut a, mut b) = (s - 0.5 / n as f64, s);
            let fa = prev;
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if inv(m)?.signum() == fa.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            poles.push(0.5 * (a + b));
        }
        prev = cur;
    }
    Ok(poles)
}

/// c₁, c_{1+2it₀} and the main-term coefficients.
pub fn asymptotic_constants(spec: &LSpec<'_>) -> Result<AsymptoticConstants> {
    spec.require_nonzero_t0()?;
    let model = spec.model;
    let poles = exceptional_poles(model)?;
    if !poles.is_empty() {
        return Err(Error::domain(format!("scattering poles in (1/2, 1) at {poles:?}; their constants are not implemented")));
    }
    let mu = model.covolume();
    let t0 = spec.t0;
    let s0 = spec.s0();
    let phi = model.scattering(s0)?;
    let phi_bar = model.scattering(s0.conj())?;
    let dphi = model.scattering_derivative(s0)?;
    let (_, phi_tilde_one) = model.scattering_laurent_at_one()?;
    let c_one = -dphi * phi_bar / mu + (phi.norm_sqr() + 1.0) * phi_tilde_one;
    let ch = (PI * t0).cosh();
    let main_loglinear = 16.0 * ch / (mu * PI);
    let dig = digamma(c(0.5, t0))?.re;
    let main_linear = 8.0 * ch / (mu * PI) * (c_one.re * mu + 2.0 * (4.0 * PI).ln() - 2.0 - 2.0 * dig);
    let it = c(0.0, t0);
    let lg = ln_gamma(1.0 + it)? - ln_gamma(0.5 + 2.0 * it)? - ln_gamma(1.5 + it)?;
    let c_osc = 8.0 * (2.0 * it * (2.0 * PI).ln() + lg).exp() * model.scattering(1.0 + 2.0 * it)? * phi_bar;
    Ok(AsymptoticConstants { t0, main_loglinear, main_linear, c_one, c_osc, c_poles: Vec::new() })
}

/// One row of the coefficient-sum table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumRow {
    #[serde(rename = "M")]
    pub m: usize,
    pub sum: f64,
    pub prediction: f64,
    pub residual: f64,
}

/// S(M) against the full prediction at each M.
pub fn coeff_sum_table(spec: &LSpec<'_>, ms: &[usize]) -> Result<Vec<SumRow>> {
    let k = asymptotic_constants(spec)?;
    let sums = coeff_sums(spec, ms)?;
    Ok(ms
        .iter()
        .zip(sums)
        .map(|(&m, sum)| {
            let prediction = k.prediction(m as f64);
            SumRow { m, sum, prediction, residual: sum - prediction }
        })
        .collect())
}

/// Smooth cutoff ψ_U: 1 on [0, 1 − 1/U], 0 on [1 + 1/U, ∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub u: f64,
    /// Continuous derivatives of the bridge; None for the C^∞ bump.
    pub smoothness: Option<u32>,
}

impl CutoffSpec {
    pub fn new(u: f64) -> Result<Self> {
        Self::with_smoothness(u, None)
    }

    pub fn with_smoothness(u: f64, smoothness: Option<u32>) -> Result<Self> {
        if !(u > 2.0) || !u.is_finite() {
            return Err(Error::Invalid(format!("cutoff width parameter U must exceed 2, got {u}")));
        }
        Ok(Self { u, smoothness })
    }

    /// −ψ′ in the bridge variable v = U(x − 1) ∈ [−1, 1], before normalization:
    /// exp(1 − 1/(1 − v²)), or (1 − v²)^n for finite smoothness n.
    fn kernel(&self, v: f64) -> f64 {
        if v.abs() >= 1.0 {
            return 0.0;
        }
        match self.smoothness {
            None => (1.0 - 1.0 / (1.0 - v * v)).exp(),
            Some(n) => (1.0 - v * v).powi(n as i32),
        }
    }

    fn kernel_integral(&self, a: f64, b: f64) -> f64 {
        let cfg = QuadratureConfig::with_tol(1e-15, 1e-13);
        integrate_real(|v| self.kernel(v), &[a, 0.5 * (a + b), b], &cfg).value.re
    }

    fn norm(&self) -> f64 {
        self.kernel_integral(-1.0, 1.0)
    }
}

/// ψ_U(x).
pub fn mellin_cutoff(spec: &CutoffSpec, x: f64) -> f64 {
    let v = spec.u * (x - 1.0);
    if v <= -1.0 {
        1.0
    } else if v >= 1.0 {
        0.0
    } else {
        spec.kernel_integral(v, 1.0) / spec.norm()
    }
}

/// Ψ_U(s) = ∫₀^∞ψ_U(x)x^{s−1}dx = (1/s)∫_{−1}^{1}(kernel(v)/Z)(1 + v/U)^s dv.
pub fn mellin_transform(spec: &CutoffSpec, s: Complex64) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(Error::domain(format!("Mellin transform of the cutoff needs Re s > 0, got {s}")));
    }
    // Panels sized to the oscillation of (1 + v/U)^{it}.
    let panels = ((s.norm() / spec.u) * 2.0).ceil().max(4.0) as usize;
    let points: Vec<f64> = (0..=panels).map(|j| -1.0 + 2.0 * j as f64 / panels as f64).collect();
    let cfg = QuadratureConfig::with_tol(1e-13, 1e-11);
    let res = integrate(|v| spec.kernel(v) * (s * (1.0 + v / spec.u).ln()).exp(), &points, &cfg).require("cutoff Mellin transform")?;
    Ok(res.value / (spec.norm() * s))
}

/// Σ_{m≠0}|ψ_m(s₀)|²ψ_U(|m|/M).
pub fn smoothed_coeff_sum(spec: &LSpec<'_>, m: usize, cutoff: &CutoffSpec) -> Result<f64> {
    if !(m as f64 > cutoff.u) {
        return Err(Error::Invalid(format!("smoothed sum needs M > U (M = {m}, U = {})", cutoff.u)));
    }
    let top = (m as f64 * (1.0 + 1.0 / cutoff.u)).floor() as usize;
    let sq = coefficient_squares(spec, top)?;
    let lo = (m as f64 * (1.0 - 1.0 / cutoff.u)).ceil() as usize;
    let weights: Vec<f64> = (lo..=top).into_par_iter().map(|k| mellin_cutoff(cutoff, k as f64 / m as f64)).collect();
    let mut acc = 0.0;
    for k in 1..lo.min(top + 1) {
        acc += sq[k];
    }
    for (j, k) in (lo..=top).enumerate() {
        if k >= 1 {
            acc += sq[k] * weights[j];
        }
    }
    Ok(2.0 * acc)
}

/// The contour-side description of a smoothed sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourPrediction {
    /// Σ of the residues of L(s)Ψ_U(s)M^s at 1 and 1 ± 2it₀.
    pub residues: f64,
    /// (1/2πi)∫_{½+iℝ} L(s)Ψ_U(s)M^s ds, truncated at |t| ≤ t_max.
    pub line_integral: f64,
    pub t_max: f64,
    /// √M·U^{5/2}, the size allowed for the line integral.
    pub error_budget: f64,
}

fn residue_on_circle<F: Fn(Complex64) -> Result<Complex64>>(f: F, center: Complex64, radius: f64) -> Result<Complex64> {
    let n = 96;
    let mut acc = c(0.0, 0.0);
    for j in 0..n {
        let e = (2.0 * PI * I * (j as f64 + 0.5) / n as f64).exp();
        acc += f(center + radius * e)? * radius * e;
    }
    Ok(acc / n as f64)
}

/// Residues and shifted-line integral for the smoothed sum at (M, U).
pub fn contour_prediction(spec: &LSpec<'_>, m: usize, cutoff: &CutoffSpec) -> Result<ContourPrediction> {
    spec.require_nonzero_t0()?;
    let mf = m as f64;
    let g = |s: Complex64| -> Result<Complex64> { Ok(l_closed_form(spec, s)? * mellin_transform(cutoff, s)? * (s * mf.ln()).exp()) };
    let radius = 0.45f64.min(0.9 * spec.t0.abs());
    let mut residues = residue_on_circle(g, c(1.0, 0.0), radius)?.re;
    for sign in [1.0, -1.0] {
        residues += residue_on_circle(g, c(1.0, 2.0 * sign * spec.t0), radius)?.re;
    }
    // Ψ_U(½+it) decays like (U/|t|)^c beyond |t| ≈ U; stop well past that.
    let t_max = 60.0 * cutoff.u + 60.0;
    let panels = (t_max / 0.5).ceil() as usize;
    let points: Vec<f64> = (0..=panels).map(|j| t_max * j as f64 / panels as f64).collect();
    let cfg = QuadratureConfig::with_tol(1e-8 * mf.sqrt(), 1e-8);
    let line = crate::quad::integrate_par(|t| g(c(0.5, t)), &points, &cfg)?.require("shifted-line integral")?;
    // The integrand at −t is the conjugate of the one at t.
    let line_integral = line.value.re / PI;
    Ok(ContourPrediction { residues, line_integral, t_max, error_budget: mf.sqrt() * cutoff.u.powf(2.5) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    /// |L(½ + it)|².
    LSquare,
    /// |R.N.∫E(r)E(s)conj(E(½+it))|²e^{πt}.
    TripleProduct,
}

/// Midpoint-rule scan of a nonnegative integrand on (0, T].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub kind: ScanKind,
    pub t: Vec<f64>,
    pub integrand: Vec<f64>,
    pub cumulative: Vec<f64>,
    /// Log-log slope of the cumulative integral over the fit window.
    pub fitted_exponent: f64,
    pub fit_window: (f64, f64),
    pub bound_exponent: f64,
}

/// Parameters of the triple-product scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleScanParams {
    pub r: Complex64,
    pub s: Complex64,
}

impl Default for TripleScanParams {
    fn default() -> Self {
        Self { r: c(0.5, 1.0), s: c(0.5, 2.0) }
    }
}

/// Cumulative ∫₀^T of |L(½+it)|² or |RN triple|²e^{πt} on a midpoint grid of
/// step `h` (so t = 0 and other grid-aligned poles are never sampled), with a
/// log-log fit of the cumulative integral over [T/5, T].
pub fn theorem_scans(spec: &LSpec<'_>, t_end: f64, kind: ScanKind, h: f64, triple: TripleScanParams) -> Result<ScanReport> {
    if !(t_end > 0.0 && t_end <= 50.0) {
        return Err(Error::Invalid(format!("scan length T must lie in (0, 50], got {t_end}")));
    }
    if !(h > 0.0 && h <= 0.25) {
        return Err(Error::Invalid(format!("scan step must lie in (0, 0.25], got {h}")));
    }
    let n = (t_end / h).round().max(1.0) as usize;
    let t: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) * h).collect();
    let quad = QuadratureConfig::default();
    let integrand = t
        .par_iter()
        .map(|&tt| -> Result<f64> {
            let v = match kind {
                ScanKind::LSquare => l_closed_form(spec, c(0.5, tt))?.norm_sqr(),
                ScanKind::TripleProduct => {
                    rn_triple_product(spec.model, triple.r, triple.s, tt, TripleMode::Unfolded, &quad)?.norm_sqr() * (PI * tt).exp()
                }
            };
            if !v.is_finite() {
                return Err(Error::domain(format!("scan integrand is not finite at t = {tt}")));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cumulative = Vec::with_capacity(n);
    let mut acc = 0.0;
    for v in &integrand {
        acc += v * h;
        cumulative.push(acc);
    }
    let ends: Vec<f64> = t.iter().map(|x| x + 0.5 * h).collect();
    let lo = t_end / 5.0;
    let (xs, ys): (Vec<f64>, Vec<f64>) = ends.iter().zip(&cumulative).filter(|(x, _)| **x >= lo - 1e-9).map(|(x, y)| (*x, *y)).unzip();
    let fitted_exponent = log_log_slope(&xs, &ys);
    let bound_exponent = match kind {
        ScanKind::LSquare => 6.0,
        ScanKind::TripleProduct => 4.0,
    };
    Ok(ScanReport { kind, t, integrand, cumulative, fitted_exponent, fit_window: (lo, t_end), bound_exponent })
}
