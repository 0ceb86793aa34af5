//! Empirical checks of the size bounds for the Whittaker integrals.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::serde_complex;
use crate::error::{Error, Result};
use crate::specfun::oscillatory::oscillatory_i;
use crate::specfun::whittaker::{minus_integral_bound, whittaker_minus_integral};

/// Parameter regimes with a known bound on the integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundRegime {
    /// Exponentially damped integral behind W_{−k}; bounded by F(r, σ).
    Trivial,
    /// |I_k| ≪ (|s|+k)/r.
    IntegrationByParts,
    /// r ≥ 8k, no stationary point: |I_k| ≪ (|s|²+1)/r².
    NonStationary,
    /// k^{−1}(√3−√2)^{−4} ≤ r ≤ k, two separated stationary points.
    TwoStationaryPoints,
    /// 4k(1+k^{−2/3}) ≤ r ≤ 8k: |I_k| ≪ (1+|s|)/(r−4k).
    TurningPointAbove,
    /// |r − 4k| ≲ 4k^{1/3}: |I_k| ≪ (1+|s|)/k^{1/3}.
    TurningPointNear,
    /// k ≤ r ≤ 4k/(1+k^{−2/3}): |I_k| ≪ (1+|s|)(k√(4k/r−1))^{−1/2}.
    BelowTurningPoint,
}

impl BoundRegime {
    pub const ALL: [BoundRegime; 7] = [
        BoundRegime::Trivial,
        BoundRegime::IntegrationByParts,
        BoundRegime::NonStationary,
        BoundRegime::TwoStationaryPoints,
        BoundRegime::TurningPointAbove,
        BoundRegime::TurningPointNear,
        BoundRegime::BelowTurningPoint,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BoundRegime::Trivial => "trivial",
            BoundRegime::IntegrationByParts => "integration-by-parts",
            BoundRegime::NonStationary => "non-stationary",
            BoundRegime::TwoStationaryPoints => "two-stationary-points",
            BoundRegime::TurningPointAbove => "turning-point-above",
            BoundRegime::TurningPointNear => "turning-point-near",
            BoundRegime::BelowTurningPoint => "below-turning-point",
        }
    }

    pub fn bound_form(self) -> &'static str {
        match self {
            BoundRegime::Trivial => "F(r, Re s)",
            BoundRegime::IntegrationByParts => "(|s| + k) / r",
            BoundRegime::NonStationary => "(|s|^2 + 1) / r^2",
            BoundRegime::TwoStationaryPoints => "(1 + |s|^2) / Re s * k^(1/4 - Re s) * r^(Re s - 3/4) + (|s|^2 + 1) / r^2",
            BoundRegime::TurningPointAbove => "(1 + |s|) / (r - 4k)",
            BoundRegime::TurningPointNear => "(1 + |s|) / k^(1/3)",
            BoundRegime::BelowTurningPoint => "(1 + |s|) / (k sqrt(4k/r - 1))^(1/2)",
        }
    }

    /// Name of the variable the decay exponent is fitted against.
    pub fn fit_variable(self) -> &'static str {
        match self {
            BoundRegime::TurningPointAbove => "r - 4k",
            BoundRegime::TurningPointNear => "k",
            BoundRegime::BelowTurningPoint => "k sqrt(4k/r - 1)",
            _ => "r",
        }
    }

    fn contains(self, k: u32, r: f64, s: Complex64) -> bool {
        let kf = k as f64;
        if s.re < 0.25 || !(r > 0.0) {
            return false;
        }
        let soft = kf.powf(-2.0 / 3.0);
        match self {
            BoundRegime::Trivial => s.re > 0.0,
            BoundRegime::IntegrationByParts => k >= 1,
            BoundRegime::NonStationary => k >= 1 && r >= 8.0 * kf,
            BoundRegime::TwoStationaryPoints => {
                let lo = 1.0 / ((3f64.sqrt() - 2f64.sqrt()).powi(4) * kf);
                k >= 1 && r >= lo && r <= kf
            }
            BoundRegime::TurningPointAbove => k >= 52 && r >= 4.0 * kf * (1.0 + soft) && r <= 8.0 * kf,
            BoundRegime::TurningPointNear => k >= 52 && r >= 4.0 * kf / (1.0 + soft) && r <= 4.0 * kf * (1.0 + soft),
            BoundRegime::BelowTurningPoint => k >= 52 && r >= kf && r <= 4.0 * kf / (1.0 + soft),
        }
    }

    fn bound(self, k: u32, r: f64, s: Complex64) -> f64 {
        let kf = k as f64;
        let m = s.norm();
        let sigma = s.re;
        match self {
            BoundRegime::Trivial => minus_integral_bound(r, sigma),
            BoundRegime::IntegrationByParts => (m + kf) / r,
            BoundRegime::NonStationary => (m * m + 1.0) / (r * r),
            BoundRegime::TwoStationaryPoints => {
                (1.0 + m * m) / sigma * kf.powf(0.25 - sigma) * r.powf(sigma - 0.75) + (m * m + 1.0) / (r * r)
            }
            BoundRegime::TurningPointAbove => (1.0 + m) / (r - 4.0 * kf),
            BoundRegime::TurningPointNear => (1.0 + m) / kf.powf(1.0 / 3.0),
            BoundRegime::BelowTurningPoint => (1.0 + m) / (kf * (4.0 * kf / r - 1.0).sqrt()).sqrt(),
        }
    }

    fn fit_value(self, k: u32, r: f64) -> f64 {
        let kf = k as f64;
        match self {
            BoundRegime::TurningPointAbove => r - 4.0 * kf,
            BoundRegime::TurningPointNear => kf,
            BoundRegime::BelowTurningPoint => kf * (4.0 * kf / r - 1.0).sqrt(),
            _ => r,
        }
    }

    /// Regimes with two real stationary points, where |I_k| oscillates in r
    /// and the probe measures its envelope.
    fn oscillates(self) -> bool {
        matches!(self, BoundRegime::TwoStationaryPoints | BoundRegime::BelowTurningPoint)
    }
}

impl fmt::Display for BoundRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BoundRegime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundRegime::ALL
            .into_iter()
            .find(|r| r.label() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown bound regime '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub k: u32,
    pub r: f64,
    #[serde(with = "serde_complex")]
    pub s: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundProbeReport {
    pub regime_label: String,
    pub parameter_grid: Vec<GridPoint>,
    pub observed_ratio_max: f64,
    pub predicted_bound_form: String,
    pub fitted_exponent: f64,
}

/// Number of samples used for the envelope over one interference period.
const ENVELOPE_SAMPLES: usize = 12;

fn magnitude(regime: BoundRegime, p: GridPoint) -> Result<f64> {
    match regime {
        BoundRegime::Trivial => Ok(whittaker_minus_integral(p.k as f64, p.s, p.r, 1e-10)?.norm()),
        _ if regime.oscillates() => {
            // The two stationary points interfere with period 2π/u₀ in r.
            let u0 = (4.0 * p.k as f64 / p.r - 1.0).sqrt();
            let period = 2.0 * std::f64::consts::PI / u0;
            let mut best: f64 = 0.0;
            for j in 0..ENVELOPE_SAMPLES {
                let r = p.r + period * j as f64 / ENVELOPE_SAMPLES as f64;
                best = best.max(oscillatory_i(p.k, r, p.s)?.norm());
            }
            Ok(best)
        }
        _ => Ok(oscillatory_i(p.k, p.r, p.s)?.norm()),
    }
}

/// Least-squares slope of ln y against ln x.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in lx.iter().zip(&ly) {
        num += (a - mx) * (b - my);
        den += (a - mx) * (a - mx);
    }
    num / den
}

/// Evaluates |I_k(r,s)| (or the damped integral for [`BoundRegime::Trivial`])
/// on `grid`, divides by the regime's bound and fits the decay exponent.
pub fn probe_whittaker_bounds(regime: BoundRegime, grid: &[GridPoint]) -> Result<BoundProbeReport> {
    if grid.is_empty() {
        return Err(Error::Invalid("empty probe grid".into()));
    }
    if let Some(p) = grid.iter().find(|p| !regime.contains(p.k, p.r, p.s)) {
        return Err(Error::Invalid(format!("grid point {p:?} is outside the {regime} regime")));
    }
    let values: Vec<f64> = grid.par_iter().map(|&p| magnitude(regime, p)).collect::<Result<_>>()?;
    let ratios: Vec<f64> = grid.iter().zip(&values).map(|(p, v)| v / regime.bound(p.k, p.r, p.s)).collect();
    let xs: Vec<f64> = grid.iter().map(|p| regime.fit_value(p.k, p.r)).collect();
    let distinct = xs.iter().any(|x| (x - xs[0]).abs() > 1e-12 * xs[0].abs());
    if !distinct {
        return Err(Error::Invalid("probe grid needs two distinct values of the fit variable".into()));
    }
    Ok(BoundProbeReport {
        regime_label: regime.label().to_string(),
        parameter_grid: grid.to_vec(),
        observed_ratio_max: ratios.iter().cloned().fold(0.0, f64::max),
        predicted_bound_form: regime.bound_form().to_string(),
        fitted_exponent: log_log_slope(&xs, &values),
    })
}
