//! Eisenstein series of PSL(2,ℤ)-type lattices by Fourier expansion, with a
//! direct coset-sum oracle, weighted series and truncation above height B.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{c, I};
use crate::error::{Error, Result};
use crate::lattice::{HyperbolicPoint, LatticeModel};
use crate::reptheory::intertwining_coeff;
use crate::specfun::{gamma_ratio, k_bessel, whittaker_w_minus, whittaker_w_plus};

/// Points below this height are reduced before evaluation.
pub const DEFAULT_Y_MIN: f64 = 0.05;
/// Smallest truncation height B accepted for PSL(2,ℤ).
pub const DEFAULT_B0: f64 = 1.2;
/// Weight-0 evaluation is refused this close to s = 1.
pub const POLE_EXCLUSION: f64 = 1e-3;

/// How many Fourier modes to keep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailPolicy {
    /// Absolute bound on the dropped terms.
    pub target_tail: f64,
    pub hard_cap: usize,
}

impl Default for TailPolicy {
    fn default() -> Self {
        Self { target_tail: 1e-12, hard_cap: 100_000 }
    }
}

impl TailPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_tail > 0.0) || self.hard_cap == 0 {
            return Err(Error::Invalid(format!("bad tail policy {self:?}")));
        }
        Ok(())
    }

    /// Number of modes at height y for weight υ: the smallest M with
    /// 2πMy − |υ|·ln(4πMy) ≥ 40 + |ln target_tail|.
    pub fn modes(&self, y: f64, weight: i32) -> Result<usize> {
        let need = 40.0 + self.target_tail.ln().abs();
        let w = weight.unsigned_abs() as f64;
        let mut m = (need / (2.0 * PI * y)).ceil().max(1.0) as usize;
        while 2.0 * PI * m as f64 * y - w * (4.0 * PI * m as f64 * y).ln().max(0.0) < need {
            m += 1 + m / 8;
            if m > self.hard_cap {
                break;
            }
        }
        if m > self.hard_cap {
            return Err(Error::Invalid(format!("tail policy needs {m} modes at y = {y}, above the cap {}", self.hard_cap)));
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EisensteinParams {
    #[serde(with = "crate::complex::serde_complex")]
    pub s: Complex64,
    pub weight: i32,
    pub truncation: TailPolicy,
}

/// Fourier data at a fixed height: constant + Σ_m (pos[m]e(mx) + neg[m]e(−mx)).
#[derive(Debug, Clone, PartialEq)]
pub struct FourierRow {
    pub y: f64,
    pub constant: Complex64,
    pub pos: Vec<Complex64>,
    pub neg: Vec<Complex64>,
}

impl FourierRow {
    pub fn eval(&self, x: f64) -> Complex64 {
        self.constant + self.nonconstant(x)
    }

    /// Σ_{m≠0} of the row at x, by the recurrence e((m+1)x) = e(mx)e(x).
    pub fn nonconstant(&self, x: f64) -> Complex64 {
        let step = (2.0 * PI * I * x).exp();
        let mut e = c(1.0, 0.0);
        let mut acc = c(0.0, 0.0);
        for m in 1..self.pos.len() {
            e *= step;
            if m % 64 == 0 {
                e = (2.0 * PI * I * (m as f64 * x)).exp();
            }
            acc += self.pos[m] * e + self.neg[m] * e.conj();
        }
        acc
    }
}

/// E(z, s, 2υ) for a fixed s and weight, with the s-dependent data cached.
pub struct EisensteinSeries<'m> {
    model: &'m dyn LatticeModel,
    s: Complex64,
    weight: i32,
    policy: TailPolicy,
    phi: Complex64,
    constant_second: Option<Complex64>,
    pre_pos: Vec<Complex64>,
    pre_neg: Vec<Complex64>,
}

impl<'m> EisensteinSeries<'m> {
    pub fn new(model: &'m dyn LatticeModel, s: Complex64, weight: i32, policy: TailPolicy) -> Result<Self> {
        policy.validate()?;
        if weight == 0 && (s - 1.0).norm() < POLE_EXCLUSION * (1.0 - 1e-9) {
            return Err(Error::pole(format!("weight-0 Eisenstein series at s = {s}, within {POLE_EXCLUSION} of 1")));
        }
        if weight != 0 && s.re <= 0.25 {
            return Err(Error::domain(format!("weighted Eisenstein series needs Re(s) > 1/4, got {s}")));
        }
        let at_one = s == c(1.0, 0.0);
        let (phi, constant_second) = if at_one {
            // 𝔦_{s,2υ}φ(s) → −1/(μ|υ|) as s → 1.
            (c(f64::NAN, 0.0), Some(c(-1.0 / (model.covolume() * weight.unsigned_abs() as f64), 0.0)))
        } else if weight != 0 && (s - 1.0).norm() < 1e-2 {
            // 𝔦φ is analytic at 1 but the direct product cancels a pole against
            // a zero; use the mean over a circle around s instead.
            let n = 32;
            let mut acc = c(0.0, 0.0);
            for j in 0..n {
                let w = s + 0.05 * (2.0 * PI * I * (j as f64 / n as f64)).exp();
                acc += intertwining_coeff(w, weight)? * model.scattering(w)?;
            }
            (model.scattering(s)?, Some(acc / n as f64))
        } else {
            let phi = model.scattering(s)?;
            (phi, Some(intertwining_coeff(s, weight)? * phi))
        };
        let m_max = policy.modes(DEFAULT_Y_MIN, weight)?;
        let psi = model.fourier_coefficients(s, m_max)?;
        let (mut pre_pos, mut pre_neg) = (psi.clone(), psi);
        if weight != 0 {
            let sign = if weight % 2 == 0 { 1.0 } else { -1.0 };
            let wf = weight as f64;
            let r_pos = sign * gamma_ratio(s, s - wf)? / 2.0;
            let r_neg = sign * gamma_ratio(s, s + wf)? / 2.0;
            for m in 1..=m_max {
                let sq = (m as f64).sqrt();
                pre_pos[m] *= r_pos / sq;
                pre_neg[m] *= r_neg / sq;
            }
        }
        Ok(Self { model, s, weight, policy, phi, constant_second, pre_pos, pre_neg })
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    /// φ(s); NaN for the weighted series at s = 1.
    pub fn phi(&self) -> Complex64 {
        self.phi
    }

    pub fn model(&self) -> &'m dyn LatticeModel {
        self.model
    }

    /// y^s + 𝔦_{s,2υ}φ(s)y^{1−s}.
    pub fn constant_term(&self, y: f64) -> Complex64 {
        let ys = (self.s * y.ln()).exp();
        let second = self.constant_second.unwrap_or(c(0.0, 0.0));
        ys + second * ((1.0 - self.s) * y.ln()).exp()
    }

    /// Fourier row at height y (no reduction).
    pub fn row(&self, y: f64) -> Result<FourierRow> {
        self.row_with_modes(y, self.policy.modes(y, self.weight)?)
    }

    pub fn row_with_modes(&self, y: f64, modes: usize) -> Result<FourierRow> {
        if !(y > 0.0) {
            return Err(Error::domain(format!("height must be positive, got {y}")));
        }
        if modes >= self.pre_pos.len() {
            return Err(Error::Invalid(format!("{modes} modes requested, {} cached", self.pre_pos.len() - 1)));
        }
        let mut pos = vec![c(0.0, 0.0); modes + 1];
        let mut neg = vec![c(0.0, 0.0); modes + 1];
        let nu = self.s - 0.5;
        for m in 1..=modes {
            let mf = m as f64;
            if self.weight == 0 {
                let v = self.pre_pos[m] * y.sqrt() * k_bessel(nu, 2.0 * PI * mf * y)?;
                pos[m] = v;
                neg[m] = v;
            } else {
                let r = 4.0 * PI * mf * y;
                let k = self.weight.unsigned_abs();
                let (w_pos, w_neg) = if self.weight > 0 {
                    let wm = if self.pre_pos[m] == c(0.0, 0.0) { c(0.0, 0.0) } else { whittaker_w_minus(k as f64, self.s, r)? };
                    (wm, whittaker_w_plus(k, self.s, r)?)
                } else {
                    let wm = if self.pre_neg[m] == c(0.0, 0.0) { c(0.0, 0.0) } else { whittaker_w_minus(k as f64, self.s, r)? };
                    (whittaker_w_plus(k, self.s, r)?, wm)
                };
                pos[m] = self.pre_pos[m] * w_pos;
                neg[m] = self.pre_neg[m] * w_neg;
            }
        }
        Ok(FourierRow { y, constant: self.constant_term(y), pos, neg })
    }

    fn prepare(&self, z: HyperbolicPoint) -> Result<HyperbolicPoint> {
        if z.y < DEFAULT_Y_MIN {
            if self.weight != 0 {
                return Err(Error::domain(format!(
                    "weighted series is not invariant; evaluate at y >= {DEFAULT_Y_MIN}, got {}",
                    z.y
                )));
            }
            return Ok(self.model.reduce(z)?.0);
        }
        Ok(z)
    }

    pub fn eval(&self, z: HyperbolicPoint) -> Result<Complex64> {
        let z = self.prepare(z)?;
        Ok(self.row(z.y)?.eval(z.x))
    }

    /// E minus its constant term.
    pub fn nonconstant(&self, z: HyperbolicPoint) -> Result<Complex64> {
        let z = self.prepare(z)?;
        Ok(self.row(z.y)?.nonconstant(z.x))
    }

    pub fn eval_many(&self, points: &[HyperbolicPoint]) -> Result<Vec<Complex64>> {
        points.par_iter().map(|&z| self.eval(z)).collect()
    }
}

/// E(z, s) by Fourier expansion.
pub fn eval_e(model: &dyn LatticeModel, z: HyperbolicPoint, s: Complex64, policy: TailPolicy) -> Result<Complex64> {
    EisensteinSeries::new(model, s, 0, policy)?.eval(z)
}

/// E(z, s, 2υ) by Fourier expansion with Whittaker coefficients.
pub fn eval_e_weighted(model: &dyn LatticeModel, z: HyperbolicPoint, s: Complex64, weight: i32, policy: TailPolicy) -> Result<Complex64> {
    EisensteinSeries::new(model, s, weight, policy)?.eval(z)
}

/// Partial coset sum and a bound on what it omits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectSum {
    pub value: Complex64,
    pub tail_estimate: f64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Σ y^s/|cz + d|^{2s} over coprime (c, d) modulo ±, max(|c|, |d|) ≤ cutoff.
pub fn eval_e_direct(z: HyperbolicPoint, s: Complex64, cutoff: usize) -> Result<DirectSum> {
    if s.re <= 1.1 {
        return Err(Error::domain(format!("direct summation needs Re(s) > 1.1, got {s}")));
    }
    if !(z.y > 0.0) {
        return Err(Error::domain("point not in the upper half plane"));
    }
    let x = z.x - z.x.round();
    let y = z.y;
    let n = cutoff as i64;
    let ln_y = y.ln();
    let rows: Vec<Complex64> = (1..=n)
        .into_par_iter()
        .map(|cc| {
            let mut acc = c(0.0, 0.0);
            for d in -n..=n {
                if gcd(cc, d) != 1 {
                    continue;
                }
                let cf = cc as f64;
                let re = cf * x + d as f64;
                let q = re * re + cf * cf * y * y;
                acc += (s * (ln_y - q.ln())).exp();
            }
            acc
        })
        .collect();
    let mut value = (s * ln_y).exp();
    for r in rows {
        value += r;
    }
    let sigma = s.re;
    let b = (y * y).min(0.25);
    let tail = 8.0 * y.powf(sigma) * b.powf(-sigma) * (cutoff as f64).powf(2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0);
    Ok(DirectSum { value, tail_estimate: tail })
}

/// E(z, s) with its constant term removed where the reduced point lies above B.
pub fn truncated_e(model: &dyn LatticeModel, z: HyperbolicPoint, s: Complex64, b: f64, policy: TailPolicy) -> Result<Complex64> {
    if b < DEFAULT_B0 {
        return Err(Error::domain(format!("truncation height {b} is below B0 = {DEFAULT_B0}")));
    }
    let series = EisensteinSeries::new(model, s, 0, policy)?;
    let (w, _) = model.reduce(z)?;
    let row = series.row(w.y)?;
    Ok(if w.y > b { row.nonconstant(w.x) } else { row.eval(w.x) })
}

/// |y²ΔE + s(1 − s)E| by second-order central differences with step h.
pub fn laplacian_residual(model: &dyn LatticeModel, z: HyperbolicPoint, s: Complex64, h: f64) -> Result<f64> {
    if !(h > 0.0) || z.y <= h {
        return Err(Error::domain("step must be positive and below the height"));
    }
    let series = EisensteinSeries::new(model, s, 0, TailPolicy::default())?;
    let ev = |x: f64, y: f64| series.eval(HyperbolicPoint { x, y });
    let e0 = ev(z.x, z.y)?;
    let lap = (ev(z.x + h, z.y)? + ev(z.x - h, z.y)? + ev(z.x, z.y + h)? + ev(z.x, z.y - h)? - 4.0 * e0) / (h * h);
    Ok((z.y * z.y * lap + s * (1.0 - s) * e0).norm())
}
