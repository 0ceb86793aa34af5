//! Computable model of the lattice Γ, instantiated for PSL(2,ℤ).

use std::f64::consts::PI;
use std::path::Path;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::c;
use crate::error::{Error, Result};
use crate::numdiff::{derivative, simple_pole_laurent};
use crate::quad::{integrate_real, QuadratureConfig};
use crate::specfun::{completed_zeta, ln_gamma, riemann_zeta};

/// Environment variable that overrides the default sieve limit.
pub const SIEVE_LIMIT_ENV: &str = "AUTOMORPHIC_SIEVE_LIMIT";
pub const DEFAULT_SIEVE_LIMIT: usize = 1_000_000;
pub const DEFAULT_REDUCTION_CAP: usize = 10_000;

/// Slack accepted on the boundary of the fundamental domain.
pub const BOUNDARY_SLACK: f64 = 1e-12;

/// Point x + iy of the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicPoint {
    pub x: f64,
    pub y: f64,
}

impl HyperbolicPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::domain(format!("point ({x}, {y}) is not in the upper half plane")));
        }
        Ok(Self { x, y })
    }

    pub fn to_complex(self) -> Complex64 {
        c(self.x, self.y)
    }

    /// z ↦ z + 1.
    pub fn translate(self, n: f64) -> Self {
        Self { x: self.x + n, y: self.y }
    }

    /// z ↦ −1/z.
    pub fn invert(self) -> Self {
        let n = self.x * self.x + self.y * self.y;
        Self { x: -self.x / n, y: self.y / n }
    }
}

/// Tunables for a lattice model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub sieve_limit: usize,
    pub reduction_cap: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self { sieve_limit: DEFAULT_SIEVE_LIMIT, reduction_cap: DEFAULT_REDUCTION_CAP }
    }
}

impl ModelConfig {
    /// Defaults, with the sieve limit taken from the environment if set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = Self::default();
        if let Ok(v) = std::env::var(SIEVE_LIMIT_ENV) {
            cfg.sieve_limit = parse_count(&v).ok_or_else(|| Error::Invalid(format!("{SIEVE_LIMIT_ENV}={v} is not a count")))?;
        }
        Ok(cfg)
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let n = parse_count(value).ok_or_else(|| Error::Invalid(format!("line {}: bad value '{value}'", lineno + 1)))?;
            match key {
                "sieve_limit" => self.sieve_limit = n,
                "reduction_cap" => self.reduction_cap = n,
                other => return Err(Error::Invalid(format!("line {}: unknown key '{other}'", lineno + 1))),
            }
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        self.apply_text(&text)
    }
}

/// Parses integers written plainly or as `1e6`.
pub fn parse_count(s: &str) -> Option<usize> {
    let s = s.trim().replace('_', "");
    if let Ok(n) = s.parse::<usize>() {
        return Some(n);
    }
    let v = s.parse::<f64>().ok()?;
    (v >= 0.0 && v.fract() == 0.0 && v < 1e15).then_some(v as usize)
}

/// Smallest-prime-factor sieve giving σ_w(n) = Σ_{d|n} d^w for complex w.
#[derive(Debug)]
pub struct DivisorCache {
    limit: usize,
    spf: Vec<u32>,
}

impl DivisorCache {
    pub fn new(limit: usize) -> Self {
        let limit = limit.max(1);
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Self { limit, spf }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Prime factorization as (p, e) pairs; trial division above the limit.
    pub fn factorize(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        if n as usize <= self.limit {
            while n > 1 {
                let p = self.spf[n as usize] as u64;
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                out.push((p, e));
            }
            return out;
        }
        let mut p = 2u64;
        while p * p <= n {
            if n % p == 0 {
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                out.push((p, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    /// σ_w(n) for a single n ≥ 1.
    pub fn sigma(&self, w: Complex64, n: u64) -> Complex64 {
        let mut acc = c(1.0, 0.0);
        for (p, e) in self.factorize(n) {
            let pw = (w * (p as f64).ln()).exp();
            let mut term = c(1.0, 0.0);
            let mut sum = c(1.0, 0.0);
            for _ in 0..e {
                term *= pw;
                sum += term;
            }
            acc *= sum;
        }
        acc
    }

    /// σ_w(n) for n = 0..=m (entry 0 unused) via the multiplicative sieve.
    pub fn sigma_table(&self, w: Complex64, m: usize) -> Result<Vec<Complex64>> {
        if m > self.limit {
            return Err(Error::SieveLimit { limit: self.limit, requested: m });
        }
        let mut table = vec![c(0.0, 0.0); m + 1];
        if m == 0 {
            return Ok(table);
        }
        table[1] = c(1.0, 0.0);
        // rest[n] = n with its smallest prime removed entirely; pk[n] = p^e.
        let mut rest = vec![0u32; m + 1];
        let mut expo = vec![0u8; m + 1];
        for n in 2..=m {
            let p = self.spf[n] as usize;
            let q = n / p;
            if q % p == 0 && q > 1 && self.spf[q] as usize == p {
                rest[n] = rest[q];
                expo[n] = expo[q] + 1;
            } else {
                rest[n] = q as u32;
                expo[n] = 1;
            }
            let pw = (w * (p as f64).ln()).exp();
            let mut term = c(1.0, 0.0);
            let mut sum = c(1.0, 0.0);
            for _ in 0..expo[n] {
                term *= pw;
                sum += term;
            }
            table[n] = table[rest[n] as usize] * sum;
        }
        Ok(table)
    }
}

/// Data of a cofinite lattice needed by the rest of the crate.
pub trait LatticeModel: Send + Sync {
    fn cusp_count(&self) -> usize;
    /// Hyperbolic area μ of Γ\ℍ.
    fn covolume(&self) -> f64;
    /// Scattering function φ(s) (κ = 1).
    fn scattering(&self, s: Complex64) -> Result<Complex64>;
    /// Fourier coefficient ψ_m(s), m ≠ 0.
    fn fourier_coefficient(&self, m: i64, s: Complex64) -> Result<Complex64>;
    fn contains(&self, z: HyperbolicPoint) -> bool;
    /// Reduction to the fundamental domain, returning the word length used.
    fn reduce(&self, z: HyperbolicPoint) -> Result<(HyperbolicPoint, usize)>;
    /// ỹ(h_k) for each cusp normalization; 1 when h is the identity.
    fn cusp_height_scale(&self) -> f64 {
        1.0
    }
    fn divisors(&self) -> &DivisorCache;

    /// ψ_m(s) for m = 1..=m_max (index 0 unused).
    fn fourier_coefficients(&self, s: Complex64, m_max: usize) -> Result<Vec<Complex64>> {
        let mut out = vec![c(0.0, 0.0); m_max + 1];
        for (m, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = self.fourier_coefficient(m as i64, s)?;
        }
        Ok(out)
    }

    fn invariant_height(&self, z: HyperbolicPoint) -> Result<f64> {
        Ok(self.reduce(z)?.0.y)
    }

    /// φ'(s) by Richardson differencing at steps 1e-3 and 1e-4.
    fn scattering_derivative(&self, s: Complex64) -> Result<Complex64> {
        derivative(|w| self.scattering(w), s, 1e-3, 1e-4, 1e-6)
    }

    /// (Res_{s=1} φ, φ̃(1)) where φ̃(s) = φ(s) − Res/(s − 1).
    fn scattering_laurent_at_one(&self) -> Result<(Complex64, Complex64)> {
        simple_pole_laurent(|w| self.scattering(w), c(1.0, 0.0), 1e-3, 1e-4, 1e-6)
    }
}

/// The modular group PSL(2,ℤ): one cusp, area π/3, divisor-sum coefficients.
#[derive(Debug)]
pub struct Psl2z {
    config: ModelConfig,
    covolume: f64,
    cache: OnceLock<DivisorCache>,
}

/// Model of PSL(2,ℤ) with configuration from the environment.
pub fn psl2z_model() -> Psl2z {
    Psl2z::new(ModelConfig::from_env().unwrap_or_default())
}

impl Psl2z {
    pub fn new(config: ModelConfig) -> Self {
        // Area of {|x| ≤ 1/2, x² + y² ≥ 1} after the y-integration.
        let cfg = QuadratureConfig::with_tol(1e-15, 1e-14);
        let covolume = integrate_real(|x| 1.0 / (1.0 - x * x).sqrt(), &[-0.5, 0.0, 0.5], &cfg).value.re;
        Self { config, covolume, cache: OnceLock::new() }
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }
}

impl LatticeModel for Psl2z {
    fn cusp_count(&self) -> usize {
        1
    }

    fn covolume(&self) -> f64 {
        self.covolume
    }

    fn divisors(&self) -> &DivisorCache {
        self.cache.get_or_init(|| DivisorCache::new(self.config.sieve_limit))
    }

    /// φ(s) = ξ(2s − 1)/ξ(2s).
    fn scattering(&self, s: Complex64) -> Result<Complex64> {
        if s == c(0.5, 0.0) {
            return Ok(c(-1.0, 0.0));
        }
        if s == c(1.0, 0.0) {
            return Err(Error::pole("scattering function at s = 1"));
        }
        let num = completed_zeta(2.0 * s - 1.0)?;
        let den = completed_zeta(2.0 * s)?;
        let v = num / den;
        Ok(if s.im == 0.0 { c(v.re, 0.0) } else { v })
    }

    /// ψ_m(s) = 2π^s|m|^{s−1/2}σ_{1−2s}(|m|)/(Γ(s)ζ(2s)).
    fn fourier_coefficient(&self, m: i64, s: Complex64) -> Result<Complex64> {
        if m == 0 {
            return Err(Error::Invalid("Fourier coefficient index must be nonzero".into()));
        }
        let z2s = riemann_zeta(2.0 * s)?;
        if z2s.norm() < 1e-8 {
            return Err(Error::domain(format!("2s = {} is within 1e-8 of a zeta zero", 2.0 * s)));
        }
        let n = m.unsigned_abs();
        let sigma = self.divisors().sigma(1.0 - 2.0 * s, n);
        let lp = s * PI.ln() + (s - 0.5) * (n as f64).ln() - ln_gamma(s)?;
        Ok(2.0 * lp.exp() * sigma / z2s)
    }

    fn fourier_coefficients(&self, s: Complex64, m_max: usize) -> Result<Vec<Complex64>> {
        let z2s = riemann_zeta(2.0 * s)?;
        if z2s.norm() < 1e-8 {
            return Err(Error::domain(format!("2s = {} is within 1e-8 of a zeta zero", 2.0 * s)));
        }
        let base = s * PI.ln() - ln_gamma(s)?;
        let mut out = vec![c(0.0, 0.0); m_max + 1];
        let w = 1.0 - 2.0 * s;
        let table = if m_max <= self.divisors().limit() { Some(self.divisors().sigma_table(w, m_max)?) } else { None };
        for m in 1..=m_max {
            let sigma = match &table {
                Some(t) => t[m],
                None => self.divisors().sigma(w, m as u64),
            };
            out[m] = 2.0 * (base + (s - 0.5) * (m as f64).ln()).exp() * sigma / z2s;
        }
        Ok(out)
    }

    fn contains(&self, z: HyperbolicPoint) -> bool {
        z.y > 0.0 && z.x.abs() <= 0.5 + BOUNDARY_SLACK && z.x * z.x + z.y * z.y >= 1.0 - BOUNDARY_SLACK
    }

    fn reduce(&self, z: HyperbolicPoint) -> Result<(HyperbolicPoint, usize)> {
        reduce_with_cap(z, self.config.reduction_cap)
    }
}

/// Gauss reduction into {|x| ≤ 1/2, |z| ≥ 1}.
pub fn reduce_to_fundamental_domain(z: HyperbolicPoint) -> Result<(HyperbolicPoint, usize)> {
    reduce_with_cap(z, DEFAULT_REDUCTION_CAP)
}

fn reduce_with_cap(z: HyperbolicPoint, cap: usize) -> Result<(HyperbolicPoint, usize)> {
    if !(z.y > 0.0) {
        return Err(Error::domain(format!("point ({}, {}) is not in the upper half plane", z.x, z.y)));
    }
    let mut p = z;
    let mut word = 0usize;
    for _ in 0..cap {
        if p.x.abs() > 0.5 + BOUNDARY_SLACK {
            let n = p.x.round();
            p = p.translate(-n);
            word += n.abs() as usize;
        }
        if p.x * p.x + p.y * p.y < 1.0 - BOUNDARY_SLACK {
            p = p.invert();
            word += 1;
        } else {
            return Ok((p, word));
        }
    }
    Err(Error::IterationLimit(format!("reduction of ({}, {}) exceeded {cap} steps", z.x, z.y)))
}

/// 𝒴(z): the height of the reduced representative.
pub fn invariant_height(model: &dyn LatticeModel, z: HyperbolicPoint) -> Result<f64> {
    model.invariant_height(z)
}

/// ψ_m(s) through the model.
pub fn fourier_coefficient(model: &dyn LatticeModel, m: i64, s: Complex64) -> Result<Complex64> {
    model.fourier_coefficient(m, s)
}
