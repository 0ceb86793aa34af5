//! Renormalized integrals over Γ\ℍ: growth profiles and their antiderivatives,
//! quadrature over the fundamental domain with the cusp profile removed, the
//! Maass–Selberg inner product, the regularized triple product Φ^{r,s} and the
//! Rankin–Selberg transform of Eisenstein products.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::{c, serde_complex};
use crate::eisenstein::{EisensteinSeries, FourierRow, TailPolicy, DEFAULT_B0};
use crate::error::{Error, Result};
use crate::lattice::{HyperbolicPoint, LatticeModel};
use crate::quad::{integrate, integrate_par, QuadResult, QuadratureConfig};
use crate::reptheory::{check_cancellation_distance, DELTA_POLE};
use crate::specfun::{bessel_moment, ln_gamma, riemann_zeta};

/// c/n! · y^α · logⁿ y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentTerm {
    #[serde(with = "serde_complex")]
    pub c: Complex64,
    #[serde(with = "serde_complex")]
    pub alpha: Complex64,
    pub n: u32,
}

impl ExponentTerm {
    pub fn new(c: Complex64, alpha: Complex64, n: u32) -> Self {
        Self { c, alpha, n }
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn binomial(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn same_exponent(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-12 * (1.0 + a.norm())
}

/// Cusp profile Ξ(y) = Σ c/n! · y^α logⁿ y.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub terms: Vec<ExponentTerm>,
}

impl GrowthProfile {
    /// Validates that every c is nonzero and every (α, n) appears once.
    pub fn new(terms: Vec<ExponentTerm>) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            if t.c == c(0.0, 0.0) || !t.c.norm().is_finite() || !t.alpha.norm().is_finite() {
                return Err(Error::Invalid(format!("profile term {i} has a zero or non-finite entry")));
            }
            if terms[..i].iter().any(|u| u.n == t.n && same_exponent(u.alpha, t.alpha)) {
                return Err(Error::Invalid(format!("profile repeats exponent {} with log power {}", t.alpha, t.n)));
            }
        }
        Ok(Self { terms })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: Complex64) -> Self {
        Self::merged(vec![ExponentTerm::new(value, c(0.0, 0.0), 0)])
    }

    /// Combines terms with equal (α, n) and drops those that cancel to
    /// rounding level relative to what was added.
    pub fn merged(terms: Vec<ExponentTerm>) -> Self {
        let mut out: Vec<(ExponentTerm, f64)> = Vec::new();
        for t in terms {
            match out.iter_mut().find(|(u, _)| u.n == t.n && same_exponent(u.alpha, t.alpha)) {
                Some((u, scale)) => {
                    u.c += t.c;
                    *scale = scale.max(t.c.norm());
                }
                None => out.push((t, t.c.norm())),
            }
        }
        let terms = out.into_iter().filter(|(t, scale)| t.c.norm() > 1e-12 * scale).map(|(t, _)| t).collect();
        Self { terms }
    }

    pub fn eval(&self, y: f64) -> Complex64 {
        xi_eval(self, y)
    }

    pub fn hat(&self, b: f64) -> Complex64 {
        xi_hat(self, b)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::merged(self.terms.iter().map(|t| ExponentTerm::new(t.c * k, t.alpha, t.n)).collect())
    }

    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|t| ExponentTerm::new(t.c.conj(), t.alpha.conj(), t.n)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::merged(self.terms.iter().chain(&other.terms).copied().collect())
    }

    /// Profile of the pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                terms.push(ExponentTerm::new(a.c * b.c * binomial(a.n + b.n, a.n), a.alpha + b.alpha, a.n + b.n));
            }
        }
        Self::merged(terms)
    }

    /// Largest Re α (None for the zero profile).
    pub fn max_re_alpha(&self) -> Option<f64> {
        self.terms.iter().map(|t| t.alpha.re).reduce(f64::max)
    }
}

/// Ξ(y) = Σ c/n! · y^α logⁿ y.
pub fn xi_eval(profile: &GrowthProfile, y: f64) -> Complex64 {
    let ly = y.ln();
    profile.terms.iter().map(|t| t.c / factorial(t.n) * (t.alpha * ly).exp() * ly.powi(t.n as i32)).sum()
}

/// Ξ̂(B), the antiderivative of y⁻²Ξ(y) normalized as in the renormalized
/// integral: for α ≠ 1, c Σ_{m=0}^{n} (−1)^{n−m}/m! · B^{α−1}log^m B/(α−1)^{n−m+1};
/// for α = 1, c·log^{n+1}B/(n+1)!.
pub fn xi_hat(profile: &GrowthProfile, b: f64) -> Complex64 {
    let lb = b.ln();
    profile
        .terms
        .iter()
        .map(|t| {
            let a1 = t.alpha - 1.0;
            if a1.norm() < 1e-14 {
                return t.c * lb.powi(t.n as i32 + 1) / factorial(t.n + 1);
            }
            let bp = (a1 * lb).exp();
            let sum: Complex64 = (0..=t.n)
                .map(|m| {
                    let sign = if (t.n - m) % 2 == 0 { 1.0 } else { -1.0 };
                    sign / factorial(m) * bp * lb.powi(m as i32) / a1.powi((t.n - m + 1) as i32)
                })
                .sum();
            t.c * sum
        })
        .sum()
}

/// x ↦ F(x + iy) at a fixed height, with the Fourier bandwidth when F is a
/// trigonometric polynomial in x at that height.
pub struct Slice<'a> {
    pub y: f64,
    pub bandwidth: Option<usize>,
    f: Box<dyn Fn(f64) -> Result<Complex64> + Send + Sync + 'a>,
}

impl<'a> Slice<'a> {
    pub fn new(y: f64, bandwidth: Option<usize>, f: impl Fn(f64) -> Result<Complex64> + Send + Sync + 'a) -> Self {
        Self { y, bandwidth, f: Box::new(f) }
    }

    pub fn at(&self, x: f64) -> Result<Complex64> {
        (self.f)(x)
    }
}

/// An automorphic function together with its cusp profile.
pub trait AutomorphicEvaluator: Sync {
    fn profile(&self) -> &GrowthProfile;
    fn slice(&self, y: f64) -> Result<Slice<'_>>;

    fn eval(&self, z: HyperbolicPoint) -> Result<Complex64> {
        self.slice(z.y)?.at(z.x)
    }
}

/// Evaluator from a plain closure; x-integrals fall back to adaptive quadrature.
pub struct FnEvaluator<F> {
    f: F,
    profile: GrowthProfile,
}

impl<F: Fn(HyperbolicPoint) -> Result<Complex64> + Sync + Send> FnEvaluator<F> {
    pub fn new(f: F, profile: GrowthProfile) -> Self {
        Self { f, profile }
    }
}

impl<F: Fn(HyperbolicPoint) -> Result<Complex64> + Sync + Send> AutomorphicEvaluator for FnEvaluator<F> {
    fn profile(&self) -> &GrowthProfile {
        &self.profile
    }

    fn slice(&self, y: f64) -> Result<Slice<'_>> {
        Ok(Slice::new(y, None, move |x| (self.f)(HyperbolicPoint { x, y })))
    }
}

/// One factor of a monomial: a series index and whether it is conjugated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub series: usize,
    pub conj: bool,
}

/// Σ_j c_j Π E(z, s_{jk}) (optionally conjugated) over weight-0 series.
pub struct EisensteinPolynomial<'m> {
    model: &'m dyn LatticeModel,
    policy: TailPolicy,
    series: Vec<EisensteinSeries<'m>>,
    terms: Vec<(Complex64, Vec<Factor>)>,
    profile: GrowthProfile,
}

impl<'m> EisensteinPolynomial<'m> {
    pub fn new(model: &'m dyn LatticeModel, policy: TailPolicy) -> Self {
        Self { model, policy, series: Vec::new(), terms: Vec::new(), profile: GrowthProfile::zero() }
    }

    fn series_index(&mut self, s: Complex64) -> Result<usize> {
        if let Some(i) = self.series.iter().position(|e| e.s() == s) {
            return Ok(i);
        }
        self.series.push(EisensteinSeries::new(self.model, s, 0, self.policy)?);
        Ok(self.series.len() - 1)
    }

    fn series_profile(&self, i: usize) -> GrowthProfile {
        let e = &self.series[i];
        GrowthProfile::merged(vec![
            ExponentTerm::new(c(1.0, 0.0), e.s(), 0),
            ExponentTerm::new(e.phi(), 1.0 - e.s(), 0),
        ])
    }

    /// Adds coef·Π E(·, s_k) with each factor conjugated when its flag is set.
    pub fn add_term(&mut self, coef: Complex64, factors: &[(Complex64, bool)]) -> Result<&mut Self> {
        let mut fs = Vec::with_capacity(factors.len());
        let mut prof = GrowthProfile::constant(coef);
        for &(s, conj) in factors {
            let i = self.series_index(s)?;
            let p = self.series_profile(i);
            prof = prof.mul(&if conj { p.conj() } else { p });
            fs.push(Factor { series: i, conj });
        }
        self.profile = self.profile.add(&prof);
        self.terms.push((coef, fs));
        Ok(self)
    }

    /// Π E(·, s_k), conjugated where flagged.
    pub fn product(model: &'m dyn LatticeModel, policy: TailPolicy, factors: &[(Complex64, bool)]) -> Result<Self> {
        let mut p = Self::new(model, policy);
        p.add_term(c(1.0, 0.0), factors)?;
        Ok(p)
    }

    /// Φ^{r,s} = E(r)E(s) − E(r+s) − φ(s)E(r+1−s) − φ(r)E(1−r+s) − φ(r)φ(s)E(2−r−s),
    /// optionally multiplied by conj(E(·, extra)).
    pub fn phi_triple(model: &'m dyn LatticeModel, policy: TailPolicy, r: Complex64, s: Complex64, extra: Option<Complex64>) -> Result<Self> {
        check_cancellation_distance(r, s, DELTA_POLE)?;
        let (pr, ps) = (model.scattering(r)?, model.scattering(s)?);
        let mut p = Self::new(model, policy);
        let tail: Vec<(Complex64, bool)> = extra.map(|t| vec![(t, true)]).unwrap_or_default();
        let with = |f: &[(Complex64, bool)]| -> Vec<(Complex64, bool)> { f.iter().chain(&tail).copied().collect() };
        p.add_term(c(1.0, 0.0), &with(&[(r, false), (s, false)]))?;
        p.add_term(c(-1.0, 0.0), &with(&[(r + s, false)]))?;
        p.add_term(-ps, &with(&[(r + 1.0 - s, false)]))?;
        p.add_term(-pr, &with(&[(1.0 - r + s, false)]))?;
        p.add_term(-pr * ps, &with(&[(2.0 - r - s, false)]))?;
        Ok(p)
    }

    fn degree(&self) -> usize {
        self.terms.iter().map(|(_, f)| f.len()).max().unwrap_or(0)
    }

    fn rows(&self, y: f64) -> Result<(Vec<FourierRow>, usize)> {
        let modes = self.policy.modes(y, 0)?;
        let rows = self.series.iter().map(|e| e.row_with_modes(y, modes)).collect::<Result<Vec<_>>>()?;
        Ok((rows, modes))
    }

    fn combine(&self, values: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(coef, fs)| fs.iter().fold(*coef, |acc, f| acc * if f.conj { values[f.series].conj() } else { values[f.series] }))
            .sum()
    }
}

impl AutomorphicEvaluator for EisensteinPolynomial<'_> {
    fn profile(&self) -> &GrowthProfile {
        &self.profile
    }

    fn slice(&self, y: f64) -> Result<Slice<'_>> {
        let (rows, modes) = self.rows(y)?;
        let band = self.degree() * modes;
        Ok(Slice::new(y, Some(band), move |x| {
            let values: Vec<Complex64> = rows.iter().map(|r| r.eval(x)).collect();
            Ok(self.combine(&values))
        }))
    }

    fn eval(&self, z: HyperbolicPoint) -> Result<Complex64> {
        let values = self.series.iter().map(|e| e.eval(z)).collect::<Result<Vec<_>>>()?;
        Ok(self.combine(&values))
    }
}

/// Outcome of a renormalized integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenormResult {
    #[serde(with = "serde_complex")]
    pub value: Complex64,
    #[serde(rename = "B_used")]
    pub b_used: f64,
    pub quad_error_estimate: f64,
    /// max |RN(B′) − RN(B)| over B′ ∈ {B + 1, 2B}.
    #[serde(rename = "B_independence_spread")]
    pub b_independence_spread: f64,
    pub y_max: f64,
}

/// A region integral and a pessimistic error for it.
#[derive(Debug, Clone, Copy)]
struct Piece {
    value: Complex64,
    error: f64,
}

impl Piece {
    fn from(res: QuadResult, what: &str) -> Result<Self> {
        let res = res.require(what)?;
        Ok(Self { value: res.value, error: res.raw_error.max(res.error) })
    }
}

fn inner_config(quad: &QuadratureConfig) -> QuadratureConfig {
    QuadratureConfig { abs_tol: quad.abs_tol * 0.1, rel_tol: quad.rel_tol * 0.1, ..*quad }
}

/// ∫_a^b of a slice, adaptively.
fn slice_integral(slice: &Slice<'_>, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Piece> {
    let failure = RefCell::new(None);
    let res = integrate(
        |x| match slice.at(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                c(0.0, 0.0)
            }
        },
        &[a, 0.5 * (a + b), b],
        cfg,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Piece::from(res, "x-integral")
}

/// ∫_{−1/2}^{1/2} F(x + iy)dx: exact periodic trapezoid for band-limited slices.
fn x_mean(slice: &Slice<'_>, cfg: &QuadratureConfig) -> Result<Piece> {
    match slice.bandwidth {
        Some(band) => {
            let n = band + 1;
            let mut acc = c(0.0, 0.0);
            for j in 0..n {
                acc += slice.at(-0.5 + j as f64 / n as f64)?;
            }
            Ok(Piece { value: acc / n as f64, error: 0.0 })
        }
        None => slice_integral(slice, -0.5, 0.5, cfg),
    }
}

/// {|x| ≤ 1/2, x² + y² ≥ 1, y ≤ 1} in the variable v = √(1 − y²), where the
/// x-range is [v, 1/2] on each side.
fn lower_region<'a, S>(slicer: S, quad: &QuadratureConfig) -> Result<Piece>
where
    S: Fn(f64) -> Result<Slice<'a>> + Sync,
{
    let inner = inner_config(quad);
    let errors = std::sync::Mutex::new(0.0f64);
    let res = integrate_par(
        |v| {
            let y = (1.0 - v * v).sqrt();
            let slice = slicer(y)?;
            let left = slice_integral(&slice, -0.5, -v, &inner)?;
            let right = slice_integral(&slice, v, 0.5, &inner)?;
            let jac = v / (y * y * y);
            *errors.lock().unwrap() += (left.error + right.error) * jac;
            Ok((left.value + right.value) * jac)
        },
        &[0.0, 0.25, 0.5],
        quad,
    )?;
    let mut piece = Piece::from(res, "lower region of the fundamental domain")?;
    // Inner errors are summed over every node; scale by the largest panel weight.
    piece.error += errors.into_inner().unwrap() * 0.5 / res.subdivisions.max(1) as f64;
    Ok(piece)
}

/// Log-spaced breakpoints from y0 to y1 with ratio at most 1.5.
fn log_points(y0: f64, y1: f64) -> Vec<f64> {
    let n = ((y1 / y0).ln() / 1.5f64.ln()).ceil().max(1.0) as usize;
    (0..=n).map(|j| if j == n { y1 } else { y0 * (y1 / y0).powf(j as f64 / n as f64) }).collect()
}

/// ∫_{y0}^{y1} h(y) y⁻² dy.
fn band(h: &(dyn Fn(f64) -> Result<Complex64> + Sync), y0: f64, y1: f64, quad: &QuadratureConfig, what: &str) -> Result<Piece> {
    if y1 <= y0 {
        return Ok(Piece { value: c(0.0, 0.0), error: 0.0 });
    }
    let res = integrate_par(|y| Ok(h(y)? / (y * y)), &log_points(y0, y1), quad)?;
    Piece::from(res, what)
}

/// Height above which e^{−2πy} < abs_tol/10, at least `floor`.
pub fn cusp_cutoff(abs_tol: f64, floor: f64) -> f64 {
    ((10.0 / abs_tol.max(1e-300)).ln() / (2.0 * PI)).max(floor)
}

/// Probe x used to check that F − Ξ decays.
const PROBE_X: f64 = 0.1234;

/// R.N.∫ F dμ = ∫_{ℱ_B} F dμ + ∫_{𝒞_B}(F − Ξ)dμ − Ξ̂(B) over PSL(2,ℤ)\ℍ.
pub fn rn_integral(f: &dyn AutomorphicEvaluator, b: f64, quad: &QuadratureConfig) -> Result<RenormResult> {
    quad.validate()?;
    if !(b >= DEFAULT_B0) || !b.is_finite() {
        return Err(Error::Invalid(format!("truncation height B = {b} must be at least {DEFAULT_B0}")));
    }
    let profile = f.profile();
    let inner = inner_config(quad);
    let a0 = |y: f64| -> Result<Complex64> { Ok(x_mean(&f.slice(y)?, &inner)?.value) };
    let cusp = |y: f64| -> Result<Complex64> { Ok(a0(y)? - profile.eval(y)) };

    let y_max = cusp_cutoff(quad.abs_tol, 2.0 * b + 1.0);
    let probe = f.slice(y_max)?.at(PROBE_X)? - profile.eval(y_max);
    if probe.norm() > 1e-6 * (1.0 + profile.eval(y_max).norm()) {
        return Err(Error::Invalid(format!(
            "F − Ξ does not decay: |F − Ξ| = {:e} at y = {y_max}; the supplied profile does not match F",
            probe.norm()
        )));
    }
    let tail = cusp(y_max)?.norm() / (2.0 * PI * y_max * y_max);

    let lower = lower_region(|y| f.slice(y), quad)?;
    let middle = band(&a0, 1.0, b, quad, "middle band")?;
    let rn_at = |bb: f64, mid: Piece| -> Result<(Complex64, f64)> {
        let cusp_part = band(&cusp, bb, y_max, quad, "cusp band")?;
        let hat = profile.hat(bb);
        let value = lower.value + mid.value + cusp_part.value - hat;
        let scale = lower.value.norm() + mid.value.norm() + cusp_part.value.norm() + hat.norm();
        let error = lower.error + mid.error + cusp_part.error + tail + 1e-11 * (1.0 + scale);
        Ok((value, error))
    };
    let (value, error) = rn_at(b, middle)?;
    let mut spread: f64 = 0.0;
    for bb in [b + 1.0, 2.0 * b] {
        let extra = band(&a0, b, bb, quad, "middle band")?;
        let mid = Piece { value: middle.value + extra.value, error: middle.error + extra.error };
        let (v, _) = rn_at(bb, mid)?;
        spread = spread.max((v - value).norm());
    }
    Ok(RenormResult { value, b_used: b, quad_error_estimate: error, b_independence_spread: spread, y_max })
}

/// Closed form of ⟨E^B(·,s1), E^B(·,s2)⟩ (single cusp):
/// B^{s1+s̄2−1}/(s1+s̄2−1) + conj(φ(s2))B^{s1−s̄2}/(s1−s̄2)
/// + φ(s1)B^{s̄2−s1}/(s̄2−s1) − φ(s1)conj(φ(s2))B^{1−s1−s̄2}/(s1+s̄2−1).
pub fn maass_selberg_rhs(model: &dyn LatticeModel, s1: Complex64, s2: Complex64, b: f64) -> Result<Complex64> {
    let s2b = s2.conj();
    let (p, q) = (s1 + s2b - 1.0, s1 - s2b);
    if p.norm() < 1e-12 || q.norm() < 1e-12 {
        return Err(Error::domain(format!("degenerate Maass–Selberg parameters s1 = {s1}, s2 = {s2}")));
    }
    if !(b > 0.0) {
        return Err(Error::domain(format!("truncation height must be positive, got {b}")));
    }
    let (p1, p2) = (model.scattering(s1)?, model.scattering(s2)?.conj());
    let lb = b.ln();
    let pw = |e: Complex64| (e * lb).exp();
    Ok(pw(p) / p + p2 * pw(q) / q - p1 * pw(-q) / q - p1 * p2 * pw(-p) / p)
}

/// ⟨E^B(·,s1), E^B(·,s2)⟩ by quadrature over the fundamental domain; the part
/// above B uses the exact x-mean Σ_m (a_m conj(b_m) + a_{−m} conj(b_{−m})).
pub fn truncated_inner_product(
    model: &dyn LatticeModel,
    s1: Complex64,
    s2: Complex64,
    b: f64,
    policy: TailPolicy,
    quad: &QuadratureConfig,
) -> Result<(Complex64, f64)> {
    quad.validate()?;
    if !(b >= 1.0) {
        return Err(Error::Invalid(format!("truncation height must be at least 1, got {b}")));
    }
    let poly = EisensteinPolynomial::product(model, policy, &[(s1, false), (s2, true)])?;
    let (e1, e2) = (EisensteinSeries::new(model, s1, 0, policy)?, EisensteinSeries::new(model, s2, 0, policy)?);
    let inner = inner_config(quad);
    let a0 = |y: f64| -> Result<Complex64> { Ok(x_mean(&poly.slice(y)?, &inner)?.value) };
    let truncated = |y: f64| -> Result<Complex64> {
        let modes = policy.modes(y, 0)?;
        let (r1, r2) = (e1.row_with_modes(y, modes)?, e2.row_with_modes(y, modes)?);
        Ok((1..=modes).map(|m| r1.pos[m] * r2.pos[m].conj() + r1.neg[m] * r2.neg[m].conj()).sum())
    };
    let y_max = cusp_cutoff(quad.abs_tol, b + 1.0);
    let lower = lower_region(|y| poly.slice(y), quad)?;
    let middle = band(&a0, 1.0, b, quad, "middle band")?;
    let top = band(&truncated, b, y_max, quad, "cusp band")?;
    let value = lower.value + middle.value + top.value;
    Ok((value, lower.error + middle.error + top.error + 1e-11 * (1.0 + value.norm())))
}

/// Φ^{r,s}(z) (single cusp).
pub fn phi_triple(model: &dyn LatticeModel, z: HyperbolicPoint, r: Complex64, s: Complex64, policy: TailPolicy) -> Result<Complex64> {
    EisensteinPolynomial::phi_triple(model, policy, r, s, None)?.eval(z)
}

/// F = E(·, r)E(·, s); |E(·, s₀)|² is the pair (s₀, s̄₀).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EisensteinPair {
    #[serde(with = "serde_complex")]
    pub r: Complex64,
    #[serde(with = "serde_complex")]
    pub s: Complex64,
}

impl EisensteinPair {
    pub fn new(r: Complex64, s: Complex64) -> Self {
        Self { r, s }
    }

    pub fn abs_square(s0: Complex64) -> Self {
        Self { r: s0, s: s0.conj() }
    }

    /// Largest Re α in the cusp profile of the product.
    pub fn growth_exponent(&self) -> f64 {
        self.r.re.max(1.0 - self.r.re) + self.s.re.max(1.0 - self.s.re)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RsMode {
    /// Term-by-term m-series; needs Re w above the growth exponent + 1.
    Direct,
    /// ζ/Γ closed form, valid wherever its factors are finite.
    Continued,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RsValue {
    #[serde(with = "serde_complex")]
    pub value: Complex64,
    /// Number of m terms summed (0 for the closed form).
    pub terms: usize,
    /// Estimated size of the omitted tail.
    pub tail_bound: f64,
}

/// R(E(r)E(s), w) = ∫₀^∞(a₀(y) − Ξ(y))y^{w−2}dy.
pub fn rankin_selberg_transform(model: &dyn LatticeModel, pair: EisensteinPair, w: Complex64, mode: RsMode, tol: f64) -> Result<RsValue> {
    match mode {
        RsMode::Continued => Ok(RsValue { value: rankin_selberg_closed_form(model, pair, w)?, terms: 0, tail_bound: 0.0 }),
        RsMode::Direct => rankin_selberg_series(model, pair, w, tol),
    }
}

/// 2Σ_{m≥1} ψ_m(r)ψ_m(s)·∫₀^∞K_{r−½}(2πmy)K_{s−½}(2πmy)y^{w−1}dy, summed in
/// doubling blocks until the geometric tail estimate is below tol·|sum| or the
/// sieve limit is reached.
fn rankin_selberg_series(model: &dyn LatticeModel, pair: EisensteinPair, w: Complex64, tol: f64) -> Result<RsValue> {
    let m0 = pair.growth_exponent();
    if w.re <= m0 + 1.0 {
        return Err(Error::domain(format!("direct Rankin–Selberg series needs Re w > {}, got {w}", m0 + 1.0)));
    }
    let moment = bessel_moment(pair.r - 0.5, pair.s - 0.5, w, 2.0 * PI)?;
    let limit = model.divisors().limit();
    let ratio = 2f64.powf(m0 - w.re);
    let mut m_done = 0usize;
    let mut sum = c(0.0, 0.0);
    let mut block_end = 1024usize.min(limit);
    let mut tail = f64::INFINITY;
    while m_done < limit {
        let psi_r = model.fourier_coefficients(pair.r, block_end)?;
        let psi_s = model.fourier_coefficients(pair.s, block_end)?;
        let block: Complex64 = ((m_done + 1)..=block_end).map(|m| psi_r[m] * psi_s[m] * (-w * (m as f64).ln()).exp()).sum();
        sum += 2.0 * moment * block;
        tail = (2.0 * moment * block).norm() * ratio / (1.0 - ratio);
        m_done = block_end;
        if tail < tol * sum.norm() {
            break;
        }
        block_end = (2 * block_end).min(limit);
    }
    Ok(RsValue { value: sum, terms: m_done, tail_bound: tail })
}

/// π^{r+s−w}ΠΓ((w ± (r−½) ± (s−½))/2)/(Γ(w)Γ(r)Γ(s)ζ(2r)ζ(2s)) · D(w + 1 − r − s),
/// D(W) = ζ(W)ζ(W−a)ζ(W−b)ζ(W−a−b)/ζ(2W−a−b), a = 1−2r, b = 1−2s.
pub fn rankin_selberg_closed_form(model: &dyn LatticeModel, pair: EisensteinPair, w: Complex64) -> Result<Complex64> {
    let _ = model;
    let (r, s) = (pair.r, pair.s);
    let (mu, nu) = (r - 0.5, s - 0.5);
    let lg = ln_gamma((w + mu + nu) / 2.0)? + ln_gamma((w + mu - nu) / 2.0)? + ln_gamma((w - mu + nu) / 2.0)? + ln_gamma((w - mu - nu) / 2.0)?
        - ln_gamma(w)?
        - ln_gamma(r)?
        - ln_gamma(s)?;
    let (a, b) = (1.0 - 2.0 * r, 1.0 - 2.0 * s);
    let big_w = w + 1.0 - r - s;
    let d = riemann_zeta(big_w)? * riemann_zeta(big_w - a)? * riemann_zeta(big_w - b)? * riemann_zeta(big_w - a - b)?
        / riemann_zeta(2.0 * big_w - a - b)?;
    let den = riemann_zeta(2.0 * r)? * riemann_zeta(2.0 * s)?;
    Ok(((r + s - w) * PI.ln() + lg).exp() * d / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TripleMode {
    /// Fundamental-domain integral of Φ^{r,s}·conj(E(·, ½+it)).
    Quadrature,
    /// R(E(r)E(s), ½ − it) from the unfolded series or its closed form.
    Unfolded,
}

/// Φ^{r,s}·conj(E(·, ½ + it)) integrated over the fundamental domain.
pub fn triple_product_quadrature(
    model: &dyn LatticeModel,
    r: Complex64,
    s: Complex64,
    t: f64,
    b: f64,
    policy: TailPolicy,
    quad: &QuadratureConfig,
) -> Result<RenormResult> {
    let poly = EisensteinPolynomial::phi_triple(model, policy, r, s, Some(c(0.5, t)))?;
    rn_integral(&poly, b, quad)
}

/// R.N.∫E(r)E(s)conj(E(½+it))dμ.
pub fn rn_triple_product(model: &dyn LatticeModel, r: Complex64, s: Complex64, t: f64, mode: TripleMode, quad: &QuadratureConfig) -> Result<Complex64> {
    check_cancellation_distance(r, s, DELTA_POLE)?;
    match mode {
        TripleMode::Quadrature => Ok(triple_product_quadrature(model, r, s, t, DEFAULT_B0, TailPolicy::default(), quad)?.value),
        TripleMode::Unfolded => {
            let pair = EisensteinPair::new(r, s);
            let w = c(0.5, -t);
            // The m-series only converges to the right of the growth exponent + 1,
            // which critical-line data never reach; the closed form covers the rest.
            if w.re > pair.growth_exponent() + 1.0 && t.abs() <= 2.0 {
                Ok(rankin_selberg_series(model, pair, w, quad.rel_tol)?.value)
            } else {
                rankin_selberg_closed_form(model, pair, w)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::psl2z_model;
    use crate::numdiff::derivative;

    fn prof(terms: &[(f64, f64, f64, f64, u32)]) -> GrowthProfile {
        GrowthProfile::new(terms.iter().map(|&(cr, ci, ar, ai, n)| ExponentTerm::new(c(cr, ci), c(ar, ai), n)).collect()).unwrap()
    }

    #[test]
    fn profile_evaluation_and_hat() {
        assert!((xi_eval(&prof(&[(1.0, 0.0, 2.0, 0.0, 0)]), 3.0) - 9.0).norm() < 1e-13);
        let e = std::f64::consts::E;
        assert!((xi_eval(&prof(&[(2.0, 0.0, 1.0, 0.0, 1)]), e) - 2.0 * e).norm() < 1e-13);
        assert!((xi_hat(&prof(&[(1.0, 0.0, 2.0, 0.0, 0)]), 2.0) - 2.0).norm() < 1e-13);
        assert!((xi_hat(&prof(&[(1.0, 0.0, 1.0, 0.0, 0)]), e) - 1.0).norm() < 1e-13);
        assert!(GrowthProfile::new(vec![ExponentTerm::new(c(0.0, 0.0), c(1.0, 0.0), 0)]).is_err());
        assert!(GrowthProfile::new(vec![ExponentTerm::new(c(1.0, 0.0), c(1.0, 0.0), 0); 2]).is_err());
    }

    #[test]
    fn hat_differentiates_to_weighted_profile() {
        let p = prof(&[(1.3, -0.2, 1.7, 0.4, 2), (0.5, 0.9, 1.0, 0.0, 1), (-0.8, 0.1, 0.3, -2.0, 0)]);
        let d = derivative(|y| Ok(xi_hat(&p, y.re)), c(3.0, 0.0), 1e-3, 1e-4, 1e-6).unwrap();
        assert!((d - xi_eval(&p, 3.0) / 9.0).norm() < 1e-8);
    }

    #[test]
    fn abs_square_profile_is_real_positive() {
        let model = psl2z_model();
        let s0 = c(0.5, 1.0);
        let p = EisensteinPolynomial::product(&model, TailPolicy::default(), &[(s0, false), (s0, true)]).unwrap();
        let v = p.profile().eval(5.0);
        assert!(v.im.abs() < 1e-12 * v.norm() && v.re > 0.0);
        assert_eq!(p.profile().terms.len(), 3);
    }

    #[test]
    fn maass_selberg_symmetry() {
        let model = psl2z_model();
        let (s1, s2) = (c(0.5, 1.0), c(0.5, 3.0));
        let a = maass_selberg_rhs(&model, s1, s2, 2.0).unwrap();
        let b = maass_selberg_rhs(&model, s2, s1, 2.0).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * a.norm());
        assert!(maass_selberg_rhs(&model, s1, s1.conj(), 2.0).is_err());
    }

    #[test]
    fn constant_function_integrates_to_covolume() {
        let one = FnEvaluator::new(|_| Ok(c(1.0, 0.0)), GrowthProfile::constant(c(1.0, 0.0)));
        let res = rn_integral(&one, 1.5, &QuadratureConfig::with_tol(1e-10, 1e-10)).unwrap();
        assert!((res.value - PI / 3.0).norm() < 1e-8, "{res:?}");
        assert!(res.b_independence_spread < 10.0 * res.quad_error_estimate);
    }

    #[test]
    fn wrong_profile_is_detected() {
        let one = FnEvaluator::new(|_| Ok(c(1.0, 0.0)), GrowthProfile::zero());
        assert!(rn_integral(&one, 1.5, &QuadratureConfig::default()).is_err());
    }

    #[test]
    fn closed_form_matches_series() {
        let model = psl2z_model();
        for pair in [EisensteinPair::abs_square(c(0.5, 1.0)), EisensteinPair::new(c(0.5, 1.0), c(0.5, 2.0))] {
            let w = c(3.5, 0.7);
            let series = rankin_selberg_transform(&model, pair, w, RsMode::Direct, 1e-12).unwrap();
            let closed = rankin_selberg_closed_form(&model, pair, w).unwrap();
            assert!((series.value - closed).norm() < 1e-8 * closed.norm(), "{series:?} {closed}");
        }
        assert!(rankin_selberg_transform(&model, EisensteinPair::abs_square(c(0.5, 1.0)), c(1.5, 0.0), RsMode::Direct, 1e-10).is_err());
    }

    #[test]
    fn phi_triple_is_bounded_and_invariant() {
        let model = psl2z_model();
        let pol = TailPolicy::default();
        let (r, s) = (c(0.5, 1.0), c(0.5, 2.0));
        let z = HyperbolicPoint::new(0.21, 1.4).unwrap();
        let a = phi_triple(&model, z, r, s, pol).unwrap();
        let b = phi_triple(&model, z.translate(1.0), r, s, pol).unwrap();
        assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()));
        let poly = EisensteinPolynomial::phi_triple(&model, pol, r, s, None).unwrap();
        let far = HyperbolicPoint::new(0.3, 50.0).unwrap();
        let rem = poly.profile().eval(50.0);
        assert!(poly.eval(far).unwrap().norm() < 1e-6 + rem.norm());
        assert!(phi_triple(&model, z, r, r + 1e-4, pol).is_err());
    }
}
