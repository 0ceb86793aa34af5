//! Adaptive Gauss–Kronrod quadrature (7-point Gauss, 15-point Kronrod).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Tolerances and limits for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Upper integration limit beyond which the integrand is known to be
    /// below `abs_tol`. Routines that pick their own cutoff ignore it.
    pub tail_cutoff: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 2000, tail_cutoff: f64::INFINITY }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let cfg = Self { abs_tol, rel_tol, max_subdivisions, tail_cutoff: f64::INFINITY };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) || self.max_subdivisions == 0 {
            return Err(Error::Invalid(format!("bad quadrature config {self:?}")));
        }
        Ok(())
    }

    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// QUADPACK-style scaled estimate that drives refinement.
    pub error: f64,
    /// Sum of unscaled |Kronrod − Gauss| differences; a pessimistic bound.
    pub raw_error: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

impl QuadResult {
    pub fn require(self, what: &str) -> Result<Self> {
        if self.converged && self.value.re.is_finite() && self.value.im.is_finite() {
            Ok(self)
        } else {
            Err(Error::Convergence { what: what.to_string(), achieved: self.error })
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    raw: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Abscissae of the 15-point rule on `[a, b]`: the centre first, then the
/// pairs (centre − dx_j, centre + dx_j).
fn gk15_nodes(a: f64, b: f64) -> [f64; 15] {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut x = [center; 15];
    for j in 0..7 {
        let dx = half * XGK[j];
        x[1 + 2 * j] = center - dx;
        x[2 + 2 * j] = center + dx;
    }
    x
}

/// Combines the 15 function values from [`gk15_nodes`] into
/// (Kronrod value, scaled error, raw |K − G|).
fn gk15_combine(fx: &[Complex64], a: f64, b: f64) -> (Complex64, f64, f64) {
    let half = 0.5 * (b - a);
    let fc = fx[0];
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = fc.norm() * WGK[7];
    for j in 0..7 {
        let (f1, f2) = (fx[1 + 2 * j], fx[2 + 2 * j]);
        resk += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            resg += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fx[1 + 2 * j] - mean).norm() + (fx[2 + 2 * j] - mean).norm());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let raw = ((resk - resg) * half).norm();
    let mut err = raw;
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err, raw)
}

/// One 15-point Kronrod evaluation on `[a, b]`.
pub fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64, f64) {
    let x = gk15_nodes(a, b);
    let fx: Vec<Complex64> = x.iter().map(|&t| f(t)).collect();
    gk15_combine(&fx, a, b)
}

/// Globally adaptive integration of `f` over `[points[0], points[last]]`,
/// starting from the panels delimited by `points`.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, points: &[f64], cfg: &QuadratureConfig) -> QuadResult {
    integrate_batch(|xs: &[f64]| xs.iter().map(|&x| f(x)).collect(), points, cfg)
}

/// [`integrate`] with an integrand that evaluates a whole batch of abscissae
/// at once, so callers can evaluate the nodes of a panel concurrently.
/// `f` must return one value per abscissa, in order.
pub fn integrate_batch<F: Fn(&[f64]) -> Vec<Complex64>>(f: F, points: &[f64], cfg: &QuadratureConfig) -> QuadResult {
    assert!(points.len() >= 2, "need at least two breakpoints");
    let rule = |a: f64, b: f64| {
        let x = gk15_nodes(a, b);
        let fx = f(&x);
        gk15_combine(&fx, a, b)
    };
    let mut heap = BinaryHeap::new();
    let mut frozen = Vec::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    for w in points.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let (value, error, raw) = rule(w[0], w[1]);
        total += value;
        total_err += error;
        heap.push(Panel { a: w[0], b: w[1], value, error, raw });
    }
    let mut subdivisions = heap.len();
    let mut converged = false;
    loop {
        if total_err <= cfg.abs_tol.max(cfg.rel_tol * total.norm()) {
            converged = true;
            break;
        }
        if subdivisions >= cfg.max_subdivisions {
            break;
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        let width = (worst.b - worst.a).abs();
        if width <= 64.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs()).max(1e-300) || mid == worst.a || mid == worst.b {
            frozen.push(worst);
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let (v1, e1, r1) = rule(worst.a, mid);
        let (v2, e2, r2) = rule(mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1, raw: r1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2, raw: r2 });
        subdivisions += 1;
    }
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut raw_error = 0.0;
    for p in &panels {
        value += p.value;
        error += p.error;
        raw_error += p.raw;
    }
    if !converged && error <= cfg.abs_tol.max(cfg.rel_tol * value.norm()) {
        converged = true;
    }
    QuadResult { value, error, raw_error, subdivisions, converged }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F: Fn(f64) -> f64>(f: F, points: &[f64], cfg: &QuadratureConfig) -> QuadResult {
    integrate(|x| Complex64::new(f(x), 0.0), points, cfg)
}

/// [`integrate`] for a fallible integrand whose 15 nodes per panel are
/// evaluated concurrently. The first evaluation error aborts the integration
/// and is returned; convergence is left for the caller to check.
pub fn integrate_par<F>(f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let res = integrate_batch(
        |xs: &[f64]| {
            if failure.lock().unwrap().is_some() {
                return vec![Complex64::new(0.0, 0.0); xs.len()];
            }
            xs.par_iter()
                .map(|&x| match f(x) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        },
        points,
        cfg,
    );
    match failure.into_inner().unwrap() {
        Some(e) => Err(e),
        None => Ok(res),
    }
}

/// `n + 1` equally spaced points from `a` to `b`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n).map(|j| if j == n { b } else { a + (b - a) * j as f64 / n as f64 }).collect()
}
