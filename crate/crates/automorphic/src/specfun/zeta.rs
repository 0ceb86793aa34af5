//! Riemann zeta by Euler–Maclaurin summation, and the completed zeta ξ.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::complex::c;
use crate::error::{Error, Result};
use crate::specfun::gamma::ln_gamma;

/// B_{2k}/(2k)! for k = 1..8.
const BERNOULLI_OVER_FACT: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
];

/// Default number of directly summed terms for `s`.
pub fn default_terms(s: Complex64) -> usize {
    50usize.max((2.0 * s.im.abs()).ceil() as usize)
}

/// ζ(s) for Re(s) > −1, s ≠ 1.
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    riemann_zeta_with(s, default_terms(s))
}

/// ζ(s) with `n` directly summed terms followed by eight correction terms.
pub fn riemann_zeta_with(s: Complex64, n: usize) -> Result<Complex64> {
    if s == c(1.0, 0.0) {
        return Err(Error::pole("zeta at s = 1"));
    }
    if s.re <= -1.0 {
        return Err(Error::domain(format!("zeta needs Re(s) > -1, got {s}")));
    }
    let n = n.max(2);
    let mut sum = c(0.0, 0.0);
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let n_pow = (-s * ln_n).exp();
    sum += n_pow * nf / (s - 1.0) + 0.5 * n_pow;
    // Rising factorial s(s+1)...(s+2k-2) times N^{-s-2k+1}.
    let mut rising = s;
    let mut term_pow = n_pow / nf;
    for (k, &b) in BERNOULLI_OVER_FACT.iter().enumerate() {
        sum += b * rising * term_pow;
        let m = 2 * k as u32 + 1;
        rising *= (s + m as f64) * (s + (m + 1) as f64);
        term_pow /= nf * nf;
    }
    if s.im == 0.0 {
        sum.im = 0.0;
    }
    Ok(sum)
}

/// ξ(s) = π^{−s/2}Γ(s/2)ζ(s), reflected through ξ(s) = ξ(1 − s) when Re(s) < 1/2.
pub fn completed_zeta(s: Complex64) -> Result<Complex64> {
    if s == c(0.0, 0.0) || s == c(1.0, 0.0) {
        return Err(Error::pole(format!("completed zeta at {s}")));
    }
    let w = if s.re < 0.5 { 1.0 - s } else { s };
    let pre = (-0.5 * w * PI.ln() + ln_gamma(0.5 * w)?).exp();
    let v = pre * riemann_zeta(w)?;
    Ok(if s.im == 0.0 { c(v.re, 0.0) } else { v })
}
