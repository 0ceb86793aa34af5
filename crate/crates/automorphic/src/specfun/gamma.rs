//! Complex Gamma, log-Gamma and digamma.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::complex::{c, I};
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_78;

pub fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let x = z - 1.0;
    let mut a = c(LANCZOS[0], 0.0);
    for (k, &ck) in LANCZOS.iter().enumerate().skip(1) {
        a += ck / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + a.ln()
}

/// ln sin(πz), accurate far from the real axis.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin(πz) = e^{-iπz}(1 - e^{2iπz})·(i/2)
    let w = (2.0 * PI * I * z).exp();
    -I * PI * z + (1.0 - w).ln() + c(-LN_2, PI / 2.0)
}

/// Principal-ish ln Γ(z). Only `exp` of the result and differences of
/// results are meaningful; the imaginary part may differ from the
/// continuous branch by a multiple of 2π.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::pole(format!("Gamma at {z}")));
    }
    if z.re < 0.5 {
        let ls = ln_sin_pi(z);
        Ok(c(PI.ln(), 0.0) - ls - ln_gamma_lanczos(1.0 - z))
    } else {
        Ok(ln_gamma_lanczos(z))
    }
}

/// Γ(z).
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re > 0.0 && z.re <= 30.0 && z.re == z.re.round() {
        let mut f = 1.0;
        for j in 2..(z.re as u64) {
            f *= j as f64;
        }
        return Ok(c(f, 0.0));
    }
    let v = ln_gamma(z)?.exp();
    Ok(if z.im == 0.0 { c(v.re, 0.0) } else { v })
}

/// 1/Γ(z), zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    match ln_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => c(0.0, 0.0),
    }
}

/// Γ(a)/Γ(b) through log-Gamma.
pub fn gamma_ratio(a: Complex64, b: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(b) {
        return Ok(c(0.0, 0.0));
    }
    Ok((ln_gamma(a)? - ln_gamma(b)?).exp())
}

fn cot_pi(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return cot_pi(z.conj()).conj();
    }
    let w = (2.0 * PI * I * z).exp();
    I * (w + 1.0) / (w - 1.0)
}

/// Digamma ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::pole(format!("digamma at {z}")));
    }
    if z.re < 0.5 {
        return Ok(digamma(1.0 - z)? - PI * cot_pi(z));
    }
    let mut z = z;
    let mut acc = c(0.0, 0.0);
    while z.norm() < 10.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let z2 = 1.0 / (z * z);
    // Bernoulli terms B_{2k}/(2k) for k = 1..7.
    const COEF: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let mut series = c(0.0, 0.0);
    let mut p = z2;
    for &ck in &COEF {
        series += ck * p;
        p *= z2;
    }
    Ok(acc + z.ln() - 0.5 / z - series)
}
