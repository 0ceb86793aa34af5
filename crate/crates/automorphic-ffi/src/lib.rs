//! C ABI over the `automorphic` crate.
//!
//! Every function returns an [`AmStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and can be read with
//! [`am_last_error_message`]. Models are opaque handles created by
//! [`am_model_new`] and released with [`am_model_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use automorphic::eisenstein::{eval_e_weighted, TailPolicy};
use automorphic::lattice::{HyperbolicPoint, LatticeModel, ModelConfig, Psl2z};
use automorphic::lfunc::{asymptotic_constants, coeff_sum, LSpec};
use automorphic::quad::QuadratureConfig;
use automorphic::renorm::{rn_integral, rn_triple_product, EisensteinPolynomial, TripleMode};
use automorphic::reptheory::intertwining_coeff;
use automorphic::specfun::{complex_gamma, k_bessel, riemann_zeta};
use automorphic::{Complex64, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmStatus {
    Ok = 0,
    Pole = 1,
    Domain = 2,
    Convergence = 3,
    SieveLimit = 4,
    IterationLimit = 5,
    InvalidArgument = 6,
    NullPointer = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmComplex {
    pub re: f64,
    pub im: f64,
}

impl From<AmComplex> for Complex64 {
    fn from(z: AmComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for AmComplex {
    fn from(z: Complex64) -> Self {
        AmComplex { re: z.re, im: z.im }
    }
}

/// Constants of the coefficient-sum asymptotics.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmAsymptotics {
    pub main_loglinear: f64,
    pub main_linear: f64,
    pub c_one: AmComplex,
    pub c_osc: AmComplex,
}

/// Opaque PSL(2,Z) model with its divisor sieve.
pub struct AmModel {
    inner: Psl2z,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.as_bytes().to_vec());
}

fn status_of(e: &Error) -> AmStatus {
    match e {
        Error::Pole(_) => AmStatus::Pole,
        Error::Domain(_) => AmStatus::Domain,
        Error::Convergence { .. } => AmStatus::Convergence,
        Error::SieveLimit { .. } => AmStatus::SieveLimit,
        Error::IterationLimit(_) => AmStatus::IterationLimit,
        Error::Invalid(_) => AmStatus::InvalidArgument,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `f`, converting errors and panics into a status and a stored message.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> AmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            AmStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            AmStatus::NullPointer
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            AmStatus::Panic
        }
    }
}

unsafe fn model_ref<'a>(model: *const AmModel) -> Result<&'a Psl2z, Failure> {
    model.as_ref().map(|m| &m.inner).ok_or(Failure::Null("model"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("output"));
    }
    out.write(value);
    Ok(())
}

/// Creates a model whose divisor sieve covers indices up to `sieve_limit`
/// (0 selects the default, or `AUTOMORPHIC_SIEVE_LIMIT` when set).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn am_model_new(sieve_limit: usize, out: *mut *mut AmModel) -> AmStatus {
    guard(|| {
        let mut cfg = ModelConfig::from_env()?;
        if sieve_limit > 0 {
            cfg.sieve_limit = sieve_limit;
        }
        let handle = Box::into_raw(Box::new(AmModel { inner: Psl2z::new(cfg) }));
        if out.is_null() {
            drop(Box::from_raw(handle));
            return Err(Failure::Null("output"));
        }
        out.write(handle);
        Ok(())
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from [`am_model_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn am_model_free(model: *mut AmModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// E(x + iy, s) of weight 2υ.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn am_eisenstein(model: *const AmModel, x: f64, y: f64, s: AmComplex, upsilon: i32, out: *mut AmComplex) -> AmStatus {
    guard(|| {
        let m = model_ref(model)?;
        let v = eval_e_weighted(m, HyperbolicPoint::new(x, y)?, s.into(), upsilon, TailPolicy::default())?;
        write(out, v.into())
    })
}

/// Scattering function φ(s).
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn am_scattering(model: *const AmModel, s: AmComplex, out: *mut AmComplex) -> AmStatus {
    guard(|| {
        let v = model_ref(model)?.scattering(s.into())?;
        write(out, v.into())
    })
}

/// Renormalized integral of E(r)·conj E(s) with truncation height `b`;
/// `error` (may be null) receives the error estimate.
///
/// # Safety
/// `model` must be a live handle, `out` writable, `error` null or writable.
#[no_mangle]
pub unsafe extern "C" fn am_rn_product(model: *const AmModel, r: AmComplex, s: AmComplex, b: f64, out: *mut AmComplex, error: *mut f64) -> AmStatus {
    guard(|| {
        let m = model_ref(model)?;
        let poly = EisensteinPolynomial::product(m, TailPolicy::default(), &[(r.into(), false), (s.into(), true)])?;
        let res = rn_integral(&poly, b, &QuadratureConfig::default())?;
        if !error.is_null() {
            error.write(res.quad_error_estimate);
        }
        write(out, res.value.into())
    })
}

/// R.N.∫E(r)E(s)conj E(½+it) by quadrature (`unfolded` = 0) or the unfolded form.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn am_triple_product(model: *const AmModel, r: AmComplex, s: AmComplex, t: f64, unfolded: bool, out: *mut AmComplex) -> AmStatus {
    guard(|| {
        let mode = if unfolded { TripleMode::Unfolded } else { TripleMode::Quadrature };
        let v = rn_triple_product(model_ref(model)?, r.into(), s.into(), t, mode, &QuadratureConfig::default())?;
        write(out, v.into())
    })
}

/// S(M) = Σ_{0<|m|≤M}|ψ_m(½+it₀)|².
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn am_coeff_sum(model: *const AmModel, t0: f64, m: usize, out: *mut f64) -> AmStatus {
    guard(|| {
        let v = coeff_sum(&LSpec::new(model_ref(model)?, t0)?, m)?;
        write(out, v)
    })
}

/// Constants of the coefficient-sum asymptotics at t₀.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn am_asymptotic_constants(model: *const AmModel, t0: f64, out: *mut AmAsymptotics) -> AmStatus {
    guard(|| {
        let k = asymptotic_constants(&LSpec::new(model_ref(model)?, t0)?)?;
        write(
            out,
            AmAsymptotics { main_loglinear: k.main_loglinear, main_linear: k.main_linear, c_one: k.c_one.into(), c_osc: k.c_osc.into() },
        )
    })
}

/// Γ(z).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn am_gamma(z: AmComplex, out: *mut AmComplex) -> AmStatus {
    guard(|| write(out, complex_gamma(z.into())?.into()))
}

/// ζ(s) for Re s > −1.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn am_zeta(s: AmComplex, out: *mut AmComplex) -> AmStatus {
    guard(|| write(out, riemann_zeta(s.into())?.into()))
}

/// K_ν(x).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn am_k_bessel(nu: AmComplex, x: f64, out: *mut AmComplex) -> AmStatus {
    guard(|| write(out, k_bessel(nu.into(), x)?.into()))
}

/// Intertwining coefficient on the 2υ-th K-type.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn am_intertwining(s: AmComplex, upsilon: i32, out: *mut AmComplex) -> AmStatus {
    guard(|| write(out, intertwining_coeff(s.into(), upsilon)?.into()))
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`) and returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn am_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            buf.add(n).write(0);
        }
        msg.len()
    })
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn am_status_name(status: AmStatus) -> *const c_char {
    let s: &'static CStr = match status {
        AmStatus::Ok => c"ok",
        AmStatus::Pole => c"pole",
        AmStatus::Domain => c"domain",
        AmStatus::Convergence => c"convergence",
        AmStatus::SieveLimit => c"sieve-limit",
        AmStatus::IterationLimit => c"iteration-limit",
        AmStatus::InvalidArgument => c"invalid-argument",
        AmStatus::NullPointer => c"null-pointer",
        AmStatus::Panic => c"panic",
    };
    s.as_ptr()
}
