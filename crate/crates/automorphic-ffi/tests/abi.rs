use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use automorphic_ffi::*;

const Z: AmComplex = AmComplex { re: 0.0, im: 0.0 };

fn cz(re: f64, im: f64) -> AmComplex {
    AmComplex { re, im }
}

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    unsafe {
        am_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

struct Model(*mut AmModel);

impl Model {
    fn new(limit: usize) -> Self {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { am_model_new(limit, &mut h) }, AmStatus::Ok);
        assert!(!h.is_null());
        Model(h)
    }
}

impl Drop for Model {
    fn drop(&mut self) {
        unsafe { am_model_free(self.0) }
    }
}

#[test]
fn special_functions() {
    let mut out = Z;
    unsafe {
        assert_eq!(am_gamma(cz(5.0, 0.0), &mut out), AmStatus::Ok);
        assert!((out.re - 24.0).abs() < 1e-12 && out.im.abs() < 1e-12);
        assert_eq!(am_zeta(cz(2.0, 0.0), &mut out), AmStatus::Ok);
        assert!((out.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-13);
        // K_{1/2}(x) = sqrt(π/2x) e^{-x}.
        assert_eq!(am_k_bessel(cz(0.5, 0.0), 2.0, &mut out), AmStatus::Ok);
        let want = (std::f64::consts::PI / 4.0).sqrt() * (-2.0f64).exp();
        assert!((out.re - want).abs() < 1e-12);
        assert_eq!(am_intertwining(cz(0.5, 3.0), 0, &mut out), AmStatus::Ok);
        assert!(out.re.is_finite());
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut out = Z;
    unsafe {
        assert_eq!(am_gamma(cz(-2.0, 0.0), &mut out), AmStatus::Pole);
        assert!(!last_error().is_empty());
        assert_eq!(am_zeta(cz(2.0, 0.0), ptr::null_mut()), AmStatus::NullPointer);
        assert!(last_error().contains("null"));
        assert_eq!(am_scattering(ptr::null(), cz(0.5, 1.0), &mut out), AmStatus::NullPointer);
        assert_eq!(am_gamma(cz(2.0, 0.0), &mut out), AmStatus::Ok);
        assert_eq!(last_error(), "");
        assert_eq!(am_model_new(10, ptr::null_mut()), AmStatus::NullPointer);
        am_model_free(ptr::null_mut());
    }
    let name = unsafe { CStr::from_ptr(am_status_name(AmStatus::SieveLimit)) };
    assert_eq!(name.to_str().unwrap(), "sieve-limit");
}

#[test]
fn error_message_truncates() {
    let mut out = Z;
    unsafe {
        am_gamma(cz(0.0, 0.0), &mut out);
        let full = am_last_error_message(ptr::null_mut(), 0);
        let mut buf = [1 as std::ffi::c_char; 4];
        assert_eq!(am_last_error_message(buf.as_mut_ptr(), 4), full);
        assert_eq!(buf[3], 0);
    }
}

#[test]
fn model_functions() {
    let m = Model::new(20_000);
    let mut out = Z;
    unsafe {
        assert_eq!(am_scattering(m.0, cz(0.5, 4.0), &mut out), AmStatus::Ok);
        assert!(((out.re * out.re + out.im * out.im).sqrt() - 1.0).abs() < 1e-12);
        assert_eq!(am_eisenstein(m.0, 0.1, 1.4, cz(0.5, 3.0), 0, &mut out), AmStatus::Ok);
        // Periodic in x.
        let mut moved = Z;
        assert_eq!(am_eisenstein(m.0, 1.1, 1.4, cz(0.5, 3.0), 0, &mut moved), AmStatus::Ok);
        assert!((out.re - moved.re).abs() < 1e-10 && (out.im - moved.im).abs() < 1e-10);
        assert_eq!(am_eisenstein(m.0, 0.0, -1.0, cz(0.5, 3.0), 0, &mut out), AmStatus::Domain);

        let mut s = 0.0;
        assert_eq!(am_coeff_sum(m.0, 1.0, 1000, &mut s), AmStatus::Ok);
        assert!(s > 0.0);
        assert_eq!(am_coeff_sum(m.0, 1.0, 1_000_000, &mut s), AmStatus::SieveLimit);

        let mut k = AmAsymptotics { main_loglinear: 0.0, main_linear: 0.0, c_one: Z, c_osc: Z };
        assert_eq!(am_asymptotic_constants(m.0, 1.0, &mut k), AmStatus::Ok);
        assert!(k.main_loglinear > 0.0);

        let mut err = f64::NAN;
        assert_eq!(am_rn_product(m.0, cz(0.5, 1.0), cz(0.5, 1.0), 1.2, &mut out, &mut err), AmStatus::Ok);
        assert!((out.re + 0.7057916658).abs() < 1e-8 && err.is_finite());
        assert_eq!(am_rn_product(m.0, cz(0.5, 1.0), cz(0.5, 1.0), 1.2, &mut out, ptr::null_mut()), AmStatus::Ok);

        let (mut q, mut u) = (Z, Z);
        assert_eq!(am_triple_product(m.0, cz(0.5, 1.0), cz(0.5, 2.0), 4.0, false, &mut q), AmStatus::Ok);
        assert_eq!(am_triple_product(m.0, cz(0.5, 1.0), cz(0.5, 2.0), 4.0, true, &mut u), AmStatus::Ok);
        let scale = 1.0 + (u.re * u.re + u.im * u.im).sqrt();
        assert!(((q.re - u.re).powi(2) + (q.im - u.im).powi(2)).sqrt() < 1e-6 * scale);
    }
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/automorphic.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["am_model_new", "am_model_free", "am_eisenstein", "am_last_error_message", "typedef struct AmModel AmModel"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let Ok(status) = Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"]).arg(&header).status() else {
        eprintln!("no C compiler; skipped syntax check");
        return;
    };
    assert!(status.success());
}
