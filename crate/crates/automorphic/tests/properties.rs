use automorphic::complex::{c, format_complex, parse_complex};
use automorphic::eisenstein::{TailPolicy, DEFAULT_B0};
use automorphic::lattice::{psl2z_model, LatticeModel};
use automorphic::lfunc::{coeff_sum, gamma_factor, mellin_cutoff, smoothed_coeff_sum, CutoffSpec, LSpec};
use automorphic::quad::QuadratureConfig;
use automorphic::renorm::{rn_integral, xi_eval, xi_hat, EisensteinPolynomial, ExponentTerm, GrowthProfile};
use automorphic::reptheory::{intertwining_coeff, pi_norm_sq, GroupElementU};
use automorphic::specfun::complex_gamma;
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, -1.0..1.0f64, (-300i32..300).prop_map(|e| 1.37 * 10f64.powi(e))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn complex_text_round_trips(re in finite(), im in finite()) {
        let z = c(re, im);
        prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }

    #[test]
    fn gamma_recurrence(re in 0.1..20.0f64, im in -30.0..30.0f64) {
        let z = c(re, im);
        let lhs = complex_gamma(z + 1.0).unwrap();
        let rhs = z * complex_gamma(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm());
    }

    #[test]
    fn intertwiner_inverse(re in -3.0..3.0f64, im in 0.1..20.0f64, u in -50i32..=50) {
        let s = c(re, im);
        let p = intertwining_coeff(s, u).unwrap() * intertwining_coeff(1.0 - s, u).unwrap();
        prop_assert!((p - 1.0).norm() < 1e-10);
    }

    #[test]
    fn scattering_functional_equation(re in -1.5..2.5f64, im in 0.5..30.0f64) {
        let model = psl2z_model();
        let s = c(re, im);
        let p = model.scattering(s).unwrap() * model.scattering(1.0 - s).unwrap();
        prop_assert!((p - 1.0).norm() < 1e-9);
    }

    #[test]
    fn gamma_factor_conjugation(re in 0.6..5.0f64, im in -20.0..20.0f64, t0 in 0.2..5.0f64) {
        let model = psl2z_model();
        let spec = LSpec::new(&model, t0).unwrap();
        let s = c(re, im);
        let a = gamma_factor(&spec, s).unwrap().conj();
        let b = gamma_factor(&spec, s.conj()).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * b.norm());
    }

    #[test]
    fn profile_hat_is_antiderivative(cr in -2.0..2.0f64, ar in -1.0..2.5f64, ai in -5.0..5.0f64, n in 0u32..3, b in 1.1..4.0f64) {
        prop_assume!((c(ar, ai) - 1.0).norm() > 1e-3);
        let p = GrowthProfile::new(vec![ExponentTerm::new(c(cr, 0.3), c(ar, ai), n)]).unwrap();
        // d/dB Ξ̂(B) = Ξ(B)/B².
        let h = 1e-5 * b;
        let d = (xi_hat(&p, b + h) - xi_hat(&p, b - h)) / (2.0 * h);
        let want = xi_eval(&p, b) / (b * b);
        prop_assert!((d - want).norm() <= 1e-6 * (1.0 + want.norm()));
    }

    #[test]
    fn cutoff_is_monotone(u in 2.5..200.0f64, x1 in 0.0..2.0f64, x2 in 0.0..2.0f64) {
        let spec = CutoffSpec::new(u).unwrap();
        let (lo, hi) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
        let (a, b) = (mellin_cutoff(&spec, lo), mellin_cutoff(&spec, hi));
        prop_assert!(a + 1e-14 >= b && (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn smoothed_sum_sandwich(m in 200usize..5000, u in 3.0..80.0f64, t0 in 0.3..3.0f64) {
        let model = psl2z_model();
        let spec = LSpec::new(&model, t0).unwrap();
        let cut = CutoffSpec::new(u).unwrap();
        let mid = smoothed_coeff_sum(&spec, m, &cut).unwrap();
        let lo = coeff_sum(&spec, (m as f64 * (1.0 - 1.0 / u)).floor() as usize).unwrap();
        let hi = coeff_sum(&spec, (m as f64 * (1.0 + 1.0 / u)).floor() as usize).unwrap();
        prop_assert!(lo <= mid * (1.0 + 1e-12) && mid <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn norm_is_positive_and_grows(eps in 0.02..0.19f64, t in 0.0..10.0f64) {
        let g = GroupElementU::g_eps(eps).unwrap();
        let a = pi_norm_sq(&g, t, 1e-10).unwrap();
        let b = pi_norm_sq(&g, t + 1.0, 1e-10).unwrap();
        prop_assert!(a > 0.0 && b > a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn renormalized_integral_is_linear(t1 in 0.5..4.0f64, t2 in 0.5..4.0f64, a in -2.0..2.0f64, b in -2.0..2.0f64) {
        prop_assume!((t1 - t2).abs() > 0.2);
        let model = psl2z_model();
        let quad = QuadratureConfig::default();
        let policy = TailPolicy::default();
        let (s1, s2) = (c(0.5, t1), c(0.5, t2));
        let single = |f: &[(automorphic::Complex64, bool)]| {
            rn_integral(&EisensteinPolynomial::product(&model, policy, f).unwrap(), DEFAULT_B0, &quad).unwrap().value
        };
        let f = single(&[(s1, false), (s1, true)]);
        let g = single(&[(s2, false), (s1, true)]);
        let mut combo = EisensteinPolynomial::new(&model, policy);
        combo.add_term(c(a, 0.0), &[(s1, false), (s1, true)]).unwrap();
        combo.add_term(c(0.0, b), &[(s2, false), (s1, true)]).unwrap();
        let both = rn_integral(&combo, DEFAULT_B0, &quad).unwrap().value;
        let want = a * f + c(0.0, b) * g;
        prop_assert!((both - want).norm() <= 1e-8 * (1.0 + want.norm()), "{} vs {}", both, want);
    }
}
