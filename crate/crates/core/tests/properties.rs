use num_complex::Complex64;
use proptest::prelude::*;

use twistlab::oscillatory::{integrate_with, QuadratureOptions};
use twistlab::special::{gamma_ratio_asymptotic, log_gamma};
use twistlab::summatory::{abs_partial_sum, growth_exponent, twist_scan};
use twistlab::{
    preset, resonance_alpha, Budget, CoefficientProvider, GammaFactor, GammaFactorSpec, SmoothingParams, PRESET_NAMES,
};

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn table() -> impl Strategy<Value = CoefficientProvider> {
    prop::collection::vec(complex(), 1..40).prop_map(CoefficientProvider::table)
}

fn provider() -> impl Strategy<Value = CoefficientProvider> {
    let leaf = prop_oneof![
        Just(CoefficientProvider::Zeta),
        Just(CoefficientProvider::Chi4),
        Just(CoefficientProvider::Tau),
        table(),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| CoefficientProvider::convolution(a, b)),
            (inner.clone(), -1.0f64..1.0).prop_map(|(a, d)| CoefficientProvider::shifted(a, d)),
            (inner.clone(), 1u32..4, -1.0f64..1.0).prop_map(|(a, k, c)| CoefficientProvider::argument_scaled(a, k, c)),
            inner.clone().prop_map(|a| CoefficientProvider::Conjugate(Box::new(a))),
            (inner, 0.1f64..5.0).prop_map(|(a, c)| CoefficientProvider::Multiplied {
                inner: Box::new(a),
                factor: c,
            }),
        ]
    })
}

fn factor(lambda: std::ops::Range<f64>) -> impl Strategy<Value = GammaFactor> {
    (lambda, -3.0f64..3.0, -3.0f64..3.0).prop_map(|(l, re, im)| GammaFactor::new(l, Complex64::new(re, im)))
}

fn spec() -> impl Strategy<Value = GammaFactorSpec> {
    (
        prop::collection::vec(factor(0.5..2.0), 1..4),
        prop::collection::vec(factor(0.05..0.2), 0..3),
    )
        .prop_map(|(num, den)| GammaFactorSpec::new(num, den).unwrap())
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bulk_matches_pointwise_exactly(p in provider(), n in 1u64..300) {
        let table = p.bulk(n).unwrap();
        prop_assert_eq!(table.len() as u64, n);
        for k in 1..=n {
            let single = p.coefficient(k).unwrap();
            let bulk = table.get(k);
            prop_assert!(
                single.re.to_bits() == bulk.re.to_bits() && single.im.to_bits() == bulk.im.to_bits(),
                "n = {}: {} vs {}", k, single, bulk
            );
        }
    }

    #[test]
    fn convolution_commutes(a in table(), b in table()) {
        let ab = CoefficientProvider::convolution(a.clone(), b.clone());
        let ba = CoefficientProvider::convolution(b, a);
        for n in 1..80 {
            prop_assert!(close(ab.coefficient(n).unwrap(), ba.coefficient(n).unwrap(), 1e-12));
        }
    }

    #[test]
    fn convolution_associates(a in table(), b in table(), c in table()) {
        let left = CoefficientProvider::convolution(CoefficientProvider::convolution(a.clone(), b.clone()), c.clone());
        let right = CoefficientProvider::convolution(a, CoefficientProvider::convolution(b, c));
        for n in 1..120 {
            prop_assert!(close(left.coefficient(n).unwrap(), right.coefficient(n).unwrap(), 1e-12));
        }
    }

    #[test]
    fn degree_and_invariants_are_additive(s1 in spec(), s2 in spec()) {
        let joined = s1.concat(&s2);
        prop_assert!((joined.degree() - s1.degree() - s2.degree()).abs() < 1e-12);
        let (i1, i2, ij) = (
            s1.stirling_constants().unwrap(),
            s2.stirling_constants().unwrap(),
            joined.stirling_constants().unwrap(),
        );
        prop_assert!((ij.a - i1.a - i2.a).abs() < 1e-12);
        prop_assert!((ij.c.ln() - i1.c.ln() - i2.c.ln()).abs() < 1e-12);
        prop_assert!(ij.c > 0.0);
    }

    #[test]
    fn asymptotic_ratio_is_unimodular_at_one_half(idx in 0usize..PRESET_NAMES.len(), t in 50.0f64..2000.0) {
        let l = preset(PRESET_NAMES[idx]).unwrap();
        let r = gamma_ratio_asymptotic(l.fe().gamma(), 0.5, t).unwrap();
        prop_assert!((r.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_gamma_recurrence(re in -20.0f64..30.0, im in -200.0f64..200.0) {
        let z = Complex64::new(re, im);
        prop_assume!(im.abs() > 1e-3 || (re - re.round()).abs() > 1e-3);
        let lhs = log_gamma(z + 1.0).unwrap();
        let rhs = log_gamma(z).unwrap() + z.ln();
        // Equal modulo 2πi.
        let diff = lhs - rhs;
        let turns = (diff.im / (2.0 * std::f64::consts::PI)).round();
        prop_assert!(diff.re.abs() < 1e-10 * (1.0 + lhs.norm()));
        prop_assert!((diff.im - turns * 2.0 * std::f64::consts::PI).abs() < 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn quadrature_is_interval_additive(omega in 1.0f64..200.0, chirp in 0.0f64..5.0, len in 0.5f64..10.0) {
        let phase = move |t: f64| omega * t + chirp * t * t;
        let f = move |t: f64| Complex64::from_polar(1.0 / (1.0 + t), phase(t));
        let w = move |t: f64| omega + 2.0 * chirp * t;
        let tol = 1e-9;
        let opts = QuadratureOptions::with_tol(tol);
        let whole = integrate_with(f, w, 0.0, len, &opts).unwrap().value;
        let mid = 0.5 * len;
        let left = integrate_with(f, w, 0.0, mid, &opts).unwrap().value;
        let right = integrate_with(f, w, mid, len, &opts).unwrap().value;
        prop_assert!((whole - left - right).norm() <= 2.0 * tol);
    }

    #[test]
    fn resonance_round_trips(idx in 0usize..PRESET_NAMES.len(), m in 1u64..1000) {
        let l = preset(PRESET_NAMES[idx]).unwrap();
        let inv = l.invariants().unwrap();
        let q = l.fe().q();
        let alpha = resonance_alpha(m, &inv, q).unwrap();
        let back = inv.c * q * q * alpha.powf(inv.d);
        prop_assert!(((back - m as f64) / m as f64).abs() < 1e-12);
    }

    #[test]
    fn partial_sums_are_monotone(idx in 0usize..PRESET_NAMES.len(), x in 2.0f64..3000.0) {
        let l = preset(PRESET_NAMES[idx]).unwrap();
        let b = Budget::default();
        prop_assert!(abs_partial_sum(&l, x, &b).unwrap() <= abs_partial_sum(&l, 1.5 * x, &b).unwrap());
    }
}

#[test]
fn growth_slope_ignores_scaling() {
    let l = preset("zeta-shift-pair").unwrap();
    let scaled = l.scaled(7.0);
    let grid: Vec<f64> = (8..=14).map(|k| 2f64.powi(k)).collect();
    let b = Budget::default();
    let s1: Vec<f64> = grid.iter().map(|&x| abs_partial_sum(&l, x, &b).unwrap()).collect();
    let s7: Vec<f64> = grid.iter().map(|&x| abs_partial_sum(&scaled, x, &b).unwrap()).collect();
    let (f1, f7) = (growth_exponent(&grid, &s1).unwrap(), growth_exponent(&grid, &s7).unwrap());
    assert!((f1.slope - f7.slope).abs() < 1e-12);
    assert!((f7.intercept - f1.intercept - 7f64.ln()).abs() < 1e-12);
}

#[test]
fn zeta_scaled_sum_lives_on_squares() {
    let l = preset("zeta-scaled").unwrap();
    for x in [10.0, 100.0, 1000.5, 12345.0] {
        let expected: f64 = (1u64..).take_while(|k| ((k * k) as f64) < x).map(|k| (k as f64).sqrt()).sum();
        let got = abs_partial_sum(&l, x, &Budget::default()).unwrap();
        assert!((got - expected).abs() < 1e-10 * expected, "X = {x}");
    }
}

#[test]
fn normalized_twists_are_exact_ratios() {
    let l = preset("delta").unwrap();
    let grid = [256.0, 512.0, 1024.0, 2048.0];
    let r = twist_scan(&l, 2.0 * std::f64::consts::PI, &grid, &SmoothingParams::for_twist(), &Budget::default()).unwrap();
    for ((t, w), n) in grid.iter().zip(&r.twists).zip(&r.normalized) {
        assert_eq!(*n, w.norm() / t.powf(0.75));
    }
    assert!(r.fit.is_some());
}
