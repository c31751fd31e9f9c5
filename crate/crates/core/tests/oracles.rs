use std::f64::consts::PI;

use num_complex::Complex64;

use twistlab::coefficients::tau_exact;
use twistlab::evaluate::{fe_cross_check, smoothed_value, SmoothedEvaluator};
use twistlab::reference::reference_zeta;
use twistlab::special::{gamma_ratio, gamma_ratio_exact};
use twistlab::summatory::{additive_twist, omega_certificate};
use twistlab::transform::kappa;
use twistlab::{preset, Budget, CoefficientProvider, Convention, SmoothingParams, PRESET_NAMES};

/// Σ_{k≥0} (−1)^k a_k by the Cohen–Villegas–Zagier acceleration.
fn alternating_sum(a: impl Fn(usize) -> Complex64, n: usize) -> Complex64 {
    let mut d = (3.0 + 8f64.sqrt()).powi(n as i32);
    d = 0.5 * (d + 1.0 / d);
    let (mut b, mut c) = (-1.0f64, -d);
    let mut s = Complex64::new(0.0, 0.0);
    for k in 0..n {
        c = b - c;
        s += a(k) * c;
        let kf = k as f64;
        let nf = n as f64;
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

/// L(s, χ₄) = Σ_k (−1)^k (2k+1)^{−s}.
fn l_chi4(s: Complex64) -> Complex64 {
    let n = 60 + (1.5 * s.im.abs()) as usize;
    alternating_sum(|k| Complex64::new(2.0 * k as f64 + 1.0, 0.0).powc(-s), n)
}

fn divisor_counts(n: usize) -> Vec<u32> {
    let mut d = vec![0u32; n + 1];
    for i in 1..=n {
        for j in (i..=n).step_by(i) {
            d[j] += 1;
        }
    }
    d
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn chi4_oracle_sanity() {
    // L(1, χ₄) = π/4 and L(0, χ₄) = 1/2.
    assert!((l_chi4(Complex64::new(1.0, 0.0)) - PI / 4.0).norm() < 1e-13);
    assert!((l_chi4(Complex64::new(0.0, 0.0)) - 0.5).norm() < 1e-13);
}

#[test]
fn tau_is_multiplicative_and_hecke() {
    let n = 5000;
    let tau = tau_exact(n as u64).unwrap();
    let t = |k: usize| tau[k - 1];
    for a in 2..80 {
        for b in 2..(n / a + 1).min(80) {
            if gcd(a, b) == 1 && a * b <= n {
                assert_eq!(t(a * b), t(a) * t(b), "tau({a}·{b})");
            }
        }
    }
    for p in [2usize, 3, 5, 7, 11, 13, 17] {
        let p11 = (p as i128).pow(11);
        let mut prev = 1i128;
        let mut cur = t(p);
        let mut power = p;
        while power * p <= n {
            let next = t(p) * cur - p11 * prev;
            power *= p;
            assert_eq!(t(power), next, "tau({power})");
            prev = cur;
            cur = next;
        }
    }
}

#[test]
fn tau_respects_deligne_bound() {
    let n = 100_000;
    let d = divisor_counts(n);
    let table = CoefficientProvider::Tau.bulk(n as u64).unwrap();
    for (i, a) in table.values().iter().enumerate() {
        assert!(a.norm() <= d[i + 1] as f64 + 1e-9, "n = {}", i + 1);
    }
}

#[test]
fn chi4_matches_independent_series() {
    let l = preset("dirichlet-chi4").unwrap();
    for t in [5.0, 20.0, 40.0] {
        let s = Complex64::new(0.5, t);
        let v = smoothed_value(&l, Complex64::new(0.5, 0.0), t, &SmoothingParams::standalone(t, 1.0)).unwrap();
        let want = l_chi4(s);
        assert!((v.value - want).norm() < 1e-8, "t = {t}: {} vs {want}", v.value);
    }
}

#[test]
fn zeta_family_matches_reference_products() {
    let sp = SmoothingParams::new(1e4);
    let half = Complex64::new(0.5, 0.0);
    for t in [15.0, 35.0] {
        let s = Complex64::new(0.5, t);
        let z = reference_zeta(s).unwrap();
        let cases = [
            ("zeta-doubled", z),
            ("zeta-sq", z * z),
            (
                "zeta-shift-pair",
                reference_zeta(s + 0.5).unwrap() * reference_zeta(s - 0.5).unwrap(),
            ),
            ("zeta-scaled", reference_zeta(2.0 * s - 0.5).unwrap()),
        ];
        for (name, want) in cases {
            let v = smoothed_value(&preset(name).unwrap(), half, t, &sp).unwrap().value;
            assert!(
                (v - want).norm() < 1e-7 * want.norm().max(1.0),
                "{name} at t = {t}: {v} vs {want}"
            );
        }
    }
}

#[test]
fn zeta_scaled_partial_sums_at_two() {
    let l = preset("zeta-scaled").unwrap();
    let table = l.coefficients().bulk(10_000).unwrap();
    let sum: f64 = table
        .values()
        .iter()
        .enumerate()
        .map(|(i, a)| a.re / ((i + 1) as f64).powi(2))
        .sum();
    let want = reference_zeta(Complex64::new(3.5, 0.0)).unwrap().re;
    let tail = 100f64.powf(-2.5) / 2.5;
    assert!(want - sum >= 0.0 && want - sum <= tail);
}

#[test]
fn delta_satisfies_its_functional_equation() {
    let l = preset("delta").unwrap();
    let defect = fe_cross_check(&l, 20.0, &SmoothingParams::standalone(20.0, 2.0)).unwrap();
    assert!(defect < 1e-5, "defect {defect}");
}

#[test]
fn tighter_truncation_stays_within_reported_tail() {
    let budget = Budget::default();
    for name in ["zeta", "dirichlet-chi4", "delta", "zeta-shift-pair"] {
        let l = preset(name).unwrap();
        let sp = SmoothingParams::new(500.0).with_epsilon(1e-8);
        let coarse = SmoothedEvaluator::new(&l, 0.5, &sp, &budget).unwrap().evaluate(12.0).unwrap();
        let fine = SmoothedEvaluator::new(&l, 0.5, &sp.with_epsilon(1e-9), &budget)
            .unwrap()
            .evaluate(12.0)
            .unwrap();
        assert!(fine.terms_used >= coarse.terms_used);
        assert!(
            (fine.value - coarse.value).norm() <= coarse.tail_bound + 1e-13,
            "{name}: {} > {}",
            (fine.value - coarse.value).norm(),
            coarse.tail_bound
        );
    }
}

#[test]
fn doubling_x_converges() {
    let l = preset("zeta").unwrap();
    let t = 30.0;
    let want = reference_zeta(Complex64::new(0.5, t)).unwrap();
    let errors: Vec<f64> = [25.0, 50.0, 100.0, 200.0]
        .iter()
        .map(|&x| {
            let v = smoothed_value(&l, Complex64::new(0.5, 0.0), t, &SmoothingParams::new(x)).unwrap();
            (v.value - want).norm()
        })
        .collect();
    for w in errors.windows(2) {
        assert!(w[1] < w[0] || w[1] < 1e-12, "{errors:?}");
    }
}

#[test]
fn fe_defect_shrinks_with_x() {
    for name in PRESET_NAMES {
        let l = preset(name).unwrap();
        let defects: Vec<f64> = [1e3, 2e3, 4e3]
            .iter()
            .map(|&x| fe_cross_check(&l, 20.0, &SmoothingParams::new(x)).unwrap())
            .collect();
        for w in defects.windows(2) {
            assert!(w[1] <= w[0] * 1.05 || w[1] < 1e-5, "{name}: {defects:?}");
        }
    }
}

#[test]
fn gamma_ratio_examples() {
    let zeta = preset("zeta").unwrap();
    let errs: Vec<f64> = [50.0, 100.0, 200.0]
        .iter()
        .map(|&t| gamma_ratio(zeta.fe().gamma(), 0.6, t).unwrap().relative_error)
        .collect();
    for w in errs.windows(2) {
        let ratio = w[1] / w[0];
        assert!((0.45..0.55).contains(&ratio), "{errs:?}");
    }

    // With μ = 11/2 the first Stirling correction is about 30/t, so the phase
    // gap is that size, halving as t doubles.
    let delta = preset("delta").unwrap();
    let gap = |t: f64| {
        let r = gamma_ratio(delta.fe().gamma(), 0.5, t).unwrap();
        (r.exact / r.asymptotic).arg().abs()
    };
    for t in [100.0, 200.0, 400.0] {
        assert!(gap(t) * t < 33.3, "t = {t}: gap {}", gap(t));
        let ratio = gap(2.0 * t) / gap(t);
        assert!((0.45..0.55).contains(&ratio), "t = {t}: ratio {ratio}");
    }
}

#[test]
fn exact_ratio_decays_at_the_predicted_rate() {
    // |ratio(x + it)| (1 + t)^{d(x − 1/2)} stays within a bounded band.
    for name in PRESET_NAMES {
        let l = preset(name).unwrap();
        let d = l.degree();
        let scaled: Vec<f64> = (0..12)
            .map(|k| 20.0 * 1.6f64.powi(k))
            .map(|t| gamma_ratio_exact(l.fe().gamma(), 0.6, t).unwrap().norm() * (1.0 + t).powf(d * 0.1))
            .collect();
        let (lo, hi) = scaled
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        assert!(hi / lo < 2.0, "{name}: {scaled:?}");
    }
}

#[test]
fn zeta_twist_is_the_smoothing_mass() {
    let l = preset("zeta").unwrap();
    let sp = SmoothingParams::for_twist();
    for t in [100.0, 1000.0, 5000.5] {
        let w = additive_twist(&l, 2.0 * PI, t, &sp, &Budget::default()).unwrap();
        let x = sp.cutoff_for(t, 1.0);
        let first = t.floor() as u64 + 1;
        let last = (4.0 * t).ceil() as u64 - 1;
        let mass: f64 = (first..=last).map(|n| (-(n as f64 / x).powi(2)).exp()).sum();
        assert!((w.re - mass).abs() <= 1e-9 * mass && w.im.abs() <= 1e-9 * mass, "T = {t}: {w}");
    }
}

#[test]
fn zeta_certificate_triangle_is_tight() {
    let l = preset("zeta").unwrap();
    let k = kappa(&l, 2.0 * PI, 1, Convention::OracleCalibrated).unwrap();
    let rows = omega_certificate(&l, 2.0 * PI, 1, &k, &[64.0, 512.0], &SmoothingParams::for_twist(), &Budget::default()).unwrap();
    for r in rows {
        assert!(r.pass && r.triangle_ok);
        assert!(r.margin > 1.9);
        assert!(r.lhs <= r.abs_sum);
    }
}
