//! The twisted transform H(T) = α^{−1/2} ∫_{2αT}^{3αT} F(1/2+it) e^{i(d t log(t/(eα)) − π/4)} dt
//! by three routes: direct quadrature, the stationary-phase sum, and the
//! closed-form main term κ a_m T^{1+iA}.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::compensated::ComplexSum;
use crate::error::{invalid, Error, Result};
use crate::evaluate::{SmoothedEvaluator, POLE_EXCLUSION};
use crate::model::{Budget, DerivedInvariants, LSeriesInstance, SmoothingParams};
use crate::oscillatory::{integrate_with, QuadratureOptions, QuadratureResult};

/// Which constants to use where the derivation's printed formulas and the
/// numerically verified ones differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Constants as printed: the stationary-phase term without √(2π), the
    /// n-range (T^d, 4T^d), and κ built from the printed B with √C Q.
    PaperPrinted,
    /// Constants checked against quadrature and exact gamma ratios.
    OracleCalibrated,
}

impl Convention {
    pub fn name(&self) -> &'static str {
        match self {
            Self::PaperPrinted => "paper-printed",
            Self::OracleCalibrated => "oracle-calibrated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaValue {
    pub value: Complex64,
    pub convention: Convention,
}

fn check_t(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(invalid(format!("T must be a finite non-negative number, got {t}")));
    }
    Ok(())
}

/// Direct quadrature of H(T) with F(1/2+it) from smoothed sums at X = T^{d+ρ}.
pub fn h_direct(
    instance: &LSeriesInstance,
    alpha: f64,
    t: f64,
    params: &SmoothingParams,
    tol: f64,
    budget: &Budget,
) -> Result<QuadratureResult> {
    check_t(t)?;
    if !(alpha > 0.0) {
        return Err(invalid("alpha must be positive"));
    }
    let zero = QuadratureResult {
        value: Complex64::new(0.0, 0.0),
        panels: 0,
        est_error: 0.0,
    };
    if t == 0.0 {
        return Ok(zero);
    }
    let inv = instance.invariants()?;
    let d = inv.d;
    let (a, b) = (2.0 * alpha * t, 3.0 * alpha * t);
    for pole in instance.fe().poles() {
        let s0 = pole.location;
        if (s0.re - 0.5).abs() < POLE_EXCLUSION && s0.im > a - POLE_EXCLUSION && s0.im < b + POLE_EXCLUSION {
            return Err(Error::PoleProximity {
                point: Complex64::new(0.5, s0.im),
                pole: s0,
                distance: (s0.re - 0.5).abs(),
            });
        }
    }

    let cutoff = params.cutoff_for(t, d);
    let sp = params.with_cutoff(cutoff);
    sp.validate()?;

    // Cost model: X times the number of panels.
    let resonance = (inv.c * instance.fe().q().powi(2) * alpha.powf(d)).ln();
    let log_len_estimate = (6.0 * cutoff).ln();
    let frequency = move |u: f64, log_len: f64| -> f64 {
        let kernel = d * (u / alpha).ln();
        kernel
            .abs()
            .max((kernel - log_len).abs())
            .max(resonance.abs())
            .max((log_len - resonance).abs())
    };
    let opts = QuadratureOptions::with_tol(tol);
    let panel_estimate = ((b - a) * frequency(b, log_len_estimate) / (2.0 * PI * opts.period_fraction)).max(opts.min_panels as f64);
    budget.check_ops(cutoff * panel_estimate, "direct transform quadrature")?;

    let evaluator = SmoothedEvaluator::new(instance, 0.5, &sp, budget)?;
    let log_len = (evaluator.terms() as f64).ln();
    let scale = alpha.powf(-0.5);
    let integrand = |u: f64| {
        let f = evaluator
            .evaluate(u)
            .map(|e| e.value)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        let phase = d * u * ((u / alpha).ln() - 1.0) - FRAC_PI_4;
        f * Complex64::from_polar(scale, phase)
    };
    integrate_with(integrand, |u| frequency(u, log_len), a, b, &opts)
}

/// H(T) through stationary phase term by term:
/// Σ aₙ n^{−1/2} e^{−(n/X)^p} √(2π/d) n^{1/(2d)} e^{−idαn^{1/d}} over (2T)^d < n < (3T)^d.
pub fn h_sum_side(
    instance: &LSeriesInstance,
    alpha: f64,
    t: f64,
    params: &SmoothingParams,
    convention: Convention,
    budget: &Budget,
) -> Result<Complex64> {
    check_t(t)?;
    let d = instance.degree();
    let (lo, hi, prefactor) = match convention {
        Convention::OracleCalibrated => ((2.0 * t).powf(d), (3.0 * t).powf(d), (2.0 * PI / d).sqrt()),
        Convention::PaperPrinted => (t.powf(d), 4.0 * t.powf(d), d.powf(-0.5)),
    };
    let first = lo.floor() as u64 + 1;
    let last = if hi == hi.floor() { (hi as u64).saturating_sub(1) } else { hi.floor() as u64 };
    if last < first {
        return Ok(Complex64::new(0.0, 0.0));
    }
    budget.check_terms(last, "sum-side coefficient table")?;
    let table = instance.coefficients().bulk(last)?;
    let cutoff = params.cutoff_for(t, d);
    let mut acc = ComplexSum::new();
    for n in first..=last {
        let nf = n as f64;
        let weight = (-(nf / cutoff).powf(params.p)).exp();
        let modulus = prefactor * nf.powf(0.5 / d - 0.5) * weight;
        let phase = -d * alpha * nf.powf(1.0 / d);
        acc.add(table.get(n) * Complex64::from_polar(modulus, phase));
    }
    Ok(acc.value())
}

/// C Q² α^d, which equals m exactly at resonance.
pub fn resonance_base(inv: &DerivedInvariants, q: f64, alpha: f64) -> f64 {
    inv.c * q * q * alpha.powf(inv.d)
}

/// J_n(T) = ∫_{2αT}^{3αT} (C Q² α^d / n)^{−it} t^{iA} dt by quadrature.
pub fn j_n_quadrature(
    instance: &LSeriesInstance,
    alpha: f64,
    t: f64,
    n: u64,
    tol: f64,
) -> Result<QuadratureResult> {
    check_t(t)?;
    let inv = instance.invariants()?;
    let log_base = (resonance_base(&inv, instance.fe().q(), alpha) / n as f64).ln();
    let a_inv = inv.a;
    integrate_with(
        move |u| Complex64::from_polar(1.0, -u * log_base + a_inv * u.ln()),
        move |u| (-log_base + a_inv / u).abs(),
        2.0 * alpha * t,
        3.0 * alpha * t,
        &QuadratureOptions::with_tol(tol),
    )
}

/// J_m(T) at resonance: (αT)^{1+iA} (3^{1+iA} − 2^{1+iA}) / (1+iA).
pub fn j_n_closed_form(a_inv: f64, alpha: f64, t: f64) -> Complex64 {
    let e = Complex64::new(1.0, a_inv);
    if t == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(alpha * t, 0.0).powc(e) * window_factor(a_inv)
}

/// (3^{1+iA} − 2^{1+iA}) / (1+iA).
fn window_factor(a_inv: f64) -> Complex64 {
    let e = Complex64::new(1.0, a_inv);
    (Complex64::new(3.0, 0.0).powc(e) - Complex64::new(2.0, 0.0).powc(e)) / e
}

/// Coefficient κ of the main term H(T) ≈ κ a_m T^{1+iA} (printed) or
/// κ conj(a_m) T^{1+iA} (calibrated).
pub fn kappa(instance: &LSeriesInstance, alpha: f64, m: u64, convention: Convention) -> Result<KappaValue> {
    let inv = instance.invariants()?;
    let q = instance.fe().q();
    let base = resonance_base(&inv, q, alpha);
    if m == 0 || ((base - m as f64) / m as f64).abs() > 1e-9 {
        return Err(Error::ResonanceMismatch { m, actual: base });
    }
    let omega = instance.fe().omega();
    let i = Complex64::i();
    let alpha_power = Complex64::new(alpha, 0.0).powc(Complex64::new((1.0 - inv.d) / 2.0, inv.a));
    let value = match convention {
        Convention::PaperPrinted => {
            omega * (i * inv.b_printed).exp() * inv.c.sqrt() * q * alpha_power * window_factor(inv.a)
        }
        Convention::OracleCalibrated => {
            omega * (i * (inv.b - FRAC_PI_4)).exp() / (inv.c.sqrt() * q) * alpha_power * window_factor(inv.a)
        }
    };
    Ok(KappaValue { value, convention })
}

pub fn h_fe_side(instance: &LSeriesInstance, t: f64, kappa: &KappaValue, m: u64) -> Result<Complex64> {
    check_t(t)?;
    if t == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let a_inv = instance.invariants()?.a;
    let a_m = instance.coefficients().coefficient(m)?;
    let a_m = match kappa.convention {
        Convention::PaperPrinted => a_m,
        Convention::OracleCalibrated => a_m.conj(),
    };
    Ok(kappa.value * a_m * Complex64::new(t, 0.0).powc(Complex64::new(1.0, a_inv)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Direct,
    Sum,
    Fe,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Direct => "direct",
            Self::Sum => "sum",
            Self::Fe => "fe",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Self::Direct),
            "sum" => Ok(Self::Sum),
            "fe" => Ok(Self::Fe),
            other => Err(invalid(format!("unknown route '{other}' (direct, sum, fe)"))),
        }
    }
}

/// |x − y| / max(|x|, |y|), zero when both vanish.
pub fn relative_deviation(x: Complex64, y: Complex64) -> f64 {
    let scale = x.norm().max(y.norm());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).norm() / scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformReport {
    pub t: f64,
    pub direct: Option<Complex64>,
    pub sum_side: Option<Complex64>,
    pub fe_side: Option<Complex64>,
    pub deviations: Vec<(Route, Route, f64)>,
}

impl TransformReport {
    pub fn route(&self, route: Route) -> Option<Complex64> {
        match route {
            Route::Direct => self.direct,
            Route::Sum => self.sum_side,
            Route::Fe => self.fe_side,
        }
    }

    pub fn max_deviation(&self) -> f64 {
        self.deviations.iter().map(|d| d.2).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSettings {
    pub params: SmoothingParams,
    pub convention: Convention,
    pub tol: f64,
    pub budget: Budget,
}

impl Default for TransformSettings {
    fn default() -> Self {
        Self {
            params: SmoothingParams::new(1.0),
            convention: Convention::OracleCalibrated,
            tol: 1e-6,
            budget: Budget::default(),
        }
    }
}

pub fn transform_report(
    instance: &LSeriesInstance,
    alpha: f64,
    m: u64,
    t: f64,
    routes: &[Route],
    settings: &TransformSettings,
) -> Result<TransformReport> {
    let mut report = TransformReport {
        t,
        direct: None,
        sum_side: None,
        fe_side: None,
        deviations: Vec::new(),
    };
    if routes.contains(&Route::Direct) {
        let tol = settings.tol * alpha * t.max(1.0);
        report.direct = Some(h_direct(instance, alpha, t, &settings.params, tol, &settings.budget)?.value);
    }
    if routes.contains(&Route::Sum) {
        report.sum_side = Some(h_sum_side(instance, alpha, t, &settings.params, settings.convention, &settings.budget)?);
    }
    if routes.contains(&Route::Fe) {
        let k = kappa(instance, alpha, m, settings.convention)?;
        report.fe_side = Some(h_fe_side(instance, t, &k, m)?);
    }
    let order = [Route::Direct, Route::Sum, Route::Fe];
    for (i, &r1) in order.iter().enumerate() {
        for &r2 in &order[i + 1..] {
            if let (Some(x), Some(y)) = (report.route(r1), report.route(r2)) {
                report.deviations.push((r1, r2, relative_deviation(x, y)));
            }
        }
    }
    Ok(report)
}

/// One row of the printed-versus-calibrated comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    pub quantity: String,
    pub printed: String,
    pub calibrated: String,
    pub note: String,
}

fn fmt_c(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// Printed and calibrated forms of every constant the transform depends on.
pub fn constant_ledger(instance: &LSeriesInstance, m: u64) -> Result<Vec<LedgerEntry>> {
    let inv = instance.invariants()?;
    let q = instance.fe().q();
    let alpha = crate::model::resonance_alpha(m, &inv, q)?;
    let printed = kappa(instance, alpha, m, Convention::PaperPrinted)?;
    let calibrated = kappa(instance, alpha, m, Convention::OracleCalibrated)?;
    let entry = |quantity: &str, printed: String, calibrated: String, note: &str| LedgerEntry {
        quantity: quantity.into(),
        printed,
        calibrated,
        note: note.into(),
    };
    let ratio_at = |x: f64, t: f64| -> Result<(f64, f64)> {
        let g = instance.fe().gamma();
        let exact = crate::special::gamma_ratio_exact(g, x, t)?;
        let p = crate::special::gamma_ratio_asymptotic_printed(g, x, t)?;
        let c = crate::special::gamma_ratio_asymptotic(g, x, t)?;
        Ok(((exact - p).norm() / p.norm(), (exact - c).norm() / c.norm()))
    };
    let t_probe = crate::special::sector_threshold(instance.fe().gamma()).max(100.0) * 8.0;
    let (err_p, err_c) = ratio_at(0.6, t_probe)?;
    Ok(vec![
        entry("B", fmt_c(inv.b_printed), inv.b.to_string(), "phase constant of the asymptotic gamma ratio"),
        entry(
            "gamma ratio modulus",
            "(C e^-d t^d)^(1/2-x)".into(),
            "(C t^d)^(1/2-x)".into(),
            "",
        ),
        entry(
            &format!("gamma ratio rel. error at x=0.6, t={t_probe}"),
            err_p.to_string(),
            err_c.to_string(),
            "calibrated error decays like 1/t",
        ),
        entry(
            "stationary-phase prefactor",
            "sqrt(alpha/d)".into(),
            "sqrt(2 pi alpha/d)".into(),
            "sqrt(2 pi / f''(c)) with f''(c) = d/c",
        ),
        entry(
            "stationary-phase sign",
            "exp(+i d alpha n^(1/d))".into(),
            "exp(-i d alpha n^(1/d))".into(),
            "f(c) = -d c",
        ),
        entry("stationary n-range", "(T^d, 4T^d)".into(), "((2T)^d, (3T)^d)".into(), "c = alpha n^(1/d) inside [2 alpha T, 3 alpha T]"),
        entry(
            "J_n base",
            "C pi Q^2 alpha".into(),
            "C Q^2 alpha^d / n".into(),
            "equals 1 at n = m",
        ),
        entry("alpha", alpha.to_string(), alpha.to_string(), "resonance (m / (C Q^2))^(1/d)"),
        entry("kappa", fmt_c(printed.value), fmt_c(calibrated.value), "calibrated multiplies conj(a_m)"),
        entry(
            "|kappa sqrt(d) a_m|",
            (printed.value.norm() * inv.d.sqrt() * instance.coefficients().coefficient(m)?.norm()).to_string(),
            (calibrated.value.norm() * inv.d.sqrt() * instance.coefficients().coefficient(m)?.norm()).to_string(),
            "Omega-certificate constant",
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::resonance_alpha;
    use crate::presets::preset;

    #[test]
    fn zeta_kappa_values() {
        let l = preset("zeta").unwrap();
        let alpha = 2.0 * PI;
        let k = kappa(&l, alpha, 1, Convention::OracleCalibrated).unwrap();
        assert!((k.value - Complex64::new((2.0 * PI).sqrt(), 0.0)).norm() < 1e-13);
        let p = kappa(&l, alpha, 1, Convention::PaperPrinted).unwrap();
        assert!((p.value.norm() - 0.398_942_280_401_432_7).abs() < 1e-12);
    }

    #[test]
    fn kappa_requires_resonance() {
        let l = preset("zeta").unwrap();
        assert!(matches!(
            kappa(&l, 2.0, 1, Convention::OracleCalibrated),
            Err(Error::ResonanceMismatch { .. })
        ));
    }

    #[test]
    fn j_closed_form_matches_quadrature() {
        let l = preset("zeta").unwrap();
        let alpha = resonance_alpha(1, &l.invariants().unwrap(), l.fe().q()).unwrap();
        let q = j_n_quadrature(&l, alpha, 10.0, 1, 1e-12).unwrap();
        let c = j_n_closed_form(0.0, alpha, 10.0);
        assert!((q.value - c).norm() < 1e-9 * c.norm());
    }

    #[test]
    fn zero_t_is_zero() {
        let l = preset("zeta").unwrap();
        let k = kappa(&l, 2.0 * PI, 1, Convention::OracleCalibrated).unwrap();
        assert_eq!(h_fe_side(&l, 0.0, &k, 1).unwrap(), Complex64::new(0.0, 0.0));
        let sp = SmoothingParams::new(1.0);
        assert_eq!(
            h_sum_side(&l, 2.0 * PI, 0.0, &sp, Convention::OracleCalibrated, &Budget::default()).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn chi4_sum_side_is_counting() {
        // χ₄(n) e^{−iπn/2} = −i for odd n, so the sum counts odd n in (2T, 3T).
        let l = preset("dirichlet-chi4").unwrap();
        let alpha = PI / 2.0;
        let t = 1000.0;
        let sp = SmoothingParams::new(1.0).with_rho(3.0);
        let v = h_sum_side(&l, alpha, t, &sp, Convention::OracleCalibrated, &Budget::default()).unwrap();
        let direct: Complex64 = (2001..3000u64)
            .filter(|n| n % 2 == 1)
            .map(|_| Complex64::new(0.0, -(2.0 * PI).sqrt()))
            .sum();
        assert!((v - direct).norm() < 1e-9 * direct.norm(), "{v} vs {direct}");
    }
}
