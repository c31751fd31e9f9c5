//! Quadrature for oscillatory integrands, and the stationary-phase family
//! I_n(T) = ∫_{2αT}^{3αT} exp(i(d t log(t/(e α xₙ)) − π/4)) dt, xₙ = n^{1/d}.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::compensated::ComplexSum;
use crate::error::{invalid, Error, Result};
use crate::transform::Convention;

/// Kronrod abscissae, descending; the odd positions are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Absolute tolerance for the whole interval.
    pub tol: f64,
    /// Initial panels span at most this fraction of the local period.
    pub period_fraction: f64,
    pub min_panels: usize,
    pub max_panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            period_fraction: 0.25,
            min_panels: 8,
            max_panels: 1 << 22,
        }
    }
}

impl QuadratureOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub panels: usize,
    /// Sum over accepted panels of |Kronrod − Gauss|.
    pub est_error: f64,
}

struct PanelOutcome {
    value: Complex64,
    error: f64,
    panels: usize,
    converged: bool,
}

fn gauss_kronrod<G: Fn(f64) -> Complex64>(f: &G, a: f64, b: f64) -> (Complex64, Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut magnitude = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        magnitude += pair.norm() * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kronrod * half, gauss * half, magnitude * half.abs())
}

fn integrate_panel<G: Fn(f64) -> Complex64>(f: &G, a: f64, b: f64, tol: f64, depth: u32) -> PanelOutcome {
    let (k, g, magnitude) = gauss_kronrod(f, a, b);
    let error = (k - g).norm();
    let noise = 50.0 * f64::EPSILON * magnitude;
    if error <= tol.max(noise) || !k.is_finite() {
        return PanelOutcome {
            value: k,
            error,
            panels: 1,
            converged: k.is_finite(),
        };
    }
    if depth >= MAX_DEPTH {
        return PanelOutcome {
            value: k,
            error,
            panels: 1,
            converged: false,
        };
    }
    let mid = 0.5 * (a + b);
    let left = integrate_panel(f, a, mid, tol / 2.0, depth + 1);
    let right = integrate_panel(f, mid, b, tol / 2.0, depth + 1);
    PanelOutcome {
        value: left.value + right.value,
        error: left.error + right.error,
        panels: left.panels + right.panels,
        converged: left.converged && right.converged,
    }
}

/// Partition [a, b] into panels no wider than `period_fraction` of the local
/// period 2π/|f′|, where `frequency` bounds |f′| and is monotone on each panel.
fn build_panels<W: Fn(f64) -> f64>(frequency: &W, a: f64, b: f64, opts: &QuadratureOptions) -> Result<Vec<(f64, f64)>> {
    let widest = (b - a) / opts.min_panels.max(1) as f64;
    let mut panels = Vec::new();
    let mut left = a;
    while left < b {
        let mut h = widest.min(b - left);
        loop {
            let w = frequency(left).abs().max(frequency((left + h).min(b)).abs());
            let limit = if w > 0.0 { opts.period_fraction * 2.0 * PI / w } else { h };
            if limit >= h {
                break;
            }
            h = limit;
        }
        let right = if b - (left + h) < 1e-9 * h { b } else { left + h };
        panels.push((left, right));
        left = right;
        if panels.len() > opts.max_panels {
            return Err(Error::NonConvergence {
                partial: QuadratureResult {
                    value: Complex64::new(f64::NAN, f64::NAN),
                    panels: panels.len(),
                    est_error: f64::INFINITY,
                },
            });
        }
    }
    Ok(panels)
}

/// ∫_a^b integrand(t) dt with panels sized from the frequency bound.
/// Panels are integrated in parallel and summed in order, so the result does
/// not depend on the thread count.
pub fn integrate_with<G, W>(integrand: G, frequency: W, a: f64, b: f64, opts: &QuadratureOptions) -> Result<QuadratureResult>
where
    G: Fn(f64) -> Complex64 + Sync,
    W: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(invalid("integration limits must be finite"));
    }
    if !(opts.tol > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: Complex64::new(0.0, 0.0),
            panels: 0,
            est_error: 0.0,
        });
    }
    if b < a {
        let r = integrate_with(integrand, frequency, b, a, opts)?;
        return Ok(QuadratureResult { value: -r.value, ..r });
    }
    let panels = build_panels(&frequency, a, b, opts)?;
    let length = b - a;
    let outcomes: Vec<PanelOutcome> = panels
        .par_iter()
        .map(|&(l, r)| integrate_panel(&integrand, l, r, opts.tol * (r - l) / length, 0))
        .collect();
    let mut value = ComplexSum::new();
    let mut est_error = 0.0;
    let mut count = 0;
    let mut converged = true;
    for o in &outcomes {
        value.add(o.value);
        est_error += o.error;
        count += o.panels;
        converged &= o.converged;
    }
    let result = QuadratureResult {
        value: value.value(),
        panels: count,
        est_error,
    };
    if !converged || count > opts.max_panels {
        return Err(Error::NonConvergence { partial: result });
    }
    Ok(result)
}

/// ∫_a^b e^{i f(t)} dt for a phase with monotone derivative.
pub fn integrate_oscillatory<F>(phase: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    let (lo, hi) = (a.min(b), a.max(b));
    let derivative = |t: f64| {
        let h = 1e-6 * t.abs().max(1.0);
        let (l, r) = ((t - h).max(lo), (t + h).min(hi));
        if r > l {
            (phase(r) - phase(l)) / (r - l)
        } else {
            0.0
        }
    };
    integrate_with(
        |t| Complex64::from_polar(1.0, phase(t)),
        derivative,
        a,
        b,
        &QuadratureOptions::with_tol(tol),
    )
}

/// Phase f(t) = d t log(t/(e α xₙ)) with xₙ = n^{1/d}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFamily {
    pub alpha: f64,
    pub n: f64,
    pub d: f64,
}

impl PhaseFamily {
    pub fn new(alpha: f64, n: f64, d: f64) -> Result<Self> {
        if !(alpha > 0.0 && n > 0.0 && d > 0.0) {
            return Err(invalid("phase family needs alpha, n, d > 0"));
        }
        Ok(Self { alpha, n, d })
    }

    pub fn x_n(&self) -> f64 {
        self.n.powf(1.0 / self.d)
    }

    pub fn phase(&self, t: f64) -> f64 {
        self.d * t * ((t / (self.alpha * self.x_n())).ln() - 1.0)
    }

    pub fn d1(&self, t: f64) -> f64 {
        self.d * (t / (self.alpha * self.x_n())).ln()
    }

    pub fn d2(&self, t: f64) -> f64 {
        self.d / t
    }

    pub fn d3(&self, t: f64) -> f64 {
        -self.d / (t * t)
    }

    /// c = α xₙ, where f′ vanishes.
    pub fn stationary_point(&self) -> f64 {
        self.alpha * self.x_n()
    }

    /// K_T = [2αT, 3αT].
    pub fn interval(&self, t: f64) -> (f64, f64) {
        (2.0 * self.alpha * t, 3.0 * self.alpha * t)
    }

    pub fn is_stationary(&self, t: f64) -> bool {
        let (a, b) = self.interval(t);
        let c = self.stationary_point();
        a < c && c < b
    }
}

/// The n-range ((2T)^d, (3T)^d) whose stationary points fall inside K_T.
pub fn stationary_range(t: f64, d: f64) -> (f64, f64) {
    ((2.0 * t).powf(d), (3.0 * t).powf(d))
}

pub fn stationary_point(family: &PhaseFamily) -> f64 {
    family.stationary_point()
}

pub fn i_n_quadrature(family: &PhaseFamily, t: f64, tol: f64) -> Result<QuadratureResult> {
    if !(t > 0.0) {
        return Err(invalid("T must be positive"));
    }
    let (a, b) = family.interval(t);
    let f = *family;
    integrate_with(
        move |u| Complex64::from_polar(1.0, f.phase(u) - FRAC_PI_4),
        move |u| f.d1(u),
        a,
        b,
        &QuadratureOptions::with_tol(tol),
    )
}

/// Main term of I_n(T) when the stationary point lies inside K_T:
/// √(2π/f″(c)) e^{i f(c)} = √(2πα/d) n^{1/(2d)} e^{−i d α n^{1/d}}.
/// The printed convention omits the √(2π).
pub fn i_n_stationary_phase(family: &PhaseFamily, t: f64, convention: Convention) -> Result<Complex64> {
    if !family.is_stationary(t) {
        let (lo, hi) = stationary_range(t, family.d);
        return Err(Error::OutOfRange(format!(
            "n = {} has no stationary point in K_T; need {lo} < n < {hi}",
            family.n
        )));
    }
    let prefactor = match convention {
        Convention::OracleCalibrated => (2.0 * PI * family.alpha / family.d).sqrt(),
        Convention::PaperPrinted => (family.alpha / family.d).sqrt(),
    };
    let modulus = prefactor * family.n.powf(0.5 / family.d);
    Ok(Complex64::from_polar(modulus, -family.d * family.stationary_point()))
}

/// First-derivative test bound 1 / min_{K_T} |f′| when f′ keeps one sign on K_T.
pub fn first_derivative_bound(family: &PhaseFamily, t: f64) -> Result<f64> {
    let (a, b) = family.interval(t);
    let c = family.stationary_point();
    if a <= c && c <= b {
        return Err(Error::OutOfRange(format!(
            "stationary point {c} lies in K_T = [{a}, {b}]"
        )));
    }
    let m1 = family.d1(a).abs().min(family.d1(b).abs());
    Ok(1.0 / m1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let k: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        let g: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rules_integrate_polynomials_exactly() {
        for deg in 0..=22 {
            let f = |t: f64| Complex64::new(t.powi(deg), 0.0);
            let (k, g, _) = gauss_kronrod(&f, 0.0, 1.0);
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((k.re - exact).abs() < 1e-15, "kronrod degree {deg}");
            if deg <= 13 {
                assert!((g.re - exact).abs() < 1e-15, "gauss degree {deg}");
            }
        }
    }

    #[test]
    fn zero_phase_is_length() {
        let r = integrate_oscillatory(|_| 0.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn linear_phase() {
        let r = integrate_oscillatory(|t| t, 0.0, 2.0 * PI, 1e-10).unwrap();
        assert!(r.value.norm() < 1e-10);
        let r = integrate_oscillatory(|t| 50.0 * t, 0.0, 1.0, 1e-12).unwrap();
        let exact = (Complex64::new(0.0, 50.0).exp() - 1.0) / Complex64::new(0.0, 50.0);
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn reversed_limits_negate() {
        let a = integrate_oscillatory(|t| t * t, 0.0, 3.0, 1e-10).unwrap();
        let b = integrate_oscillatory(|t| t * t, 3.0, 0.0, 1e-10).unwrap();
        assert!((a.value + b.value).norm() < 1e-14);
    }

    #[test]
    fn stationary_membership() {
        let f = PhaseFamily::new(1.0, 250.0, 1.0).unwrap();
        assert!(f.is_stationary(100.0));
        let f = PhaseFamily::new(1.0, 150.0, 1.0).unwrap();
        assert!(!f.is_stationary(100.0));
        assert!(first_derivative_bound(&f, 100.0).is_ok());
    }

    #[test]
    fn printed_stationary_value() {
        let f = PhaseFamily::new(1.0, 4.0, 1.0).unwrap();
        let v = i_n_stationary_phase(&f, 1.5, Convention::PaperPrinted).unwrap();
        assert!((v - 2.0 * Complex64::new(0.0, -4.0).exp()).norm() < 1e-15);
        let w = i_n_stationary_phase(&f, 1.5, Convention::OracleCalibrated).unwrap();
        assert!((w - v * (2.0 * PI).sqrt()).norm() < 1e-14);
    }
}
