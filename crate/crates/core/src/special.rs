//! Complex log-gamma and the functional-equation gamma ratio.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::GammaFactorSpec;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// B₂ₖ / (2k(2k−1)) for k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Below this modulus the argument is shifted up before the Stirling series.
const STIRLING_RADIUS: f64 = 15.0;

/// Principal branch of log Γ(z), continuous off the non-positive real axis.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidParameter(format!("log_gamma of non-finite {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::GammaPole(z));
    }
    if z.re >= 0.5 {
        return Ok(log_gamma_right(z));
    }
    // Reflection, then move to the principal branch.
    let reflected = Complex64::new(PI.ln(), 0.0) - log_sin_pi(z) - log_gamma_right(Complex64::new(1.0, 0.0) - z);
    let target = principal_imag(z);
    let k = ((target - reflected.im) / (2.0 * PI)).round();
    Ok(Complex64::new(reflected.re, reflected.im + 2.0 * PI * k))
}

fn log_gamma_right(z: Complex64) -> Complex64 {
    let (shifted, correction) = shift_up(z);
    stirling(shifted) - correction
}

fn shift_up(z: Complex64) -> (Complex64, Complex64) {
    if z.norm() >= STIRLING_RADIUS {
        return (z, Complex64::new(0.0, 0.0));
    }
    let n = (STIRLING_RADIUS - z.re).ceil().max(0.0) as usize;
    let mut correction = Complex64::new(0.0, 0.0);
    for k in 0..n {
        correction += (z + k as f64).ln();
    }
    (z + n as f64, correction)
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for c in STIRLING {
        series += power * c;
        power *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series
}

/// Imaginary part of the principal log Γ(z) via the upward recurrence.
fn principal_imag(z: Complex64) -> f64 {
    let n = (0.5 - z.re).ceil().max(0.0) as usize;
    let mut im = log_gamma_right(z + n as f64).im;
    for k in 0..n {
        let w = z + k as f64;
        im -= w.im.atan2(w.re);
    }
    im
}

/// log sin(πz) modulo 2πi, stable for large |Im z|.
fn log_sin_pi(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return log_sin_pi(z.conj()).conj();
    }
    let i = Complex64::i();
    // sin(πz) = e^{−iπz} (e^{2iπz} − 1) / (2i), |e^{2iπz}| ≤ 1.
    let e = (2.0 * i * PI * z).exp();
    -i * PI * z + ((e - 1.0) / (2.0 * i)).ln()
}

/// log G(s) = Σ log Γ(λⱼ s + μⱼ) − Σ log Γ(λ′ⱼ s + μ′ⱼ).
pub fn log_gamma_factor(spec: &GammaFactorSpec, s: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for f in spec.numerator() {
        acc += log_gamma(s * f.lambda + f.mu)?;
    }
    for f in spec.denominator() {
        acc -= log_gamma(s * f.lambda + f.mu)?;
    }
    Ok(acc)
}

/// log of G̃(1 − w) / G(w), where G̃ carries the conjugated shifts μ̄.
///
/// Returns `Ok(None)` when the ratio vanishes because a gamma function in its
/// denominator has a pole, and an error when one in its numerator does.
pub fn log_fe_gamma_ratio(spec: &GammaFactorSpec, w: Complex64) -> Result<Option<Complex64>> {
    let one = Complex64::new(1.0, 0.0);
    let mut up: Vec<Complex64> = Vec::new();
    let mut down: Vec<Complex64> = Vec::new();
    for f in spec.numerator() {
        up.push((one - w) * f.lambda + f.mu.conj());
        down.push(w * f.lambda + f.mu);
    }
    for f in spec.denominator() {
        up.push(w * f.lambda + f.mu);
        down.push((one - w) * f.lambda + f.mu.conj());
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for z in up {
        acc += log_gamma(z)?;
    }
    for z in down {
        match log_gamma(z) {
            Ok(v) => acc -= v,
            Err(Error::GammaPole(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(acc))
}

/// G̃(1 − x − it) / G(x + it).
pub fn gamma_ratio_exact(spec: &GammaFactorSpec, x: f64, t: f64) -> Result<Complex64> {
    Ok(log_fe_gamma_ratio(spec, Complex64::new(x, t))?
        .map(Complex64::exp)
        .unwrap_or_default())
}

/// Lower edge of the sector where the asymptotic ratio is meaningful.
pub fn sector_threshold(spec: &GammaFactorSpec) -> f64 {
    spec.numerator()
        .iter()
        .chain(spec.denominator())
        .map(|f| 2.0 * (f.mu.norm() + 1.0) / f.lambda)
        .fold(0.0, f64::max)
}

fn check_sector(spec: &GammaFactorSpec, t: f64) -> Result<()> {
    let threshold = sector_threshold(spec);
    if !(t >= threshold) {
        return Err(Error::BelowSectorThreshold { t, threshold });
    }
    Ok(())
}

/// (C t^d)^{1/2−x} · exp(i(−t d log(t/e) + A log t + B − t log C)).
pub fn gamma_ratio_asymptotic(spec: &GammaFactorSpec, x: f64, t: f64) -> Result<Complex64> {
    check_sector(spec, t)?;
    let inv = spec.stirling_constants()?;
    let modulus = (inv.c * t.powf(inv.d)).powf(0.5 - x);
    let phase = -t * inv.d * (t.ln() - 1.0) + inv.a * t.ln() + inv.b - t * inv.c.ln();
    Ok(Complex64::from_polar(modulus, phase))
}

/// The asymptotic ratio with the derivation's original constants: an extra
/// e^{−d(1/2−x)} in the modulus and the printed phase constant. Its relative
/// error does not decay; it is kept to quantify the discrepancy.
pub fn gamma_ratio_asymptotic_printed(spec: &GammaFactorSpec, x: f64, t: f64) -> Result<Complex64> {
    check_sector(spec, t)?;
    let inv = spec.stirling_constants()?;
    let modulus = (inv.c * (-inv.d).exp() * t.powf(inv.d)).powf(0.5 - x);
    let phase = -t * inv.d * (t.ln() - 1.0) + inv.a * t.ln() - t * inv.c.ln();
    Ok(Complex64::from_polar(modulus, phase) * (Complex64::i() * inv.b_printed).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRatio {
    pub exact: Complex64,
    pub asymptotic: Complex64,
    pub relative_error: f64,
}

pub fn gamma_ratio(spec: &GammaFactorSpec, x: f64, t: f64) -> Result<GammaRatio> {
    let asymptotic = gamma_ratio_asymptotic(spec, x, t)?;
    let exact = gamma_ratio_exact(spec, x, t)?;
    Ok(GammaRatio {
        exact,
        asymptotic,
        relative_error: (exact - asymptotic).norm() / asymptotic.norm(),
    })
}

/// Taylor coefficients c₀..c_{count−1} of `f` at `center`, by the trapezoid
/// rule on a circle of the given radius (f must be analytic on the closed disc).
pub fn taylor_coefficients<F>(f: F, center: Complex64, radius: f64, count: usize) -> Vec<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    const NODES: usize = 64;
    let samples: Vec<Complex64> = (0..NODES)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / NODES as f64;
            f(center + Complex64::from_polar(radius, theta))
        })
        .collect();
    (0..count)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, v) in samples.iter().enumerate() {
                let theta = 2.0 * PI * (j * k) as f64 / NODES as f64;
                acc += v * Complex64::from_polar(1.0, -theta);
            }
            acc / (NODES as f64 * radius.powi(k as i32))
        })
        .collect()
}
