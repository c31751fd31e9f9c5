//! Partial sums, additive twists and the Ω-certificate built on them.

use num_complex::Complex64;

use crate::compensated::{ComplexSum, NeumaierSum};
use crate::error::{invalid, Error, Result};
use crate::model::{Budget, LSeriesInstance, SmoothingParams};
use crate::transform::KappaValue;

/// Σ_{n<X} |aₙ|.
pub fn abs_partial_sum(instance: &LSeriesInstance, x: f64, budget: &Budget) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(invalid(format!("X must be finite and non-negative, got {x}")));
    }
    let last = (x.ceil() as u64).saturating_sub(1);
    budget.check_terms(last, "partial sum coefficient table")?;
    let table = instance.coefficients().bulk(last)?;
    let mut acc = NeumaierSum::new();
    for a in table.values() {
        acc.add(a.norm());
    }
    Ok(acc.value())
}

fn twist_range(t: f64) -> (u64, u64) {
    let first = t.floor() as u64 + 1;
    let upper = 4.0 * t;
    let last = if upper == upper.floor() { (upper as u64).saturating_sub(1) } else { upper.floor() as u64 };
    (first, last)
}

/// Σ_{T<n<4T} aₙ e^{−(n/T^{d+ρ})^p} e^{−i d α n^{1/d}}.
pub fn additive_twist(
    instance: &LSeriesInstance,
    alpha: f64,
    t: f64,
    params: &SmoothingParams,
    budget: &Budget,
) -> Result<Complex64> {
    Ok(twist_parts(instance, alpha, t, params, budget)?.twist)
}

struct TwistParts {
    twist: Complex64,
    weighted_abs: f64,
    abs: f64,
}

fn twist_parts(
    instance: &LSeriesInstance,
    alpha: f64,
    t: f64,
    params: &SmoothingParams,
    budget: &Budget,
) -> Result<TwistParts> {
    if !(t.is_finite() && t > 0.0) {
        return Err(invalid(format!("T must be positive, got {t}")));
    }
    let d = instance.degree();
    let (first, last) = twist_range(t);
    let empty = TwistParts {
        twist: Complex64::new(0.0, 0.0),
        weighted_abs: 0.0,
        abs: 0.0,
    };
    if last < first {
        return Ok(empty);
    }
    budget.check_terms(last, "twist coefficient table")?;
    let table = instance.coefficients().bulk(last)?;
    let cutoff = params.cutoff_for(t, d);
    let mut twist = ComplexSum::new();
    let mut weighted_abs = NeumaierSum::new();
    let mut abs = NeumaierSum::new();
    for n in first..=last {
        let nf = n as f64;
        let a = table.get(n);
        let weight = (-(nf / cutoff).powf(params.p)).exp();
        twist.add(a * Complex64::from_polar(weight, -d * alpha * nf.powf(1.0 / d)));
        weighted_abs.add(a.norm() * weight);
        abs.add(a.norm());
    }
    Ok(TwistParts {
        twist: twist.value(),
        weighted_abs: weighted_abs.value(),
        abs: abs.value(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
}

/// Least-squares slope of log y against log x over a geometric grid.
pub fn growth_exponent(grid: &[f64], values: &[f64]) -> Result<LinearFit> {
    if grid.len() != values.len() {
        return Err(invalid("grid and values differ in length"));
    }
    if grid.len() < 4 {
        return Err(Error::DegenerateGrid(format!("need at least 4 points, got {}", grid.len())));
    }
    let ratio = grid[1] / grid[0];
    if !(ratio > 1.0) || grid.windows(2).any(|w| ((w[1] / w[0]) / ratio - 1.0).abs() > 1e-6) {
        return Err(Error::DegenerateGrid("grid must be geometric and increasing".into()));
    }
    if values.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::DegenerateGrid("values must be positive".into()));
    }
    let xs: Vec<f64> = grid.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    Ok(least_squares(&xs, &ys))
}

fn least_squares(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    LinearFit {
        slope,
        intercept,
        slope_stderr: (rss / (n - 2.0) / sxx).sqrt(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub grid: Vec<f64>,
    pub sums: Vec<f64>,
    pub fit: LinearFit,
}

pub fn growth_scan(instance: &LSeriesInstance, grid: &[f64], budget: &Budget) -> Result<GrowthReport> {
    let sums = grid
        .iter()
        .map(|&x| abs_partial_sum(instance, x, budget))
        .collect::<Result<Vec<_>>>()?;
    let fit = growth_exponent(grid, &sums)?;
    Ok(GrowthReport {
        grid: grid.to_vec(),
        sums,
        fit,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistReport {
    pub grid: Vec<f64>,
    pub twists: Vec<Complex64>,
    /// |twist| / T^{1/2 + 1/(2d)}.
    pub normalized: Vec<f64>,
    /// Fit of log |twist| against log T, when the grid allows one.
    pub fit: Option<LinearFit>,
}

pub fn twist_scan(
    instance: &LSeriesInstance,
    alpha: f64,
    grid: &[f64],
    params: &SmoothingParams,
    budget: &Budget,
) -> Result<TwistReport> {
    let d = instance.degree();
    let twists = grid
        .iter()
        .map(|&t| additive_twist(instance, alpha, t, params, budget))
        .collect::<Result<Vec<_>>>()?;
    let normalized = grid
        .iter()
        .zip(&twists)
        .map(|(t, w)| w.norm() / t.powf(0.5 + 0.5 / d))
        .collect();
    let magnitudes: Vec<f64> = twists.iter().map(|w| w.norm()).collect();
    let fit = growth_exponent(grid, &magnitudes).ok();
    Ok(TwistReport {
        grid: grid.to_vec(),
        twists,
        normalized,
        fit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateRow {
    pub t: f64,
    pub twist: Complex64,
    /// |twist|.
    pub lhs: f64,
    /// ½ |κ √d a_m| T^{1/2 + 1/(2d)}.
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    /// Σ_{T<n<4T} |aₙ| without the smoothing weight.
    pub abs_sum: f64,
    /// |twist| ≤ Σ |aₙ| e^{−(n/X)^p} ≤ Σ |aₙ|.
    pub triangle_ok: bool,
}

/// Checks |twist(T)| ≥ ½ |κ √d a_m| T^{1/2+1/(2d)} on each T of the grid.
pub fn omega_certificate(
    instance: &LSeriesInstance,
    alpha: f64,
    m: u64,
    kappa: &KappaValue,
    grid: &[f64],
    params: &SmoothingParams,
    budget: &Budget,
) -> Result<Vec<CertificateRow>> {
    let d = instance.degree();
    let a_m = instance.coefficients().coefficient(m)?;
    let constant = 0.5 * kappa.value.norm() * d.sqrt() * a_m.norm();
    grid.iter()
        .map(|&t| {
            let parts = twist_parts(instance, alpha, t, params, budget)?;
            let lhs = parts.twist.norm();
            let rhs = constant * t.powf(0.5 + 0.5 / d);
            let slack = 1e-12 * parts.abs.max(1.0);
            Ok(CertificateRow {
                t,
                twist: parts.twist,
                lhs,
                rhs,
                margin: if rhs > 0.0 { lhs / rhs } else { f64::INFINITY },
                pass: lhs >= rhs,
                abs_sum: parts.abs,
                triangle_ok: lhs <= parts.weighted_abs + slack && parts.weighted_abs <= parts.abs + slack,
            })
        })
        .collect()
}
