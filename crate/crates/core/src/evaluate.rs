//! Smoothed Dirichlet sums S(s) = Σ aₙ e^{−(n/X)^p} n^{−s} and the values of F
//! recovered from them.
//!
//! Shifting the Mellin contour of S(s) = (1/2πi) ∫ F(s+w) X^w Γ(w/p)/p dw to the
//! left picks up F(s) at w = 0, the residues at the poles of F, and
//! (−1)^k/k! · F(s − pk) X^{−pk} at w = −pk. The evaluator subtracts the pole
//! residues and the first few gamma-pole terms, computing F(s − pk) through the
//! functional equation from dual sums Σ conj(aₙ) e^{−(n/X)^p} n^{−(1−s+pk)}.

use num_complex::Complex64;

use crate::coefficients::CoefficientTable;
use crate::compensated::ComplexSum;
use crate::error::{Error, Result};
use crate::model::{Budget, LSeriesInstance, Pole, SmoothingParams};
use crate::special::{log_fe_gamma_ratio, log_gamma, log_gamma_factor, taylor_coefficients};

/// Closest an evaluation point may come to a pole of F.
pub const POLE_EXCLUSION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothedEvaluation {
    /// Estimate of F(s).
    pub value: Complex64,
    /// The truncated smoothed sum itself.
    pub raw: Complex64,
    pub terms_used: usize,
    /// Bound on the discarded tail Σ_{n>N} |aₙ| e^{−(n/X)^p} n^{−x}.
    pub tail_bound: f64,
    /// False when a remainder term could not be computed (collision of poles)
    /// or the remainder series stopped decreasing.
    pub corrected: bool,
}

/// Precomputed smoothed sums on a vertical line Re s = x.
#[derive(Debug, Clone)]
pub struct SmoothedEvaluator {
    instance: LSeriesInstance,
    params: SmoothingParams,
    x: f64,
    log_n: Vec<f64>,
    main: Vec<Complex64>,
    dual: Vec<Vec<Complex64>>,
    tail_bound: f64,
}

impl SmoothedEvaluator {
    pub fn new(instance: &LSeriesInstance, x: f64, params: &SmoothingParams, budget: &Budget) -> Result<Self> {
        params.validate()?;
        if !x.is_finite() {
            return Err(Error::InvalidParameter("Re s must be finite".into()));
        }
        let (table, tail_bound) = truncate(instance, x, params, budget)?;
        let n_terms = table.len();
        let cutoff = params.cutoff;
        let mut log_n = Vec::with_capacity(n_terms);
        let mut main = Vec::with_capacity(n_terms);
        let mut dual = vec![Vec::with_capacity(n_terms); params.remainder_terms];
        for (i, &a) in table.values().iter().enumerate() {
            let n = (i + 1) as f64;
            let ln = n.ln();
            let weight = -(n / cutoff).powf(params.p);
            log_n.push(ln);
            main.push(a * (weight - x * ln).exp());
            for (k, column) in dual.iter_mut().enumerate() {
                let exponent = 1.0 - x + params.p * (k + 1) as f64;
                column.push(a.conj() * (weight - exponent * ln).exp());
            }
        }
        Ok(Self {
            instance: instance.clone(),
            params: *params,
            x,
            log_n,
            main,
            dual,
            tail_bound,
        })
    }

    pub fn terms(&self) -> usize {
        self.log_n.len()
    }

    pub fn params(&self) -> &SmoothingParams {
        &self.params
    }

    /// Estimate of F(x + iy).
    pub fn evaluate(&self, y: f64) -> Result<SmoothedEvaluation> {
        let s = Complex64::new(self.x, y);
        for pole in self.instance.fe().poles() {
            let distance = (s - pole.location).norm();
            if distance < POLE_EXCLUSION {
                return Err(Error::PoleProximity {
                    point: s,
                    pole: pole.location,
                    distance,
                });
            }
        }

        let mut main = ComplexSum::new();
        let mut duals = vec![ComplexSum::new(); self.dual.len()];
        for (i, &ln) in self.log_n.iter().enumerate() {
            let (sin, cos) = (y * ln).sin_cos();
            main.add(self.main[i] * Complex64::new(cos, -sin));
            for (acc, column) in duals.iter_mut().zip(&self.dual) {
                acc.add(column[i] * Complex64::new(cos, sin));
            }
        }
        let raw = main.value();

        let p = self.params.p;
        let log_cutoff = self.params.cutoff.ln();
        let mut corrected = true;
        let mut remainder = Complex64::new(0.0, 0.0);
        let mut previous = f64::INFINITY;
        let mut used = 0usize;
        let mut factorial = 1.0;
        for (k, dual) in duals.iter().enumerate() {
            let k = k + 1;
            factorial *= k as f64;
            let w = s - p * k as f64;
            let Some(fw) = self.value_via_fe(w, dual.value(), -p * k as f64 * log_cutoff) else {
                corrected = false;
                break;
            };
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let term = fw * (sign / factorial);
            // A growing term means X is too short for the remainder series to
            // help. It is still added: truncating at a t-dependent point would
            // make the estimate discontinuous in t.
            if term.norm() > previous {
                corrected = false;
            }
            previous = term.norm();
            remainder += term;
            used = k;
        }

        let horizon = -p * (used as f64 + 0.5);
        for pole in self.instance.fe().poles() {
            if (pole.location - s).re <= horizon {
                continue;
            }
            match pole_residue(pole, s, &self.params) {
                Some(r) => remainder += r,
                None => corrected = false,
            }
        }

        Ok(SmoothedEvaluation {
            value: raw - remainder,
            raw,
            terms_used: self.terms(),
            tail_bound: self.tail_bound,
            corrected,
        })
    }

    /// ω Q^{1−2w} G̃(1−w)/G(w) · F̃(1−w) · e^{log_scale}, with F̃(1−w) taken
    /// from its smoothed sum minus the residues of F̃ near 1 − w.
    fn value_via_fe(&self, w: Complex64, dual_sum: Complex64, log_scale: f64) -> Option<Complex64> {
        let fe = self.instance.fe();
        let u = Complex64::new(1.0, 0.0) - w;
        let mut dual_value = dual_sum;
        for pole in fe.poles() {
            let pole = pole.conjugate();
            if (u - pole.location).norm() < POLE_EXCLUSION {
                return None;
            }
            if (pole.location - u).re > -self.params.p / 2.0 {
                dual_value -= pole_residue(&pole, u, &self.params)?;
            }
        }
        let log_ratio = match log_fe_gamma_ratio(fe.gamma(), w) {
            Ok(Some(l)) => l,
            Ok(None) => return Some(Complex64::new(0.0, 0.0)),
            Err(_) => return None,
        };
        let log_factor = (Complex64::new(1.0, 0.0) - 2.0 * w) * fe.q().ln() + log_ratio + log_scale;
        Some(fe.omega() * log_factor.exp() * dual_value)
    }
}

/// Residue of F(s+w) X^w Γ(w/p)/p at the pole w₀ = s₀ − s of F(s+w).
fn pole_residue(pole: &Pole, s: Complex64, params: &SmoothingParams) -> Option<Complex64> {
    let p = params.p;
    let log_cutoff = params.cutoff.ln();
    let w0 = pole.location - s;
    let j = (-w0.re / p).round().max(0.0);
    let gap = [j - 1.0, j, j + 1.0]
        .into_iter()
        .filter(|&j| j >= 0.0)
        .map(|j| (w0 + p * j).norm())
        .fold(f64::INFINITY, f64::min);
    if gap < POLE_EXCLUSION {
        return None;
    }
    let g = |w: Complex64| -> Complex64 {
        match log_gamma(w / p) {
            Ok(lg) => (w * log_cutoff + lg).exp() / p,
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    };
    let residue = if pole.order() == 1 {
        pole.principal_part[0] * g(w0)
    } else {
        let radius = (gap / 2.0).min(0.25);
        let taylor = taylor_coefficients(g, w0, radius, pole.order());
        pole.principal_part
            .iter()
            .zip(&taylor)
            .map(|(c, t)| c * t)
            .sum()
    };
    residue.is_finite().then_some(residue)
}

fn log_tail(n: f64, log_envelope: f64, gamma: f64, params: &SmoothingParams) -> f64 {
    let u = n / params.cutoff;
    let decay = params.p * u.powf(params.p - 1.0) / params.cutoff - gamma.max(0.0) / n;
    if decay <= 0.0 {
        return f64::INFINITY;
    }
    log_envelope + gamma * n.ln() - u.powf(params.p) - decay.ln()
}

/// Smallest N whose tail bound is below ε, for the envelope |aₙ| ≤ K n^{β}.
fn minimal_length(log_envelope: f64, gamma: f64, params: &SmoothingParams) -> u64 {
    let target = params.epsilon.ln();
    let floor = params.cutoff * (gamma.max(0.0) / params.p).powf(1.0 / params.p);
    let mut lo = floor.floor().max(0.0) as u64 + 1;
    if log_tail(lo as f64, log_envelope, gamma, params) < target {
        return lo;
    }
    let mut hi = lo.max(1);
    while log_tail(hi as f64, log_envelope, gamma, params) >= target {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if log_tail(mid as f64, log_envelope, gamma, params) < target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Coefficient table long enough that the smoothed tail is below ε, with the
/// bound actually achieved. The envelope exponent is σ_a, which dominates
/// |aₙ| for every absolutely convergent series.
fn truncate(
    instance: &LSeriesInstance,
    x: f64,
    params: &SmoothingParams,
    budget: &Budget,
) -> Result<(CoefficientTable, f64)> {
    let beta = instance.sigma_a();
    let gamma = beta - x;
    let mut log_envelope = 0.0f64;
    loop {
        let n = minimal_length(log_envelope, gamma, params);
        budget.check_terms(n, "smoothed sum")?;
        let table = instance.coefficients().bulk(n)?;
        let observed = table
            .values()
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm().ln() - beta * ((i + 1) as f64).ln())
            .fold(f64::NEG_INFINITY, f64::max);
        if observed <= log_envelope + 1e-12 {
            let bound = log_tail(n as f64, log_envelope, gamma, params).exp();
            return Ok((table, bound));
        }
        log_envelope = observed;
    }
}

/// Estimate of F(z + it).
pub fn smoothed_value(
    instance: &LSeriesInstance,
    z: Complex64,
    t: f64,
    params: &SmoothingParams,
) -> Result<SmoothedEvaluation> {
    SmoothedEvaluator::new(instance, z.re, params, &Budget::default())?.evaluate(z.im + t)
}

/// Estimate of F̃(1 − z − it), the dual series at the reflected point.
pub fn smoothed_value_conjugate(
    instance: &LSeriesInstance,
    z: Complex64,
    t: f64,
    params: &SmoothingParams,
) -> Result<SmoothedEvaluation> {
    let point = Complex64::new(1.0, 0.0) - z - Complex64::new(0.0, t);
    smoothed_value(&instance.conjugate(), point, 0.0, params)
}

/// |Φ(s) − ω conj(Φ(1 − s̄))| / |Φ(s)| with both sides from smoothed values.
pub fn fe_defect(instance: &LSeriesInstance, s: Complex64, params: &SmoothingParams) -> Result<f64> {
    let fe = instance.fe();
    let reflected = Complex64::new(1.0 - s.re, s.im);
    let budget = Budget::default();
    let left = SmoothedEvaluator::new(instance, s.re, params, &budget)?;
    let f_s = left.evaluate(s.im)?.value;
    let f_r = if reflected.re == s.re {
        f_s
    } else {
        SmoothedEvaluator::new(instance, reflected.re, params, &budget)?
            .evaluate(s.im)?
            .value
    };
    let log_q = fe.q().ln();
    let l1 = s * log_q + log_gamma_factor(fe.gamma(), s)?;
    let l2 = reflected * log_q + log_gamma_factor(fe.gamma(), reflected)?;
    let scale = l1.re;
    let phi_s = f_s * (l1 - scale).exp();
    let phi_r = f_r * (l2 - scale).exp();
    Ok((phi_s - fe.omega() * phi_r.conj()).norm() / phi_s.norm())
}

/// Functional-equation defect on the critical line at height t.
pub fn fe_cross_check(instance: &LSeriesInstance, t: f64, params: &SmoothingParams) -> Result<f64> {
    fe_defect(instance, Complex64::new(0.5, t), params)
}
