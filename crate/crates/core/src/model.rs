//! L-series instances: gamma-factor data, functional-equation data, derived
//! Stirling invariants and smoothing parameters.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::coefficients::CoefficientProvider;
use crate::error::{invalid, Error, Result};

/// One factor Γ(λ s + μ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFactor {
    pub lambda: f64,
    pub mu: Complex64,
}

impl GammaFactor {
    pub fn new(lambda: f64, mu: Complex64) -> Self {
        Self { lambda, mu }
    }

    pub fn real(lambda: f64, mu: f64) -> Self {
        Self::new(lambda, Complex64::new(mu, 0.0))
    }
}

/// G(s) = Π Γ(λⱼ s + μⱼ) / Π Γ(λ′ⱼ s + μ′ⱼ).
#[derive(Debug, Clone, PartialEq)]
pub struct GammaFactorSpec {
    numerator: Vec<GammaFactor>,
    denominator: Vec<GammaFactor>,
}

impl GammaFactorSpec {
    pub fn new(numerator: Vec<GammaFactor>, denominator: Vec<GammaFactor>) -> Result<Self> {
        for f in numerator.iter().chain(&denominator) {
            if !(f.lambda.is_finite() && f.lambda > 0.0) {
                return Err(invalid(format!("gamma factor lambda must be positive, got {}", f.lambda)));
            }
            if !(f.mu.re.is_finite() && f.mu.im.is_finite()) {
                return Err(invalid("gamma factor mu must be finite"));
            }
        }
        Ok(Self { numerator, denominator })
    }

    pub fn numerator(&self) -> &[GammaFactor] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[GammaFactor] {
        &self.denominator
    }

    /// d = 2Σλⱼ − 2Σλ′ⱼ.
    pub fn degree(&self) -> f64 {
        2.0 * self.numerator.iter().map(|f| f.lambda).sum::<f64>()
            - 2.0 * self.denominator.iter().map(|f| f.lambda).sum::<f64>()
    }

    /// Product of two gamma factors (numerators and denominators concatenated).
    pub fn concat(&self, other: &Self) -> Self {
        let mut numerator = self.numerator.clone();
        numerator.extend_from_slice(&other.numerator);
        let mut denominator = self.denominator.clone();
        denominator.extend_from_slice(&other.denominator);
        Self { numerator, denominator }
    }

    /// Gamma data of the conjugate series: μ → μ̄.
    pub fn conjugate(&self) -> Self {
        let conj = |fs: &[GammaFactor]| {
            fs.iter()
                .map(|f| GammaFactor::new(f.lambda, f.mu.conj()))
                .collect()
        };
        Self {
            numerator: conj(&self.numerator),
            denominator: conj(&self.denominator),
        }
    }

    pub fn stirling_constants(&self) -> Result<DerivedInvariants> {
        let i = Complex64::i();
        let d = self.degree();
        let mu_sum: Complex64 = self.numerator.iter().map(|f| f.mu).sum();
        let mu_prime_sum: Complex64 = self.denominator.iter().map(|f| f.mu).sum();
        let r = self.numerator.len() as f64;
        let r_prime = self.denominator.len() as f64;

        let a = -i * ((mu_sum.conj() - mu_sum) - (mu_prime_sum.conj() - mu_prime_sum));

        let log_c = 2.0 * self.numerator.iter().map(|f| f.lambda * f.lambda.ln()).sum::<f64>()
            - 2.0 * self.denominator.iter().map(|f| f.lambda * f.lambda.ln()).sum::<f64>();

        let log_lambda_weighted = |fs: &[GammaFactor]| -> Complex64 {
            fs.iter().map(|f| (f.mu.conj() - f.mu) * f.lambda.ln()).sum()
        };
        let num_w = log_lambda_weighted(&self.numerator);
        let den_w = log_lambda_weighted(&self.denominator);

        let b = -i * num_w + i * den_w
            - ((mu_sum + mu_sum.conj()) - (mu_prime_sum + mu_prime_sum.conj()) + d / 2.0) * FRAC_PI_2
            + (r - r_prime) * FRAC_PI_2;

        let b_printed = -i * num_w + i * den_w - (mu_sum - mu_sum.conj())
            + (mu_prime_sum - mu_prime_sum.conj())
            - ((mu_sum - mu_sum.conj()) - (mu_prime_sum - mu_prime_sum.conj()) + d / 2.0) * FRAC_PI_2;

        for (name, v) in [("A", a), ("B", b)] {
            if v.im.abs() > 1e-12 * v.re.abs().max(1.0) {
                return Err(invalid(format!("invariant {name} is not real: {v}")));
            }
        }

        Ok(DerivedInvariants {
            d,
            a: a.re,
            b: b.re,
            c: log_c.exp(),
            mu_sum,
            mu_prime_sum,
            b_printed,
        })
    }
}

/// Stirling invariants of a gamma factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedInvariants {
    pub d: f64,
    pub a: f64,
    /// Phase constant that makes the asymptotic gamma ratio exact to O(1/t).
    pub b: f64,
    pub c: f64,
    pub mu_sum: Complex64,
    pub mu_prime_sum: Complex64,
    /// Phase constant as it appears in the source derivation (generally complex,
    /// and not the correct asymptotic constant); kept for the constant ledger.
    pub b_printed: Complex64,
}

/// A pole of F at `location`; `principal_part[k]` is the coefficient of
/// (s − location)^{−(k+1)}.
#[derive(Debug, Clone, PartialEq)]
pub struct Pole {
    pub location: Complex64,
    pub principal_part: Vec<Complex64>,
}

impl Pole {
    pub fn simple(location: Complex64, residue: Complex64) -> Self {
        Self {
            location,
            principal_part: vec![residue],
        }
    }

    pub fn order(&self) -> usize {
        self.principal_part.len()
    }

    pub fn conjugate(&self) -> Self {
        Self {
            location: self.location.conj(),
            principal_part: self.principal_part.iter().map(|c| c.conj()).collect(),
        }
    }
}

/// Φ(s) = Q^s G(s) F(s) = ω · conj(Φ(1 − s̄)).
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalEquationData {
    q: f64,
    omega: Complex64,
    gamma: GammaFactorSpec,
    poles: Vec<Pole>,
}

impl FunctionalEquationData {
    pub fn new(q: f64, omega: Complex64, gamma: GammaFactorSpec, poles: Vec<Pole>) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(invalid(format!("Q must be positive, got {q}")));
        }
        if (omega.norm() - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("|omega| must be 1, got {}", omega.norm())));
        }
        for p in &poles {
            if p.principal_part.is_empty() {
                return Err(invalid("pole with empty principal part"));
            }
        }
        Ok(Self { q, omega, gamma, poles })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    pub fn gamma(&self) -> &GammaFactorSpec {
        &self.gamma
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn conjugate(&self) -> Self {
        Self {
            q: self.q,
            omega: self.omega.conj(),
            gamma: self.gamma.conjugate(),
            poles: self.poles.iter().map(Pole::conjugate).collect(),
        }
    }
}

/// A Dirichlet series F(s) = Σ aₙ n^{−s} together with its functional equation.
#[derive(Debug, Clone)]
pub struct LSeriesInstance {
    name: String,
    coefficients: CoefficientProvider,
    fe: FunctionalEquationData,
    sigma_a: f64,
}

impl LSeriesInstance {
    pub fn new(
        name: impl Into<String>,
        coefficients: CoefficientProvider,
        fe: FunctionalEquationData,
        sigma_a: f64,
    ) -> Result<Self> {
        if !(sigma_a.is_finite() && sigma_a >= 0.5) {
            return Err(invalid(format!("sigma_a must be at least 1/2, got {sigma_a}")));
        }
        if fe.gamma.degree() <= 0.0 {
            return Err(invalid("degree must be positive"));
        }
        Ok(Self {
            name: name.into(),
            coefficients,
            fe,
            sigma_a,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coefficients(&self) -> &CoefficientProvider {
        &self.coefficients
    }

    pub fn fe(&self) -> &FunctionalEquationData {
        &self.fe
    }

    pub fn sigma_a(&self) -> f64 {
        self.sigma_a
    }

    pub fn degree(&self) -> f64 {
        self.fe.gamma.degree()
    }

    pub fn invariants(&self) -> Result<DerivedInvariants> {
        self.fe.gamma.stirling_constants()
    }

    /// F̃(s) = Σ conj(aₙ) n^{−s}, with the dual functional-equation data.
    pub fn conjugate(&self) -> Self {
        Self {
            name: format!("{}~", self.name),
            coefficients: CoefficientProvider::Conjugate(Box::new(self.coefficients.clone())),
            fe: self.fe.conjugate(),
            sigma_a: self.sigma_a,
        }
    }

    /// Same functional equation, coefficients multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            name: format!("{}*{}", self.name, factor),
            coefficients: CoefficientProvider::Multiplied {
                inner: Box::new(self.coefficients.clone()),
                factor,
            },
            fe: self.fe.clone(),
            sigma_a: self.sigma_a,
        }
    }
}

/// α = (m / (C Q²))^{1/d}, the frequency at which the twist resonates with a_m.
pub fn resonance_alpha(m: u64, invariants: &DerivedInvariants, q: f64) -> Result<f64> {
    if m == 0 {
        return Err(invalid("resonant index must be at least 1"));
    }
    if invariants.d <= 0.0 {
        return Err(invalid("degree must be positive"));
    }
    Ok((m as f64 / (invariants.c * q * q)).powf(1.0 / invariants.d))
}

/// Smallest m ≤ bound with |a_m| > 1e-12.
pub fn pick_resonant_index(instance: &LSeriesInstance, bound: u64) -> Result<u64> {
    for m in 1..=bound {
        if instance.coefficients.coefficient(m)?.norm() > 1e-12 {
            return Ok(m);
        }
    }
    Err(Error::NoResonantIndex(bound))
}

/// Weight e^{−(n/X)^p} and truncation controls for smoothed sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingParams {
    pub p: f64,
    /// Exponent in X = T^{d+ρ} used by the transforms and twists.
    pub rho: f64,
    /// Regularity parameter of the smoothing class; bookkeeping only.
    pub eta: f64,
    /// Absolute tail tolerance for truncating the smoothed sum.
    pub epsilon: f64,
    /// Smoothing length X.
    pub cutoff: f64,
    /// Number of gamma-pole remainder terms folded back into evaluations.
    pub remainder_terms: usize,
}

impl SmoothingParams {
    pub fn new(cutoff: f64) -> Self {
        Self {
            p: 2.0,
            rho: 0.5,
            eta: 0.5,
            epsilon: 1e-12,
            cutoff,
            remainder_terms: 2,
        }
    }

    /// Default for a single evaluation at height t: X = max(10³, 10 (t/2π)^d).
    pub fn standalone(t: f64, d: f64) -> Self {
        Self::new((10.0 * (t.abs() / (2.0 * PI)).powf(d)).max(1e3))
    }

    /// Default for additive twists: ρ = 1 keeps the smoothing deficit on (T, 4T)
    /// below 0.1% from T = 10³ on.
    pub fn for_twist() -> Self {
        Self {
            rho: 1.0,
            ..Self::new(1.0)
        }
    }

    pub fn with_cutoff(self, cutoff: f64) -> Self {
        Self { cutoff, ..self }
    }

    pub fn with_p(self, p: f64) -> Self {
        Self { p, ..self }
    }

    pub fn with_rho(self, rho: f64) -> Self {
        Self { rho, ..self }
    }

    pub fn with_epsilon(self, epsilon: f64) -> Self {
        Self { epsilon, ..self }
    }

    /// X = T^{d+ρ}.
    pub fn cutoff_for(&self, t: f64, d: f64) -> f64 {
        t.powf(d + self.rho)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(invalid(format!("smoothing exponent p must be >= 1, got {}", self.p)));
        }
        if !(self.eta > 0.0 && self.eta < self.p) {
            return Err(invalid("need p > eta > 0"));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1e-3) {
            return Err(invalid(format!("epsilon must lie in (0, 1e-3], got {}", self.epsilon)));
        }
        if !(self.cutoff > 0.0 && self.cutoff.is_finite()) {
            return Err(invalid(format!("smoothing length X must be positive, got {}", self.cutoff)));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(invalid("rho must be positive"));
        }
        Ok(())
    }
}

/// Work limits for table generation and transform quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub max_terms: u64,
    pub max_ops: f64,
    pub enforce: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_terms: 10_000_000,
            max_ops: 1e9,
            enforce: true,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Self {
            enforce: false,
            ..Self::default()
        }
    }

    pub fn check_terms(&self, n: u64, what: &str) -> Result<()> {
        if self.enforce && n > self.max_terms {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                required: n as f64,
                limit: self.max_terms as f64,
            });
        }
        Ok(())
    }

    pub fn check_ops(&self, cost: f64, what: &str) -> Result<()> {
        if self.enforce && cost > self.max_ops {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                required: cost,
                limit: self.max_ops,
            });
        }
        Ok(())
    }
}
