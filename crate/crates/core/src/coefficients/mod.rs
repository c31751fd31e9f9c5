//! Coefficient providers: preset sequences and the combinators that build new
//! Dirichlet series from old ones.

mod ntt;
pub mod tau;

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;

pub use ntt::convolve_exact;
pub use tau::{ramanujan_tau_table, tau_exact, TAU_LIMIT};

/// aₙ for n = 1..=N, stored from index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    values: Vec<Complex64>,
}

impl CoefficientTable {
    pub fn from_values(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// aₙ, 1-based.
    pub fn get(&self, n: u64) -> Complex64 {
        self.values[(n - 1) as usize]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// Deterministic map n ↦ aₙ.
///
/// `coefficient(n)` and `bulk(N)` return bit-identical values: both evaluate the
/// same products and sums in the same order.
#[derive(Debug, Clone)]
pub enum CoefficientProvider {
    /// aₙ = 1.
    Zeta,
    /// The non-principal character modulo 4.
    Chi4,
    /// τ(n) / n^{11/2}.
    Tau,
    /// Explicit values for n = 1..=len; zero beyond.
    Table(Arc<[Complex64]>),
    /// Dirichlet convolution: the coefficients of F₁(s) F₂(s).
    Convolution(Box<CoefficientProvider>, Box<CoefficientProvider>),
    /// Coefficients of F(s + δ): aₙ n^{−δ}.
    VerticalShift { inner: Box<CoefficientProvider>, delta: f64 },
    /// Coefficients of F(k s − c): a_{mᵏ} = b_m m^{c}, zero off k-th powers.
    ArgumentScaled {
        inner: Box<CoefficientProvider>,
        power: u32,
        offset: f64,
    },
    /// conj(aₙ).
    Conjugate(Box<CoefficientProvider>),
    /// c · aₙ.
    Multiplied { inner: Box<CoefficientProvider>, factor: f64 },
}

impl CoefficientProvider {
    pub fn convolution(a: CoefficientProvider, b: CoefficientProvider) -> Self {
        Self::Convolution(Box::new(a), Box::new(b))
    }

    pub fn shifted(inner: CoefficientProvider, delta: f64) -> Self {
        Self::VerticalShift {
            inner: Box::new(inner),
            delta,
        }
    }

    pub fn argument_scaled(inner: CoefficientProvider, power: u32, offset: f64) -> Self {
        Self::ArgumentScaled {
            inner: Box::new(inner),
            power,
            offset,
        }
    }

    pub fn table(values: Vec<Complex64>) -> Self {
        Self::Table(values.into())
    }

    /// aₙ for n ≥ 1; a₀ is reported as zero.
    pub fn coefficient(&self, n: u64) -> Result<Complex64> {
        if n == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(match self {
            Self::Zeta => Complex64::new(1.0, 0.0),
            Self::Chi4 => chi4(n),
            Self::Tau => {
                let table = tau::tau_cached(n)?;
                tau::normalized_tau(table[(n - 1) as usize], n)
            }
            Self::Table(values) => values
                .get((n - 1) as usize)
                .copied()
                .unwrap_or_default(),
            Self::Convolution(a, b) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for d in divisors(n) {
                    acc += a.coefficient(d)? * b.coefficient(n / d)?;
                }
                acc
            }
            Self::VerticalShift { inner, delta } => inner.coefficient(n)? * shift_factor(n, *delta),
            Self::ArgumentScaled { inner, power, offset } => match exact_root(n, *power) {
                Some(m) => inner.coefficient(m)? * scale_factor(m, *offset),
                None => Complex64::new(0.0, 0.0),
            },
            Self::Conjugate(inner) => inner.coefficient(n)?.conj(),
            Self::Multiplied { inner, factor } => inner.coefficient(n)? * *factor,
        })
    }

    /// a₁..a_N in one pass.
    pub fn bulk(&self, n: u64) -> Result<CoefficientTable> {
        let len = n as usize;
        let values = match self {
            Self::Zeta => vec![Complex64::new(1.0, 0.0); len],
            Self::Chi4 => (1..=n).map(chi4).collect(),
            Self::Tau => return ramanujan_tau_table(n),
            Self::Table(values) => (0..len)
                .map(|i| values.get(i).copied().unwrap_or_default())
                .collect(),
            Self::Convolution(a, b) => {
                let a = a.bulk(n)?;
                let b = b.bulk(n)?;
                let mut out = vec![Complex64::new(0.0, 0.0); len];
                for d in 1..=len {
                    let ad = a.values[d - 1];
                    for e in 1..=len / d {
                        out[d * e - 1] += ad * b.values[e - 1];
                    }
                }
                out
            }
            Self::VerticalShift { inner, delta } => inner
                .bulk(n)?
                .values
                .into_iter()
                .enumerate()
                .map(|(i, a)| a * shift_factor(i as u64 + 1, *delta))
                .collect(),
            Self::ArgumentScaled { inner, power, offset } => {
                let mut out = vec![Complex64::new(0.0, 0.0); len];
                let mut roots = Vec::new();
                let mut m = 1u64;
                while let Some(mk) = m.checked_pow(*power).filter(|&v| v <= n) {
                    roots.push((m, mk));
                    m += 1;
                }
                let inner = inner.bulk(roots.len() as u64)?;
                for (m, mk) in roots {
                    out[(mk - 1) as usize] = inner.get(m) * scale_factor(m, *offset);
                }
                out
            }
            Self::Conjugate(inner) => inner.bulk(n)?.values.into_iter().map(|a| a.conj()).collect(),
            Self::Multiplied { inner, factor } => {
                inner.bulk(n)?.values.into_iter().map(|a| a * *factor).collect()
            }
        };
        Ok(CoefficientTable { values })
    }
}

fn chi4(n: u64) -> Complex64 {
    Complex64::new(
        match n % 4 {
            1 => 1.0,
            3 => -1.0,
            _ => 0.0,
        },
        0.0,
    )
}

fn shift_factor(n: u64, delta: f64) -> f64 {
    (n as f64).powf(-delta)
}

fn scale_factor(m: u64, offset: f64) -> f64 {
    (m as f64).powf(offset)
}

/// m with mᵏ = n, if one exists.
fn exact_root(n: u64, power: u32) -> Option<u64> {
    if power == 0 {
        return None;
    }
    if power == 1 {
        return Some(n);
    }
    let guess = (n as f64).powf(1.0 / power as f64).round() as u64;
    (guess.saturating_sub(1)..=guess + 1).find(|&m| m.checked_pow(power) == Some(n))
}

/// Divisors of n in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
