//! Custom L-series from TOML.
//!
//! ```toml
//! name = "zeta"
//! q = 0.5641895835477563
//! omega = [1.0, 0.0]
//! sigma_a = 1.0
//! gamma = [{ lambda = 0.5, mu = [0.0, 0.0] }]
//! gamma_denominator = []
//! poles = [{ location = [1.0, 0.0], principal_part = [[1.0, 0.0]] }]
//!
//! [coefficients]
//! kind = "zeta"
//! ```
//!
//! Coefficient sources (`kind`): `zeta`, `chi4`, `tau`, `table` (CSV file with
//! rows `n,re[,im]`, relative to the config file), `convolution` (`left`,
//! `right`), `shift` (`inner`, `delta`: F(s + δ)), `argument-scaled` (`inner`,
//! `power`, `offset`: F(k s − c)), `conjugate` (`inner`), `multiple`
//! (`inner`, `factor`).

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use crate::coefficients::CoefficientProvider;
use crate::error::{Error, Result};
use crate::model::{FunctionalEquationData, GammaFactor, GammaFactorSpec, LSeriesInstance, Pole};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceConfig {
    name: String,
    q: f64,
    #[serde(default = "default_omega")]
    omega: [f64; 2],
    sigma_a: f64,
    gamma: Vec<FactorConfig>,
    #[serde(default)]
    gamma_denominator: Vec<FactorConfig>,
    #[serde(default)]
    poles: Vec<PoleConfig>,
    coefficients: CoefficientConfig,
}

fn default_omega() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorConfig {
    lambda: f64,
    #[serde(default)]
    mu: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PoleConfig {
    location: [f64; 2],
    principal_part: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum CoefficientConfig {
    Zeta,
    Chi4,
    Tau,
    Table { path: PathBuf },
    Convolution { left: Box<CoefficientConfig>, right: Box<CoefficientConfig> },
    Shift { inner: Box<CoefficientConfig>, delta: f64 },
    ArgumentScaled { inner: Box<CoefficientConfig>, power: u32, offset: f64 },
    Conjugate { inner: Box<CoefficientConfig> },
    Multiple { inner: Box<CoefficientConfig>, factor: f64 },
}

fn complex(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

impl CoefficientConfig {
    fn build(self, base: &Path) -> Result<CoefficientProvider> {
        use CoefficientProvider as P;
        Ok(match self {
            Self::Zeta => P::Zeta,
            Self::Chi4 => P::Chi4,
            Self::Tau => P::Tau,
            Self::Table { path } => P::table(read_table(&base.join(path))?),
            Self::Convolution { left, right } => P::convolution(left.build(base)?, right.build(base)?),
            Self::Shift { inner, delta } => P::shifted(inner.build(base)?, delta),
            Self::ArgumentScaled { inner, power, offset } => {
                if power == 0 {
                    return Err(Error::Config("argument-scaled power must be positive".into()));
                }
                P::argument_scaled(inner.build(base)?, power, offset)
            }
            Self::Conjugate { inner } => P::Conjugate(Box::new(inner.build(base)?)),
            Self::Multiple { inner, factor } => P::Multiplied {
                inner: Box::new(inner.build(base)?),
                factor,
            },
        })
    }
}

/// Rows `n,re[,im]`; blank lines, `#` comments and a non-numeric header are skipped.
pub fn read_table(path: &Path) -> Result<Vec<Complex64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_table(&text)
}

pub fn parse_table(text: &str) -> Result<Vec<Complex64>> {
    let mut values: Vec<Complex64> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let Ok(n) = fields[0].parse::<u64>() else {
            if lineno == 0 {
                continue;
            }
            return Err(Error::Config(format!("line {}: bad index '{}'", lineno + 1, fields[0])));
        };
        let parse = |s: Option<&&str>| -> Result<f64> {
            match s {
                None => Ok(0.0),
                Some(s) => s
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("line {}: bad number '{s}'", lineno + 1))),
            }
        };
        if n == 0 {
            return Err(Error::Config(format!("line {}: index must be >= 1", lineno + 1)));
        }
        let value = Complex64::new(parse(fields.get(1))?, parse(fields.get(2))?);
        let idx = (n - 1) as usize;
        if values.len() <= idx {
            values.resize(idx + 1, Complex64::new(0.0, 0.0));
        }
        values[idx] = value;
    }
    Ok(values)
}

/// Parse a TOML instance; relative table paths resolve against `base`.
pub fn parse_instance(text: &str, base: &Path) -> Result<LSeriesInstance> {
    let cfg: InstanceConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let factors = |fs: Vec<FactorConfig>| -> Vec<GammaFactor> {
        fs.into_iter()
            .map(|f| GammaFactor::new(f.lambda, complex(f.mu)))
            .collect()
    };
    let gamma = GammaFactorSpec::new(factors(cfg.gamma), factors(cfg.gamma_denominator))?;
    let poles = cfg
        .poles
        .into_iter()
        .map(|p| Pole {
            location: complex(p.location),
            principal_part: p.principal_part.into_iter().map(complex).collect(),
        })
        .collect();
    let fe = FunctionalEquationData::new(cfg.q, complex(cfg.omega), gamma, poles)?;
    LSeriesInstance::new(cfg.name, cfg.coefficients.build(base)?, fe, cfg.sigma_a)
}

pub fn load_instance(path: &Path) -> Result<LSeriesInstance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text, path.parent().unwrap_or(Path::new(".")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_parsing() {
        let v = parse_table("n,re,im\n1,1.5,0\n# skip\n3,-2,0.25\n").unwrap();
        assert_eq!(v, vec![Complex64::new(1.5, 0.0), Complex64::new(0.0, 0.0), Complex64::new(-2.0, 0.25)]);
        assert!(parse_table("1,1\n0,2\n").is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = "name='x'\nq=1.0\nsigma_a=1.0\ngamma=[{lambda=0.5}]\nbogus=1\n[coefficients]\nkind='zeta'\n";
        assert!(matches!(parse_instance(text, Path::new(".")), Err(Error::Config(_))));
    }

    #[test]
    fn nested_coefficients() {
        let text = r#"
name = "pair"
q = 0.3183098861837907
sigma_a = 1.5
gamma = [{ lambda = 0.5, mu = [0.25, 0.0] }, { lambda = 0.5, mu = [-0.25, 0.0] }]

[coefficients]
kind = "convolution"
left = { kind = "shift", delta = 0.5, inner = { kind = "zeta" } }
right = { kind = "shift", delta = -0.5, inner = { kind = "zeta" } }
"#;
        let l = parse_instance(text, Path::new(".")).unwrap();
        let v = l.coefficients().coefficient(6).unwrap();
        assert!((v.re - 12.0 / 6f64.sqrt()).abs() < 1e-14);
    }
}
