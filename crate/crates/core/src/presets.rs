//! Built-in L-series.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coefficients::CoefficientProvider;
use crate::error::{invalid, Result};
use crate::model::{FunctionalEquationData, GammaFactor, GammaFactorSpec, LSeriesInstance, Pole};

pub const PRESET_NAMES: [&str; 7] = [
    "zeta",
    "zeta-doubled",
    "dirichlet-chi4",
    "zeta-sq",
    "zeta-shift-pair",
    "zeta-scaled",
    "delta",
];

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn one() -> Complex64 {
    real(1.0)
}

pub fn preset(name: &str) -> Result<LSeriesInstance> {
    use CoefficientProvider as P;
    let g = |lambda: f64, mu: f64| GammaFactor::real(lambda, mu);
    let (gamma, q, poles, coefficients, sigma_a) = match name {
        "zeta" => (
            GammaFactorSpec::new(vec![g(0.5, 0.0)], vec![])?,
            PI.powf(-0.5),
            vec![Pole::simple(one(), one())],
            P::Zeta,
            1.0,
        ),
        // ζ written with Γ(s)/Γ(s/2 + 1/2) via the duplication formula.
        "zeta-doubled" => (
            GammaFactorSpec::new(vec![g(1.0, 0.0)], vec![g(0.5, 0.5)])?,
            0.5 / PI.sqrt(),
            vec![Pole::simple(one(), one())],
            P::Zeta,
            1.0,
        ),
        "dirichlet-chi4" => (
            GammaFactorSpec::new(vec![g(0.5, 0.5)], vec![])?,
            2.0 / PI.sqrt(),
            vec![],
            P::Chi4,
            1.0,
        ),
        "zeta-sq" => (
            GammaFactorSpec::new(vec![g(0.5, 0.0), g(0.5, 0.0)], vec![])?,
            1.0 / PI,
            vec![Pole {
                location: one(),
                principal_part: vec![real(2.0 * EULER_GAMMA), one()],
            }],
            P::convolution(P::Zeta, P::Zeta),
            1.0,
        ),
        // ζ(s + 1/2) ζ(s − 1/2)
        "zeta-shift-pair" => (
            GammaFactorSpec::new(vec![g(0.5, 0.25), g(0.5, -0.25)], vec![])?,
            1.0 / PI,
            vec![
                Pole::simple(real(0.5), real(-0.5)),
                Pole::simple(real(1.5), real(PI * PI / 6.0)),
            ],
            P::convolution(P::shifted(P::Zeta, 0.5), P::shifted(P::Zeta, -0.5)),
            1.5,
        ),
        // ζ(2s − 1/2)
        "zeta-scaled" => (
            GammaFactorSpec::new(vec![g(1.0, -0.25)], vec![])?,
            1.0 / PI,
            vec![Pole::simple(real(0.75), real(0.5))],
            P::argument_scaled(P::Zeta, 2, 0.5),
            0.75,
        ),
        "delta" => (
            GammaFactorSpec::new(vec![g(1.0, 5.5)], vec![])?,
            0.5 / PI,
            vec![],
            P::Tau,
            1.0,
        ),
        other => {
            return Err(invalid(format!(
                "unknown preset '{other}' (known: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    let fe = FunctionalEquationData::new(q, one(), gamma, poles)?;
    LSeriesInstance::new(name, coefficients, fe, sigma_a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::resonance_alpha;

    #[test]
    fn all_presets_build() {
        for name in PRESET_NAMES {
            let l = preset(name).unwrap();
            assert!(l.degree() > 0.0);
            l.invariants().unwrap();
        }
        assert!(preset("nope").is_err());
    }

    #[test]
    fn degrees() {
        let expected = [1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 2.0];
        for (name, d) in PRESET_NAMES.iter().zip(expected) {
            assert_eq!(preset(name).unwrap().degree(), d, "{name}");
        }
    }

    #[test]
    fn duplication_keeps_conductor_invariant() {
        let a = preset("zeta").unwrap();
        let b = preset("zeta-doubled").unwrap();
        let (ia, ib) = (a.invariants().unwrap(), b.invariants().unwrap());
        let ca = ia.c * a.fe().q().powi(2);
        let cb = ib.c * b.fe().q().powi(2);
        assert!((ca - cb).abs() < 1e-15);
        assert!((ia.b - ib.b).abs() < 1e-14);
    }

    #[test]
    fn zeta_and_delta_resonate_at_two_pi() {
        for name in ["zeta", "delta"] {
            let l = preset(name).unwrap();
            let alpha = resonance_alpha(1, &l.invariants().unwrap(), l.fe().q()).unwrap();
            assert!((alpha - 2.0 * PI).abs() < 1e-12, "{name}");
        }
    }
}
