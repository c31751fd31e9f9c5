//! Independent ζ(s) via Borwein's accelerated alternating series.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Number of terms giving about 1e-13 absolute accuracy at height |t|.
pub fn borwein_order(t: f64) -> usize {
    // error ≲ 3 (1 + 2|t|) e^{π|t|/2} / (3 + √8)^n
    let digits = PI * t.abs() / 2.0 * std::f64::consts::LOG10_E + (3.0 * (1.0 + 2.0 * t.abs())).log10() + 14.0;
    (digits / (3.0 + 8f64.sqrt()).log10()).ceil() as usize + 4
}

/// ζ(s) for Re s ≥ 0, |Im s| ≤ 200, s ≠ 1.
pub fn reference_zeta(s: Complex64) -> Result<Complex64> {
    reference_zeta_with_order(s, borwein_order(s.im))
}

pub fn reference_zeta_with_order(s: Complex64, n: usize) -> Result<Complex64> {
    if s.im.abs() > 200.0 || s.re < 0.0 {
        return Err(invalid(format!("reference zeta covers Re s >= 0, |Im s| <= 200; got {s}")));
    }
    let denom = Complex64::new(1.0, 0.0) - Complex64::new(2.0, 0.0).powc(Complex64::new(1.0, 0.0) - s);
    if denom.norm() < 1e-8 {
        return Err(invalid(format!("s = {s} is at a zero of 1 - 2^(1-s)")));
    }
    // d_k = n Σ_{i≤k} (n+i−1)! 4^i / ((n−i)! (2i)!)
    let nf = n as f64;
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / nf;
    let mut acc = term;
    d.push(nf * acc);
    for i in 1..=n {
        let fi = i as f64;
        term *= (nf + fi - 1.0) * (nf - fi + 1.0) * 4.0 / ((2.0 * fi - 1.0) * (2.0 * fi));
        acc += term;
        d.push(nf * acc);
    }
    let dn = d[n];
    let mut eta = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let base = (k + 1) as f64;
        eta += (-s * base.ln()).exp() * (sign * (d[k] - dn));
    }
    eta = -eta / dn;
    Ok(eta / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_two() {
        let v = reference_zeta(Complex64::new(2.0, 0.0)).unwrap();
        assert!((v.re - PI * PI / 6.0).abs() < 1e-14);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn zeta_zero_and_half() {
        let v = reference_zeta(Complex64::new(0.0, 0.0)).unwrap();
        assert!((v.re + 0.5).abs() < 1e-14);
        let v = reference_zeta(Complex64::new(0.5, 0.0)).unwrap();
        assert!((v.re + 1.460_354_508_809_586_8).abs() < 1e-13);
    }

    #[test]
    fn first_zero() {
        let v = reference_zeta(Complex64::new(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn orders_agree() {
        for t in [10.0, 50.0, 100.0] {
            let s = Complex64::new(0.5, t);
            let n = borwein_order(t);
            let a = reference_zeta_with_order(s, n).unwrap();
            let b = reference_zeta_with_order(s, n + 20).unwrap();
            assert!((a - b).norm() < 1e-12, "t={t}: {a} vs {b}");
        }
    }
}
