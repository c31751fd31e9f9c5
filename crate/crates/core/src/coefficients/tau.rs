//! Ramanujan τ(n) from q∏(1 − qⁿ)^24, built as ((η³)²)²)² with Jacobi's
//! sparse series for η³.

use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use super::ntt::convolve_exact;
use super::CoefficientTable;
use crate::error::{Error, Result};

/// Largest N for which every τ(n), n ≤ N, is recovered exactly (|τ(n)| < 2^126).
pub const TAU_LIMIT: u64 = 1 << 21;

/// Coefficients of ∏(1 − qⁿ)³ = Σ_k (−1)^k (2k+1) q^{k(k+1)/2}, up to q^{len−1}.
fn eta_cubed(len: usize) -> Vec<(usize, i128)> {
    let mut terms = Vec::new();
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2;
        if e >= len {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        terms.push((e, sign * (2 * k as i128 + 1)));
        k += 1;
    }
    terms
}

/// Exact τ(1..=n) as a vector indexed from 0.
pub fn tau_exact(n: u64) -> Result<Vec<i128>> {
    if n > TAU_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "exact Ramanujan tau table".into(),
            required: n as f64,
            limit: TAU_LIMIT as f64,
        });
    }
    let len = n as usize;
    if len == 0 {
        return Ok(Vec::new());
    }
    let cubed = eta_cubed(len);
    let mut sixth = vec![0i128; len];
    for &(i, x) in &cubed {
        for &(j, y) in &cubed {
            if i + j >= len {
                break;
            }
            sixth[i + j] += x * y;
        }
    }
    let twelfth = convolve_exact(&sixth, &sixth, len);
    Ok(convolve_exact(&twelfth, &twelfth, len))
}

static CACHE: OnceLock<RwLock<Arc<Vec<i128>>>> = OnceLock::new();

/// Shared table of exact τ values covering at least 1..=n.
pub fn tau_cached(n: u64) -> Result<Arc<Vec<i128>>> {
    let cell = CACHE.get_or_init(|| RwLock::new(Arc::new(Vec::new())));
    {
        let table = cell.read().expect("tau cache poisoned");
        if table.len() as u64 >= n {
            return Ok(Arc::clone(&table));
        }
    }
    let mut table = cell.write().expect("tau cache poisoned");
    if (table.len() as u64) < n {
        let target = n.max(2 * table.len() as u64).max(1024).min(TAU_LIMIT).max(n);
        *table = Arc::new(tau_exact(target)?);
    }
    Ok(Arc::clone(&table))
}

/// τ(n) / n^{11/2}.
pub fn normalized_tau(tau: i128, n: u64) -> Complex64 {
    Complex64::new(tau as f64 / (n as f64).powf(5.5), 0.0)
}

/// Table of τ(n)/n^{11/2} for n ≤ N.
pub fn ramanujan_tau_table(n: u64) -> Result<CoefficientTable> {
    let exact = tau_cached(n)?;
    let values = exact[..n as usize]
        .iter()
        .enumerate()
        .map(|(i, &t)| normalized_tau(t, i as u64 + 1))
        .collect();
    Ok(CoefficientTable::from_values(values))
}
