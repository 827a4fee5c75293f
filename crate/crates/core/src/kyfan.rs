//! The `(k,2)` Ky Fan norm `√(Σ_{i≤k} σᵢ²)` and its closed-form dual.

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};

/// Relative band inside which the break-index predicate counts as a tie.
const GUARD: f64 = 1e-12;
/// Singular values below this fraction of the largest one are treated as zero.
const CLAMP: f64 = 1e-14;

/// Split point of a descending sequence for the dual `(k,2)` formula.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakIndexResult {
    /// Number of leading entries kept as-is, in `0..k`.
    pub r: usize,
    /// Tail average `Σ_{i>r} σᵢ / (k − r)`.
    pub sigma_tilde: f64,
    pub(crate) clamped: Vec<f64>,
}

/// Largest `1 ≤ r < k` with `σ_r > Σ_{i>r} σᵢ / (k − r)`, or `r = 0` if none
/// exists (always the case for `k = 1`).
pub fn break_index(sigma: &[f64], k: usize) -> Result<BreakIndexResult> {
    if sigma.is_empty() {
        return Err(Error::DegenerateInput("break index of an empty sequence".into()));
    }
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    if sigma.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return Err(Error::Precondition("singular values must be finite and nonnegative".into()));
    }
    let top = sigma[0];
    if sigma.windows(2).any(|w| w[1] > w[0] + GUARD * top.max(f64::MIN_POSITIVE)) {
        return Err(Error::Precondition("singular values must be sorted descending".into()));
    }
    let clamped: Vec<f64> = sigma.iter().map(|&s| if s < CLAMP * top { 0.0 } else { s }).collect();

    // suffix[i] = Σ_{j≥i} σ_j (0-based)
    let mut suffix = vec![0.0; clamped.len() + 1];
    for i in (0..clamped.len()).rev() {
        suffix[i] = suffix[i + 1] + clamped[i];
    }
    let tail = |r: usize| suffix[r.min(clamped.len())];
    let value_at = |r: usize| if r >= 1 && r <= clamped.len() { clamped[r - 1] } else { 0.0 };

    let band = GUARD * top;
    let r = (1..k)
        .rev()
        .find(|&r| value_at(r) > tail(r) / (k - r) as f64 + band)
        .unwrap_or(0);
    let sigma_tilde = tail(r) / (k - r) as f64;
    Ok(BreakIndexResult { r, sigma_tilde, clamped })
}

fn check_k(x: &ComplexMatrix, k: usize) -> Result<()> {
    let min = x.nrows().min(x.ncols());
    if k == 0 || k > min {
        Err(Error::Parameter(format!("k must lie in 1..={min}, got {k}")))
    } else {
        Ok(())
    }
}

/// `‖σ‖_(k,2)` on a descending sequence.
pub fn k2_norm_of(sigma: &[f64], k: usize) -> f64 {
    sigma.iter().take(k).map(|s| s * s).sum::<f64>().sqrt()
}

/// Dual `(k,2)` value on a descending sequence.
pub fn k2_dual_of(sigma: &[f64], k: usize) -> Result<f64> {
    let br = break_index(sigma, k)?;
    let head: f64 = br.clamped[..br.r].iter().map(|s| s * s).sum();
    Ok((head + (k - br.r) as f64 * br.sigma_tilde * br.sigma_tilde).sqrt())
}

pub fn k2_norm(x: &ComplexMatrix, k: usize) -> Result<f64> {
    check_k(x, k)?;
    Ok(k2_norm_of(&linalg::singular_values(x)?, k))
}

pub fn k2_dual(x: &ComplexMatrix, k: usize) -> Result<f64> {
    check_k(x, k)?;
    k2_dual_of(&linalg::singular_values(x)?, k)
}
