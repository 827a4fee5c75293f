//! Schmidt-number detection through the realignment map.
//!
//! If `SN(ρ) ≤ k` then `‖L(ρ)‖°_(k²,2) ≤ 1`: every Schmidt-rank-`k` term of a
//! decomposition of `ρ` realigns to a unit-Frobenius matrix of rank at most `k²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kyfan::k2_dual;
use crate::linalg::{self, BipartiteOperator, ComplexMatrix, Factor};
use crate::schmidt::{check_k, PureState};

/// Default margin above the threshold before a value counts as a detection.
pub const DETECTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// `‖L(ρ)‖°_(k²,2) ≤ 1`.
    GenRealign,
    /// `‖L(ρ)‖_tr ≤ k`.
    WeakRealign,
    /// `‖L(ρ)‖_tr ≤ 1`, the original computable cross norm test.
    CrossNorm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub criterion: Criterion,
    pub k: usize,
    pub value: f64,
    pub threshold: f64,
    /// `value > threshold + tol`; a detection certifies `SN(ρ) > k`.
    pub detected: bool,
    /// Whether the filtered state contributed to `value`.
    pub filtered: bool,
    pub tol: f64,
    pub unfiltered_value: f64,
    pub filtered_value: Option<f64>,
    pub filter_converged: Option<bool>,
    pub filter_iterations: Option<usize>,
    /// Why the filter path was dropped, if it was.
    pub filter_error: Option<String>,
}

impl DetectionReport {
    fn plain(criterion: Criterion, k: usize, value: f64, threshold: f64, tol: f64) -> Self {
        Self {
            criterion,
            k,
            value,
            threshold,
            detected: value > threshold + tol,
            filtered: false,
            tol,
            unfiltered_value: value,
            filtered_value: None,
            filter_converged: None,
            filter_iterations: None,
            filter_error: None,
        }
    }
}

/// `‖L(ρ)‖°_(k²,2)`. Valid on any operator; the detection meaning needs a density.
pub fn realignment_value(rho: &BipartiteOperator, k: usize) -> Result<f64> {
    check_k(k, rho.min_dim())?;
    k2_dual(&linalg::realign(rho), k * k)
}

/// Generalized realignment test, optionally also run on the locally filtered
/// state. Local filters cannot raise the Schmidt number, so a detection on
/// either path is sound and the larger value is reported.
pub fn detect_schmidt_number(rho: &BipartiteOperator, k: usize, use_filter: bool, tol: f64) -> Result<DetectionReport> {
    rho.require_density(1e-9)?;
    let unfiltered = realignment_value(rho, k)?;
    let mut report = DetectionReport::plain(Criterion::GenRealign, k, unfiltered, 1.0, tol);
    if !use_filter {
        return Ok(report);
    }
    match local_filter(rho, DEFAULT_FILTER_TOL, DEFAULT_FILTER_ITERS).and_then(|f| Ok((realignment_value(&f.rho, k)?, f))) {
        Ok((value, f)) => {
            report.filtered_value = Some(value);
            report.filter_converged = Some(f.converged);
            report.filter_iterations = Some(f.iterations);
            if value > unfiltered {
                report.value = value;
                report.filtered = true;
                report.detected = value > 1.0 + tol;
            }
        }
        Err(e) => report.filter_error = Some(e.to_string()),
    }
    Ok(report)
}

/// `‖L(ρ)‖_tr ≤ k`. Since `‖·‖_tr ≤ k ‖·‖°_(k²,2)` on the realigned matrix, the
/// margin is scaled by `k` so that every detection here is also one of
/// [`detect_schmidt_number`] at the same `tol`.
pub fn weak_realignment(rho: &BipartiteOperator, k: usize, tol: f64) -> Result<DetectionReport> {
    rho.require_density(1e-9)?;
    check_k(k, rho.min_dim())?;
    let value = linalg::trace_norm(&linalg::realign(rho))?;
    Ok(DetectionReport::plain(Criterion::WeakRealign, k, value, k as f64, k as f64 * tol))
}

/// `‖L(ρ)‖_tr ≤ 1` for separable `ρ`.
pub fn cross_norm_test(rho: &BipartiteOperator, tol: f64) -> Result<DetectionReport> {
    let mut report = weak_realignment(rho, 1, tol)?;
    report.criterion = Criterion::CrossNorm;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SrVerdict {
    SrAtMostK,
    SrExceedsK,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PureSrTest {
    pub verdict: SrVerdict,
    pub value: f64,
}

/// On pure states the realignment bound is an exact test:
/// `SR(v) ≤ k ⇔ ‖L(|v⟩⟨v|)‖°_(k²,2) ≤ 1`.
pub fn pure_state_sr_test(v: &PureState, k: usize, tol: f64) -> Result<PureSrTest> {
    if v.norm() == 0.0 {
        return Err(Error::DegenerateInput("Schmidt rank test on the zero vector".into()));
    }
    if !v.is_normalized() {
        return Err(Error::Precondition("Schmidt rank test needs a unit vector".into()));
    }
    let value = realignment_value(&v.projector(), k)?;
    let verdict = if value <= 1.0 + tol { SrVerdict::SrAtMostK } else { SrVerdict::SrExceedsK };
    Ok(PureSrTest { verdict, value })
}

pub const DEFAULT_FILTER_TOL: f64 = 1e-9;
pub const DEFAULT_FILTER_ITERS: usize = 200;

#[derive(Debug, Clone)]
pub struct FilterResult {
    pub rho: BipartiteOperator,
    /// Accumulated local maps: `ρ' ∝ (f_a ⊗ f_b) ρ (f_a ⊗ f_b)†`.
    pub f_a: ComplexMatrix,
    pub f_b: ComplexMatrix,
    pub converged: bool,
    pub iterations: usize,
}

/// Relative eigenvalue cut defining the support of a marginal.
const SUPPORT_TOL: f64 = 1e-12;

/// `(P^{-1/2}, rank)` with the inverse square root taken on the support.
fn inv_sqrt_on_support(h: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix, usize)> {
    let eig = linalg::eig_hermitian(h)?;
    let cut = SUPPORT_TOL * eig.max().max(0.0);
    let d = h.nrows();
    let mut inv = ComplexMatrix::zeros(d, d);
    let mut proj = ComplexMatrix::zeros(d, d);
    let mut rank = 0;
    for (i, &l) in eig.values.iter().enumerate() {
        if l > cut {
            let u = eig.vector(i);
            let p = &u * u.adjoint();
            inv += p.scale(1.0 / l.sqrt());
            proj += p;
            rank += 1;
        }
    }
    if rank == 0 {
        return Err(Error::DegenerateInput("marginal has empty support".into()));
    }
    Ok((inv, proj, rank))
}

fn marginal_defect(marg: &ComplexMatrix) -> Result<f64> {
    let (_, proj, rank) = inv_sqrt_on_support(marg)?;
    Ok((marg - proj.scale(1.0 / rank as f64)).norm())
}

/// Alternately whitens the two marginals on their supports, renormalizing
/// the trace after each half-step, until both are within `tol` (Frobenius) of
/// the maximally mixed state on their support.
pub fn local_filter(rho: &BipartiteOperator, tol: f64, max_iter: usize) -> Result<FilterResult> {
    rho.require_density(1e-9)?;
    let (m, n) = rho.dims();
    let mut cur = rho.mat().clone();
    let mut f_a = ComplexMatrix::identity(m, m);
    let mut f_b = ComplexMatrix::identity(n, n);
    let im = ComplexMatrix::identity(m, m);
    let in_ = ComplexMatrix::identity(n, n);
    let defects = |x: &ComplexMatrix| -> Result<(f64, f64)> {
        let op = BipartiteOperator::new(x.clone(), m, n)?;
        Ok((marginal_defect(&linalg::partial_trace(&op, Factor::B))?, marginal_defect(&linalg::partial_trace(&op, Factor::A))?))
    };
    let apply = |x: &ComplexMatrix, g: &ComplexMatrix| -> Result<ComplexMatrix> {
        let y = g * x * g.adjoint();
        let y = (&y + y.adjoint()).scale(0.5);
        let t = y.trace().re;
        if !(t > 0.0) {
            return Err(Error::NumericalFailure("filtered state lost its trace".into()));
        }
        Ok(y.unscale(t))
    };
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..=max_iter {
        let (da, db) = defects(&cur)?;
        if da <= tol && db <= tol {
            converged = true;
            break;
        }
        if iterations == max_iter {
            break;
        }
        iterations += 1;
        let op = BipartiteOperator::new(cur.clone(), m, n)?;
        let (a, _, _) = inv_sqrt_on_support(&linalg::partial_trace(&op, Factor::B))?;
        cur = apply(&cur, &linalg::kron(&a, &in_)?)?;
        f_a = &a * f_a;
        let op = BipartiteOperator::new(cur.clone(), m, n)?;
        let (b, _, _) = inv_sqrt_on_support(&linalg::partial_trace(&op, Factor::A))?;
        cur = apply(&cur, &linalg::kron(&im, &b)?)?;
        f_b = &b * f_b;
    }
    Ok(FilterResult { rho: BipartiteOperator::new_hermitian(cur, m, n)?, f_a, f_b, converged, iterations })
}
