//! Certified two-sided bounds on a norm value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Width below which an interval is reported as an exact value.
pub const EXACT_WIDTH: f64 = 1e-9;
/// Relative overshoot of a lower bound past an upper bound that is attributed
/// to rounding and clamped rather than reported as an inconsistency.
const OVERSHOOT: f64 = 1e-9;

/// How a bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Closed-form value on a pure or rank-one input.
    ExactFormula,
    OperatorNorm,
    TraceNorm,
    /// Best pair found by alternating Schmidt-truncated maximization.
    SeeSaw,
    /// Triangle inequality over the singular value decomposition.
    SvdSplit,
    /// Triangle inequality over the eigendecomposition.
    EigenSplit,
    /// `Y ≤ tI + Σ_{λᵢ>t} (λᵢ − t)|uᵢ⟩⟨uᵢ|` in the positive semidefinite order.
    SpectralShift,
    /// Sum of entry moduli: every matrix unit is a product ket-bra.
    EntrywiseL1,
    /// Dual `(k²,2)` value of the realigned operator.
    Realignment,
    /// Pairing with an operator of certified dual-side norm.
    Witness,
    /// Linear program over sampled Schmidt-rank-`k` ket-bras.
    LpOracle,
    /// Bisection on block positivity of `sI ± X`.
    Bisection,
    /// Eigenvectors all have Schmidt rank at most `k`.
    SchmidtRankDecomposition,
    /// Trivial bound (zero operator, nonnegativity).
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormInterval {
    pub lower: f64,
    pub upper: f64,
    pub lower_method: Method,
    pub upper_method: Method,
    pub exact: bool,
}

impl NormInterval {
    /// Best lower and upper bound among the candidates. Fails if the best
    /// lower bound exceeds the best upper bound beyond rounding, which means
    /// one of the bounds is wrong.
    pub fn from_candidates(lowers: &[(f64, Method)], uppers: &[(f64, Method)]) -> Result<Self> {
        let pick = |c: &[(f64, Method)], better: fn(f64, f64) -> bool| -> Result<(f64, Method)> {
            let mut it = c.iter().filter(|(v, _)| v.is_finite());
            let first = *it.next().ok_or_else(|| Error::NumericalFailure("no finite bound candidates".into()))?;
            Ok(it.fold(first, |best, &cand| if better(cand.0, best.0) { cand } else { best }))
        };
        let (mut lower, lower_method) = pick(lowers, |a, b| a > b)?;
        let (upper, upper_method) = pick(uppers, |a, b| a < b)?;
        if lower > upper {
            if lower - upper > OVERSHOOT * upper.abs().max(1.0) {
                return Err(Error::NumericalFailure(format!(
                    "inconsistent bounds: lower {lower} ({lower_method:?}) > upper {upper} ({upper_method:?})"
                )));
            }
            lower = upper;
        }
        Ok(Self { lower, upper, lower_method, upper_method, exact: upper - lower <= EXACT_WIDTH })
    }

    pub fn exact(value: f64, method: Method) -> Self {
        Self { lower: value, upper: value, lower_method: method, upper_method: method, exact: true }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lower - tol && x <= self.upper + tol
    }

    pub fn overlaps(&self, other: &NormInterval, tol: f64) -> bool {
        self.lower <= other.upper + tol && other.lower <= self.upper + tol
    }

    pub fn scaled(&self, s: f64) -> Self {
        assert!(s >= 0.0);
        Self { lower: self.lower * s, upper: self.upper * s, ..*self }
    }
}
