//! Pure bipartite states, their Schmidt decomposition, and the `s(k)` vector
//! norm with its dual.

use crate::error::{Error, Result};
use crate::kyfan::break_index;
use crate::linalg::{self, BipartiteOperator, ComplexMatrix, ComplexVector};

/// Default relative tolerance for Schmidt rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

const NORMALIZATION_TOL: f64 = 1e-10;
const ZERO_NORM: f64 = 1e-12;

/// A vector in `C^m ⊗ C^n`, normalized unless constructed with
/// [`PureState::unnormalized`].
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: ComplexVector,
    dim_a: usize,
    dim_b: usize,
    normalized: bool,
}

impl PureState {
    /// Unit vector; fails if `‖amplitudes‖` deviates from 1 by more than 1e-10.
    pub fn new(amplitudes: ComplexVector, dim_a: usize, dim_b: usize) -> Result<Self> {
        let state = Self::unnormalized(amplitudes, dim_a, dim_b)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Precondition(format!("state vector has norm {norm}, expected 1")));
        }
        Ok(Self { normalized: true, ..state })
    }

    /// Any finite vector of the right length.
    pub fn unnormalized(amplitudes: ComplexVector, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::Parameter("local dimensions must be positive".into()));
        }
        if amplitudes.len() != dim_a * dim_b {
            return Err(Error::Size(format!(
                "state on C^{dim_a} ⊗ C^{dim_b} needs {} amplitudes, got {}",
                dim_a * dim_b,
                amplitudes.len()
            )));
        }
        if !amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Precondition("state vector has non-finite entries".into()));
        }
        Ok(Self { amplitudes, dim_a, dim_b, normalized: false })
    }

    /// Normalizes any nonzero vector.
    pub fn normalized_from(amplitudes: ComplexVector, dim_a: usize, dim_b: usize) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm <= ZERO_NORM {
            return Err(Error::DegenerateInput("cannot normalize the zero vector".into()));
        }
        Self::new(amplitudes.unscale(norm), dim_a, dim_b)
    }

    /// `|a⟩ ⊗ |b⟩`, normalized.
    pub fn product(a: &ComplexVector, b: &ComplexVector) -> Result<Self> {
        Self::normalized_from(linalg::kron_vec(a, b), a.len(), b.len())
    }

    /// Computational basis vector `|i⟩ ⊗ |k⟩`.
    pub fn basis(dim_a: usize, dim_b: usize, i: usize, k: usize) -> Result<Self> {
        if i >= dim_a || k >= dim_b {
            return Err(Error::Parameter(format!("basis index ({i},{k}) out of range")));
        }
        let mut amps = ComplexVector::zeros(dim_a * dim_b);
        amps[i * dim_b + k] = linalg::c(1.0, 0.0);
        Self::new(amps, dim_a, dim_b)
    }

    /// `Σ_{i<d} |ii⟩ / √d` on `C^d ⊗ C^d`.
    pub fn max_entangled(d: usize) -> Result<Self> {
        let mut amps = ComplexVector::zeros(d * d);
        let a = 1.0 / (d as f64).sqrt();
        for i in 0..d {
            amps[i * d + i] = linalg::c(a, 0.0);
        }
        Self::normalized_from(amps, d, d)
    }

    /// `Σ αᵢ |i⟩|i⟩` with the given coefficients.
    pub fn from_coefficients(coeffs: &[f64], dim_a: usize, dim_b: usize) -> Result<Self> {
        if coeffs.len() > dim_a.min(dim_b) {
            return Err(Error::Parameter("more coefficients than min(m, n)".into()));
        }
        let mut amps = ComplexVector::zeros(dim_a * dim_b);
        for (i, &a) in coeffs.iter().enumerate() {
            amps[i * dim_b + i] = linalg::c(a, 0.0);
        }
        Self::unnormalized(amps, dim_a, dim_b)
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn min_dim(&self) -> usize {
        self.dim_a.min(self.dim_b)
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Amplitudes reshaped to the `m × n` coefficient matrix.
    pub fn coefficient_matrix(&self) -> ComplexMatrix {
        let n = self.dim_b;
        ComplexMatrix::from_fn(self.dim_a, n, |i, k| self.amplitudes[i * n + k])
    }

    /// `|v⟩⟨v|`.
    pub fn projector(&self) -> BipartiteOperator {
        BipartiteOperator::ket_bra(&self.amplitudes, &self.amplitudes, self.dim_a, self.dim_b)
            .expect("projector dimensions follow from the state")
    }

    /// `(U ⊗ V)|v⟩` for square local matrices.
    pub fn apply_local(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<Self> {
        let coeff = u * self.coefficient_matrix() * v.transpose();
        let amps = ComplexVector::from_fn(self.dim_a * self.dim_b, |idx, _| coeff[(idx / self.dim_b, idx % self.dim_b)]);
        Ok(Self { amplitudes: amps, ..self.clone() })
    }

    /// Exchanges the two factors; the result lives on `C^n ⊗ C^m`.
    pub fn swapped(&self) -> Self {
        let (m, n) = self.dims();
        let amps = ComplexVector::from_fn(m * n, |idx, _| {
            let (k, i) = (idx / m, idx % m);
            self.amplitudes[i * n + k]
        });
        Self { amplitudes: amps, dim_a: n, dim_b: m, normalized: self.normalized }
    }

    /// Entrywise complex conjugate.
    pub fn conjugated(&self) -> Self {
        Self { amplitudes: self.amplitudes.map(|z| z.conj()), ..self.clone() }
    }

    fn check_k(&self, k: usize) -> Result<()> {
        check_k(k, self.min_dim())
    }
}

pub(crate) fn check_k(k: usize, min_dim: usize) -> Result<()> {
    if k == 0 || k > min_dim {
        Err(Error::Parameter(format!("k must lie in 1..={min_dim}, got {k}")))
    } else {
        Ok(())
    }
}

/// Schmidt decomposition `v = Σ αᵢ aᵢ ⊗ bᵢ` with `αᵢ > tol · α₁`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coeffs: Vec<f64>,
    /// Orthonormal vectors in `C^m`.
    pub left: Vec<ComplexVector>,
    /// Orthonormal vectors in `C^n`.
    pub right: Vec<ComplexVector>,
    pub tol: f64,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn reconstruct(&self) -> ComplexVector {
        let len = self.left[0].len() * self.right[0].len();
        let mut out = ComplexVector::zeros(len);
        for ((a, l), r) in self.coeffs.iter().zip(&self.left).zip(&self.right) {
            out += linalg::kron_vec(l, r).scale(*a);
        }
        out
    }
}

/// All `min(m, n)` Schmidt coefficients, descending, with matching frames.
fn full_schmidt(v: &PureState) -> Result<(Vec<f64>, linalg::Svd)> {
    let dec = linalg::svd(&v.coefficient_matrix())?;
    Ok((dec.sigma.clone(), dec))
}

/// All `min(m, n)` Schmidt coefficients of a (possibly unnormalized) vector, descending.
pub fn schmidt_coefficients(v: &PureState) -> Result<Vec<f64>> {
    Ok(full_schmidt(v)?.0)
}

pub fn schmidt_decompose(v: &PureState, tol: f64) -> Result<SchmidtDecomposition> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Parameter(format!("rank tolerance must lie in (0, 1), got {tol}")));
    }
    if v.norm() <= ZERO_NORM {
        return Err(Error::DegenerateInput("Schmidt decomposition of the zero vector".into()));
    }
    let (sigma, dec) = full_schmidt(v)?;
    let cut = tol * sigma[0];
    let keep = sigma.iter().take_while(|&&s| s > cut).count();
    // v = Σ σ u_i ⊗ conj(w_i) for the coefficient matrix V = U Σ W†.
    let left = (0..keep).map(|i| dec.u.column(i).into_owned()).collect();
    let right = (0..keep).map(|i| dec.v.column(i).map(|z| z.conj())).collect();
    Ok(SchmidtDecomposition { coeffs: sigma[..keep].to_vec(), left, right, tol })
}

pub fn schmidt_rank(v: &PureState, tol: f64) -> Result<usize> {
    Ok(schmidt_decompose(v, tol)?.rank())
}

/// Schmidt coefficients of a raw amplitude vector on `C^m ⊗ C^n`.
pub(crate) fn coefficients_of(amps: &ComplexVector, dim_a: usize, dim_b: usize) -> Result<Vec<f64>> {
    linalg::singular_values(&ComplexMatrix::from_fn(dim_a, dim_b, |i, j| amps[i * dim_b + j]))
}

/// `s(k)` norm of a raw amplitude vector; `k` is not range-checked.
pub(crate) fn s_k_of(amps: &ComplexVector, dim_a: usize, dim_b: usize, k: usize) -> Result<f64> {
    let alpha = coefficients_of(amps, dim_a, dim_b)?;
    Ok(alpha.iter().take(k).map(|a| a * a).sum::<f64>().sqrt())
}

/// Keeps the `k` largest Schmidt terms of an arbitrary vector, unnormalized.
pub(crate) fn truncate_vector(amps: &ComplexVector, dim_a: usize, dim_b: usize, k: usize) -> Result<ComplexVector> {
    let n = dim_b;
    let coeff = ComplexMatrix::from_fn(dim_a, n, |i, j| amps[i * n + j]);
    let dec = linalg::svd(&coeff)?;
    let mut out = ComplexVector::zeros(dim_a * n);
    for i in 0..k.min(dec.sigma.len()) {
        let s = dec.sigma[i];
        if s == 0.0 {
            break;
        }
        let u = dec.u.column(i);
        let w = dec.v.column(i);
        for a in 0..dim_a {
            for b in 0..n {
                out[a * n + b] += u[a] * w[b].conj() * s;
            }
        }
    }
    Ok(out)
}

/// Best Schmidt-rank-`k` approximation of `v`, renormalized.
pub fn schmidt_truncate(v: &PureState, k: usize) -> Result<PureState> {
    v.check_k(k)?;
    if v.norm() <= ZERO_NORM {
        return Err(Error::DegenerateInput("truncation of the zero vector".into()));
    }
    let t = truncate_vector(v.amplitudes(), v.dim_a, v.dim_b, k)?;
    PureState::normalized_from(t, v.dim_a, v.dim_b)
}

/// `‖v‖_{s(k)} = √(Σ_{i≤k} αᵢ²)`, the largest overlap with a Schmidt-rank-`k` unit vector.
pub fn s_k_norm(v: &PureState, k: usize) -> Result<f64> {
    v.check_k(k)?;
    let alpha = schmidt_coefficients(v)?;
    Ok(alpha[..k].iter().map(|a| a * a).sum::<f64>().sqrt())
}

/// Dual of the `s(k)` norm: `√(Σ_{i≤r} αᵢ² + (k − r) α̃²)`.
pub fn s_k_dual(v: &PureState, k: usize) -> Result<f64> {
    v.check_k(k)?;
    let alpha = schmidt_coefficients(v)?;
    Ok(dual_from_coefficients(&alpha, k)?)
}

/// The `(k,2)`-dual formula applied to a descending coefficient list.
pub(crate) fn dual_from_coefficients(alpha: &[f64], k: usize) -> Result<f64> {
    let br = break_index(alpha, k)?;
    let head: f64 = br.clamped[..br.r].iter().map(|a| a * a).sum();
    Ok((head + (k - br.r) as f64 * br.sigma_tilde * br.sigma_tilde).sqrt())
}
