//! Dense complex matrix kernels and the structural maps on `C^m ⊗ C^n`.
//!
//! Composite indices always use row-major pairing: the basis vector
//! `|i⟩ ⊗ |k⟩` with `i < m`, `k < n` sits at position `i * n + k`.

use std::sync::atomic::{AtomicBool, Ordering};

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Largest side length any constructed matrix may have.
pub const MAX_SIDE: usize = 4096;

/// Relative tolerance for treating an operator as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

static KERNEL_FAULT: AtomicBool = AtomicBool::new(false);

/// Makes every SVD and eigendecomposition call report a numerical failure
/// until switched off again. Exists so the failure paths of callers (and the
/// CLI's exit code for kernel failures) can be exercised deterministically.
pub fn set_kernel_fault(on: bool) {
    KERNEL_FAULT.store(on, Ordering::SeqCst);
}

fn check_fault(kernel: &str) -> Result<()> {
    if KERNEL_FAULT.load(Ordering::SeqCst) {
        Err(Error::NumericalFailure(format!("{kernel} disabled by injected fault")))
    } else {
        Ok(())
    }
}

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Checks that every entry is finite.
pub fn check_finite(x: &ComplexMatrix) -> Result<()> {
    if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Precondition("matrix has non-finite entries".into()))
    }
}

/// Builds a matrix from row-major entries.
pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<ComplexMatrix> {
    if entries.len() != rows * cols {
        return Err(Error::Size(format!(
            "expected {} entries for a {rows}x{cols} matrix, got {}",
            rows * cols,
            entries.len()
        )));
    }
    let m = ComplexMatrix::from_row_slice(rows, cols, entries);
    check_finite(&m)?;
    Ok(m)
}

fn max_abs(x: &ComplexMatrix) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation `max |x - x†|`.
pub fn hermitian_defect(x: &ComplexMatrix) -> f64 {
    if !x.is_square() {
        return f64::INFINITY;
    }
    let n = x.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((x[(i, j)] - x[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn is_hermitian(x: &ComplexMatrix) -> bool {
    hermitian_defect(x) <= HERMITIAN_TOL * max_abs(x).max(1.0)
}

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    A,
    B,
}

/// A square operator on `C^m ⊗ C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteOperator {
    mat: ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    hermitian: bool,
}

impl BipartiteOperator {
    /// Wraps `mat`, detecting the Hermitian flag from the entries.
    pub fn new(mat: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::Parameter("local dimensions must be positive".into()));
        }
        let side = dim_a
            .checked_mul(dim_b)
            .filter(|&s| s <= MAX_SIDE)
            .ok_or_else(|| Error::Size(format!("{dim_a}x{dim_b} exceeds side cap {MAX_SIDE}")))?;
        if mat.nrows() != side || mat.ncols() != side {
            return Err(Error::Size(format!(
                "operator on C^{dim_a} ⊗ C^{dim_b} must be {side}x{side}, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        check_finite(&mat)?;
        let hermitian = is_hermitian(&mat);
        Ok(Self { mat, dim_a, dim_b, hermitian })
    }

    /// Like [`new`](Self::new) but fails unless the input is Hermitian within tolerance.
    pub fn new_hermitian(mat: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        let op = Self::new(mat, dim_a, dim_b)?;
        if !op.hermitian {
            return Err(Error::Precondition(format!(
                "operator is not Hermitian (defect {:.3e})",
                hermitian_defect(&op.mat)
            )));
        }
        Ok(op)
    }

    /// Replaces the matrix by its Hermitian part. Only used on explicit opt-in.
    pub fn symmetrized(&self) -> Self {
        let h = (&self.mat + self.mat.adjoint()).scale(0.5);
        Self { mat: h, dim_a: self.dim_a, dim_b: self.dim_b, hermitian: true }
    }

    pub fn identity(dim_a: usize, dim_b: usize) -> Result<Self> {
        let side = dim_a * dim_b;
        Self::new(ComplexMatrix::identity(side, side), dim_a, dim_b)
    }

    pub fn zeros(dim_a: usize, dim_b: usize) -> Result<Self> {
        let side = dim_a * dim_b;
        Self::new(ComplexMatrix::zeros(side, side), dim_a, dim_b)
    }

    /// `|v⟩⟨w|` for two vectors on the same bipartite space.
    pub fn ket_bra(v: &ComplexVector, w: &ComplexVector, dim_a: usize, dim_b: usize) -> Result<Self> {
        Self::new(v * w.adjoint(), dim_a, dim_b)
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> ComplexMatrix {
        self.mat
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

    pub fn side(&self) -> usize {
        self.dim_a * self.dim_b
    }

    /// `min(m, n)`, the largest admissible Schmidt rank.
    pub fn min_dim(&self) -> usize {
        self.dim_a.min(self.dim_b)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn require_hermitian(&self) -> Result<()> {
        if self.hermitian {
            Ok(())
        } else {
            Err(Error::Precondition("operator must be Hermitian".into()))
        }
    }

    /// Same operator with another matrix of identical shape.
    pub fn with_mat(&self, mat: ComplexMatrix) -> Result<Self> {
        Self::new(mat, self.dim_a, self.dim_b)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { mat: self.mat.scale(s), ..self.clone() }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Checks that the operator is a density matrix: Hermitian, PSD and unit trace within `tol`.
    pub fn require_density(&self, tol: f64) -> Result<()> {
        self.require_hermitian()?;
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::Precondition(format!("density matrix must have unit trace, got {tr}")));
        }
        let eig = eig_hermitian(&self.mat)?;
        let lmin = eig.values.last().copied().unwrap_or(0.0);
        if lmin < -tol {
            return Err(Error::Precondition(format!(
                "density matrix must be positive semidefinite, min eigenvalue {lmin:.3e}"
            )));
        }
        Ok(())
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.nrows().checked_mul(b.nrows());
    let cols = a.ncols().checked_mul(b.ncols());
    match (rows, cols) {
        (Some(r), Some(c)) if r <= MAX_SIDE && c <= MAX_SIDE => Ok(a.kronecker(b)),
        _ => Err(Error::Size(format!(
            "kron of {}x{} and {}x{} exceeds side cap {MAX_SIDE}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        ))),
    }
}

/// Kronecker product of two vectors, `|a⟩ ⊗ |b⟩`.
pub fn kron_vec(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    let n = b.len();
    ComplexVector::from_fn(a.len() * n, |idx, _| a[idx / n] * b[idx % n])
}

/// Trace over the named factor.
pub fn partial_trace(x: &BipartiteOperator, which: Factor) -> ComplexMatrix {
    let (m, n) = x.dims();
    let mat = x.mat();
    match which {
        Factor::B => ComplexMatrix::from_fn(m, m, |i, j| (0..n).map(|k| mat[(i * n + k, j * n + k)]).sum()),
        Factor::A => ComplexMatrix::from_fn(n, n, |k, l| (0..m).map(|i| mat[(i * n + k, i * n + l)]).sum()),
    }
}

/// `(id ⊗ T)(x)`.
pub fn partial_transpose(x: &BipartiteOperator) -> BipartiteOperator {
    let (m, n) = x.dims();
    let mat = x.mat();
    let out = ComplexMatrix::from_fn(m * n, m * n, |row, col| {
        let (i, k) = (row / n, row % n);
        let (j, l) = (col / n, col % n);
        mat[(i * n + l, j * n + k)]
    });
    BipartiteOperator { mat: out, dim_a: m, dim_b: n, hermitian: x.hermitian }
}

/// Full transpose `xᵀ` on the same bipartite space.
pub fn transpose(x: &BipartiteOperator) -> BipartiteOperator {
    BipartiteOperator { mat: x.mat.transpose(), ..x.clone() }
}

/// Swap operator on `C^n ⊗ C^n`: `S(a ⊗ b) = b ⊗ a`.
pub fn swap_operator(n: usize) -> Result<BipartiteOperator> {
    if n == 0 {
        return Err(Error::Parameter("swap operator needs n >= 1".into()));
    }
    let side = n * n;
    if side > MAX_SIDE {
        return Err(Error::Size(format!("swap on {n}x{n} exceeds side cap")));
    }
    let mut s = ComplexMatrix::zeros(side, side);
    for a in 0..n {
        for b in 0..n {
            s[(b * n + a, a * n + b)] = c(1.0, 0.0);
        }
    }
    BipartiteOperator::new(s, n, n)
}

/// Realignment: the `m² × n²` matrix with `L[(i,j),(k,l)] = x[(i,k),(j,l)]`.
pub fn realign(x: &BipartiteOperator) -> ComplexMatrix {
    let (m, n) = x.dims();
    let mat = x.mat();
    ComplexMatrix::from_fn(m * m, n * n, |row, col| {
        let (i, j) = (row / m, row % m);
        let (k, l) = (col / n, col % n);
        mat[(i * n + k, j * n + l)]
    })
}

/// Inverse of [`realign`].
pub fn unrealign(l: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<BipartiteOperator> {
    let (m, n) = (dim_a, dim_b);
    if l.nrows() != m * m || l.ncols() != n * n {
        return Err(Error::Size(format!(
            "realigned matrix for {m}⊗{n} must be {}x{}, got {}x{}",
            m * m,
            n * n,
            l.nrows(),
            l.ncols()
        )));
    }
    let mat = ComplexMatrix::from_fn(m * n, m * n, |row, col| {
        let (i, k) = (row / n, row % n);
        let (j, l_) = (col / n, col % n);
        l[(i * m + j, k * n + l_)]
    });
    BipartiteOperator::new(mat, m, n)
}

/// Hilbert–Schmidt inner product `⟨a, b⟩ = Tr(a† b)`.
pub fn inner(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Thin singular value decomposition `x = u · diag(sigma) · v†`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Left singular vectors as columns (`rows × r`).
    pub u: ComplexMatrix,
    /// Singular values, descending.
    pub sigma: Vec<f64>,
    /// Right singular vectors as columns (`cols × r`).
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn rank(&self, rel_tol: f64) -> usize {
        let top = self.sigma.first().copied().unwrap_or(0.0);
        self.sigma.iter().filter(|&&s| s > rel_tol * top && s > 0.0).count()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut us = self.u.clone();
        for (j, s) in self.sigma.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.v.adjoint()
    }
}

pub fn svd(x: &ComplexMatrix) -> Result<Svd> {
    let r = x.nrows().min(x.ncols());
    if r == 0 {
        return Err(Error::DegenerateInput("svd of an empty matrix".into()));
    }
    check_finite(x)?;
    check_fault("svd")?;
    let a = faer::Mat::<C64>::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, j)]);
    let dec = a.thin_svd().map_err(|e| Error::NumericalFailure(format!("svd did not converge: {e:?}")))?;
    let (fu, fs, fv) = (dec.U(), dec.S().column_vector(), dec.V());
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| fs[b].re.total_cmp(&fs[a].re));
    let sigma = order.iter().map(|&i| fs[i].re.max(0.0)).collect();
    let u = ComplexMatrix::from_fn(x.nrows(), r, |row, j| fu[(row, order[j])]);
    let v = ComplexMatrix::from_fn(x.ncols(), r, |row, j| fv[(row, order[j])]);
    let out = Svd { u, sigma, v };
    if (out.reconstruct() - x).norm() > SVD_RESIDUAL * x.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::NumericalFailure("svd failed its reconstruction check".into()));
    }
    Ok(out)
}

/// Relative Frobenius residual accepted from the SVD kernel.
const SVD_RESIDUAL: f64 = 1e-11;

pub fn singular_values(x: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(x)?.sigma)
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, i: usize) -> ComplexVector {
        self.vectors.column(i).into_owned()
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

pub fn eig_hermitian(x: &ComplexMatrix) -> Result<HermitianEigen> {
    if !x.is_square() || x.nrows() == 0 {
        return Err(Error::Precondition("eigendecomposition needs a nonempty square matrix".into()));
    }
    check_finite(x)?;
    if !is_hermitian(x) {
        return Err(Error::Precondition(format!(
            "matrix is not Hermitian (defect {:.3e})",
            hermitian_defect(x)
        )));
    }
    check_fault("eigensolver")?;
    let h = (x + x.adjoint()).scale(0.5);
    let dec = nalgebra::SymmetricEigen::try_new(h, 5.0 * f64::EPSILON, 0)
        .ok_or_else(|| Error::NumericalFailure("Hermitian eigensolver did not converge".into()))?;
    let n = x.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dec.eigenvalues[b].total_cmp(&dec.eigenvalues[a]));
    let values = order.iter().map(|&i| dec.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |row, j| dec.eigenvectors[(row, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Operator, trace and Frobenius norms of a matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixNorms {
    pub operator: f64,
    pub trace: f64,
    pub frobenius: f64,
}

pub fn matrix_norms(x: &ComplexMatrix) -> Result<MatrixNorms> {
    let sigma = singular_values(x)?;
    Ok(MatrixNorms {
        operator: sigma[0],
        trace: sigma.iter().sum(),
        frobenius: sigma.iter().map(|s| s * s).sum::<f64>().sqrt(),
    })
}

pub fn operator_norm(x: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(x)?[0])
}

pub fn trace_norm(x: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(x)?.iter().sum())
}
