//! Seeded random ensembles: Haar vectors and unitaries, bounded Schmidt rank
//! and Schmidt number, isotropic and Ginibre densities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, BipartiteOperator, ComplexMatrix, ComplexVector, C64};
use crate::schmidt::PureState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    HaarPure,
    MaxEntangled,
    Isotropic,
    SrBoundedPure,
    SnBoundedDensity,
    GinibreDensity,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 6] = [
        EnsembleKind::HaarPure,
        EnsembleKind::MaxEntangled,
        EnsembleKind::Isotropic,
        EnsembleKind::SrBoundedPure,
        EnsembleKind::SnBoundedDensity,
        EnsembleKind::GinibreDensity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::HaarPure => "haar_pure",
            EnsembleKind::MaxEntangled => "max_entangled",
            EnsembleKind::Isotropic => "isotropic",
            EnsembleKind::SrBoundedPure => "sr_bounded_pure",
            EnsembleKind::SnBoundedDensity => "sn_bounded_density",
            EnsembleKind::GinibreDensity => "ginibre_density",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Parameters for [`generate`]. Fields irrelevant to `kind` are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub dim_a: usize,
    pub dim_b: usize,
    pub k: Option<usize>,
    pub p: Option<f64>,
    pub rank: Option<usize>,
    pub terms: Option<usize>,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, dim_a: usize, dim_b: usize, seed: u64) -> Self {
        Self { kind, dim_a, dim_b, k: None, p: None, rank: None, terms: None, seed }
    }
}

#[derive(Debug, Clone)]
pub enum Generated {
    Pure(PureState),
    Operator(BipartiteOperator),
}

pub fn generate(spec: &EnsembleSpec) -> Result<Generated> {
    let (m, n) = (spec.dim_a, spec.dim_b);
    if m == 0 || n == 0 {
        return Err(Error::Parameter("local dimensions must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let need = |v: Option<usize>, what: &str| {
        v.ok_or_else(|| Error::Parameter(format!("{} requires `{what}`", spec.kind.name())))
    };
    Ok(match spec.kind {
        EnsembleKind::HaarPure => Generated::Pure(haar_pure(m, n, &mut rng)?),
        EnsembleKind::MaxEntangled => {
            if m != n {
                return Err(Error::Parameter("max_entangled requires m = n".into()));
            }
            Generated::Pure(PureState::max_entangled(n)?)
        }
        EnsembleKind::Isotropic => {
            if m != n {
                return Err(Error::Parameter("isotropic requires m = n".into()));
            }
            let p = spec.p.ok_or_else(|| Error::Parameter("isotropic requires `p`".into()))?;
            Generated::Operator(isotropic(n, p)?)
        }
        EnsembleKind::SrBoundedPure => Generated::Pure(sr_bounded_pure(m, n, need(spec.k, "k")?, &mut rng)?),
        EnsembleKind::SnBoundedDensity => {
            let terms = spec.terms.unwrap_or(m * n);
            Generated::Operator(sn_bounded_density(m, n, need(spec.k, "k")?, terms, &mut rng)?)
        }
        EnsembleKind::GinibreDensity => {
            let rank = spec.rank.unwrap_or(m * n);
            Generated::Operator(ginibre_density(m, n, rank, &mut rng)?)
        }
    })
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vector(len: usize, rng: &mut ChaCha8Rng) -> ComplexVector {
    ComplexVector::from_fn(len, |_, _| gaussian(rng))
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random `n × n` unitary: QR of a Ginibre matrix with `R`'s diagonal phases
/// moved into `Q`.
pub fn haar_unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let qr = gaussian_matrix(n, n, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

pub fn haar_pure(m: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<PureState> {
    PureState::normalized_from(gaussian_vector(m * n, rng), m, n)
}

/// `Σ_{i≤k} gᵢ aᵢ ⊗ bᵢ` with Haar frames and Gaussian weights, normalized.
/// Schmidt rank is exactly `k` with probability one.
pub fn sr_bounded_pure(m: usize, n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<PureState> {
    crate::schmidt::check_k(k, m.min(n))?;
    let ua = haar_unitary(m, rng);
    let ub = haar_unitary(n, rng);
    let mut amps = ComplexVector::zeros(m * n);
    for i in 0..k {
        let g = gaussian(rng);
        amps += crate::linalg::kron_vec(&ua.column(i).into_owned(), &ub.column(i).into_owned()) * g;
    }
    PureState::normalized_from(amps, m, n)
}

/// Uniform point of the probability simplex.
pub fn dirichlet_weights(terms: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let e: Vec<f64> = (0..terms).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

/// Mixture of `terms` projectors onto [`sr_bounded_pure`] vectors, so the
/// Schmidt number is at most `k`.
pub fn sn_bounded_density(m: usize, n: usize, k: usize, terms: usize, rng: &mut ChaCha8Rng) -> Result<BipartiteOperator> {
    if terms == 0 {
        return Err(Error::Parameter("terms must be at least 1".into()));
    }
    let weights = dirichlet_weights(terms, rng);
    let mut rho = ComplexMatrix::zeros(m * n, m * n);
    for w in weights {
        let v = sr_bounded_pure(m, n, k, rng)?;
        rho += v.projector().mat().scale(w);
    }
    BipartiteOperator::new_hermitian(rho, m, n).map(|r| r.symmetrized())
}

/// `GG† / Tr(GG†)` for a Gaussian `mn × rank` matrix `G`.
pub fn ginibre_density(m: usize, n: usize, rank: usize, rng: &mut ChaCha8Rng) -> Result<BipartiteOperator> {
    if rank == 0 || rank > m * n {
        return Err(Error::Parameter(format!("rank must lie in 1..={}, got {rank}", m * n)));
    }
    let g = gaussian_matrix(m * n, rank, rng);
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    BipartiteOperator::new_hermitian(gg.unscale(tr), m, n).map(|r| r.symmetrized())
}

/// `p Φ + (1 − p) I/n²` with `Φ` the maximally entangled projector.
pub fn isotropic(n: usize, p: f64) -> Result<BipartiteOperator> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(format!("p must lie in [0, 1], got {p}")));
    }
    let phi = PureState::max_entangled(n)?.projector();
    let d = (n * n) as f64;
    let mat = phi.mat().scale(p) + ComplexMatrix::identity(n * n, n * n).scale((1.0 - p) / d);
    BipartiteOperator::new_hermitian(mat, n, n)
}
