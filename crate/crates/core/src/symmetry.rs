//! Invariance checks for the closed-form norm values under the known
//! isometries: local unitaries `U ⊗ V`, the swap, entrywise conjugation and
//! (at `k = 1` for `γ`, any `k` on product ket-bras for `S(k)`) the partial
//! transpose.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dualnorms::{gamma_pure, gamma_rank_one};
use crate::error::Result;
use crate::linalg::{self, BipartiteOperator};
use crate::schmidt::{check_k, schmidt_coefficients, PureState};
use crate::sknorm::{sk_elementary, sk_pure};
use crate::states::{gaussian_vector, haar_pure, haar_unitary};

/// Allowed deviation on the rotation, swap and conjugation checks.
pub const ROTATION_TOL: f64 = 1e-9;
/// Allowed deviation on the partial transpose checks.
pub const TRANSPOSE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceCheck {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub k: usize,
    pub dims: (usize, usize),
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<InvarianceCheck>,
    pub passed: bool,
}

struct Tally {
    name: &'static str,
    tol: f64,
    worst: f64,
    samples: usize,
}

impl Tally {
    fn new(name: &'static str, tol: f64) -> Self {
        Self { name, tol, worst: 0.0, samples: 0 }
    }

    fn add(&mut self, a: f64, b: f64) {
        self.worst = self.worst.max((a - b).abs());
        self.samples += 1;
    }

    fn add_seq(&mut self, a: &[f64], b: &[f64]) {
        let d = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let len_gap = if a.len() == b.len() { 0.0 } else { f64::INFINITY };
        self.worst = self.worst.max(d).max(len_gap);
        self.samples += 1;
    }

    fn finish(self) -> InvarianceCheck {
        InvarianceCheck {
            name: self.name,
            max_deviation: self.worst,
            tolerance: self.tol,
            passed: self.worst <= self.tol,
            samples: self.samples,
        }
    }
}

/// `S(k)` value of the product ket-bra `X^Γ` obtained from the matrix itself:
/// the partial transpose of a product ket-bra is again rank one, so the
/// leading singular pair recovers its factors.
fn sk_of_rank_one(x: &BipartiteOperator, k: usize) -> Result<f64> {
    let (m, n) = x.dims();
    let dec = linalg::svd(x.mat())?;
    let u = PureState::unnormalized(dec.u.column(0).into_owned(), m, n)?;
    let v = PureState::unnormalized(dec.v.column(0).into_owned(), m, n)?;
    Ok(dec.sigma[0] * sk_elementary(&u, &v, k)?)
}

fn gamma_of_rank_one(x: &BipartiteOperator, k: usize) -> Result<f64> {
    let (m, n) = x.dims();
    let dec = linalg::svd(x.mat())?;
    let u = PureState::unnormalized(dec.u.column(0).into_owned(), m, n)?;
    let v = PureState::unnormalized(dec.v.column(0).into_owned(), m, n)?;
    Ok(dec.sigma[0] * gamma_rank_one(&u, &v, k)?)
}

/// Runs `trials` seeded rounds of every invariance check on `m ⊗ n`.
pub fn invariance_suite(k: usize, trials: usize, seed: u64, m: usize, n: usize) -> Result<InvarianceReport> {
    check_k(k, m.min(n))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeff_rot = Tally::new("schmidt_coefficients_local_unitary", ROTATION_TOL);
    let mut coeff_swap = Tally::new("schmidt_coefficients_swap", ROTATION_TOL);
    let mut sk_rot = Tally::new("sk_pure_local_unitary", ROTATION_TOL);
    let mut sk_swap = Tally::new("sk_pure_swap", ROTATION_TOL);
    let mut sk_conj = Tally::new("sk_pure_conjugate", ROTATION_TOL);
    let mut g_rot = Tally::new("gamma_pure_local_unitary", ROTATION_TOL);
    let mut g_swap = Tally::new("gamma_pure_swap", ROTATION_TOL);
    let mut g_conj = Tally::new("gamma_pure_conjugate", ROTATION_TOL);
    let mut el_rot = Tally::new("sk_elementary_local_unitary", ROTATION_TOL);
    let mut gr_rot = Tally::new("gamma_rank_one_local_unitary", ROTATION_TOL);
    let mut el_pt = Tally::new("sk_elementary_partial_transpose", TRANSPOSE_TOL);
    let mut gr_pt = Tally::new("gamma_rank_one_partial_transpose", TRANSPOSE_TOL);

    for _ in 0..trials {
        let v = haar_pure(m, n, &mut rng)?;
        let w = haar_pure(m, n, &mut rng)?;
        let (u1, u2) = (haar_unitary(m, &mut rng), haar_unitary(n, &mut rng));
        let rv = v.apply_local(&u1, &u2)?;
        let rw = w.apply_local(&u1, &u2)?;

        let alpha = schmidt_coefficients(&v)?;
        coeff_rot.add_seq(&alpha, &schmidt_coefficients(&rv)?);
        coeff_swap.add_seq(&alpha, &schmidt_coefficients(&v.swapped())?);

        let s = sk_pure(&v, k)?;
        sk_rot.add(s, sk_pure(&rv, k)?);
        sk_swap.add(s, sk_pure(&v.swapped(), k)?);
        sk_conj.add(s, sk_pure(&v.conjugated(), k)?);

        let g = gamma_pure(&v, k)?;
        g_rot.add(g, gamma_pure(&rv, k)?);
        g_swap.add(g, gamma_pure(&v.swapped(), k)?);
        g_conj.add(g, gamma_pure(&v.conjugated(), k)?);

        el_rot.add(sk_elementary(&v, &w, k)?, sk_elementary(&rv, &rw, k)?);
        gr_rot.add(gamma_rank_one(&v, &w, k)?, gamma_rank_one(&rv, &rw, k)?);

        // elementary tensor |a⟩⟨c| ⊗ |b⟩⟨d| with unnormalized factors
        let (a, b) = (gaussian_vector(m, &mut rng), gaussian_vector(n, &mut rng));
        let (cc, d) = (gaussian_vector(m, &mut rng), gaussian_vector(n, &mut rng));
        let ket = PureState::unnormalized(linalg::kron_vec(&a, &b), m, n)?;
        let bra = PureState::unnormalized(linalg::kron_vec(&cc, &d), m, n)?;
        let x = BipartiteOperator::ket_bra(ket.amplitudes(), bra.amplitudes(), m, n)?;
        let xt = linalg::partial_transpose(&x);
        el_pt.add(sk_elementary(&ket, &bra, k)?, sk_of_rank_one(&xt, k)?);
        gr_pt.add(gamma_rank_one(&ket, &bra, 1)?, gamma_of_rank_one(&xt, 1)?);
    }

    let checks: Vec<InvarianceCheck> = [coeff_rot, coeff_swap, sk_rot, sk_swap, sk_conj, g_rot, g_swap, g_conj, el_rot, gr_rot, el_pt, gr_pt]
        .into_iter()
        .map(Tally::finish)
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    Ok(InvarianceReport { k, dims: (m, n), trials, seed, checks, passed })
}
