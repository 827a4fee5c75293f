//! The projective tensor norm `γ,k` (dual of the `S(k)` norm) and the
//! robustness `R_k` (dual of the product numerical radius).
//!
//! `γ,k(X)` is the least `Σ cᵢ` over decompositions `X = Σ cᵢ |vᵢ⟩⟨wᵢ|` with
//! unit vectors of Schmidt rank at most `k`; `R_k(Y)` is the least `c₁ + c₂`
//! over splittings `Y = c₁ρ₁ − c₂ρ₂` into states of Schmidt number at most `k`.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Method, NormInterval};
use crate::kyfan::{break_index, k2_dual};
use crate::linalg::{self, c, BipartiteOperator, ComplexMatrix, ComplexVector};
use crate::schmidt::{self, check_k, s_k_dual, s_k_of, truncate_vector, PureState, DEFAULT_RANK_TOL};
use crate::sknorm::{radius_upper, sk_upper};
use crate::states::gaussian_vector;

/// `γ,k(|v⟩⟨v|) = (‖v‖°_{s(k)})²`.
pub fn gamma_pure(v: &PureState, k: usize) -> Result<f64> {
    Ok(s_k_dual(v, k)?.powi(2))
}

/// `γ,k(|v⟩⟨w|) = ‖v‖°_{s(k)} ‖w‖°_{s(k)}`.
pub fn gamma_rank_one(v: &PureState, w: &PureState, k: usize) -> Result<f64> {
    if v.dims() != w.dims() {
        return Err(Error::Size(format!("ket on {:?} and bra on {:?}", v.dims(), w.dims())));
    }
    Ok(s_k_dual(v, k)? * s_k_dual(w, k)?)
}

/// Schmidt data of a raw vector: coefficients with left frame and conjugated right frame.
fn schmidt_frames(v: &ComplexVector, m: usize, n: usize) -> Result<(Vec<f64>, Vec<ComplexVector>)> {
    let coeff = ComplexMatrix::from_fn(m, n, |i, j| v[i * n + j]);
    let dec = linalg::svd(&coeff)?;
    let terms = (0..dec.sigma.len())
        .map(|i| linalg::kron_vec(&dec.u.column(i).into_owned(), &dec.v.column(i).map(|z| z.conj())))
        .collect();
    Ok((dec.sigma, terms))
}

/// A unit-`s(k)` vector `a` with `⟨a|v⟩ = ‖v‖°_{s(k)}`: the Schmidt
/// coefficients of `v` with the tail beyond the break index flattened to `α̃`.
pub fn dual_witness_vector(v: &ComplexVector, m: usize, n: usize, k: usize) -> Result<ComplexVector> {
    check_k(k, m.min(n))?;
    let (alpha, terms) = schmidt_frames(v, m, n)?;
    if alpha[0] == 0.0 {
        return Err(Error::DegenerateInput("dual witness of the zero vector".into()));
    }
    let br = break_index(&alpha, k)?;
    let beta: Vec<f64> = (0..alpha.len()).map(|i| if i < br.r { alpha[i] } else { br.sigma_tilde }).collect();
    let d = (beta[..br.r].iter().map(|b| b * b).sum::<f64>() + (k - br.r) as f64 * br.sigma_tilde.powi(2)).sqrt();
    let mut a = ComplexVector::zeros(m * n);
    for (b, t) in beta.iter().zip(&terms) {
        a += t.scale(b / d);
    }
    Ok(a)
}

/// Optimal Schmidt-rank-`k` splitting `v = Σ μⱼ zⱼ` with unit `zⱼ` and
/// `Σ μⱼ = ‖v‖°_{s(k)}`. Every `zⱼ` keeps the head of the Schmidt profile and
/// `k − r` tail terms at height `α̃`; the weights decompose the tail profile
/// `αᵢ/α̃ ∈ [0, 1]` into indicators of `(k − r)`-subsets.
pub fn vector_decomposition(v: &ComplexVector, m: usize, n: usize, k: usize) -> Result<Vec<(f64, ComplexVector)>> {
    check_k(k, m.min(n))?;
    let (alpha, terms) = schmidt_frames(v, m, n)?;
    if alpha[0] == 0.0 {
        return Err(Error::DegenerateInput("decomposition of the zero vector".into()));
    }
    let br = break_index(&alpha, k)?;
    let alpha = br.clamped.clone();
    let (r, at) = (br.r, br.sigma_tilde);
    let norm = v.norm();
    if at <= 1e-14 * alpha[0] {
        return Ok(vec![(norm, v.unscale(norm))]);
    }
    let head: Vec<usize> = (0..r).collect();
    let d = (alpha[..r].iter().map(|a| a * a).sum::<f64>() + (k - r) as f64 * at * at).sqrt();
    let tail: Vec<usize> = (r..alpha.len()).collect();
    let x: Vec<f64> = tail.iter().map(|&i| (alpha[i] / at).clamp(0.0, 1.0)).collect();
    let mut out = Vec::new();
    for (lambda, subset) in capped_simplex_split(&x, k - r) {
        let mut z = ComplexVector::zeros(m * n);
        for &i in &head {
            z += terms[i].scale(alpha[i] / d);
        }
        for &j in &subset {
            z += terms[tail[j]].scale(at / d);
        }
        out.push((lambda * d, z));
    }
    Ok(out)
}

/// Writes `x ∈ [0,1]^L` with `Σx = K` as `Σ λ_S 1_S` over `K`-subsets with
/// `Σ λ_S = 1`, greedily peeling off the `K` largest coordinates.
fn capped_simplex_split(x: &[f64], kk: usize) -> Vec<(f64, Vec<usize>)> {
    let mut x = x.to_vec();
    let mut t = 1.0;
    let mut out = Vec::new();
    for _ in 0..4 * (x.len() + 1) {
        if t <= 1e-15 {
            break;
        }
        let mut idx: Vec<usize> = (0..x.len()).collect();
        idx.sort_by(|&a, &b| x[b].total_cmp(&x[a]));
        let subset: Vec<usize> = idx[..kk].to_vec();
        let rest_max = idx.get(kk).map_or(0.0, |&i| x[i]);
        let lambda = x[idx[kk - 1]].min(t - rest_max).min(t);
        if lambda <= 1e-15 {
            // rounding left a sliver; give it to the current top set
            out.push((t, subset));
            break;
        }
        for &i in &subset {
            x[i] -= lambda;
        }
        t -= lambda;
        out.push((lambda, subset));
    }
    out
}

/// Operator with a certified upper bound on its dual-side norm.
#[derive(Debug, Clone)]
pub struct Witness {
    pub w: BipartiteOperator,
    /// Upper bound on `‖W‖_{S(k)}` (for `γ,k`) or `r⊗ₖ(W)` (for `R_k`).
    pub dual_upper: f64,
    /// `|⟨W, X⟩|`.
    pub pairing: f64,
    pub k: usize,
    pub target: WitnessTarget,
    pub label: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessTarget {
    Gamma,
    Robustness,
}

impl Witness {
    /// `|⟨W, X⟩| / upper ≤` the dual norm of `X`.
    pub fn lower_bound(&self) -> f64 {
        if self.dual_upper > 0.0 {
            self.pairing / self.dual_upper
        } else {
            0.0
        }
    }
}

fn better(best: Option<Witness>, cand: Witness) -> Option<Witness> {
    match best {
        Some(b) if b.lower_bound() >= cand.lower_bound() => Some(b),
        _ => Some(cand),
    }
}

/// Best of a few structured witnesses for `γ,k(x)`: `x` itself, the polar
/// factor, and `|a⟩⟨b|` built from dual witness vectors of each singular pair.
pub fn gamma_witness(x: &BipartiteOperator, k: usize) -> Result<Option<Witness>> {
    let (m, n) = x.dims();
    check_k(k, m.min(n))?;
    let dec = linalg::svd(x.mat())?;
    if dec.sigma[0] == 0.0 {
        return Ok(None);
    }
    let mk = |w: BipartiteOperator, label| -> Result<Witness> {
        let pairing = linalg::inner(w.mat(), x.mat()).norm();
        Ok(Witness { dual_upper: sk_upper(&w, k)?.0, w, pairing, k, target: WitnessTarget::Gamma, label })
    };
    let mut best = better(None, mk(x.clone(), "self")?);
    let rank = dec.rank(1e-12);
    let polar = &dec.u.columns(0, rank) * dec.v.columns(0, rank).adjoint();
    best = better(best, mk(BipartiteOperator::new(polar, m, n)?, "polar")?);
    for i in 0..rank {
        let a = dual_witness_vector(&dec.u.column(i).into_owned(), m, n, k)?;
        let b = dual_witness_vector(&dec.v.column(i).into_owned(), m, n, k)?;
        let w = BipartiteOperator::ket_bra(&a, &b, m, n)?;
        let pairing = linalg::inner(w.mat(), x.mat()).norm();
        let dual_upper = s_k_of(&a, m, n, k)? * s_k_of(&b, m, n, k)?;
        best = better(best, Witness { w, dual_upper, pairing, k, target: WitnessTarget::Gamma, label: "dual_ket_bra" });
    }
    Ok(best)
}

/// `Σ σᵢ ‖uᵢ‖°‖vᵢ‖°` over the singular value decomposition.
fn svd_route_upper(x: &ComplexMatrix, m: usize, n: usize, k: usize) -> Result<f64> {
    let dec = linalg::svd(x)?;
    let mut total = 0.0;
    for (i, &s) in dec.sigma.iter().enumerate() {
        if s == 0.0 {
            break;
        }
        let du = schmidt::dual_from_coefficients(&schmidt::coefficients_of(&dec.u.column(i).into_owned(), m, n)?, k)?;
        let dv = schmidt::dual_from_coefficients(&schmidt::coefficients_of(&dec.v.column(i).into_owned(), m, n)?, k)?;
        total += s * du * dv;
    }
    Ok(total)
}

/// `Σ |λᵢ| (‖uᵢ‖°)²` over the eigendecomposition of a Hermitian matrix.
fn eigen_route_upper(x: &ComplexMatrix, m: usize, n: usize, k: usize) -> Result<f64> {
    let eig = linalg::eig_hermitian(x)?;
    let mut total = 0.0;
    for (i, &l) in eig.values.iter().enumerate() {
        if l != 0.0 {
            let d = schmidt::dual_from_coefficients(&schmidt::coefficients_of(&eig.vector(i), m, n)?, k)?;
            total += l.abs() * d * d;
        }
    }
    Ok(total)
}

fn entrywise_l1(x: &ComplexMatrix) -> f64 {
    x.iter().map(|z| z.norm()).sum()
}

/// Search-free upper bound on `γ,k`, used to certify LP residuals.
fn cheap_gamma_upper(x: &ComplexMatrix, m: usize, n: usize, k: usize) -> Result<f64> {
    if x.iter().all(|z| z.norm_sqr() == 0.0) {
        return Ok(0.0);
    }
    Ok(svd_route_upper(x, m, n, k)?.min(entrywise_l1(x)))
}

/// `γ,k` interval plus what produced it.
#[derive(Debug, Clone)]
pub struct GammaAnalysis {
    pub interval: NormInterval,
    pub witness: Option<Witness>,
    pub oracle: Option<OracleResult>,
}

/// Budget and seed for running the decomposition LP inside [`gamma_analysis`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub budget: usize,
    pub seed: u64,
}

pub fn gamma_analysis(x: &BipartiteOperator, k: usize, oracle: Option<OracleConfig>) -> Result<GammaAnalysis> {
    let (m, n) = x.dims();
    check_k(k, m.min(n))?;
    let norms = linalg::matrix_norms(x.mat())?;
    if norms.operator == 0.0 {
        return Ok(GammaAnalysis { interval: NormInterval::exact(0.0, Method::Trivial), witness: None, oracle: None });
    }
    let mut lowers = vec![
        (norms.trace, Method::TraceNorm),
        (k2_dual(&linalg::realign(x), k * k)?, Method::Realignment),
    ];
    let witness = gamma_witness(x, k)?;
    if let Some(w) = &witness {
        lowers.push((w.lower_bound(), Method::Witness));
    }
    let mut uppers = vec![
        (svd_route_upper(x.mat(), m, n, k)?, Method::SvdSplit),
        (entrywise_l1(x.mat()), Method::EntrywiseL1),
    ];
    if x.is_hermitian() {
        uppers.push((eigen_route_upper(x.mat(), m, n, k)?, Method::EigenSplit));
    }
    let oracle = match oracle {
        Some(cfg) => {
            let res = decomposition_oracle(x, k, cfg.budget, cfg.seed)?;
            uppers.push((res.upper, Method::LpOracle));
            Some(res)
        }
        None => None,
    };
    Ok(GammaAnalysis { interval: NormInterval::from_candidates(&lowers, &uppers)?, witness, oracle })
}

/// Certified interval on `γ,k(x)`; exact on rank-one inputs and at `k = min(m, n)`.
pub fn gamma_bounds(x: &BipartiteOperator, k: usize) -> Result<NormInterval> {
    Ok(gamma_analysis(x, k, None)?.interval)
}

/// `X ≈ Σ cᵢ |vᵢ⟩⟨wᵢ|` with `cᵢ ≥ 0` and Schmidt-rank-`k` unit vectors.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub coefficients: Vec<f64>,
    pub generators: Vec<(PureState, PureState)>,
    /// Frobenius norm of `X − Σ cᵢ |vᵢ⟩⟨wᵢ|`.
    pub residual: f64,
}

impl Decomposition {
    pub fn mass(&self) -> f64 {
        self.coefficients.iter().sum()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.generators.first().map_or(0, |(v, _)| v.amplitudes().len());
        let mut out = ComplexMatrix::zeros(d, d);
        for (ci, (v, w)) in self.coefficients.iter().zip(&self.generators) {
            out += (v.amplitudes() * w.amplitudes().adjoint()).scale(*ci);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// `Σ cᵢ` plus a certified bound on `γ,k` of the LP residual.
    pub upper: f64,
    /// Optimal value of the linear program.
    pub lp_value: f64,
    pub decomposition: Decomposition,
    /// Number of candidate generators in the final program.
    pub generators_tried: usize,
    pub retried: bool,
    pub budget: usize,
    pub seed: u64,
}

/// Candidate ket-bra `e^{iθ} |v⟩⟨w|`; the phase is folded into `v`.
struct Generator {
    v: ComplexVector,
    w: ComplexVector,
}

/// Ket-bras of the optimal splittings of every singular pair: together they
/// decompose `x` with mass equal to the SVD-route bound, so the program is
/// always feasible.
fn svd_generators(x: &ComplexMatrix, m: usize, n: usize, k: usize) -> Result<Vec<Generator>> {
    let dec = linalg::svd(x)?;
    let mut out = Vec::new();
    for (i, &s) in dec.sigma.iter().enumerate() {
        if s <= 1e-14 * dec.sigma[0] {
            break;
        }
        let left = vector_decomposition(&dec.u.column(i).into_owned(), m, n, k)?;
        let right = vector_decomposition(&dec.v.column(i).into_owned(), m, n, k)?;
        for (_, a) in &left {
            for (_, b) in &right {
                out.push(Generator { v: a.clone(), w: b.clone() });
            }
        }
    }
    Ok(out)
}

fn random_generators(m: usize, n: usize, k: usize, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Generator>> {
    (0..count)
        .map(|_| {
            let v = truncate_vector(&gaussian_vector(m * n, rng), m, n, k)?;
            let w = truncate_vector(&gaussian_vector(m * n, rng), m, n, k)?;
            let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let v = v.unscale(v.norm()) * c(theta.cos(), theta.sin());
            Ok(Generator { v, w: w.unscale(w.norm()) })
        })
        .collect()
}

/// `min Σcᵢ` s.t. `Σ cᵢ Gᵢ = x` entrywise (real and imaginary parts), `c ≥ 0`.
fn solve_lp(x: &ComplexMatrix, gens: &[Generator]) -> std::result::Result<Vec<f64>, minilp::Error> {
    let d = x.nrows();
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = gens.iter().map(|_| lp.add_var(1.0, (0.0, f64::INFINITY))).collect();
    let mats: Vec<ComplexMatrix> = gens.iter().map(|g| &g.v * g.w.adjoint()).collect();
    for p in 0..d {
        for q in 0..d {
            for part in 0..2 {
                let pick = |z: linalg::C64| if part == 0 { z.re } else { z.im };
                let row: Vec<_> = vars
                    .iter()
                    .zip(&mats)
                    .filter_map(|(&var, g)| {
                        let a = pick(g[(p, q)]);
                        (a != 0.0).then_some((var, a))
                    })
                    .collect();
                let rhs = pick(x[(p, q)]);
                if row.is_empty() && rhs == 0.0 {
                    continue;
                }
                lp.add_constraint(row.as_slice(), ComparisonOp::Eq, rhs);
            }
        }
    }
    let sol = lp.solve()?;
    Ok(vars.iter().map(|&v| sol[v].max(0.0)).collect())
}

/// Upper bound on `γ,k(x)` from a linear program over `budget` random
/// Schmidt-rank-`k` ket-bras (with random phases) plus the ket-bras of the
/// optimal splittings of `x`'s singular pairs.
pub fn decomposition_oracle(x: &BipartiteOperator, k: usize, budget: usize, seed: u64) -> Result<OracleResult> {
    let (m, n) = x.dims();
    check_k(k, m.min(n))?;
    let mat = x.mat();
    if mat.iter().all(|z| z.norm_sqr() == 0.0) {
        let decomposition = Decomposition { coefficients: vec![], generators: vec![], residual: 0.0 };
        return Ok(OracleResult { upper: 0.0, lp_value: 0.0, decomposition, generators_tried: 0, retried: false, budget, seed });
    }
    let structured = svd_generators(mat, m, n, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens = random_generators(m, n, k, budget, &mut rng)?;
    gens.extend(structured);
    let mut retried = false;
    let coeffs = match solve_lp(mat, &gens) {
        Ok(c) => c,
        Err(minilp::Error::Infeasible) => {
            retried = true;
            let extra = random_generators(m, n, k, budget.max(1), &mut rng)?;
            gens.extend(extra);
            match solve_lp(mat, &gens) {
                Ok(c) => c,
                Err(minilp::Error::Infeasible) => {
                    return Err(Error::Infeasible(format!("no decomposition over {} generators", gens.len())))
                }
                Err(e) => return Err(Error::NumericalFailure(format!("linear program failed: {e}"))),
            }
        }
        Err(e) => return Err(Error::NumericalFailure(format!("linear program failed: {e}"))),
    };

    let mut recon = ComplexMatrix::zeros(m * n, m * n);
    let mut coefficients = Vec::new();
    let mut generators = Vec::new();
    for (ci, g) in coeffs.iter().zip(&gens) {
        if *ci > 0.0 {
            recon += (&g.v * g.w.adjoint()).scale(*ci);
            coefficients.push(*ci);
            generators.push((PureState::unnormalized(g.v.clone(), m, n)?, PureState::unnormalized(g.w.clone(), m, n)?));
        }
    }
    let residual = mat - &recon;
    let lp_value: f64 = coefficients.iter().sum();
    let upper = lp_value + cheap_gamma_upper(&residual, m, n, k)?;
    Ok(OracleResult {
        upper,
        lp_value,
        decomposition: Decomposition { coefficients, generators, residual: residual.norm() },
        generators_tried: gens.len(),
        retried,
        budget,
        seed,
    })
}

/// `R_k` interval plus the witness behind its lower end.
#[derive(Debug, Clone)]
pub struct RobustnessAnalysis {
    pub interval: NormInterval,
    pub witness: Option<Witness>,
}

impl RobustnessAnalysis {
    /// Generalized robustness of entanglement `E = (R − 1)/2`, as an interval,
    /// meaningful for density matrices.
    pub fn entanglement_robustness(&self) -> (f64, f64) {
        ((self.interval.lower - 1.0) / 2.0, (self.interval.upper - 1.0) / 2.0)
    }
}

/// Witnesses for `R_k(y)`: `y` itself, and `|a⟩⟨a| − I/2` for the dual witness
/// vector `a` of each eigenvector. The latter has `r⊗ₖ ≤ 1/2` since
/// `0 ≤ ⟨v|a⟩⟨a|v⟩ ≤ s_k(a)² = 1`.
pub fn robustness_witness(y: &BipartiteOperator, k: usize) -> Result<Option<Witness>> {
    y.require_hermitian()?;
    let (m, n) = y.dims();
    check_k(k, m.min(n))?;
    let eig = linalg::eig_hermitian(y.mat())?;
    let scale = eig.max().abs().max(eig.min().abs());
    if scale == 0.0 {
        return Ok(None);
    }
    let pairing_with = |w: &BipartiteOperator| linalg::inner(w.mat(), y.mat()).norm();
    let self_w = Witness {
        dual_upper: radius_upper(y, k)?.0,
        pairing: pairing_with(y),
        w: y.clone(),
        k,
        target: WitnessTarget::Robustness,
        label: "self",
    };
    let mut best = better(None, self_w);
    let d = m * n;
    for i in 0..d {
        if eig.values[i].abs() <= 1e-12 * scale {
            continue;
        }
        let a = dual_witness_vector(&eig.vector(i), m, n, k)?;
        let sa = s_k_of(&a, m, n, k)?.powi(2);
        let w = (&a * a.adjoint()) - ComplexMatrix::identity(d, d).scale(0.5);
        let w = BipartiteOperator::new_hermitian(w, m, n)?.symmetrized();
        let pairing = pairing_with(&w);
        let cand = Witness {
            w,
            dual_upper: (sa - 0.5).max(0.5),
            pairing,
            k,
            target: WitnessTarget::Robustness,
            label: "dual_projector_shift",
        };
        best = better(best, cand);
    }
    Ok(best)
}

/// Certified interval on `R_k(y)` for Hermitian `y`. The upper end splits `y`
/// along its eigenvectors; each term costs 1 if the eigenvector has Schmidt
/// rank at most `k` and `2γ,1 − 1` otherwise (the proven pure-state value at
/// `k = 1`, which bounds every `k`).
pub fn robustness_analysis(y: &BipartiteOperator, k: usize) -> Result<RobustnessAnalysis> {
    y.require_hermitian()?;
    let (m, n) = y.dims();
    check_k(k, m.min(n))?;
    let eig = linalg::eig_hermitian(y.mat())?;
    let scale = eig.max().abs().max(eig.min().abs());
    if scale == 0.0 {
        return Ok(RobustnessAnalysis { interval: NormInterval::exact(0.0, Method::Trivial), witness: None });
    }
    let gamma = gamma_bounds(y, k)?;
    let mut lowers = vec![(gamma.lower, gamma.lower_method)];
    let witness = robustness_witness(y, k)?;
    if let Some(w) = &witness {
        lowers.push((w.lower_bound(), Method::Witness));
    }
    let mut upper = 0.0;
    let mut all_low_rank = true;
    for (i, &l) in eig.values.iter().enumerate() {
        if l.abs() <= 1e-14 * scale {
            continue;
        }
        let u = PureState::unnormalized(eig.vector(i), m, n)?;
        let term = if schmidt::schmidt_rank(&u, DEFAULT_RANK_TOL)? <= k {
            1.0
        } else {
            all_low_rank = false;
            2.0 * gamma_pure(&u, 1)? - 1.0
        };
        upper += l.abs() * term;
    }
    let method = if all_low_rank { Method::SchmidtRankDecomposition } else { Method::EigenSplit };
    let interval = NormInterval::from_candidates(&lowers, &[(upper, method)])?;
    Ok(RobustnessAnalysis { interval, witness })
}

pub fn robustness_bounds(y: &BipartiteOperator, k: usize) -> Result<NormInterval> {
    Ok(robustness_analysis(y, k)?.interval)
}

/// Whether a pure state's robustness interval is consistent with the
/// unproven pure-state value `R_k = 2γ,k − 1` at intermediate `k`.
#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub k: usize,
    /// `1 < k < min(m, n)`, where the value is not known.
    pub in_open_regime: bool,
    pub candidate: f64,
    pub interval: NormInterval,
    pub inside: bool,
    /// `candidate − lower`.
    pub gap_to_lower: f64,
    /// `upper − candidate`.
    pub gap_to_upper: f64,
}

pub fn conjecture_probe(v: &PureState, k: usize) -> Result<ConjectureReport> {
    check_k(k, v.min_dim())?;
    if (v.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition("conjecture probe needs a unit vector".into()));
    }
    let candidate = 2.0 * gamma_pure(v, k)? - 1.0;
    let interval = robustness_bounds(&v.projector(), k)?;
    let tol = 1e-9 * candidate.abs().max(1.0);
    Ok(ConjectureReport {
        k,
        in_open_regime: k > 1 && k < v.min_dim(),
        candidate,
        interval,
        inside: interval.contains(candidate, tol),
        gap_to_lower: candidate - interval.lower,
        gap_to_upper: interval.upper - candidate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnVerdict {
    AtMostK,
    ExceedsK,
    Undecided,
}

#[derive(Debug, Clone)]
pub enum SnEvidence {
    /// Spectral decomposition into Schmidt-rank-`k` eigenvectors.
    Eigen(Decomposition),
    /// LP decomposition with mass at most `1 + tol`.
    Oracle(OracleResult),
    /// A lower bound on `γ,k` above `1 + tol`.
    LowerBound { value: f64, method: Method, witness: Option<Witness> },
    None,
}

#[derive(Debug, Clone)]
pub struct SnCertificate {
    pub verdict: SnVerdict,
    pub gamma: NormInterval,
    pub evidence: SnEvidence,
    pub tol: f64,
}

/// Decides `SN(ρ) ≤ k` through `γ,k(ρ) = 1`, or reports that neither side
/// could be certified.
pub fn sn_certify(rho: &BipartiteOperator, k: usize, oracle: Option<OracleConfig>, tol: f64) -> Result<SnCertificate> {
    rho.require_density(1e-9)?;
    let (m, n) = rho.dims();
    check_k(k, m.min(n))?;
    let eig = linalg::eig_hermitian(rho.mat())?;
    let mut coefficients = Vec::new();
    let mut generators = Vec::new();
    let mut eigen_ok = true;
    for (i, &l) in eig.values.iter().enumerate() {
        if l <= 1e-14 {
            continue;
        }
        let u = PureState::normalized_from(eig.vector(i), m, n)?;
        if schmidt::schmidt_rank(&u, DEFAULT_RANK_TOL)? > k {
            eigen_ok = false;
            break;
        }
        coefficients.push(l);
        generators.push((u.clone(), u));
    }
    let analysis = gamma_analysis(rho, k, None)?;
    if eigen_ok {
        let dec = Decomposition { coefficients, generators, residual: 0.0 };
        let recon = dec.reconstruct();
        let dec = Decomposition { residual: (rho.mat() - recon).norm(), ..dec };
        return Ok(SnCertificate { verdict: SnVerdict::AtMostK, gamma: analysis.interval, evidence: SnEvidence::Eigen(dec), tol });
    }
    if analysis.interval.lower > 1.0 + tol {
        let evidence = SnEvidence::LowerBound {
            value: analysis.interval.lower,
            method: analysis.interval.lower_method,
            witness: analysis.witness.filter(|_| analysis.interval.lower_method == Method::Witness),
        };
        return Ok(SnCertificate { verdict: SnVerdict::ExceedsK, gamma: analysis.interval, evidence, tol });
    }
    if let Some(cfg) = oracle {
        let res = decomposition_oracle(rho, k, cfg.budget, cfg.seed)?;
        let gamma = NormInterval::from_candidates(
            &[(analysis.interval.lower, analysis.interval.lower_method)],
            &[(analysis.interval.upper, analysis.interval.upper_method), (res.upper, Method::LpOracle)],
        )?;
        if res.upper <= 1.0 + tol {
            return Ok(SnCertificate { verdict: SnVerdict::AtMostK, gamma, evidence: SnEvidence::Oracle(res), tol });
        }
        return Ok(SnCertificate { verdict: SnVerdict::Undecided, gamma, evidence: SnEvidence::None, tol });
    }
    if analysis.interval.upper <= 1.0 + tol {
        return Ok(SnCertificate { verdict: SnVerdict::AtMostK, gamma: analysis.interval, evidence: SnEvidence::None, tol });
    }
    Ok(SnCertificate { verdict: SnVerdict::Undecided, gamma: analysis.interval, evidence: SnEvidence::None, tol })
}
