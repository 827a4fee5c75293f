//! The `S(k)` operator norm `sup |⟨v|X|w⟩|` and the product numerical radius
//! `sup |⟨v|Y|v⟩|`, both over unit vectors of Schmidt rank at most `k`.
//!
//! Pure and rank-one inputs have closed forms. Everything else gets a
//! [`NormInterval`]: lower ends come from explicit Schmidt-rank-`k` vectors
//! found by see-saw, upper ends from triangle-inequality splittings.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Method, NormInterval};
use crate::linalg::{self, BipartiteOperator, ComplexMatrix, ComplexVector, HermitianEigen};
use crate::schmidt::{check_k, s_k_norm, s_k_of, truncate_vector, PureState};
use crate::states::gaussian_vector;

/// Relative eigenvalue floor for treating a Hermitian operator as positive semidefinite.
const PSD_TOL: f64 = 1e-12;
const ZERO: f64 = 1e-300;

/// `Σ_{i≤k} αᵢ² = ‖|v⟩⟨v|‖_{S(k)}`.
pub fn sk_pure(v: &PureState, k: usize) -> Result<f64> {
    Ok(s_k_norm(v, k)?.powi(2))
}

/// `‖|v⟩⟨w|‖_{S(k)} = ‖v‖_{s(k)} ‖w‖_{s(k)}`.
pub fn sk_elementary(v: &PureState, w: &PureState, k: usize) -> Result<f64> {
    if v.dims() != w.dims() {
        return Err(Error::Size(format!("ket on {:?} and bra on {:?}", v.dims(), w.dims())));
    }
    Ok(s_k_norm(v, k)? * s_k_norm(w, k)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeeSawOptions {
    pub restarts: usize,
    pub max_iter: usize,
    /// Stop once an iteration improves the objective by less than this, relatively.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SeeSawOptions {
    fn default() -> Self {
        Self { restarts: 32, max_iter: 500, tol: 1e-10, seed: 0 }
    }
}

impl SeeSawOptions {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Parameter("restarts must be at least 1".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::Parameter("see-saw tolerance must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Best pair of one see-saw run or of the best restart.
#[derive(Debug, Clone)]
pub struct SeeSawResult {
    pub v: PureState,
    pub w: PureState,
    /// `|⟨v|X|w⟩|` for the bilinear run, `⟨v|Y|v⟩` for the symmetric one.
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub seed: u64,
    pub restart: usize,
    /// Objective after every half step.
    pub trace: Vec<f64>,
}

impl SeeSawResult {
    pub fn is_monotone(&self, tol: f64) -> bool {
        self.trace.windows(2).all(|w| w[1] >= w[0] - tol * w[0].abs().max(1.0))
    }
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn random_sr_k(m: usize, n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<ComplexVector> {
    let t = truncate_vector(&gaussian_vector(m * n, rng), m, n, k)?;
    Ok(t.unscale(t.norm()))
}

fn zero_result(m: usize, n: usize, seed: u64, restart: usize) -> Result<SeeSawResult> {
    let v = PureState::basis(m, n, 0, 0)?;
    Ok(SeeSawResult { w: v.clone(), v, value: 0.0, iterations: 0, converged: true, seed, restart, trace: vec![0.0] })
}

/// One see-saw run from the starting point of stream `restart`.
pub fn seesaw_run(x: &BipartiteOperator, k: usize, opts: &SeeSawOptions, restart: usize) -> Result<SeeSawResult> {
    let (m, n) = x.dims();
    check_k(k, m.min(n))?;
    let mat = x.mat();
    if mat.iter().all(|z| z.norm_sqr() == 0.0) {
        return zero_result(m, n, opts.seed, restart);
    }
    let adj = mat.adjoint();
    let mut rng = restart_rng(opts.seed, restart);
    let mut w = random_sr_k(m, n, k, &mut rng)?;
    let mut v = w.clone();
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut prev = f64::NEG_INFINITY;
    for it in 0..opts.max_iter.max(1) {
        iterations = it + 1;
        let tv = truncate_vector(&(mat * &w), m, n, k)?;
        let nv = tv.norm();
        if nv <= ZERO {
            trace.push(0.0);
            break;
        }
        v = tv.unscale(nv);
        trace.push(nv);
        let tw = truncate_vector(&(&adj * &v), m, n, k)?;
        let nw = tw.norm();
        if nw <= ZERO {
            trace.push(0.0);
            break;
        }
        w = tw.unscale(nw);
        trace.push(nw);
        if nw - prev <= opts.tol * nw {
            converged = true;
            break;
        }
        prev = nw;
    }
    let value = v.dotc(&(mat * &w)).norm();
    Ok(SeeSawResult {
        v: PureState::normalized_from(v, m, n)?,
        w: PureState::normalized_from(w, m, n)?,
        value,
        iterations,
        converged,
        seed: opts.seed,
        restart,
        trace,
    })
}

/// Symmetric run maximizing `⟨v|Y|v⟩` through the positive semidefinite
/// `Z = Y + shift·I`: `v ← trunc_k(Zv)`. Each step cannot decrease
/// `⟨v|Z|v⟩` by Cauchy–Schwarz in the `Z` inner product.
fn symmetric_run(y: &ComplexMatrix, shift: f64, m: usize, n: usize, k: usize, opts: &SeeSawOptions, restart: usize) -> Result<SeeSawResult> {
    let mut z = y.clone();
    for i in 0..z.nrows() {
        z[(i, i)] += linalg::c(shift, 0.0);
    }
    let mut rng = restart_rng(opts.seed, restart);
    let mut v = random_sr_k(m, n, k, &mut rng)?;
    let rayleigh = |v: &ComplexVector| v.dotc(&(&z * v)).re;
    let mut val = rayleigh(&v);
    let mut trace = vec![val];
    let mut converged = false;
    let mut iterations = 0;
    for it in 0..opts.max_iter.max(1) {
        iterations = it + 1;
        let t = truncate_vector(&(&z * &v), m, n, k)?;
        let nt = t.norm();
        if nt <= ZERO {
            converged = true;
            break;
        }
        let cand = t.unscale(nt);
        let cand_val = rayleigh(&cand);
        trace.push(cand_val);
        let gain = cand_val - val;
        if cand_val >= val {
            v = cand;
            val = cand_val;
        }
        if gain <= opts.tol * val.abs().max(ZERO) {
            converged = true;
            break;
        }
    }
    let value = v.dotc(&(y * &v)).re;
    let state = PureState::normalized_from(v, m, n)?;
    Ok(SeeSawResult { v: state.clone(), w: state, value, iterations, converged, seed: opts.seed, restart, trace })
}

/// Max-reduction in restart order, so ties resolve to the lowest index.
fn best_of(runs: Vec<SeeSawResult>) -> SeeSawResult {
    runs.into_iter().reduce(|best, r| if r.value > best.value { r } else { best }).expect("at least one restart")
}

/// Lower bound on `‖X‖_{S(k)}`: best alternating maximization over `restarts`
/// independent streams derived from `seed`.
pub fn seesaw_lower(x: &BipartiteOperator, k: usize, opts: &SeeSawOptions) -> Result<SeeSawResult> {
    opts.validate()?;
    check_k(k, x.min_dim())?;
    let runs = (0..opts.restarts).into_par_iter().map(|r| seesaw_run(x, k, opts, r)).collect::<Result<Vec<_>>>()?;
    Ok(best_of(runs))
}

/// Lower bound on `sup ⟨v|sign·Y|v⟩` over Schmidt-rank-`k` unit vectors, for Hermitian `Y`.
pub fn radius_seesaw(y: &BipartiteOperator, k: usize, sign: f64, opts: &SeeSawOptions) -> Result<SeeSawResult> {
    opts.validate()?;
    y.require_hermitian()?;
    let (m, n) = y.dims();
    check_k(k, m.min(n))?;
    let signed = y.mat().scale(sign);
    let shift = linalg::operator_norm(&signed)?;
    if shift == 0.0 {
        return zero_result(m, n, opts.seed, 0);
    }
    let runs = (0..opts.restarts)
        .into_par_iter()
        .map(|r| symmetric_run(&signed, shift, m, n, k, opts, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(best_of(runs))
}

/// `min_j [λⱼ + Σ_{λᵢ>λⱼ} (λᵢ − λⱼ) s_k(uᵢ)²]`, an upper bound on
/// `sup ⟨v|Y|v⟩` over unit vectors with Schmidt rank at most `k`.
pub(crate) fn spectral_shift_upper(values: &[f64], sk_sq: &[f64]) -> f64 {
    (0..values.len())
        .map(|j| {
            values[j]
                + (0..values.len())
                    .filter(|&i| values[i] > values[j])
                    .map(|i| (values[i] - values[j]) * sk_sq[i])
                    .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

/// `s_k(uᵢ)²` for every eigenvector.
pub(crate) fn eigvec_sk_sq(eig: &HermitianEigen, m: usize, n: usize, k: usize) -> Result<Vec<f64>> {
    (0..eig.values.len()).map(|i| Ok(s_k_of(&eig.vector(i), m, n, k)?.powi(2))).collect()
}

/// Both one-sided spectral-shift bounds: (`sup ⟨v|Y|v⟩`, `sup ⟨v|−Y|v⟩`).
pub(crate) fn signed_shift_uppers(eig: &HermitianEigen, m: usize, n: usize, k: usize) -> Result<(f64, f64)> {
    let sk_sq = eigvec_sk_sq(eig, m, n, k)?;
    let neg: Vec<f64> = eig.values.iter().map(|l| -l).collect();
    Ok((spectral_shift_upper(&eig.values, &sk_sq), spectral_shift_upper(&neg, &sk_sq)))
}

fn is_psd(eig: &HermitianEigen) -> bool {
    let scale = eig.values.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    eig.min() >= -PSD_TOL * scale
}

/// `x = Σ σᵢ uᵢ vᵢ†` gives `‖x‖ ≤ Σ σᵢ s(uᵢ) s(vᵢ)` and
/// `‖x‖ ≥ σ₁ s(u₁) s(v₁) − Σ_{i≥2} σᵢ s(uᵢ) s(vᵢ)`; returns (lower, upper).
fn svd_split(dec: &linalg::Svd, m: usize, n: usize, k: usize) -> Result<(f64, f64)> {
    let mut terms = Vec::new();
    for (i, &s) in dec.sigma.iter().enumerate() {
        if s == 0.0 {
            break;
        }
        let su = s_k_of(&dec.u.column(i).into_owned(), m, n, k)?;
        let sv = s_k_of(&dec.v.column(i).into_owned(), m, n, k)?;
        terms.push(s * su * sv);
    }
    let Some((first, rest)) = terms.split_first() else { return Ok((0.0, 0.0)) };
    let rest: f64 = rest.iter().sum();
    Ok((first - rest, first + rest))
}

/// Search-free upper bound on `‖X‖_{S(k)}`: operator norm, SVD split, and the
/// spectral shift when `X ⪰ 0`.
pub fn sk_upper(x: &BipartiteOperator, k: usize) -> Result<(f64, Method)> {
    let (m, n) = x.dims();
    check_k(k, m.min(n))?;
    let dec = linalg::svd(x.mat())?;
    let mut best = (dec.sigma[0], Method::OperatorNorm);
    let (_, split) = svd_split(&dec, m, n, k)?;
    if split < best.0 {
        best = (split, Method::SvdSplit);
    }
    if x.is_hermitian() {
        let eig = linalg::eig_hermitian(x.mat())?;
        if is_psd(&eig) {
            let shift = spectral_shift_upper(&eig.values, &eigvec_sk_sq(&eig, m, n, k)?);
            if shift < best.0 {
                best = (shift, Method::SpectralShift);
            }
        }
    }
    Ok(best)
}

/// Search-free upper bound on `r⊗ₖ(Y)` for Hermitian `Y`.
pub fn radius_upper(y: &BipartiteOperator, k: usize) -> Result<(f64, Method)> {
    y.require_hermitian()?;
    let (m, n) = y.dims();
    check_k(k, m.min(n))?;
    let eig = linalg::eig_hermitian(y.mat())?;
    let op = eig.max().abs().max(eig.min().abs());
    let (plus, minus) = signed_shift_uppers(&eig, m, n, k)?;
    let shift = plus.max(minus);
    Ok(if shift < op { (shift, Method::SpectralShift) } else { (op, Method::OperatorNorm) })
}

/// Interval on `‖X‖_{S(k)}` together with the see-saw pair behind its lower end.
#[derive(Debug, Clone)]
pub struct SkAnalysis {
    pub interval: NormInterval,
    pub seesaw: Option<SeeSawResult>,
}

pub(crate) fn sk_analysis(x: &BipartiteOperator, k: usize, opts: &SeeSawOptions, force_seesaw: bool) -> Result<SkAnalysis> {
    opts.validate()?;
    let (m, n) = x.dims();
    check_k(k, m.min(n))?;
    let dec = linalg::svd(x.mat())?;
    let op = dec.sigma[0];
    if op == 0.0 {
        let seesaw = if force_seesaw { Some(zero_result(m, n, opts.seed, 0)?) } else { None };
        return Ok(SkAnalysis { interval: NormInterval::exact(0.0, Method::Trivial), seesaw });
    }

    let (split_lower, split_upper) = svd_split(&dec, m, n, k)?;
    let mut lowers = vec![(split_lower, Method::SvdSplit), (0.0, Method::Trivial)];
    let mut uppers = vec![(op, Method::OperatorNorm), (split_upper, Method::SvdSplit)];
    if k == m.min(n) {
        lowers.push((op, Method::OperatorNorm));
    }

    let psd_eig = if x.is_hermitian() {
        let eig = linalg::eig_hermitian(x.mat())?;
        is_psd(&eig).then_some(eig)
    } else {
        None
    };
    if let Some(eig) = &psd_eig {
        let sk_sq = eigvec_sk_sq(eig, m, n, k)?;
        uppers.push((spectral_shift_upper(&eig.values, &sk_sq), Method::SpectralShift));
    }

    let settled = NormInterval::from_candidates(&lowers, &uppers)?;
    if settled.exact && !force_seesaw {
        return Ok(SkAnalysis { interval: settled, seesaw: None });
    }
    let ss = match &psd_eig {
        // For X ⪰ 0 the supremum is attained with v = w.
        Some(_) => {
            let runs = (0..opts.restarts)
                .into_par_iter()
                .map(|r| symmetric_run(x.mat(), 0.0, m, n, k, opts, r))
                .collect::<Result<Vec<_>>>()?;
            best_of(runs)
        }
        None => seesaw_lower(x, k, opts)?,
    };
    lowers.push((ss.value, Method::SeeSaw));
    Ok(SkAnalysis { interval: NormInterval::from_candidates(&lowers, &uppers)?, seesaw: Some(ss) })
}

/// Certified interval on `‖X‖_{S(k)}`; exact on rank-one inputs and at `k = min(m, n)`.
pub fn sk_bounds(x: &BipartiteOperator, k: usize, opts: &SeeSawOptions) -> Result<NormInterval> {
    Ok(sk_analysis(x, k, opts, false)?.interval)
}

/// Certified interval on `r⊗ₖ(Y)` for Hermitian `Y`.
pub fn prod_radius_bounds(y: &BipartiteOperator, k: usize, opts: &SeeSawOptions) -> Result<NormInterval> {
    opts.validate()?;
    y.require_hermitian()?;
    let (m, n) = y.dims();
    check_k(k, m.min(n))?;
    let eig = linalg::eig_hermitian(y.mat())?;
    if is_psd(&eig) {
        return sk_bounds(y, k, opts);
    }
    let op = eig.max().abs().max(eig.min().abs());
    let (up_plus, up_minus) = signed_shift_uppers(&eig, m, n, k)?;
    let mut lowers = vec![(0.0, Method::Trivial)];
    let uppers = vec![(op, Method::OperatorNorm), (up_plus.max(up_minus), Method::SpectralShift)];
    if k == m.min(n) {
        lowers.push((op, Method::OperatorNorm));
    }
    for sign in [1.0, -1.0] {
        lowers.push((radius_seesaw(y, k, sign, opts)?.value, Method::SeeSaw));
    }
    NormInterval::from_candidates(&lowers, &uppers)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockVerdict {
    CertifiedPositive,
    CertifiedNegative,
    Undecided,
}

/// Outcome of testing `⟨v|Y|v⟩ ≥ 0` for all Schmidt-rank-`k` vectors.
#[derive(Debug, Clone)]
pub struct BlockPositivity {
    pub verdict: BlockVerdict,
    /// `λ_max(Y)`, so that `Y = cI − X` with `X ⪰ 0`.
    pub c: f64,
    /// Interval on `‖X‖_{S(k)}`; `Y` is `k`-block positive iff `c ≥ ‖X‖_{S(k)}`.
    pub interval: NormInterval,
    /// Schmidt-rank-`k` unit vector with `⟨v|Y|v⟩ < 0` when negative.
    pub witness: Option<PureState>,
    pub witness_value: Option<f64>,
    pub tol: f64,
}

pub fn block_positivity_check(y: &BipartiteOperator, k: usize, opts: &SeeSawOptions) -> Result<BlockPositivity> {
    y.require_hermitian()?;
    let (m, n) = y.dims();
    check_k(k, m.min(n))?;
    let eig = linalg::eig_hermitian(y.mat())?;
    let c = eig.max();
    let scale = eig.max().abs().max(eig.min().abs());
    let tol = 1e-9 * scale.max(1.0);
    let x = ComplexMatrix::identity(m * n, m * n).scale(c) - y.mat();
    let x = BipartiteOperator::new_hermitian(x, m, n)?.symmetrized();
    let an = sk_analysis(&x, k, opts, true)?;
    let ss = an.seesaw.expect("see-saw was forced");
    let value = ss.v.amplitudes().dotc(&(y.mat() * ss.v.amplitudes())).re;

    let (verdict, witness, witness_value) = if c >= an.interval.upper - tol {
        (BlockVerdict::CertifiedPositive, None, None)
    } else if value < -tol {
        (BlockVerdict::CertifiedNegative, Some(ss.v), Some(value))
    } else {
        (BlockVerdict::Undecided, None, None)
    };
    Ok(BlockPositivity { verdict, c, interval: an.interval, witness, witness_value, tol })
}

/// `r⊗ₖ(X) ≤ s` iff `sI ± X` are both `k`-block positive; bisects `s` over
/// `[0, ‖X‖]` and stops early at the first undecided step.
pub fn prod_radius_bisect(x: &BipartiteOperator, k: usize, depth: usize, opts: &SeeSawOptions) -> Result<NormInterval> {
    x.require_hermitian()?;
    let (m, n) = x.dims();
    check_k(k, m.min(n))?;
    let mut hi = linalg::operator_norm(x.mat())?;
    let mut lo = 0.0;
    if hi == 0.0 {
        return Ok(NormInterval::exact(0.0, Method::Trivial));
    }
    let id = ComplexMatrix::identity(m * n, m * n);
    for _ in 0..depth {
        let s = 0.5 * (lo + hi);
        let plus = BipartiteOperator::new_hermitian(id.scale(s) + x.mat(), m, n)?;
        let minus = BipartiteOperator::new_hermitian(id.scale(s) - x.mat(), m, n)?;
        let p = block_positivity_check(&plus, k, opts)?;
        let q = block_positivity_check(&minus, k, opts)?;
        use BlockVerdict::*;
        match (p.verdict, q.verdict) {
            (CertifiedPositive, CertifiedPositive) => hi = hi.min(s + p.tol.max(q.tol)),
            (CertifiedNegative, _) | (_, CertifiedNegative) => lo = s,
            _ => break,
        }
    }
    Ok(NormInterval {
        lower: lo,
        upper: hi,
        lower_method: Method::Bisection,
        upper_method: Method::Bisection,
        exact: hi - lo <= crate::interval::EXACT_WIDTH,
    })
}

/// Convenience: `‖X‖_{S(k)}` interval for `X = |v⟩⟨w|` built from states.
pub fn ket_bra(v: &PureState, w: &PureState) -> Result<BipartiteOperator> {
    if v.dims() != w.dims() {
        return Err(Error::Size("ket and bra live on different spaces".into()));
    }
    BipartiteOperator::ket_bra(v.amplitudes(), w.amplitudes(), v.dim_a(), v.dim_b())
}
