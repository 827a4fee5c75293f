//! Reference computations that share no code with the library routines they
//! check: singular values come from a Hermitian eigensolve of the dilation of `X`, random
//! states are built from raw Gaussian frames, suprema from direct search.

use entnorm::linalg::{c, ComplexMatrix, ComplexVector, C64};
use nalgebra::SymmetricEigen;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vec(len: usize, rng: &mut ChaCha8Rng) -> ComplexVector {
    ComplexVector::from_fn(len, |_, _| gaussian(rng))
}

pub fn gaussian_mat(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Descending singular values from the Hermitian dilation `[[0, X], [X†, 0]]`,
/// whose eigenvalues are `±σᵢ`. Unlike `eig(X†X)` this keeps small singular
/// values accurate to `ε‖X‖`.
pub fn singular_values(x: &ComplexMatrix) -> Vec<f64> {
    let (r, c) = x.shape();
    let mut h = ComplexMatrix::zeros(r + c, r + c);
    h.view_mut((0, r), (r, c)).copy_from(x);
    h.view_mut((r, 0), (c, r)).copy_from(&x.adjoint());
    let mut s: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s.truncate(r.min(c));
    s.iter().map(|v| v.max(0.0)).collect()
}

/// Singular triples `(σ, u, v)` of a full-rank matrix, descending.
pub fn singular_triples(x: &ComplexMatrix) -> Vec<(f64, ComplexVector, ComplexVector)> {
    let eig = SymmetricEigen::new(x.adjoint() * x);
    let mut out: Vec<_> = (0..x.ncols())
        .filter_map(|i| {
            let s = eig.eigenvalues[i].max(0.0).sqrt();
            (s > 1e-10).then(|| {
                let v = eig.eigenvectors.column(i).into_owned();
                let u = (x * &v).unscale(s);
                (s, u, v)
            })
        })
        .collect();
    out.sort_by(|a, b| b.0.total_cmp(&a.0));
    out
}

/// Schmidt coefficients of a vector on `C^m ⊗ C^n`.
pub fn schmidt_coefficients(v: &ComplexVector, m: usize, n: usize) -> Vec<f64> {
    singular_values(&ComplexMatrix::from_fn(m, n, |i, j| v[i * n + j]))
}

pub fn kron_vec(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    ComplexVector::from_fn(a.len() * b.len(), |idx, _| a[idx / b.len()] * b[idx % b.len()])
}

/// Unit vector `Σ_{j<s} aⱼ ⊗ bⱼ` from Gaussian (non-orthogonal) factors;
/// Schmidt rank exactly `s` with probability one.
pub fn planted_rank_vector(m: usize, n: usize, s: usize, rng: &mut ChaCha8Rng) -> ComplexVector {
    let mut v = ComplexVector::zeros(m * n);
    for _ in 0..s {
        v += kron_vec(&gaussian_vec(m, rng), &gaussian_vec(n, rng));
    }
    let norm = v.norm();
    v.unscale(norm)
}

/// Convex mixture of planted-rank projectors with exponential weights.
pub fn planted_mixture(m: usize, n: usize, k: usize, terms: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros(m * n, m * n);
    let mut total = 0.0;
    for _ in 0..terms {
        let w: f64 = -rng.random::<f64>().max(1e-300).ln();
        let v = planted_rank_vector(m, n, 1 + rng.random_range(0..k), rng);
        rho += (&v * v.adjoint()).scale(w);
        total += w;
    }
    rho.unscale(total)
}

/// `√(Σ_{i≤k} σᵢ²)`.
pub fn k2_norm(x: &ComplexMatrix, k: usize) -> f64 {
    singular_values(x).iter().take(k).map(|s| s * s).sum::<f64>().sqrt()
}

/// Minimizes `f` from `start` with the Nelder–Mead simplex method.
pub fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, start: &[f64], step: f64, iters: usize) -> (Vec<f64>, f64) {
    let d = start.len();
    let mut pts: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..d {
        let mut p = start.to_vec();
        p[i] += step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    for _ in 0..iters {
        let mut order: Vec<usize> = (0..=d).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        if (vals[d] - vals[0]).abs() <= 1e-15 * vals[0].abs().max(1e-300) {
            break;
        }
        let centroid: Vec<f64> = (0..d).map(|j| pts[..d].iter().map(|p| p[j]).sum::<f64>() / d as f64).collect();
        let along = |t: f64| -> Vec<f64> { (0..d).map(|j| centroid[j] + t * (pts[d][j] - centroid[j])).collect() };
        let r = along(-1.0);
        let fr = f(&r);
        if fr < vals[0] {
            let e = along(-2.0);
            let fe = f(&e);
            if fe < fr {
                pts[d] = e;
                vals[d] = fe;
            } else {
                pts[d] = r;
                vals[d] = fr;
            }
        } else if fr < vals[d - 1] {
            pts[d] = r;
            vals[d] = fr;
        } else {
            let cpt = if fr < vals[d] { along(-0.5) } else { along(0.5) };
            let fc = f(&cpt);
            if fc < vals[d].min(fr) {
                pts[d] = cpt;
                vals[d] = fc;
            } else {
                for i in 1..=d {
                    pts[i] = (0..d).map(|j| pts[0][j] + 0.5 * (pts[i][j] - pts[0][j])).collect();
                    vals[i] = f(&pts[i]);
                }
            }
        }
    }
    let best = (0..=d).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    (pts[best].clone(), vals[best])
}

/// Lower estimate of `sup_Y |⟨X,Y⟩| / ‖Y‖_(k,2)` by restarted ascent.
///
/// The search runs over `Y = U diag(y) V†` in the singular frames of `X`
/// (von Neumann's trace inequality says aligned `Y` suffice); every restart's
/// end point is then re-evaluated as a full matrix ratio, so the returned
/// value is attained by an explicit `Y`.
pub fn k2_dual_ascent(x: &ComplexMatrix, k: usize, restarts: usize, rng: &mut ChaCha8Rng) -> f64 {
    let triples = singular_triples(&if x.nrows() >= x.ncols() { x.clone() } else { x.adjoint() });
    let sigma: Vec<f64> = triples.iter().map(|t| t.0).collect();
    let r = sigma.len();
    let neg_ratio = |y: &[f64]| -> f64 {
        let mut a: Vec<f64> = y.iter().map(|v| v.abs()).collect();
        let num: f64 = a.iter().zip(&sigma).map(|(a, s)| a * s).sum();
        a.sort_by(|p, q| q.total_cmp(p));
        let den = a.iter().take(k).map(|v| v * v).sum::<f64>().sqrt();
        if den == 0.0 { 0.0 } else { -num / den }
    };
    let mut best = 0.0f64;
    for _ in 0..restarts {
        let start: Vec<f64> = (0..r).map(|_| rng.random::<f64>() + 0.01).collect();
        let (y, _) = nelder_mead(&neg_ratio, &start, 0.2, 4000);
        // explicit matrix with these singular values in X's frames
        let mut ymat = ComplexMatrix::zeros(triples[0].1.len(), triples[0].2.len());
        for ((_, u, v), yi) in triples.iter().zip(&y) {
            ymat += (u * v.adjoint()).scale(yi.abs());
        }
        let ymat = if x.nrows() >= x.ncols() { ymat } else { ymat.adjoint() };
        let pairing: C64 = ymat.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
        let den = k2_norm(&ymat, k);
        if den > 0.0 {
            best = best.max(pairing.norm() / den);
        }
    }
    best
}

pub fn trace_norm(x: &ComplexMatrix) -> f64 {
    singular_values(x).iter().sum()
}
