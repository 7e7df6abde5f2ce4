//! Moment-cloud summarization: k-means quantization into representative
//! points, and dimensionality diagnostics via the PCA spectrum and a
//! diffusion-map spectrum.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

/// Default number of representative points.
pub const DEFAULT_REPRESENTATIVES: usize = 16;

/// Quantized representation of a point cloud: `k` representatives with the
/// percentage of observations each one stands for.
#[derive(Debug, Clone)]
pub struct QuantizedSet {
    /// `k x d` matrix of representatives, rows sorted lexicographically.
    pub points: DMatrix<f64>,
    /// Cluster shares in percent; nonnegative, summing to 100.
    pub weights: Vec<f64>,
}

/// Eigenvalue report of a spectral embedding.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// Reported eigenvalues, descending and nonnegative.
    pub eigenvalues: Vec<f64>,
    /// Cumulative percentage weights; nondecreasing with final entry 100.
    pub cumulative_weights: Vec<f64>,
}

/// Diffusion-map kernel bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// Wide-kernel default: four times the largest squared pairwise
    /// distance, so affinities stay in the near-linear regime and the
    /// spectrum reflects global geometry.
    Auto,
    Fixed(f64),
}

/// Lloyd k-means with k-means++ seeding on a deterministic stream.
///
/// Input rows are first sorted lexicographically so the result depends only
/// on the multiset of rows and the seed, not their order. Empty clusters are
/// reseeded from the point farthest from its current representative.
pub fn quantize(data: &DMatrix<f64>, k: usize, seed: u64) -> Result<QuantizedSet> {
    let n = data.nrows();
    let d = data.ncols();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if n < k {
        return Err(Error::InvalidParameter(format!(
            "need at least k = {k} rows, got {n}"
        )));
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("data must be finite".into()));
    }

    // canonical row order
    let mut rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..d).map(|j| data[(i, j)]).collect())
        .collect();
    rows.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let sq_dist = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
    };

    // k-means++ seeding
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    let first = (rng.random::<f64>() * n as f64) as usize % n;
    centers.push(rows[first].clone());
    let mut nearest: Vec<f64> = rows.iter().map(|r| sq_dist(r, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = nearest.iter().sum();
        let chosen = if total <= 0.0 {
            // all points coincide with some center; take the first uncovered
            nearest.iter().position(|&v| v > 0.0).unwrap_or(0)
        } else {
            let mut threshold = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, &w) in nearest.iter().enumerate() {
                threshold -= w;
                if threshold <= 0.0 {
                    pick = i;
                    break;
                }
            }
            pick
        };
        centers.push(rows[chosen].clone());
        for (i, row) in rows.iter().enumerate() {
            nearest[i] = nearest[i].min(sq_dist(row, centers.last().unwrap()));
        }
    }

    // Lloyd iterations to an assignment fixpoint
    let mut assignment = vec![usize::MAX; n];
    for _ in 0..500 {
        let mut changed = false;
        for (i, row) in rows.iter().enumerate() {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (c, center) in centers.iter().enumerate() {
                let dist = sq_dist(row, center);
                if dist < best_d {
                    best_d = dist;
                    best = c;
                }
            }
            if assignment[i] != best {
                assignment[i] = best;
                changed = true;
            }
        }

        // recompute means; repair empty clusters from the farthest point
        let mut counts = vec![0usize; k];
        let mut sums = vec![vec![0.0; d]; k];
        for (i, row) in rows.iter().enumerate() {
            counts[assignment[i]] += 1;
            for j in 0..d {
                sums[assignment[i]][j] += row[j];
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                let farthest = (0..n)
                    .max_by(|&a, &b| {
                        sq_dist(&rows[a], &centers[assignment[a]])
                            .total_cmp(&sq_dist(&rows[b], &centers[assignment[b]]))
                    })
                    .unwrap();
                centers[c] = rows[farthest].clone();
                assignment[farthest] = c;
                changed = true;
            } else {
                for j in 0..d {
                    centers[c][j] = sums[c][j] / counts[c] as f64;
                }
            }
        }
        if !changed {
            break;
        }
    }

    // final counts and canonical output order
    let mut counts = vec![0usize; k];
    for &a in &assignment {
        counts[a] += 1;
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        centers[a]
            .iter()
            .zip(&centers[b])
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let points = DMatrix::from_fn(k, d, |r, c| centers[order[r]][c]);
    let weights: Vec<f64> = order
        .iter()
        .map(|&c| 100.0 * counts[c] as f64 / n as f64)
        .collect();
    Ok(QuantizedSet { points, weights })
}

/// Eigenvalues of the sample covariance, descending, with cumulative
/// trace-percentage weights.
pub fn pca_spectrum(data: &DMatrix<f64>) -> Result<SpectrumReport> {
    let n = data.nrows();
    let d = data.ncols();
    if n < 2 {
        return Err(Error::InvalidParameter("PCA needs at least 2 rows".into()));
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("data must be finite".into()));
    }
    let means = DVector::from_fn(d, |j, _| data.column(j).iter().sum::<f64>() / n as f64);
    let mut cov = DMatrix::zeros(d, d);
    for i in 0..n {
        for a in 0..d {
            let da = data[(i, a)] - means[a];
            for b in a..d {
                cov[(a, b)] += da * (data[(i, b)] - means[b]);
            }
        }
    }
    for a in 0..d {
        for b in 0..a {
            cov[(a, b)] = cov[(b, a)];
        }
    }
    cov /= (n - 1) as f64;

    let mut eig: Vec<f64> = SymmetricEigen::new(cov)
        .eigenvalues
        .iter()
        .map(|&v| v.max(0.0))
        .collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    let trace: f64 = eig.iter().sum();
    if trace <= 0.0 {
        return Err(Error::Domain(
            "PCA spectrum undefined for zero-variance data".into(),
        ));
    }
    let mut cum = 0.0;
    let cumulative_weights = eig
        .iter()
        .map(|&v| {
            cum += v;
            100.0 * cum / trace
        })
        .collect();
    Ok(SpectrumReport {
        eigenvalues: eig,
        cumulative_weights,
    })
}

/// Diffusion-map spectrum: Gaussian affinities `exp(-|x - y|^2 / eps)` are
/// row-normalized into a Markov transition; the constant eigenvector's unit
/// eigenvalue is dropped and the top `min(d, n-1)` remaining eigenvalues are
/// reported with percentage weights over the reported set.
pub fn diffusion_spectrum(data: &DMatrix<f64>, bandwidth: Bandwidth) -> Result<SpectrumReport> {
    let n = data.nrows();
    let d = data.ncols();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "diffusion map needs at least 2 rows".into(),
        ));
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("data must be finite".into()));
    }

    let mut sq = DMatrix::zeros(n, n);
    let mut max_sq = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let mut s = 0.0;
            for m in 0..d {
                let diff = data[(i, m)] - data[(j, m)];
                s += diff * diff;
            }
            sq[(i, j)] = s;
            sq[(j, i)] = s;
            max_sq = max_sq.max(s);
        }
    }
    let eps = match bandwidth {
        Bandwidth::Fixed(e) => {
            if !(e > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "bandwidth must be positive, got {e}"
                )));
            }
            e
        }
        Bandwidth::Auto => {
            if max_sq > 0.0 {
                4.0 * max_sq
            } else {
                1.0 // all points coincide; any bandwidth gives the same spectrum
            }
        }
    };

    let affinity = DMatrix::from_fn(n, n, |i, j| (-sq[(i, j)] / eps).exp());
    let mut disconnected = true;
    'outer: for i in 0..n {
        for j in 0..n {
            if i != j && affinity[(i, j)] >= 1e-12 {
                disconnected = false;
                break 'outer;
            }
        }
    }
    if disconnected {
        return Err(Error::Domain(
            "affinity graph is disconnected: all off-diagonal affinities below 1e-12".into(),
        ));
    }

    // symmetric conjugation of the Markov normalization keeps the spectrum
    // real: D^{-1/2} W D^{-1/2} is similar to D^{-1} W
    let degree = DVector::from_fn(n, |i, _| affinity.row(i).sum());
    let sym = DMatrix::from_fn(n, n, |i, j| {
        affinity[(i, j)] / (degree[i] * degree[j]).sqrt()
    });
    let mut eig: Vec<f64> = SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eig.sort_by(|a, b| b.total_cmp(a));

    // drop the constant eigenvector's eigenvalue (1) and clamp to [0, 1]
    let reported = d.min(n - 1);
    let eigenvalues: Vec<f64> = eig[1..1 + reported]
        .iter()
        .map(|&v| v.clamp(0.0, 1.0))
        .collect();
    let total: f64 = eigenvalues.iter().sum();
    let mut cum = 0.0;
    let cumulative_weights: Vec<f64> = if total > 0.0 {
        eigenvalues
            .iter()
            .map(|&v| {
                cum += v;
                100.0 * cum / total
            })
            .collect()
    } else {
        // fully degenerate spectrum: every nontrivial direction is exhausted
        vec![100.0; reported]
    };
    Ok(SpectrumReport {
        eigenvalues,
        cumulative_weights,
    })
}
