//! Small dense optimizers: L-BFGS with backtracking line search for smooth
//! convex objectives, and Nelder-Mead for low-dimensional non-smooth searches.

use std::collections::VecDeque;

/// Outcome of an L-BFGS run.
#[derive(Debug, Clone)]
pub struct LbfgsOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `f` (which writes the gradient into its second argument and
/// returns the value) starting from `x0`. Convergence is declared when the
/// gradient infinity norm drops below `grad_tol`.
pub fn lbfgs<F>(mut f: F, x0: &[f64], grad_tol: f64, max_iter: usize) -> LbfgsOutcome
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    const MEMORY: usize = 10;
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut grad = vec![0.0; n];
    let mut value = f(&x, &mut grad);

    let mut s_hist: VecDeque<Vec<f64>> = VecDeque::new();
    let mut y_hist: VecDeque<Vec<f64>> = VecDeque::new();
    let mut rho_hist: VecDeque<f64> = VecDeque::new();

    let inf_norm = |v: &[f64]| v.iter().fold(0.0f64, |m, &g| m.max(g.abs()));
    let mut gnorm = inf_norm(&grad);

    for iter in 0..max_iter {
        if gnorm <= grad_tol {
            return LbfgsOutcome {
                x,
                value,
                grad_norm: gnorm,
                iterations: iter,
                converged: true,
            };
        }

        // two-loop recursion
        let mut dir: Vec<f64> = grad.iter().map(|g| -g).collect();
        let mut alphas = Vec::with_capacity(s_hist.len());
        for i in (0..s_hist.len()).rev() {
            let a = rho_hist[i] * dot(&s_hist[i], &dir);
            axpy(-a, &y_hist[i], &mut dir);
            alphas.push(a);
        }
        if let (Some(s), Some(y)) = (s_hist.back(), y_hist.back()) {
            let scale = dot(s, y) / dot(y, y);
            if scale.is_finite() && scale > 0.0 {
                dir.iter_mut().for_each(|d| *d *= scale);
            }
        }
        alphas.reverse();
        for i in 0..s_hist.len() {
            let beta = rho_hist[i] * dot(&y_hist[i], &dir);
            axpy(alphas[i] - beta, &s_hist[i], &mut dir);
        }

        let mut slope = dot(&grad, &dir);
        if !slope.is_finite() || slope >= 0.0 {
            // restart on a non-descent direction
            dir = grad.iter().map(|g| -g).collect();
            slope = dot(&grad, &dir);
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        // backtracking Armijo search
        let mut step = 1.0;
        let mut new_x = vec![0.0; n];
        let mut new_grad = vec![0.0; n];
        let mut new_value;
        let mut accepted = false;
        for _ in 0..60 {
            for i in 0..n {
                new_x[i] = x[i] + step * dir[i];
            }
            new_value = f(&new_x, &mut new_grad);
            if new_value.is_finite() && new_value <= value + 1e-4 * step * slope {
                let s: Vec<f64> = (0..n).map(|i| new_x[i] - x[i]).collect();
                let y: Vec<f64> = (0..n).map(|i| new_grad[i] - grad[i]).collect();
                let sy = dot(&s, &y);
                if sy > 1e-300 {
                    if s_hist.len() == MEMORY {
                        s_hist.pop_front();
                        y_hist.pop_front();
                        rho_hist.pop_front();
                    }
                    rho_hist.push_back(1.0 / sy);
                    s_hist.push_back(s);
                    y_hist.push_back(y);
                }
                x.copy_from_slice(&new_x);
                grad.copy_from_slice(&new_grad);
                value = new_value;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // no progress possible at f64 resolution
            gnorm = inf_norm(&grad);
            return LbfgsOutcome {
                x,
                value,
                grad_norm: gnorm,
                iterations: iter + 1,
                converged: gnorm <= grad_tol,
            };
        }
        gnorm = inf_norm(&grad);
    }

    LbfgsOutcome {
        x,
        value,
        grad_norm: gnorm,
        iterations: max_iter,
        converged: gnorm <= grad_tol,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Nelder-Mead simplex minimization. Returns the best vertex and its value
/// once the simplex value spread drops below `f_tol` or after `max_iter`
/// reflections. Deterministic given the starting point and step.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], init_step: f64, f_tol: f64, max_iter: usize) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += init_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    for _ in 0..max_iter {
        // order ascending by value
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let reordered: Vec<Vec<f64>> = idx.iter().map(|&i| simplex[i].clone()).collect();
        let revalues: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalues;

        if (values[n] - values[0]).abs() <= f_tol * (1.0 + values[0].abs()) {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let blend = |a: f64, b: f64| -> Vec<f64> {
            (0..n).map(|j| a * centroid[j] + b * simplex[n][j]).collect()
        };

        let reflected = blend(2.0, -1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = blend(3.0, -2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let contracted = blend(0.5, 0.5);
            let fc = f(&contracted);
            if fc < values[n] {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                // shrink toward the best vertex
                for i in 1..=n {
                    for j in 0..n {
                        simplex[i][j] = 0.5 * (simplex[i][j] + simplex[0][j]);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }

    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    (simplex[best].clone(), values[best])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lbfgs_solves_quadratic() {
        // f(x) = (x0-1)^2 + 10*(x1+2)^2
        let out = lbfgs(
            |x, g| {
                g[0] = 2.0 * (x[0] - 1.0);
                g[1] = 20.0 * (x[1] + 2.0);
                (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2)
            },
            &[0.0, 0.0],
            1e-10,
            200,
        );
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-8);
        assert!((out.x[1] + 2.0).abs() < 1e-8);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let (x, _) = nelder_mead(
            |v| (1.0 - v[0]).powi(2) + 100.0 * (v[1] - v[0] * v[0]).powi(2),
            &[-1.2, 1.0],
            0.5,
            1e-14,
            4000,
        );
        assert!((x[0] - 1.0).abs() < 1e-4);
        assert!((x[1] - 1.0).abs() < 1e-4);
    }
}
