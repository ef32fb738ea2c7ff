//! Lawson–Hanson active-set solver for `min ‖Ax − b‖₂` subject to `x ≥ 0`.

use nalgebra::{DMatrix, DVector};

pub(crate) struct NnlsSolution {
    pub x: DVector<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Unconstrained least squares restricted to the columns in `passive`.
fn passive_lstsq(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[usize]) -> DVector<f64> {
    let sub = a.select_columns(passive);
    let sol = sub
        .svd(true, true)
        .solve(b, 1e-14)
        .expect("SVD computed with both factors");
    let mut full = DVector::zeros(a.ncols());
    for (k, &j) in passive.iter().enumerate() {
        full[j] = sol[k];
    }
    full
}

pub(crate) fn nnls(a: &DMatrix<f64>, b: &DVector<f64>, tol: f64, max_iter: usize) -> NnlsSolution {
    let n = a.ncols();
    let mut x = DVector::<f64>::zeros(n);
    let mut passive = vec![false; n];
    let mut iterations = 0;
    loop {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..n)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else {
            return NnlsSolution {
                x,
                iterations,
                converged: true,
            };
        };
        passive[j] = true;
        loop {
            iterations += 1;
            if iterations > max_iter {
                return NnlsSolution {
                    x,
                    iterations,
                    converged: false,
                };
            }
            let set: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let s = passive_lstsq(a, b, &set);
            if set.iter().all(|&i| s[i] > 0.0) {
                x = s;
                break;
            }
            let step = set
                .iter()
                .filter(|&&i| s[i] <= 0.0)
                .map(|&i| x[i] / (x[i] - s[i]))
                .fold(f64::INFINITY, f64::min);
            x += (s - &x) * step;
            for &i in &set {
                if x[i] <= tol {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
    }
}
