//! Hybrid quasiprobabilities of a qubit entangled with an oscillator.
//!
//! For `(|0⟩|β⟩ + |1⟩|−β⟩)/√2` the joint distribution is a 2×2 matrix of
//! regularized interference terms indexed by the qubit basis. A negative
//! eigenvalue at any phase-space point certifies hybrid nonclassicality.

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{interference_term, regularized_delta, KernelSpec};
use crate::grid::GridAxes;

/// Which entries of the hybrid matrix enter a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OffDiagonal {
    Keep,
    /// Zero the coherences, leaving the classical mixture of the two branches.
    Drop,
}

/// `[[P_{|β⟩⟨β|}, P_{|β⟩⟨−β|}], [P_{|−β⟩⟨β|}, P_{|−β⟩⟨−β|}]]` at `alpha`.
///
/// The state's overall 1/2 weight is omitted; it does not change the sign of
/// any eigenvalue.
pub fn hybrid_matrix(beta: C64, kernel: &KernelSpec, alpha: C64) -> Matrix2<C64> {
    let entry = |ket: C64, bra: C64| regularized_delta(&interference_term(ket, bra), kernel, alpha);
    Matrix2::new(
        entry(beta, beta),
        entry(beta, -beta),
        entry(-beta, beta),
        entry(-beta, -beta),
    )
}

/// `max |M − M†|` over the entries.
pub fn hermiticity_residual(m: &Matrix2<C64>) -> f64 {
    (m - m.adjoint())
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

/// Smaller eigenvalue `(a+d)/2 − √(((a−d)/2)² + |b|²)` of the Hermitian part.
pub fn min_eigenvalue(m: &Matrix2<C64>) -> f64 {
    let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
    let b = (m[(0, 1)] + m[(1, 0)].conj()) / 2.0;
    let half = (a - d) / 2.0;
    (a + d) / 2.0 - (half * half + b.norm_sqr()).sqrt()
}

/// Result of a minimum-eigenvalue scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenScan {
    pub argmin_re: f64,
    pub argmin_im: f64,
    pub min_eigenvalue: f64,
}

impl EigenScan {
    pub fn argmin(&self) -> C64 {
        C64::new(self.argmin_re, self.argmin_im)
    }
}

/// Smallest eigenvalue of each grid node, row-major (imaginary axis outer).
pub fn eigenvalue_field(
    beta: C64,
    kernel: &KernelSpec,
    axes: &GridAxes,
    off: OffDiagonal,
) -> Vec<f64> {
    let n = axes.re.count();
    (0..axes.len())
        .into_par_iter()
        .map(|k| {
            let mut m = hybrid_matrix(beta, kernel, axes.point(k % n, k / n));
            if off == OffDiagonal::Drop {
                m[(0, 1)] = C64::new(0.0, 0.0);
                m[(1, 0)] = C64::new(0.0, 0.0);
            }
            min_eigenvalue(&m)
        })
        .collect()
}

/// Global minimum eigenvalue over the grid; ties go to the first node in storage order.
pub fn min_eig_scan(
    beta: C64,
    kernel: &KernelSpec,
    axes: &GridAxes,
    off: OffDiagonal,
) -> EigenScan {
    let field = eigenvalue_field(beta, kernel, axes, off);
    let (best, value) =
        field.iter().enumerate().fold(
            (0, f64::INFINITY),
            |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) },
        );
    let n = axes.re.count();
    let at = axes.point(best % n, best / n);
    EigenScan {
        argmin_re: at.re,
        argmin_im: at.im,
        min_eigenvalue: value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn sinc2_entries_at_origin() {
        let k = KernelSpec::sinc2(3.0).unwrap();
        let m = hybrid_matrix(c(1.0, 0.0), &k, c(0.0, 0.0));
        let diag = 3.0f64.sin().powi(2) / (PI * PI);
        let off = (-2.0f64).exp() * 3.0f64.sinh().powi(2) / (PI * PI);
        assert_abs_diff_eq!(m[(0, 0)].re, diag, epsilon = 1e-12);
        assert_abs_diff_eq!(m[(1, 1)].re, diag, epsilon = 1e-12);
        assert_abs_diff_eq!(m[(0, 1)].re, off, epsilon = 1e-12);
        assert_abs_diff_eq!(m[(1, 0)].re, off, epsilon = 1e-12);
        assert!(min_eigenvalue(&m) < 0.0);
    }

    #[test]
    fn degenerate_amplitude_gives_rank_one() {
        let k = KernelSpec::sinc2(2.0).unwrap();
        let m = hybrid_matrix(c(0.0, 0.0), &k, c(0.3, -0.2));
        assert!((m[(0, 0)] - m[(0, 1)]).norm() < 1e-15 && (m[(0, 0)] - m[(1, 1)]).norm() < 1e-15);
        assert_abs_diff_eq!(min_eigenvalue(&m), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn husimi_peak() {
        let beta = c(2.0, 0.0);
        let m = hybrid_matrix(beta, &KernelSpec::husimi(), beta);
        assert_abs_diff_eq!(m[(0, 0)].re, 1.0 / PI, epsilon = 1e-14);
    }

    #[test]
    fn pointwise_hermitian() {
        let k = KernelSpec::sinc2(3.0).unwrap();
        for a in [c(0.0, 0.0), c(0.4, -1.3), c(-2.0, 0.7)] {
            for beta in [c(1.0, 0.0), c(0.5, 0.8)] {
                let m = hybrid_matrix(beta, &k, a);
                assert!((m[(0, 1)] - m[(1, 0)].conj()).norm() < 1e-14);
                assert!(hermiticity_residual(&m) < 1e-10);
            }
        }
    }

    #[test]
    fn scans() {
        let k = KernelSpec::sinc2(3.0).unwrap();
        let axes = GridAxes::square(4.0, 41).unwrap();
        let hit = min_eig_scan(c(1.0, 0.0), &k, &axes, OffDiagonal::Keep);
        assert!(hit.min_eigenvalue < 0.0);
        let zero = min_eig_scan(c(0.0, 0.0), &k, &axes, OffDiagonal::Keep);
        assert!(zero.min_eigenvalue >= -1e-10);
        let diag = min_eig_scan(c(1.0, 0.0), &k, &axes, OffDiagonal::Drop);
        assert!(diag.min_eigenvalue >= -1e-12);
    }
}
