//! Multimode coherent superpositions and the tripartite cat state.
//!
//! A superposition `Σ_k λ_k |β_k^{(1)}, …, β_k^{(M)}⟩` has a P function that is
//! a sum of products of single-mode interference terms, so every regularized
//! distribution and every phase-space integral factorizes term by term.

use num_complex::Complex64 as C64;

use crate::analytic::{
    interference_term, regularized_delta, DeltaTerm, KernelSpec, IMAGINARY_TOLERANCE,
};
use crate::error::{check_finite, invalid, Error, Result};
use crate::fock::{coherent_fock, fidelity, overlap, MultimodeVector};
use crate::grid::{integrate, Grid2D, GridAxes};

/// One product term: a coefficient times an interference term per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm {
    pub coefficient: C64,
    pub modes: Vec<DeltaTerm>,
}

impl ProductTerm {
    fn is_diagonal(&self) -> bool {
        self.modes.iter().all(|t| t.is_diagonal())
    }
}

/// Multimode P function as a sum of product terms.
#[derive(Debug, Clone, PartialEq)]
pub struct MultimodeStateP {
    mode_count: usize,
    terms: Vec<ProductTerm>,
}

impl MultimodeStateP {
    /// Expands `Σ_{k,j} λ_k λ_j* Π_m |β_k^{(m)}⟩⟨β_j^{(m)}|` from `(λ_k, [β_k^{(m)}])` branches.
    pub fn from_branches(branches: &[(C64, Vec<C64>)]) -> Result<Self> {
        let Some(first) = branches.first() else {
            return Err(Error::EmptySuperposition);
        };
        let mode_count = first.1.len();
        if mode_count == 0 {
            return Err(invalid("modes", "at least one mode is required"));
        }
        for (lambda, amps) in branches {
            if amps.len() != mode_count {
                return Err(Error::ShapeMismatch {
                    left: vec![mode_count],
                    right: vec![amps.len()],
                });
            }
            check_finite("lambda", &[lambda.re, lambda.im])?;
            for a in amps {
                check_finite("beta", &[a.re, a.im])?;
            }
        }
        let mut terms = Vec::with_capacity(branches.len().pow(2));
        for (lk, ket) in branches {
            for (lj, bra) in branches {
                terms.push(ProductTerm {
                    coefficient: lk * lj.conj(),
                    modes: ket
                        .iter()
                        .zip(bra)
                        .map(|(&k, &b)| interference_term(k, b))
                        .collect(),
                });
            }
        }
        Ok(Self { mode_count, terms })
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    /// `Σ coefficient · Π_m ⟨bra_m|ket_m⟩`.
    pub fn trace(&self) -> C64 {
        self.terms
            .iter()
            .map(|t| t.coefficient * t.modes.iter().map(|d| d.prefactor()).product::<C64>())
            .sum()
    }

    /// Keeps only the terms that are diagonal in every mode.
    pub fn diagonal_part(&self) -> Self {
        Self {
            mode_count: self.mode_count,
            terms: self
                .terms
                .iter()
                .filter(|t| t.is_diagonal())
                .cloned()
                .collect(),
        }
    }

    /// Regularized P function at one point per mode.
    pub fn evaluate(&self, kernel: &KernelSpec, alphas: &[C64]) -> Result<f64> {
        if alphas.len() != self.mode_count {
            return Err(Error::ShapeMismatch {
                left: vec![self.mode_count],
                right: vec![alphas.len()],
            });
        }
        real_part(self.terms.iter().map(|t| {
            t.coefficient
                * t.modes
                    .iter()
                    .zip(alphas)
                    .map(|(d, &a)| regularized_delta(d, kernel, a))
                    .product::<C64>()
        }))
    }

    /// `∫ P^K d²α_1 ⋯ d²α_M` over the product of identical grids, term by term.
    pub fn integrate_separable(&self, kernel: &KernelSpec, axes: &GridAxes) -> Result<f64> {
        real_part(self.terms.iter().map(|t| {
            t.coefficient
                * t.modes
                    .iter()
                    .map(|d| {
                        integrate(&Grid2D::from_fn(*axes, |a| regularized_delta(d, kernel, a)))
                    })
                    .product::<C64>()
        }))
    }
}

fn real_part(contributions: impl Iterator<Item = C64>) -> Result<f64> {
    let mut total = C64::new(0.0, 0.0);
    let mut scale = 0.0;
    for c in contributions {
        scale += c.norm();
        total += c;
    }
    let tolerance = IMAGINARY_TOLERANCE * scale.max(1.0);
    if total.im.abs() > tolerance {
        return Err(Error::ImaginaryResidual {
            residual: total.im.abs(),
            tolerance,
        });
    }
    Ok(total.re)
}

/// `1/√(2(1 − e^{−6|β|²}))`, the weight of each branch of the tripartite cat.
fn tripartite_weight(beta: C64) -> Result<f64> {
    check_finite("beta", &[beta.re, beta.im])?;
    if beta.norm_sqr() == 0.0 {
        return Err(invalid(
            "beta",
            "the tripartite cat vanishes at β = 0; use w_state",
        ));
    }
    Ok((2.0 * -(-6.0 * beta.norm_sqr()).exp_m1()).sqrt().recip())
}

/// `(|β,β,β⟩ − |−β,−β,−β⟩)/√(2(1 − e^{−6|β|²}))` in Fock space, cutoff per mode.
pub fn tripartite_state(beta: C64, cutoff: usize) -> Result<MultimodeVector> {
    let lambda = tripartite_weight(beta)?;
    let plus = coherent_fock(beta, cutoff)?;
    let minus = coherent_fock(-beta, cutoff)?;
    let a = MultimodeVector::product(&[plus.clone(), plus.clone(), plus])?;
    let b = MultimodeVector::product(&[minus.clone(), minus.clone(), minus])?;
    let amplitudes = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y) * lambda)
        .collect();
    MultimodeVector::new(a.dims().to_vec(), amplitudes)
}

/// `(|1,0,0⟩ + |0,1,0⟩ + |0,0,1⟩)/√3`.
pub fn w_state(cutoff: usize) -> Result<MultimodeVector> {
    if cutoff == 0 {
        return Err(invalid(
            "cutoff",
            "the W state needs at least one photon per mode",
        ));
    }
    let d = cutoff + 1;
    let mut amplitudes = vec![C64::new(0.0, 0.0); d * d * d];
    let mut psi = MultimodeVector::new(vec![d, d, d], amplitudes.clone())?;
    for idx in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
        let k = psi.flat_index(&idx).expect("index within cutoff");
        amplitudes[k] = C64::new(1.0 / 3f64.sqrt(), 0.0);
    }
    psi = MultimodeVector::new(vec![d, d, d], amplitudes)?;
    Ok(psi)
}

/// P function of the tripartite cat state.
pub fn tripartite_state_p(beta: C64) -> Result<MultimodeStateP> {
    let lambda = C64::new(tripartite_weight(beta)?, 0.0);
    MultimodeStateP::from_branches(&[(lambda, vec![beta; 3]), (-lambda, vec![-beta; 3])])
}

/// Regularized tripartite P function at `(α_1, α_2, α_3)`.
pub fn tripartite_p(beta: C64, kernel: &KernelSpec, alphas: [C64; 3]) -> Result<f64> {
    tripartite_state_p(beta)?.evaluate(kernel, &alphas)
}

/// Fidelity with the W state at `beta_small` and the branch overlap
/// `|⟨−β|β⟩|³ = e^{−6β²}` at `beta_large`.
pub fn ghz_w_limits(beta_small: f64, beta_large: f64, cutoff: usize) -> Result<(f64, f64)> {
    check_finite("beta", &[beta_small, beta_large])?;
    if !(beta_small > 0.0 && beta_small <= beta_large) {
        return Err(invalid(
            "beta",
            format!("need 0 < {beta_small} ≤ {beta_large}"),
        ));
    }
    let psi = tripartite_state(C64::new(beta_small, 0.0), cutoff)?;
    let f_w = fidelity(&psi, &w_state(cutoff)?)?;
    let b = C64::new(beta_large, 0.0);
    let ghz_cross = overlap(-b, b).norm().powi(3);
    Ok((f_w, ghz_cross))
}
