use num_complex::Complex64 as C64;

use super::delta::{interference_term, DeltaTerm};
use super::kernel::{regularized_delta, KernelSpec};
use super::smooth::{spats_regularized, thermal_regularized};
use crate::error::{check_finite, invalid, Error, Result};
use crate::fock::CoherentSuperposition;

/// Tolerance on the imaginary part left after summing Hermitian pairs.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedDelta {
    pub coefficient: C64,
    pub term: DeltaTerm,
}

/// Regular (function-valued) contributions to a P function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmoothComponent {
    Thermal { nbar: f64 },
    Spats { nbar: f64 },
}

impl SmoothComponent {
    fn regularized(&self, kernel: &KernelSpec, alpha: C64) -> Result<f64> {
        match *self {
            SmoothComponent::Thermal { nbar } => thermal_regularized(nbar, kernel, alpha),
            SmoothComponent::Spats { nbar } => spats_regularized(nbar, kernel, alpha),
        }
    }
}

/// P function of a state as a sum of weighted complex-delta terms plus
/// optional smooth components.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StateP {
    deltas: Vec<WeightedDelta>,
    smooth: Vec<(f64, SmoothComponent)>,
}

impl StateP {
    /// Checks Hermitian closure of the delta terms.
    pub fn new(deltas: Vec<WeightedDelta>, smooth: Vec<(f64, SmoothComponent)>) -> Result<Self> {
        for (w, comp) in &smooth {
            check_finite("weight", &[*w])?;
            let (SmoothComponent::Thermal { nbar } | SmoothComponent::Spats { nbar }) = comp;
            if nbar.is_nan() || *nbar <= 0.0 {
                return Err(invalid(
                    "nbar",
                    format!("mean photon number must be positive, got {nbar}"),
                ));
            }
        }
        let state = Self { deltas, smooth };
        state.check_hermitian_closure()?;
        Ok(state)
    }

    /// Expansion `Σ_{k,k̃} λ_k λ_k̃* |β_k⟩⟨β_k̃|` of a coherent superposition.
    pub fn from_superposition(state: &CoherentSuperposition) -> Self {
        let mut deltas = Vec::with_capacity(state.terms().len().pow(2));
        for (lk, bk) in state.terms() {
            for (lj, bj) in state.terms() {
                deltas.push(WeightedDelta {
                    coefficient: lk * lj.conj(),
                    term: interference_term(*bk, *bj),
                });
            }
        }
        Self {
            deltas,
            smooth: Vec::new(),
        }
    }

    pub fn thermal(nbar: f64) -> Result<Self> {
        Self::new(Vec::new(), vec![(1.0, SmoothComponent::Thermal { nbar })])
    }

    pub fn spats(nbar: f64) -> Result<Self> {
        Self::new(Vec::new(), vec![(1.0, SmoothComponent::Spats { nbar })])
    }

    /// `weight_self · self + weight_other · other`.
    pub fn mix(&self, weight_self: f64, other: &StateP, weight_other: f64) -> StateP {
        let scale = |d: &WeightedDelta, w: f64| WeightedDelta {
            coefficient: d.coefficient * w,
            term: d.term,
        };
        StateP {
            deltas: self
                .deltas
                .iter()
                .map(|d| scale(d, weight_self))
                .chain(other.deltas.iter().map(|d| scale(d, weight_other)))
                .collect(),
            smooth: self
                .smooth
                .iter()
                .map(|(w, c)| (w * weight_self, *c))
                .chain(other.smooth.iter().map(|(w, c)| (w * weight_other, *c)))
                .collect(),
        }
    }

    pub fn deltas(&self) -> &[WeightedDelta] {
        &self.deltas
    }

    pub fn smooth(&self) -> &[(f64, SmoothComponent)] {
        &self.smooth
    }

    /// Only the diagonal (`ket == bra`) delta terms and smooth parts.
    pub fn diagonal_part(&self) -> StateP {
        StateP {
            deltas: self
                .deltas
                .iter()
                .filter(|d| d.term.is_diagonal())
                .copied()
                .collect(),
            smooth: self.smooth.clone(),
        }
    }

    /// `∫P d²α = Σ coefficient·⟨bra|ket⟩ + Σ smooth weights`.
    pub fn trace(&self) -> C64 {
        let deltas: C64 = self
            .deltas
            .iter()
            .map(|d| d.coefficient * d.term.prefactor())
            .sum();
        deltas + self.smooth.iter().map(|(w, _)| *w).sum::<f64>()
    }

    fn check_hermitian_closure(&self) -> Result<()> {
        let tol = 1e-12;
        for d in &self.deltas {
            let (ket, bra) = (d.term.ket(), d.term.bra());
            let partner = self.deltas.iter().any(|p| {
                p.term.ket() == bra
                    && p.term.bra() == ket
                    && (p.coefficient - d.coefficient.conj()).norm()
                        <= tol * d.coefficient.norm().max(1.0)
            });
            if !partner {
                return Err(Error::InvalidParameter {
                    name: "deltas",
                    reason: format!("term |{ket}⟩⟨{bra}| has no conjugate partner"),
                });
            }
        }
        Ok(())
    }
}

/// Kernel-regularized P function of `state` at `alpha`.
///
/// The imaginary part of the Hermitian-pair sum must vanish; a residual above
/// `1e-10` (relative to the summed term magnitudes when those exceed one) is
/// reported as [`Error::ImaginaryResidual`].
pub fn state_p_regularized(state: &StateP, kernel: &KernelSpec, alpha: C64) -> Result<f64> {
    let mut total = C64::new(0.0, 0.0);
    let mut scale = 0.0;
    for d in &state.deltas {
        let v = d.coefficient * regularized_delta(&d.term, kernel, alpha);
        scale += v.norm();
        total += v;
    }
    for (w, comp) in &state.smooth {
        let v = w * comp.regularized(kernel, alpha)?;
        scale += v.abs();
        total += v;
    }
    let tolerance = IMAGINARY_TOLERANCE * scale.max(1.0);
    if total.im.abs() >= tolerance {
        return Err(Error::ImaginaryResidual {
            residual: total.im.abs(),
            tolerance,
        });
    }
    Ok(total.re)
}

/// s-parametrized distribution: `s = −1` is Husimi Q, `s = 0` the Wigner function.
pub fn s_param_state(state: &StateP, order: f64, alpha: C64) -> Result<f64> {
    state_p_regularized(state, &KernelSpec::gaussian_s(order)?, alpha)
}
