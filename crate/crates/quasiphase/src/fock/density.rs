use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::state::{coherent_fock, CoherentSuperposition, FockVector};
use crate::error::{check_finite, invalid, Error, Result};

/// Square complex matrix over Fock indices `0..=cutoff`.
///
/// Physical states are Hermitian, unit trace and positive semidefinite;
/// [`DensityMatrix::validate`] checks that. The channels in this module are
/// linear, so they also accept non-Hermitian operators such as `|β̃⟩⟨β|`
/// built with [`DensityMatrix::from_operator`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    /// Wraps `entries` and checks the density-matrix invariants.
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        let rho = Self::from_operator(entries)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps an arbitrary square operator without physical checks.
    pub fn from_operator(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::ShapeMismatch {
                left: vec![entries.nrows()],
                right: vec![entries.ncols()],
            });
        }
        Ok(Self { entries })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &FockVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        Self {
            entries: &v * v.adjoint(),
        }
    }

    /// `|ket⟩⟨bra|` on a common cutoff.
    pub fn outer(ket: &FockVector, bra: &FockVector) -> Result<Self> {
        if ket.cutoff() != bra.cutoff() {
            return Err(Error::ShapeMismatch {
                left: vec![ket.cutoff() + 1],
                right: vec![bra.cutoff() + 1],
            });
        }
        let k = nalgebra::DVector::from_column_slice(ket.amplitudes());
        let b = nalgebra::DVector::from_column_slice(bra.amplitudes());
        Ok(Self {
            entries: &k * b.adjoint(),
        })
    }

    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let diag = nalgebra::DVector::from_iterator(
            populations.len(),
            populations.iter().map(|&p| C64::new(p, 0.0)),
        );
        Self::from_operator(DMatrix::from_diagonal(&diag))
    }

    pub fn cutoff(&self) -> usize {
        self.entries.nrows() - 1
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn element(&self, m: usize, n: usize) -> C64 {
        self.entries[(m, n)]
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// `max |ρ − ρ†|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.entries.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.entries + self.entries.adjoint()) * C64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `Tr(ρ n̂)`.
    pub fn mean_photon_number(&self) -> f64 {
        (0..self.entries.nrows())
            .map(|n| n as f64 * self.entries[(n, n)].re)
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_residual();
        if herm >= 1e-12 {
            return Err(Error::InvalidDensity(format!(
                "Hermiticity residual {herm:e}"
            )));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() >= 1e-10 {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -1e-10 {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    /// Zero-pads (or truncates) to a new cutoff.
    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        let n = cutoff + 1;
        let keep = n.min(self.entries.nrows());
        let mut entries = DMatrix::zeros(n, n);
        entries
            .view_mut((0, 0), (keep, keep))
            .copy_from(&self.entries.view((0, 0), (keep, keep)));
        Self { entries }
    }

    /// Frobenius distance, zero-padding the smaller operand.
    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        let c = self.cutoff().max(other.cutoff());
        (self.with_cutoff(c).entries - other.with_cutoff(c).entries).norm()
    }

    /// Largest entrywise deviation, zero-padding the smaller operand.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        let c = self.cutoff().max(other.cutoff());
        let a = self.with_cutoff(c);
        let b = other.with_cutoff(c);
        a.entries
            .iter()
            .zip(b.entries.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// `⟨ψ|ρ|ψ⟩`, with `ψ` padded or truncated to this cutoff.
    pub fn expectation_in(&self, psi: &FockVector) -> C64 {
        let n = self.entries.nrows();
        let amps = psi.amplitudes();
        let v = nalgebra::DVector::from_fn(n, |i, _| amps.get(i).copied().unwrap_or_default());
        (v.adjoint() * &self.entries * &v)[(0, 0)]
    }
}

/// `ρ = Σ_{k,k̃} λ_k λ_k̃* |β_k⟩⟨β_k̃|` in the Fock basis.
pub fn superposition_density(
    state: &CoherentSuperposition,
    cutoff: usize,
) -> Result<DensityMatrix> {
    if !state.is_normalized() {
        return Err(Error::NotNormalized(state.norm_sqr()));
    }
    Ok(DensityMatrix::pure(&state.to_fock(cutoff)?))
}

fn check_mean(nbar: f64) -> Result<()> {
    check_finite("nbar", &[nbar])?;
    if nbar <= 0.0 {
        return Err(invalid(
            "nbar",
            format!("mean photon number must be positive, got {nbar}"),
        ));
    }
    Ok(())
}

/// Thermal state with populations `n̄ⁿ/(1+n̄)^{n+1}`.
pub fn thermal_density(nbar: f64, cutoff: usize) -> Result<DensityMatrix> {
    check_mean(nbar)?;
    let ratio = nbar / (1.0 + nbar);
    let mut p = 1.0 / (1.0 + nbar);
    let mut populations = Vec::with_capacity(cutoff + 1);
    for _ in 0..=cutoff {
        populations.push(p);
        p *= ratio;
    }
    DensityMatrix::diagonal(&populations)
}

/// Single-photon-added thermal state `â†ρ_th â/(1+n̄)`.
///
/// Populations are `n n̄^{n−1}/(1+n̄)^{n+1}`; the vacuum is empty.
pub fn spats_density(nbar: f64, cutoff: usize) -> Result<DensityMatrix> {
    check_mean(nbar)?;
    let ratio = nbar / (1.0 + nbar);
    let mut thermal = 1.0 / (1.0 + nbar);
    let mut populations = vec![0.0; cutoff + 1];
    for (n, slot) in populations.iter_mut().enumerate().skip(1) {
        *slot = n as f64 * thermal / (1.0 + nbar);
        thermal *= ratio;
    }
    DensityMatrix::diagonal(&populations)
}

/// Husimi function `Q(α) = ⟨α|ρ|α⟩/π` by Fock contraction.
pub fn husimi_fock(rho: &DensityMatrix, alpha: C64) -> Result<f64> {
    let coh = coherent_fock(alpha, rho.cutoff())?;
    Ok(rho.expectation_in(&coh).re / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_coherent_term_at_origin_is_vacuum() {
        let s = CoherentSuperposition::coherent(C64::new(0.0, 0.0)).unwrap();
        let rho = superposition_density(&s, 6).unwrap();
        assert_eq!(rho.element(0, 0), C64::new(1.0, 0.0));
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entries().iter().map(|c| c.norm()).sum::<f64>(), 1.0);
    }

    #[test]
    fn even_cat_has_no_odd_components() {
        let s = CoherentSuperposition::even_cat(C64::new(1.0, 0.0)).unwrap();
        let rho = superposition_density(&s, 40).unwrap();
        for n in (1..=40).step_by(2) {
            assert!(rho.element(n, n).norm() < 1e-15);
        }
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
        rho.validate().unwrap();
    }

    #[test]
    fn two_term_superposition_trace() {
        let one = C64::new(1.0, 0.0);
        let s = CoherentSuperposition::normalized(vec![(one, one), (C64::new(0.3, 0.5), -one)])
            .unwrap();
        let rho = superposition_density(&s, 40).unwrap();
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_unnormalized_superposition() {
        let s = CoherentSuperposition::new(vec![(C64::new(2.0, 0.0), C64::new(0.0, 0.0))]).unwrap();
        assert!(matches!(
            superposition_density(&s, 5),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn spats_populations() {
        for nbar in [0.3, 1.0, 2.5] {
            let rho = spats_density(nbar, 120).unwrap();
            assert_eq!(rho.element(0, 0), C64::new(0.0, 0.0));
            assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-10);
        }
        let rho = spats_density(1.0, 60).unwrap();
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-10);
        // ⟨1|â†ρ_th â|1⟩ = 1·p_th(0) = 1/2, divided by 1 + n̄ = 2.
        assert_abs_diff_eq!(rho.element(1, 1).re, 0.25, epsilon = 1e-15);
        assert!(spats_density(0.0, 5).is_err());
        assert!(spats_density(-1.0, 5).is_err());
    }

    #[test]
    fn spats_matches_creation_operator_construction() {
        let nbar = 0.7;
        let cutoff = 80;
        let th = thermal_density(nbar, cutoff).unwrap();
        let mut create = DMatrix::<C64>::zeros(cutoff + 1, cutoff + 1);
        for n in 0..cutoff {
            create[(n + 1, n)] = C64::new(((n + 1) as f64).sqrt(), 0.0);
        }
        let added = &create * th.entries() * create.adjoint() / C64::new(1.0 + nbar, 0.0);
        let spats = spats_density(nbar, cutoff).unwrap();
        for n in 0..cutoff {
            assert_abs_diff_eq!(added[(n, n)].re, spats.element(n, n).re, epsilon = 1e-14);
        }
    }

    #[test]
    fn husimi_examples() {
        let vac = DensityMatrix::pure(&FockVector::number(0, 10).unwrap());
        assert_abs_diff_eq!(
            husimi_fock(&vac, C64::new(0.0, 0.0)).unwrap(),
            1.0 / PI,
            epsilon = 1e-15
        );
        let beta = C64::new(0.8, -1.1);
        let coh = DensityMatrix::pure(&coherent_fock(beta, 60).unwrap());
        assert_abs_diff_eq!(husimi_fock(&coh, beta).unwrap(), 1.0 / PI, epsilon = 1e-13);
    }

    #[test]
    fn validate_flags_bad_matrices() {
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 0)] = C64::new(0.6, 0.0);
        m[(1, 1)] = C64::new(0.4, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(DensityMatrix::new(m.clone()).is_err());
        m[(1, 0)] = C64::new(0.1, 0.0);
        DensityMatrix::new(m).unwrap();
        assert!(DensityMatrix::from_operator(DMatrix::zeros(2, 3)).is_err());
    }
}
