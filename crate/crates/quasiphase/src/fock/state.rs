use num_complex::Complex64 as C64;

use super::TRUNCATION_TOLERANCE;
use crate::error::{check_finite, invalid, Error, Result};

/// Cutoff that keeps Poissonian tails of a state with mean photon number
/// `mean` below ~1e-10: `ceil(μ + 8√(μ+1))`.
pub fn auto_cutoff(mean: f64) -> usize {
    let mean = mean.max(0.0);
    (mean + 8.0 * (mean + 1.0).sqrt()).ceil() as usize
}

/// Closed-form coherent-state overlap `⟨bra|ket⟩`.
pub fn overlap(bra: C64, ket: C64) -> C64 {
    C64::new(-(bra - ket).norm_sqr() / 2.0, (bra.conj() * ket).im).exp()
}

/// Single-mode state vector in a truncated Fock basis, `n = 0..=cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<C64>,
}

impl FockVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(invalid(
                "amplitudes",
                "at least one Fock amplitude is required",
            ));
        }
        Ok(Self { amplitudes })
    }

    /// The number state `|n⟩` with the given cutoff.
    pub fn number(n: usize, cutoff: usize) -> Result<Self> {
        if n > cutoff {
            return Err(invalid("n", format!("{n} exceeds cutoff {cutoff}")));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); cutoff + 1];
        amplitudes[n] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `1 − Σ|c_n|²`: the probability weight that fell outside the cutoff,
    /// assuming the untruncated state was normalized.
    pub fn truncation_loss(&self) -> f64 {
        1.0 - self.norm_sqr()
    }

    pub fn is_cutoff_adequate(&self) -> bool {
        self.truncation_loss() < TRUNCATION_TOLERANCE
    }

    pub fn normalized(&self) -> Self {
        let norm = self.norm();
        Self {
            amplitudes: self.amplitudes.iter().map(|c| c / norm).collect(),
        }
    }

    /// `⟨self|other⟩`, zero-padding the shorter vector.
    pub fn inner(&self, other: &FockVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub(crate) fn scaled_add(&mut self, weight: C64, other: &FockVector) {
        for (a, b) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            *a += weight * b;
        }
    }
}

/// Coherent state `|β⟩` expanded as `c_n = e^{−|β|²/2} βⁿ/√(n!)`.
pub fn coherent_fock(beta: C64, cutoff: usize) -> Result<FockVector> {
    check_finite("beta", &[beta.re, beta.im])?;
    let mut amplitudes = Vec::with_capacity(cutoff + 1);
    let mut c = C64::new((-beta.norm_sqr() / 2.0).exp(), 0.0);
    amplitudes.push(c);
    for n in 1..=cutoff {
        c = c * beta / (n as f64).sqrt();
        amplitudes.push(c);
    }
    Ok(FockVector { amplitudes })
}

/// Pure multimode state stored as a dense row-major tensor over Fock indices.
#[derive(Debug, Clone, PartialEq)]
pub struct MultimodeVector {
    dims: Vec<usize>,
    amplitudes: Vec<C64>,
}

impl MultimodeVector {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        let expected: usize = dims.iter().product();
        if dims.is_empty() || expected != amplitudes.len() {
            return Err(Error::ShapeMismatch {
                left: dims,
                right: vec![amplitudes.len()],
            });
        }
        Ok(Self { dims, amplitudes })
    }

    /// Tensor product of single-mode vectors.
    pub fn product(modes: &[FockVector]) -> Result<Self> {
        if modes.is_empty() {
            return Err(invalid("modes", "at least one mode is required"));
        }
        let mut dims = Vec::with_capacity(modes.len());
        let mut amplitudes = vec![C64::new(1.0, 0.0)];
        for mode in modes {
            dims.push(mode.amplitudes.len());
            amplitudes = amplitudes
                .iter()
                .flat_map(|a| mode.amplitudes.iter().map(move |b| a * b))
                .collect();
        }
        Ok(Self { dims, amplitudes })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Fock indices `(n_1, …, n_M)` of flat position `flat`.
    pub fn indices(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        out
    }

    /// Flat position of the Fock indices `idx`, or `None` when out of range.
    pub fn flat_index(&self, idx: &[usize]) -> Option<usize> {
        if idx.len() != self.dims.len() {
            return None;
        }
        let mut flat = 0;
        for (&i, &d) in idx.iter().zip(&self.dims) {
            if i >= d {
                return None;
            }
            flat = flat * d + i;
        }
        Some(flat)
    }

    /// Probability weight on the subspace whose total photon number satisfies `keep`.
    pub fn weight_where(&self, keep: impl Fn(usize) -> bool) -> f64 {
        (0..self.amplitudes.len())
            .filter(|&k| keep(self.indices(k).iter().sum()))
            .map(|k| self.amplitudes[k].norm_sqr())
            .sum()
    }
}

/// Anything that is a pure state with a well-defined tensor shape.
pub trait PureState {
    fn shape(&self) -> Vec<usize>;
    fn amplitude_slice(&self) -> &[C64];
}

impl PureState for FockVector {
    fn shape(&self) -> Vec<usize> {
        vec![self.amplitudes.len()]
    }
    fn amplitude_slice(&self) -> &[C64] {
        &self.amplitudes
    }
}

impl PureState for MultimodeVector {
    fn shape(&self) -> Vec<usize> {
        self.dims.clone()
    }
    fn amplitude_slice(&self) -> &[C64] {
        &self.amplitudes
    }
}

/// `|⟨ψ|φ⟩|²`. Both states must have identical shapes.
pub fn fidelity<S: PureState + ?Sized>(psi: &S, phi: &S) -> Result<f64> {
    let (left, right) = (psi.shape(), phi.shape());
    if left != right {
        return Err(Error::ShapeMismatch { left, right });
    }
    let inner: C64 = psi
        .amplitude_slice()
        .iter()
        .zip(phi.amplitude_slice())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(inner.norm_sqr())
}

/// Pure state `Σ_k λ_k |β_k⟩` over pairwise distinct coherent amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentSuperposition {
    terms: Vec<(C64, C64)>,
    normalized: bool,
}

const NORMALIZATION_TOLERANCE: f64 = 1e-12;

impl CoherentSuperposition {
    /// Builds the superposition from `(λ_k, β_k)` pairs without rescaling.
    pub fn new(terms: Vec<(C64, C64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptySuperposition);
        }
        for (lambda, beta) in &terms {
            check_finite("lambda", &[lambda.re, lambda.im])?;
            check_finite("beta", &[beta.re, beta.im])?;
        }
        for (i, (_, a)) in terms.iter().enumerate() {
            for (_, b) in &terms[i + 1..] {
                if (a - b).norm() < 1e-12 {
                    return Err(Error::DuplicateAmplitude(a.to_string(), b.to_string()));
                }
            }
        }
        let mut state = Self {
            terms,
            normalized: false,
        };
        state.normalized = (state.norm_sqr() - 1.0).abs() < NORMALIZATION_TOLERANCE;
        Ok(state)
    }

    /// Builds the superposition and rescales the weights to unit norm.
    pub fn normalized(terms: Vec<(C64, C64)>) -> Result<Self> {
        let raw = Self::new(terms)?;
        let scale = raw.norm_sqr().sqrt();
        if scale.is_nan() || scale <= 0.0 {
            return Err(Error::NotNormalized(scale * scale));
        }
        let terms = raw.terms.into_iter().map(|(l, b)| (l / scale, b)).collect();
        let mut state = Self {
            terms,
            normalized: false,
        };
        state.normalized = (state.norm_sqr() - 1.0).abs() < NORMALIZATION_TOLERANCE;
        Ok(state)
    }

    pub fn coherent(beta: C64) -> Result<Self> {
        Self::new(vec![(C64::new(1.0, 0.0), beta)])
    }

    /// `(|β⟩ + |−β⟩)/√(2(1 + e^{−2|β|²}))`.
    pub fn even_cat(beta: C64) -> Result<Self> {
        let lambda = C64::new(
            (2.0 * (1.0 + (-2.0 * beta.norm_sqr()).exp()))
                .sqrt()
                .recip(),
            0.0,
        );
        Self::new(vec![(lambda, beta), (lambda, -beta)])
    }

    /// `(|β⟩ − |−β⟩)/√(2(1 − e^{−2|β|²}))`.
    pub fn odd_cat(beta: C64) -> Result<Self> {
        let lambda = C64::new(
            (2.0 * (1.0 - (-2.0 * beta.norm_sqr()).exp()))
                .sqrt()
                .recip(),
            0.0,
        );
        Self::new(vec![(lambda, beta), (-lambda, -beta)])
    }

    pub fn terms(&self) -> &[(C64, C64)] {
        &self.terms
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `Σ_{k,k̃} λ_k λ_k̃* ⟨β_k̃|β_k⟩`.
    pub fn norm_sqr(&self) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for (lk, bk) in &self.terms {
            for (lj, bj) in &self.terms {
                acc += lk * lj.conj() * overlap(*bj, *bk);
            }
        }
        acc.re
    }

    /// Largest `|β_k|²`; useful for choosing a cutoff.
    pub fn max_intensity(&self) -> f64 {
        self.terms
            .iter()
            .map(|(_, b)| b.norm_sqr())
            .fold(0.0, f64::max)
    }

    pub fn to_fock(&self, cutoff: usize) -> Result<FockVector> {
        let mut psi = FockVector {
            amplitudes: vec![C64::new(0.0, 0.0); cutoff + 1],
        };
        for (lambda, beta) in &self.terms {
            psi.scaled_add(*lambda, &coherent_fock(*beta, cutoff)?);
        }
        Ok(psi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_expansion() {
        let v = coherent_fock(C64::new(0.0, 0.0), 4).unwrap();
        let expected = [1.0, 0.0, 0.0, 0.0, 0.0];
        for (c, e) in v.amplitudes().iter().zip(expected) {
            assert_eq!(*c, C64::new(e, 0.0));
        }
    }

    #[test]
    fn coherent_ground_amplitude_and_loss() {
        let v = coherent_fock(C64::new(1.0, 0.0), 40).unwrap();
        assert_abs_diff_eq!(v.amplitudes()[0].re, (-0.5f64).exp(), epsilon = 1e-15);
        assert!(v.truncation_loss().abs() < 1e-12);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn insufficient_cutoff_is_flagged() {
        let v = coherent_fock(C64::new(0.0, 2.0), 5).unwrap();
        // Poisson(4) tail beyond n = 5
        let mut head = 0.0;
        let mut p = (-4.0f64).exp();
        for n in 0..=5 {
            if n > 0 {
                p *= 4.0 / n as f64;
            }
            head += p;
        }
        assert_abs_diff_eq!(v.truncation_loss(), 1.0 - head, epsilon = 1e-14);
        assert!(v.truncation_loss() > 1e-3);
        assert!(!v.is_cutoff_adequate());
    }

    #[test]
    fn rejects_non_finite_amplitude() {
        assert!(coherent_fock(C64::new(f64::NAN, 0.0), 3).is_err());
        assert!(coherent_fock(C64::new(0.0, f64::INFINITY), 3).is_err());
    }

    #[test]
    fn overlap_examples() {
        let b = C64::new(0.7, 0.2);
        assert_abs_diff_eq!(overlap(b, b).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(overlap(b, b).im, 0.0, epsilon = 1e-15);

        let v = overlap(C64::new(1.0, 0.0), C64::new(-1.0, 0.0));
        assert_abs_diff_eq!(v.re, (-2.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(v.re, 0.135335283236613, epsilon = 1e-12);

        let v = overlap(C64::new(1.0, 0.0), C64::new(0.0, 1.0));
        assert_abs_diff_eq!(v.norm(), (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(v.arg(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn overlap_matches_fock_inner_product() {
        let (a, b) = (C64::new(0.3, -0.8), C64::new(-0.5, 0.4));
        let fa = coherent_fock(a, 60).unwrap();
        let fb = coherent_fock(b, 60).unwrap();
        let direct = fa.inner(&fb);
        assert_abs_diff_eq!((direct - overlap(a, b)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn fidelity_examples() {
        let beta = C64::new(1.0, 0.0);
        let psi = coherent_fock(beta, 40).unwrap();
        let phi = coherent_fock(-beta, 40).unwrap();
        assert_abs_diff_eq!(fidelity(&psi, &psi).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            fidelity(&psi, &phi).unwrap(),
            (-4.0f64).exp(),
            epsilon = 1e-14
        );
        let n1 = FockVector::number(1, 5).unwrap();
        let n2 = FockVector::number(2, 5).unwrap();
        assert_eq!(fidelity(&n1, &n2).unwrap(), 0.0);
        let short = FockVector::number(1, 4).unwrap();
        assert!(matches!(
            fidelity(&n1, &short),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn superposition_validation() {
        assert!(matches!(
            CoherentSuperposition::new(vec![]),
            Err(Error::EmptySuperposition)
        ));
        let one = C64::new(1.0, 0.0);
        let dup = CoherentSuperposition::new(vec![(one, one), (one, one)]);
        assert!(matches!(dup, Err(Error::DuplicateAmplitude(..))));
        let cat = CoherentSuperposition::even_cat(one).unwrap();
        assert!(cat.is_normalized());
        let odd = CoherentSuperposition::odd_cat(C64::new(0.4, 0.3)).unwrap();
        assert!((odd.norm_sqr() - 1.0).abs() < 1e-12);
        let raw = CoherentSuperposition::normalized(vec![(one, one), (C64::new(0.0, 2.0), -one)])
            .unwrap();
        assert!(raw.is_normalized());
    }

    #[test]
    fn multimode_indexing() {
        let a = FockVector::number(1, 2).unwrap();
        let b = FockVector::number(2, 3).unwrap();
        let t = MultimodeVector::product(&[a, b]).unwrap();
        assert_eq!(t.dims(), &[3, 4]);
        let flat = t.flat_index(&[1, 2]).unwrap();
        assert_eq!(t.amplitudes()[flat], C64::new(1.0, 0.0));
        assert_eq!(t.indices(flat), vec![1, 2]);
        assert_eq!(t.flat_index(&[3, 0]), None);
    }

    #[test]
    fn auto_cutoff_formula() {
        assert_eq!(auto_cutoff(0.0), 8);
        assert_eq!(auto_cutoff(3.0), 19);
    }
}
