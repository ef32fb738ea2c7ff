//! Phase-space representation from multiplexed on-off click detection.
//!
//! The signal is mixed with a coherent local oscillator `α` on a beam splitter
//! with real amplitudes `t`, `r`, then split evenly over `N` on-off detectors of
//! efficiency `η`. The generating function `G_z(α) = Σ_k z^{N−k} p_k(α)` of the
//! click-count distribution is a regularized phase-space function of the
//! signal: nonnegative for every classical state when `N` is even and
//! `z ∈ [−1, 1]`.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::IMAGINARY_TOLERANCE;
use crate::error::{check_finite, invalid, Error, Result};
use crate::fock::{
    auto_cutoff, displace_with_loss, loss_channel, overlap, phase_flip, CoherentSuperposition,
    DensityMatrix,
};

/// Detector layout and generating-function parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    detectors: usize,
    efficiency: f64,
    t: f64,
    r: f64,
    z: f64,
}

impl DetectionConfig {
    pub fn new(detectors: usize, efficiency: f64, t: f64, r: f64, z: f64) -> Result<Self> {
        check_finite("detection parameters", &[efficiency, t, r, z])?;
        if !detectors.is_power_of_two() {
            return Err(invalid(
                "N",
                format!("detector count must be a power of two, got {detectors}"),
            ));
        }
        if !(efficiency > 0.0 && efficiency <= 1.0) {
            return Err(invalid(
                "eta",
                format!("efficiency must lie in (0, 1], got {efficiency}"),
            ));
        }
        if (t * t + r * r - 1.0).abs() >= 1e-12 {
            return Err(invalid(
                "t, r",
                format!("t² + r² = {} is not 1", t * t + r * r),
            ));
        }
        Ok(Self {
            detectors,
            efficiency,
            t,
            r,
            z,
        })
    }

    /// 50:50 beam splitter, `t = r = 1/√2`.
    pub fn balanced(detectors: usize, efficiency: f64, z: f64) -> Result<Self> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(detectors, efficiency, h, h, z)
    }

    pub fn detectors(&self) -> usize {
        self.detectors
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn with_z(&self, z: f64) -> Result<Self> {
        Self::new(self.detectors, self.efficiency, self.t, self.r, z)
    }

    /// `[z + (1−z) e^{−η x/N}]^N` for complex `z` and `x`, where `x` is the
    /// (possibly complex) squared amplitude reaching the detectors.
    fn bracket(&self, z: C64, x: C64) -> C64 {
        let n = self.detectors as f64;
        let base = z + (1.0 - z) * (-self.efficiency * x / n).exp();
        base.powu(self.detectors as u32)
    }
}

/// `|rα − tβ|²` generalized to the complex supports of `|β̃⟩⟨β|`.
fn detected_sqr(alpha: C64, bra: C64, ket: C64, cfg: &DetectionConfig) -> C64 {
    let i = C64::new(0.0, 1.0);
    let c_re = (ket + bra.conj()) / 2.0;
    let c_im = (ket - bra.conj()) / (2.0 * i);
    let dx = cfg.r * alpha.re - cfg.t * c_re;
    let dy = cfg.r * alpha.im - cfg.t * c_im;
    dx * dx + dy * dy
}

/// Vacuum generating function `[e^{−ηr²|α|²/N} + z(1 − e^{−ηr²|α|²/N})]^N`.
pub fn g_vac(alpha: C64, cfg: &DetectionConfig) -> f64 {
    let x = cfg.r * cfg.r * alpha.norm_sqr();
    cfg.bracket(C64::new(cfg.z, 0.0), C64::new(x, 0.0)).re
}

/// `[Re α − (t/r) c_R]² + [Im α − (t/r) c_I]²` with the complex supports
/// `c_R = (β̃ + β*)/2`, `c_I = (β̃ − β*)/(2i)` of `|β̃⟩⟨β|`.
pub fn q_shift(alpha: C64, bra: C64, ket: C64, cfg: &DetectionConfig) -> Result<C64> {
    if cfg.r == 0.0 {
        return Err(invalid(
            "r",
            "the local oscillator does not reach the detectors",
        ));
    }
    Ok(detected_sqr(alpha, bra, ket, cfg) / (cfg.r * cfg.r))
}

/// Generating function of the operator `|β̃⟩⟨β|`:
/// `⟨β|β̃⟩ [z + (1−z) e^{−ηr²q/N}]^N`.
pub fn g_interference(alpha: C64, bra: C64, ket: C64, cfg: &DetectionConfig) -> C64 {
    g_interference_with_z(alpha, bra, ket, cfg, C64::new(cfg.z, 0.0))
}

/// [`g_interference`] with a complex generating-function parameter.
pub fn g_interference_with_z(alpha: C64, bra: C64, ket: C64, cfg: &DetectionConfig, z: C64) -> C64 {
    overlap(bra, ket) * cfg.bracket(z, detected_sqr(alpha, bra, ket, cfg))
}

/// `Σ_{k,k̃} λ_k λ_k̃* G(α; β_k̃, β_k)` for a normalized coherent superposition.
pub fn g_state(state: &CoherentSuperposition, alpha: C64, cfg: &DetectionConfig) -> Result<f64> {
    if !state.is_normalized() {
        return Err(Error::NotNormalized(state.norm_sqr()));
    }
    let mut acc = C64::new(0.0, 0.0);
    let mut scale = 0.0;
    for (lk, bk) in state.terms() {
        for (lj, bj) in state.terms() {
            let c = lk * lj.conj() * g_interference(alpha, *bj, *bk, cfg);
            scale += c.norm();
            acc += c;
        }
    }
    let tolerance = IMAGINARY_TOLERANCE * scale.max(1.0);
    if acc.im.abs() > tolerance {
        return Err(Error::ImaginaryResidual {
            residual: acc.im.abs(),
            tolerance,
        });
    }
    Ok(acc.re)
}

/// States with a nonnegative, samplable Glauber–Sudarshan P function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassicalState {
    Coherent {
        re: f64,
        im: f64,
    },
    Thermal {
        nbar: f64,
    },
    /// Convex combination; weights must be nonnegative and sum to one.
    Mixture {
        components: Vec<(f64, ClassicalState)>,
    },
}

impl ClassicalState {
    pub fn coherent(beta: C64) -> Self {
        Self::Coherent {
            re: beta.re,
            im: beta.im,
        }
    }

    /// Accepts a superposition only if it is a single coherent state.
    pub fn from_superposition(state: &CoherentSuperposition) -> Result<Self> {
        match state.terms() {
            [(_, beta)] => Ok(Self::coherent(*beta)),
            _ => Err(Error::Nonclassical(
                "coherent superpositions have no nonnegative P function",
            )),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Coherent { re, im } => check_finite("beta", &[*re, *im]),
            Self::Thermal { nbar } => {
                check_finite("nbar", &[*nbar])?;
                if *nbar < 0.0 {
                    return Err(invalid(
                        "nbar",
                        format!("mean photon number must be nonnegative, got {nbar}"),
                    ));
                }
                Ok(())
            }
            Self::Mixture { components } => {
                if components.is_empty() {
                    return Err(invalid("mixture", "no components"));
                }
                let mut total = 0.0;
                for (w, c) in components {
                    check_finite("weight", &[*w])?;
                    if *w < 0.0 {
                        return Err(Error::Nonclassical("negative mixture weight"));
                    }
                    total += w;
                    c.validate()?;
                }
                if (total - 1.0).abs() > 1e-12 {
                    return Err(invalid("mixture", format!("weights sum to {total}")));
                }
                Ok(())
            }
        }
    }

    /// Draws an amplitude from the P function.
    fn sample<R: Rng>(&self, rng: &mut R) -> C64 {
        match self {
            Self::Coherent { re, im } => C64::new(*re, *im),
            Self::Thermal { nbar } => {
                if *nbar == 0.0 {
                    return C64::new(0.0, 0.0);
                }
                let normal = Normal::new(0.0, (nbar / 2.0).sqrt()).expect("finite positive spread");
                C64::new(normal.sample(rng), normal.sample(rng))
            }
            Self::Mixture { components } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (w, c) in components {
                    acc += w;
                    if u < acc {
                        return c.sample(rng);
                    }
                }
                components.last().expect("validated nonempty").1.sample(rng)
            }
        }
    }

    /// `E[e^{−λ|rα − tβ|²}]` over the P function.
    fn detected_exponential(&self, lambda: f64, alpha: C64, cfg: &DetectionConfig) -> f64 {
        match self {
            Self::Coherent { re, im } => {
                let gamma = cfg.r * alpha - cfg.t * C64::new(*re, *im);
                (-lambda * gamma.norm_sqr()).exp()
            }
            Self::Thermal { nbar } => {
                let d = 1.0 + lambda * cfg.t * cfg.t * nbar;
                (-lambda * (cfg.r * alpha).norm_sqr() / d).exp() / d
            }
            Self::Mixture { components } => components
                .iter()
                .map(|(w, c)| w * c.detected_exponential(lambda, alpha, cfg))
                .sum(),
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Closed-form `G_z(α)` of a classical state, expanding the generating
/// function in click numbers and averaging each Gaussian factor over P.
pub fn g_classical(state: &ClassicalState, alpha: C64, cfg: &DetectionConfig) -> Result<f64> {
    state.validate()?;
    let n = cfg.detectors;
    let z = cfg.z;
    Ok((0..=n)
        .map(|k| {
            let lambda = k as f64 * cfg.efficiency / n as f64;
            binomial(n, k)
                * z.powi((n - k) as i32)
                * (1.0 - z).powi(k as i32)
                * state.detected_exponential(lambda, alpha, cfg)
        })
        .sum())
}

/// Fock-basis reference for the generating function of a density matrix.
///
/// The detected mode is `D(rα) L_{t²}(Π ρ Π)` with the parity flip `Π`, and
/// `G_z = Σ_k C(N,k) z^{N−k} (1−z)^k Tr[ρ_det (1 − kη/N)^n̂]`. The cutoff is
/// enlarged as needed to hold the displaced state.
pub fn fock_click_oracle(rho: &DensityMatrix, alpha: C64, cfg: &DetectionConfig) -> Result<f64> {
    Ok(fock_click_oracle_operator(rho, alpha, cfg)?.re)
}

/// Truncation loss the oracle accepts before enlarging its cutoff.
const ORACLE_TRUNCATION: f64 = 1e-14;
const ORACLE_MAX_CUTOFF: usize = 400;

/// [`fock_click_oracle`] for arbitrary (non-Hermitian) operators such as `|β̃⟩⟨β|`.
pub fn fock_click_oracle_operator(
    op: &DensityMatrix,
    alpha: C64,
    cfg: &DetectionConfig,
) -> Result<C64> {
    check_finite("alpha", &[alpha.re, alpha.im])?;
    let mean = op.mean_photon_number().abs();
    let reach = (cfg.t * mean.sqrt() + cfg.r * alpha.norm()).powi(2);
    let mut cutoff = op.cutoff().max(auto_cutoff(reach) + 16);
    let detected = loop {
        let flipped = phase_flip(&op.with_cutoff(cutoff));
        let (detected, loss) =
            displace_with_loss(&loss_channel(&flipped, cfg.t * cfg.t)?, cfg.r * alpha)?;
        if loss <= ORACLE_TRUNCATION || cutoff >= ORACLE_MAX_CUTOFF {
            break detected;
        }
        cutoff = (cutoff * 3 / 2).min(ORACLE_MAX_CUTOFF);
    };
    let n = cfg.detectors;
    let z = cfg.z;
    let diag: Vec<C64> = (0..=cutoff).map(|m| detected.element(m, m)).collect();
    let mut g = C64::new(0.0, 0.0);
    for k in 0..=n {
        let x = 1.0 - k as f64 * cfg.efficiency / n as f64;
        let moment: C64 = diag
            .iter()
            .enumerate()
            .map(|(m, p)| p * x.powi(m as i32))
            .sum();
        g += moment * binomial(n, k) * z.powi((n - k) as i32) * (1.0 - z).powi(k as i32);
    }
    Ok(g)
}

/// Shots handled by one sequential chunk in [`monte_carlo_g`].
const MC_CHUNK: u64 = 4096;

/// Stochastic estimate of `G_z(α)` for a classical state.
///
/// Each shot draws an amplitude `β` from P, then fires each of the `N` bins
/// independently with probability `1 − e^{−η|rα − tβ|²/N}` and records
/// `z^{clicks}`. Shot `i` uses its own ChaCha8 stream `i` under `seed`, and
/// partial sums are combined in shot order, so the result does not depend on
/// the thread count. Returns the mean and its standard error (infinite for a
/// single shot).
pub fn monte_carlo_g(
    state: &ClassicalState,
    alpha: C64,
    cfg: &DetectionConfig,
    shots: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    state.validate()?;
    check_finite("alpha", &[alpha.re, alpha.im])?;
    if shots == 0 {
        return Err(invalid("shots", "at least one shot is required"));
    }
    let n = cfg.detectors;
    let chunks = shots.div_ceil(MC_CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut sum, mut sumsq) = (0.0, 0.0);
            for shot in c * MC_CHUNK..((c + 1) * MC_CHUNK).min(shots) {
                rng.set_stream(shot);
                rng.set_word_pos(0);
                let beta = state.sample(&mut rng);
                let gamma = cfg.r * alpha - cfg.t * beta;
                let p_click = -(-cfg.efficiency * gamma.norm_sqr() / n as f64).exp_m1();
                let clicks = (0..n).filter(|_| rng.random::<f64>() < p_click).count();
                let v = cfg.z.powi(clicks as i32);
                sum += v;
                sumsq += v * v;
            }
            (sum, sumsq)
        })
        .collect();
    let (sum, sumsq) = partial
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (s, q)| (a + s, b + q));
    let count = shots as f64;
    let mean = sum / count;
    let stderr = if shots > 1 {
        let var = ((sumsq - sum * mean) / (count - 1.0)).max(0.0);
        (var / count).sqrt()
    } else {
        f64::INFINITY
    };
    Ok((mean, stderr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_fock, superposition_density, thermal_density, FockVector};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn balanced_cfg() -> DetectionConfig {
        DetectionConfig::balanced(2, 0.5, -1.0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(DetectionConfig::balanced(3, 0.5, -1.0).is_err());
        assert!(DetectionConfig::balanced(2, 0.0, -1.0).is_err());
        assert!(DetectionConfig::balanced(2, 1.2, -1.0).is_err());
        assert!(DetectionConfig::new(2, 0.5, 0.6, 0.6, -1.0).is_err());
        assert!(DetectionConfig::new(1, 1.0, 0.6, 0.8, 0.3).is_ok());
    }

    #[test]
    fn vacuum_examples() {
        let cfg = balanced_cfg();
        assert_eq!(g_vac(c(0.0, 0.0), &cfg), 1.0);
        assert_eq!(g_vac(c(1.4, -0.3), &cfg.with_z(1.0).unwrap()), 1.0);
        let expected = (2.0 * (-0.5f64).exp() - 1.0).powi(2);
        assert_abs_diff_eq!(g_vac(c(2.0, 0.0), &cfg), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(expected, 0.045395, epsilon = 1e-6);
    }

    #[test]
    fn shift_examples() {
        let cfg = balanced_cfg();
        assert_abs_diff_eq!(
            q_shift(c(1.3, 0.0), c(1.3, 0.0), c(1.3, 0.0), &cfg)
                .unwrap()
                .norm(),
            0.0,
            epsilon = 1e-15
        );
        let a = c(0.4, -1.1);
        assert_abs_diff_eq!(
            (q_shift(a, c(0.0, 0.0), c(0.0, 0.0), &cfg).unwrap() - a.norm_sqr()).norm(),
            0.0,
            epsilon = 1e-15
        );
        let q = q_shift(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), &cfg).unwrap();
        assert_abs_diff_eq!((q - c(-1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        let dark = DetectionConfig::new(2, 0.5, 1.0, 0.0, -1.0).unwrap();
        assert!(q_shift(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), &dark).is_err());
    }

    #[test]
    fn interference_examples() {
        let cfg = balanced_cfg();
        let beta = c(0.7, -0.2);
        let alpha = c(0.3, 0.9);
        let shifted = alpha - beta * (cfg.t() / cfg.r());
        assert_abs_diff_eq!(
            (g_interference(alpha, beta, beta, &cfg) - g_vac(shifted, &cfg)).norm(),
            0.0,
            epsilon = 1e-14
        );
        let one = cfg.with_z(1.0).unwrap();
        let (b, bt) = (c(1.0, 0.5), c(-0.3, 0.2));
        assert_abs_diff_eq!(
            (g_interference(alpha, b, bt, &one) - overlap(b, bt)).norm(),
            0.0,
            epsilon = 1e-15
        );
        let v = g_interference(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), &cfg);
        let expected = (-2.0f64).exp() * (2.0 * 0.125f64.exp() - 1.0).powi(2);
        assert_abs_diff_eq!(v.re, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(v.re, 0.2170, epsilon = 5e-5);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn interference_conjugate_symmetry() {
        let cfg = DetectionConfig::balanced(4, 0.8, -0.4).unwrap();
        let (a, b, bt) = (c(0.2, -0.6), c(1.1, 0.3), c(-0.5, 0.8));
        let lhs = g_interference(a, b, bt, &cfg);
        let rhs = g_interference(a, bt, b, &cfg).conj();
        assert_abs_diff_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn oracle_matches_vacuum_and_coherent() {
        let cfg = balanced_cfg();
        let vac = DensityMatrix::pure(&FockVector::number(0, 10).unwrap());
        for a in [c(0.0, 0.0), c(1.0, 1.0), c(-2.0, 0.5)] {
            assert_abs_diff_eq!(
                fock_click_oracle(&vac, a, &cfg).unwrap(),
                g_vac(a, &cfg),
                epsilon = 1e-12
            );
        }
        for bt in [c(1.0, 0.0), c(-1.5, 1.2), c(0.0, -2.0)] {
            let rho = DensityMatrix::pure(&coherent_fock(bt, 80).unwrap());
            for a in [c(0.0, 0.0), c(1.0, -1.0), c(2.0, 0.5)] {
                let shifted = a - bt * (cfg.t() / cfg.r());
                assert_abs_diff_eq!(
                    fock_click_oracle(&rho, a, &cfg).unwrap(),
                    g_vac(shifted, &cfg),
                    epsilon = 1e-8
                );
            }
        }
    }

    #[test]
    fn oracle_matches_off_diagonal_term() {
        let cfg = DetectionConfig::new(4, 0.7, 0.6, 0.8, -0.5).unwrap();
        let (b, bt) = (c(1.0, 0.4), c(-0.8, 0.1));
        let op = DensityMatrix::outer(
            &coherent_fock(bt, 60).unwrap(),
            &coherent_fock(b, 60).unwrap(),
        )
        .unwrap();
        for a in [c(0.0, 0.0), c(0.5, -1.0)] {
            let oracle = fock_click_oracle_operator(&op, a, &cfg).unwrap();
            assert_abs_diff_eq!(
                (oracle - g_interference(a, b, bt, &cfg)).norm(),
                0.0,
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn even_cat_matches_oracle_and_shows_negativity() {
        let cfg = balanced_cfg();
        let cat = CoherentSuperposition::even_cat(c(1.0, 0.0)).unwrap();
        let rho = superposition_density(&cat, 60).unwrap();
        for i in -2..=2 {
            for j in -2..=2 {
                let a = c(i as f64 * 0.75, j as f64 * 0.75);
                assert_abs_diff_eq!(
                    g_state(&cat, a, &cfg).unwrap(),
                    fock_click_oracle(&rho, a, &cfg).unwrap(),
                    epsilon = 1e-8
                );
            }
        }
        let min = (0..=200)
            .map(|k| g_state(&cat, c(0.0, -4.0 + 0.04 * k as f64), &cfg).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(min < 0.0);
    }

    #[test]
    fn unit_z_normalizes_every_state() {
        let cfg = DetectionConfig::balanced(4, 0.6, 1.0).unwrap();
        let cat = CoherentSuperposition::odd_cat(c(0.9, 0.4)).unwrap();
        for a in [c(0.0, 0.0), c(1.0, -2.0)] {
            assert_abs_diff_eq!(g_state(&cat, a, &cfg).unwrap(), 1.0, epsilon = 1e-12);
            let th = ClassicalState::Thermal { nbar: 0.7 };
            assert_abs_diff_eq!(g_classical(&th, a, &cfg).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn thermal_closed_form_matches_oracle() {
        let cfg = DetectionConfig::new(4, 0.8, 0.6, 0.8, -0.7).unwrap();
        let nbar = 0.5;
        let rho = thermal_density(nbar, 60).unwrap();
        for a in [c(0.0, 0.0), c(1.0, 0.0), c(-0.4, 1.5)] {
            let closed = g_classical(&ClassicalState::Thermal { nbar }, a, &cfg).unwrap();
            assert_abs_diff_eq!(
                closed,
                fock_click_oracle(&rho, a, &cfg).unwrap(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn classical_states_are_nonnegative_for_even_n() {
        for n in [2, 4] {
            for z in [-1.0, -0.5, 0.0, 0.5, 1.0] {
                let cfg = DetectionConfig::balanced(n, 0.9, z).unwrap();
                let states = [
                    ClassicalState::coherent(c(0.8, -0.3)),
                    ClassicalState::Thermal { nbar: 0.3 },
                ];
                for s in &states {
                    for i in -6..=6 {
                        for j in -6..=6 {
                            let a = c(i as f64 * 0.5, j as f64 * 0.5);
                            assert!(g_classical(s, a, &cfg).unwrap() >= -1e-10);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn monte_carlo_vacuum_is_exact() {
        let (est, err) = monte_carlo_g(
            &ClassicalState::coherent(c(0.0, 0.0)),
            c(0.0, 0.0),
            &balanced_cfg(),
            1000,
            7,
        )
        .unwrap();
        assert_eq!(est, 1.0);
        assert_eq!(err, 0.0);
    }

    #[test]
    fn monte_carlo_is_reproducible_and_consistent() {
        let cfg = balanced_cfg();
        let state = ClassicalState::Mixture {
            components: vec![
                (0.3, ClassicalState::coherent(c(1.0, 0.0))),
                (0.7, ClassicalState::Thermal { nbar: 0.4 }),
            ],
        };
        let a = c(0.5, 0.5);
        let first = monte_carlo_g(&state, a, &cfg, 50_000, 11).unwrap();
        assert_eq!(first, monte_carlo_g(&state, a, &cfg, 50_000, 11).unwrap());
        let exact = g_classical(&state, a, &cfg).unwrap();
        assert!((first.0 - exact).abs() < 4.0 * first.1);
    }

    #[test]
    fn superpositions_are_rejected_for_sampling() {
        let cat = CoherentSuperposition::even_cat(c(1.0, 0.0)).unwrap();
        assert!(matches!(
            ClassicalState::from_superposition(&cat),
            Err(Error::Nonclassical(_))
        ));
        let bad = ClassicalState::Mixture {
            components: vec![
                (1.5, ClassicalState::Thermal { nbar: 1.0 }),
                (-0.5, ClassicalState::Thermal { nbar: 0.1 }),
            ],
        };
        assert!(monte_carlo_g(&bad, c(0.0, 0.0), &balanced_cfg(), 10, 0).is_err());
    }
}
