use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::density::DensityMatrix;
use super::state::coherent_fock;
use super::{auto_cutoff, ln_factorials};
use crate::error::{check_finite, invalid, Result};

/// Post-displacement truncation loss above which a warning is logged.
pub const DISPLACEMENT_WARN_LOSS: f64 = 1e-8;

/// `D(γ) ρ D(γ)†`, keeping the input cutoff.
///
/// See [`displace_with_loss`] for the truncation diagnostic.
pub fn displace(rho: &DensityMatrix, gamma: C64) -> Result<DensityMatrix> {
    displace_with_loss(rho, gamma).map(|(out, _)| out)
}

/// Displacement plus the weight pushed beyond the cutoff.
///
/// Columns of `D(γ)` are built from `D|n⟩ = (â† − γ*) D|n−1⟩/√n`, starting at
/// the coherent state `D|0⟩ = |γ⟩`. Each entry depends only on lower photon
/// numbers, so truncating the working space never corrupts the rows that are
/// kept. The working space is sized from the state's mean photon number so
/// the returned loss measures what the caller's cutoff discards.
pub fn displace_with_loss(rho: &DensityMatrix, gamma: C64) -> Result<(DensityMatrix, f64)> {
    check_finite("gamma", &[gamma.re, gamma.im])?;
    let cutoff = rho.cutoff();
    if gamma == C64::new(0.0, 0.0) {
        return Ok((rho.clone(), 0.0));
    }
    let mean = rho.mean_photon_number().max(0.0);
    let reach = (mean.sqrt() + gamma.norm()).powi(2);
    let work = cutoff.max(auto_cutoff(reach)) + 16;
    let dim = work + 1;

    let mut columns = DMatrix::<C64>::zeros(dim, cutoff + 1);
    let vacuum_image = coherent_fock(gamma, work)?;
    columns
        .column_mut(0)
        .copy_from_slice(vacuum_image.amplitudes());
    for n in 1..=cutoff {
        let norm = (n as f64).sqrt().recip();
        for m in 0..dim {
            let raised = if m > 0 {
                columns[(m - 1, n - 1)] * (m as f64).sqrt()
            } else {
                C64::new(0.0, 0.0)
            };
            columns[(m, n)] = (raised - gamma.conj() * columns[(m, n - 1)]) * norm;
        }
    }
    let moved = &columns * rho.entries() * columns.adjoint();

    let total: f64 = (0..dim).map(|n| moved[(n, n)].re).sum();
    let kept: f64 = (0..=cutoff).map(|n| moved[(n, n)].re).sum();
    let loss = if total.abs() > 0.0 {
        (total - kept) / total
    } else {
        0.0
    };
    if loss > DISPLACEMENT_WARN_LOSS {
        log::warn!("displacement by {gamma} leaves truncation loss {loss:e} at cutoff {cutoff}");
    }
    let out =
        DensityMatrix::from_operator(moved.view((0, 0), (cutoff + 1, cutoff + 1)).into_owned())?;
    Ok((out, loss))
}

/// Pure-loss channel with transmissivity `tau`.
///
/// `ρ'_{mn} = Σ_k √(C(m+k,k) C(n+k,k)) τ^{(m+n)/2} (1−τ)^k ρ_{m+k,n+k}`.
pub fn loss_channel(rho: &DensityMatrix, tau: f64) -> Result<DensityMatrix> {
    check_finite("tau", &[tau])?;
    if !(0.0..=1.0).contains(&tau) {
        return Err(invalid(
            "tau",
            format!("transmissivity must lie in [0, 1], got {tau}"),
        ));
    }
    if tau == 1.0 {
        return Ok(rho.clone());
    }
    let dim = rho.cutoff() + 1;
    let src = rho.entries();
    let mut out = DMatrix::<C64>::zeros(dim, dim);
    if tau == 0.0 {
        out[(0, 0)] = src.trace();
        return DensityMatrix::from_operator(out);
    }
    let lf = ln_factorials(dim);
    let ln_binom = |n: usize, k: usize| lf[n] - lf[k] - lf[n - k];
    let (ln_t, ln_r) = (tau.ln(), (1.0 - tau).ln());
    for m in 0..dim {
        for n in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..dim - m.max(n) {
                let ln_w = 0.5 * (ln_binom(m + k, k) + ln_binom(n + k, k))
                    + 0.5 * (m + n) as f64 * ln_t
                    + k as f64 * ln_r;
                acc += src[(m + k, n + k)] * ln_w.exp();
            }
            out[(m, n)] = acc;
        }
    }
    DensityMatrix::from_operator(out)
}

/// `â → −â`, i.e. `ρ_{mn} ↦ (−1)^{m+n} ρ_{mn}`.
pub fn phase_flip(rho: &DensityMatrix) -> DensityMatrix {
    let mut out = rho.entries().clone();
    let dim = out.nrows();
    for n in 0..dim {
        for m in 0..dim {
            if (m + n) % 2 == 1 {
                out[(m, n)] = -out[(m, n)];
            }
        }
    }
    DensityMatrix::from_operator(out).expect("square input stays square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_fock, thermal_density, FockVector};

    fn coherent_rho(beta: C64, cutoff: usize) -> DensityMatrix {
        DensityMatrix::pure(&coherent_fock(beta, cutoff).unwrap())
    }

    #[test]
    fn displacing_vacuum_gives_coherent_state() {
        let vac = DensityMatrix::pure(&FockVector::number(0, 40).unwrap());
        for gamma in [C64::new(1.3, -0.4), C64::new(0.0, 2.0), C64::new(-1.5, 1.2)] {
            let (out, loss) = displace_with_loss(&vac, gamma).unwrap();
            assert!(out.max_abs_diff(&coherent_rho(gamma, 40)) < 1e-10);
            assert!(loss < 1e-10);
        }
    }

    #[test]
    fn zero_displacement_is_identity() {
        let rho = thermal_density(0.8, 20).unwrap();
        assert_eq!(displace(&rho, C64::new(0.0, 0.0)).unwrap(), rho);
    }

    #[test]
    fn displacement_round_trip() {
        let cat = crate::fock::CoherentSuperposition::even_cat(C64::new(0.9, 0.3)).unwrap();
        let rho = crate::fock::superposition_density(&cat, 50).unwrap();
        let gamma = C64::new(0.7, -1.1);
        let back = displace(&displace(&rho, gamma).unwrap(), -gamma).unwrap();
        assert!(back.max_abs_diff(&rho) < 1e-9);
    }

    #[test]
    fn large_displacement_reports_loss() {
        let vac = DensityMatrix::pure(&FockVector::number(0, 5).unwrap());
        let (_, loss) = displace_with_loss(&vac, C64::new(2.0, 0.0)).unwrap();
        assert!(loss > 1e-3);
    }

    #[test]
    fn unit_transmission_is_identity() {
        let rho = coherent_rho(C64::new(0.5, 0.5), 20);
        assert_eq!(loss_channel(&rho, 1.0).unwrap(), rho);
    }

    #[test]
    fn loss_shrinks_coherent_amplitude() {
        let beta = C64::new(1.4, -0.6);
        for tau in [0.0, 0.25, 0.5, 0.9] {
            let out = loss_channel(&coherent_rho(beta, 50), tau).unwrap();
            assert!(out.max_abs_diff(&coherent_rho(beta * tau.sqrt(), 50)) < 1e-10);
        }
    }

    #[test]
    fn loss_maps_thermal_to_thermal() {
        let out = loss_channel(&thermal_density(1.5, 120).unwrap(), 0.4).unwrap();
        let expected = thermal_density(0.6, 120).unwrap();
        assert!(out.max_abs_diff(&expected) < 1e-10);
    }

    #[test]
    fn loss_rejects_out_of_range() {
        let rho = thermal_density(1.0, 5).unwrap();
        assert!(loss_channel(&rho, -0.1).is_err());
        assert!(loss_channel(&rho, 1.1).is_err());
        assert!(loss_channel(&rho, f64::NAN).is_err());
    }

    #[test]
    fn phase_flip_negates_coherent_amplitude() {
        let beta = C64::new(0.6, 0.9);
        let flipped = phase_flip(&coherent_rho(beta, 30));
        assert!(flipped.max_abs_diff(&coherent_rho(-beta, 30)) < 1e-14);
    }
}
