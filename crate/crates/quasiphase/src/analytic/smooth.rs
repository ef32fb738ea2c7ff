//! Regular P functions of Gaussian-type states and their convolutions.

use std::f64::consts::PI;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64 as C64;

use super::kernel::{KernelKind, KernelSpec};
use crate::error::{check_finite, invalid, Result};

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

/// Normalized circular Gaussian `e^{−|α|²/v}/(πv)`.
fn gaussian(variance: f64, alpha: C64) -> f64 {
    (-alpha.norm_sqr() / variance).exp() / (PI * variance)
}

/// Thermal-state P function `e^{−|α|²/n̄}/(πn̄)`.
pub fn thermal_p(nbar: f64, alpha: C64) -> Result<f64> {
    check_mean(nbar)?;
    Ok(gaussian(nbar, alpha))
}

/// P function of the single-photon-added thermal state,
/// `[(1+n̄)|α|² − n̄] e^{−|α|²/n̄}/(πn̄³)`.
///
/// Negative inside the disk `|α|² < n̄/(1+n̄)`.
pub fn spats_p(nbar: f64, alpha: C64) -> Result<f64> {
    check_mean(nbar)?;
    let r2 = alpha.norm_sqr();
    Ok(((1.0 + nbar) * r2 - nbar) * (-r2 / nbar).exp() / (PI * nbar.powi(3)))
}

/// Gauss–Legendre rule shared by the sinc² smoothing integrals.
fn legendre() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(32).expect("degree 32 is valid"))
}

/// `(1/π) ∫_0^{2w} spectrum(k) (1 − k/2w) cos(kx) dk`: a one-dimensional even
/// profile with the given Fourier transform, convolved with `(w/π) sinc²(wx)`.
fn sinc2_smoothed_profile(spectrum: impl Fn(f64) -> f64, width: f64, x: f64) -> f64 {
    let upper = 2.0 * width;
    let panels = 1 + (width * x.abs() / PI).ceil() as usize;
    let step = upper / panels as f64;
    let rule = legendre();
    let mut acc = 0.0;
    for p in 0..panels {
        let (a, b) = (p as f64 * step, (p + 1) as f64 * step);
        acc += rule.integrate(a, b, |k| spectrum(k) * (1.0 - k / upper) * (k * x).cos());
    }
    acc / PI
}

/// Thermal P convolved with `kernel`.
///
/// Gaussian kernels add their variance `(1−s)/2` to `n̄`; the sinc² kernel is
/// handled per axis in Fourier space, where its transform has compact support.
pub fn thermal_regularized(nbar: f64, kernel: &KernelSpec, alpha: C64) -> Result<f64> {
    check_mean(nbar)?;
    Ok(match kernel.kind() {
        KernelKind::GaussianS { order } => gaussian(nbar + (1.0 - order) / 2.0, alpha),
        KernelKind::Sinc2 { width } => {
            let g = |k: f64| (-nbar * k * k / 4.0).exp();
            sinc2_smoothed_profile(g, width, alpha.re) * sinc2_smoothed_profile(g, width, alpha.im)
        }
    })
}

/// SPATS P function convolved with `kernel`.
///
/// With `T = n̄ + (1−s)/2` the Gaussian case is
/// `G_T(α) [(1+n̄)(|α|²/T² − 1/T) + 1]`, obtained from `|α|² G_n̄ = n̄² ∂_n̄ G_n̄ + n̄ G_n̄`
/// and `G_n̄ ∗ G_m = G_{n̄+m}`.
pub fn spats_regularized(nbar: f64, kernel: &KernelSpec, alpha: C64) -> Result<f64> {
    check_mean(nbar)?;
    Ok(match kernel.kind() {
        KernelKind::GaussianS { order } => {
            let t = nbar + (1.0 - order) / 2.0;
            let r2 = alpha.norm_sqr();
            gaussian(t, alpha) * ((1.0 + nbar) * (r2 / (t * t) - 1.0 / t) + 1.0)
        }
        KernelKind::Sinc2 { width } => {
            // P = A (x² + y²) g(x) g(y) − B g(x) g(y), g(x) = e^{−x²/n̄}/√(πn̄)
            let a = (1.0 + nbar) / (nbar * nbar);
            let b = 1.0 / nbar;
            let g = |k: f64| (-nbar * k * k / 4.0).exp();
            let h = |k: f64| (nbar / 2.0 - nbar * nbar * k * k / 4.0) * (-nbar * k * k / 4.0).exp();
            let (gx, gy) = (
                sinc2_smoothed_profile(g, width, alpha.re),
                sinc2_smoothed_profile(g, width, alpha.im),
            );
            let (hx, hy) = (
                sinc2_smoothed_profile(h, width, alpha.re),
                sinc2_smoothed_profile(h, width, alpha.im),
            );
            a * (hx * gy + gx * hy) - b * gx * gy
        }
    })
}
