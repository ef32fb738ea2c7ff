//! Oracle-equivalence suite behind the `validate` subcommand.
//!
//! Each check compares a closed form against an independent route (Fock
//! contraction, FFT convolution, Monte Carlo, linear algebra) and records the
//! numbers it compared. The suite is deterministic: running it twice must
//! give byte-identical payloads.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::analytic::{
    interference_term, regularized_delta, spats_regularized, state_p_regularized, KernelSpec,
    StateP,
};
use crate::click::{
    fock_click_oracle, g_classical, g_state, g_vac, monte_carlo_g, ClassicalState, DetectionConfig,
};
use crate::convolution::{convolve, deconvolve};
use crate::entanglement::{ent_quasiprob, negativity_report, Method, SolveMode, TwoQubitState};
use crate::fock::{
    coherent_fock, husimi_fock, spats_density, superposition_density, CoherentSuperposition,
    DensityMatrix,
};
use crate::grid::{integrate, Grid2D, GridAxes};
use crate::hybrid::{min_eig_scan, OffDiagonal};
use crate::io::payload_checksum;
use crate::multimode::{ghz_w_limits, tripartite_state_p};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Numbers the check compared, in a fixed order.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub deterministic: bool,
    /// SHA-256 of the first run's payload.
    pub checksum: String,
}

fn sample_points() -> Vec<C64> {
    let mut out = Vec::with_capacity(25);
    for j in -2..=2 {
        for i in -2..=2 {
            out.push(C64::new(0.6 * i as f64, 0.45 * j as f64));
        }
    }
    out
}

fn max_deviation(pairs: &[(f64, f64)]) -> f64 {
    pairs.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn check(name: &'static str, deviation: f64, limit: f64, values: Vec<f64>) -> Check {
    Check {
        name,
        passed: deviation <= limit,
        detail: format!("max deviation {deviation:.3e} (limit {limit:.0e})"),
        values,
    }
}

fn flatten(pairs: &[(f64, f64)]) -> Vec<f64> {
    pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
}

fn spats_vs_fock() -> Result<Check> {
    let q = KernelSpec::husimi();
    let rho = spats_density(1.0, 120)?;
    let pairs = sample_points()
        .into_iter()
        .map(|a| Ok((spats_regularized(1.0, &q, a)?, husimi_fock(&rho, a)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(check(
        "spats husimi vs fock",
        max_deviation(&pairs),
        1e-8,
        flatten(&pairs),
    ))
}

fn cat_vs_fock() -> Result<Check> {
    let cat = CoherentSuperposition::even_cat(C64::new(1.5, 0.5))?;
    let p = StateP::from_superposition(&cat);
    let rho = superposition_density(&cat, 60)?;
    let q = KernelSpec::husimi();
    let pairs = sample_points()
        .into_iter()
        .map(|a| Ok((state_p_regularized(&p, &q, a)?, husimi_fock(&rho, a)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(check(
        "cat husimi vs fock",
        max_deviation(&pairs),
        1e-10,
        flatten(&pairs),
    ))
}

fn delta_vs_convolution() -> Result<Check> {
    let axes = GridAxes::square(3.0, 61)?;
    let beta = axes.point(40, 25);
    let area = axes.cell_area();
    let spike = Grid2D::from_fn(axes, |a| if a == beta { 1.0 / area } else { 0.0 });
    let kernel = KernelSpec::sinc2(3.0)?;
    let smoothed = convolve(&spike, &kernel)?;
    let term = interference_term(beta, beta);
    let exact = Grid2D::from_fn(axes, |a| regularized_delta(&term, &kernel, a).re);
    let dev = smoothed.max_abs_diff(&exact);
    Ok(check(
        "delta term vs fft",
        dev,
        1e-10,
        vec![dev, integrate(&smoothed)],
    ))
}

fn convolution_round_trip() -> Result<Check> {
    let axes = GridAxes::square(8.0, 128)?;
    let g = Grid2D::from_fn(axes, |a| (-a.norm_sqr()).exp() / std::f64::consts::PI);
    let k = KernelSpec::husimi();
    let back = deconvolve(&convolve(&g, &k)?, &k, 1e-8)?;
    let dev = back.max_abs_diff(&g);
    Ok(check("gaussian deconvolution", dev, 1e-4, vec![dev]))
}

fn clicks_vs_fock() -> Result<Check> {
    let cfg = DetectionConfig::balanced(2, 0.5, -1.0)?;
    let cat = CoherentSuperposition::even_cat(C64::new(1.0, 0.0))?;
    let rho_cat = superposition_density(&cat, 60)?;
    let vac = DensityMatrix::pure(&coherent_fock(C64::new(0.0, 0.0), 20)?);
    let mut pairs = Vec::new();
    for a in sample_points() {
        pairs.push((
            g_state(&cat, a, &cfg)?,
            fock_click_oracle(&rho_cat, a, &cfg)?,
        ));
        pairs.push((g_vac(a, &cfg), fock_click_oracle(&vac, a, &cfg)?));
    }
    Ok(check(
        "clicks closed form vs fock",
        max_deviation(&pairs),
        1e-8,
        flatten(&pairs),
    ))
}

fn clicks_vs_monte_carlo() -> Result<Check> {
    let cfg = DetectionConfig::balanced(4, 0.7, -0.5)?;
    let state = ClassicalState::Thermal { nbar: 0.5 };
    let a = C64::new(1.0, 0.0);
    let exact = g_classical(&state, a, &cfg)?;
    let (est, err) = monte_carlo_g(&state, a, &cfg, 200_000, 20_240_901)?;
    let sigmas = (est - exact).abs() / err;
    let mut c = check(
        "clicks monte carlo (sigmas)",
        sigmas,
        5.0,
        vec![exact, est, err],
    );
    c.detail = format!("{est:.6} ± {err:.2e} vs {exact:.6} ({sigmas:.2}σ, limit 5σ)");
    Ok(c)
}

fn hybrid_scan() -> Result<Check> {
    let kernel = KernelSpec::sinc2(3.0)?;
    let axes = GridAxes::square(4.0, 41)?;
    let beta = C64::new(1.0, 0.0);
    let keep = min_eig_scan(beta, &kernel, &axes, OffDiagonal::Keep);
    let drop = min_eig_scan(beta, &kernel, &axes, OffDiagonal::Drop);
    Ok(Check {
        name: "hybrid eigenvalue scan",
        passed: keep.min_eigenvalue < -1.37 && drop.min_eigenvalue >= -1e-12,
        detail: format!(
            "min eigenvalue {:.6} with coherences, {:.3e} without",
            keep.min_eigenvalue, drop.min_eigenvalue
        ),
        values: vec![
            keep.min_eigenvalue,
            keep.argmin_re,
            keep.argmin_im,
            drop.min_eigenvalue,
        ],
    })
}

fn tripartite_limits() -> Result<Check> {
    let p = tripartite_state_p(C64::new(1.0, 0.0))?;
    let trace = p.trace();
    let (f_w, cross) = ghz_w_limits(0.1, 1.5, 12)?;
    let b: f64 = 0.1;
    let f_closed = 6.0 * b * b * (-3.0 * b * b).exp() / -(-6.0 * b * b).exp_m1();
    let dev = (f_w - f_closed)
        .abs()
        .max((cross - (-13.5f64).exp()).abs())
        .max((trace - 1.0).norm());
    Ok(check(
        "tripartite limits",
        dev,
        1e-9,
        vec![trace.re, trace.im, f_w, cross],
    ))
}

fn entanglement_tables() -> Result<Check> {
    let singlet = ent_quasiprob(&TwoQubitState::singlet(), SolveMode::NnlsFirst);
    let werner = ent_quasiprob(&TwoQubitState::werner(0.2)?, SolveMode::NnlsFirst);
    let neg = negativity_report(&singlet)?.total_negativity;
    let werner_neg = negativity_report(&werner)?.total_negativity;
    let dev = (neg - 4.0 / 3.0)
        .abs()
        .max(singlet.residual)
        .max(werner_neg);
    let mut c = check("entanglement tables", dev, 1e-8, Vec::new());
    c.passed &= werner.method == Method::Nnls;
    c.values = singlet.values.iter().flatten().copied().collect();
    c.values
        .extend([singlet.residual, neg, werner.residual, werner_neg]);
    Ok(c)
}

type CheckFn = fn() -> Result<Check>;

/// Runs every check once. A check that errors is reported as failed.
pub fn run_suite() -> Vec<Check> {
    let checks: [(&'static str, CheckFn); 9] = [
        ("spats husimi vs fock", spats_vs_fock),
        ("cat husimi vs fock", cat_vs_fock),
        ("delta term vs fft", delta_vs_convolution),
        ("gaussian deconvolution", convolution_round_trip),
        ("clicks closed form vs fock", clicks_vs_fock),
        ("clicks monte carlo (sigmas)", clicks_vs_monte_carlo),
        ("hybrid eigenvalue scan", hybrid_scan),
        ("tripartite limits", tripartite_limits),
        ("entanglement tables", entanglement_tables),
    ];
    checks
        .into_iter()
        .map(|(name, f)| {
            f().unwrap_or_else(|e| Check {
                name,
                passed: false,
                detail: format!("error: {e}"),
                values: Vec::new(),
            })
        })
        .collect()
}

/// Serialized numbers of a suite run; what the determinism check compares.
pub fn payload(checks: &[Check]) -> Vec<u8> {
    let values: Vec<(&str, &[f64])> = checks
        .iter()
        .map(|c| (c.name, c.values.as_slice()))
        .collect();
    serde_json::to_vec(&values).expect("plain data serializes")
}

/// Runs the suite twice and compares the payload bytes.
pub fn validate_twice() -> Report {
    let first = run_suite();
    let second = run_suite();
    let deterministic = payload(&first) == payload(&second);
    let flat: Vec<f64> = first
        .iter()
        .flat_map(|c| c.values.iter().copied())
        .collect();
    Report {
        checksum: payload_checksum(&flat),
        checks: first,
        deterministic,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes_and_repeats() {
        let report = validate_twice();
        for check in &report.checks {
            assert!(check.passed, "{}: {}", check.name, check.detail);
            assert!(!check.values.is_empty());
        }
        assert_eq!(report.checks.len(), 9);
        assert!(report.deterministic);
    }

    #[test]
    fn payload_depends_on_values() {
        let check = |v: f64| Check {
            name: "x",
            passed: true,
            detail: String::new(),
            values: vec![v],
        };
        assert_eq!(payload(&[check(0.1)]), payload(&[check(0.1)]));
        assert_ne!(
            payload(&[check(0.1)]),
            payload(&[check(f64::from_bits(0.1f64.to_bits() + 1))])
        );
    }
}
