//! FFT convolution with phase-space kernels and Gaussian deconvolution.
//!
//! `cargo run --release --example convolution_roundtrip`

use quasiphase::analytic::{thermal_p, KernelSpec};
use quasiphase::convolution::{convolve, deconvolve};
use quasiphase::grid::{integrate, Grid2D, GridAxes};

fn main() -> quasiphase::Result<()> {
    let axes = GridAxes::square(8.0, 256)?;
    let p = Grid2D::try_from_fn(axes, |a| thermal_p(0.8, a))?;

    let q = convolve(&p, &KernelSpec::husimi())?;
    let q_exact = Grid2D::try_from_fn(axes, |a| thermal_p(1.8, a))?;
    println!(
        "P → Q of a thermal state: max error {:.2e}",
        q.max_abs_diff(&q_exact)
    );

    for eps in [1e-12, 1e-8, 1e-4, 1e-2] {
        let back = deconvolve(&q, &KernelSpec::husimi(), eps)?;
        println!(
            "deconvolve with cutoff {eps:.0e}: max error {:.2e}",
            back.max_abs_diff(&p)
        );
    }

    let sinc = convolve(&p, &KernelSpec::sinc2(3.0)?)?;
    // the sinc² tails decay like 1/|α|², so part of the mass leaves the box
    println!(
        "\nmass inside the radius-8 box: P {:.8}, sinc² smoothed {:.8}",
        integrate(&p),
        integrate(&sinc)
    );
    Ok(())
}
