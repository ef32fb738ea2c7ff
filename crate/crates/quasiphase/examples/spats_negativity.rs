//! Photon-added thermal state: negative P function and its Gaussian smoothings.
//!
//! `cargo run --example spats_negativity`

use quasiphase::analytic::{spats_p, spats_regularized, KernelSpec};
use quasiphase::fock::{husimi_fock, spats_density};
use quasiphase::grid::{integrate, Grid2D, GridAxes};
use quasiphase::C64;

fn main() -> quasiphase::Result<()> {
    let nbar = 1.0;
    println!(
        "P(0) = {:.12} (-1/π = {:.12})",
        spats_p(nbar, C64::new(0.0, 0.0))?,
        -std::f64::consts::FRAC_1_PI
    );

    println!("\n  |α|      P       Wigner    Husimi");
    for k in 0..=8 {
        let a = C64::new(0.25 * k as f64, 0.0);
        println!(
            "{:5.2} {:9.5} {:9.5} {:9.5}",
            a.re,
            spats_p(nbar, a)?,
            spats_regularized(nbar, &KernelSpec::wigner(), a)?,
            spats_regularized(nbar, &KernelSpec::husimi(), a)?,
        );
    }

    let axes = GridAxes::square(7.0, 256)?;
    let p = Grid2D::try_from_fn(axes, |a| spats_p(nbar, a))?;
    println!("\nnormalization on a 256² grid: {:.12}", integrate(&p));
    println!("most negative grid value: {:.6}", p.min());

    let rho = spats_density(nbar, 120)?;
    let a = C64::new(0.6, -0.4);
    println!(
        "Husimi at {a}: closed form {:.12}, Fock sum {:.12}",
        spats_regularized(nbar, &KernelSpec::husimi(), a)?,
        husimi_fock(&rho, a)?
    );
    Ok(())
}
