//! Regularized interference term `|−β⟩⟨β|` and the even/odd cat distributions.
//!
//! `cargo run --example cat_interference`

use quasiphase::analytic::{
    interference_term, regularized_delta, state_p_regularized, KernelSpec, StateP,
};
use quasiphase::fock::CoherentSuperposition;
use quasiphase::C64;

fn main() -> quasiphase::Result<()> {
    let beta = C64::new(1.0, 0.0);
    let kernel = KernelSpec::sinc2(3.0)?;
    let term = interference_term(-beta, beta);
    println!("prefactor ⟨β|−β⟩ = {:.6}", term.prefactor());
    println!(
        "support Re: {}  Im: {}",
        term.support_re(),
        term.support_im()
    );

    println!("\nterm along the imaginary axis");
    for k in -4..=4 {
        let a = C64::new(0.0, 0.25 * k as f64);
        let v = regularized_delta(&term, &kernel, a);
        println!("  Im α = {:5.2}: {:10.6} {:+10.6}i", a.im, v.re, v.im);
    }

    let even = StateP::from_superposition(&CoherentSuperposition::even_cat(beta)?);
    let odd = StateP::from_superposition(&CoherentSuperposition::odd_cat(beta)?);
    println!("\n  Im α     even       odd      (sinc² width 3)");
    for k in 0..=6 {
        let a = C64::new(0.0, 0.25 * k as f64);
        println!(
            "{:6.2} {:10.5} {:10.5}",
            a.im,
            state_p_regularized(&even, &kernel, a)?,
            state_p_regularized(&odd, &kernel, a)?
        );
    }
    Ok(())
}
