//! Click-counting generating function: closed forms, Fock oracle and Monte Carlo.
//!
//! `cargo run --release --example click_generating_function`

use quasiphase::click::{
    fock_click_oracle, g_classical, g_state, monte_carlo_g, ClassicalState, DetectionConfig,
};
use quasiphase::fock::{superposition_density, CoherentSuperposition};
use quasiphase::C64;

fn main() -> quasiphase::Result<()> {
    let cfg = DetectionConfig::balanced(2, 0.5, -1.0)?;
    let cat = CoherentSuperposition::even_cat(C64::new(1.0, 0.0))?;
    let rho = superposition_density(&cat, 60)?;

    println!("even cat, Re α = 0 cut");
    println!("  Im α   closed form    Fock oracle");
    for k in -6..=6 {
        let a = C64::new(0.0, 0.5 * k as f64);
        println!(
            "{:6.2} {:12.8} {:14.8}",
            a.im,
            g_state(&cat, a, &cfg)?,
            fock_click_oracle(&rho, a, &cfg)?
        );
    }

    let thermal = ClassicalState::Thermal { nbar: 0.5 };
    let a = C64::new(1.0, 0.0);
    let exact = g_classical(&thermal, a, &cfg)?;
    let (mc, err) = monte_carlo_g(&thermal, a, &cfg, 200_000, 7)?;
    println!("\nthermal n̄ = 0.5 at α = 1: closed form {exact:.6}, Monte Carlo {mc:.6} ± {err:.1e}");
    Ok(())
}
