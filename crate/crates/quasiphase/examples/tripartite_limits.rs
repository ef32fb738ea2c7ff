//! Three-mode cat state: W and GHZ limits and a Husimi slice.
//!
//! `cargo run --release --example tripartite_limits`

use quasiphase::analytic::KernelSpec;
use quasiphase::grid::GridAxes;
use quasiphase::multimode::{ghz_w_limits, tripartite_p, tripartite_state_p};
use quasiphase::C64;

fn main() -> quasiphase::Result<()> {
    for (small, large) in [(0.05, 1.0), (0.1, 1.5), (0.2, 2.0)] {
        let (f_w, overlap) = ghz_w_limits(small, large, 16)?;
        println!("F_W({small}) = {f_w:.8}   branch overlap at {large}: {overlap:.3e}");
    }

    let beta = C64::new(1.0, 0.0);
    let total = tripartite_state_p(beta)?
        .integrate_separable(&KernelSpec::husimi(), &GridAxes::square(6.0, 121)?)?;
    println!("\nHusimi normalization: {total:.10}");

    let kernel = KernelSpec::sinc2(3.0)?;
    let zero = C64::new(0.0, 0.0);
    println!("\nsinc² slice along Im α₁ with α₂ = α₃ = 0");
    for k in -4..=4 {
        let a1 = C64::new(0.0, 0.5 * k as f64);
        println!(
            "  {:5.2} {:10.6}",
            a1.im,
            tripartite_p(beta, &kernel, [a1, zero, zero])?
        );
    }
    Ok(())
}
