//! Truncated Fock-space states and channels used as numerical references.
//!
//! `cargo run --example fock_oracles`

use quasiphase::fock::{
    coherent_fock, displace_with_loss, fidelity, loss_channel, superposition_density,
    thermal_density, CoherentSuperposition, DensityMatrix, FockVector,
};
use quasiphase::C64;

fn main() -> quasiphase::Result<()> {
    let beta = C64::new(1.2, -0.5);
    let psi = coherent_fock(beta, 40)?;
    println!(
        "|β⟩ with cutoff 40: truncation loss {:.2e}",
        psi.truncation_loss()
    );

    let vacuum = DensityMatrix::pure(&FockVector::number(0, 40)?);
    for gamma in [C64::new(1.0, 0.0), C64::new(3.0, 2.0), C64::new(5.0, 0.0)] {
        let (_, loss) = displace_with_loss(&vacuum, gamma)?;
        println!("displace vacuum by {gamma}: loss beyond cutoff {loss:.2e}");
    }

    let cat = CoherentSuperposition::even_cat(C64::new(1.5, 0.0))?;
    let rho = superposition_density(&cat, 60)?;
    let damped = loss_channel(&rho, 0.7)?;
    println!(
        "\neven cat through τ = 0.7: ⟨n⟩ {:.4} → {:.4}, smallest eigenvalue {:.2e}",
        rho.mean_photon_number(),
        damped.mean_photon_number(),
        damped.min_eigenvalue()
    );

    let thermal = thermal_density(1.0, 80)?;
    println!(
        "thermal ⟨n⟩ at cutoff 80: {:.10}",
        thermal.mean_photon_number()
    );

    let even = cat.to_fock(60)?;
    let odd = CoherentSuperposition::odd_cat(C64::new(1.5, 0.0))?.to_fock(60)?;
    println!(
        "fidelity between even and odd cats: {:.2e}",
        fidelity(&even, &odd)?
    );
    Ok(())
}
