//! Truncated Fock-space numerics.
//!
//! Everything here works on explicit photon-number amplitudes or density
//! matrices with a finite cutoff. These routines are slow compared to the
//! closed forms elsewhere in the crate, and they exist mostly as exact
//! references: every analytic phase-space formula is cross-checked against a
//! Fock-basis contraction built from the functions in this module.

mod channels;
mod density;
mod state;

pub use channels::{displace, displace_with_loss, loss_channel, phase_flip};
pub use density::{
    husimi_fock, spats_density, superposition_density, thermal_density, DensityMatrix,
};
pub use state::{
    auto_cutoff, coherent_fock, fidelity, overlap, CoherentSuperposition, FockVector,
    MultimodeVector, PureState,
};

/// Truncation loss above which a Fock representation is reported as inadequate.
pub const TRUNCATION_TOLERANCE: f64 = 1e-10;

/// `ln(n!)` for `n = 0..=max`.
pub(crate) fn ln_factorials(max: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(max + 1);
    let mut acc = 0.0;
    table.push(0.0);
    for n in 1..=max {
        acc += (n as f64).ln();
        table.push(acc);
    }
    table
}
