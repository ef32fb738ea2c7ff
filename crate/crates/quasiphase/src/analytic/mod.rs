//! Closed-form phase-space distributions.
//!
//! The off-diagonal operator `|β̃⟩⟨β|` has a Glauber–Sudarshan representation
//! as a product of two Dirac deltas evaluated at complex support points (see
//! [`DeltaTerm`]). Convolving with a kernel that is an entire function of its
//! arguments turns each delta into an ordinary complex-valued function, which
//! is what [`regularized_delta`] evaluates. Summing those terms with the
//! weights of a coherent superposition gives the regularized distribution of
//! the whole state ([`StateP`], [`state_p_regularized`]).

mod delta;
mod kernel;
mod smooth;
mod state;

pub use delta::{characteristic_fn, interference_term, DeltaTerm};
pub use kernel::{regularized_delta, sinc2_complex, KernelKind, KernelSpec};
pub use smooth::{spats_p, spats_regularized, thermal_p, thermal_regularized};
pub use state::{
    s_param_state, state_p_regularized, SmoothComponent, StateP, WeightedDelta, IMAGINARY_TOLERANCE,
};
