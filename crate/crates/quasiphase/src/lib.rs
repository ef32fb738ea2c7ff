//! Regularized quasiprobability distributions for quantum-optical states.
//!
//! The crate evaluates phase-space representations of light in closed form and
//! checks each of them against an independent numerical route:
//!
//! * [`fock`]: truncated Fock-space states, channels and the exact
//!   Husimi/overlap oracles.
//! * [`analytic`]: complex-delta interference terms of coherent
//!   superpositions, the sinc² nonclassicality kernel and s-parametrized
//!   Gaussian smoothing, thermal and photon-added thermal P functions.
//! * [`grid`] and [`convolution`]: sampled phase-space grids, FFT-based
//!   convolution and Gaussian deconvolution.
//! * [`click`]: generating functions of multiplexed on-off click detection,
//!   with a Fock-space oracle and a seeded Monte Carlo simulation.
//! * [`hybrid`] and [`multimode`]: hybrid quasiprobability matrices and
//!   multimode cat-state distributions with their GHZ/W limits.
//! * [`entanglement`]: entanglement quasiprobabilities of two-qubit states.
//! * [`io`], [`validation`] and [`cli`]: serialization, the oracle suite
//!   and the command-line front end.

pub mod analytic;
pub mod cli;
pub mod click;
pub mod convolution;
pub mod entanglement;
pub mod error;
pub mod fock;
pub mod grid;
pub mod hybrid;
pub mod io;
pub mod multimode;
mod nnls;
pub mod validation;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
