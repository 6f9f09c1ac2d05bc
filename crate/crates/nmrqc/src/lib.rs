//! Simulator for liquid-state NMR quantum computing.
//!
//! The crate models small molecules as registers of coupled spin-1/2 nuclei:
//! weak-coupling spin Hamiltonians, pseudo-pure state preparation, pulse-level
//! compilation of quantum circuits, T1/T2 relaxation, ensemble readout through
//! simulated spectra, and the scaling arithmetic that bounds the approach.
//!
//! Start from [`spin_model::SpinSystem`] for the molecule description,
//! [`init`] for state preparation, [`compiler`] for circuits and pulse
//! sequences, and [`readout`] for spectra and answer extraction. The
//! `examples/` directory walks through each capability end to end.

pub mod cli;
pub mod compiler;
pub mod constants;
pub mod demos;
pub mod engine;
pub mod error;
pub mod init;
pub mod io;
pub mod readout;
pub mod scaling;
pub mod spin_model;

pub use error::{Error, Result};
