//! Steady states, output intensity squeezing spectra and optomechanical
//! entanglement for a cavity with an atomic-ensemble mirror on one side and
//! a mechanical resonator on the other.

// NaN must fail tolerance checks, which `!(x <= tol)` guarantees.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::field_reassign_with_default))]

pub mod audit;
pub mod entanglement;
pub mod error;
pub mod model;
pub mod numerics;
pub mod spectrum;
pub mod steadystate;

pub use entanglement::{
    build_drift, detuning_sweep, log_negativity, steady_covariance, DriftSystem, EntanglementResult,
};
pub use error::{Error, Result};
pub use model::{derive_couplings, validate, DerivedCouplings, SystemParams, Warning};
pub use numerics::{ComplexMatrix, RealMatrix};
pub use spectrum::{
    build_matrix, output_spectrum, spectrum_sweep, transfer_closed_form, transfer_direct, AppendixForm,
    FluctuationMatrix, SpectrumPoint, SpectrumTable, TransferCoefficients,
};
pub use steadystate::{fixed_point, solve_beta, SteadyState};
