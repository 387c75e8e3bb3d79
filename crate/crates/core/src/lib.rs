//! Spin Hamiltonians, effective-mass estimates and gate-induced Stark shifts
//! for phosphorus donor qubits in silicon and germanium.
//!
//! All energies are frequencies E/h in MHz. Lengths are nm, fields T, electric
//! fields V/cm, unless a name says otherwise.

// `!(x > 0.0)` style guards also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod constants;
pub mod effective_mass;
pub mod error;
pub mod gate_stark;
pub mod numerics;
pub mod parallel;
pub mod single_donor;
pub mod sweep;
pub mod two_donor;

pub use constants::{
    donor_params, donor_params_by_tag, material_params, ConstantSet, DonorParams, DonorSpecies, Host,
    MaterialParams, PhysicalConstants,
};
pub use error::{Error, Result};
pub use numerics::{eig_sym, eigvals_sym, find_root, EigenSystem, RootResult, SymmetricMatrix};
pub use parallel::ExecMode;
