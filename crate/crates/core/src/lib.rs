//! Self-dual CAR algebras over a finite-dimensional one-particle space, quasifree
//! KMS and ground states, Pfaffian n-point functions and the relative entropy of
//! fermionic excitation states.
//!
//! A brute-force Fock representation in [`fock_oracle`] provides independent
//! reference values for small systems.

pub mod error;
pub mod fock_oracle;
pub mod linalg;
pub mod models;
pub mod one_particle;
pub mod pfaffian;
pub mod quasifree;
pub mod relent;

pub use error::{Error, Result};
pub use fock_oracle::{umegaki, DensityMatrix, FockRep};
pub use linalg::{CMatrix, CVector, HermitianEigen, C64};
pub use one_particle::{
    BasePolarization, ExcitationVector, Mode, OneParticleSpace, Provenance, SelfDualHamiltonian,
};
pub use pfaffian::{pfaffian, pfaffian_derivative, pfaffian_reference, AntisymmetricMatrix};
pub use quasifree::{Flow, FlowKind, QuasifreeState};
pub use relent::{
    evolved_pfaffian, relent_between, relent_exponential, relent_multi, relent_single, Diagnostics,
    EntropyMethod, EntropyResult,
};

pub use nalgebra;
pub use num_complex;
