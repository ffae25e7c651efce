//! Non-retarded dispersion interactions between small magneto-dielectric
//! spheres in a homogeneous medium, under the Abraham and Maxwell
//! stress-tensor prescriptions, together with the microscopic many-body sums
//! and brute-force oracles that discriminate between them.

pub mod cli;
pub mod constants;
pub mod dispersion;
pub mod error;
pub mod materials;
pub mod microscopic;
pub mod oracles;
pub mod polarisability;

pub use dispersion::{
    c3, c6, duality_transform, force_magnitude, potential, C3Breakdown, C6Breakdown, StressChoice,
    TwoSphereSystem,
};
pub use error::{Error, Result};
pub use materials::{MolecularSpecies, Oscillator, Polarisability, ResponseFunction};
pub use polarisability::{excess_alpha, excess_beta, MediumSpec, SphereSpec};
