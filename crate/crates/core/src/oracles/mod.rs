//! Independent numerical machinery used to compute and cross-check the
//! dispersion coefficients.

pub mod expansion;
pub mod lattice;
pub mod monte_carlo;
pub mod quadrature;

pub use expansion::{expand_c6_integrand, verify_consistency, ConsistencyReport, ExpansionReport};
pub use lattice::{hamaker_continuum_sum, hamaker_lattice_sum, hamaker_point_limit};
pub use monte_carlo::{at_medium_mc, McEstimate, MonteCarloSpec, AT_MEDIUM_TARGET};
pub use quadrature::{integrate_semiinfinite, Integral, QuadratureSpec};
