//! Independent strip solvers and closed-form fields used to certify the
//! forcings and the evolution law of the interface model.

pub mod boundary;
pub mod poisson;
pub mod profiles;
pub mod quadrature;
pub mod strip;
pub mod suite;

pub use boundary::{
    order1_deviation, verify_order0_boundary, verify_order1_boundary, BoundaryDeviation, J1Form, Order1Data,
    ProfileForm,
};
pub use poisson::{poisson_boundary_derivatives, solve_poisson_general, solve_poisson_stratified, PoissonSolution};
pub use profiles::{
    first_order_chem, first_order_ode_residual, pressure_p0, q0_z0, zeroth_ode_residual, zeroth_profiles,
    FirstOrderChem, Order0Trajectory, PressureP0, Q0Z0, ZerothProfiles,
};
pub use strip::{residual_check, uniform_nodes, BoundaryPair, FnSource, StripField, StripSource, ZeroSource};
pub use suite::{run_suite, CheckRecord, VerifyReport, VerifySettings, MAX_VERIFY_KMAX};
