//! Pseudospectral simulation of two coupled interfaces bounding a thin
//! tumor strip, with an independent strip-solver harness for checking the
//! forcings and the order-ε evolution law.

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod model;
pub mod oracle;
pub mod spectral;
pub mod timestepper;

pub use error::{Error, Result};
pub use model::{ForcingCache, ForcingMode, ModelParams, SimState, System};
pub use spectral::{Grid, SpectralField, Symbol};
pub use timestepper::{run, RunConfig, Termination, Trajectory};
pub use diagnostics::DiagnosticsRecord;
