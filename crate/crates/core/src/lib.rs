//! Entanglement negativity and concurrence of two-qubit states from the
//! minimum eigenvalue of the structural physical approximation of the partial
//! transpose (SPA-PT).
//!
//! * [`qmat`]: 2×2 / 4×4 complex matrices, partial transpose and trace, Jacobi eigensolver.
//! * [`states`]: validated density matrices, parametric families, random ensembles, state files.
//! * [`spa`]: the SPA-PT channel in three constructions and its Choi certification.
//! * [`measures`]: exact negativity and concurrence, μ_min-based estimators, witnesses, bounds.
//! * [`shotsim`]: finite-shot simulation of the average-fidelity measurement.
//! * [`ensemble`]: seeded batch evaluation with invariant tracking.

pub mod ensemble;
pub mod error;
pub mod exec;
pub mod measures;
pub mod qmat;
pub mod shotsim;
pub mod spa;
pub mod states;

pub use error::{Error, Result, Violation};
pub use exec::Execution;
pub use measures::{full_report, EntanglementReport};
pub use qmat::{CMatrix, Spectrum, C64};
pub use shotsim::{ShotBudget, ShotEstimate};
pub use spa::{SpaMethod, SpaOutcome};
pub use states::{DensityMatrix, StateSpec};
