//! Secrecy capacity of Gaussian MIMO wiretap channels.

pub mod adca;
pub mod comirror;
pub mod degraded;
pub mod error;
pub mod experiments;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod model;
pub mod pbra;
pub mod projections;
pub mod trace;
pub mod zf;

pub use adca::{adca_lower_bound, adca_run, AdcaConfig, AdcaResult};
pub use comirror::{omega_bound, solve_subproblem, CoMirrorConfig, LinearizedObjective};
pub use degraded::{lmi_feasible, matrix_f, verify_reformulation, ReformulationReport};
pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use model::*;
pub use pbra::{
    k_update, kkt_residual, pbra_run, recover_optimal_signaling, x_update, BestResponse, PbraConfig, PbraResult,
    RecoveryConfig,
};
pub use projections::{project_simplex, project_spectrahedron};
pub use trace::{Sense, SolverTrace, Status, TraceRecord};
pub use zf::{null_space_basis, zf_rate, ZfResult};
