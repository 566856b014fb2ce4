//! Numeric side: RK4 integration of the system, residuals of the `P_k`
//! chain along trajectories, explicit `tau = 0` families, the polar
//! reconstruction for `K = 0`, and exact constant solutions.
//!
//! Full mode integrates `[l_1..l_n1, m_1..m_n1]`. Linear mode integrates
//! `[tau, phi, psi, L_2..L_n1]` under `m_i = phi l_i + psi`, closing the
//! power-sum recursion with Newton's identities.

mod constant;
mod family;
mod integrate;
pub mod io;
mod residual;
mod rtheta;
mod system;

pub use constant::{constant_solutions, ConstantSolutions, ExactState, TauZeroConstants};
pub use family::{closed_form, ClosedFormFamily, Member, POLE_GUARD};
pub use integrate::{integrate, integrate_with, rk4_endpoint, IntegrateOptions, Refinement, Trajectory};
pub use residual::{odetau_at, odetau_fd, odetau_residuals, residuals, residuals_with, PkEvaluator, Residuals, CHAIN_TERM_LIMIT};
pub use rtheta::{r_theta_reconstruct, RThetaReport};
pub use system::{linear_state, SimMode, SystemSpec};

use crate::derivation::DerivationError;
use crate::Exec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OdeError {
    #[error("invalid input: {0}")]
    InvalidSpec(String),
    #[error("state became non-finite at t = {t}")]
    NonFinite { t: f64 },
    #[error("no convergence within {steps} steps (last endpoint change {change:e})")]
    NotConverged { steps: usize, change: f64 },
    #[error("member {index} is at a pole at t = {t}")]
    Pole { index: usize, t: f64 },
    #[error("members with {group} have a-values summing to {sum}, not 0")]
    Constraint { group: String, sum: f64 },
    #[error("this needs a full-mode trajectory")]
    NeedsFullMode,
    #[error("P_{requested} requested but the chain stops at P_{available}")]
    ChainTooShort { requested: usize, available: usize },
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error("{0}")]
    Precondition(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("json: {0}")]
    Json(String),
    #[error("csv: {0}")]
    Csv(String),
}

/// One integration job for [`integrate_many`].
#[derive(Clone, Debug)]
pub struct Job {
    pub spec: SystemSpec,
    pub init: Vec<f64>,
    pub t0: f64,
    pub t1: f64,
}

/// Integrates independent jobs, in order, under the given execution strategy.
pub fn integrate_many(jobs: &[Job], opts: &IntegrateOptions, exec: Exec) -> Vec<Result<Trajectory, OdeError>> {
    exec.map(jobs, |j| integrate_with(&j.spec, &j.init, j.t0, j.t1, opts))
}
