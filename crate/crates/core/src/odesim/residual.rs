use serde::Serialize;

use super::integrate::Trajectory;
use super::system::{power_sums_linear, SimMode, SystemSpec};
use super::OdeError;
use crate::derivation::pk_chain_bounded;
use crate::poly::Horner;

/// Term budget for each `P_k` compiled for numeric evaluation.
pub const CHAIN_TERM_LIMIT: usize = 2_000_000;

/// `P_0..P_kmax` for a fixed `n1`, compiled for float evaluation at
/// points `[l.., m.., K]`.
#[derive(Clone, Debug)]
pub struct PkEvaluator {
    n1: u32,
    compiled: Vec<Horner<f64>>,
}

impl PkEvaluator {
    pub fn new(n1: u32, k_max: usize) -> Result<Self, OdeError> {
        let chain = pk_chain_bounded(n1, k_max, CHAIN_TERM_LIMIT)?;
        Ok(PkEvaluator {
            n1,
            compiled: chain.polys.iter().map(Horner::compile).collect(),
        })
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn k_max(&self) -> usize {
        self.compiled.len() - 1
    }

    /// `P_k` at a full-mode state.
    pub fn eval(&self, k: usize, state: &[f64], big_k: f64) -> f64 {
        let mut point = state.to_vec();
        point.push(big_k);
        self.compiled[k].eval(&point)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Residuals {
    /// `p[k][j]` is `P_k` at grid point `j`.
    pub p: Vec<Vec<f64>>,
    /// The non-normal equation with `tau'`, `tau''` from second-order
    /// central differences along the grid; `None` at the two endpoints.
    pub odetau: Vec<Option<f64>>,
    /// The same equation with `tau'`, `tau''` taken from the vector field.
    pub odetau_field: Vec<f64>,
}

impl Residuals {
    pub fn max_p(&self, k: usize) -> f64 {
        self.p[k].iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn max_p_all(&self) -> f64 {
        (0..self.p.len()).map(|k| self.max_p(k)).fold(0.0, f64::max)
    }

    pub fn max_odetau(&self) -> f64 {
        self.odetau.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn max_odetau_field(&self) -> f64 {
        self.odetau_field.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Evaluates `P_0..P_kmax` and the non-normal residual along `traj`.
pub fn residuals(traj: &Trajectory, k_max: usize) -> Result<Residuals, OdeError> {
    let eval = PkEvaluator::new(traj.spec.n1, k_max)?;
    residuals_with(traj, &eval, k_max)
}

/// Residuals without the `P_k` chain; the only option in linear mode.
pub fn odetau_residuals(traj: &Trajectory) -> Residuals {
    Residuals {
        p: Vec::new(),
        odetau: odetau_fd(traj),
        odetau_field: traj.states.iter().map(|y| odetau_at(&traj.spec, y)).collect(),
    }
}

pub fn residuals_with(traj: &Trajectory, eval: &PkEvaluator, k_max: usize) -> Result<Residuals, OdeError> {
    let spec = traj.spec;
    if spec.mode != SimMode::Full {
        return Err(OdeError::NeedsFullMode);
    }
    if eval.n1() != spec.n1 {
        return Err(OdeError::InvalidSpec(format!(
            "chain built for n1 = {}, trajectory has n1 = {}",
            eval.n1(),
            spec.n1
        )));
    }
    if k_max > eval.k_max() {
        return Err(OdeError::ChainTooShort {
            requested: k_max,
            available: eval.k_max(),
        });
    }
    let p = (0..=k_max)
        .map(|k| traj.states.iter().map(|y| eval.eval(k, y, spec.k)).collect())
        .collect();
    Ok(Residuals {
        p,
        ..odetau_residuals(traj)
    })
}

/// Left side of the non-normal equation at one state, with `tau'` and
/// `tau''` computed from the vector field rather than from the grid.
pub fn odetau_at(spec: &SystemSpec, y: &[f64]) -> f64 {
    let n = spec.n1 as usize;
    let nf = (n + 1) as f64;
    let tau = spec.tau(y);
    let mut dy = vec![0.0; y.len()];
    spec.rhs(y, &mut dy);
    let (d1, d2, sum_m, sum_l2) = match spec.mode {
        SimMode::Full => {
            let (l, m) = y.split_at(n);
            let (dl, dm) = dy.split_at(n);
            let d1 = 2.0 / 3.0 * dl.iter().sum::<f64>();
            let ddl: f64 = (0..n)
                .map(|i| (0.5 * d1 + dl[i]) * m[i] + (0.5 * tau + l[i]) * dm[i])
                .sum();
            (d1, 2.0 / 3.0 * ddl, m.iter().sum(), l.iter().map(|v| v * v).sum())
        }
        SimMode::Linear => {
            let (phi, psi) = (y[1], y[2]);
            let ls = power_sums_linear(n, y);
            let c = (n as f64 + 3.0) / 3.0;
            let half_tau = 0.5 * tau;
            // with one index pair every power sum is a power of L1
            let l3 = if n == 1 { ls[1].powi(3) } else { ls[3] };
            let dl2 = 2.0 * (half_tau * psi * ls[1] + (half_tau * phi + psi) * ls[2] + phi * l3);
            let d2 = (c * psi + tau * phi) * dy[0]
                + (0.5 * tau * tau + 2.0 / 3.0 * ls[2]) * dy[1]
                + c * tau * dy[2]
                + 2.0 / 3.0 * phi * dl2;
            (dy[0], d2, phi * ls[1] + n as f64 * psi, ls[2])
        }
    };
    -d2 + d1 * sum_m + tau * (0.25 * tau * tau - nf * spec.k + sum_l2)
}

/// The non-normal equation with central differences of `tau` at interior points.
pub fn odetau_fd(traj: &Trajectory) -> Vec<Option<f64>> {
    let spec = traj.spec;
    let n = spec.n1 as usize;
    let nf = (n + 1) as f64;
    let tau = traj.tau();
    let h = traj.step;
    (0..tau.len())
        .map(|j| {
            if j == 0 || j + 1 >= tau.len() {
                return None;
            }
            let d1 = (tau[j + 1] - tau[j - 1]) / (2.0 * h);
            let d2 = (tau[j + 1] - 2.0 * tau[j] + tau[j - 1]) / (h * h);
            let (sum_m, sum_l2) = sums(&spec, &traj.states[j]);
            let t = tau[j];
            Some(-d2 + d1 * sum_m + t * (0.25 * t * t - nf * spec.k + sum_l2))
        })
        .collect()
}

/// `(sum m_i, sum l_i^2)` in either mode.
fn sums(spec: &SystemSpec, y: &[f64]) -> (f64, f64) {
    let n = spec.n1 as usize;
    match spec.mode {
        SimMode::Full => (y[n..].iter().sum(), y[..n].iter().map(|l| l * l).sum()),
        SimMode::Linear => {
            let ls = power_sums_linear(n, y);
            (y[1] * ls[1] + n as f64 * y[2], ls[2])
        }
    }
}
