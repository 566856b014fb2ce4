use serde::Serialize;

use super::family::POLE_GUARD;
use super::integrate::Trajectory;
use super::system::SimMode;
use super::OdeError;

/// Polar form `(l_i, m_i) = (r_i sin th_i, r_i cos th_i)` rebuilt from `tau` alone:
/// `th_i = th_i(t0) + 1/2 int tau`, `r_i = -1 / (int cos th_i + C_i)`.
#[derive(Clone, Debug, Serialize)]
pub struct RThetaReport {
    /// `theta[i][j]` for index `i` at grid point `j`.
    pub theta: Vec<Vec<f64>>,
    pub r: Vec<Vec<f64>>,
    /// Max-norm error of the rebuilt `(l, m)` over unflagged grid points.
    pub max_error: f64,
    /// `(index, t)` where `int cos th_i + C_i` came within the pole guard.
    pub flagged: Vec<(usize, f64)>,
}

/// Trapezoidal reconstruction along a `K = 0` full-mode trajectory.
pub fn r_theta_reconstruct(traj: &Trajectory) -> Result<RThetaReport, OdeError> {
    let spec = traj.spec;
    if spec.mode != SimMode::Full {
        return Err(OdeError::NeedsFullMode);
    }
    if spec.k != 0.0 {
        return Err(OdeError::Precondition("the polar reconstruction needs K = 0".into()));
    }
    let n = spec.n1 as usize;
    for (j, y) in traj.states.iter().enumerate() {
        for i in 0..n {
            if y[i].hypot(y[n + i]) < 1e-12 {
                return Err(OdeError::Precondition(format!(
                    "(l{0}, m{0}) vanishes at t = {1}",
                    i + 1,
                    traj.times[j]
                )));
            }
        }
    }
    let h = traj.step;
    let tau = traj.tau();
    let mut half_int_tau = vec![0.0; tau.len()];
    for j in 1..tau.len() {
        half_int_tau[j] = half_int_tau[j - 1] + 0.25 * h * (tau[j - 1] + tau[j]);
    }

    let y0 = &traj.states[0];
    let mut theta = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(n);
    let mut flagged = Vec::new();
    let mut max_error = 0.0f64;
    for i in 0..n {
        let (l0, m0) = (y0[i], y0[n + i]);
        let th0 = l0.atan2(m0);
        let c = -1.0 / l0.hypot(m0);
        let th: Vec<f64> = half_int_tau.iter().map(|s| th0 + s).collect();
        let mut int_cos = 0.0;
        let mut ri = Vec::with_capacity(th.len());
        for j in 0..th.len() {
            if j > 0 {
                int_cos += 0.5 * h * (th[j - 1].cos() + th[j].cos());
            }
            let denom = int_cos + c;
            if denom.abs() < POLE_GUARD {
                flagged.push((i + 1, traj.times[j]));
                ri.push(f64::NAN);
                continue;
            }
            let rv = -1.0 / denom;
            let y = &traj.states[j];
            let err = (rv * th[j].sin() - y[i]).abs().max((rv * th[j].cos() - y[n + i]).abs());
            max_error = max_error.max(err);
            ri.push(rv);
        }
        theta.push(th);
        r.push(ri);
    }
    Ok(RThetaReport {
        theta,
        r,
        max_error,
        flagged,
    })
}
