use serde::Serialize;

use super::system::SystemSpec;
use super::OdeError;

#[derive(Clone, Copy, Debug)]
pub struct IntegrateOptions {
    /// Accept once doubling the step count moves the endpoint by less than this.
    pub tol: f64,
    pub initial_steps: usize,
    pub max_steps: usize,
    /// Max-norm of the state treated as a blow-up.
    pub blow_up: f64,
}

impl IntegrateOptions {
    pub fn with_tol(tol: f64) -> Self {
        IntegrateOptions {
            tol,
            ..Default::default()
        }
    }
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            tol: 1e-10,
            initial_steps: 8,
            max_steps: 1 << 20,
            blow_up: 1e12,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct Refinement {
    pub steps: usize,
    /// Max-norm change of the endpoint against the previous step count.
    pub endpoint_change: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub spec: SystemSpec,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub step: f64,
    pub refinements: Vec<Refinement>,
    /// Time at which the state norm exceeded the blow-up threshold.
    pub blow_up: Option<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn tau(&self) -> Vec<f64> {
        self.states.iter().map(|y| self.spec.tau(y)).collect()
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectory has the initial point")
    }
}

fn rk4_step(spec: &SystemSpec, y: &mut [f64], h: f64, work: &mut [Vec<f64>; 5]) {
    let [k1, k2, k3, k4, tmp] = work;
    spec.rhs(y, k1);
    for i in 0..y.len() {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    spec.rhs(tmp, k2);
    for i in 0..y.len() {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    spec.rhs(tmp, k3);
    for i in 0..y.len() {
        tmp[i] = y[i] + h * k3[i];
    }
    spec.rhs(tmp, k4);
    for i in 0..y.len() {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

enum Outcome {
    Finished,
    BlowUp(usize),
}

/// Fixed-step RK4 with `n` steps. `record` receives every state after the initial one.
fn run(
    spec: &SystemSpec,
    init: &[f64],
    t0: f64,
    h: f64,
    n: usize,
    blow_up: f64,
    mut record: impl FnMut(&[f64]),
) -> Result<(Vec<f64>, Outcome), OdeError> {
    let d = init.len();
    let mut y = init.to_vec();
    let mut work = [vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d]];
    for step in 1..=n {
        rk4_step(spec, &mut y, h, &mut work);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(OdeError::NonFinite { t: t0 + step as f64 * h });
        }
        record(&y);
        if y.iter().fold(0.0f64, |m, v| m.max(v.abs())) > blow_up {
            return Ok((y, Outcome::BlowUp(step)));
        }
    }
    Ok((y, Outcome::Finished))
}

/// Integrates from `t0` to `t1`, doubling the number of RK4 steps until the
/// endpoint changes by less than `opts.tol`.
pub fn integrate_with(
    spec: &SystemSpec,
    init: &[f64],
    t0: f64,
    t1: f64,
    opts: &IntegrateOptions,
) -> Result<Trajectory, OdeError> {
    if init.len() != spec.dim() {
        return Err(OdeError::InvalidSpec(format!(
            "initial state has {} entries, the system needs {}",
            init.len(),
            spec.dim()
        )));
    }
    if init.iter().any(|v| !v.is_finite()) {
        return Err(OdeError::NonFinite { t: t0 });
    }
    if !t0.is_finite() || !t1.is_finite() || t1 <= t0 {
        return Err(OdeError::InvalidSpec("need finite t0 < t1".into()));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(OdeError::InvalidSpec("tolerance must be positive".into()));
    }
    let span = t1 - t0;
    let mut n = opts.initial_steps.max(1);
    let mut refinements = Vec::new();
    let (mut prev, mut outcome) = run(spec, init, t0, span / n as f64, n, opts.blow_up, |_| {})?;
    while matches!(outcome, Outcome::Finished) {
        if n * 2 > opts.max_steps {
            return Err(OdeError::NotConverged {
                steps: n,
                change: refinements.last().map_or(f64::INFINITY, |r: &Refinement| r.endpoint_change),
            });
        }
        n *= 2;
        let (cur, out) = run(spec, init, t0, span / n as f64, n, opts.blow_up, |_| {})?;
        outcome = out;
        if matches!(outcome, Outcome::BlowUp(_)) {
            break;
        }
        let change = cur.iter().zip(&prev).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        refinements.push(Refinement {
            steps: n,
            endpoint_change: change,
        });
        if change < opts.tol {
            break;
        }
        prev = cur;
    }

    let h = span / n as f64;
    let mut states = vec![init.to_vec()];
    let (_, outcome) = run(spec, init, t0, h, n, opts.blow_up, |y| states.push(y.to_vec()))?;
    let times = (0..states.len()).map(|i| t0 + i as f64 * h).collect();
    let blow_up = match outcome {
        Outcome::BlowUp(step) => Some(t0 + step as f64 * h),
        Outcome::Finished => None,
    };
    Ok(Trajectory {
        spec: *spec,
        times,
        states,
        step: h,
        refinements,
        blow_up,
    })
}

pub fn integrate(spec: &SystemSpec, init: &[f64], t0: f64, t1: f64, tol: f64) -> Result<Trajectory, OdeError> {
    integrate_with(spec, init, t0, t1, &IntegrateOptions::with_tol(tol))
}

/// Endpoint of a fixed-step RK4 run; used to measure the convergence order.
pub fn rk4_endpoint(spec: &SystemSpec, init: &[f64], t0: f64, t1: f64, steps: usize) -> Result<Vec<f64>, OdeError> {
    let (y, _) = run(spec, init, t0, (t1 - t0) / steps as f64, steps, f64::INFINITY, |_| {})?;
    Ok(y)
}
