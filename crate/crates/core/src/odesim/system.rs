use serde::{Deserialize, Serialize};

use super::OdeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    /// State `[l_1..l_n1, m_1..m_n1]`.
    Full,
    /// State `[tau, phi, psi, L_2..L_n1]` under `m_i = phi l_i + psi`.
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub n1: u32,
    pub k: f64,
    pub mode: SimMode,
}

impl SystemSpec {
    pub fn full(n1: u32, k: f64) -> Result<Self, OdeError> {
        Self::new(n1, k, SimMode::Full)
    }

    pub fn linear(n1: u32, k: f64) -> Result<Self, OdeError> {
        Self::new(n1, k, SimMode::Linear)
    }

    pub fn new(n1: u32, k: f64, mode: SimMode) -> Result<Self, OdeError> {
        if n1 == 0 {
            return Err(OdeError::InvalidSpec("n1 must be at least 1".into()));
        }
        if !k.is_finite() {
            return Err(OdeError::InvalidSpec("K must be finite".into()));
        }
        Ok(SystemSpec { n1, k, mode })
    }

    /// Number of power sums `L_2..L_n1` carried in linear mode.
    pub fn tracked_power_sums(&self) -> usize {
        self.n1.saturating_sub(1) as usize
    }

    pub fn dim(&self) -> usize {
        match self.mode {
            SimMode::Full => 2 * self.n1 as usize,
            SimMode::Linear => 3 + self.tracked_power_sums(),
        }
    }

    /// Column names of the state vector.
    pub fn state_names(&self) -> Vec<String> {
        let n = self.n1;
        match self.mode {
            SimMode::Full => (1..=n)
                .map(|i| format!("l{i}"))
                .chain((1..=n).map(|i| format!("m{i}")))
                .collect(),
            SimMode::Linear => ["tau", "phi", "psi"]
                .iter()
                .map(|s| s.to_string())
                .chain((2..=n).map(|k| format!("L{k}")))
                .collect(),
        }
    }

    pub fn tau(&self, y: &[f64]) -> f64 {
        match self.mode {
            SimMode::Full => 2.0 / 3.0 * y[..self.n1 as usize].iter().sum::<f64>(),
            SimMode::Linear => y[0],
        }
    }

    pub fn rhs(&self, y: &[f64], dy: &mut [f64]) {
        match self.mode {
            SimMode::Full => self.rhs_full(y, dy),
            SimMode::Linear => self.rhs_linear(y, dy),
        }
    }

    fn rhs_full(&self, y: &[f64], dy: &mut [f64]) {
        let n = self.n1 as usize;
        let half_tau = self.tau(y) / 2.0;
        let (l, m) = y.split_at(n);
        for i in 0..n {
            dy[i] = (half_tau + l[i]) * m[i];
            dy[n + i] = m[i] * m[i] - half_tau * l[i] + self.k;
        }
    }

    fn rhs_linear(&self, y: &[f64], dy: &mut [f64]) {
        let n = self.n1 as usize;
        let (tau, phi, psi) = (y[0], y[1], y[2]);
        let ls = power_sums_linear(n, y);
        let half_tau = tau / 2.0;
        dy[0] = (n as f64 + 3.0) / 3.0 * tau * psi + half_tau * tau * phi + 2.0 / 3.0 * phi * ls[2];
        dy[1] = -half_tau * (phi * phi + 1.0) + phi * psi;
        dy[2] = (psi - half_tau * phi) * psi + self.k;
        for k in 2..=n {
            let kf = k as f64;
            dy[1 + k] = kf * (half_tau * psi * ls[k - 1] + (half_tau * phi + psi) * ls[k] + phi * ls[k + 1]);
        }
    }
}

/// `[L_0, .., L_{n+1}]` from a linear-mode state; `L_{n+1}` via Newton's identities.
pub(crate) fn power_sums_linear(n: usize, y: &[f64]) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 2);
    p.push(n as f64);
    p.push(1.5 * y[0]);
    p.extend_from_slice(&y[3..3 + n.saturating_sub(1)]);
    p.push(next_power_sum(&p[1..]));
    p
}

/// For power sums `p_1..p_n` of `n` numbers, returns `p_{n+1}`.
pub(crate) fn next_power_sum(p: &[f64]) -> f64 {
    let n = p.len();
    // k e_k = sum_{i=1}^k (-1)^(i-1) e_{k-i} p_i
    let mut e = vec![1.0; n + 1];
    for k in 1..=n {
        let mut s = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            s += sign * e[k - i] * p[i - 1];
        }
        e[k] = s / k as f64;
    }
    // p_{n+1} = sum_{i=1}^n (-1)^(i-1) e_i p_{n+1-i}
    (1..=n)
        .map(|i| {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            sign * e[i] * p[n - i]
        })
        .sum()
}

/// Linear-mode state for the given eigenvalues and relation `m = phi l + psi`.
pub fn linear_state(lambda: &[f64], phi: f64, psi: f64) -> Vec<f64> {
    let tau = 2.0 / 3.0 * lambda.iter().sum::<f64>();
    let mut y = vec![tau, phi, psi];
    for k in 2..=lambda.len() as i32 {
        y.push(lambda.iter().map(|l| l.powi(k)).sum());
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_identity_closure() {
        let xs = [0.3, -1.2, 2.0];
        let p: Vec<f64> = (1..=3).map(|k| xs.iter().map(|x: &f64| x.powi(k)).sum()).collect();
        let want: f64 = xs.iter().map(|x| x.powi(4)).sum();
        assert!((next_power_sum(&p) - want).abs() < 1e-12);
    }

    #[test]
    fn dimensions() {
        assert_eq!(SystemSpec::full(3, 0.0).unwrap().dim(), 6);
        assert_eq!(SystemSpec::linear(3, 0.0).unwrap().dim(), 5);
        assert_eq!(SystemSpec::linear(1, 0.0).unwrap().dim(), 3);
        assert!(SystemSpec::full(0, 0.0).is_err());
    }
}
