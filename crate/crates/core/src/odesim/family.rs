use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::system::SystemSpec;
use super::OdeError;

/// Distance to a pole below which evaluation is refused.
pub const POLE_GUARD: f64 = 1e-9;
const SUM_TOL: f64 = 1e-12;

/// One index pair of an explicit solution.
///
/// With `c` set the member is on the regular branch:
/// `K = 0`: `m = -1/(t+c)`, `l = a/(t+c)`;
/// `K = -1`: `m = -tanh(t+c)`, `l = a sech(t+c)`;
/// `K = 1`: `m = tan(t+c)`, `l = a sec(t+c)`.
/// With `mu` set it is on a constant-`m` branch: `m = 0`, `l = a` for `K = 0`,
/// and `m = ±1`, `l = a e^{±t}` for `K = -1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Member {
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<i8>,
}

impl Member {
    pub fn regular(a: f64, c: f64) -> Self {
        Member { a, c: Some(c), mu: None }
    }

    pub fn constant_mu(a: f64, mu: i8) -> Self {
        Member { a, c: None, mu: Some(mu) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum GroupKey {
    C(u64),
    Mu(i8),
}

/// A validated explicit solution with `tau = 0`: the `a` values of members
/// sharing a `c` (or sharing a constant `m`) sum to zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedFormFamily {
    k: i32,
    members: Vec<Member>,
}

impl ClosedFormFamily {
    pub fn new(k: i32, members: Vec<Member>) -> Result<Self, OdeError> {
        if ![-1, 0, 1].contains(&k) {
            return Err(OdeError::InvalidSpec(format!("families exist for K in {{-1, 0, 1}}, not {k}")));
        }
        if members.is_empty() {
            return Err(OdeError::InvalidSpec("a family needs at least one member".into()));
        }
        let mut groups: BTreeMap<GroupKey, (f64, f64)> = BTreeMap::new();
        for (i, m) in members.iter().enumerate() {
            let key = match (m.c, m.mu) {
                (Some(c), None) if c.is_finite() => GroupKey::C(c.to_bits()),
                (None, Some(mu)) => {
                    let ok = match k {
                        0 => mu == 0,
                        -1 => mu == 1 || mu == -1,
                        _ => false,
                    };
                    if !ok {
                        return Err(OdeError::InvalidSpec(format!(
                            "member {}: constant branch m = {mu} does not exist for K = {k}",
                            i + 1
                        )));
                    }
                    GroupKey::Mu(mu)
                }
                _ => {
                    return Err(OdeError::InvalidSpec(format!(
                        "member {} needs exactly one of a finite `c` or `mu`",
                        i + 1
                    )))
                }
            };
            if !m.a.is_finite() {
                return Err(OdeError::InvalidSpec(format!("member {}: `a` must be finite", i + 1)));
            }
            let g = groups.entry(key).or_insert((0.0, 0.0));
            g.0 += m.a;
            g.1 += m.a.abs();
        }
        for (key, (sum, scale)) in groups {
            if sum.abs() > SUM_TOL * (1.0 + scale) {
                let group = match key {
                    GroupKey::C(bits) => format!("c = {}", f64::from_bits(bits)),
                    GroupKey::Mu(mu) => format!("m = {mu}"),
                };
                return Err(OdeError::Constraint { group, sum });
            }
        }
        Ok(ClosedFormFamily { k, members })
    }

    pub fn k(&self) -> i32 {
        self.k
    }

    pub fn n1(&self) -> u32 {
        self.members.len() as u32
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn spec(&self) -> SystemSpec {
        SystemSpec::full(self.n1(), self.k as f64).expect("nonempty family")
    }

    /// `(l, m, l', m')` of member `i` at `t`.
    fn eval(&self, i: usize, t: f64) -> Result<[f64; 4], OdeError> {
        let m = self.members[i];
        let a = m.a;
        if let Some(mu) = m.mu {
            return Ok(match mu {
                0 => [a, 0.0, 0.0, 0.0],
                s => {
                    let s = s as f64;
                    let e = (s * t).exp();
                    [a * e, s, s * a * e, 0.0]
                }
            });
        }
        let u = t + m.c.expect("validated");
        let pole = |near: bool| {
            if near {
                Err(OdeError::Pole { index: i + 1, t })
            } else {
                Ok(())
            }
        };
        Ok(match self.k {
            0 => {
                pole(u.abs() < POLE_GUARD)?;
                let r = 1.0 / u;
                [a * r, -r, -a * r * r, r * r]
            }
            -1 => {
                let th = u.tanh();
                let sech = 1.0 / u.cosh();
                [a * sech, -th, -a * sech * th, -sech * sech]
            }
            _ => {
                let c = u.cos();
                pole(c.abs() < POLE_GUARD)?;
                let sec = 1.0 / c;
                let tan = u.tan();
                [a * sec, tan, a * sec * tan, sec * sec]
            }
        })
    }

    /// Full-mode state `[l.., m..]` at `t`.
    pub fn state(&self, t: f64) -> Result<Vec<f64>, OdeError> {
        let n = self.members.len();
        let mut y = vec![0.0; 2 * n];
        for i in 0..n {
            let [l, m, _, _] = self.eval(i, t)?;
            y[i] = l;
            y[n + i] = m;
        }
        Ok(y)
    }

    /// Exact time derivative of [`state`](Self::state).
    pub fn derivative(&self, t: f64) -> Result<Vec<f64>, OdeError> {
        let n = self.members.len();
        let mut y = vec![0.0; 2 * n];
        for i in 0..n {
            let [_, _, dl, dm] = self.eval(i, t)?;
            y[i] = dl;
            y[n + i] = dm;
        }
        Ok(y)
    }

    /// Max-norm of `state'(t) - F(state(t))` for the full system `F`.
    pub fn ode_residual(&self, t: f64) -> Result<f64, OdeError> {
        let y = self.state(t)?;
        let dy = self.derivative(t)?;
        let mut f = vec![0.0; y.len()];
        self.spec().rhs(&y, &mut f);
        Ok(dy.iter().zip(&f).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
    }

    /// A random constraint-satisfying family with `n1` members. Regular
    /// shifts `c` are drawn from `c_range`; about one group in four uses a
    /// constant-`m` branch when `K` has one.
    pub fn sample<R: Rng + ?Sized>(k: i32, n1: u32, c_range: (f64, f64), rng: &mut R) -> Result<Self, OdeError> {
        if n1 == 0 {
            return Err(OdeError::InvalidSpec("n1 must be at least 1".into()));
        }
        let n = n1 as usize;
        let mut members = Vec::with_capacity(n);
        let mut start = 0;
        while start < n {
            let size = rng.random_range(1..=(n - start).min(3));
            let special = k != 1 && rng.random_bool(0.25);
            let c = rng.random_range(c_range.0..=c_range.1);
            let mu = if k == 0 { 0 } else if rng.random_bool(0.5) { 1 } else { -1 };
            let mut sum = 0.0;
            for j in 0..size {
                let a = if j + 1 == size { -sum } else { rng.random_range(-2.0..=2.0) };
                sum += a;
                members.push(if special { Member::constant_mu(a, mu) } else { Member::regular(a, c) });
            }
            start += size;
        }
        ClosedFormFamily::new(k, members)
    }
}

/// Full-mode state of `family` at `t`.
pub fn closed_form(family: &ClosedFormFamily, t: f64) -> Result<Vec<f64>, OdeError> {
    family.state(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k0_example() {
        let f = ClosedFormFamily::new(0, vec![Member::regular(1.0, 0.0), Member::regular(-1.0, 0.0)]).unwrap();
        assert_eq!(f.state(1.0).unwrap(), vec![1.0, -1.0, -1.0, -1.0]);
        assert_eq!(f.spec().tau(&f.state(1.0).unwrap()), 0.0);
        assert!(matches!(f.state(0.0), Err(OdeError::Pole { index: 1, .. })));
    }

    #[test]
    fn k_minus_one_constant_branch() {
        let f = ClosedFormFamily::new(-1, vec![Member::constant_mu(2.0, 1), Member::constant_mu(-2.0, 1)]).unwrap();
        assert_eq!(f.state(0.0).unwrap(), vec![2.0, -2.0, 1.0, 1.0]);
        assert!(f.ode_residual(0.7).unwrap() < 1e-12);
    }

    #[test]
    fn constraint_is_enforced() {
        let e = ClosedFormFamily::new(0, vec![Member::regular(1.0, 0.0), Member::regular(1.0, 0.0)]);
        assert!(matches!(e, Err(OdeError::Constraint { .. })));
        assert!(ClosedFormFamily::new(1, vec![Member::constant_mu(0.0, 0)]).is_err());
        assert!(ClosedFormFamily::new(2, vec![Member::regular(0.0, 0.0)]).is_err());
    }
}
