use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::derivation::{full_system, odetau_full};
use crate::poly::{int, QuadraticSurd, Rational};
use crate::rings::Ring;

/// A state with entries in one real quadratic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactState {
    pub lambda: Vec<QuadraticSurd>,
    pub mu: Vec<QuadraticSurd>,
    pub tau: QuadraticSurd,
}

impl ExactState {
    pub fn to_f64(&self) -> Vec<f64> {
        self.lambda.iter().chain(&self.mu).map(QuadraticSurd::to_f64).collect()
    }

    /// True when every right-hand side and the non-normal equation vanish exactly.
    pub fn is_stationary(&self, k: &Rational) -> bool {
        let n1 = self.lambda.len() as u32;
        let Ok(ring) = Ring::full(n1) else { return false };
        let Ok(sys) = full_system(&ring) else { return false };
        let names: Vec<String> = (1..=n1)
            .map(|i| format!("l{i}"))
            .chain((1..=n1).map(|i| format!("m{i}")))
            .collect();
        let mut at: HashMap<&str, QuadraticSurd> = names
            .iter()
            .map(String::as_str)
            .zip(self.lambda.iter().chain(&self.mu).cloned())
            .collect();
        at.insert("K", QuadraticSurd::rational(k.clone()));
        let mut polys = Vec::new();
        for name in &names {
            match ring.var(name).map_err(|_| ()).and_then(|v| sys.apply(&v).map_err(|_| ())) {
                Ok(p) => polys.push(p),
                Err(()) => return false,
            }
        }
        match odetau_full(&ring) {
            Ok(p) => polys.push(p),
            Err(_) => return false,
        }
        polys.iter().all(|p| p.evaluate(&at).map(|v| v.is_zero()).unwrap_or(false))
    }
}

impl std::fmt::Display for ExactState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[QuadraticSurd]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "l = ({}), m = ({}), tau = {}", join(&self.lambda), join(&self.mu), self.tau)
    }
}

/// Constant states with `tau = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TauZeroConstants {
    /// `K = 0`: `m = 0` and any `l` with `sum l = 0`.
    ZeroMuZeroSum,
    /// `K < 0`: `l = 0` and each `m_i = ±sqrt(-K)`.
    ZeroLambda { mu_abs: String },
    /// `K > 0`: none.
    Empty,
}

#[derive(Clone, Debug)]
pub struct ConstantSolutions {
    pub n1: u32,
    pub k: Rational,
    /// Constant states with `tau != 0`.
    pub nonminimal: Vec<ExactState>,
    pub tau_zero: TauZeroConstants,
}

/// Solves `l_i' = m_i' = 0` together with the non-normal equation for constant
/// `tau != 0`.
///
/// `l_i' = (tau/2 + l_i) m_i = 0` splits the indices: `a` of them have
/// `m_i = 0`, hence `l_i = 2K/tau`; the other `b` have `l_i = -tau/2` and
/// `m_i^2 = -tau^2/4 - K`. Then `tau = 2/3 sum l` forces
/// `tau^2 = 4aK/(3 + b)`, and the remaining equation is checked exactly.
pub fn constant_solutions(n1: u32, k: &Rational) -> ConstantSolutions {
    let mut nonminimal = Vec::new();
    let n = Rational::from_integer((n1 as i64 + 1).into());
    for b in 0..=n1 {
        let a = n1 - b;
        let a_r = Rational::from_integer((a as i64).into());
        let b_r = Rational::from_integer((b as i64).into());
        let tau2 = int(4) * &a_r * k / (int(3) + &b_r);
        if !tau2.is_positive() {
            continue;
        }
        let mu2 = -(&tau2 / int(4)) - k;
        if b > 0 && mu2.is_negative() {
            continue;
        }
        // tau^2/4 - nK + a (2K)^2 / tau^2 + b tau^2 / 4 = 0
        let residual = &tau2 / int(4) - &n * k + &a_r * int(4) * k * k / &tau2 + &b_r * &tau2 / int(4);
        if !residual.is_zero() {
            continue;
        }
        let root = QuadraticSurd::sqrt(&tau2).expect("positive");
        for sign in [1i64, -1] {
            let tau = &root * &QuadraticSurd::rational(int(sign));
            // 2K / tau = 2K tau / tau^2
            let l_a = &tau * &QuadraticSurd::rational(int(2) * k / &tau2);
            let l_b = &tau * &QuadraticSurd::rational(Rational::new((-1).into(), 2.into()));
            let m_abs = QuadraticSurd::sqrt(&mu2).unwrap_or_else(|| QuadraticSurd::rational(Rational::zero()));
            let mut lambda = vec![l_a.clone(); a as usize];
            lambda.extend(std::iter::repeat_n(l_b.clone(), b as usize));
            let mut mu = vec![QuadraticSurd::rational(Rational::zero()); a as usize];
            mu.extend(std::iter::repeat_n(m_abs, b as usize));
            let s = ExactState { lambda, mu, tau };
            if s.is_stationary(k) {
                nonminimal.push(s);
            }
        }
    }
    let tau_zero = if k.is_zero() {
        TauZeroConstants::ZeroMuZeroSum
    } else if k.is_negative() {
        let m = QuadraticSurd::sqrt(&-k).expect("positive");
        TauZeroConstants::ZeroLambda { mu_abs: m.to_string() }
    } else {
        TauZeroConstants::Empty
    };
    ConstantSolutions {
        n1,
        k: k.clone(),
        nonminimal,
        tau_zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_index_pairs_k_one() {
        let s = constant_solutions(3, &int(1));
        assert_eq!(s.nonminimal.len(), 2);
        let taus: Vec<String> = s.nonminimal.iter().map(|x| x.tau.to_string()).collect();
        assert_eq!(taus, ["2", "-2"]);
        assert_eq!(s.nonminimal[0].to_f64(), vec![1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.tau_zero, TauZeroConstants::Empty);
    }

    #[test]
    fn other_cases_are_empty() {
        for n1 in [1, 2, 4, 5, 6] {
            for k in [-1, 0, 1, 2] {
                assert!(constant_solutions(n1, &int(k)).nonminimal.is_empty(), "n1={n1} K={k}");
            }
        }
        assert!(constant_solutions(3, &int(0)).nonminimal.is_empty());
        assert!(constant_solutions(3, &int(-1)).nonminimal.is_empty());
    }

    #[test]
    fn surd_case() {
        let s = constant_solutions(3, &int(2));
        assert_eq!(s.nonminimal.len(), 2);
        assert_eq!(s.nonminimal[0].tau.to_string(), "2*sqrt(2)");
    }
}
