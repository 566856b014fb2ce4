//! Ring contexts: a variable table, named macros, and the rule for lowering
//! an indexed sum `sum(...)` over `l[i]`, `m[i]` into the ring.
//!
//! | ring       | variables                                  | macros                          |
//! |------------|--------------------------------------------|---------------------------------|
//! | `full(n1)` | `l1..l{n1}`, `m1..m{n1}`, `K`              | `tau`, `n`, `n1`                |
//! | `lambda`   | `n1, K, tau, phi, psi, L2..L{max}`         | `n`, `L0`, `L1`                 |
//! | `jet`      | `lambda` plus `tau1, tau2` (first two derivatives of `tau`) | as `lambda`    |
//! | `same`     | `n1, K, l, m`                              | `tau`, `n`                      |
//! | `s`        | `n1, K, p, pinv, sn, c, s1..s4`            | `tau`, `n`                      |
//!
//! In `lambda`/`jet` the summand is rewritten with `m[i] = phi*l[i] + psi` and
//! power sums of `l[i]` become `L_k` (`L0 = n1`, `L1 = 3/2*tau`). In `same`
//! every index carries the same `l`, `m`. In `s`, `l[i] = -sn*x_i`,
//! `m[i] = -c*x_i` and `sum x_i^k = s_k`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::poly::{rat, Monomial, PolyError, Polynomial, Rational, VarTable};

pub const SUM_L: &str = "l[i]";
pub const SUM_M: &str = "m[i]";
pub const DEFAULT_MAX_LAMBDA: u32 = 4;
const S_MAX: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("power sum L{needed} exceeds the ring's maximum index {max}")]
    LambdaIndex { needed: u32, max: u32 },
    #[error("power sum s{needed} exceeds the ring's maximum index {max}")]
    SIndex { needed: u32, max: u32 },
    #[error("unknown ring `{0}`")]
    UnknownRing(String),
    #[error("n1 must be at least 1")]
    BadN1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    Full { n1: u32 },
    Lambda { max: u32 },
    Jet { max: u32 },
    Same,
    S,
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::Full { n1 } => write!(f, "full({n1})"),
            RingKind::Lambda { max } if *max == DEFAULT_MAX_LAMBDA => f.write_str("lambda"),
            RingKind::Lambda { max } => write!(f, "lambda({max})"),
            RingKind::Jet { max } if *max == DEFAULT_MAX_LAMBDA => f.write_str("jet"),
            RingKind::Jet { max } => write!(f, "jet({max})"),
            RingKind::Same => f.write_str("same"),
            RingKind::S => f.write_str("s"),
        }
    }
}

impl std::str::FromStr for RingKind {
    type Err = RingError;

    /// Accepts `full(3)`, `lambda`, `lambda(5)`, `jet`, `same`, `s`.
    fn from_str(s: &str) -> Result<Self, RingError> {
        let s = s.trim();
        let (head, arg) = match s.split_once('(') {
            Some((h, rest)) => {
                let arg = rest
                    .strip_suffix(')')
                    .and_then(|a| a.trim().parse::<u32>().ok())
                    .ok_or_else(|| RingError::UnknownRing(s.to_string()))?;
                (h.trim(), Some(arg))
            }
            None => (s, None),
        };
        match (head, arg) {
            ("full", Some(n1)) if n1 >= 1 => Ok(RingKind::Full { n1 }),
            ("full", Some(_)) => Err(RingError::BadN1),
            ("lambda", a) => Ok(RingKind::Lambda {
                max: a.unwrap_or(DEFAULT_MAX_LAMBDA).max(2),
            }),
            ("jet", a) => Ok(RingKind::Jet {
                max: a.unwrap_or(DEFAULT_MAX_LAMBDA).max(2),
            }),
            ("same", None) => Ok(RingKind::Same),
            ("s", None) => Ok(RingKind::S),
            _ => Err(RingError::UnknownRing(s.to_string())),
        }
    }
}

/// A polynomial ring with its macro names and sum-lowering rule.
#[derive(Clone, Debug)]
pub struct Ring {
    kind: RingKind,
    table: Arc<VarTable>,
    summand: Arc<VarTable>,
    macros: BTreeMap<String, Polynomial>,
}

impl Ring {
    pub fn new(kind: RingKind) -> Result<Ring, RingError> {
        let names: Vec<String> = match kind {
            RingKind::Full { n1 } => {
                if n1 == 0 {
                    return Err(RingError::BadN1);
                }
                let mut v: Vec<String> = (1..=n1).map(|i| format!("l{i}")).collect();
                v.extend((1..=n1).map(|i| format!("m{i}")));
                v.push("K".into());
                v
            }
            RingKind::Lambda { max } | RingKind::Jet { max } => {
                let mut v: Vec<String> = ["n1", "K", "tau", "phi", "psi"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                v.extend((2..=max).map(|k| format!("L{k}")));
                if matches!(kind, RingKind::Jet { .. }) {
                    v.push("tau1".into());
                    v.push("tau2".into());
                }
                v
            }
            RingKind::Same => ["n1", "K", "l", "m"].map(String::from).to_vec(),
            RingKind::S => {
                let mut v: Vec<String> = ["n1", "K", "p", "pinv", "sn", "c"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                v.extend((1..=S_MAX).map(|k| format!("s{k}")));
                v
            }
        };
        let table = VarTable::new(names)?;
        let summand = table.extended([SUM_L, SUM_M])?;
        let mut ring = Ring {
            kind,
            table,
            summand,
            macros: BTreeMap::new(),
        };
        ring.install_macros()?;
        Ok(ring)
    }

    pub fn parse(spec: &str) -> Result<Ring, RingError> {
        Ring::new(spec.parse()?)
    }

    pub fn full(n1: u32) -> Result<Ring, RingError> {
        Ring::new(RingKind::Full { n1 })
    }

    pub fn lambda() -> Ring {
        Ring::new(RingKind::Lambda {
            max: DEFAULT_MAX_LAMBDA,
        })
        .expect("static ring")
    }

    pub fn lambda_with_max(max: u32) -> Ring {
        Ring::new(RingKind::Lambda { max: max.max(2) }).expect("static ring")
    }

    pub fn jet() -> Ring {
        Ring::new(RingKind::Jet {
            max: DEFAULT_MAX_LAMBDA,
        })
        .expect("static ring")
    }

    pub fn same() -> Ring {
        Ring::new(RingKind::Same).expect("static ring")
    }

    pub fn s_ring() -> Ring {
        Ring::new(RingKind::S).expect("static ring")
    }

    fn install_macros(&mut self) -> Result<(), RingError> {
        let t = self.table.clone();
        let mut m = BTreeMap::new();
        match self.kind {
            RingKind::Full { n1 } => {
                let sum_l = Polynomial::sum(
                    &t,
                    &(1..=n1)
                        .map(|i| Polynomial::var(&t, &format!("l{i}")))
                        .collect::<Result<Vec<_>, _>>()?,
                );
                m.insert("tau".into(), sum_l.scale(&rat(2, 3)));
                m.insert("n1".into(), Polynomial::from_int(&t, n1 as i64));
                m.insert("n".into(), Polynomial::from_int(&t, n1 as i64 + 1));
            }
            RingKind::Lambda { .. } | RingKind::Jet { .. } => {
                let n1 = Polynomial::var(&t, "n1")?;
                m.insert("n".into(), &n1 + &Polynomial::one(&t));
                m.insert("L0".into(), n1);
                m.insert(
                    "L1".into(),
                    Polynomial::var(&t, "tau")?.scale(&rat(3, 2)),
                );
            }
            RingKind::Same => {
                let n1 = Polynomial::var(&t, "n1")?;
                let l = Polynomial::var(&t, "l")?;
                m.insert("tau".into(), (&n1 * &l).scale(&rat(2, 3)));
                m.insert("n".into(), &n1 + &Polynomial::one(&t));
            }
            RingKind::S => {
                let sn = Polynomial::var(&t, "sn")?;
                let s1 = Polynomial::var(&t, "s1")?;
                let n1 = Polynomial::var(&t, "n1")?;
                m.insert("tau".into(), (&sn * &s1).scale(&rat(-2, 3)));
                m.insert("n".into(), &n1 + &Polynomial::one(&t));
            }
        }
        self.macros = m;
        Ok(())
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    /// The table a `sum(...)` body is parsed over: the ring's variables plus `l[i]`, `m[i]`.
    pub fn summand_table(&self) -> &Arc<VarTable> {
        &self.summand
    }

    pub fn macros(&self) -> &BTreeMap<String, Polynomial> {
        &self.macros
    }

    pub fn max_lambda(&self) -> Option<u32> {
        match self.kind {
            RingKind::Lambda { max } | RingKind::Jet { max } => Some(max),
            _ => None,
        }
    }

    pub fn var(&self, name: &str) -> Result<Polynomial, RingError> {
        Ok(Polynomial::var(&self.table, name)?)
    }

    /// A variable or macro of this ring.
    pub fn resolve(&self, name: &str) -> Result<Polynomial, RingError> {
        if let Some(p) = self.macros.get(name) {
            return Ok(p.clone());
        }
        self.var(name)
    }

    pub fn constant(&self, c: Rational) -> Polynomial {
        Polynomial::constant(&self.table, c)
    }

    pub fn int(&self, n: i64) -> Polynomial {
        Polynomial::from_int(&self.table, n)
    }

    /// `Lambda_k` as a ring element.
    pub fn power_sum(&self, k: u32) -> Result<Polynomial, RingError> {
        match self.kind {
            RingKind::Lambda { max } | RingKind::Jet { max } => match k {
                0 => self.resolve("L0"),
                1 => self.resolve("L1"),
                k if k <= max => self.var(&format!("L{k}")),
                k => Err(RingError::LambdaIndex { needed: k, max }),
            },
            RingKind::S => match k {
                0 => self.var("n1"),
                k if k <= S_MAX => self.var(&format!("s{k}")),
                k => Err(RingError::SIndex {
                    needed: k,
                    max: S_MAX,
                }),
            },
            _ => Err(RingError::UnknownRing(format!(
                "{} has no power-sum variables",
                self.kind
            ))),
        }
    }

    /// Lowers `sum_i body(l[i], m[i])` into the ring. `body` lives over
    /// [`summand_table`](Self::summand_table).
    pub fn lower_sum(&self, body: &Polynomial) -> Result<Polynomial, RingError> {
        let body = body.embed(&self.summand)?;
        match self.kind {
            RingKind::Full { n1 } => {
                let parts = (1..=n1)
                    .map(|i| {
                        let li = Polynomial::var(&self.table, &format!("l{i}"))?;
                        let mi = Polynomial::var(&self.table, &format!("m{i}"))?;
                        body.substitute(&self.table, &[(SUM_L, li), (SUM_M, mi)])
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Polynomial::sum(&self.table, &parts))
            }
            RingKind::Same => {
                let l = self.var("l")?;
                let m = self.var("m")?;
                let s = body.substitute(&self.table, &[(SUM_L, l), (SUM_M, m)])?;
                Ok(&s * &self.var("n1")?)
            }
            RingKind::Lambda { .. } | RingKind::Jet { .. } => {
                let aux = self.table.extended(["x"])?;
                let x = Polynomial::var(&aux, "x")?;
                let phi = Polynomial::var(&aux, "phi")?;
                let psi = Polynomial::var(&aux, "psi")?;
                let m_img = &(&phi * &x) + &psi;
                let e = body.substitute(&aux, &[(SUM_L, x), (SUM_M, m_img)])?;
                self.collapse_power_sums(&e, &aux)
            }
            RingKind::S => {
                let aux = self.table.extended(["x"])?;
                let x = Polynomial::var(&aux, "x")?;
                let sn = Polynomial::var(&aux, "sn")?;
                let c = Polynomial::var(&aux, "c")?;
                let e = body.substitute(
                    &aux,
                    &[(SUM_L, -&(&sn * &x)), (SUM_M, -&(&c * &x))],
                )?;
                self.collapse_power_sums(&e, &aux)
            }
        }
    }

    /// Replaces `x^k` by the k-th power sum, for `e` over `aux = table + [x]`.
    fn collapse_power_sums(
        &self,
        e: &Polynomial,
        aux: &Arc<VarTable>,
    ) -> Result<Polynomial, RingError> {
        let xi = aux.index_of("x")?;
        let coeffs = e.coefficients_in_index(xi);
        let mut acc = Vec::with_capacity(coeffs.len());
        for (k, ck) in coeffs.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let ck = project(ck, &self.table);
            acc.push(&ck * &self.power_sum(k as u32)?);
        }
        Ok(Polynomial::sum(&self.table, &acc))
    }
}

/// Drops trailing table variables that do not occur (e.g. an auxiliary `x`).
fn project(p: &Polynomial, target: &Arc<VarTable>) -> Polynomial {
    let n = target.len();
    let terms = p
        .terms()
        .iter()
        .map(|(m, c)| (Monomial::new(m.exps()[..n].to_vec()), c.clone()));
    Polynomial::from_terms(target, terms)
}

/// Convenience: `sum_i f(l_i, m_i)` style construction over the full ring.
pub fn full_sum<F>(ring: &Ring, f: F) -> Result<Polynomial, RingError>
where
    F: Fn(&Polynomial, &Polynomial) -> Polynomial,
{
    let RingKind::Full { n1 } = ring.kind() else {
        return Err(RingError::UnknownRing(format!("{} is not a full ring", ring.kind())));
    };
    let t = ring.table();
    let parts = (1..=n1)
        .map(|i| {
            let li = Polynomial::var(t, &format!("l{i}"))?;
            let mi = Polynomial::var(t, &format!("m{i}"))?;
            Ok(f(&li, &mi))
        })
        .collect::<Result<Vec<_>, RingError>>()?;
    Ok(Polynomial::sum(t, &parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_names_round_trip() {
        for s in ["full(3)", "lambda", "lambda(6)", "jet", "same", "s"] {
            let k: RingKind = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
        assert!("full(0)".parse::<RingKind>().is_err());
        assert!("nope".parse::<RingKind>().is_err());
    }

    #[test]
    fn lambda_sum_of_mu() {
        let r = Ring::lambda();
        let st = r.summand_table();
        let m = Polynomial::var(st, SUM_M).unwrap();
        let got = r.lower_sum(&m).unwrap();
        let want = &(&r.var("phi").unwrap() * &r.resolve("L1").unwrap())
            + &(&r.var("n1").unwrap() * &r.var("psi").unwrap());
        assert_eq!(got, want);
    }

    #[test]
    fn lambda_overflow_names_index() {
        let r = Ring::lambda();
        let l = Polynomial::var(r.summand_table(), SUM_L).unwrap();
        assert_eq!(
            r.lower_sum(&l.pow(5)).unwrap_err(),
            RingError::LambdaIndex { needed: 5, max: 4 }
        );
    }

    #[test]
    fn full_tau_is_two_thirds_sum() {
        let r = Ring::full(2).unwrap();
        let l = Polynomial::var(r.summand_table(), SUM_L).unwrap();
        let s = r.lower_sum(&l).unwrap();
        assert_eq!(r.resolve("tau").unwrap(), s.scale(&rat(2, 3)));
    }
}
