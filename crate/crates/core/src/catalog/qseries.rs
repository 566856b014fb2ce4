//! Specializations of the power sums `s_k = sum_i (p + b_i)^(-k)` inside `Q`.

use std::collections::BTreeMap;

use num_integer::binomial;
use num_traits::{One, Zero};

use super::corpus::Corpus;
use super::CatalogError;
use crate::poly::{Polynomial, Rational, VarTable};
use crate::rings::Ring;

const S_VARS: [&str; 4] = ["s1", "s2", "s3", "s4"];

/// `Q` over the `s` ring, read from the built-in corpus.
pub fn q_polynomial() -> Polynomial {
    Corpus::builtin()
        .expected_one("q-elim", &Ring::s_ring())
        .expect("built-in Q parses")
}

/// `p^7 Q` with every `b_i = 0`, a polynomial in `n1`.
pub fn q_asymptotic() -> Polynomial {
    q_asymptotic_of(&q_polynomial()).expect("built-in Q is homogeneous of weight 7")
}

/// Substitutes `s_k = n1 * pinv^k` and divides out `pinv^7`.
pub fn q_asymptotic_of(q: &Polynomial) -> Result<Polynomial, CatalogError> {
    let t = q.table();
    let n1 = Polynomial::var(t, "n1")?;
    let pinv = Polynomial::var(t, "pinv")?;
    let map: Vec<(&str, Polynomial)> = S_VARS
        .iter()
        .enumerate()
        .map(|(k, s)| (*s, &n1 * &pinv.pow(k as u32 + 1)))
        .collect();
    let sub = q.substitute(t, &map)?;
    sub.divide_exact(&pinv.pow(7))?
        .ok_or_else(|| CatalogError::Invalid("p^7 Q has a pole at p = infinity".into()))
}

/// Coefficient of `(p + b[at])^(-7)` in the partial fraction expansion of `Q`
/// with `s_k = sum_i (p + b_i)^(-k)` and `n1 = b.len()`.
pub fn q_laurent_coeff(b: &[Rational], at: usize) -> Result<Rational, CatalogError> {
    q_laurent_coeff_of(&q_polynomial(), b, at)
}

/// As [`q_laurent_coeff`] for an arbitrary polynomial in `s1..s4`. Computed
/// twice, by Laurent series at `p = -b[at]` and by clearing denominators over
/// `Q[p]`; the two must agree.
pub fn q_laurent_coeff_of(q: &Polynomial, b: &[Rational], at: usize) -> Result<Rational, CatalogError> {
    if b.is_empty() || at >= b.len() {
        return Err(CatalogError::Invalid("b must be nonempty and `at` must index it".into()));
    }
    let exps = s_exponents(q)?;
    let by_series = via_series(&exps, b, at);
    let by_fraction = via_fraction(&exps, b, at)?;
    if by_series != by_fraction {
        return Err(CatalogError::Invalid(format!(
            "Laurent coefficient mismatch: series {by_series}, fraction {by_fraction}"
        )));
    }
    Ok(by_series)
}

/// Terms of `q` as (exponents of s1..s4, coefficient). Rejects other variables.
fn s_exponents(q: &Polynomial) -> Result<Vec<([u32; 4], Rational)>, CatalogError> {
    let t = q.table();
    let idx: Vec<usize> = S_VARS.iter().map(|s| t.index_of(s)).collect::<Result<_, _>>()?;
    let mut out = Vec::with_capacity(q.num_terms());
    for (m, c) in q.terms() {
        let mut e = [0u32; 4];
        for (k, &i) in idx.iter().enumerate() {
            e[k] = m.exp(i);
        }
        if m.degree() != e.iter().sum::<u32>() {
            return Err(CatalogError::Invalid("Q may only involve s1..s4".into()));
        }
        if weight(&e) > 7 {
            return Err(CatalogError::Invalid("Q has weight above 7".into()));
        }
        out.push((e, c.clone()));
    }
    Ok(out)
}

fn weight(e: &[u32; 4]) -> u32 {
    e.iter().enumerate().map(|(k, x)| (k as u32 + 1) * x).sum()
}

/// Truncated Laurent series `sum_{j} c_j u^(lo + j)`, exact for orders `<= valid`.
#[derive(Clone)]
struct Laurent {
    lo: i32,
    coeffs: Vec<Rational>,
    valid: i32,
}

impl Laurent {
    fn constant(c: Rational, valid: i32) -> Self {
        Laurent { lo: 0, coeffs: vec![c], valid }
    }

    fn coeff(&self, order: i32) -> Rational {
        let j = order - self.lo;
        if j < 0 || j as usize >= self.coeffs.len() {
            Rational::zero()
        } else {
            self.coeffs[j as usize].clone()
        }
    }

    fn add(&self, o: &Laurent) -> Laurent {
        let lo = self.lo.min(o.lo);
        let valid = self.valid.min(o.valid);
        let coeffs = (lo..=valid).map(|k| self.coeff(k) + o.coeff(k)).collect();
        Laurent { lo, coeffs, valid }
    }

    fn mul(&self, o: &Laurent) -> Laurent {
        let lo = self.lo + o.lo;
        let valid = (self.valid + o.lo).min(o.valid + self.lo);
        let mut coeffs = vec![Rational::zero(); (valid - lo + 1).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, c) in o.coeffs.iter().enumerate() {
                let k = i + j;
                if k < coeffs.len() {
                    coeffs[k] += a * c;
                }
            }
        }
        Laurent { lo, coeffs, valid }
    }
}

/// Expansion of `(d + u)^(-k)` about `u = 0`, exact up to order `valid`.
fn inverse_power(d: &Rational, k: u32, valid: i32) -> Laurent {
    if d.is_zero() {
        return Laurent {
            lo: -(k as i32),
            coeffs: vec![Rational::one()],
            valid,
        };
    }
    // (d + u)^(-k) = sum_j (-1)^j C(k + j - 1, j) d^(-k - j) u^j
    let inv = d.recip();
    let coeffs = (0..=valid.max(0))
        .map(|j| {
            let j = j as u32;
            let c = Rational::from(binomial(num_bigint::BigInt::from(k + j - 1), num_bigint::BigInt::from(j)));
            let sign = if j.is_multiple_of(2) { c } else { -c };
            sign * num_traits::pow(inv.clone(), (k + j) as usize)
        })
        .collect();
    Laurent { lo: 0, coeffs, valid }
}

fn via_series(exps: &[([u32; 4], Rational)], b: &[Rational], at: usize) -> Rational {
    let centre = &b[at];
    // Every factor is needed up to the order that still affects u^(-7).
    let valid = 7;
    let s: Vec<Laurent> = (1..=4u32)
        .map(|k| {
            b.iter()
                .map(|bi| inverse_power(&(bi - centre), k, valid))
                .reduce(|a, x| a.add(&x))
                .expect("b is nonempty")
        })
        .collect();
    let mut total: Option<Laurent> = None;
    for (e, c) in exps {
        let mut term = Laurent::constant(c.clone(), valid);
        for (k, &x) in e.iter().enumerate() {
            for _ in 0..x {
                term = term.mul(&s[k]);
            }
        }
        total = Some(match total {
            Some(t) => t.add(&term),
            None => term,
        });
    }
    match total {
        Some(t) => {
            debug_assert!(t.valid >= -7);
            t.coeff(-7)
        }
        None => Rational::zero(),
    }
}

/// Over `Q[p]`: with `D = prod_g (p + b_g)^4` over distinct values `b_g`,
/// `s_k = A_k / D`, so `Q = N / D^m` where `m` is the largest number of
/// `s`-factors in a term. The coefficient of `(p + b)^(-7)` is then
/// `(N / (p + b)^(4m - 7))(-b) / R(-b)^m` with `D = (p + b)^4 R`.
fn via_fraction(exps: &[([u32; 4], Rational)], b: &[Rational], at: usize) -> Result<Rational, CatalogError> {
    let t = VarTable::new(["p"])?;
    let p = Polynomial::var(&t, "p")?;
    let mut groups: BTreeMap<Rational, i64> = BTreeMap::new();
    for bi in b {
        *groups.entry(bi.clone()).or_default() += 1;
    }
    let lin = |bg: &Rational| &p + &Polynomial::constant(&t, bg.clone());
    let d = Polynomial::product(&t, &groups.keys().map(|g| lin(g).pow(4)).collect::<Vec<_>>());
    let a: Vec<Polynomial> = (1..=4u32)
        .map(|k| {
            let parts: Vec<Polynomial> = groups
                .iter()
                .map(|(g, &mult)| {
                    let others = Polynomial::product(
                        &t,
                        &groups.keys().filter(|h| *h != g).map(|h| lin(h).pow(4)).collect::<Vec<_>>(),
                    );
                    (&lin(g).pow(4 - k) * &others).scale(&Rational::from_integer(mult.into()))
                })
                .collect();
            Polynomial::sum(&t, &parts)
        })
        .collect();
    let m = exps.iter().map(|(e, _)| e.iter().sum::<u32>()).max().unwrap_or(0);
    let mut numer = Polynomial::zero(&t);
    for (e, c) in exps {
        let mut term = Polynomial::constant(&t, c.clone());
        for (k, &x) in e.iter().enumerate() {
            term = &term * &a[k].pow(x);
        }
        term = &term * &d.pow(m - e.iter().sum::<u32>());
        numer = &numer + &term;
    }
    let centre = &b[at];
    let here = lin(centre);
    let order = (4 * m).saturating_sub(7);
    let reduced = numer
        .divide_exact(&here.pow(order))?
        .ok_or_else(|| CatalogError::Invalid("pole of Q exceeds order 7".into()))?;
    let rest = d
        .divide_exact(&here.pow(4))?
        .expect("D contains (p + b)^4");
    let at_point = [("p", -centre.clone())];
    let num = reduced.evaluate_rational(&at_point)?;
    let den = rest.pow(m).evaluate_rational(&at_point)?;
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    #[test]
    fn asymptotic_matches_closed_form() {
        let got = q_asymptotic();
        let r = Ring::s_ring();
        let n1 = r.var("n1").unwrap();
        let want = &(&(&n1.pow(3).scale(&int(-2)) * &(&n1 - &r.int(3))) * &(&n1 + &r.int(3)))
            * &(&n1.scale(&int(2)) + &r.int(3));
        assert_eq!(got, want);
    }

    #[test]
    fn laurent_examples() {
        let z = Rational::zero;
        assert_eq!(q_laurent_coeff(&[z(), z(), int(1)], 0).unwrap(), int(560));
        assert_eq!(q_laurent_coeff(&[z()], 0).unwrap(), int(80));
        assert_eq!(q_laurent_coeff(&[z(), z(), z()], 1).unwrap(), int(0));
    }
}
