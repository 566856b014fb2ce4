use std::collections::BTreeMap;

use num_traits::Zero;

use super::monomial::Monomial;
use super::rational::Rational;
use super::{PolyError, Polynomial};

/// Working remainder keyed by monomial; the largest key is the leading term.
struct Remainder(BTreeMap<Monomial, Rational>);

impl Remainder {
    fn new(p: &Polynomial) -> Self {
        Remainder(p.terms().iter().cloned().collect())
    }

    fn pop_leading(&mut self) -> Option<(Monomial, Rational)> {
        self.0.pop_last()
    }

    /// `self -= c * m * d`, skipping the leading term of `d` (already cancelled).
    fn subtract_tail(&mut self, d: &Polynomial, m: &Monomial, c: &Rational) {
        for (dm, dc) in &d.terms()[1..] {
            let key = dm.mul(m);
            let delta = dc * c;
            match self.0.get_mut(&key) {
                Some(v) => {
                    *v -= &delta;
                    if v.is_zero() {
                        self.0.remove(&key);
                    }
                }
                None => {
                    self.0.insert(key, -delta);
                }
            }
        }
    }
}

impl Polynomial {
    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    ///
    /// Uses the graded-lex order: if `divisor` divides `self` then every leading
    /// term of the running remainder is divisible by the divisor's leading term,
    /// so the first failure proves non-divisibility.
    pub fn divide_exact(&self, divisor: &Polynomial) -> Result<Option<Polynomial>, PolyError> {
        self.check_table(divisor)?;
        let (lm, lc) = divisor
            .leading_term()
            .cloned()
            .ok_or(PolyError::DivisionByZero)?;
        if self.is_zero() {
            return Ok(Some(Polynomial::zero(self.table())));
        }
        if let Some(c) = divisor.constant_value() {
            return Ok(Some(self.scale(&c.recip())));
        }
        let mut rem = Remainder::new(self);
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.pop_leading() {
            let Some(qm) = lm.quotient_of(&m) else {
                return Ok(None);
            };
            let qc = &c / &lc;
            rem.subtract_tail(divisor, &qm, &qc);
            quotient.push((qm, qc));
        }
        Ok(Some(Polynomial::from_terms(self.table(), quotient)))
    }

    /// Whether `divisor` divides `self` exactly.
    pub fn is_divisible_by(&self, divisor: &Polynomial) -> Result<bool, PolyError> {
        Ok(self.divide_exact(divisor)?.is_some())
    }

    /// General multivariate division by one divisor: `self = q * divisor + r`
    /// where no term of `r` is divisible by the divisor's leading monomial.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        self.check_table(divisor)?;
        let (lm, lc) = divisor
            .leading_term()
            .cloned()
            .ok_or(PolyError::DivisionByZero)?;
        let mut rem = Remainder::new(self);
        let mut quotient = Vec::new();
        let mut remainder = Vec::new();
        while let Some((m, c)) = rem.pop_leading() {
            match lm.quotient_of(&m) {
                Some(qm) => {
                    let qc = &c / &lc;
                    rem.subtract_tail(divisor, &qm, &qc);
                    quotient.push((qm, qc));
                }
                None => remainder.push((m, c)),
            }
        }
        Ok((
            Polynomial::from_terms(self.table(), quotient),
            Polynomial::from_terms(self.table(), remainder),
        ))
    }
}

#[cfg(test)]
mod tests {
    use crate::poly::{Polynomial, VarTable};

    #[test]
    fn exact_and_inexact() {
        let t = VarTable::new(["x", "y"]).unwrap();
        let x = Polynomial::var(&t, "x").unwrap();
        let y = Polynomial::var(&t, "y").unwrap();
        let one = Polynomial::one(&t);
        let a = &(&x * &x) - &one;
        let b = &x - &one;
        assert_eq!(a.divide_exact(&b).unwrap(), Some(&x + &one));
        let c = &(&x * &x) + &one;
        assert_eq!(c.divide_exact(&b).unwrap(), None);
        let p = &(&x * &y) + &(&y * &y);
        let q = &(&x * &x) - &(&x * &y);
        let pq = &p * &q;
        assert_eq!(pq.divide_exact(&q).unwrap(), Some(p.clone()));
        assert!(a.divide_exact(&Polynomial::zero(&t)).is_err());
    }

    #[test]
    fn div_rem_reconstructs() {
        let t = VarTable::new(["x", "y"]).unwrap();
        let x = Polynomial::var(&t, "x").unwrap();
        let y = Polynomial::var(&t, "y").unwrap();
        let f = &(&(&x * &x) * &y) + &(&y * &y);
        let g = &(&x * &y) - &Polynomial::one(&t);
        let (q, r) = f.div_rem(&g).unwrap();
        assert_eq!(&(&q * &g) + &r, f);
    }
}
