//! Evaluation of polynomials at points.
//!
//! Evaluation order is Horner per variable in table order: the polynomial is
//! viewed as a univariate polynomial in the first table variable whose
//! coefficients are polynomials in the rest, recursively. This order is fixed
//! so floating-point results are reproducible.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{fmt_rational, to_f64, Rational};
use super::{PolyError, Polynomial};

/// A value type a polynomial can be evaluated in.
pub trait Scalar: Clone {
    fn from_rational(r: &Rational) -> Self;
    fn additive_identity() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn additive_identity() -> Self {
        Zero::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
    fn additive_identity() -> Self {
        0.0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

/// Exact element `a + b*sqrt(d)` of a real quadratic field, `d` squarefree-ish and positive.
///
/// Values with different nonzero radicands cannot be combined; doing so panics,
/// since callers always work inside one field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticSurd {
    pub a: Rational,
    pub b: Rational,
    pub d: BigInt,
}

impl QuadraticSurd {
    pub fn rational(a: Rational) -> Self {
        QuadraticSurd {
            a,
            b: <Rational as Zero>::zero(),
            d: BigInt::zero(),
        }
    }

    /// `sqrt(r)` for a rational `r >= 0`, with square factors pulled out where possible.
    pub fn sqrt(r: &Rational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            return Some(Self::rational(<Rational as Zero>::zero()));
        }
        // sqrt(p/q) = sqrt(p*q)/q
        let pq = r.numer() * r.denom();
        let (root, rest) = super::rational::split_square_factor(&pq, 10_000);
        let coeff = Rational::new(root, r.denom().clone());
        if rest.is_one() {
            Some(Self::rational(coeff))
        } else {
            Some(QuadraticSurd {
                a: <Rational as Zero>::zero(),
                b: coeff,
                d: rest,
            })
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn common_d(&self, other: &Self) -> BigInt {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => BigInt::zero(),
            (false, true) => self.d.clone(),
            (true, false) => other.d.clone(),
            (false, false) => {
                assert_eq!(self.d, other.d, "surds from different quadratic fields");
                self.d.clone()
            }
        }
    }

    fn canonical(mut self) -> Self {
        if self.b.is_zero() {
            self.d = BigInt::zero();
        }
        self
    }

    pub fn to_f64(&self) -> f64 {
        let d = to_f64(&Rational::from_integer(self.d.clone()));
        to_f64(&self.a) + to_f64(&self.b) * d.sqrt()
    }
}

impl Scalar for QuadraticSurd {
    fn from_rational(r: &Rational) -> Self {
        Self::rational(r.clone())
    }
    fn additive_identity() -> Self {
        Self::rational(<Rational as Zero>::zero())
    }
    fn plus(&self, other: &Self) -> Self {
        QuadraticSurd {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d: self.common_d(other),
        }
        .canonical()
    }
    fn times(&self, other: &Self) -> Self {
        let d = self.common_d(other);
        let dr = Rational::from_integer(d.clone());
        QuadraticSurd {
            a: &self.a * &other.a + &self.b * &other.b * dr,
            b: &self.a * &other.b + &self.b * &other.a,
            d,
        }
        .canonical()
    }
}

impl Add for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn add(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        Scalar::plus(self, rhs)
    }
}

impl Sub for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn sub(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        Scalar::plus(self, &-rhs)
    }
}

impl Mul for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn mul(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        Scalar::times(self, rhs)
    }
}

impl Neg for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return f.write_str(&fmt_rational(&self.a));
        }
        let root = if self.b.is_one() {
            format!("sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", fmt_rational(&self.b), self.d)
        };
        if self.a.is_zero() {
            f.write_str(&root)
        } else {
            write!(f, "{} + {}", fmt_rational(&self.a), root)
        }
    }
}

/// Recursive Horner form compiled once, evaluated many times.
#[derive(Clone, Debug)]
pub enum Horner<S> {
    Const(S),
    /// `sum_k coeffs[k] * x_var^k`, evaluated from the top power down.
    Node { var: usize, coeffs: Vec<Horner<S>> },
}

impl<S: Scalar> Horner<S> {
    pub fn compile(p: &Polynomial) -> Self {
        let terms: Vec<(Vec<u32>, Rational)> = p
            .terms()
            .iter()
            .map(|(m, c)| (m.exps().to_vec(), c.clone()))
            .collect();
        Self::build(&terms, 0, p.table().len())
    }

    fn build(terms: &[(Vec<u32>, Rational)], var: usize, nvars: usize) -> Self {
        if terms.is_empty() {
            return Horner::Const(S::additive_identity());
        }
        let Some(v) = (var..nvars).find(|&v| terms.iter().any(|(e, _)| e[v] > 0)) else {
            let mut acc = <Rational as Zero>::zero();
            for (_, c) in terms {
                acc += c;
            }
            return Horner::Const(S::from_rational(&acc));
        };
        let deg = terms.iter().map(|(e, _)| e[v]).max().unwrap() as usize;
        let mut buckets: Vec<Vec<(Vec<u32>, Rational)>> = vec![Vec::new(); deg + 1];
        for (e, c) in terms {
            buckets[e[v] as usize].push((e.clone(), c.clone()));
        }
        let coeffs = buckets
            .iter()
            .map(|b| Self::build(b, v + 1, nvars))
            .collect();
        Horner::Node { var: v, coeffs }
    }

    /// Evaluates at `point`, indexed like the polynomial's table.
    pub fn eval(&self, point: &[S]) -> S {
        match self {
            Horner::Const(c) => c.clone(),
            Horner::Node { var, coeffs } => {
                let x = &point[*var];
                let mut acc = coeffs.last().unwrap().eval(point);
                for c in coeffs.iter().rev().skip(1) {
                    acc = acc.times(x).plus(&c.eval(point));
                }
                acc
            }
        }
    }
}

impl Polynomial {
    /// Evaluates at a named assignment covering every variable that occurs.
    pub fn evaluate<S: Scalar>(&self, assignment: &HashMap<&str, S>) -> Result<S, PolyError> {
        let point = self.point_from(assignment)?;
        Ok(Horner::<S>::compile(self).eval(&point))
    }

    pub fn evaluate_f64(&self, assignment: &[(&str, f64)]) -> Result<f64, PolyError> {
        self.evaluate(&assignment.iter().copied().collect())
    }

    pub fn evaluate_rational(&self, assignment: &[(&str, Rational)]) -> Result<Rational, PolyError> {
        self.evaluate(&assignment.iter().cloned().collect())
    }

    /// Dense point in table order; unused variables default to zero.
    pub fn point_from<S: Scalar>(&self, assignment: &HashMap<&str, S>) -> Result<Vec<S>, PolyError> {
        for name in assignment.keys() {
            self.table().index_of(name)?;
        }
        let used = self.variables();
        for name in &used {
            if !assignment.contains_key(name) {
                return Err(PolyError::MissingValue(name.to_string()));
            }
        }
        Ok(self
            .table()
            .names()
            .iter()
            .map(|n| assignment.get(n.as_str()).cloned().unwrap_or_else(S::additive_identity))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::int;
    use crate::poly::VarTable;

    #[test]
    fn horner_matches_exact() {
        let t = VarTable::new(["x", "y"]).unwrap();
        let x = Polynomial::var(&t, "x").unwrap();
        let y = Polynomial::var(&t, "y").unwrap();
        let p = &(&(&x * &x) * &y) - &(&y.pow(3) + &Polynomial::from_int(&t, 5));
        let v = p
            .evaluate_rational(&[("x", int(2)), ("y", int(-3))])
            .unwrap();
        assert_eq!(v, int(4 * -3 + 27 - 5));
        let f = p.evaluate_f64(&[("x", 2.0), ("y", -3.0)]).unwrap();
        assert_eq!(f, 10.0);
        assert!(p.evaluate_f64(&[("x", 1.0)]).is_err());
    }

    #[test]
    fn surd_arithmetic() {
        let s2 = QuadraticSurd::sqrt(&int(8)).unwrap();
        assert_eq!(s2.b, int(2));
        assert_eq!(s2.d, BigInt::from(2));
        let sq = Scalar::times(&s2, &s2);
        assert_eq!(sq, QuadraticSurd::rational(int(8)));
        let r = QuadraticSurd::sqrt(&Rational::new(BigInt::from(9), BigInt::from(4))).unwrap();
        assert_eq!(r, QuadraticSurd::rational(Rational::new(BigInt::from(3), BigInt::from(2))));
    }
}
