use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::rational::{fmt_rational, gcd_numerators, int, lcm_denominators, Rational};
use super::{PolyError, VarTable};
use crate::exec::Exec;

/// Products with at least this many term pairs are split across threads.
const PAR_MUL_THRESHOLD: usize = 40_000;

/// Sparse multivariate polynomial over the rationals.
///
/// Terms are kept sorted in descending graded-lex order with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone)]
pub struct Polynomial {
    table: Arc<VarTable>,
    terms: Vec<(Monomial, Rational)>,
}

/// Result of splitting off the rational content.
#[derive(Clone, Debug)]
pub struct Normalized {
    /// Positive rational with `p = sign * content * primitive`.
    pub content: Rational,
    pub sign: i8,
    /// Integer coefficients with gcd 1 and a positive leading coefficient.
    pub primitive: Polynomial,
}

impl Polynomial {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        Polynomial {
            table: table.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(table: &Arc<VarTable>) -> Self {
        Self::constant(table, Rational::one())
    }

    pub fn constant(table: &Arc<VarTable>, c: Rational) -> Self {
        let mut p = Self::zero(table);
        if !c.is_zero() {
            p.terms.push((Monomial::one(table.len()), c));
        }
        p
    }

    pub fn from_int(table: &Arc<VarTable>, n: i64) -> Self {
        Self::constant(table, int(n))
    }

    pub fn var(table: &Arc<VarTable>, name: &str) -> Result<Self, PolyError> {
        let i = table.index_of(name)?;
        Ok(Self::var_index(table, i))
    }

    pub fn var_index(table: &Arc<VarTable>, i: usize) -> Self {
        Polynomial {
            table: table.clone(),
            terms: vec![(Monomial::var(table.len(), i, 1), Rational::one())],
        }
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms<I>(table: &Arc<VarTable>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.len(), table.len());
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(table, acc)
    }

    fn from_map(table: &Arc<VarTable>, acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial {
            table: table.clone(),
            terms,
        }
    }

    /// Terms already sorted descending and free of zeros.
    pub(crate) fn from_sorted(table: &Arc<VarTable>, terms: Vec<(Monomial, Rational)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Polynomial {
            table: table.clone(),
            terms,
        }
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    /// Coefficient of the grlex-largest monomial.
    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in_index(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exp(var)).max()
    }

    /// Degree in `var`; `None` for the zero polynomial.
    pub fn degree_in(&self, var: &str) -> Result<Option<u32>, PolyError> {
        let i = self.table.index_of(var)?;
        Ok(self.degree_in_index(i))
    }

    /// Names of the variables that actually occur.
    pub fn variables(&self) -> Vec<&str> {
        (0..self.table.len())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exp(i) > 0))
            .map(|i| self.table.name(i))
            .collect()
    }

    pub fn check_table(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.table.same_as(&other.table) {
            Ok(())
        } else {
            Err(PolyError::TableMismatch {
                left: self.table.names().to_vec(),
                right: other.table.names().to_vec(),
            })
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.table);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), a * c))
            .collect();
        Polynomial::from_sorted(&self.table, terms)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.table);
        }
        // Multiplying by a monomial preserves the order.
        let terms = self
            .terms
            .iter()
            .map(|(t, a)| (t.mul(m), a * c))
            .collect();
        Polynomial::from_sorted(&self.table, terms)
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_table(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_table(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        use std::cmp::Ordering::*;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| {
            (m.clone(), if negate { -c } else { c.clone() })
        }));
        Polynomial::from_sorted(&self.table, out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.try_mul_with(other, Exec::default())
    }

    /// Exact product. Coefficients are cleared to integers first so the inner
    /// loop accumulates `BigInt`s without per-step gcd normalization.
    pub fn try_mul_with(&self, other: &Polynomial, exec: Exec) -> Result<Polynomial, PolyError> {
        self.check_table(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.table));
        }
        if let Some(c) = other.constant_value() {
            return Ok(self.scale(&c));
        }
        if let Some(c) = self.constant_value() {
            return Ok(other.scale(&c));
        }
        let (la, ia) = integer_terms(&self.terms);
        let (lb, ib) = integer_terms(&other.terms);

        let chunk_product = |chunk: &[(Monomial, BigInt)]| {
            let mut acc: HashMap<Monomial, BigInt> =
                HashMap::with_capacity(chunk.len() * ib.len());
            for (ma, ca) in chunk {
                for (mb, cb) in &ib {
                    let c = ca * cb;
                    acc.entry(ma.mul(mb))
                        .and_modify(|e| *e += &c)
                        .or_insert(c);
                }
            }
            acc
        };

        let work = ia.len() * ib.len();
        let acc = if exec.is_parallel() && work >= PAR_MUL_THRESHOLD && ia.len() > 1 {
            let nchunks = ia.len().min(64);
            let size = ia.len().div_ceil(nchunks);
            let chunks: Vec<&[(Monomial, BigInt)]> = ia.chunks(size).collect();
            let parts = exec.map(&chunks, |c| chunk_product(c));
            let mut it = parts.into_iter();
            let mut acc = it.next().unwrap_or_default();
            for part in it {
                for (m, c) in part {
                    acc.entry(m).and_modify(|e| *e += &c).or_insert(c);
                }
            }
            acc
        } else {
            chunk_product(&ia)
        };

        let denom = la * lb;
        let mut terms: Vec<(Monomial, Rational)> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, Rational::new(c, denom.clone())))
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Ok(Polynomial::from_sorted(&self.table, terms))
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.table);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `pow` for exponents that arrive as signed integers (e.g. from parsed text).
    pub fn try_pow(&self, e: i64) -> Result<Polynomial, PolyError> {
        let e = u32::try_from(e).map_err(|_| PolyError::NegativeExponent(e))?;
        Ok(self.pow(e))
    }

    pub fn differentiate_index(&self, var: usize) -> Polynomial {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e > 0 {
                terms.push((m.with_exp(var, e - 1), c * int(e as i64)));
            }
        }
        // Lowering one exponent can reorder terms of different degree classes.
        Polynomial::from_terms(&self.table, terms)
    }

    /// Formal partial derivative.
    pub fn differentiate(&self, var: &str) -> Result<Polynomial, PolyError> {
        let i = self.table.index_of(var)?;
        Ok(self.differentiate_index(i))
    }

    /// Simultaneous substitution `name -> image`, landing in `target`.
    ///
    /// Variables without an entry in `map` are carried over by name and must
    /// exist in `target`. Every image must live over `target`.
    pub fn substitute(
        &self,
        target: &Arc<VarTable>,
        map: &[(&str, Polynomial)],
    ) -> Result<Polynomial, PolyError> {
        let n = self.table.len();
        let mut images: Vec<Option<Polynomial>> = vec![None; n];
        for (name, img) in map {
            let i = self.table.index_of(name)?;
            if !img.table.same_as(target) {
                return Err(PolyError::TableMismatch {
                    left: target.names().to_vec(),
                    right: img.table.names().to_vec(),
                });
            }
            images[i] = Some(img.clone());
        }
        let used: Vec<usize> = (0..n)
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exp(i) > 0))
            .collect();
        for &i in &used {
            if images[i].is_none() {
                let name = self.table.name(i);
                let j = target.get(name).ok_or_else(|| PolyError::NoImage {
                    var: name.to_string(),
                })?;
                images[i] = Some(Polynomial::var_index(target, j));
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = vec![Vec::new(); n];
        for &i in &used {
            let maxe = self.degree_in_index(i).unwrap_or(0) as usize;
            let img = images[i].clone().unwrap();
            let mut pw = Vec::with_capacity(maxe + 1);
            pw.push(Polynomial::one(target));
            for e in 1..=maxe {
                let next = &pw[e - 1] * &img;
                pw.push(next);
            }
            powers[i] = pw;
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for &i in &used {
                let e = m.exp(i) as usize;
                if e > 0 {
                    t = &t * &powers[i][e];
                }
            }
            for (tm, tc) in t.terms {
                *acc.entry(tm).or_insert_with(Rational::zero) += tc;
            }
        }
        Ok(Polynomial::from_map(target, acc))
    }

    /// Replaces one variable of the own table by an image over the same table.
    pub fn substitute_var(&self, var: &str, image: &Polynomial) -> Result<Polynomial, PolyError> {
        self.substitute(&self.table.clone(), &[(var, image.clone())])
    }

    /// Re-expresses the polynomial over a table containing all of its used variables.
    pub fn embed(&self, target: &Arc<VarTable>) -> Result<Polynomial, PolyError> {
        if self.table.same_as(target) {
            return Ok(Polynomial {
                table: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let used: Vec<(usize, usize)> = (0..self.table.len())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exp(i) > 0))
            .map(|i| {
                let name = self.table.name(i);
                target
                    .get(name)
                    .map(|j| (i, j))
                    .ok_or_else(|| PolyError::NoImage {
                        var: name.to_string(),
                    })
            })
            .collect::<Result<_, _>>()?;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0; target.len()];
            for &(i, j) in &used {
                exps[j] = m.exp(i);
            }
            (Monomial::new(exps), c.clone())
        });
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Coefficients with respect to `var`: entry `k` multiplies `var^k`.
    pub fn coefficients_in_index(&self, var: usize) -> Vec<Polynomial> {
        let deg = match self.degree_in_index(var) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            buckets[e].push((m.with_exp(var, 0), c.clone()));
        }
        buckets
            .into_iter()
            .map(|b| Polynomial::from_terms(&self.table, b))
            .collect()
    }

    pub fn coefficients_in(&self, var: &str) -> Result<Vec<Polynomial>, PolyError> {
        Ok(self.coefficients_in_index(self.table.index_of(var)?))
    }

    /// Inverse of [`coefficients_in_index`](Self::coefficients_in_index).
    pub fn from_coefficients(table: &Arc<VarTable>, var: usize, coeffs: &[Polynomial]) -> Self {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let xk = Monomial::var(table.len(), var, k as u32);
            for (m, a) in &c.terms {
                terms.push((m.mul(&xk), a.clone()));
            }
        }
        Polynomial::from_terms(table, terms)
    }

    /// Coefficient of the highest power of `var`, as a polynomial in the other variables.
    pub fn leading_coefficient_in(&self, var: &str) -> Result<Polynomial, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial("leading coefficient"));
        }
        let coeffs = self.coefficients_in(var)?;
        Ok(coeffs.into_iter().last().unwrap())
    }

    /// Positive rational content.
    pub fn content(&self) -> Result<Rational, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial("content"));
        }
        let coeffs = self.terms.iter().map(|(_, c)| c);
        let g = gcd_numerators(coeffs.clone());
        let l = lcm_denominators(coeffs);
        Ok(Rational::new(g, l))
    }

    pub fn normalize(&self) -> Result<Normalized, PolyError> {
        let content = self.content()?;
        let sign: i8 = if self.leading_coeff().unwrap().is_negative() {
            -1
        } else {
            1
        };
        let factor = if sign < 0 { -&content } else { content.clone() };
        let primitive = self.scale(&factor.recip());
        Ok(Normalized {
            content,
            sign,
            primitive,
        })
    }

    /// Primitive part with positive leading coefficient (zero stays zero).
    pub fn primitive(&self) -> Polynomial {
        match self.normalize() {
            Ok(n) => n.primitive,
            Err(_) => self.clone(),
        }
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.iter();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |g, (m, _)| g.gcd(m)))
    }

    /// Divides out the monomial content, returning it alongside the quotient.
    pub fn strip_monomial_content(&self) -> (Monomial, Polynomial) {
        match self.monomial_content() {
            Some(g) if !g.is_one() => {
                let terms: Vec<_> = self
                    .terms
                    .iter()
                    .map(|(m, c)| (g.quotient_of(m).unwrap(), c.clone()))
                    .collect();
                (g, Polynomial::from_terms(&self.table, terms))
            }
            _ => (Monomial::one(self.table.len()), self.clone()),
        }
    }

    /// `Some(r)` with `self = r * other` for a nonzero rational `r`.
    pub fn ratio_to(&self, other: &Polynomial) -> Option<Rational> {
        if self.check_table(other).is_err() || self.terms.len() != other.terms.len() {
            return None;
        }
        let (m0, a0) = self.terms.first()?;
        let (n0, b0) = other.terms.first()?;
        if m0 != n0 {
            return None;
        }
        let r = a0 / b0;
        let ok = self
            .terms
            .iter()
            .zip(other.terms.iter())
            .all(|((m, a), (n, b))| m == n && *a == b * &r);
        ok.then_some(r)
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Polynomial>>(table: &Arc<VarTable>, it: I) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for p in it {
            for (m, c) in &p.terms {
                *acc.entry(m.clone()).or_insert_with(Rational::zero) += c;
            }
        }
        Self::from_map(table, acc)
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Polynomial>>(table: &Arc<VarTable>, it: I) -> Self {
        it.into_iter()
            .fold(Polynomial::one(table), |acc, p| &acc * p)
    }

    /// Largest absolute numerator/denominator size in bits, a rough size measure.
    pub fn max_coeff_bits(&self) -> u64 {
        self.terms
            .iter()
            .map(|(_, c)| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn write_monomial(&self, f: &mut impl fmt::Write, m: &Monomial) -> fmt::Result {
        let mut first = true;
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            f.write_str(self.table.name(i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

fn integer_terms(terms: &[(Monomial, Rational)]) -> (BigInt, Vec<(Monomial, BigInt)>) {
    let l = lcm_denominators(terms.iter().map(|(_, c)| c));
    let ints = terms
        .iter()
        .map(|(m, c)| (m.clone(), c.numer() * (&l / c.denom())))
        .collect();
    (l, ints)
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.table.same_as(&other.table) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

/// Canonical text form: terms in descending grlex order, `*` between factors,
/// `^` for powers, rational coefficients as `a/b`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", fmt_rational(&abs))?;
                }
                self.write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

// Operator impls are for code that builds polynomials inside one ring; they
// panic on a table mismatch, which is a programming error there. Fallible
// callers use the `try_*` methods.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial tables differ")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial tables differ")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial tables differ")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Polynomial::from_sorted(&self.table, terms)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
