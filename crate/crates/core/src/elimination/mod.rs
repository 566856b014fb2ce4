//! Fraction-free elimination of one variable by a pseudo-remainder sequence.
//!
//! Each step pseudo-divides the previous two members with respect to the
//! eliminated variable. By default the remainder is then made primitive
//! (integer content removed, sign fixed); the removed rational is recorded.
//! The optional reduced mode instead divides every remainder after the first
//! by the previous step's pseudo-multiplier, which is always exact.

mod report;

use serde::Serialize;

use crate::exec::Exec;
use crate::poly::{int, PolyError, Polynomial, Rational};

pub use report::{EliminationSummary, FactorVerdict, StepSummary};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EliminationError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("divisor is the zero polynomial")]
    ZeroDivisor,
    #[error("dividend has degree {dividend} in `{var}`, below the divisor's {divisor}")]
    DegreeOrder { var: String, dividend: u32, divisor: u32 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("reduced remainder sequence lost exactness at step {0}")]
    InexactReduction(usize),
}

/// One pseudo-division `multiplier * dividend = quotient * divisor + content * divided_by * remainder`.
#[derive(Clone, Debug)]
pub struct PrsStep {
    pub dividend: Polynomial,
    pub divisor: Polynomial,
    pub quotient: Polynomial,
    /// Normalized remainder.
    pub remainder: Polynomial,
    /// `lc(divisor)^(deg dividend - deg divisor + 1)`.
    pub pseudo_multiplier: Polynomial,
    /// Signed rational taken out of the raw remainder (1 when nothing was removed).
    pub extracted_content: Rational,
    /// Polynomial divided out of the raw remainder in reduced mode.
    pub divided_by: Option<Polynomial>,
}

impl PrsStep {
    /// Re-checks the defining identity by direct expansion.
    pub fn verify(&self) -> bool {
        let lhs = &self.pseudo_multiplier * &self.dividend;
        let mut r = self.remainder.scale(&self.extracted_content);
        if let Some(b) = &self.divided_by {
            r = &r * b;
        }
        lhs == &(&self.quotient * &self.divisor) + &r
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrsMode {
    /// Strip integer content after every step.
    #[default]
    Primitive,
    /// Divide by the previous pseudo-multiplier, no content stripping.
    Reduced,
}

/// Leading coefficient of `p` in `var`.
pub fn leading_coefficient(p: &Polynomial, var: &str) -> Result<Polynomial, EliminationError> {
    Ok(p.leading_coefficient_in(var)?)
}

/// Raw pseudo-division: `(q, r)` with `lc(g)^(df - dg + 1) f = q g + r`.
fn pseudo_divide(
    f: &Polynomial,
    g: &Polynomial,
    var: usize,
) -> (Polynomial, Polynomial, Polynomial) {
    let t = f.table();
    let dg = g.degree_in_index(var).unwrap_or(0);
    let df = f.degree_in_index(var).unwrap_or(0);
    let g_coeffs = g.coefficients_in_index(var);
    let lc = g_coeffs.last().unwrap().clone();
    let g_tail = Polynomial::from_coefficients(t, var, &g_coeffs[..g_coeffs.len() - 1]);
    let mut r = f.clone();
    let mut q = Polynomial::zero(t);
    let mut e = df - dg + 1;
    while !r.is_zero() && r.degree_in_index(var).unwrap_or(0) >= dg {
        let dr = r.degree_in_index(var).unwrap();
        let r_coeffs = r.coefficients_in_index(var);
        let lr = r_coeffs.last().unwrap();
        let shift = crate::poly::Monomial::var(t.len(), var, dr - dg);
        let s = lr.mul_monomial(&shift, &int(1));
        // Leading terms cancel exactly, so only the tails need combining.
        let r_tail = Polynomial::from_coefficients(t, var, &r_coeffs[..r_coeffs.len() - 1]);
        q = &(&lc * &q) + &s;
        r = &(&lc * &r_tail) - &(&s * &g_tail);
        e -= 1;
    }
    let mult = lc.pow(df - dg + 1);
    if e > 0 {
        let k = lc.pow(e);
        q = &q * &k;
        r = &r * &k;
    }
    (q, r, mult)
}

/// Pseudo-remainder of `f` by `g` in `var`, content-normalized.
pub fn pseudo_remainder(f: &Polynomial, g: &Polynomial, var: &str) -> Result<PrsStep, EliminationError> {
    f.check_table(g)?;
    if g.is_zero() {
        return Err(EliminationError::ZeroDivisor);
    }
    let v = f.table().index_of(var)?;
    let df = f.degree_in_index(v).unwrap_or(0);
    let dg = g.degree_in_index(v).unwrap_or(0);
    if !f.is_zero() && df < dg {
        return Err(EliminationError::DegreeOrder {
            var: var.to_string(),
            dividend: df,
            divisor: dg,
        });
    }
    let (quotient, raw, pseudo_multiplier) = if f.is_zero() {
        let t = f.table();
        (Polynomial::zero(t), Polynomial::zero(t), Polynomial::one(t))
    } else {
        pseudo_divide(f, g, v)
    };
    let (remainder, extracted_content) = normalize(&raw);
    Ok(PrsStep {
        dividend: f.clone(),
        divisor: g.clone(),
        quotient,
        remainder,
        pseudo_multiplier,
        extracted_content,
        divided_by: None,
    })
}

fn normalize(p: &Polynomial) -> (Polynomial, Rational) {
    match p.normalize() {
        Ok(n) => {
            let signed = if n.sign < 0 { -n.content } else { n.content };
            (n.primitive, signed)
        }
        Err(_) => (p.clone(), int(1)),
    }
}

#[derive(Clone, Debug, Default)]
pub struct EliminationOptions {
    pub mode: PrsMode,
    pub exec: Exec,
}

/// Result of eliminating `var` from a pair of polynomials.
#[derive(Clone, Debug)]
pub struct EliminationReport {
    pub var: String,
    pub mode: PrsMode,
    pub inputs: [Polynomial; 2],
    pub steps: Vec<PrsStep>,
    /// True when some remainder vanished before reaching degree zero.
    pub stopped_on_zero: bool,
    pub factors: Vec<FactorVerdict>,
    pub cofactor: Option<CofactorAccount>,
}

/// How the final remainder splits against a list of expected factors.
#[derive(Clone, Debug)]
pub struct CofactorAccount {
    /// `last / prod(factors)`, when that division is exact.
    pub cofactor: Option<Polynomial>,
    /// Whether the cofactor divides the product of all pseudo-multipliers.
    pub accounted: bool,
}

impl EliminationReport {
    /// Remainders in order: with inputs of degree 4 and 3 these are `f2, f1, f0`.
    pub fn remainders(&self) -> Vec<&Polynomial> {
        self.steps.iter().map(|s| &s.remainder).collect()
    }

    pub fn degrees(&self) -> Vec<Option<u32>> {
        let v = self.inputs[0].table().index_of(&self.var).unwrap();
        self.steps
            .iter()
            .map(|s| s.remainder.degree_in_index(v))
            .collect()
    }

    /// Final remainder when the sequence reached degree zero without vanishing.
    pub fn resultant_like(&self) -> Option<&Polynomial> {
        if self.stopped_on_zero {
            return None;
        }
        self.steps.last().map(|s| &s.remainder)
    }

    pub fn pseudo_multiplier_product(&self) -> Polynomial {
        let t = self.inputs[0].table();
        Polynomial::product(t, self.steps.iter().map(|s| &s.pseudo_multiplier))
    }

    /// Divides the final remainder by each named factor and by their product,
    /// then checks that the leftover cofactor divides the product of pseudo-multipliers.
    pub fn check_factors(&mut self, factors: &[(String, Polynomial)], exec: Exec) -> Result<(), EliminationError> {
        let Some(last) = self.resultant_like().cloned() else {
            return Err(EliminationError::Degenerate(
                "no nonzero final remainder to test".into(),
            ));
        };
        for (_, f) in factors {
            last.check_table(f)?;
        }
        let t = last.table().clone();
        let product = Polynomial::product(&t, factors.iter().map(|(_, f)| f));
        let mut jobs: Vec<(String, Polynomial)> = factors.to_vec();
        jobs.push(("product".into(), product));
        let results = exec.map(&jobs, |(name, f)| {
            let q = last.divide_exact(f).ok().flatten();
            (name.clone(), q)
        });
        let mut cofactor = None;
        self.factors.clear();
        for (name, q) in results {
            if name == "product" && jobs.len() > 1 {
                cofactor = q.clone();
            }
            self.factors.push(FactorVerdict {
                name,
                divides: q.is_some(),
                quotient_terms: q.as_ref().map(|q| q.num_terms()),
            });
        }
        let accounted = match &cofactor {
            Some(c) => self.pseudo_multiplier_product().divide_exact(c)?.is_some(),
            None => false,
        };
        self.cofactor = Some(CofactorAccount { cofactor, accounted });
        Ok(())
    }

    pub fn verify_steps(&self) -> bool {
        self.steps.iter().all(PrsStep::verify)
    }
}

/// Runs the remainder sequence `hi, lo, prem(hi, lo), ...` until a remainder
/// is free of `var` or vanishes.
pub fn eliminate(
    hi: &Polynomial,
    lo: &Polynomial,
    var: &str,
    opts: &EliminationOptions,
) -> Result<EliminationReport, EliminationError> {
    hi.check_table(lo)?;
    let v = hi.table().index_of(var)?;
    let dh = hi.degree_in_index(v);
    let dl = lo.degree_in_index(v);
    match (dh, dl) {
        (Some(a), Some(b)) if a >= b && b >= 1 => {}
        _ => {
            return Err(EliminationError::Degenerate(format!(
                "need deg_{var}(first) >= deg_{var}(second) >= 1, got {dh:?} and {dl:?}"
            )))
        }
    }
    let mut steps: Vec<PrsStep> = Vec::new();
    let mut a = hi.clone();
    let mut b = lo.clone();
    let mut stopped_on_zero = false;
    loop {
        let mut step = pseudo_remainder(&a, &b, var)?;
        if opts.mode == PrsMode::Reduced {
            // Undo the normalization and divide by the previous multiplier.
            let raw = step.remainder.scale(&step.extracted_content);
            step.extracted_content = int(1);
            step.remainder = match steps.last() {
                Some(prev) => {
                    let beta = prev.pseudo_multiplier.clone();
                    let q = raw
                        .divide_exact(&beta)?
                        .ok_or(EliminationError::InexactReduction(steps.len()))?;
                    step.divided_by = Some(beta);
                    q
                }
                None => raw,
            };
        }
        let r = step.remainder.clone();
        steps.push(step);
        if r.is_zero() {
            stopped_on_zero = true;
            break;
        }
        if r.degree_in_index(v).unwrap_or(0) == 0 {
            break;
        }
        a = b;
        b = r;
    }
    Ok(EliminationReport {
        var: var.to_string(),
        mode: opts.mode,
        inputs: [hi.clone(), lo.clone()],
        steps,
        stopped_on_zero,
        factors: Vec::new(),
        cofactor: None,
    })
}

/// Eliminates `tau` from a degree-3 and a degree-4 polynomial.
pub fn eliminate_tau(f3: &Polynomial, f4: &Polynomial, opts: &EliminationOptions) -> Result<EliminationReport, EliminationError> {
    eliminate(f4, f3, "tau", opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarTable;

    fn vars() -> (std::sync::Arc<VarTable>, Polynomial, Polynomial) {
        let t = VarTable::new(["a", "tau"]).unwrap();
        let a = Polynomial::var(&t, "a").unwrap();
        let x = Polynomial::var(&t, "tau").unwrap();
        (t, a, x)
    }

    #[test]
    fn self_division_is_zero() {
        let (_, a, x) = vars();
        let f = &(&x * &x) - &(&a * &a);
        let s = pseudo_remainder(&f, &f, "tau").unwrap();
        assert!(s.remainder.is_zero());
        assert!(s.verify());
        let s = pseudo_remainder(&f, &(&x - &a), "tau").unwrap();
        assert!(s.remainder.is_zero());
        assert!(s.verify());
    }

    #[test]
    fn identity_holds_with_nonmonic_divisor() {
        let (t, a, x) = vars();
        let f = &(&x.pow(3) * &a) + &Polynomial::from_int(&t, 5);
        let g = &(&(&a + &Polynomial::one(&t)) * &x.pow(2)) - &x;
        let s = pseudo_remainder(&f, &g, "tau").unwrap();
        assert!(s.verify());
        assert!(s.remainder.degree_in("tau").unwrap().unwrap_or(0) < 2);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        let (t, a, x) = vars();
        let f = &x - &Polynomial::one(&t);
        assert!(matches!(
            eliminate(&f, &a, "tau", &EliminationOptions::default()),
            Err(EliminationError::Degenerate(_))
        ));
        assert!(matches!(
            pseudo_remainder(&f, &Polynomial::zero(&t), "tau"),
            Err(EliminationError::ZeroDivisor)
        ));
    }

    #[test]
    fn reduced_mode_is_exact_and_proportional() {
        let (t, a, x) = vars();
        let one = Polynomial::one(&t);
        let f = &(&(&x.pow(4) * &a) - &(&x.pow(2) * &(&a + &one))) + &x;
        let g = &(&(&x.pow(3) * &(&a * &a)) + &x) - &one;
        let p = eliminate(&f, &g, "tau", &EliminationOptions::default()).unwrap();
        let r = eliminate(
            &f,
            &g,
            "tau",
            &EliminationOptions {
                mode: PrsMode::Reduced,
                exec: Exec::Sequential,
            },
        )
        .unwrap();
        assert!(p.verify_steps() && r.verify_steps());
        assert_eq!(p.degrees(), r.degrees());
        let three = Polynomial::from_int(&t, 3);
        for (x, y) in p.remainders().iter().zip(r.remainders()) {
            // The two sequences differ by factors free of tau.
            let x3 = x.substitute_var("a", &three).unwrap();
            let y3 = y.substitute_var("a", &three).unwrap();
            assert!(x3.ratio_to(&y3).is_some());
        }
    }
}
