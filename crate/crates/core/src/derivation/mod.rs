//! Derivations of polynomial rings induced by the ODE right-hand sides.
//!
//! A derivation `D` is fixed by its values on the variables; on a general
//! polynomial it acts as `D(p) = sum_v dp/dv * D(v)`.

mod full;
mod lambda;
mod power_sum;

use std::sync::Arc;

use crate::poly::{PolyError, Polynomial, Rational, VarTable};
use crate::rings::RingError;

pub use full::{
    build_p0, full_derivation, full_system, odetau_full, p0_verbatim, pk_chain, pk_chain_bounded,
    P0Construction, PkChain, PkInfo,
};
pub(crate) use lambda::power_sum_rule;
pub use lambda::{lambda_ring_derivation, lambda_system, odetau_lambda};
pub use power_sum::power_sum_reduce;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DerivationError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("variable `{0}` occurs but has no derivation rule")]
    NoRule(String),
    #[error("derivative needs L{needed}, beyond the maximum index {max}")]
    LambdaIndex { needed: u32, max: u32 },
    #[error("n1 must be at least 1")]
    BadN1,
    #[error("the two constructions of P0 for n1 = {n1} are not proportional")]
    NotProportional { n1: u32 },
    #[error("polynomial is not symmetric under permuting the index pairs")]
    NotSymmetric,
    #[error("P_{k} has {terms} terms, over the limit of {limit}")]
    SizeGuard { k: usize, terms: usize, limit: usize },
}

/// Value of the derivation on one variable.
#[derive(Clone, Debug)]
pub enum Rule {
    Image(Polynomial),
    /// The image would need `L{needed}`, which the ring does not carry.
    Overflow { needed: u32, max: u32 },
}

/// A derivation on the polynomial ring over `table`.
#[derive(Clone, Debug)]
pub struct DerivationSystem {
    table: Arc<VarTable>,
    rules: Vec<Option<Rule>>,
}

impl DerivationSystem {
    pub fn new(table: &Arc<VarTable>) -> Self {
        DerivationSystem {
            table: table.clone(),
            rules: vec![None; table.len()],
        }
    }

    pub fn with_rule(mut self, var: &str, image: Polynomial) -> Result<Self, DerivationError> {
        let i = self.table.index_of(var)?;
        image.check_table(&Polynomial::zero(&self.table))?;
        self.rules[i] = Some(Rule::Image(image));
        Ok(self)
    }

    /// Marks `var` as constant along the flow.
    pub fn with_constant(self, var: &str) -> Result<Self, DerivationError> {
        let z = Polynomial::zero(&self.table);
        self.with_rule(var, z)
    }

    pub(crate) fn with_overflow(mut self, var: &str, needed: u32, max: u32) -> Result<Self, DerivationError> {
        let i = self.table.index_of(var)?;
        self.rules[i] = Some(Rule::Overflow { needed, max });
        Ok(self)
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn rule(&self, var: &str) -> Option<&Rule> {
        self.table.get(var).and_then(|i| self.rules[i].as_ref())
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial, DerivationError> {
        p.check_table(&Polynomial::zero(&self.table))?;
        let mut parts = Vec::new();
        for (i, rule) in self.rules.iter().enumerate() {
            if p.degree_in_index(i).unwrap_or(0) == 0 {
                continue;
            }
            match rule {
                None => return Err(DerivationError::NoRule(self.table.name(i).to_string())),
                Some(Rule::Overflow { needed, max }) => {
                    return Err(DerivationError::LambdaIndex {
                        needed: *needed,
                        max: *max,
                    })
                }
                Some(Rule::Image(img)) if img.is_zero() => {}
                Some(Rule::Image(img)) => parts.push(&p.differentiate_index(i) * img),
            }
        }
        Ok(Polynomial::sum(&self.table, &parts))
    }

    /// `D^k(p)`.
    pub fn apply_n(&self, p: &Polynomial, k: usize) -> Result<Polynomial, DerivationError> {
        let mut q = p.clone();
        for _ in 0..k {
            q = self.apply(&q)?;
        }
        Ok(q)
    }
}

/// Ratio `a / b` when both are nonzero and proportional.
pub fn proportionality(a: &Polynomial, b: &Polynomial) -> Option<Rational> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    a.ratio_to(b)
}
