use serde::Serialize;

use super::{EliminationReport, PrsMode};
use crate::poly::rational::fmt_rational;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FactorVerdict {
    pub name: String,
    pub divides: bool,
    pub quotient_terms: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepSummary {
    pub step: usize,
    pub dividend_degree: Option<u32>,
    pub divisor_degree: Option<u32>,
    pub remainder_degree: Option<u32>,
    pub remainder_terms: usize,
    pub extracted_content: String,
    pub pseudo_multiplier_terms: usize,
    pub reduced_by_previous_multiplier: bool,
    pub identity_verified: Option<bool>,
}

/// Machine-readable digest of an [`EliminationReport`].
#[derive(Clone, Debug, Serialize)]
pub struct EliminationSummary {
    pub var: String,
    pub mode: PrsMode,
    pub input_degrees: [Option<u32>; 2],
    pub input_terms: [usize; 2],
    pub steps: Vec<StepSummary>,
    pub stopped_on_zero: bool,
    pub final_terms: Option<usize>,
    pub factors: Vec<FactorVerdict>,
    pub cofactor: Option<String>,
    pub cofactor_terms: Option<usize>,
    pub cofactor_accounted: Option<bool>,
}

impl EliminationReport {
    /// Digest for serialization. With `verify` each step identity is re-expanded.
    pub fn summary(&self, verify: bool) -> EliminationSummary {
        let v = self.inputs[0].table().index_of(&self.var).unwrap();
        let steps = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| StepSummary {
                step: i + 1,
                dividend_degree: s.dividend.degree_in_index(v),
                divisor_degree: s.divisor.degree_in_index(v),
                remainder_degree: s.remainder.degree_in_index(v),
                remainder_terms: s.remainder.num_terms(),
                extracted_content: fmt_rational(&s.extracted_content),
                pseudo_multiplier_terms: s.pseudo_multiplier.num_terms(),
                reduced_by_previous_multiplier: s.divided_by.is_some(),
                identity_verified: verify.then(|| s.verify()),
            })
            .collect();
        let cof = self.cofactor.as_ref();
        EliminationSummary {
            var: self.var.clone(),
            mode: self.mode,
            input_degrees: [
                self.inputs[0].degree_in_index(v),
                self.inputs[1].degree_in_index(v),
            ],
            input_terms: [self.inputs[0].num_terms(), self.inputs[1].num_terms()],
            steps,
            stopped_on_zero: self.stopped_on_zero,
            final_terms: self.resultant_like().map(|p| p.num_terms()),
            factors: self.factors.clone(),
            cofactor: cof.and_then(|c| c.cofactor.as_ref()).map(|p| p.to_string()),
            cofactor_terms: cof.and_then(|c| c.cofactor.as_ref()).map(|p| p.num_terms()),
            cofactor_accounted: cof.map(|c| c.accounted),
        }
    }

    pub fn to_json(&self, verify: bool) -> String {
        serde_json::to_string_pretty(&self.summary(verify)).expect("summary serializes")
    }
}
