//! Registry of the displayed polynomials, the expression language they are
//! stored in, and the recipes that reconstruct each one from the ODE.
//!
//! The expected polynomials live in `corpus/identities/*.poly`, listed by
//! `corpus/manifest.toml`. A copy is compiled into the library; setting
//! `BIHV_CORPUS` to a directory with the same layout overrides it.

mod corpus;
mod expr;
mod identities;
mod lower;
mod parser;
mod qseries;

use crate::derivation::DerivationError;
use crate::elimination::EliminationError;
use crate::poly::{PolyError, Polynomial};
use crate::rings::{Ring, RingError};

pub use corpus::{Corpus, CorpusEntry, Mode, Source, CORPUS_ENV};
pub use expr::{ExprNode, Pos};
pub use identities::{
    check_all, check_identity, check_identity_in, compare, identity_names, IdentityReport,
    ItemVerdict, RingCheck, Verdict, VerdictSummary,
};
pub use lower::lower;
pub use parser::parse_tree;
pub use qseries::{q_asymptotic, q_asymptotic_of, q_laurent_coeff, q_laurent_coeff_of, q_polynomial};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown variable `{name}` for ring {ring} at {line}:{col}")]
    UnknownVariable {
        name: String,
        ring: String,
        line: usize,
        col: usize,
    },
    #[error("negative exponent at {line}:{col}")]
    NegativeExponent { line: usize, col: usize },
    #[error("{file}: {source}")]
    InFile {
        file: String,
        #[source]
        source: Box<CatalogError>,
    },
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("corpus: {0}")]
    Corpus(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Elimination(#[from] EliminationError),
}

/// Parses `text` and evaluates it over `ring`.
pub fn parse_expr(text: &str, ring: &Ring) -> Result<Polynomial, CatalogError> {
    lower(&parse_tree(text)?, ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_simple() {
        let r = Ring::lambda();
        assert!(parse_expr("0", &r).unwrap().is_zero());
        let p = parse_expr("3/2*tau^2 - 4*phi*psi", &r).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(parse_expr(&p.to_string(), &r).unwrap(), p);
    }

    #[test]
    fn errors_carry_positions() {
        let r = Ring::lambda();
        match parse_expr("tau +\n  2 phi", &r) {
            Err(CatalogError::Syntax { line: 2, col: 5, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_expr("tau*zeta", &r) {
            Err(CatalogError::UnknownVariable { name, line: 1, col: 5, .. }) => assert_eq!(name, "zeta"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_expr("tau^-2", &r),
            Err(CatalogError::NegativeExponent { line: 1, col: 5 })
        ));
        assert!(parse_expr("tau/2", &r).is_err());
        assert!(parse_expr("1/0", &r).is_err());
        assert!(parse_expr("l[i]", &r).is_err());
        assert!(parse_expr("sum(sum(l[i]))", &r).is_err());
    }

    #[test]
    fn printer_round_trips_trees() {
        for text in [
            "-(a*b) + c",
            "-a*b",
            "a - (b - c)",
            "a*(-b)",
            "(-a)^2",
            "-a^2",
            "(3/2)^2*x",
            "a - -b",
            "(a + b)*(c - d)^3",
            "sum(l[i]*m[i]^2) - 2/3*x",
            "((a*b)*c)",
        ] {
            let t = parse_tree(text).unwrap();
            let printed = t.to_string();
            assert_eq!(parse_tree(&printed).unwrap(), t, "{text} -> {printed}");
        }
    }
}
