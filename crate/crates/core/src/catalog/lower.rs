use super::expr::{ExprNode, Pos};
use super::CatalogError;
use crate::poly::{Polynomial, Rational};
use crate::rings::{Ring, SUM_L, SUM_M};

/// Evaluates a tree to a polynomial over `ring`. Names resolve to ring
/// variables or ring macros; `l[i]`, `m[i]` are only valid inside `sum(...)`.
pub fn lower(node: &ExprNode, ring: &Ring) -> Result<Polynomial, CatalogError> {
    Lowering { ring, in_sum: false }.eval(node)
}

struct Lowering<'a> {
    ring: &'a Ring,
    in_sum: bool,
}

impl Lowering<'_> {
    fn table(&self) -> &std::sync::Arc<crate::poly::VarTable> {
        if self.in_sum {
            self.ring.summand_table()
        } else {
            self.ring.table()
        }
    }

    fn eval(&self, node: &ExprNode) -> Result<Polynomial, CatalogError> {
        Ok(match node {
            ExprNode::Integer(n) => Polynomial::constant(self.table(), Rational::from(n.clone())),
            ExprNode::Rational(r) => Polynomial::constant(self.table(), r.clone()),
            ExprNode::Variable { name, index, pos } => self.variable(name, index.as_deref(), *pos)?,
            ExprNode::Add(items) => {
                let parts = items.iter().map(|c| self.eval(c)).collect::<Result<Vec<_>, _>>()?;
                Polynomial::sum(self.table(), &parts)
            }
            ExprNode::Mul(items) => {
                let mut acc = Polynomial::one(self.table());
                for c in items {
                    acc = &acc * &self.eval(c)?;
                    if acc.is_zero() {
                        break;
                    }
                }
                acc
            }
            ExprNode::Pow(base, e) => self.eval(base)?.pow(*e),
            ExprNode::Neg(inner) => -&self.eval(inner)?,
            ExprNode::Sum(body, pos) => {
                if self.in_sum {
                    return Err(CatalogError::Syntax {
                        line: pos.line,
                        col: pos.col,
                        msg: "nested `sum` is not supported".into(),
                    });
                }
                let inner = Lowering {
                    ring: self.ring,
                    in_sum: true,
                }
                .eval(body)?;
                self.ring.lower_sum(&inner)?
            }
        })
    }

    fn variable(&self, name: &str, index: Option<&str>, pos: Pos) -> Result<Polynomial, CatalogError> {
        let unknown = || CatalogError::UnknownVariable {
            name: match index {
                Some(i) => format!("{name}[{i}]"),
                None => name.to_string(),
            },
            ring: self.ring.kind().to_string(),
            line: pos.line,
            col: pos.col,
        };
        if let Some(ix) = index {
            let summand = match name {
                "l" => SUM_L,
                "m" => SUM_M,
                _ => return Err(unknown()),
            };
            if ix != "i" || !self.in_sum {
                return Err(CatalogError::Syntax {
                    line: pos.line,
                    col: pos.col,
                    msg: format!("`{name}[{ix}]` may only appear as `{name}[i]` inside `sum(...)`"),
                });
            }
            return Ok(Polynomial::var(self.ring.summand_table(), summand)?);
        }
        let p = self.ring.resolve(name).map_err(|_| unknown())?;
        Ok(if self.in_sum { p.embed(self.ring.summand_table())? } else { p })
    }
}

