use std::fmt;

use num_bigint::BigInt;

use crate::poly::Rational;

/// Source position (1-based). Positions never take part in equality, so two
/// trees parsed from differently formatted text compare equal.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprNode {
    Integer(BigInt),
    /// A literal `a/b` with `b > 1` after reduction.
    Rational(Rational),
    /// `name` or `name[index]`.
    Variable {
        name: String,
        index: Option<String>,
        pos: Pos,
    },
    Add(Vec<ExprNode>),
    Mul(Vec<ExprNode>),
    Pow(Box<ExprNode>, u32),
    Neg(Box<ExprNode>),
    /// `sum(body)` over the indexed pair `l[i]`, `m[i]`.
    Sum(Box<ExprNode>, Pos),
}

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl ExprNode {
    fn prec(&self) -> u8 {
        match self {
            ExprNode::Add(_) => PREC_ADD,
            ExprNode::Mul(_) => PREC_MUL,
            ExprNode::Neg(_) | ExprNode::Rational(_) => PREC_NEG,
            ExprNode::Pow(..) => PREC_POW,
            _ => PREC_ATOM,
        }
    }

    /// Top-level summands, or the node itself when it is not a sum.
    pub fn summands(&self) -> &[ExprNode] {
        match self {
            ExprNode::Add(v) => v,
            other => std::slice::from_ref(other),
        }
    }

    fn write(&self, out: &mut String, min_prec: u8) {
        let paren = self.prec() < min_prec;
        if paren {
            out.push('(');
        }
        match self {
            ExprNode::Integer(n) => out.push_str(&n.to_string()),
            ExprNode::Rational(r) => out.push_str(&format!("{}/{}", r.numer(), r.denom())),
            ExprNode::Variable { name, index, .. } => {
                out.push_str(name);
                if let Some(i) = index {
                    out.push('[');
                    out.push_str(i);
                    out.push(']');
                }
            }
            ExprNode::Add(children) => {
                for (k, c) in children.iter().enumerate() {
                    match (k, c) {
                        (0, ExprNode::Neg(inner)) => {
                            out.push('-');
                            inner.write(out, PREC_POW);
                        }
                        (0, c) => c.write(out, PREC_ADD + 1),
                        (_, ExprNode::Neg(inner)) => {
                            out.push_str(" - ");
                            inner.write(out, PREC_MUL);
                        }
                        (_, c) => {
                            out.push_str(" + ");
                            c.write(out, PREC_ADD + 1);
                        }
                    }
                }
            }
            ExprNode::Mul(children) => {
                for (k, c) in children.iter().enumerate() {
                    if k > 0 {
                        out.push('*');
                    }
                    c.write(out, PREC_MUL + 1);
                }
            }
            ExprNode::Pow(base, e) => {
                base.write(out, PREC_ATOM);
                out.push('^');
                out.push_str(&e.to_string());
            }
            ExprNode::Neg(inner) => {
                out.push('-');
                inner.write(out, PREC_POW);
            }
            ExprNode::Sum(body, _) => {
                out.push_str("sum(");
                body.write(out, 0);
                out.push(')');
            }
        }
        if paren {
            out.push(')');
        }
    }
}

impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s, 0);
        f.write_str(&s)
    }
}
