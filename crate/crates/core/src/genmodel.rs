//! Generator models: small constraint problems whose solutions are the induction
//! values a comprehension has to be expanded for.

use std::collections::BTreeMap;
use std::fmt;

use crate::ast::{AggregateOp, BinOp, Comprehension, Expr, IntRange, Model, Type};
use crate::error::{Error, Result};
use crate::printer::write_constraints;
use crate::rewrite::{lift_static_guard, RewriteResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Explicit guards only.
    Simple,
    /// Explicit guards plus the return expression rewritten into a static guard.
    Full,
}

/// What consumes the comprehension's items.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Context {
    Aggregate(AggregateOp),
    /// `allDiff`: every item matters, so nothing may be dropped.
    AllDiff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarDomain {
    Bool,
    Int(IntRange),
}

impl fmt::Display for VarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarDomain::Bool => f.write_str("bool"),
            VarDomain::Int(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenVar {
    pub name: String,
    pub domain: VarDomain,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorModel {
    /// Induction variables in generator order, then dummies.
    pub vars: Vec<GenVar>,
    /// The induction variables; solutions are projected onto these.
    pub branching: Vec<String>,
    pub constraints: Vec<Expr>,
    /// The rewrite behind the identity constraint, in full mode.
    pub rewrite: Option<RewriteResult>,
}

impl GeneratorModel {
    pub fn var(&self, name: &str) -> Option<&GenVar> {
        self.vars.iter().find(|v| v.name == name)
    }
}

impl fmt::Display for GeneratorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for v in &self.vars {
            out.push_str(&format!("find {}: {}\n", v.name, v.domain));
        }
        out.push_str(&format!("branching on [{}]\n", self.branching.join(", ")));
        write_constraints(&mut out, &self.constraints);
        f.write_str(&out)
    }
}

/// `e != identity`, written without the comparison for Boolean identities.
pub fn differs_from_identity(e: Expr, op: AggregateOp) -> Expr {
    match op.identity().as_bool() {
        Some(true) => Expr::not(e),
        Some(false) => e,
        None => Expr::bin(BinOp::Neq, e, op.identity()),
    }
}

/// Builds the generator model of `c`, whose generator bounds must be literals.
pub fn build_generator_model(
    c: &Comprehension,
    ctx: Context,
    mode: Mode,
    model: &Model,
) -> Result<GeneratorModel> {
    let ranges = c.ranges()?;
    let mut vars: Vec<GenVar> = c
        .generators
        .iter()
        .zip(&ranges)
        .map(|(g, r)| GenVar {
            name: g.name.clone(),
            domain: VarDomain::Int(*r),
        })
        .collect();
    let branching = c.generators.iter().map(|g| g.name.clone()).collect();
    let mut constraints = c.guards.clone();
    let mut rewrite = None;

    if let (Context::Aggregate(op), Mode::Full) = (ctx, mode) {
        let induction: BTreeMap<String, IntRange> = c
            .generators
            .iter()
            .map(|g| g.name.clone())
            .zip(ranges.iter().copied())
            .collect();
        let ty = op.element_type();
        let rw = lift_static_guard(&c.return_expr, &induction, &ty, model)?;
        for d in &rw.dummies {
            let domain = match (&d.ty, d.domain) {
                (Type::Bool, _) => VarDomain::Bool,
                (Type::Int, Some(r)) => VarDomain::Int(r),
                _ => {
                    return Err(Error::Internal(format!(
                        "dummy `{}` has no usable domain",
                        d.name
                    )))
                }
            };
            vars.push(GenVar {
                name: d.name.clone(),
                domain,
            });
        }
        constraints.push(differs_from_identity(rw.rewritten.clone(), op));
        rewrite = Some(rw);
    }

    Ok(GeneratorModel {
        vars,
        branching,
        constraints,
        rewrite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{ExprKind, MatrixArg};
    use crate::parser::{bind_params, parse_model, Bindings};

    fn first_comprehension(src: &str) -> (Model, Comprehension, AggregateOp) {
        let m = bind_params(&parse_model(src).unwrap(), &Bindings::new()).unwrap();
        let mut found = None;
        m.constraints[0].visit(&mut |e| {
            if let ExprKind::Aggregate(op, MatrixArg::Comprehension(c)) = &e.kind {
                found.get_or_insert(((**c).clone(), *op));
            }
        });
        let (c, op) = found.expect("an aggregate comprehension");
        (m, c, op)
    }

    #[test]
    fn simple_mode_uses_guards() {
        let (m, c, op) = first_comprehension(
            "find m: matrix indexed by [int(1..4)] of int(0..4)\n\
             such that and([ m[i] = i | i: int(1..4), i % 2 = 0 ])",
        );
        let g = build_generator_model(&c, Context::Aggregate(op), Mode::Simple, &m).unwrap();
        assert_eq!(
            g.to_string(),
            "find i: int(1..4)\nbranching on [i]\nsuch that\n  i % 2 = 0\n"
        );
    }

    #[test]
    fn full_mode_adds_identity_constraint() {
        let (m, c, op) = first_comprehension(
            "find m: matrix indexed by [int(1..4)] of int(0..4)\n\
             such that and([ !(i % 2 = 0 /\\ m[i] % 2 = 0) \\/ m[i] = i | i: int(1..4) ])",
        );
        let g = build_generator_model(&c, Context::Aggregate(op), Mode::Full, &m).unwrap();
        assert_eq!(
            g.to_string(),
            "find i: int(1..4)\nfind __Z1: bool\nfind __Z2: bool\nbranching on [i]\n\
             such that\n  !(!(i % 2 = 0 /\\ __Z1) \\/ __Z2)\n"
        );
    }

    #[test]
    fn integer_identity_uses_disequality() {
        let (m, c, op) = first_comprehension(
            "find x: matrix indexed by [int(1..3)] of int(0..2)\n\
             such that 2 = sum([ x[i] * i | i: int(1..3) ])",
        );
        assert_eq!(op, AggregateOp::Sum);
        let g = build_generator_model(&c, Context::Aggregate(op), Mode::Full, &m).unwrap();
        assert_eq!(g.constraints[0].to_string(), "__Z1 * i != 0");
        assert_eq!(g.var("__Z1").unwrap().domain, VarDomain::Int(IntRange::new(0, 2)));
    }

    #[test]
    fn all_diff_never_rewrites() {
        let m = bind_params(
            &parse_model(
                "find x: matrix indexed by [int(1..4)] of int(0..9)\n\
                 such that allDiff([ x[i] | i: int(1..4), i > 1 ])",
            )
            .unwrap(),
            &Bindings::new(),
        )
        .unwrap();
        let ExprKind::AllDiff(MatrixArg::Comprehension(c)) = &m.constraints[0].kind else {
            panic!()
        };
        let g = build_generator_model(c, Context::AllDiff, Mode::Full, &m).unwrap();
        assert_eq!(g.vars.len(), 1);
        assert_eq!(g.constraints, c.guards);
        assert!(g.rewrite.is_none());
    }
}
