//! Canonical textual form.
//!
//! Output uses the minimum parentheses needed for the parser to rebuild the same
//! tree, so printing is stable and `parse(print(e)) == e`.

use std::fmt::{self, Display, Formatter, Write as _};

use crate::ast::{
    Assoc, BinOp, Comprehension, Domain, Expr, ExprKind, Generator, MatrixArg, Model, RangeExpr,
    PREC_ATOM, PREC_NEG, PREC_NOT, PREC_QUANTIFIER,
};

pub(crate) fn precedence(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Bin(op, ..) => op.precedence(),
        ExprKind::Not(_) => PREC_NOT,
        ExprKind::Neg(_) => PREC_NEG,
        ExprKind::Quantifier { .. } => PREC_QUANTIFIER,
        _ => PREC_ATOM,
    }
}

fn write_prec(f: &mut Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if precedence(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn write_list<T: Display>(f: &mut Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Int(v) => write!(f, "{v}"),
            ExprKind::Bool(b) => write!(f, "{b}"),
            ExprKind::Var(n) => f.write_str(n),
            ExprKind::Index { base, indices } => {
                write!(f, "{base}[")?;
                write_list(f, indices)?;
                f.write_str("]")
            }
            ExprKind::Neg(x) => {
                f.write_str("-")?;
                // `-2` and `-2 ** k` would reparse with a negative literal.
                let needs_parens = precedence(x) < PREC_NEG
                    || matches!(x.kind, ExprKind::Int(_) | ExprKind::Neg(_))
                    || matches!(&x.kind, ExprKind::Bin(BinOp::Pow, l, _) if matches!(l.kind, ExprKind::Int(_)));
                if needs_parens {
                    write!(f, "({x})")
                } else {
                    write!(f, "{x}")
                }
            }
            ExprKind::Not(x) => {
                f.write_str("!")?;
                write_prec(f, x, PREC_NOT)
            }
            ExprKind::Bin(op, l, r) => {
                let p = op.precedence();
                let (lmin, rmin) = match op.assoc() {
                    Assoc::Left => (p, p + 1),
                    Assoc::Right => (p + 1, p),
                    Assoc::None => (p + 1, p + 1),
                };
                // `**` binds its right operand at unary level, so `2 ** -x` needs no parens.
                let rmin = if op.precedence() == 9 { PREC_NEG } else { rmin };
                write_prec(f, l, lmin)?;
                write!(f, " {} ", op.symbol())?;
                write_prec(f, r, rmin)
            }
            ExprKind::Aggregate(op, arg) => write!(f, "{}({arg})", op.keyword()),
            ExprKind::AllDiff(arg) => write!(f, "allDiff({arg})"),
            ExprKind::Quantifier { kind, vars, body } => {
                write!(f, "{} ", kind.keyword())?;
                write_list(f, vars)?;
                write!(f, " . {body}")
            }
        }
    }
}

impl Display for MatrixArg {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            MatrixArg::List(items) => {
                f.write_str("[")?;
                write_list(f, items)?;
                f.write_str("]")
            }
            MatrixArg::Comprehension(c) => write!(f, "{c}"),
        }
    }
}

impl Display for Comprehension {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "[{} | ", self.return_expr)?;
        write_list(f, &self.generators)?;
        for g in &self.guards {
            write!(f, ", {g}")?;
        }
        f.write_str("]")
    }
}

impl Display for Generator {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}: int({})", self.name, self.range)
    }
}

impl Display for RangeExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        // Bounds sit next to `..`, which binds looser than any operator.
        write!(f, "{}..", self.lo)?;
        if let Some(hi) = &self.hi {
            write!(f, "{hi}")?;
        }
        Ok(())
    }
}

impl Display for Domain {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Bool => f.write_str("bool"),
            Domain::Int(r) => write!(f, "int({r})"),
            Domain::Matrix { index, elem } => {
                f.write_str("matrix indexed by [")?;
                for (i, r) in index.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "int({r})")?;
                }
                write!(f, "] of {elem}")
            }
        }
    }
}

/// Writes `such that` followed by one constraint per line; an empty list prints `true`.
pub(crate) fn write_constraints(out: &mut String, constraints: &[Expr]) {
    out.push_str("such that\n");
    if constraints.is_empty() {
        out.push_str("  true\n");
        return;
    }
    for (i, c) in constraints.iter().enumerate() {
        let sep = if i + 1 < constraints.len() { "," } else { "" };
        let _ = writeln!(out, "  {c}{sep}");
    }
}

impl Display for Model {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for p in &self.params {
            let _ = writeln!(out, "given {}: {}", p.name, p.domain);
        }
        for c in &self.constants {
            let _ = writeln!(out, "letting {} be {}", c.name, c.value);
        }
        for d in &self.decision_vars {
            let _ = writeln!(out, "find {}: {}", d.name, d.domain);
        }
        if !self.constraints.is_empty() {
            write_constraints(&mut out, &self.constraints);
        }
        f.write_str(&out)
    }
}
