//! Ground evaluation and the partial evaluator shared by every pipeline.
//!
//! `simplify` folds ground subtrees with [`eval_static`] and applies a fixed rule
//! table; see `docs/language.md` for the list. Both pipelines call it, so their
//! outputs can be compared textually.

use std::collections::HashMap;
use std::fmt;

use crate::ast::{AggregateOp, BinOp, Comprehension, Expr, ExprKind, Generator, IntRange, MatrixArg};
use crate::error::{Error, EvalError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Bool(bool),
    /// Row-major values over the given index ranges.
    Matrix {
        ranges: Vec<IntRange>,
        values: Vec<Value>,
    },
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Int(_) => "int",
            Value::Bool(_) => "bool",
            Value::Matrix { .. } => "matrix",
        }
    }

    /// Literal for a scalar value.
    pub fn to_expr(&self) -> Option<Expr> {
        match self {
            Value::Int(v) => Some(Expr::int(*v)),
            Value::Bool(b) => Some(Expr::boolean(*b)),
            Value::Matrix { .. } => None,
        }
    }

    pub fn as_int(&self) -> Result<i64, EvalError> {
        match self {
            Value::Int(v) => Ok(*v),
            other => Err(mismatch("int", other)),
        }
    }

    pub fn as_bool(&self) -> Result<bool, EvalError> {
        match self {
            Value::Bool(b) => Ok(*b),
            other => Err(mismatch("bool", other)),
        }
    }

    fn get(&self, name: &str, idx: &[i64]) -> Result<&Value, EvalError> {
        let Value::Matrix { ranges, values } = self else {
            return Err(mismatch("matrix", self));
        };
        if ranges.len() != idx.len() {
            return Err(EvalError::Mismatch {
                expected: "matching index count",
                found: format!("{} indices", idx.len()),
            });
        }
        let mut flat = 0u64;
        for (r, &i) in ranges.iter().zip(idx) {
            if !r.contains(i) {
                return Err(EvalError::IndexOutOfBounds {
                    name: name.to_string(),
                    index: i,
                });
            }
            flat = flat * r.len() + (i - r.lo) as u64;
        }
        Ok(&values[flat as usize])
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Matrix { values, .. } => {
                f.write_str("[")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
        }
    }
}

fn mismatch(expected: &'static str, found: &Value) -> EvalError {
    EvalError::Mismatch {
        expected,
        found: found.type_name().to_string(),
    }
}

pub type Env = HashMap<String, Value>;

/// Integer arithmetic with floor division and checked overflow.
pub fn arith(op: BinOp, a: i64, b: i64) -> Result<i64, EvalError> {
    let r = match op {
        BinOp::Add => a.checked_add(b),
        BinOp::Sub => a.checked_sub(b),
        BinOp::Mul => a.checked_mul(b),
        BinOp::Div => return floor_div(a, b),
        BinOp::Mod => return floor_mod(a, b),
        BinOp::Pow => return pow(a, b),
        _ => unreachable!("not an arithmetic operator: {op:?}"),
    };
    r.ok_or(EvalError::Overflow)
}

pub fn floor_div(a: i64, b: i64) -> Result<i64, EvalError> {
    if b == 0 {
        return Err(EvalError::DivByZero);
    }
    let q = a.checked_div(b).ok_or(EvalError::Overflow)?;
    if a % b != 0 && ((a < 0) != (b < 0)) {
        Ok(q - 1)
    } else {
        Ok(q)
    }
}

/// Remainder with the sign of the divisor, so `a = b * (a / b) + a % b`.
pub fn floor_mod(a: i64, b: i64) -> Result<i64, EvalError> {
    if b == 0 {
        return Err(EvalError::DivByZero);
    }
    let r = a.checked_rem(b).unwrap_or(0);
    if r != 0 && ((r < 0) != (b < 0)) {
        Ok(r + b)
    } else {
        Ok(r)
    }
}

fn pow(a: i64, b: i64) -> Result<i64, EvalError> {
    if b < 0 {
        return Err(EvalError::NegativeExponent);
    }
    match a {
        0 => return Ok(if b == 0 { 1 } else { 0 }),
        1 => return Ok(1),
        -1 => return Ok(if b % 2 == 0 { 1 } else { -1 }),
        _ => {}
    }
    let e = u32::try_from(b).map_err(|_| EvalError::Overflow)?;
    a.checked_pow(e).ok_or(EvalError::Overflow)
}

/// Result of a comparison or arithmetic operator on two scalar values.
pub fn apply_bin(op: BinOp, l: &Value, r: &Value) -> Result<Value, EvalError> {
    Ok(match op {
        _ if op.is_arithmetic() => Value::Int(arith(op, l.as_int()?, r.as_int()?)?),
        BinOp::Eq | BinOp::Neq => {
            let eq = match (l, r) {
                (Value::Int(a), Value::Int(b)) => a == b,
                (Value::Bool(a), Value::Bool(b)) => a == b,
                _ => return Err(mismatch(l.type_name(), r)),
            };
            Value::Bool(eq == (op == BinOp::Eq))
        }
        BinOp::Lt => Value::Bool(l.as_int()? < r.as_int()?),
        BinOp::Leq => Value::Bool(l.as_int()? <= r.as_int()?),
        BinOp::Gt => Value::Bool(l.as_int()? > r.as_int()?),
        BinOp::Geq => Value::Bool(l.as_int()? >= r.as_int()?),
        BinOp::And => Value::Bool(l.as_bool()? && r.as_bool()?),
        BinOp::Or => Value::Bool(l.as_bool()? || r.as_bool()?),
        BinOp::Implies => Value::Bool(!l.as_bool()? || r.as_bool()?),
        _ => unreachable!(),
    })
}

/// Evaluates an expression whose names are all bound in `env`.
///
/// `/\`, `\/` and `->` (and `and`/`or` over a matrix) evaluate left to right and
/// stop as soon as the result is known; arithmetic is strict.
pub fn eval_static(e: &Expr, env: &Env) -> Result<Value> {
    let at = |err: EvalError| Error::eval(err, e.span);
    match &e.kind {
        ExprKind::Int(v) => Ok(Value::Int(*v)),
        ExprKind::Bool(b) => Ok(Value::Bool(*b)),
        ExprKind::Var(n) => env
            .get(n)
            .cloned()
            .ok_or_else(|| at(EvalError::UnboundName(n.clone()))),
        ExprKind::Index { base, indices } => {
            let m = env
                .get(base)
                .ok_or_else(|| at(EvalError::UnboundName(base.clone())))?;
            let idx = indices
                .iter()
                .map(|i| eval_static(i, env)?.as_int().map_err(at))
                .collect::<Result<Vec<_>>>()?;
            m.get(base, &idx).cloned().map_err(at)
        }
        ExprKind::Neg(x) => {
            let v = eval_static(x, env)?.as_int().map_err(at)?;
            Ok(Value::Int(v.checked_neg().ok_or_else(|| at(EvalError::Overflow))?))
        }
        ExprKind::Not(x) => Ok(Value::Bool(!eval_static(x, env)?.as_bool().map_err(at)?)),
        ExprKind::Bin(op, l, r) => {
            let lv = eval_static(l, env)?;
            match (op, &lv) {
                (BinOp::And, Value::Bool(false)) => return Ok(Value::Bool(false)),
                (BinOp::Or, Value::Bool(true)) => return Ok(Value::Bool(true)),
                (BinOp::Implies, Value::Bool(false)) => return Ok(Value::Bool(true)),
                _ => {}
            }
            let rv = eval_static(r, env)?;
            apply_bin(*op, &lv, &rv).map_err(at)
        }
        ExprKind::Aggregate(op, arg) => {
            let mut acc = match op {
                AggregateOp::And | AggregateOp::Or => Value::Bool(*op == AggregateOp::And),
                AggregateOp::Sum => Value::Int(0),
                AggregateOp::Product => Value::Int(1),
            };
            for_each_item(arg, env, &mut |item| {
                let v = eval_static(item.0, item.1)?;
                acc = match op {
                    AggregateOp::And => {
                        let b = v.as_bool().map_err(at)?;
                        if !b {
                            return Ok(Some(Value::Bool(false)));
                        }
                        Value::Bool(true)
                    }
                    AggregateOp::Or => {
                        let b = v.as_bool().map_err(at)?;
                        if b {
                            return Ok(Some(Value::Bool(true)));
                        }
                        Value::Bool(false)
                    }
                    AggregateOp::Sum | AggregateOp::Product => {
                        let a = acc.as_int().map_err(at)?;
                        let b = v.as_int().map_err(at)?;
                        Value::Int(arith(op.binop(), a, b).map_err(at)?)
                    }
                };
                Ok(None)
            })
            .map(|early| early.unwrap_or(acc))
        }
        ExprKind::AllDiff(arg) => {
            let mut seen = std::collections::HashSet::new();
            let mut distinct = true;
            for_each_item(arg, env, &mut |item| {
                let v = eval_static(item.0, item.1)?.as_int().map_err(at)?;
                distinct &= seen.insert(v);
                Ok(None::<Value>)
            })?;
            Ok(Value::Bool(distinct))
        }
        ExprKind::Quantifier { kind, vars, body } => {
            let c = Comprehension {
                return_expr: (**body).clone(),
                generators: vars.clone(),
                guards: vec![],
            };
            let agg = Expr::new(
                ExprKind::Aggregate(kind.aggregate(), MatrixArg::Comprehension(Box::new(c))),
                e.span,
            );
            eval_static(&agg, env)
        }
    }
}

type ItemFn<'f> = dyn FnMut((&Expr, &Env)) -> Result<Option<Value>> + 'f;

/// Calls `f` on each element of a matrix operand in order; stops early when `f`
/// returns a value.
fn for_each_item(arg: &MatrixArg, env: &Env, f: &mut ItemFn<'_>) -> Result<Option<Value>> {
    match arg {
        MatrixArg::List(items) => {
            for i in items {
                if let Some(v) = f((i, env))? {
                    return Ok(Some(v));
                }
            }
            Ok(None)
        }
        MatrixArg::Comprehension(c) => {
            let mut local = env.clone();
            comprehension_items(c, &c.generators, &mut local, f)
        }
    }
}

fn comprehension_items(
    c: &Comprehension,
    gens: &[Generator],
    env: &mut Env,
    f: &mut ItemFn<'_>,
) -> Result<Option<Value>> {
    let Some((g, rest)) = gens.split_first() else {
        for guard in &c.guards {
            if !eval_static(guard, env)?
                .as_bool()
                .map_err(|e| Error::eval(e, guard.span))?
            {
                return Ok(None);
            }
        }
        return f((&c.return_expr, env));
    };
    let range = eval_range(g, env)?;
    let saved = env.get(&g.name).cloned();
    let mut out = None;
    for v in range.iter() {
        env.insert(g.name.clone(), Value::Int(v));
        out = comprehension_items(c, rest, env, f)?;
        if out.is_some() {
            break;
        }
    }
    match saved {
        Some(s) => env.insert(g.name.clone(), s),
        None => env.remove(&g.name),
    };
    Ok(out)
}

/// Concrete range of a generator whose bounds are evaluable in `env`.
pub fn eval_range(g: &Generator, env: &Env) -> Result<IntRange> {
    let bound = |b: &Expr| -> Result<i64> {
        eval_static(b, env)?
            .as_int()
            .map_err(|e| Error::eval(e, b.span))
    };
    let hi = g.range.hi.as_ref().ok_or_else(|| {
        Error::validation(g.span, format!("generator `{}` needs an upper bound", g.name))
    })?;
    Ok(IntRange::new(bound(&g.range.lo)?, bound(hi)?))
}

/// True when every free name of `e` is bound in `env`.
pub fn is_ground(e: &Expr, env: &Env) -> bool {
    fn go(e: &Expr, env: &Env, bound: &mut Vec<String>) -> bool {
        let binders: &[Generator] = match &e.kind {
            ExprKind::Var(n) => return bound.contains(n) || env.contains_key(n),
            ExprKind::Index { base, indices } => {
                if !(bound.contains(base) || env.contains_key(base)) {
                    return false;
                }
                return indices.iter().all(|i| go(i, env, bound));
            }
            ExprKind::Aggregate(_, MatrixArg::Comprehension(c))
            | ExprKind::AllDiff(MatrixArg::Comprehension(c)) => &c.generators,
            ExprKind::Quantifier { vars, .. } => vars,
            _ => &[],
        };
        let depth = bound.len();
        for g in binders {
            let bounds_ok = std::iter::once(&g.range.lo)
                .chain(g.range.hi.iter())
                .all(|b| go(b, env, bound));
            if !bounds_ok || g.range.hi.is_none() {
                bound.truncate(depth);
                return false;
            }
            bound.push(g.name.clone());
        }
        let ok = e.children().into_iter().all(|c| go(c, env, bound));
        bound.truncate(depth);
        ok
    }
    go(e, env, &mut Vec::new())
}

/// Partial evaluation: folds ground subtrees and applies the rule table.
///
/// Rules: `true /\ x → x`, `false /\ x → false`, `true \/ x → true`,
/// `false \/ x → x` (all four also with operands swapped), `false -> x → true`,
/// `true -> x → x`, `x -> true → true`, `!true → false`, `!false → true`,
/// `0 + x → x`, `x - 0 → x`, `0 * x → 0`, `1 * x → x`, `x ** 1 → x`.
/// Matrix operands of `and`/`or`/`sum`/`product` are flattened into a chain of
/// the binary operator with identity operands removed.
pub fn simplify(e: &Expr, env: &Env) -> Result<Expr> {
    if is_ground(e, env) {
        let v = eval_static(e, env)?;
        if let Some(lit) = v.to_expr() {
            return Ok(lit.with_span(e.span));
        }
    }
    let span = e.span;
    match &e.kind {
        ExprKind::Int(_) | ExprKind::Bool(_) | ExprKind::Var(_) => Ok(e.clone()),
        ExprKind::Index { base, indices } => {
            let indices = indices
                .iter()
                .map(|i| simplify(i, env))
                .collect::<Result<Vec<_>>>()?;
            let node = Expr::new(
                ExprKind::Index {
                    base: base.clone(),
                    indices,
                },
                span,
            );
            fold_if_ground(node, env)
        }
        ExprKind::Neg(x) => {
            let s = simplify(x, env)?;
            fold_if_ground(Expr::new(ExprKind::Neg(Box::new(s)), span), env)
        }
        ExprKind::Not(x) => {
            let s = simplify(x, env)?;
            match s.as_bool() {
                Some(b) => Ok(Expr::boolean(!b).with_span(span)),
                None => Ok(Expr::new(ExprKind::Not(Box::new(s)), span)),
            }
        }
        ExprKind::Bin(op, l, r) => {
            let ls = simplify(l, env)?;
            if let Some(short) = short_circuit(*op, &ls) {
                return Ok(short.with_span(span));
            }
            let rs = simplify(r, env)?;
            combine(*op, ls, rs, span, env)
        }
        ExprKind::Aggregate(op, MatrixArg::List(items)) => {
            let identity = op.identity();
            let mut acc: Option<Expr> = None;
            for item in items {
                if let Some(a) = &acc {
                    if let Some(short) = short_circuit(op.binop(), a) {
                        return Ok(short.with_span(span));
                    }
                }
                let s = simplify(item, env)?;
                if s == identity {
                    continue;
                }
                acc = Some(match acc {
                    None => s,
                    Some(a) => combine(op.binop(), a, s, span, env)?,
                });
            }
            Ok(acc.unwrap_or(identity).with_span_if_synthetic(span))
        }
        ExprKind::AllDiff(MatrixArg::List(items)) => {
            let items = items
                .iter()
                .map(|i| simplify(i, env))
                .collect::<Result<Vec<_>>>()?;
            fold_if_ground(
                Expr::new(ExprKind::AllDiff(MatrixArg::List(items)), span),
                env,
            )
        }
        ExprKind::Aggregate(..) | ExprKind::AllDiff(_) | ExprKind::Quantifier { .. } => {
            let subst: HashMap<String, Expr> = env
                .iter()
                .filter_map(|(k, v)| Some((k.clone(), v.to_expr()?)))
                .collect();
            Ok(e.substitute(&subst))
        }
    }
}

impl Expr {
    fn with_span_if_synthetic(self, span: crate::error::Span) -> Expr {
        if self.span.is_synthetic() {
            self.with_span(span)
        } else {
            self
        }
    }
}

fn fold_if_ground(e: Expr, env: &Env) -> Result<Expr> {
    if is_ground(&e, env) {
        if let Some(lit) = eval_static(&e, env)?.to_expr() {
            return Ok(lit.with_span(e.span));
        }
    }
    Ok(e)
}

/// Result decided by the (simplified) left operand alone.
fn short_circuit(op: BinOp, l: &Expr) -> Option<Expr> {
    match (op, &l.kind) {
        (BinOp::And, ExprKind::Bool(false)) => Some(Expr::boolean(false)),
        (BinOp::Or, ExprKind::Bool(true)) => Some(Expr::boolean(true)),
        (BinOp::Implies, ExprKind::Bool(false)) => Some(Expr::boolean(true)),
        (BinOp::Mul, ExprKind::Int(0)) => Some(Expr::int(0)),
        _ => None,
    }
}

/// Applies the rule table to a binary node with simplified operands.
fn combine(op: BinOp, l: Expr, r: Expr, span: crate::error::Span, env: &Env) -> Result<Expr> {
    if let Some(short) = short_circuit(op, &l) {
        return Ok(short.with_span(span));
    }
    let out = match (op, &l.kind, &r.kind) {
        (BinOp::And, ExprKind::Bool(true), _) => r,
        (BinOp::And, _, ExprKind::Bool(true)) => l,
        (BinOp::And, _, ExprKind::Bool(false)) => Expr::boolean(false),
        (BinOp::Or, ExprKind::Bool(false), _) => r,
        (BinOp::Or, _, ExprKind::Bool(false)) => l,
        (BinOp::Or, _, ExprKind::Bool(true)) => Expr::boolean(true),
        (BinOp::Implies, ExprKind::Bool(true), _) => r,
        (BinOp::Implies, _, ExprKind::Bool(true)) => Expr::boolean(true),
        (BinOp::Add, ExprKind::Int(0), _) => r,
        (BinOp::Sub, _, ExprKind::Int(0)) => l,
        (BinOp::Mul, ExprKind::Int(1), _) => r,
        (BinOp::Pow, _, ExprKind::Int(1)) => l,
        _ => {
            return fold_if_ground(
                Expr::new(ExprKind::Bin(op, Box::new(l), Box::new(r)), span),
                env,
            )
        }
    };
    Ok(out.with_span_if_synthetic(span))
}

/// Chains `items` with the operator of `op`, dropping identity literals.
///
/// An empty list gives the identity and a single item is returned as is; longer
/// lists become a left-nested chain such as `a /\ b /\ c`.
pub fn assemble_aggregate(op: AggregateOp, items: Vec<Expr>) -> Expr {
    let identity = op.identity();
    items
        .into_iter()
        .filter(|i| *i != identity)
        .reduce(|acc, i| Expr::bin(op.binop(), acc, i))
        .unwrap_or(identity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expr;

    fn ev(s: &str, env: &[(&str, i64)]) -> Result<Value> {
        let env: Env = env
            .iter()
            .map(|(k, v)| (k.to_string(), Value::Int(*v)))
            .collect();
        eval_static(&parse_expr(s).unwrap(), &env)
    }

    fn simp(s: &str) -> String {
        simplify(&parse_expr(s).unwrap(), &Env::new())
            .unwrap()
            .to_string()
    }

    #[test]
    fn static_evaluation() {
        assert_eq!(ev("b % 3 = 0", &[("b", 6)]).unwrap(), Value::Bool(true));
        assert_eq!(ev("3**2 + 4**2 = 5**2", &[]).unwrap(), Value::Bool(true));
        assert!(matches!(
            ev("1/0", &[]),
            Err(Error::Eval {
                source: EvalError::DivByZero,
                ..
            })
        ));
        assert!(matches!(
            ev("x + 1", &[]),
            Err(Error::Eval {
                source: EvalError::UnboundName(_),
                ..
            })
        ));
    }

    #[test]
    fn floor_semantics() {
        assert_eq!(ev("-7 / 2", &[]).unwrap(), Value::Int(-4));
        assert_eq!(ev("-7 % 2", &[]).unwrap(), Value::Int(1));
        assert_eq!(ev("7 % -2", &[]).unwrap(), Value::Int(-1));
        assert_eq!(ev("7 / -2", &[]).unwrap(), Value::Int(-4));
        for a in -9..=9 {
            for b in [-4, -3, -1, 1, 2, 5] {
                let (q, r) = (floor_div(a, b).unwrap(), floor_mod(a, b).unwrap());
                assert_eq!(b * q + r, a);
                assert!(r == 0 || (r < 0) == (b < 0));
            }
        }
    }

    #[test]
    fn overflow_is_an_error() {
        for s in ["9223372036854775807 + 1", "2 ** 64", "-9223372036854775807 - 2", "2 ** -1"] {
            assert!(ev(s, &[]).unwrap_err().is_eval(), "{s}");
        }
        assert_eq!(ev("(-1) ** 99999999999", &[]).unwrap(), Value::Int(-1));
    }

    #[test]
    fn short_circuit_evaluation() {
        assert_eq!(ev("false /\\ 1/0 = 0", &[]).unwrap(), Value::Bool(false));
        assert_eq!(ev("false -> 1/0 = 0", &[]).unwrap(), Value::Bool(true));
        assert_eq!(ev("or([true, 1/0 = 0])", &[]).unwrap(), Value::Bool(true));
        assert!(ev("0 * (1/0)", &[]).is_err());
    }

    #[test]
    fn comprehension_evaluation() {
        assert_eq!(
            ev("sum([i * j | i: int(1..3), j: int(1..2), i != j])", &[]).unwrap(),
            Value::Int(2 + 2 + 3 + 6)
        );
        assert_eq!(
            ev("forAll i: int(1..n) . i <= n", &[("n", 5)]).unwrap(),
            Value::Bool(true)
        );
        assert_eq!(ev("allDiff([1, 2, 1])", &[]).unwrap(), Value::Bool(false));
    }

    #[test]
    fn matrix_lookup() {
        let env = Env::from([(
            "m".to_string(),
            Value::Matrix {
                ranges: vec![IntRange::new(1, 2), IntRange::new(0, 1)],
                values: [10, 11, 20, 21].into_iter().map(Value::Int).collect(),
            },
        )]);
        let e = parse_expr("m[2, 0] + m[1, 1]").unwrap();
        assert_eq!(eval_static(&e, &env).unwrap(), Value::Int(31));
        let oob = parse_expr("m[3, 0]").unwrap();
        assert!(matches!(
            eval_static(&oob, &env),
            Err(Error::Eval {
                source: EvalError::IndexOutOfBounds { .. },
                ..
            })
        ));
    }

    #[test]
    fn rule_table() {
        assert_eq!(simp("(false /\\ m[3] % 2 = 0) -> (m[3] = 3)"), "true");
        assert_eq!(simp("m[2] % 2 = 0 -> m[2] = 2"), "m[2] % 2 = 0 -> m[2] = 2");
        assert_eq!(simp("(true /\\ p) \\/ false"), "p");
        assert_eq!(simp("p /\\ false"), "false");
        assert_eq!(simp("p \\/ true"), "true");
        assert_eq!(simp("p -> true"), "true");
        assert_eq!(simp("p -> false"), "p -> false");
        assert_eq!(simp("0 + x"), "x");
        assert_eq!(simp("x + 0"), "x + 0");
        assert_eq!(simp("x - 0"), "x");
        assert_eq!(simp("0 * (x / 0)"), "0");
        assert_eq!(simp("1 * x ** 1"), "x");
        assert_eq!(simp("!(1 = 2)"), "true");
        assert_eq!(simp("x \\/ !x"), "x \\/ !x");
        assert_eq!(simp("!!x"), "!!x");
    }

    #[test]
    fn partial_evaluation_with_env() {
        let env = Env::from([("i".to_string(), Value::Int(2))]);
        let e = parse_expr("(i % 2 = 0) -> (m[i] = i)").unwrap();
        assert_eq!(simplify(&e, &env).unwrap().to_string(), "m[2] = 2");
        let env = Env::from([("i".to_string(), Value::Int(1))]);
        assert_eq!(simplify(&e, &env).unwrap().to_string(), "true");
    }

    #[test]
    fn matrix_operands_become_chains() {
        assert_eq!(simp("and([p, true, q])"), "p /\\ q");
        assert_eq!(simp("or([p, true, q])"), "true");
        assert_eq!(simp("sum([0, x, 0])"), "x");
        assert_eq!(simp("product([x, 2, y])"), "x * 2 * y");
        assert_eq!(simp("and([])"), "true");
        assert_eq!(simp("and([p \\/ q, r])"), "(p \\/ q) /\\ r");
    }

    #[test]
    fn ground_errors_surface() {
        let e = parse_expr("p /\\ 1/0 = 0").unwrap();
        assert!(simplify(&e, &Env::new()).unwrap_err().is_eval());
    }

    #[test]
    fn assemble() {
        use AggregateOp::*;
        assert_eq!(assemble_aggregate(And, vec![]).to_string(), "true");
        assert_eq!(
            assemble_aggregate(Sum, vec![Expr::int(0), Expr::var("x"), Expr::int(0)])
                .to_string(),
            "x"
        );
        let c = |s: &str| parse_expr(s).unwrap();
        assert_eq!(
            assemble_aggregate(And, vec![c("a = 1"), Expr::boolean(true), c("b = 2")])
                .to_string(),
            "a = 1 /\\ b = 2"
        );
    }

    #[test]
    fn substitution_under_comprehension() {
        let env = Env::from([("n".to_string(), Value::Int(3))]);
        let e = parse_expr("and([m[i] = n | i: int(1..n)])").unwrap();
        assert_eq!(
            simplify(&e, &env).unwrap().to_string(),
            "and([m[i] = 3 | i: int(1..3)])"
        );
    }
}
