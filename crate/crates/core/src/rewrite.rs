//! Lifting static guards out of return expressions.
//!
//! Dynamic sub-expressions (those reading decision variables) are replaced by
//! fresh dummy variables `__Z1`, `__Z2`, ... so that the rewritten return
//! expression mentions only induction variables and dummies.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::ast::{AggregateOp, BinOp, Expr, ExprKind, IntRange, MatrixArg, Model, Type, TypeEnv};
use crate::error::{Error, Result};
use crate::eval::floor_div;

/// Prefix reserved for generated names.
pub const DUMMY_PREFIX: &str = "__";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Static,
    Dynamic,
}

/// `Dynamic` iff `e` references a name that is neither an induction variable nor
/// a generated dummy.
pub fn classify(e: &Expr, induction: &[&str]) -> Class {
    if e.references(&|n| !induction.contains(&n) && !n.starts_with(DUMMY_PREFIX)) {
        Class::Dynamic
    } else {
        Class::Static
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DummyVar {
    pub name: String,
    pub ty: Type,
    /// Interval enclosure of the replaced expression; `None` for Boolean dummies.
    pub domain: Option<IntRange>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewriteResult {
    pub rewritten: Expr,
    pub dummies: Vec<DummyVar>,
    /// Dummy name to the sub-expression it replaced, in introduction order.
    pub replaced: Vec<(String, Expr)>,
}

impl RewriteResult {
    /// Substitutes the replaced sub-expressions back into the rewritten expression.
    pub fn reconstruct(&self) -> Expr {
        let map: HashMap<String, Expr> = self.replaced.iter().cloned().collect();
        self.rewritten.substitute(&map)
    }
}

impl fmt::Display for RewriteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rewritten: {}", self.rewritten)?;
        for (d, (_, orig)) in self.dummies.iter().zip(&self.replaced) {
            match d.domain {
                Some(r) => writeln!(f, "{}: {} := {}", d.name, r, orig)?,
                None => writeln!(f, "{}: bool := {}", d.name, orig)?,
            }
        }
        Ok(())
    }
}

/// Replaces dynamic sub-expressions of `return_expr` by dummies of type `dummy_type`.
///
/// `induction` maps each induction variable to its range; `model` supplies the
/// types and domains of decision variables. Traversal is left to right. A node
/// without dynamic descendants of the dummy type is replaced whole (walking up to
/// the nearest ancestor of the dummy type if needed); a node with such
/// descendants is entered when an induction variable occurs in it outside the
/// indices of a decision-variable access, and replaced whole otherwise. After a
/// replacement or skip the cursor moves to the next sibling, climbing past
/// parents that have already been entered.
pub fn lift_static_guard(
    return_expr: &Expr,
    induction: &BTreeMap<String, IntRange>,
    dummy_type: &Type,
    model: &Model,
) -> Result<RewriteResult> {
    let mut rw = Rewriter::new(induction, dummy_type, model)?;
    let mut root = return_expr.clone();
    if rw.type_of(&root)? != *dummy_type {
        return Err(Error::Internal(format!(
            "return expression `{return_expr}` does not have the dummy type {dummy_type}"
        )));
    }
    let limit = 2 * root.node_count() + 2;
    let mut visits = 0;
    let mut cursor = Some(Vec::new());
    while let Some(mut path) = cursor {
        visits += 1;
        if visits > limit {
            return Err(Error::Internal("rewrite did not terminate".into()));
        }
        let node = root.at(&path).expect("cursor points into the tree");
        if !rw.is_dynamic(node) {
            cursor = next(&root, path);
            continue;
        }
        let eligible = node
            .children()
            .into_iter()
            .any(|c| rw.has_eligible(c).unwrap_or(true));
        if eligible && rw.induction_outside_dynamic_index(node) {
            path.push(0);
            cursor = Some(path);
            continue;
        }
        let target = rw.walk_up(&root, path)?;
        rw.replace(&mut root, &target)?;
        cursor = next(&root, target);
    }
    Ok(RewriteResult {
        rewritten: root,
        dummies: rw.dummies,
        replaced: rw.replaced,
    })
}

/// Next node after `path` without revisiting ancestors: the right sibling, or
/// the right sibling of the nearest ancestor that has one.
fn next(root: &Expr, mut path: Vec<usize>) -> Option<Vec<usize>> {
    loop {
        let i = path.pop()?;
        let parent = root.at(&path)?;
        if i + 1 < parent.children().len() {
            path.push(i + 1);
            return Some(path);
        }
    }
}

struct Rewriter<'a> {
    induction: &'a BTreeMap<String, IntRange>,
    dummy_type: &'a Type,
    model: &'a Model,
    types: TypeEnv,
    dummies: Vec<DummyVar>,
    replaced: Vec<(String, Expr)>,
}

impl<'a> Rewriter<'a> {
    fn new(
        induction: &'a BTreeMap<String, IntRange>,
        dummy_type: &'a Type,
        model: &'a Model,
    ) -> Result<Self> {
        let mut types = model.type_env()?;
        for name in induction.keys() {
            types.insert(name.clone(), Type::Int);
        }
        Ok(Rewriter {
            induction,
            dummy_type,
            model,
            types,
            dummies: Vec::new(),
            replaced: Vec::new(),
        })
    }

    fn type_of(&self, e: &Expr) -> Result<Type> {
        crate::ast::type_of(e, &self.types)
    }

    fn is_dynamic(&self, e: &Expr) -> bool {
        e.references(&|n| !self.induction.contains_key(n) && !n.starts_with(DUMMY_PREFIX))
    }

    /// Whether `e` or one of its descendants is dynamic and of the dummy type.
    fn has_eligible(&self, e: &Expr) -> Result<bool> {
        if self.is_dynamic(e) && self.type_of(e)? == *self.dummy_type {
            return Ok(true);
        }
        for c in e.children() {
            if self.has_eligible(c)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// An induction variable occurs in `e` other than inside the indices of a
    /// decision-variable matrix access.
    fn induction_outside_dynamic_index(&self, e: &Expr) -> bool {
        match &e.kind {
            ExprKind::Var(n) => self.induction.contains_key(n),
            ExprKind::Index { base, .. } if self.model.decision_var(base).is_some() => false,
            _ => e
                .children()
                .into_iter()
                .any(|c| self.induction_outside_dynamic_index(c)),
        }
    }

    /// The nearest node at or above `path` whose type is the dummy type.
    fn walk_up(&self, root: &Expr, mut path: Vec<usize>) -> Result<Vec<usize>> {
        loop {
            let node = root.at(&path).expect("path inside tree");
            if self.type_of(node)? == *self.dummy_type {
                return Ok(path);
            }
            if path.pop().is_none() {
                return Err(Error::Internal(
                    "no ancestor has the dummy type".into(),
                ));
            }
        }
    }

    fn replace(&mut self, root: &mut Expr, path: &[usize]) -> Result<()> {
        let name = format!("{DUMMY_PREFIX}Z{}", self.dummies.len() + 1);
        let slot = root.at_mut(path).expect("path inside tree");
        let original = std::mem::replace(slot, Expr::var(&name).with_span(slot.span));
        let domain = match self.dummy_type {
            Type::Int => Some(self.interval(&original)?),
            _ => None,
        };
        self.types.insert(name.clone(), self.dummy_type.clone());
        self.dummies.push(DummyVar {
            name: name.clone(),
            ty: self.dummy_type.clone(),
            domain,
        });
        self.replaced.push((name, original));
        Ok(())
    }

    /// Sound interval enclosure of an integer expression.
    fn interval(&self, e: &Expr) -> Result<IntRange> {
        const FULL: IntRange = IntRange {
            lo: i64::MIN,
            hi: i64::MAX,
        };
        Ok(match &e.kind {
            ExprKind::Int(v) => IntRange::new(*v, *v),
            ExprKind::Var(n) | ExprKind::Index { base: n, .. } => {
                if let Some(r) = self.induction.get(n) {
                    *r
                } else if let Some(d) = self.dummies.iter().find(|d| &d.name == n) {
                    d.domain.unwrap_or(FULL)
                } else if let Some(d) = self.model.decision_var(n) {
                    d.domain.scalar_range()?.unwrap_or(FULL)
                } else {
                    FULL
                }
            }
            ExprKind::Neg(x) => {
                let r = self.interval(x)?;
                IntRange::new(r.hi.saturating_neg(), r.lo.saturating_neg())
            }
            ExprKind::Bin(op, l, r) if op.is_arithmetic() => {
                interval_bin(*op, self.interval(l)?, self.interval(r)?)
            }
            ExprKind::Aggregate(op @ (AggregateOp::Sum | AggregateOp::Product), MatrixArg::List(items)) => {
                let mut acc = match op {
                    AggregateOp::Sum => IntRange::new(0, 0),
                    _ => IntRange::new(1, 1),
                };
                for i in items {
                    acc = interval_bin(op.binop(), acc, self.interval(i)?);
                }
                acc
            }
            _ => FULL,
        })
    }
}

fn hull(values: impl IntoIterator<Item = i64>) -> IntRange {
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    IntRange::new(lo, hi)
}

fn sat_pow(b: i64, e: i64) -> i64 {
    match b {
        0 => i64::from(e == 0),
        1 => 1,
        -1 => {
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        _ => {
            let e = u32::try_from(e).unwrap_or(u32::MAX);
            b.checked_pow(e).unwrap_or(if b < 0 && e % 2 == 1 {
                i64::MIN
            } else {
                i64::MAX
            })
        }
    }
}

/// Interval arithmetic with saturation. Division and modulo ignore a zero divisor,
/// which can only ever raise an error.
pub(crate) fn interval_bin(op: BinOp, a: IntRange, b: IntRange) -> IntRange {
    if a.is_empty() || b.is_empty() {
        return IntRange::new(1, 0);
    }
    match op {
        BinOp::Add => IntRange::new(a.lo.saturating_add(b.lo), a.hi.saturating_add(b.hi)),
        BinOp::Sub => IntRange::new(a.lo.saturating_sub(b.hi), a.hi.saturating_sub(b.lo)),
        BinOp::Mul => hull([
            a.lo.saturating_mul(b.lo),
            a.lo.saturating_mul(b.hi),
            a.hi.saturating_mul(b.lo),
            a.hi.saturating_mul(b.hi),
        ]),
        BinOp::Div => {
            let mut parts = Vec::new();
            for d in [IntRange::new(b.lo, b.hi.min(-1)), IntRange::new(b.lo.max(1), b.hi)] {
                if d.is_empty() {
                    continue;
                }
                for x in [a.lo, a.hi] {
                    for y in [d.lo, d.hi] {
                        parts.push(floor_div(x, y).unwrap_or(i64::MAX));
                    }
                }
            }
            if parts.is_empty() {
                IntRange::new(0, 0)
            } else {
                hull(parts)
            }
        }
        BinOp::Mod => {
            if b.lo > 0 {
                let hi = b.hi - 1;
                if a.lo >= 0 && a.hi <= hi {
                    a
                } else {
                    IntRange::new(0, hi)
                }
            } else if b.hi < 0 {
                IntRange::new(b.lo + 1, 0)
            } else if b.lo == 0 && b.hi == 0 {
                IntRange::new(0, 0)
            } else {
                IntRange::new(b.lo.saturating_add(1).min(0), b.hi.saturating_sub(1).max(0))
            }
        }
        BinOp::Pow => {
            let elo = b.lo.max(0);
            let ehi = b.hi;
            if ehi < 0 {
                return IntRange::new(0, 0);
            }
            let mut bases = vec![a.lo, a.hi];
            if a.contains(0) {
                bases.push(0);
            }
            let exps = [elo, elo.saturating_add(1).min(ehi), ehi.saturating_sub(1).max(elo), ehi];
            hull(bases.iter().flat_map(|&x| exps.iter().map(move |&e| sat_pow(x, e))))
        }
        _ => unreachable!("not arithmetic"),
    }
}

/// Exact hull by enumeration, skipping erroring operands.
#[cfg(test)]
fn brute(op: BinOp, a: IntRange, b: IntRange) -> Option<IntRange> {
    let mut vals = Vec::new();
    for x in a.iter() {
        for y in b.iter() {
            if let Ok(v) = crate::eval::arith(op, x, y) {
                vals.push(v);
            }
        }
    }
    (!vals.is_empty()).then(|| hull(vals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{bind_params, parse_expr, parse_model, Bindings};

    fn model(src: &str) -> Model {
        let m = parse_model(src).unwrap();
        bind_params(&m, &Bindings::new()).unwrap()
    }

    fn run(m: &Model, e: &str, ind: &[(&str, i64, i64)], ty: Type) -> RewriteResult {
        let induction = ind
            .iter()
            .map(|(n, lo, hi)| (n.to_string(), IntRange::new(*lo, *hi)))
            .collect();
        let e = parse_expr(e).unwrap();
        let r = lift_static_guard(&e, &induction, &ty, m).unwrap();
        assert_eq!(r.reconstruct(), e, "reconstruction");
        let names: Vec<&str> = ind.iter().map(|t| t.0).collect();
        assert_eq!(classify(&r.rewritten, &names), Class::Static);
        r
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&parse_expr("b % 3 = 0").unwrap(), &["a", "b"]), Class::Static);
        assert_eq!(classify(&parse_expr("m[i] % 2 = 0").unwrap(), &["i"]), Class::Dynamic);
        assert_eq!(classify(&parse_expr("m[1]").unwrap(), &["i"]), Class::Dynamic);
        assert_eq!(classify(&Expr::var("__Z1"), &[]), Class::Static);
    }

    #[test]
    fn mixed_guard() {
        let m = model("find m: matrix indexed by [int(1..4)] of int(0..4)");
        let r = run(
            &m,
            "!(i % 2 = 0 /\\ m[i] % 2 = 0) \\/ (m[i] = i)",
            &[("i", 1, 4)],
            Type::Bool,
        );
        assert_eq!(r.rewritten.to_string(), "!(i % 2 = 0 /\\ __Z1) \\/ __Z2");
        assert_eq!(r.dummies.len(), 2);
        assert_eq!(r.replaced[0].1.to_string(), "m[i] % 2 = 0");
        assert_eq!(r.replaced[1].1.to_string(), "m[i] = i");
    }

    #[test]
    fn purely_dynamic_conjunction_is_one_dummy() {
        let m = model("find m: matrix indexed by [int(1..4)] of int(0..4)\nfind i: int(1..4)");
        let r = run(&m, "m[i] % 2 = 0 /\\ m[i] % 3 = 0", &[("j", 1, 4)], Type::Bool);
        assert_eq!(r.rewritten.to_string(), "__Z1");
        assert_eq!(r.dummies.len(), 1);
    }

    #[test]
    fn static_input_unchanged() {
        let m = model("find x: bool");
        let r = run(&m, "i < 3", &[("i", 1, 4)], Type::Bool);
        assert_eq!(r.rewritten.to_string(), "i < 3");
        assert!(r.dummies.is_empty());
    }

    #[test]
    fn guard_in_return_collapses_disjunction() {
        let m = model("find class: matrix indexed by [int(1..5)] of int(1..2)");
        let r = run(
            &m,
            "(a**2+b**2=c**2 /\\ a<=b /\\ b<=c) -> \
             or([class[a]!=class[b], class[b]!=class[c], class[c]!=class[a]])",
            &[("a", 1, 5), ("b", 1, 5), ("c", 1, 5)],
            Type::Bool,
        );
        assert_eq!(
            r.rewritten.to_string(),
            "a ** 2 + b ** 2 = c ** 2 /\\ a <= b /\\ b <= c -> __Z1"
        );
        assert_eq!(r.dummies.len(), 1);
    }

    #[test]
    fn integer_dummies_get_interval_domains() {
        let m = model("find m: matrix indexed by [int(1..4)] of int(-2..3)");
        let r = run(&m, "m[i] * m[i] + i", &[("i", 1, 4)], Type::Int);
        assert_eq!(r.rewritten.to_string(), "__Z1 + i");
        assert_eq!(r.dummies[0].domain, Some(IntRange::new(-6, 9)));
    }

    #[test]
    fn comparison_of_booleans() {
        let m = model("find x: int(0..3)\nfind p: bool");
        let r = run(&m, "(i = 1) = (x + i > 2)", &[("i", 1, 2)], Type::Bool);
        assert_eq!(r.rewritten.to_string(), "(i = 1) = __Z1");
    }

    #[test]
    fn interval_arithmetic_encloses_brute_force() {
        let ranges = [
            IntRange::new(-3, 3),
            IntRange::new(0, 4),
            IntRange::new(-4, -1),
            IntRange::new(2, 2),
            IntRange::new(0, 0),
            IntRange::new(-1, 5),
        ];
        for op in [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod, BinOp::Pow] {
            for a in ranges {
                for b in ranges {
                    let got = interval_bin(op, a, b);
                    if let Some(exact) = brute(op, a, b) {
                        assert!(
                            got.lo <= exact.lo && exact.hi <= got.hi,
                            "{op:?} {a} {b}: {got} does not enclose {exact}"
                        );
                    }
                }
            }
        }
    }
}
