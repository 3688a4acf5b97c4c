//! Abstract syntax for models, domains and expressions.
//!
//! Expressions carry a [`Span`] for diagnostics. Equality ignores spans, so a
//! parsed expression compares equal to the same tree built by hand.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result, Span};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Bool,
    Int,
    /// Matrix of scalars; only the number of index dimensions takes part in typing.
    Matrix { elem: Box<Type>, dims: usize },
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Bool => f.write_str("bool"),
            Type::Int => f.write_str("int"),
            Type::Matrix { elem, dims } => write!(f, "matrix[{dims}] of {elem}"),
        }
    }
}

/// Closed integer interval. `lo > hi` is the empty range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    pub fn new(lo: i64, hi: i64) -> Self {
        IntRange { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn len(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            (self.hi as i128 - self.lo as i128 + 1) as u64
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "int({}..{})", self.lo, self.hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Pow,
    Eq,
    Neq,
    Lt,
    Leq,
    Gt,
    Geq,
    And,
    Or,
    Implies,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Assoc {
    Left,
    Right,
    None,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
            BinOp::Pow => "**",
            BinOp::Eq => "=",
            BinOp::Neq => "!=",
            BinOp::Lt => "<",
            BinOp::Leq => "<=",
            BinOp::Gt => ">",
            BinOp::Geq => ">=",
            BinOp::And => "/\\",
            BinOp::Or => "\\/",
            BinOp::Implies => "->",
        }
    }

    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinOp::Implies => 1,
            BinOp::Or => 2,
            BinOp::And => 3,
            BinOp::Eq | BinOp::Neq | BinOp::Lt | BinOp::Leq | BinOp::Gt | BinOp::Geq => 5,
            BinOp::Add | BinOp::Sub => 6,
            BinOp::Mul | BinOp::Div | BinOp::Mod => 7,
            BinOp::Pow => 9,
        }
    }

    pub(crate) fn assoc(self) -> Assoc {
        match self {
            BinOp::Implies | BinOp::Pow => Assoc::Right,
            BinOp::Eq | BinOp::Neq | BinOp::Lt | BinOp::Leq | BinOp::Gt | BinOp::Geq => {
                Assoc::None
            }
            _ => Assoc::Left,
        }
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(
            self,
            BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Mod | BinOp::Pow
        )
    }

    pub fn is_logical(self) -> bool {
        matches!(self, BinOp::And | BinOp::Or | BinOp::Implies)
    }
}

pub(crate) const PREC_QUANTIFIER: u8 = 0;
pub(crate) const PREC_NOT: u8 = 4;
pub(crate) const PREC_NEG: u8 = 8;
pub(crate) const PREC_ATOM: u8 = 10;

/// Aggregate operators over a matrix of operands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AggregateOp {
    And,
    Or,
    Sum,
    Product,
}

impl AggregateOp {
    pub fn keyword(self) -> &'static str {
        match self {
            AggregateOp::And => "and",
            AggregateOp::Or => "or",
            AggregateOp::Sum => "sum",
            AggregateOp::Product => "product",
        }
    }

    /// The literal that can be dropped from the operands without changing the result.
    pub fn identity(self) -> Expr {
        match self {
            AggregateOp::And => Expr::boolean(true),
            AggregateOp::Or => Expr::boolean(false),
            AggregateOp::Sum => Expr::int(0),
            AggregateOp::Product => Expr::int(1),
        }
    }

    pub fn element_type(self) -> Type {
        match self {
            AggregateOp::And | AggregateOp::Or => Type::Bool,
            AggregateOp::Sum | AggregateOp::Product => Type::Int,
        }
    }

    /// Binary operator used when the operands are written out as a chain.
    pub fn binop(self) -> BinOp {
        match self {
            AggregateOp::And => BinOp::And,
            AggregateOp::Or => BinOp::Or,
            AggregateOp::Sum => BinOp::Add,
            AggregateOp::Product => BinOp::Mul,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuantifierKind {
    ForAll,
    Exists,
}

impl QuantifierKind {
    pub fn keyword(self) -> &'static str {
        match self {
            QuantifierKind::ForAll => "forAll",
            QuantifierKind::Exists => "exists",
        }
    }

    pub fn aggregate(self) -> AggregateOp {
        match self {
            QuantifierKind::ForAll => AggregateOp::And,
            QuantifierKind::Exists => AggregateOp::Or,
        }
    }
}

/// `lo..hi` with expression bounds. `hi` is absent only for parameter domains such as `int(1..)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeExpr {
    pub lo: Expr,
    pub hi: Option<Expr>,
}

impl RangeExpr {
    pub fn new(lo: Expr, hi: Expr) -> Self {
        RangeExpr { lo, hi: Some(hi) }
    }

    pub fn literal(r: IntRange) -> Self {
        RangeExpr::new(Expr::int(r.lo), Expr::int(r.hi))
    }

    /// The concrete interval, once both bounds are integer literals.
    pub fn to_range(&self) -> Result<IntRange> {
        let lo = literal_bound(&self.lo)?;
        let hi = match &self.hi {
            Some(hi) => literal_bound(hi)?,
            None => {
                return Err(Error::validation(
                    self.lo.span,
                    "unbounded domain is only allowed for parameters",
                ))
            }
        };
        Ok(IntRange::new(lo, hi))
    }
}

fn literal_bound(e: &Expr) -> Result<i64> {
    match e.kind {
        ExprKind::Int(v) => Ok(v),
        _ => Err(Error::validation(
            e.span,
            format!("domain bound `{e}` is not a constant; bind parameters first"),
        )),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Bool,
    Int(RangeExpr),
    Matrix {
        index: Vec<RangeExpr>,
        elem: Box<Domain>,
    },
}

impl Domain {
    pub fn ty(&self) -> Type {
        match self {
            Domain::Bool => Type::Bool,
            Domain::Int(_) => Type::Int,
            Domain::Matrix { index, elem } => Type::Matrix {
                elem: Box::new(elem.ty()),
                dims: index.len(),
            },
        }
    }

    pub fn int(r: IntRange) -> Self {
        Domain::Int(RangeExpr::literal(r))
    }

    pub(crate) fn bounds_mut(&mut self) -> Vec<&mut Expr> {
        let mut out = Vec::new();
        fn range<'a>(r: &'a mut RangeExpr, out: &mut Vec<&'a mut Expr>) {
            out.push(&mut r.lo);
            if let Some(hi) = r.hi.as_mut() {
                out.push(hi);
            }
        }
        match self {
            Domain::Bool => {}
            Domain::Int(r) => range(r, &mut out),
            Domain::Matrix { index, elem } => {
                for r in index.iter_mut() {
                    range(r, &mut out);
                }
                out.extend(elem.bounds_mut());
            }
        }
        out
    }

    pub(crate) fn bounds(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        fn range<'a>(r: &'a RangeExpr, out: &mut Vec<&'a Expr>) {
            out.push(&r.lo);
            if let Some(hi) = r.hi.as_ref() {
                out.push(hi);
            }
        }
        match self {
            Domain::Bool => {}
            Domain::Int(r) => range(r, &mut out),
            Domain::Matrix { index, elem } => {
                for r in index {
                    range(r, &mut out);
                }
                out.extend(elem.bounds());
            }
        }
        out
    }

    /// Range of the scalar values (the element domain for matrices); `None` for Booleans.
    pub fn scalar_range(&self) -> Result<Option<IntRange>> {
        match self {
            Domain::Bool => Ok(None),
            Domain::Int(r) => r.to_range().map(Some),
            Domain::Matrix { elem, .. } => elem.scalar_range(),
        }
    }
}

/// One induction variable with its domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub name: String,
    pub range: RangeExpr,
    pub span: Span,
}

impl Generator {
    pub fn new(name: impl Into<String>, range: IntRange) -> Self {
        Generator {
            name: name.into(),
            range: RangeExpr::literal(range),
            span: Span::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comprehension {
    pub return_expr: Expr,
    pub generators: Vec<Generator>,
    pub guards: Vec<Expr>,
}

impl Comprehension {
    pub fn induction_vars(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    /// Concrete generator ranges; fails if a bound still references a parameter.
    pub fn ranges(&self) -> Result<Vec<IntRange>> {
        self.generators.iter().map(|g| g.range.to_range()).collect()
    }
}

/// Operand of an aggregate or `allDiff`: either a matrix literal or a comprehension.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixArg {
    List(Vec<Expr>),
    Comprehension(Box<Comprehension>),
}

#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Int(i64),
    Bool(bool),
    Var(String),
    Index { base: String, indices: Vec<Expr> },
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Aggregate(AggregateOp, MatrixArg),
    AllDiff(MatrixArg),
    Quantifier {
        kind: QuantifierKind,
        vars: Vec<Generator>,
        body: Box<Expr>,
    },
}

impl From<ExprKind> for Expr {
    fn from(kind: ExprKind) -> Self {
        Expr {
            kind,
            span: Span::default(),
        }
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    pub fn int(v: i64) -> Self {
        ExprKind::Int(v).into()
    }

    pub fn boolean(v: bool) -> Self {
        ExprKind::Bool(v).into()
    }

    pub fn var(name: impl Into<String>) -> Self {
        ExprKind::Var(name.into()).into()
    }

    pub fn index(base: impl Into<String>, indices: Vec<Expr>) -> Self {
        ExprKind::Index {
            base: base.into(),
            indices,
        }
        .into()
    }

    pub fn bin(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)).into()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Self {
        ExprKind::Not(Box::new(e)).into()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Expr) -> Self {
        ExprKind::Neg(Box::new(e)).into()
    }

    pub fn aggregate_list(op: AggregateOp, items: Vec<Expr>) -> Self {
        ExprKind::Aggregate(op, MatrixArg::List(items)).into()
    }

    pub fn aggregate_comprehension(op: AggregateOp, c: Comprehension) -> Self {
        ExprKind::Aggregate(op, MatrixArg::Comprehension(Box::new(c))).into()
    }

    pub fn with_span(mut self, span: Span) -> Self {
        self.span = span;
        self
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self.kind {
            ExprKind::Bool(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self.kind {
            ExprKind::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self.kind, ExprKind::Int(_) | ExprKind::Bool(_))
    }

    /// Immediate sub-expressions, left to right. A comprehension contributes its
    /// return expression followed by its guards; domain bounds are not children.
    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Int(_) | ExprKind::Bool(_) | ExprKind::Var(_) => vec![],
            ExprKind::Index { indices, .. } => indices.iter().collect(),
            ExprKind::Neg(e) | ExprKind::Not(e) => vec![e],
            ExprKind::Bin(_, l, r) => vec![l, r],
            ExprKind::Aggregate(_, arg) | ExprKind::AllDiff(arg) => match arg {
                MatrixArg::List(items) => items.iter().collect(),
                MatrixArg::Comprehension(c) => {
                    std::iter::once(&c.return_expr).chain(c.guards.iter()).collect()
                }
            },
            ExprKind::Quantifier { body, .. } => vec![body],
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Expr> {
        match &mut self.kind {
            ExprKind::Int(_) | ExprKind::Bool(_) | ExprKind::Var(_) => vec![],
            ExprKind::Index { indices, .. } => indices.iter_mut().collect(),
            ExprKind::Neg(e) | ExprKind::Not(e) => vec![e],
            ExprKind::Bin(_, l, r) => vec![l, r],
            ExprKind::Aggregate(_, arg) | ExprKind::AllDiff(arg) => match arg {
                MatrixArg::List(items) => items.iter_mut().collect(),
                MatrixArg::Comprehension(c) => {
                    let c = &mut **c;
                    std::iter::once(&mut c.return_expr)
                        .chain(c.guards.iter_mut())
                        .collect()
                }
            },
            ExprKind::Quantifier { body, .. } => vec![body],
        }
    }

    /// Node at `path`, where each step is a child position.
    pub fn at(&self, path: &[usize]) -> Option<&Expr> {
        let mut cur = self;
        for &i in path {
            cur = cur.children().into_iter().nth(i)?;
        }
        Some(cur)
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Expr> {
        let mut cur = self;
        for &i in path {
            cur = cur.children_mut().into_iter().nth(i)?;
        }
        Some(cur)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    /// Pre-order visit of every node, descending into comprehension domains as well.
    pub fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match &self.kind {
            ExprKind::Aggregate(_, MatrixArg::Comprehension(c))
            | ExprKind::AllDiff(MatrixArg::Comprehension(c)) => {
                for g in &c.generators {
                    g.range.lo.visit(f);
                    if let Some(hi) = &g.range.hi {
                        hi.visit(f);
                    }
                }
            }
            ExprKind::Quantifier { vars, .. } => {
                for g in vars {
                    g.range.lo.visit(f);
                    if let Some(hi) = &g.range.hi {
                        hi.visit(f);
                    }
                }
            }
            _ => {}
        }
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Every name occurring in the tree (variables and indexed matrices), including bound ones.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| match &e.kind {
            ExprKind::Var(n) => {
                out.insert(n.clone());
            }
            ExprKind::Index { base, .. } => {
                out.insert(base.clone());
            }
            _ => {}
        });
        out
    }

    pub fn references(&self, pred: &impl Fn(&str) -> bool) -> bool {
        let mut found = false;
        self.visit(&mut |e| match &e.kind {
            ExprKind::Var(n) | ExprKind::Index { base: n, .. } if pred(n) => found = true,
            _ => {}
        });
        found
    }

    pub fn contains_comprehension(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            if matches!(
                e.kind,
                ExprKind::Aggregate(_, MatrixArg::Comprehension(_))
                    | ExprKind::AllDiff(MatrixArg::Comprehension(_))
                    | ExprKind::Quantifier { .. }
            ) {
                found = true;
            }
        });
        found
    }

    /// Replaces free occurrences of the given names by expressions. Comprehension and
    /// quantifier binders shadow outer names.
    pub fn substitute(&self, bindings: &HashMap<String, Expr>) -> Expr {
        if bindings.is_empty() {
            return self.clone();
        }
        let kind = match &self.kind {
            ExprKind::Var(n) => match bindings.get(n) {
                Some(v) => return v.clone(),
                None => ExprKind::Var(n.clone()),
            },
            ExprKind::Int(_) | ExprKind::Bool(_) => self.kind.clone(),
            ExprKind::Index { base, indices } => ExprKind::Index {
                base: base.clone(),
                indices: indices.iter().map(|i| i.substitute(bindings)).collect(),
            },
            ExprKind::Neg(e) => ExprKind::Neg(Box::new(e.substitute(bindings))),
            ExprKind::Not(e) => ExprKind::Not(Box::new(e.substitute(bindings))),
            ExprKind::Bin(op, l, r) => ExprKind::Bin(
                *op,
                Box::new(l.substitute(bindings)),
                Box::new(r.substitute(bindings)),
            ),
            ExprKind::Aggregate(op, arg) => {
                ExprKind::Aggregate(*op, substitute_arg(arg, bindings))
            }
            ExprKind::AllDiff(arg) => ExprKind::AllDiff(substitute_arg(arg, bindings)),
            ExprKind::Quantifier { kind, vars, body } => {
                let vars: Vec<Generator> =
                    vars.iter().map(|g| substitute_generator(g, bindings)).collect();
                let inner = shadowed(bindings, vars.iter().map(|g| g.name.as_str()));
                ExprKind::Quantifier {
                    kind: *kind,
                    body: Box::new(body.substitute(&inner)),
                    vars,
                }
            }
        };
        Expr::new(kind, self.span)
    }
}

fn shadowed<'a>(
    bindings: &HashMap<String, Expr>,
    names: impl Iterator<Item = &'a str>,
) -> HashMap<String, Expr> {
    let mut inner = bindings.clone();
    for n in names {
        inner.remove(n);
    }
    inner
}

fn substitute_generator(g: &Generator, bindings: &HashMap<String, Expr>) -> Generator {
    Generator {
        name: g.name.clone(),
        range: RangeExpr {
            lo: g.range.lo.substitute(bindings),
            hi: g.range.hi.as_ref().map(|h| h.substitute(bindings)),
        },
        span: g.span,
    }
}

fn substitute_arg(arg: &MatrixArg, bindings: &HashMap<String, Expr>) -> MatrixArg {
    match arg {
        MatrixArg::List(items) => {
            MatrixArg::List(items.iter().map(|i| i.substitute(bindings)).collect())
        }
        MatrixArg::Comprehension(c) => {
            let generators: Vec<Generator> = c
                .generators
                .iter()
                .map(|g| substitute_generator(g, bindings))
                .collect();
            let inner = shadowed(bindings, generators.iter().map(|g| g.name.as_str()));
            MatrixArg::Comprehension(Box::new(Comprehension {
                return_expr: c.return_expr.substitute(&inner),
                guards: c.guards.iter().map(|g| g.substitute(&inner)).collect(),
                generators,
            }))
        }
    }
}

pub type TypeEnv = HashMap<String, Type>;

/// Static type of `e`. Every name must be bound in `env`.
pub fn type_of(e: &Expr, env: &TypeEnv) -> Result<Type> {
    let expect = |t: &Type, want: &Type, at: &Expr| -> Result<()> {
        if t == want {
            Ok(())
        } else {
            Err(Error::type_error(
                at.span,
                format!("expected {want}, found {t} in `{at}`"),
            ))
        }
    };
    match &e.kind {
        ExprKind::Int(_) => Ok(Type::Int),
        ExprKind::Bool(_) => Ok(Type::Bool),
        ExprKind::Var(n) => env
            .get(n)
            .cloned()
            .ok_or_else(|| Error::validation(e.span, format!("unbound name `{n}`"))),
        ExprKind::Index { base, indices } => {
            let t = env
                .get(base)
                .ok_or_else(|| Error::validation(e.span, format!("unbound name `{base}`")))?;
            let Type::Matrix { elem, dims } = t else {
                return Err(Error::type_error(
                    e.span,
                    format!("`{base}` has type {t} and cannot be indexed"),
                ));
            };
            if *dims != indices.len() {
                return Err(Error::type_error(
                    e.span,
                    format!(
                        "`{base}` has {dims} index dimension(s) but {} were given",
                        indices.len()
                    ),
                ));
            }
            for i in indices {
                expect(&type_of(i, env)?, &Type::Int, i)?;
            }
            Ok((**elem).clone())
        }
        ExprKind::Neg(x) => {
            expect(&type_of(x, env)?, &Type::Int, x)?;
            Ok(Type::Int)
        }
        ExprKind::Not(x) => {
            expect(&type_of(x, env)?, &Type::Bool, x)?;
            Ok(Type::Bool)
        }
        ExprKind::Bin(op, l, r) => {
            let lt = type_of(l, env)?;
            let rt = type_of(r, env)?;
            match op {
                _ if op.is_arithmetic() => {
                    expect(&lt, &Type::Int, l)?;
                    expect(&rt, &Type::Int, r)?;
                    Ok(Type::Int)
                }
                _ if op.is_logical() => {
                    expect(&lt, &Type::Bool, l)?;
                    expect(&rt, &Type::Bool, r)?;
                    Ok(Type::Bool)
                }
                BinOp::Eq | BinOp::Neq => {
                    if matches!(lt, Type::Matrix { .. }) {
                        return Err(Error::type_error(
                            e.span,
                            "matrices cannot be compared for equality",
                        ));
                    }
                    expect(&rt, &lt, r)?;
                    Ok(Type::Bool)
                }
                _ => {
                    expect(&lt, &Type::Int, l)?;
                    expect(&rt, &Type::Int, r)?;
                    Ok(Type::Bool)
                }
            }
        }
        ExprKind::Aggregate(op, arg) => {
            check_matrix_arg(arg, &op.element_type(), env)?;
            Ok(op.element_type())
        }
        ExprKind::AllDiff(arg) => {
            check_matrix_arg(arg, &Type::Int, env)?;
            Ok(Type::Bool)
        }
        ExprKind::Quantifier { vars, body, .. } => {
            let mut inner = env.clone();
            for g in vars {
                check_range(&g.range, env)?;
                inner.insert(g.name.clone(), Type::Int);
            }
            expect(&type_of(body, &inner)?, &Type::Bool, body)?;
            Ok(Type::Bool)
        }
    }
}

fn check_range(r: &RangeExpr, env: &TypeEnv) -> Result<()> {
    for b in std::iter::once(&r.lo).chain(r.hi.iter()) {
        let t = type_of(b, env)?;
        if t != Type::Int {
            return Err(Error::type_error(
                b.span,
                format!("domain bound must be int, found {t}"),
            ));
        }
    }
    Ok(())
}

fn check_matrix_arg(arg: &MatrixArg, elem: &Type, env: &TypeEnv) -> Result<()> {
    match arg {
        MatrixArg::List(items) => {
            for i in items {
                let t = type_of(i, env)?;
                if &t != elem {
                    return Err(Error::type_error(
                        i.span,
                        format!("expected {elem}, found {t} in `{i}`"),
                    ));
                }
            }
            Ok(())
        }
        MatrixArg::Comprehension(c) => {
            let mut inner = env.clone();
            for g in &c.generators {
                check_range(&g.range, env)?;
                inner.insert(g.name.clone(), Type::Int);
            }
            for g in &c.guards {
                let t = type_of(g, &inner)?;
                if t != Type::Bool {
                    return Err(Error::type_error(
                        g.span,
                        format!("comprehension guard `{g}` must be bool, found {t}"),
                    ));
                }
            }
            let t = type_of(&c.return_expr, &inner)?;
            if &t != elem {
                return Err(Error::type_error(
                    c.return_expr.span,
                    format!("expected {elem}, found {t} in `{}`", c.return_expr),
                ));
            }
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub name: String,
    pub domain: Domain,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constant {
    pub name: String,
    pub value: Expr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecisionVar {
    pub name: String,
    pub domain: Domain,
    pub span: Span,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Model {
    pub params: Vec<Param>,
    pub constants: Vec<Constant>,
    pub decision_vars: Vec<DecisionVar>,
    pub constraints: Vec<Expr>,
}

impl Model {
    pub fn decision_var(&self, name: &str) -> Option<&DecisionVar> {
        self.decision_vars.iter().find(|d| d.name == name)
    }

    /// Types of every declared name. Constants are typed through their value.
    pub fn type_env(&self) -> Result<TypeEnv> {
        let mut env = TypeEnv::new();
        for p in &self.params {
            env.insert(p.name.clone(), p.domain.ty());
        }
        for c in &self.constants {
            let t = type_of(&c.value, &env)?;
            env.insert(c.name.clone(), t);
        }
        for d in &self.decision_vars {
            env.insert(d.name.clone(), d.domain.ty());
        }
        Ok(env)
    }
}
