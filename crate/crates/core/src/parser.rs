//! Recursive-descent parser for model and parameter files, plus model validation
//! and parameter binding.
//!
//! Operator precedence, loosest first: quantifiers, `->` (right), `\/`, `/\`,
//! `!`, comparisons (non-associative), `+ -`, `* / %`, unary `-`, `**` (right).

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::ast::{
    AggregateOp, BinOp, Comprehension, Constant, DecisionVar, Domain, Expr, ExprKind, Generator,
    MatrixArg, Model, Param, QuantifierKind, RangeExpr,
};
use crate::error::{Error, Result, Span};
use crate::eval::{eval_static, Value};
use crate::lexer::{tokenize, Tok, Token};

const KEYWORDS: &[&str] = &[
    "given", "letting", "find", "such", "that", "be", "and", "or", "sum", "product", "allDiff",
    "forAll", "exists", "true", "false", "int", "bool", "matrix", "indexed", "by", "of",
];

/// Parameter values keyed by name.
pub type Bindings = BTreeMap<String, i64>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].span.end
        }
    }

    fn span_from(&self, start: Span) -> Span {
        Span::new(start.line, start.col, start.start, self.prev_end())
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<()> {
        if self.at_kw(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn unexpected(&self, what: &str) -> Error {
        Error::syntax(
            self.span(),
            format!("expected {what}, found {}", self.peek().describe()),
        )
    }

    fn ident(&mut self) -> Result<(String, Span)> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok((s, span))
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    /// A name being declared; the `__` prefix is reserved for generated names.
    fn binder(&mut self) -> Result<(String, Span)> {
        let (s, span) = self.ident()?;
        if s.starts_with("__") {
            return Err(Error::syntax(
                span,
                format!("`{s}`: names starting with `__` are reserved"),
            ));
        }
        Ok((s, span))
    }

    fn ident_list(&mut self) -> Result<Vec<(String, Span)>> {
        let mut names = vec![self.binder()?];
        while self.eat(&Tok::Comma) {
            names.push(self.binder()?);
        }
        Ok(names)
    }

    // ---- declarations ----

    fn model(&mut self) -> Result<Model> {
        let mut m = Model::default();
        loop {
            if self.at(&Tok::Eof) {
                return Ok(m);
            }
            if self.at_kw("given") {
                self.bump();
                let names = self.ident_list()?;
                self.expect(&Tok::Colon, "`:`")?;
                let domain = self.domain(true)?;
                for (name, span) in names {
                    m.params.push(Param {
                        name,
                        domain: domain.clone(),
                        span,
                    });
                }
            } else if self.at_kw("letting") {
                self.bump();
                let (name, span) = self.binder()?;
                if !self.eat(&Tok::Eq) {
                    self.expect_kw("be")?;
                }
                let value = self.expr()?;
                m.constants.push(Constant { name, value, span });
            } else if self.at_kw("find") {
                self.bump();
                let names = self.ident_list()?;
                self.expect(&Tok::Colon, "`:`")?;
                let domain = self.domain(false)?;
                for (name, span) in names {
                    m.decision_vars.push(DecisionVar {
                        name,
                        domain: domain.clone(),
                        span,
                    });
                }
            } else if self.at_kw("such") {
                self.bump();
                self.expect_kw("that")?;
                m.constraints.push(self.expr()?);
                while self.eat(&Tok::Comma) {
                    m.constraints.push(self.expr()?);
                }
            } else {
                return Err(self.unexpected("`given`, `letting`, `find` or `such that`"));
            }
        }
    }

    fn range(&mut self, allow_open: bool) -> Result<RangeExpr> {
        let lo = self.expr()?;
        self.expect(&Tok::DotDot, "`..`")?;
        if self.at(&Tok::RParen) {
            if !allow_open {
                return Err(Error::syntax(
                    self.span(),
                    "unbounded domains are only allowed for parameters",
                ));
            }
            return Ok(RangeExpr { lo, hi: None });
        }
        let hi = self.expr()?;
        Ok(RangeExpr::new(lo, hi))
    }

    fn int_domain(&mut self, allow_open: bool) -> Result<RangeExpr> {
        self.expect_kw("int")?;
        self.expect(&Tok::LParen, "`(`")?;
        let r = self.range(allow_open)?;
        self.expect(&Tok::RParen, "`)`")?;
        Ok(r)
    }

    fn domain(&mut self, allow_open: bool) -> Result<Domain> {
        if self.at_kw("bool") {
            self.bump();
            return Ok(Domain::Bool);
        }
        if self.at_kw("int") {
            return Ok(Domain::Int(self.int_domain(allow_open)?));
        }
        if self.at_kw("matrix") {
            self.bump();
            self.expect_kw("indexed")?;
            self.expect_kw("by")?;
            self.expect(&Tok::LBracket, "`[`")?;
            let mut index = vec![self.int_domain(false)?];
            while self.eat(&Tok::Comma) {
                index.push(self.int_domain(false)?);
            }
            self.expect(&Tok::RBracket, "`]`")?;
            self.expect_kw("of")?;
            let start = self.span();
            let elem = self.domain(false)?;
            if matches!(elem, Domain::Matrix { .. }) {
                return Err(Error::syntax(start, "nested matrix domains are not supported"));
            }
            return Ok(Domain::Matrix {
                index,
                elem: Box::new(elem),
            });
        }
        Err(self.unexpected("a domain (`bool`, `int(..)` or `matrix indexed by`)"))
    }

    // ---- expressions ----

    fn expr(&mut self) -> Result<Expr> {
        let start = self.span();
        let kind = if self.at_kw("forAll") {
            Some(QuantifierKind::ForAll)
        } else if self.at_kw("exists") {
            Some(QuantifierKind::Exists)
        } else {
            None
        };
        if let Some(kind) = kind {
            self.bump();
            let mut vars = Vec::new();
            loop {
                let names = self.ident_list()?;
                self.expect(&Tok::Colon, "`:`")?;
                let range = self.int_domain(false)?;
                for (name, span) in names {
                    vars.push(Generator {
                        name,
                        range: range.clone(),
                        span,
                    });
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::Dot, "`.`")?;
            let body = self.expr()?;
            return Ok(Expr::new(
                ExprKind::Quantifier {
                    kind,
                    vars,
                    body: Box::new(body),
                },
                self.span_from(start),
            ));
        }
        self.implies()
    }

    fn implies(&mut self) -> Result<Expr> {
        let start = self.span();
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = if self.at_kw("forAll") || self.at_kw("exists") {
                self.expr()?
            } else {
                self.implies()?
            };
            return Ok(self.bin(BinOp::Implies, lhs, rhs, start));
        }
        Ok(lhs)
    }

    fn bin(&self, op: BinOp, l: Expr, r: Expr, start: Span) -> Expr {
        Expr::new(
            ExprKind::Bin(op, Box::new(l), Box::new(r)),
            self.span_from(start),
        )
    }

    fn or(&mut self) -> Result<Expr> {
        let start = self.span();
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = self.bin(BinOp::Or, lhs, rhs, start);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr> {
        let start = self.span();
        let mut lhs = self.not()?;
        while self.eat(&Tok::And) {
            let rhs = self.not()?;
            lhs = self.bin(BinOp::And, lhs, rhs, start);
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Expr> {
        let start = self.span();
        if self.eat(&Tok::Bang) {
            let inner = self.not()?;
            return Ok(Expr::new(
                ExprKind::Not(Box::new(inner)),
                self.span_from(start),
            ));
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Expr> {
        let start = self.span();
        let lhs = self.additive()?;
        let Some(op) = comparison_op(self.peek()) else {
            return Ok(lhs);
        };
        self.bump();
        let rhs = self.additive()?;
        if comparison_op(self.peek()).is_some() {
            return Err(Error::syntax(
                self.span(),
                "comparison operators are non-associative; add parentheses",
            ));
        }
        Ok(self.bin(op, lhs, rhs, start))
    }

    fn additive(&mut self) -> Result<Expr> {
        let start = self.span();
        let mut lhs = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.multiplicative()?;
            lhs = self.bin(op, lhs, rhs, start);
        }
    }

    fn multiplicative(&mut self) -> Result<Expr> {
        let start = self.span();
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                Tok::Percent => BinOp::Mod,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = self.bin(op, lhs, rhs, start);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        let start = self.span();
        if self.at(&Tok::Minus) {
            // `-` directly followed by a literal is a negative literal, an atom.
            if let Tok::Int(v) = *self.peek_at(1) {
                self.bump();
                self.bump();
                let value = 0i64.checked_sub_unsigned(v).ok_or_else(|| {
                    Error::syntax(start, format!("integer literal `-{v}` is too large"))
                })?;
                let lit = Expr::new(ExprKind::Int(value), self.span_from(start));
                return self.power_tail(lit, start);
            }
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::new(
                ExprKind::Neg(Box::new(inner)),
                self.span_from(start),
            ));
        }
        let base = self.primary()?;
        self.power_tail(base, start)
    }

    fn power_tail(&mut self, base: Expr, start: Span) -> Result<Expr> {
        if self.eat(&Tok::StarStar) {
            let exp = self.unary()?;
            return Ok(self.bin(BinOp::Pow, base, exp, start));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                let v = i64::try_from(v).map_err(|_| {
                    Error::syntax(start, format!("integer literal `{v}` is too large"))
                })?;
                Ok(Expr::new(ExprKind::Int(v), start))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(s) => match s.as_str() {
                "true" | "false" => {
                    self.bump();
                    Ok(Expr::new(ExprKind::Bool(s == "true"), start))
                }
                "and" | "or" | "sum" | "product" | "allDiff" => {
                    self.bump();
                    self.expect(&Tok::LParen, "`(`")?;
                    let arg = self.matrix_arg()?;
                    self.expect(&Tok::RParen, "`)`")?;
                    let kind = match s.as_str() {
                        "and" => ExprKind::Aggregate(AggregateOp::And, arg),
                        "or" => ExprKind::Aggregate(AggregateOp::Or, arg),
                        "sum" => ExprKind::Aggregate(AggregateOp::Sum, arg),
                        "product" => ExprKind::Aggregate(AggregateOp::Product, arg),
                        _ => ExprKind::AllDiff(arg),
                    };
                    Ok(Expr::new(kind, self.span_from(start)))
                }
                _ => {
                    let (name, _) = self.ident()?;
                    if self.eat(&Tok::LBracket) {
                        let mut indices = vec![self.expr()?];
                        while self.eat(&Tok::Comma) {
                            indices.push(self.expr()?);
                        }
                        self.expect(&Tok::RBracket, "`]`")?;
                        return Ok(Expr::new(
                            ExprKind::Index {
                                base: name,
                                indices,
                            },
                            self.span_from(start),
                        ));
                    }
                    Ok(Expr::new(ExprKind::Var(name), start))
                }
            },
            Tok::LBracket => Err(Error::syntax(
                start,
                "a matrix may only appear as the argument of and/or/sum/product/allDiff",
            )),
            _ => Err(self.unexpected("an expression")),
        }
    }

    /// `[e1, e2, ...]` or `[e | i: int(a..b), guard, ...]`.
    fn matrix_arg(&mut self) -> Result<MatrixArg> {
        self.expect(&Tok::LBracket, "`[`")?;
        if self.eat(&Tok::RBracket) {
            return Ok(MatrixArg::List(vec![]));
        }
        let first = self.expr()?;
        if self.eat(&Tok::Bar) {
            let mut generators = Vec::new();
            let mut guards = Vec::new();
            loop {
                if self.at_generator_group() {
                    let names = self.ident_list()?;
                    self.expect(&Tok::Colon, "`:`")?;
                    let range = self.int_domain(false)?;
                    for (name, span) in names {
                        generators.push(Generator {
                            name,
                            range: range.clone(),
                            span,
                        });
                    }
                } else {
                    guards.push(self.expr()?);
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RBracket, "`]`")?;
            if generators.is_empty() {
                return Err(Error::syntax(
                    first.span,
                    "comprehension needs at least one generator",
                ));
            }
            return Ok(MatrixArg::Comprehension(Box::new(Comprehension {
                return_expr: first,
                generators,
                guards,
            })));
        }
        let mut items = vec![first];
        while self.eat(&Tok::Comma) {
            items.push(self.expr()?);
        }
        self.expect(&Tok::RBracket, "`]`")?;
        Ok(MatrixArg::List(items))
    }

    /// Lookahead for `a, b, c :` at the current position.
    fn at_generator_group(&self) -> bool {
        let mut k = 0;
        loop {
            match self.peek_at(k) {
                Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {}
                _ => return false,
            }
            match self.peek_at(k + 1) {
                Tok::Colon => return true,
                Tok::Comma => k += 2,
                _ => return false,
            }
        }
    }
}

fn comparison_op(t: &Tok) -> Option<BinOp> {
    Some(match t {
        Tok::Eq => BinOp::Eq,
        Tok::Neq => BinOp::Neq,
        Tok::Lt => BinOp::Lt,
        Tok::Leq => BinOp::Leq,
        Tok::Gt => BinOp::Gt,
        Tok::Geq => BinOp::Geq,
        _ => return None,
    })
}

/// Parses a single expression (used by tests and tools).
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if !p.at(&Tok::Eof) {
        return Err(p.unexpected("end of input"));
    }
    Ok(e)
}

/// Parses and validates a model file.
pub fn parse_model(text: &str) -> Result<Model> {
    let mut p = Parser::new(text)?;
    let m = p.model()?;
    validate(&m)?;
    Ok(m)
}

/// Structural and type checks: unique names, scoping, static guards, no nesting.
pub fn validate(m: &Model) -> Result<()> {
    let mut seen: HashMap<&str, Span> = HashMap::new();
    let decls = m
        .params
        .iter()
        .map(|p| (p.name.as_str(), p.span))
        .chain(m.constants.iter().map(|c| (c.name.as_str(), c.span)))
        .chain(m.decision_vars.iter().map(|d| (d.name.as_str(), d.span)));
    for (name, span) in decls {
        if let Some(prev) = seen.insert(name, span) {
            return Err(Error::validation(
                span,
                format!("`{name}` is declared twice (first at {prev})"),
            ));
        }
    }
    let model_names: HashSet<&str> = seen.keys().copied().collect();
    let decision: HashSet<&str> = m.decision_vars.iter().map(|d| d.name.as_str()).collect();

    // Params and constants only see earlier declarations; decision domains see params and constants.
    let mut env = crate::ast::TypeEnv::new();
    for p in &m.params {
        for b in p.domain.bounds() {
            check_bound(b, &env)?;
        }
        env.insert(p.name.clone(), p.domain.ty());
    }
    for c in &m.constants {
        check_structure(&c.value, &model_names, &decision, false)?;
        let t = crate::ast::type_of(&c.value, &env)?;
        if matches!(t, crate::ast::Type::Matrix { .. }) {
            return Err(Error::type_error(c.value.span, "constants must be scalars"));
        }
        env.insert(c.name.clone(), t);
    }
    for d in &m.decision_vars {
        for b in d.domain.bounds() {
            check_bound(b, &env)?;
        }
    }
    for d in &m.decision_vars {
        env.insert(d.name.clone(), d.domain.ty());
    }
    for c in &m.constraints {
        check_structure(c, &model_names, &decision, false)?;
        let t = crate::ast::type_of(c, &env)?;
        if t != crate::ast::Type::Bool {
            return Err(Error::type_error(
                c.span,
                format!("constraint must be bool, found {t}"),
            ));
        }
    }
    Ok(())
}

fn check_bound(b: &Expr, env: &crate::ast::TypeEnv) -> Result<()> {
    let t = crate::ast::type_of(b, env)?;
    if t != crate::ast::Type::Int {
        return Err(Error::type_error(b.span, "domain bounds must be int"));
    }
    Ok(())
}

fn check_structure(
    e: &Expr,
    model_names: &HashSet<&str>,
    decision: &HashSet<&str>,
    inside: bool,
) -> Result<()> {
    let binders: Option<(&[Generator], &[Expr])> = match &e.kind {
        ExprKind::Aggregate(_, MatrixArg::Comprehension(c))
        | ExprKind::AllDiff(MatrixArg::Comprehension(c)) => {
            Some((&c.generators[..], &c.guards[..]))
        }
        ExprKind::Quantifier { vars, .. } => Some((&vars[..], &[][..])),
        _ => None,
    };
    let mut inside = inside;
    if let Some((generators, guards)) = binders {
        if inside {
            return Err(Error::validation(
                e.span,
                "nested comprehensions and quantifiers are not supported",
            ));
        }
        inside = true;
        let mut names = HashSet::new();
        for g in generators {
            if !names.insert(g.name.as_str()) {
                return Err(Error::validation(
                    g.span,
                    format!("induction variable `{}` is bound twice", g.name),
                ));
            }
            if model_names.contains(g.name.as_str()) {
                return Err(Error::validation(
                    g.span,
                    format!(
                        "induction variable `{}` shadows a model declaration",
                        g.name
                    ),
                ));
            }
            let mut bounds = vec![&g.range.lo];
            bounds.extend(g.range.hi.iter());
            for b in bounds {
                if b.references(&|n| decision.contains(n)) {
                    return Err(Error::validation(
                        b.span,
                        "generator domains must not depend on decision variables",
                    ));
                }
            }
        }
        for g in guards {
            if g.references(&|n| decision.contains(n)) {
                return Err(Error::validation(
                    g.span,
                    format!("comprehension guard `{g}` is dynamic; guards must be static"),
                ));
            }
        }
    }
    for c in e.children() {
        check_structure(c, model_names, decision, inside)?;
    }
    Ok(())
}

/// Parses `letting NAME be INT` lines and checks them against the model's `given`s.
pub fn parse_params(text: &str, model: &Model) -> Result<Bindings> {
    let mut p = Parser::new(text)?;
    let mut out = Bindings::new();
    while !p.at(&Tok::Eof) {
        p.expect_kw("letting")?;
        let (name, span) = p.ident()?;
        if !p.eat(&Tok::Eq) {
            p.expect_kw("be")?;
        }
        let value = p.expr()?;
        let Some(param) = model.params.iter().find(|q| q.name == name) else {
            return Err(Error::UnknownParam { span, name });
        };
        let v = match eval_static(&value, &HashMap::new())? {
            Value::Int(v) => v,
            other => {
                return Err(Error::type_error(
                    value.span,
                    format!(
                        "parameter `{name}` has domain {}, found {}",
                        param.domain,
                        other.type_name()
                    ),
                ))
            }
        };
        out.insert(name, v);
    }
    Ok(out)
}

/// Substitutes parameter values and constants into the model and folds every domain
/// bound to a literal.
pub fn bind_params(m: &Model, bindings: &Bindings) -> Result<Model> {
    for name in bindings.keys() {
        if !m.params.iter().any(|p| &p.name == name) {
            return Err(Error::UnknownParam {
                span: Span::default(),
                name: name.clone(),
            });
        }
    }
    let mut values: HashMap<String, Value> = HashMap::new();
    let mut subst: HashMap<String, Expr> = HashMap::new();
    for p in &m.params {
        let v = *bindings
            .get(&p.name)
            .ok_or_else(|| Error::MissingParam(p.name.clone()))?;
        if let Domain::Int(r) = &p.domain {
            let lo = eval_int(&r.lo.substitute(&subst))?;
            let hi = match &r.hi {
                Some(hi) => Some(eval_int(&hi.substitute(&subst))?),
                None => None,
            };
            if v < lo || hi.is_some_and(|hi| v > hi) {
                return Err(Error::DomainViolation {
                    name: p.name.clone(),
                    value: v.to_string(),
                    domain: p.domain.to_string(),
                });
            }
        }
        values.insert(p.name.clone(), Value::Int(v));
        subst.insert(p.name.clone(), Expr::int(v));
    }
    let mut constants = Vec::new();
    for c in &m.constants {
        let v = eval_static(&c.value, &values)?;
        let lit = v.to_expr().ok_or_else(|| {
            Error::type_error(c.value.span, "constants must be scalars")
        })?;
        values.insert(c.name.clone(), v);
        subst.insert(c.name.clone(), lit.clone());
        constants.push(Constant {
            name: c.name.clone(),
            value: lit.with_span(c.value.span),
            span: c.span,
        });
    }

    let mut decision_vars = Vec::new();
    for d in &m.decision_vars {
        let mut domain = d.domain.clone();
        for b in domain.bounds_mut() {
            *b = Expr::int(eval_int(&b.substitute(&subst))?).with_span(b.span);
        }
        check_finite(&domain, &d.name)?;
        decision_vars.push(DecisionVar {
            name: d.name.clone(),
            domain,
            span: d.span,
        });
    }

    let constraints = m
        .constraints
        .iter()
        .map(|c| fold_generator_bounds(&c.substitute(&subst)))
        .collect::<Result<Vec<_>>>()?;

    Ok(Model {
        params: m.params.clone(),
        constants,
        decision_vars,
        constraints,
    })
}

fn check_finite(d: &Domain, name: &str) -> Result<()> {
    match d {
        Domain::Bool => Ok(()),
        Domain::Int(r) => r.to_range().map(|_| ()).map_err(|_| {
            Error::validation(r.lo.span, format!("decision variable `{name}` needs a finite domain"))
        }),
        Domain::Matrix { index, elem } => {
            for r in index {
                r.to_range()?;
            }
            check_finite(elem, name)
        }
    }
}

fn eval_int(e: &Expr) -> Result<i64> {
    match eval_static(e, &HashMap::new())? {
        Value::Int(v) => Ok(v),
        other => Err(Error::type_error(
            e.span,
            format!("expected int, found {}", other.type_name()),
        )),
    }
}

fn fold_range(r: &RangeExpr) -> Result<RangeExpr> {
    let lo = Expr::int(eval_int(&r.lo)?).with_span(r.lo.span);
    let hi = match &r.hi {
        Some(hi) => Some(Expr::int(eval_int(hi)?).with_span(hi.span)),
        None => None,
    };
    Ok(RangeExpr { lo, hi })
}

/// Folds the (now ground) bounds of comprehension and quantifier domains to literals.
fn fold_generator_bounds(e: &Expr) -> Result<Expr> {
    let mut out = e.clone();
    fold_in_place(&mut out)?;
    Ok(out)
}

fn fold_in_place(e: &mut Expr) -> Result<()> {
    match &mut e.kind {
        ExprKind::Aggregate(_, MatrixArg::Comprehension(c))
        | ExprKind::AllDiff(MatrixArg::Comprehension(c)) => {
            for g in c.generators.iter_mut() {
                g.range = fold_range(&g.range)?;
            }
        }
        ExprKind::Quantifier { vars, .. } => {
            for g in vars.iter_mut() {
                g.range = fold_range(&g.range)?;
            }
        }
        _ => {}
    }
    for c in e.children_mut() {
        fold_in_place(c)?;
    }
    Ok(())
}
