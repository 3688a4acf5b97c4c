//! All-solutions search over generator models.
//!
//! Branching variables are assigned depth-first in order with ascending values,
//! so solutions come out in lexicographic order. Constraints are split at
//! top-level conjunctions; a dummy-free piece is checked as soon as its last
//! branching variable is assigned. At such a level the domain is bisected and
//! halves on which interval evaluation shows the piece false everywhere are
//! skipped. Pieces mentioning dummies are decided once all branching variables
//! have values.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use crate::ast::{AggregateOp, BinOp, Expr, ExprKind, IntRange, MatrixArg};
use crate::error::{Error, EvalError, Result};
use crate::eval::{arith, floor_div, simplify, Env, Value};
use crate::genmodel::{GeneratorModel, VarDomain};

/// Values of the branching variables for one solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub values: Vec<(String, i64)>,
}

impl Assignment {
    pub fn get(&self, name: &str) -> Option<i64> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (n, v)) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}={v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Check each piece as soon as its variables are assigned, with interval pruning.
    #[default]
    Eager,
    /// Check everything once all branching variables are assigned.
    AtLeaves,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveOptions {
    pub strategy: Strategy,
    pub deadline: Option<Instant>,
}

pub fn solve_all(g: &GeneratorModel) -> Result<Vec<Assignment>> {
    solve_with(g, &SolveOptions::default())
}

/// Same solutions as [`solve_all`], with every check postponed to the leaves.
pub fn solve_all_at_leaves(g: &GeneratorModel) -> Result<Vec<Assignment>> {
    solve_with(
        g,
        &SolveOptions {
            strategy: Strategy::AtLeaves,
            deadline: None,
        },
    )
}

pub fn solve_with(g: &GeneratorModel, opts: &SolveOptions) -> Result<Vec<Assignment>> {
    let mut out = Vec::new();
    for_each_solution(g, opts, &mut |vals| {
        out.push(Assignment {
            values: g.branching.iter().cloned().zip(vals.iter().copied()).collect(),
        });
        Ok(())
    })?;
    Ok(out)
}

pub fn count_solutions(g: &GeneratorModel) -> Result<u64> {
    let mut n = 0u64;
    for_each_solution(g, &SolveOptions::default(), &mut |_| {
        n += 1;
        Ok(())
    })?;
    Ok(n)
}

/// Calls `f` with the branching values of each solution, in lexicographic order.
pub fn for_each_solution(
    g: &GeneratorModel,
    opts: &SolveOptions,
    f: &mut dyn FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    let problem = Problem::compile(g, opts.strategy)?;
    let mut search = Search {
        p: &problem,
        vals: vec![0; problem.slots.len()],
        ivals: problem.domains.clone(),
        deferred: 0,
        ticks: 0,
        deadline: opts.deadline,
        emit: f,
    };
    if problem.domains[..problem.nb].iter().any(|d| d.is_empty()) {
        return Ok(());
    }
    search.level(0)
}

/// Splits a constraint into conjuncts, pushing negation through `!`, `\/` and `->`.
pub fn split_conjuncts(e: &Expr) -> Vec<Expr> {
    fn go(e: &Expr, neg: bool, out: &mut Vec<Expr>) {
        match (&e.kind, neg) {
            (ExprKind::Not(x), _) => go(x, !neg, out),
            (ExprKind::Bin(BinOp::And, l, r), false) | (ExprKind::Bin(BinOp::Or, l, r), true) => {
                go(l, neg, out);
                go(r, neg, out);
            }
            (ExprKind::Bin(BinOp::Implies, l, r), true) => {
                go(l, false, out);
                go(r, true, out);
            }
            (ExprKind::Aggregate(AggregateOp::And, MatrixArg::List(items)), false)
            | (ExprKind::Aggregate(AggregateOp::Or, MatrixArg::List(items)), true) => {
                for i in items {
                    go(i, neg, out);
                }
            }
            _ => out.push(if neg { Expr::not(e.clone()) } else { e.clone() }),
        }
    }
    let mut out = Vec::new();
    go(e, false, &mut out);
    out
}

/// Constraint compiled to operate on variable slots. Booleans are 0 and 1.
#[derive(Clone, Debug)]
enum C {
    Lit(i64),
    Slot(usize),
    Not(Box<C>),
    Neg(Box<C>),
    Bin(BinOp, Box<C>, Box<C>),
    Agg(AggregateOp, Vec<C>),
    AllDiff(Vec<C>),
}

fn compile(e: &Expr, slots: &HashMap<&str, usize>) -> Result<C> {
    let list = |items: &[Expr]| -> Result<Vec<C>> {
        items.iter().map(|i| compile(i, slots)).collect()
    };
    Ok(match &e.kind {
        ExprKind::Int(v) => C::Lit(*v),
        ExprKind::Bool(b) => C::Lit(i64::from(*b)),
        ExprKind::Var(n) => C::Slot(*slots.get(n.as_str()).ok_or_else(|| {
            Error::Internal(format!("generator model mentions unknown name `{n}`"))
        })?),
        ExprKind::Not(x) => C::Not(Box::new(compile(x, slots)?)),
        ExprKind::Neg(x) => C::Neg(Box::new(compile(x, slots)?)),
        ExprKind::Bin(op, l, r) => C::Bin(
            *op,
            Box::new(compile(l, slots)?),
            Box::new(compile(r, slots)?),
        ),
        ExprKind::Aggregate(op, MatrixArg::List(items)) => C::Agg(*op, list(items)?),
        ExprKind::AllDiff(MatrixArg::List(items)) => C::AllDiff(list(items)?),
        _ => {
            return Err(Error::Internal(format!(
                "unsupported expression in generator model: `{e}`"
            )))
        }
    })
}

fn eval(c: &C, vals: &[i64]) -> Result<i64, EvalError> {
    Ok(match c {
        C::Lit(v) => *v,
        C::Slot(s) => vals[*s],
        C::Not(x) => 1 - eval(x, vals)?,
        C::Neg(x) => eval(x, vals)?.checked_neg().ok_or(EvalError::Overflow)?,
        C::Bin(op, l, r) => {
            let a = eval(l, vals)?;
            match (op, a) {
                (BinOp::And, 0) => return Ok(0),
                (BinOp::Or, 1) => return Ok(1),
                (BinOp::Implies, 0) => return Ok(1),
                _ => {}
            }
            let b = eval(r, vals)?;
            match op {
                BinOp::And | BinOp::Or => b,
                BinOp::Implies => b,
                BinOp::Eq => i64::from(a == b),
                BinOp::Neq => i64::from(a != b),
                BinOp::Lt => i64::from(a < b),
                BinOp::Leq => i64::from(a <= b),
                BinOp::Gt => i64::from(a > b),
                BinOp::Geq => i64::from(a >= b),
                _ => arith(*op, a, b)?,
            }
        }
        C::Agg(op, items) => {
            let mut acc: i64 = match op {
                AggregateOp::And | AggregateOp::Product => 1,
                AggregateOp::Or | AggregateOp::Sum => 0,
            };
            for i in items {
                let v = eval(i, vals)?;
                match op {
                    AggregateOp::And if v == 0 => return Ok(0),
                    AggregateOp::Or if v == 1 => return Ok(1),
                    AggregateOp::And | AggregateOp::Or => {}
                    _ => acc = arith(op.binop(), acc, v)?,
                }
            }
            acc
        }
        C::AllDiff(items) => {
            let mut seen = Vec::with_capacity(items.len());
            for i in items {
                seen.push(eval(i, vals)?);
            }
            seen.sort_unstable();
            i64::from(seen.windows(2).all(|w| w[0] != w[1]))
        }
    })
}

const FALSE: IntRange = IntRange { lo: 0, hi: 0 };
const TRUE: IntRange = IntRange { lo: 1, hi: 1 };
const UNKNOWN: IntRange = IntRange { lo: 0, hi: 1 };

fn point(r: IntRange) -> Option<i64> {
    (r.lo == r.hi).then_some(r.lo)
}

/// Interval enclosure of `c` over the boxes in `doms`; `None` when some point of
/// the box might raise an evaluation error. Booleans are sub-intervals of 0..1.
fn ieval(c: &C, doms: &[IntRange]) -> Option<IntRange> {
    Some(match c {
        C::Lit(v) => IntRange::new(*v, *v),
        C::Slot(s) => doms[*s],
        C::Not(x) => {
            let r = ieval(x, doms)?;
            IntRange::new(1 - r.hi, 1 - r.lo)
        }
        C::Neg(x) => {
            let r = ieval(x, doms)?;
            IntRange::new(r.hi.checked_neg()?, r.lo.checked_neg()?)
        }
        C::Bin(op, l, r) => {
            let a = ieval(l, doms);
            match (op, a) {
                (BinOp::And, Some(FALSE)) => return Some(FALSE),
                (BinOp::Or, Some(TRUE)) => return Some(TRUE),
                (BinOp::Implies, Some(FALSE)) => return Some(TRUE),
                (BinOp::And, Some(TRUE)) | (BinOp::Or, Some(FALSE)) => return ieval(r, doms),
                (BinOp::Implies, Some(TRUE)) => return ieval(r, doms),
                _ => {}
            }
            let a = a?;
            let b = ieval(r, doms)?;
            match op {
                // `a` is unknown here.
                BinOp::And => {
                    if b == FALSE {
                        FALSE
                    } else {
                        UNKNOWN
                    }
                }
                BinOp::Or | BinOp::Implies => {
                    if b == TRUE {
                        TRUE
                    } else {
                        UNKNOWN
                    }
                }
                BinOp::Eq | BinOp::Neq => {
                    let eq = match (point(a), point(b)) {
                        (Some(x), Some(y)) if x == y => TRUE,
                        _ if a.hi < b.lo || b.hi < a.lo => FALSE,
                        _ => UNKNOWN,
                    };
                    if *op == BinOp::Eq {
                        eq
                    } else {
                        IntRange::new(1 - eq.hi, 1 - eq.lo)
                    }
                }
                BinOp::Lt => decide(a.hi < b.lo, a.lo >= b.hi),
                BinOp::Leq => decide(a.hi <= b.lo, a.lo > b.hi),
                BinOp::Gt => decide(a.lo > b.hi, a.hi <= b.lo),
                BinOp::Geq => decide(a.lo >= b.hi, a.hi < b.lo),
                _ => checked_interval(*op, a, b)?,
            }
        }
        C::Agg(op, items) => {
            let mut acc = match op {
                AggregateOp::And | AggregateOp::Product => TRUE,
                AggregateOp::Or | AggregateOp::Sum => FALSE,
            };
            for i in items {
                let v = ieval(i, doms);
                acc = match op {
                    AggregateOp::And => match (acc, v) {
                        (_, Some(FALSE)) if acc == TRUE => return Some(FALSE),
                        (TRUE, v) => v?,
                        (_, Some(FALSE)) => FALSE,
                        (_, v) => {
                            v?;
                            UNKNOWN
                        }
                    },
                    AggregateOp::Or => match (acc, v) {
                        (FALSE, Some(TRUE)) => return Some(TRUE),
                        (FALSE, v) => v?,
                        (_, Some(TRUE)) => TRUE,
                        (_, v) => {
                            v?;
                            UNKNOWN
                        }
                    },
                    _ => checked_interval(op.binop(), acc, v?)?,
                };
                if (*op == AggregateOp::And && acc == FALSE) || (*op == AggregateOp::Or && acc == TRUE)
                {
                    return Some(acc);
                }
            }
            acc
        }
        C::AllDiff(items) => {
            let rs = items
                .iter()
                .map(|i| ieval(i, doms))
                .collect::<Option<Vec<_>>>()?;
            let points: Option<Vec<i64>> = rs.iter().map(|r| point(*r)).collect();
            match points {
                Some(mut p) => {
                    p.sort_unstable();
                    if p.windows(2).all(|w| w[0] != w[1]) {
                        TRUE
                    } else {
                        FALSE
                    }
                }
                None => UNKNOWN,
            }
        }
    })
}

fn decide(always: bool, never: bool) -> IntRange {
    if always {
        TRUE
    } else if never {
        FALSE
    } else {
        UNKNOWN
    }
}

/// Exact-endpoint interval arithmetic; `None` if some point may overflow or fail.
fn checked_interval(op: BinOp, a: IntRange, b: IntRange) -> Option<IntRange> {
    let corners = |f: &dyn Fn(i64, i64) -> Option<i64>, xs: &[i64], ys: &[i64]| {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for &x in xs {
            for &y in ys {
                let v = f(x, y)?;
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        Some(IntRange::new(lo, hi))
    };
    match op {
        BinOp::Add => Some(IntRange::new(a.lo.checked_add(b.lo)?, a.hi.checked_add(b.hi)?)),
        BinOp::Sub => Some(IntRange::new(a.lo.checked_sub(b.hi)?, a.hi.checked_sub(b.lo)?)),
        BinOp::Mul => corners(&|x, y| x.checked_mul(y), &[a.lo, a.hi], &[b.lo, b.hi]),
        BinOp::Div => {
            if b.contains(0) {
                return None;
            }
            corners(&|x, y| floor_div(x, y).ok(), &[a.lo, a.hi], &[b.lo, b.hi])
        }
        BinOp::Mod => {
            if b.contains(0) {
                return None;
            }
            Some(if b.lo > 0 {
                if a.lo >= 0 && a.hi < b.lo {
                    a
                } else {
                    IntRange::new(0, b.hi - 1)
                }
            } else if a.hi <= 0 && a.lo > b.hi {
                a
            } else {
                IntRange::new(b.lo + 1, 0)
            })
        }
        BinOp::Pow => {
            if b.lo < 0 {
                return None;
            }
            let mut bases = vec![a.lo, a.hi];
            if a.contains(0) {
                bases.push(0);
            }
            let exps = [b.lo, (b.lo + 1).min(b.hi), (b.hi - 1).max(b.lo), b.hi];
            corners(&|x, y| arith(BinOp::Pow, x, y).ok(), &bases, &exps)
        }
        _ => None,
    }
}

struct Guard {
    c: C,
    level: usize,
}

/// Pieces over dummies, decided at the leaves.
enum Residual {
    /// Boolean dummies: pieces grouped by shared dummies; each group needs a witness.
    Enumerate(Vec<(Vec<usize>, Vec<C>)>),
    /// Integer dummies: a piece rules a combination out when it simplifies to `false`.
    Symbolic(Vec<Expr>),
}

struct Problem {
    nb: usize,
    slots: Vec<String>,
    domains: Vec<IntRange>,
    /// Dummy-free pieces indexed by the level at which they are checked.
    guards: Vec<Vec<Guard>>,
    /// Dummy-free constraints, unsplit, re-checked when a piece could not be evaluated early.
    whole: Vec<C>,
    residual: Residual,
}

impl Problem {
    fn compile(g: &GeneratorModel, strategy: Strategy) -> Result<Self> {
        let nb = g.branching.len();
        let mut slots: Vec<String> = g.branching.clone();
        for v in &g.vars {
            if !slots.contains(&v.name) {
                slots.push(v.name.clone());
            }
        }
        let mut domains = Vec::new();
        let mut int_dummies = false;
        for (i, name) in slots.iter().enumerate() {
            let v = g.var(name).ok_or_else(|| {
                Error::Internal(format!("branching variable `{name}` is not declared"))
            })?;
            domains.push(match v.domain {
                VarDomain::Bool => IntRange::new(0, 1),
                VarDomain::Int(r) => {
                    int_dummies |= i >= nb;
                    r
                }
            });
        }
        let index: HashMap<&str, usize> =
            slots.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();

        let mut guards: Vec<Vec<Guard>> = (0..nb.max(1)).map(|_| Vec::new()).collect();
        let mut whole = Vec::new();
        let mut residual_pieces: Vec<(Expr, C, Vec<usize>)> = Vec::new();
        for constraint in &g.constraints {
            let mut dummy_free = true;
            for piece in split_conjuncts(constraint) {
                let c = compile(&piece, &index)?;
                let used: Vec<usize> = {
                    let mut u = Vec::new();
                    collect_slots(&c, &mut u);
                    u.sort_unstable();
                    u.dedup();
                    u
                };
                if used.iter().any(|&s| s >= nb) {
                    dummy_free = false;
                    residual_pieces.push((piece, c, used));
                    continue;
                }
                let level = match strategy {
                    Strategy::Eager => used.last().copied().unwrap_or(0),
                    Strategy::AtLeaves => nb.saturating_sub(1),
                };
                guards[level].push(Guard { c, level });
            }
            if dummy_free {
                whole.push(compile(constraint, &index)?);
            }
        }

        let residual = if int_dummies {
            Residual::Symbolic(residual_pieces.into_iter().map(|(e, ..)| e).collect())
        } else {
            // Union pieces that share a dummy.
            let mut groups: Vec<(Vec<usize>, Vec<C>)> = Vec::new();
            for (_, c, used) in residual_pieces {
                let dummies: Vec<usize> = used.into_iter().filter(|&s| s >= nb).collect();
                let mut merged = (dummies, vec![c]);
                let mut i = 0;
                while i < groups.len() {
                    if groups[i].0.iter().any(|d| merged.0.contains(d)) {
                        let (ds, cs) = groups.remove(i);
                        merged.0.extend(ds);
                        merged.1.extend(cs);
                    } else {
                        i += 1;
                    }
                }
                merged.0.sort_unstable();
                merged.0.dedup();
                groups.push(merged);
            }
            Residual::Enumerate(groups)
        };
        Ok(Problem {
            nb,
            slots,
            domains,
            guards,
            whole,
            residual,
        })
    }
}

fn collect_slots(c: &C, out: &mut Vec<usize>) {
    match c {
        C::Lit(_) => {}
        C::Slot(s) => out.push(*s),
        C::Not(x) | C::Neg(x) => collect_slots(x, out),
        C::Bin(_, l, r) => {
            collect_slots(l, out);
            collect_slots(r, out);
        }
        C::Agg(_, items) | C::AllDiff(items) => items.iter().for_each(|i| collect_slots(i, out)),
    }
}

/// Below this width a level's domain is scanned value by value.
const SCAN_WIDTH: i64 = 8;

struct Search<'a, 'f> {
    p: &'a Problem,
    vals: Vec<i64>,
    ivals: Vec<IntRange>,
    /// Pieces whose early evaluation failed on the current path.
    deferred: usize,
    ticks: u32,
    deadline: Option<Instant>,
    emit: &'f mut dyn FnMut(&[i64]) -> Result<()>,
}

impl Search<'_, '_> {
    fn tick(&mut self) -> Result<()> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(Error::Timeout);
                }
            }
        }
        Ok(())
    }

    fn context(&self, k: usize) -> String {
        self.p.slots[..=k.min(self.p.nb - 1)]
            .iter()
            .zip(&self.vals)
            .map(|(n, v)| format!("{n}={v}"))
            .collect::<Vec<_>>()
            .join(", ")
    }

    fn level(&mut self, k: usize) -> Result<()> {
        if k == self.p.nb {
            return self.leaf();
        }
        let d = self.p.domains[k];
        if self.p.guards[k].is_empty() {
            for v in d.iter() {
                self.tick()?;
                self.vals[k] = v;
                self.level(k + 1)?;
            }
            Ok(())
        } else {
            self.bisect(k, d.lo, d.hi)
        }
    }

    fn bisect(&mut self, k: usize, lo: i64, hi: i64) -> Result<()> {
        self.tick()?;
        let width = (hi as i128) - (lo as i128) + 1;
        if width > SCAN_WIDTH as i128 {
            for (i, v) in self.vals[..k].iter().enumerate() {
                self.ivals[i] = IntRange::new(*v, *v);
            }
            self.ivals[k] = IntRange::new(lo, hi);
            let mut all_true = true;
            for g in &self.p.guards[k] {
                match ieval(&g.c, &self.ivals) {
                    Some(FALSE) => return Ok(()),
                    Some(TRUE) => {}
                    _ => all_true = false,
                }
            }
            if all_true {
                for v in lo..=hi {
                    self.tick()?;
                    self.vals[k] = v;
                    self.level(k + 1)?;
                }
                return Ok(());
            }
            let mid = lo + ((hi as i128 - lo as i128) / 2) as i64;
            self.bisect(k, lo, mid)?;
            return self.bisect(k, mid + 1, hi);
        }
        for v in lo..=hi {
            self.vals[k] = v;
            let mut ok = true;
            let mut deferred = 0;
            for g in &self.p.guards[k] {
                debug_assert_eq!(g.level, k);
                match eval(&g.c, &self.vals) {
                    Ok(0) => {
                        ok = false;
                        break;
                    }
                    Ok(_) => {}
                    Err(_) => deferred += 1,
                }
            }
            if ok {
                self.deferred += deferred;
                self.level(k + 1)?;
                self.deferred -= deferred;
            }
        }
        Ok(())
    }

    fn leaf(&mut self) -> Result<()> {
        let last = self.p.nb - 1;
        if self.deferred > 0 {
            for c in &self.p.whole {
                let ok = eval(c, &self.vals).map_err(|e| {
                    Error::from(e).with_context(|| self.context(last))
                })?;
                if ok == 0 {
                    return Ok(());
                }
            }
        }
        if !self.residual_ok()? {
            return Ok(());
        }
        let nb = self.p.nb;
        (self.emit)(&self.vals[..nb])
    }

    fn residual_ok(&mut self) -> Result<bool> {
        let nb = self.p.nb;
        match &self.p.residual {
            Residual::Enumerate(groups) => {
                for (dummies, pieces) in groups {
                    if !self.witness(dummies, pieces, 0)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Residual::Symbolic(pieces) => {
                let env: Env = self.p.slots[..nb]
                    .iter()
                    .zip(&self.vals)
                    .map(|(n, v)| (n.clone(), Value::Int(*v)))
                    .collect();
                for piece in pieces {
                    let s = simplify(piece, &env)
                        .map_err(|e| e.with_context(|| self.context(nb - 1)))?;
                    if s.as_bool() == Some(false) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Whether some assignment of `dummies[i..]` satisfies every piece.
    fn witness(&mut self, dummies: &[usize], pieces: &[C], i: usize) -> Result<bool> {
        if i == dummies.len() {
            for c in pieces {
                let v = eval(c, &self.vals)
                    .map_err(|e| Error::from(e).with_context(|| self.context(self.p.nb - 1)))?;
                if v == 0 {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        let slot = dummies[i];
        for v in self.p.domains[slot].iter() {
            self.vals[slot] = v;
            if self.witness(dummies, pieces, i + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Evaluates a Boolean constraint under a full assignment of `g`'s variables.
pub fn check(g: &GeneratorModel, c: &Expr, values: &[(String, i64)]) -> Result<bool> {
    let slots: Vec<String> = g.vars.iter().map(|v| v.name.clone()).collect();
    let index: HashMap<&str, usize> =
        slots.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let compiled = compile(c, &index)?;
    let mut vals = vec![0; slots.len()];
    for (n, v) in values {
        if let Some(&i) = index.get(n.as_str()) {
            vals[i] = *v;
        }
    }
    Ok(eval(&compiled, &vals)? != 0)
}

/// Applies a comparison or logical operator the way the solver does, for tests.
#[cfg(test)]
fn reference(op: BinOp, a: i64, b: i64) -> Option<i64> {
    let v = |x| if op.is_logical() { Value::Bool(x != 0) } else { Value::Int(x) };
    match crate::eval::apply_bin(op, &v(a), &v(b)).ok()? {
        Value::Int(x) => Some(x),
        Value::Bool(x) => Some(i64::from(x)),
        Value::Matrix { .. } => None,
    }
}
