//! Unrolling pipelines and whole-model flattening.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::ast::{
    AggregateOp, BinOp, Comprehension, DecisionVar, Expr, ExprKind, MatrixArg, Model,
};
use crate::error::{Error, Result};
use crate::eval::{assemble_aggregate, eval_static, simplify, Env, Value};
use crate::fdsolver::{for_each_solution, SolveOptions};
use crate::genmodel::{build_generator_model, Context, GeneratorModel, Mode};
use crate::printer::write_constraints;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Pipeline {
    /// Enumerate every combination and simplify each item.
    Naive,
    /// Solve a generator model built from the explicit guards.
    SolverAidedSimple,
    /// Solve a generator model that also lifts static conditions out of the return expression.
    SolverAidedFull,
}

impl Pipeline {
    pub const ALL: [Pipeline; 3] = [
        Pipeline::Naive,
        Pipeline::SolverAidedSimple,
        Pipeline::SolverAidedFull,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Naive => "naive",
            Pipeline::SolverAidedSimple => "solver-aided-simple",
            Pipeline::SolverAidedFull => "solver-aided-full",
        }
    }

    pub fn mode(self) -> Option<Mode> {
        match self {
            Pipeline::Naive => None,
            Pipeline::SolverAidedSimple => Some(Mode::Simple),
            Pipeline::SolverAidedFull => Some(Mode::Full),
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ExpansionStats {
    pub comprehensions: u64,
    pub combinations_considered: u64,
    pub items_emitted: u64,
    pub items_discarded_as_identity: u64,
    #[serde(serialize_with = "secs")]
    pub generator_solve_time: Duration,
    #[serde(serialize_with = "secs")]
    pub substitution_time: Duration,
    #[serde(serialize_with = "secs")]
    pub total_time: Duration,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl ExpansionStats {
    fn absorb(&mut self, o: &ExpansionStats) {
        self.comprehensions += o.comprehensions;
        self.combinations_considered += o.combinations_considered;
        self.items_emitted += o.items_emitted;
        self.items_discarded_as_identity += o.items_discarded_as_identity;
        self.generator_solve_time += o.generator_solve_time;
        self.substitution_time += o.substitution_time;
    }

    /// Versioned JSON object for `--stats`.
    pub fn to_json(&self, pipeline: Pipeline) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("stats serialize");
        let obj = v.as_object_mut().expect("stats is an object");
        obj.insert("schema".into(), 1.into());
        obj.insert("pipeline".into(), pipeline.name().into());
        v
    }
}

#[derive(Clone, Debug, Default)]
pub struct ExpandOptions {
    pub deadline: Option<Instant>,
    /// Emit items without simplification. Only for exercising `compare`.
    pub skip_simplify: bool,
}

impl ExpandOptions {
    fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Timeout),
            _ => Ok(()),
        }
    }
}

/// Comprehension- and quantifier-free model ready for a solver.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FlatModel {
    pub decision_vars: Vec<DecisionVar>,
    pub constraints: Vec<Expr>,
}

impl fmt::Display for FlatModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for d in &self.decision_vars {
            out.push_str(&format!("find {}: {}\n", d.name, d.domain));
        }
        write_constraints(&mut out, &self.constraints);
        f.write_str(&out)
    }
}

/// Rewrites `forAll`/`exists` into `and`/`or` over guard-free comprehensions.
pub fn lower_quantifiers(e: &Expr) -> Expr {
    let mut out = e.clone();
    lower_in_place(&mut out);
    out
}

fn lower_in_place(e: &mut Expr) {
    for c in e.children_mut() {
        lower_in_place(c);
    }
    if let ExprKind::Quantifier { kind, vars, body } = &mut e.kind {
        let c = Comprehension {
            return_expr: std::mem::replace(&mut **body, Expr::boolean(true)),
            generators: std::mem::take(vars),
            guards: vec![],
        };
        e.kind = ExprKind::Aggregate(kind.aggregate(), MatrixArg::Comprehension(Box::new(c)));
    }
}

fn induction_context(c: &Comprehension, env: &Env) -> String {
    c.generators
        .iter()
        .map(|g| match env.get(&g.name) {
            Some(v) => format!("{}={v}", g.name),
            None => g.name.clone(),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Items of an expansion after simplification; identities are already dropped
/// for aggregates.
struct Items {
    items: Vec<Expr>,
    stats: ExpansionStats,
    generator: Option<GeneratorModel>,
}

struct Collector<'a> {
    c: &'a Comprehension,
    ctx: Context,
    opts: &'a ExpandOptions,
    env: Env,
    out: Items,
}

impl<'a> Collector<'a> {
    fn new(c: &'a Comprehension, ctx: Context, opts: &'a ExpandOptions) -> Self {
        let env = c
            .generators
            .iter()
            .map(|g| (g.name.clone(), Value::Int(0)))
            .collect();
        Collector {
            c,
            ctx,
            opts,
            env,
            out: Items {
                items: Vec::new(),
                stats: ExpansionStats {
                    comprehensions: 1,
                    ..Default::default()
                },
                generator: None,
            },
        }
    }

    fn set(&mut self, vals: &[i64]) {
        for (g, v) in self.c.generators.iter().zip(vals) {
            if let Some(slot) = self.env.get_mut(&g.name) {
                *slot = Value::Int(*v);
            }
        }
    }

    /// Substitutes the current induction values into the return expression.
    fn emit(&mut self) -> Result<()> {
        let item = if self.opts.skip_simplify {
            let subst: HashMap<String, Expr> = self
                .env
                .iter()
                .filter_map(|(k, v)| Some((k.clone(), v.to_expr()?)))
                .collect();
            self.c.return_expr.substitute(&subst)
        } else {
            simplify(&self.c.return_expr, &self.env)
                .map_err(|e| e.with_context(|| induction_context(self.c, &self.env)))?
        };
        if let Context::Aggregate(op) = self.ctx {
            if item == op.identity() {
                self.out.stats.items_discarded_as_identity += 1;
                return Ok(());
            }
        }
        self.out.stats.items_emitted += 1;
        self.out.items.push(item);
        Ok(())
    }
}

fn naive_items(c: &Comprehension, ctx: Context, opts: &ExpandOptions) -> Result<Items> {
    let start = Instant::now();
    let ranges = c.ranges()?;
    let mut col = Collector::new(c, ctx, opts);
    col.out.stats.combinations_considered = ranges
        .iter()
        .map(|r| r.len())
        .try_fold(1u64, |acc, n| acc.checked_mul(n))
        .unwrap_or(u64::MAX);
    if ranges.iter().any(|r| r.is_empty()) {
        return Ok(col.out);
    }
    let mut vals: Vec<i64> = ranges.iter().map(|r| r.lo).collect();
    let mut ticks = 0u32;
    'combos: loop {
        ticks = ticks.wrapping_add(1);
        if ticks.is_multiple_of(1024) {
            opts.check_deadline()?;
        }
        col.set(&vals);
        let mut keep = true;
        for g in &c.guards {
            let v = eval_static(g, &col.env)
                .and_then(|v| v.as_bool().map_err(|e| Error::eval(e, g.span)))
                .map_err(|e| e.with_context(|| induction_context(c, &col.env)))?;
            if !v {
                keep = false;
                break;
            }
        }
        if keep {
            col.emit()?;
        }
        // Odometer step, last generator fastest.
        for k in (0..vals.len()).rev() {
            if vals[k] < ranges[k].hi {
                vals[k] += 1;
                continue 'combos;
            }
            vals[k] = ranges[k].lo;
        }
        break;
    }
    col.out.stats.substitution_time = start.elapsed();
    Ok(col.out)
}

fn solver_items(
    c: &Comprehension,
    ctx: Context,
    mode: Mode,
    model: &Model,
    opts: &ExpandOptions,
) -> Result<Items> {
    let g = build_generator_model(c, ctx, mode, model)?;
    let mut col = Collector::new(c, ctx, opts);
    let solve_opts = SolveOptions {
        deadline: opts.deadline,
        ..Default::default()
    };
    let start = Instant::now();
    let mut in_emit = Duration::ZERO;
    for_each_solution(&g, &solve_opts, &mut |vals| {
        let t = Instant::now();
        col.out.stats.combinations_considered += 1;
        col.set(vals);
        let r = col.emit();
        in_emit += t.elapsed();
        r
    })?;
    col.out.stats.generator_solve_time = start.elapsed().saturating_sub(in_emit);
    col.out.stats.substitution_time = in_emit;
    col.out.generator = Some(g);
    Ok(col.out)
}

fn expand_items(
    c: &Comprehension,
    ctx: Context,
    pipeline: Pipeline,
    model: &Model,
    opts: &ExpandOptions,
) -> Result<Items> {
    match pipeline.mode() {
        None => naive_items(c, ctx, opts),
        Some(mode) => solver_items(c, ctx, mode, model, opts),
    }
}

fn assemble(ctx: Context, items: Vec<Expr>) -> Result<Expr> {
    match ctx {
        Context::Aggregate(op) => simplify(&assemble_aggregate(op, items), &Env::new()),
        Context::AllDiff => Ok(ExprKind::AllDiff(MatrixArg::List(items)).into()),
    }
}

/// Generate-and-test expansion of one comprehension with literal generator bounds.
pub fn expand_naive(
    c: &Comprehension,
    ctx: Context,
    opts: &ExpandOptions,
) -> Result<(Expr, ExpansionStats)> {
    let start = Instant::now();
    let out = naive_items(c, ctx, opts)?;
    let mut stats = out.stats;
    let e = assemble(ctx, out.items)?;
    stats.total_time = start.elapsed();
    Ok((e, stats))
}

/// Solver-aided expansion: items are produced only for generator-model solutions,
/// substituted into the original return expression.
pub fn expand_solver_aided(
    c: &Comprehension,
    ctx: Context,
    mode: Mode,
    model: &Model,
    opts: &ExpandOptions,
) -> Result<(Expr, ExpansionStats, GeneratorModel)> {
    let start = Instant::now();
    let out = solver_items(c, ctx, mode, model, opts)?;
    let mut stats = out.stats;
    let e = assemble(ctx, out.items)?;
    stats.total_time = start.elapsed();
    Ok((e, stats, out.generator.expect("solver pipeline builds a generator")))
}

#[derive(Clone, Debug, Default)]
pub struct FlattenOptions {
    pub pipeline: Option<Pipeline>,
    pub expand: ExpandOptions,
}

/// Result of [`flatten_with`], including the generator models that were solved.
#[derive(Clone, Debug)]
pub struct Flattened {
    pub flat: FlatModel,
    pub stats: ExpansionStats,
    pub generators: Vec<GeneratorModel>,
}

pub fn flatten(m: &Model, pipeline: Pipeline) -> Result<(FlatModel, ExpansionStats)> {
    let f = flatten_with(
        m,
        &FlattenOptions {
            pipeline: Some(pipeline),
            ..Default::default()
        },
    )?;
    Ok((f.flat, f.stats))
}

/// Expands every comprehension and quantifier of a bound model.
///
/// Each constraint is lowered, expanded, simplified and split at top-level `/\`;
/// `true` pieces are dropped.
pub fn flatten_with(m: &Model, opts: &FlattenOptions) -> Result<Flattened> {
    let start = Instant::now();
    let pipeline = opts.pipeline.unwrap_or(Pipeline::SolverAidedFull);
    let mut stats = ExpansionStats::default();
    let mut generators = Vec::new();
    let mut constraints = Vec::new();
    for c in &m.constraints {
        let lowered = lower_quantifiers(c);
        // A whole-constraint conjunction is emitted item by item, so very long
        // expansions never build a deep chain.
        if let ExprKind::Aggregate(AggregateOp::And, MatrixArg::Comprehension(comp)) =
            &lowered.kind
        {
            let out = expand_items(comp, Context::Aggregate(AggregateOp::And), pipeline, m, &opts.expand)?;
            stats.absorb(&out.stats);
            generators.extend(out.generator);
            if out.items.iter().any(|i| i.as_bool() == Some(false)) {
                constraints.push(Expr::boolean(false));
            } else {
                for item in out.items {
                    split_and(item, &mut constraints);
                }
            }
            continue;
        }
        let expanded = expand_nested(lowered, pipeline, m, &opts.expand, &mut stats, &mut generators)?;
        let s = simplify(&expanded, &Env::new())?;
        split_and(s, &mut constraints);
    }
    stats.total_time = start.elapsed();
    Ok(Flattened {
        flat: FlatModel {
            decision_vars: m.decision_vars.clone(),
            constraints,
        },
        stats,
        generators,
    })
}

fn expand_nested(
    mut e: Expr,
    pipeline: Pipeline,
    m: &Model,
    opts: &ExpandOptions,
    stats: &mut ExpansionStats,
    generators: &mut Vec<GeneratorModel>,
) -> Result<Expr> {
    let ctx = match &e.kind {
        ExprKind::Aggregate(op, MatrixArg::Comprehension(_)) => Some(Context::Aggregate(*op)),
        ExprKind::AllDiff(MatrixArg::Comprehension(_)) => Some(Context::AllDiff),
        _ => None,
    };
    if let Some(ctx) = ctx {
        let (ExprKind::Aggregate(_, MatrixArg::Comprehension(c))
        | ExprKind::AllDiff(MatrixArg::Comprehension(c))) = &e.kind
        else {
            unreachable!()
        };
        if c.return_expr.contains_comprehension()
            || c.guards.iter().any(|g| g.contains_comprehension())
        {
            return Err(Error::validation(
                e.span,
                "nested comprehensions and quantifiers are not supported",
            ));
        }
        let out = expand_items(c, ctx, pipeline, m, opts)?;
        stats.absorb(&out.stats);
        generators.extend(out.generator);
        return Ok(assemble(ctx, out.items)?.with_span(e.span));
    }
    let children: Vec<Expr> = e.children().into_iter().cloned().collect();
    let mut expanded = Vec::with_capacity(children.len());
    for c in children {
        expanded.push(expand_nested(c, pipeline, m, opts, stats, generators)?);
    }
    for (slot, new) in e.children_mut().into_iter().zip(expanded) {
        *slot = new;
    }
    Ok(e)
}

/// Appends the conjuncts of `e`, dropping `true`.
fn split_and(e: Expr, out: &mut Vec<Expr>) {
    let mut stack = vec![e];
    while let Some(e) = stack.pop() {
        match e.kind {
            ExprKind::Bin(BinOp::And, l, r) => {
                stack.push(*r);
                stack.push(*l);
            }
            ExprKind::Bool(true) => {}
            kind => out.push(Expr::new(kind, e.span)),
        }
    }
}


#[cfg(test)]
mod triples {
    use super::*;
    use crate::parser::{bind_params, parse_model, Bindings};

    #[test]
    fn variants_agree() {
        for n in [5, 13] {
            let mut outs = vec![];
            for src in [
                include_str!("../models/triples_forall.model"),
                include_str!("../models/triples_guarded.model"),
                include_str!("../models/triples_inreturn.model"),
            ] {
                let b: Bindings = [("n".to_string(), n)].into();
                let m = bind_params(&parse_model(src).unwrap(), &b).unwrap();
                for p in Pipeline::ALL {
                    outs.push(flatten(&m, p).unwrap().0.to_string());
                }
            }
            assert!(outs.iter().all(|o| *o == outs[0]), "{outs:#?}");
        }
    }
}
