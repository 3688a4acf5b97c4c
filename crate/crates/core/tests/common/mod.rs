//! Seeded random models and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unroll::ast::{Comprehension, Expr, ExprKind, MatrixArg, Model};
use unroll::eval::{eval_static, Env, Value};
use unroll::expand::{flatten, Pipeline};
use unroll::fdsolver::solve_all;
use unroll::genmodel::{Context, GeneratorModel, VarDomain};
use unroll::parser::{bind_params, parse_model, Bindings};

pub const DECLS: &str = "given n: int(1..)\n\
find x: matrix indexed by [int(-2..10)] of int(0..3)\n\
find y: int(0..5)\n\
find p: bool\n";

pub struct Gen {
    rng: ChaCha8Rng,
    /// Induction variables in scope.
    scope: Vec<String>,
    max_depth: u32,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            scope: vec![],
            max_depth: 5,
        }
    }

    pub fn with_max_depth(seed: u64, max_depth: u32) -> Self {
        Gen {
            max_depth,
            ..Gen::new(seed)
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn set_scope(&mut self, vars: &[&str]) {
        self.scope = vars.iter().map(|s| s.to_string()).collect();
    }

    fn var(&mut self) -> Option<String> {
        self.scope.choose(&mut self.rng).cloned()
    }

    fn int_leaf(&mut self, dynamic: bool) -> String {
        let r = self.rng.gen_range(0..10);
        match r {
            0..=2 => self.rng.gen_range(-3..=5).to_string(),
            3..=5 if !self.scope.is_empty() => self.var().unwrap(),
            6 => "n".to_string(),
            7 | 8 if dynamic => match self.var() {
                Some(v) if self.rng.gen_bool(0.8) => format!("x[{v}]"),
                _ => format!("x[{}]", self.rng.gen_range(-2..=10)),
            },
            9 if dynamic => "y".to_string(),
            _ => self.rng.gen_range(0..=4).to_string(),
        }
    }

    pub fn int_expr(&mut self, depth: u32, dynamic: bool) -> String {
        if depth == 0 || self.rng.gen_bool(0.35) {
            return self.int_leaf(dynamic);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..8) {
            0 => format!("({} + {})", self.int_expr(d, dynamic), self.int_expr(d, dynamic)),
            1 => format!("({} - {})", self.int_expr(d, dynamic), self.int_expr(d, dynamic)),
            2 => format!("({} * {})", self.int_expr(d, dynamic), self.int_expr(d, dynamic)),
            3 => format!("({} / {})", self.int_expr(d, dynamic), self.rng.gen_range(1..=4)),
            4 => format!("({} % {})", self.int_expr(d, dynamic), self.rng.gen_range(1..=4)),
            5 => format!("(-{})", self.int_expr(d, dynamic)),
            6 => format!("({} ** {})", self.int_leaf(dynamic), self.rng.gen_range(0..=2)),
            _ => format!("({} + 0)", self.int_expr(d, dynamic)),
        }
    }

    fn cmp(&mut self) -> &'static str {
        ["=", "!=", "<", "<=", ">", ">="].choose(&mut self.rng).unwrap()
    }

    fn bool_leaf(&mut self, dynamic: bool) -> String {
        match self.rng.gen_range(0..8) {
            0 => ["true", "false"].choose(&mut self.rng).unwrap().to_string(),
            1 | 2 if dynamic => match self.rng.gen_range(0..3) {
                0 => "p".into(),
                _ => {
                    let op = self.cmp();
                    format!("({} {op} {})", self.int_expr(1, true), self.int_expr(1, dynamic))
                }
            },
            _ => {
                let op = self.cmp();
                format!("({} {op} {})", self.int_expr(1, false), self.int_expr(1, false))
            }
        }
    }

    pub fn bool_expr(&mut self, depth: u32, dynamic: bool) -> String {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.bool_leaf(dynamic);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..9) {
            0 | 1 => format!("({} /\\ {})", self.bool_expr(d, dynamic), self.bool_expr(d, dynamic)),
            2 | 3 => format!("({} \\/ {})", self.bool_expr(d, dynamic), self.bool_expr(d, dynamic)),
            4 | 5 => format!("({} -> {})", self.bool_expr(d, dynamic), self.bool_expr(d, dynamic)),
            6 => format!("(!{})", self.bool_expr(d, dynamic)),
            7 => format!("({} = {})", self.bool_expr(d, dynamic), self.bool_expr(d, dynamic)),
            _ => {
                let op = self.cmp();
                format!("({} {op} {})", self.int_expr(d, dynamic), self.int_expr(d, dynamic))
            }
        }
    }

    fn domain(&mut self) -> String {
        if self.rng.gen_bool(0.15) {
            // n is at most 6, so this stays within 8 values.
            return format!("int({}..n)", self.rng.gen_range(-1..=3));
        }
        let lo = self.rng.gen_range(-2..=3);
        let size: i64 = self.rng.gen_range(0..=8);
        format!("int({lo}..{})", lo + size - 1)
    }

    /// Generators and guards; pushes the induction variables into scope.
    fn generators(&mut self, count: usize, guards: bool) -> String {
        let names = ["i", "j", "k"];
        let mut parts = vec![];
        for name in &names[..count] {
            let d = self.domain();
            parts.push(format!("{name}: {d}"));
            self.scope.push(name.to_string());
        }
        if guards {
            for _ in 0..self.rng.gen_range(0..=2) {
                let depth = self.rng.gen_range(0..=2);
                parts.push(self.bool_expr(depth, false));
            }
        }
        parts.join(", ")
    }

    /// A random comprehension in source form with its consuming context.
    pub fn comprehension(&mut self) -> String {
        self.scope.clear();
        let count = self.rng.gen_range(1..=3);
        let kind = self.rng.gen_range(0..5);
        let head = self.generators(count, true);
        let depth = self.rng.gen_range(1..=self.max_depth);
        let out = match kind {
            0 => format!("and([{} | {head}])", self.bool_expr(depth, true)),
            1 => format!("or([{} | {head}])", self.bool_expr(depth, true)),
            2 => format!("sum([{} | {head}])", self.int_expr(depth.min(3), true)),
            3 => format!("product([{} | {head}])", self.int_expr(depth.min(2), true)),
            _ => format!("allDiff([{} | {head}])", self.int_expr(depth.min(3), true)),
        };
        self.scope.clear();
        out
    }

    /// A model whose only constraint contains one random comprehension.
    pub fn comprehension_model(&mut self) -> (String, i64) {
        let c = self.comprehension();
        let c = if c.starts_with("sum") || c.starts_with("product") {
            format!("{c} <= {}", self.rng.gen_range(-3..=12))
        } else {
            c
        };
        (format!("{DECLS}such that {c}\n"), self.rng.gen_range(1..=6))
    }

    fn constraint(&mut self) -> String {
        match self.rng.gen_range(0..8) {
            0 => {
                self.scope.clear();
                let names = ["i", "j", "k"];
                let count = self.rng.gen_range(1..=3);
                let d = self.domain();
                self.scope.extend(names[..count].iter().map(|s| s.to_string()));
                let q = ["forAll", "exists"].choose(&mut self.rng).unwrap();
                let depth = self.rng.gen_range(1..=self.max_depth);
                let body = self.bool_expr(depth, true);
                self.scope.clear();
                format!("{q} {}: {d} . {body}", names[..count].join(","))
            }
            1 => format!("p \\/ {}", self.comprehension_of_kind(0)),
            2 => format!("{} <= {}", self.comprehension_of_kind(2), self.rng.gen_range(-3..=12)),
            3 => format!("{} != 0", self.comprehension_of_kind(3)),
            4 => format!("(y > 2) -> {}", self.comprehension_of_kind(1)),
            5 => self.comprehension_of_kind(4),
            _ => self.comprehension_of_kind(0),
        }
    }

    fn comprehension_of_kind(&mut self, kind: u32) -> String {
        loop {
            let c = self.comprehension();
            let want = ["and(", "or(", "sum(", "product(", "allDiff("][kind as usize];
            if c.starts_with(want) {
                return c;
            }
        }
    }

    /// Source text of a random model and a value for `n`.
    pub fn model(&mut self) -> (String, i64) {
        let mut src = String::from(DECLS);
        src.push_str("such that\n");
        let k = self.rng.gen_range(1..=3);
        let cs: Vec<String> = (0..k).map(|_| self.constraint()).collect();
        src.push_str(&cs.join(",\n"));
        src.push('\n');
        let n = self.rng.gen_range(1..=6);
        (src, n)
    }
}

/// Height of an expression; nodes without children have height 0.
pub fn depth(e: &Expr) -> usize {
    e.children().into_iter().map(|c| 1 + depth(c)).max().unwrap_or(0)
}

/// Height of the deepest return expression or guard of any comprehension or
/// quantifier body in the model.
pub fn comprehension_depth(m: &Model) -> usize {
    let mut d = 0;
    for c in &m.constraints {
        c.visit(&mut |e| match &e.kind {
            ExprKind::Aggregate(_, MatrixArg::Comprehension(c))
            | ExprKind::AllDiff(MatrixArg::Comprehension(c)) => {
                d = d.max(depth(&c.return_expr));
                for g in &c.guards {
                    d = d.max(depth(g));
                }
            }
            ExprKind::Quantifier { body, .. } => d = d.max(depth(body)),
            _ => {}
        });
    }
    d
}

/// Number of generators of the widest comprehension or quantifier.
pub fn max_generators(m: &Model) -> usize {
    let mut k = 0;
    for c in &m.constraints {
        c.visit(&mut |e| match &e.kind {
            ExprKind::Aggregate(_, MatrixArg::Comprehension(c))
            | ExprKind::AllDiff(MatrixArg::Comprehension(c)) => k = k.max(c.generators.len()),
            ExprKind::Quantifier { vars, .. } => k = k.max(vars.len()),
            _ => {}
        });
    }
    k
}

pub fn bound(src: &str, n: i64) -> Model {
    let m = parse_model(src).unwrap_or_else(|e| panic!("{e}\n{src}"));
    let mut b = Bindings::new();
    if m.params.iter().any(|p| p.name == "n") {
        b.insert("n".to_string(), n);
    }
    bind_params(&m, &b).unwrap_or_else(|e| panic!("{e}\n{src}"))
}

/// Canonical output of each pipeline; errors are compared by message.
pub fn outputs(m: &Model) -> Vec<Result<String, String>> {
    Pipeline::ALL
        .iter()
        .map(|&p| flatten(m, p).map(|(f, _)| f.to_string()).map_err(|e| e.to_string()))
        .collect()
}

/// The first comprehension of the model's first constraint, with its context.
pub fn only_comprehension(m: &Model) -> (Comprehension, Context) {
    let mut found = None;
    m.constraints[0].visit(&mut |e| {
        if found.is_some() {
            return;
        }
        match &e.kind {
            ExprKind::Aggregate(op, MatrixArg::Comprehension(c)) => {
                found = Some(((**c).clone(), Context::Aggregate(*op)))
            }
            ExprKind::AllDiff(MatrixArg::Comprehension(c)) => found = Some(((**c).clone(), Context::AllDiff)),
            _ => {}
        }
    });
    found.expect("a comprehension")
}

/// Every assignment of the model's variables, projected onto the branching
/// variables, for which all constraints evaluate to true.
pub fn brute_force_solutions(g: &GeneratorModel) -> Result<BTreeSet<Vec<i64>>, String> {
    let doms: Vec<Vec<Value>> = g
        .vars
        .iter()
        .map(|v| match v.domain {
            VarDomain::Bool => vec![Value::Bool(false), Value::Bool(true)],
            VarDomain::Int(r) => (r.lo..=r.hi).map(Value::Int).collect(),
        })
        .collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; doms.len()];
    if doms.iter().any(|d| d.is_empty()) {
        return Ok(out);
    }
    loop {
        let env: Env = g
            .vars
            .iter()
            .zip(&idx)
            .enumerate()
            .map(|(k, (v, &i))| (v.name.clone(), doms[k][i].clone()))
            .collect();
        let mut ok = true;
        for c in &g.constraints {
            match eval_static(c, &env).map_err(|e| e.to_string())? {
                Value::Bool(true) => {}
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.insert(
                g.branching
                    .iter()
                    .map(|b| env[b].as_int().unwrap())
                    .collect(),
            );
        }
        let mut k = idx.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < doms[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

pub fn solver_solutions(g: &GeneratorModel) -> Result<BTreeSet<Vec<i64>>, String> {
    Ok(solve_all(g)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|a| a.values.iter().map(|(_, v)| *v).collect())
        .collect())
}

/// Pythagorean triples a <= b <= c <= n.
pub fn triple_count(n: i64) -> usize {
    let mut k = 0;
    for a in 1..=n {
        for b in a..=n {
            for c in b..=n {
                if a * a + b * b == c * c {
                    k += 1;
                }
            }
        }
    }
    k
}
