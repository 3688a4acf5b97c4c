mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::Rng;

use common::{brute_force_solutions, bound, only_comprehension, solver_solutions, Gen, DECLS};
use unroll::ast::{AggregateOp, IntRange, Type};
use unroll::eval::{assemble_aggregate, eval_static, simplify, Env, Value};
use unroll::genmodel::{build_generator_model, differs_from_identity, Mode, VarDomain};
use unroll::parser::parse_expr;
use unroll::rewrite::{classify, lift_static_guard, Class};

fn partial_env(g: &mut Gen) -> Env {
    let mut env = Env::new();
    for v in ["i", "j"] {
        env.insert(v.to_string(), Value::Int(g.rng().gen_range(-2..=8)));
    }
    env.insert("n".to_string(), Value::Int(g.rng().gen_range(1..=6)));
    env
}

fn full_env(g: &mut Gen, partial: &Env) -> Env {
    let mut env = partial.clone();
    let values = (0..13).map(|_| Value::Int(g.rng().gen_range(0..=3))).collect();
    env.insert(
        "x".to_string(),
        Value::Matrix {
            ranges: vec![IntRange::new(-2, 10)],
            values,
        },
    );
    env.insert("y".to_string(), Value::Int(g.rng().gen_range(0..=5)));
    env.insert("p".to_string(), Value::Bool(g.rng().gen_bool(0.5)));
    env
}

fn random_expr(seed: u64) -> (Gen, String) {
    let mut g = Gen::new(seed);
    g.set_scope(&["i", "j"]);
    let e = if g.rng().gen_bool(0.7) {
        g.bool_expr(5, true)
    } else {
        g.int_expr(5, true)
    };
    (g, e)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 400, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let (_, src) = random_expr(seed);
        let e = parse_expr(&src).unwrap();
        let printed = e.to_string();
        let again = parse_expr(&printed).unwrap();
        prop_assert_eq!(again.to_string(), printed);
        prop_assert_eq!(again, e);
    }

    #[test]
    fn simplify_preserves_meaning(seed in any::<u64>()) {
        let (mut g, src) = random_expr(seed);
        let e = parse_expr(&src).unwrap();
        let partial = partial_env(&mut g);
        let full = full_env(&mut g, &partial);
        if let (Ok(want), Ok(s)) = (eval_static(&e, &full), simplify(&e, &partial)) {
            prop_assert_eq!(eval_static(&s, &full).ok(), Some(want), "{} => {}", src, s);
        }
    }

    #[test]
    fn simplify_is_idempotent(seed in any::<u64>()) {
        let (mut g, src) = random_expr(seed);
        let e = parse_expr(&src).unwrap();
        let partial = partial_env(&mut g);
        if let Ok(s) = simplify(&e, &partial) {
            prop_assert_eq!(simplify(&s, &Env::new()).unwrap().to_string(), s.to_string());
        }
    }

    #[test]
    fn identity_items_do_not_change_aggregates(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let op = [AggregateOp::And, AggregateOp::Or, AggregateOp::Sum, AggregateOp::Product][g.rng().gen_range(0..4)];
        let k = g.rng().gen_range(0..5);
        let items: Vec<_> = (0..k)
            .map(|_| {
                let src = if op.element_type() == Type::Bool { g.bool_expr(2, true) } else { g.int_expr(2, true) };
                simplify(&parse_expr(&src).unwrap(), &Env::new())
            })
            .collect::<Result<_, _>>()
            .unwrap_or_default();
        let mut padded = items.clone();
        for _ in 0..g.rng().gen_range(1..4) {
            let at = g.rng().gen_range(0..=padded.len());
            padded.insert(at, op.identity());
        }
        let a = simplify(&assemble_aggregate(op, items), &Env::new());
        let b = simplify(&assemble_aggregate(op, padded), &Env::new());
        prop_assert_eq!(a.map(|e| e.to_string()).ok(), b.map(|e| e.to_string()).ok());
    }

    #[test]
    fn rewrite_is_static_and_weakening(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        g.set_scope(&["i", "j"]);
        let op = if g.rng().gen_bool(0.5) { AggregateOp::And } else { AggregateOp::Or };
        let src = g.bool_expr(5, true);
        let ret = parse_expr(&src).unwrap();
        let ri = IntRange::new(g.rng().gen_range(-2..=2), g.rng().gen_range(0..=5));
        let rj = IntRange::new(g.rng().gen_range(-2..=2), g.rng().gen_range(0..=5));
        let induction: BTreeMap<String, IntRange> =
            [("i".to_string(), ri), ("j".to_string(), rj)].into();
        let m = bound(&format!("{DECLS}such that true\n"), 4);
        let rw = lift_static_guard(&ret, &induction, &Type::Bool, &m).unwrap();

        prop_assert_eq!(rw.reconstruct().to_string(), ret.to_string());
        prop_assert_eq!(classify(&rw.rewritten, &["i", "j", "n"]), Class::Static);
        prop_assert_eq!(rw.dummies.len(), rw.replaced.len());

        // Every pair whose item is not the identity must satisfy the identity
        // constraint for some dummy values.
        let mut env = Env::new();
        env.insert("n".into(), Value::Int(4));
        let constraint = differs_from_identity(rw.rewritten.clone(), op);
        for i in ri.iter() {
            for j in rj.iter() {
                env.insert("i".into(), Value::Int(i));
                env.insert("j".into(), Value::Int(j));
                let Ok(item) = simplify(&ret, &env) else { continue };
                if item == op.identity() {
                    continue;
                }
                let mut found = false;
                for bits in 0u32..(1 << rw.dummies.len()) {
                    let mut e2 = env.clone();
                    for (k, d) in rw.dummies.iter().enumerate() {
                        e2.insert(d.name.clone(), Value::Bool(bits >> k & 1 == 1));
                    }
                    if eval_static(&constraint, &e2).ok() == Some(Value::Bool(true)) {
                        found = true;
                        break;
                    }
                }
                prop_assert!(found, "i={} j={} item={} rewritten={}", i, j, item, rw.rewritten);
            }
        }
    }

    #[test]
    fn solver_matches_brute_force(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (src, n) = g.comprehension_model();
        let m = bound(&src, n);
        let (c, ctx) = only_comprehension(&m);
        for mode in [Mode::Simple, Mode::Full] {
            let gm = build_generator_model(&c, ctx, mode, &m).unwrap();
            let Ok(oracle) = brute_force_solutions(&gm) else { continue };
            let solved: BTreeSet<Vec<i64>> = solver_solutions(&gm).unwrap();
            let symbolic = gm.vars.iter().any(|v| v.name.starts_with("__") && matches!(v.domain, VarDomain::Int(_)));
            if symbolic {
                prop_assert!(solved.is_superset(&oracle), "{}\n{}", src, gm);
            } else {
                prop_assert_eq!(&solved, &oracle, "{}\n{}", src, gm);
            }
        }
    }
}
