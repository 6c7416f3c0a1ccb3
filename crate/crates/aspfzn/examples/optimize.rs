//! Optimization end to end: a minimize statement over atoms plus a linear
//! objective term become one FlatZinc objective, and the translation's
//! optimum matches the brute-force oracle.
//!
//! Run with: cargo run --example optimize

use aspfzn::aspif::{Atom, BodyKind, HeadKind, Lit, MinimizeStatement, Rule};
use aspfzn::fzn::{emit_fzn, EmitOptions};
use aspfzn::oracle::{optimal_cost, DEFAULT_CAP};
use aspfzn::theory::{CmpOp, LinearConstraint};
use aspfzn::{translate, CaspSpec, GroundProgram, TranslateOptions};
use aspfzn::analysis::build_dep_graph;

fn main() {
    // {a; b}.   <- not a, not b.   lin <-> x >= 1, x in 0..3.
    // minimize a:2, b:1 plus the linear term 3*x.
    let mut p = GroundProgram {
        rules: vec![
            Rule {
                head: HeadKind::Choice(vec![Atom(1), Atom(2)]),
                body: BodyKind::Normal { pos: vec![], neg: vec![] },
            },
            Rule {
                head: HeadKind::Disjunctive(vec![]),
                body: BodyKind::Normal { pos: vec![], neg: vec![Atom(1), Atom(2)] },
            },
        ],
        ..Default::default()
    };
    for a in 1..=3 {
        p.register_atom(Atom(a));
    }
    p.minimize = Some(MinimizeStatement {
        terms: vec![(Lit::pos(Atom(1)), 2, 0), (Lit::pos(Atom(2)), 1, 0)],
    });

    let mut spec = CaspSpec::default();
    spec.vars.insert("x".to_string());
    spec.domains.insert("x".to_string(), (0, 3));
    spec.lin_atoms.insert(
        Atom(3),
        LinearConstraint { terms: vec![("x".into(), 1)], op: CmpOp::Ge, rhs: 1 },
    );
    spec.lin_objective.push(("x".to_string(), 3));

    let scc = build_dep_graph(&p);
    let out = translate(&p, &spec, &scc, TranslateOptions::default()).unwrap();
    let fzn = emit_fzn(&out.model, EmitOptions { linearized: false }).unwrap();
    for line in fzn.lines().filter(|l| l.contains("objective") || l.starts_with("solve")) {
        println!("{line}");
    }

    let cost = optimal_cost(&p, &spec, TranslateOptions::default(), DEFAULT_CAP).unwrap();
    println!("optimal cost: {cost:?}");
    // Best answer set: {b} with x = 0, cost 1.
    assert_eq!(cost, Some(1));
}
