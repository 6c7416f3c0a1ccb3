//! Translates a small program into FlatZinc, once as-is and once
//! linearized for MIP backends, and prints the output-mapping sidecar.
//!
//! Run with: cargo run --example translate_to_flatzinc

use aspfzn::analysis::{build_dep_graph, partially_shift};
use aspfzn::aspif::{Atom, BodyKind, HeadKind, Lit, Rule};
use aspfzn::fzn::{emit_fzn, EmitOptions, OutputMap};
use aspfzn::linearize::linearize;
use aspfzn::theory::{CmpOp, LinearConstraint};
use aspfzn::{translate, CaspSpec, GroundProgram, TranslateOptions};

/// {a; b} <- c.   <- 3 <= {a: 1, b: 2}.   c <- not d.
/// d <-> x + y != 3 with x in 0..2, y in 0..1.
fn build() -> (GroundProgram, CaspSpec) {
    let mut p = GroundProgram {
        rules: vec![
            Rule {
                head: HeadKind::Choice(vec![Atom(1), Atom(2)]),
                body: BodyKind::Normal { pos: vec![Atom(3)], neg: vec![] },
            },
            Rule {
                head: HeadKind::Disjunctive(vec![]),
                body: BodyKind::Weighted {
                    bound: 3,
                    terms: vec![(Lit::pos(Atom(1)), 1), (Lit::pos(Atom(2)), 2)],
                },
            },
            Rule {
                head: HeadKind::Disjunctive(vec![Atom(3)]),
                body: BodyKind::Normal { pos: vec![], neg: vec![Atom(4)] },
            },
        ],
        ..Default::default()
    };
    for (a, name) in [(1, "a"), (2, "b"), (3, "c"), (4, "d")] {
        p.register_atom(Atom(a));
        p.shows.insert(Atom(a), name.to_string());
    }
    let mut spec = CaspSpec::default();
    for (v, dom) in [("x", (0, 2)), ("y", (0, 1))] {
        spec.vars.insert(v.to_string());
        spec.domains.insert(v.to_string(), dom);
    }
    spec.lin_atoms.insert(
        Atom(4),
        LinearConstraint {
            terms: vec![("x".into(), 1), ("y".into(), 1)],
            op: CmpOp::Ne,
            rhs: 3,
        },
    );
    (p, spec)
}

fn main() {
    let (p, spec) = build();
    let scc0 = build_dep_graph(&p);
    let shifted = partially_shift(&p, &scc0).unwrap();
    let scc = build_dep_graph(&shifted);
    let out = translate(&shifted, &spec, &scc, TranslateOptions::default()).unwrap();

    println!("% ---- FlatZinc ----");
    print!("{}", emit_fzn(&out.model, EmitOptions { linearized: false }).unwrap());

    let lin = linearize(&out.model).unwrap();
    println!("% ---- linearized FlatZinc ----");
    print!("{}", emit_fzn(&lin, EmitOptions { linearized: true }).unwrap());

    println!("% ---- output mapping ----");
    let map = OutputMap::build(&shifted, &out).unwrap();
    print!("{}", map.to_text());
}
