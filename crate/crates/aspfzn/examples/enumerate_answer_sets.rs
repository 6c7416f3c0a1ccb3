//! Brute-force enumeration of constraint answer sets: the choice program
//! with a weight constraint and a reified linear condition has exactly
//! eight of them.
//!
//! Run with: cargo run --example enumerate_answer_sets

use aspfzn::aspif::{Atom, BodyKind, HeadKind, Lit, Rule};
use aspfzn::oracle::{enumerate_answer_sets, DEFAULT_CAP};
use aspfzn::theory::{CmpOp, LinearConstraint};
use aspfzn::{CaspSpec, GroundProgram};

fn main() {
    // {a; b} <- c.   <- 3 <= {a: 1, b: 2}.   c <- not d.
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
    for a in 1..=4 {
        p.register_atom(Atom(a));
    }

    // d <-> x + y != 3 with x in 0..2, y in 0..1.
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

    let names = ["a", "b", "c", "d"];
    let sets = enumerate_answer_sets(&p, &spec, DEFAULT_CAP).unwrap();
    println!("{} constraint answer sets:", sets.len());
    for e in &sets {
        let atoms: Vec<&str> =
            e.atoms.iter().map(|a| names[a.0 as usize - 1]).collect();
        let vals: Vec<String> =
            e.assignment.iter().map(|(v, x)| format!("{v}={x}")).collect();
        println!("  {{{}}} with {}", atoms.join(", "), vals.join(", "));
    }
}
