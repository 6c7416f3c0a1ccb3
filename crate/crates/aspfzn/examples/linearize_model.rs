//! Builds a constraint model with clauses, reifications and a global
//! constraint, linearizes it to pure integer-linear form, and shows that
//! both versions have the same solutions on the original variables.
//!
//! Run with: cargo run --example linearize_model

use aspfzn::ir::{BLit, Constraint, ConstraintModel};
use aspfzn::linearize::linearize;
use aspfzn::oracle::enumerate_ir_models;
use aspfzn::theory::CmpOp;

fn main() {
    let mut m = ConstraintModel::default();
    let p = m.new_bool("p");
    let q = m.new_bool("q");
    let x = m.new_int("x", 0, 3);
    let y = m.new_int("y", 0, 3);
    m.add(Constraint::Clause(vec![BLit::pos(p), BLit::pos(q)]));
    m.add(Constraint::ReifLin {
        terms: vec![(x, 1), (y, 1)],
        op: CmpOp::Ge,
        rhs: 4,
        reif: p,
    });
    m.add(Constraint::Distinct(vec![x, y]));

    let lin = linearize(&m).unwrap();
    println!(
        "original: {} vars, {} constraints; linearized: {} vars, {} constraints",
        m.vars.len(),
        m.constraints.len(),
        lin.vars.len(),
        lin.constraints.len()
    );
    for c in &lin.constraints {
        println!("  {c:?}");
    }

    let keep = m.vars.len();
    let before = enumerate_ir_models(&m, 1 << 20).unwrap();
    let mut after: Vec<Vec<i64>> = enumerate_ir_models(&lin, 1 << 20)
        .unwrap()
        .into_iter()
        .map(|mut a| {
            a.truncate(keep);
            a
        })
        .collect();
    after.sort();
    after.dedup();
    println!("solutions before: {}, after projection: {}", before.len(), after.len());
    assert_eq!(before, after);
    println!("solution sets agree");
}
