//! Parses an ASPIF program with a theory layer and prints what was read:
//! rules, shown atoms, linear variables and reified constraints.
//!
//! Run with: cargo run --example parse_program

use aspfzn::{extract_casp, parse_aspif};

const PROGRAM: &str = "\
asp 1 0 0
1 1 2 1 2 0 1 3
1 0 0 1 3 2 1 1 2 2
1 0 1 3 0 1 -4
1 0 1 4 0 1 5
9 0 1 0
9 0 2 2
9 1 3 2 ..
9 2 4 3 2 1 2
9 4 1 1 4 0
9 1 5 3 dom
9 1 6 1 =
9 1 7 1 x
9 6 0 5 1 1 6 7
9 0 8 1
9 2 9 3 2 1 8
9 4 2 1 9 0
9 1 10 1 y
9 6 0 5 1 2 6 10
9 4 3 1 7 0
9 4 4 1 10 0
9 1 11 3 sum
9 1 12 2 !=
9 0 13 3
9 6 5 11 2 3 4 12 13
4 1 a 1 1
4 1 b 1 2
4 1 c 1 3
4 1 d 1 4
0
";

fn main() {
    let program = parse_aspif(PROGRAM.as_bytes()).unwrap();
    println!("{} rules over {} atoms", program.rules.len(), program.atoms.len());
    for r in &program.rules {
        println!("  {r:?}");
    }
    println!("shown atoms:");
    for (atom, display) in &program.shows {
        println!("  {} -> {display}", atom.0);
    }

    let spec = extract_casp(&program).unwrap();
    println!("linear variables:");
    for v in &spec.vars {
        let (lb, ub) = spec.domains[v];
        println!("  {v} in {lb}..{ub}");
    }
    println!("reified linear constraints:");
    for (atom, lc) in &spec.lin_atoms {
        println!("  atom {} <-> {lc:?}", atom.0);
    }
}
