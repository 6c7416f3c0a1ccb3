//! End-to-end acceptance checks. Each test prints one summary line so the
//! suite doubles as a report when run with --nocapture.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use aspfzn::analysis::{build_dep_graph, partially_shift};
use aspfzn::aspif::{Atom, BodyKind, HeadKind, Lit, Rule};
use aspfzn::oracle::{
    check_correspondence, enumerate_answer_sets, enumerate_ir_models, interpretation_cost,
    optimal_cost, project_model, EInterpretation, Verdict, DEFAULT_CAP,
};
use aspfzn::random::{
    random_model, random_program, random_shift_program, rng_from_seed, ModelConfig,
    ProgramConfig,
};
use aspfzn::theory::{CaspSpec, CmpOp, LinearConstraint};
use aspfzn::translate::{translate, TranslateOptions};
use aspfzn::linearize::linearize;
use aspfzn::GroundProgram;

fn report(criterion: usize, what: &str, ok: bool) {
    println!("criterion {criterion} ({what}): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion} failed: {what}");
}

fn normal(heads: &[u32], choice: bool, pos: &[u32], neg: &[u32]) -> Rule {
    let atoms = heads.iter().map(|&a| Atom(a)).collect();
    Rule {
        head: if choice { HeadKind::Choice(atoms) } else { HeadKind::Disjunctive(atoms) },
        body: BodyKind::Normal {
            pos: pos.iter().map(|&a| Atom(a)).collect(),
            neg: neg.iter().map(|&a| Atom(a)).collect(),
        },
    }
}

/// {a; b} <- c.   <- 3 <= {a: 1, b: 2}.   c <- not d.   (a=1 b=2 c=3 d=4)
fn worked_example() -> GroundProgram {
    let mut p = GroundProgram {
        rules: vec![
            normal(&[1, 2], true, &[3], &[]),
            Rule {
                head: HeadKind::Disjunctive(vec![]),
                body: BodyKind::Weighted {
                    bound: 3,
                    terms: vec![(Lit::pos(Atom(1)), 1), (Lit::pos(Atom(2)), 2)],
                },
            },
            normal(&[3], false, &[], &[4]),
        ],
        ..Default::default()
    };
    for a in 1..=4 {
        p.register_atom(Atom(a));
    }
    p
}

/// Adds x in 0..2, y in 0..1 with atom d reifying x + y != 3.
fn worked_example_spec() -> CaspSpec {
    let mut spec = CaspSpec::default();
    spec.vars.extend(["x".to_string(), "y".to_string()]);
    spec.domains.insert("x".into(), (0, 2));
    spec.domains.insert("y".into(), (0, 1));
    spec.lin_atoms.insert(
        Atom(4),
        LinearConstraint {
            terms: vec![("x".into(), 1), ("y".into(), 1)],
            op: CmpOp::Ne,
            rhs: 3,
        },
    );
    spec
}

fn atom_sets(sets: &BTreeSet<EInterpretation>) -> BTreeSet<Vec<u32>> {
    sets.iter().map(|e| e.atoms.iter().map(|a| a.0).collect()).collect()
}

#[test]
fn criterion_1_worked_examples() {
    let start = Instant::now();
    let p = worked_example();

    let plain = enumerate_answer_sets(&p, &CaspSpec::default(), DEFAULT_CAP).unwrap();
    let expected: BTreeSet<Vec<u32>> =
        [vec![3], vec![1, 3], vec![2, 3]].into_iter().collect();
    let plain_ok = atom_sets(&plain) == expected;

    let spec = worked_example_spec();
    let extended = enumerate_answer_sets(&p, &spec, DEFAULT_CAP).unwrap();
    let mut want = BTreeSet::new();
    for x in 0..=2i64 {
        for y in 0..=1i64 {
            let assignment: BTreeMap<String, i64> =
                [("x".to_string(), x), ("y".to_string(), y)].into_iter().collect();
            if x + y != 3 {
                want.insert(EInterpretation {
                    atoms: [Atom(4)].into_iter().collect(),
                    assignment,
                });
            } else {
                for atoms in [vec![3], vec![1, 3], vec![2, 3]] {
                    want.insert(EInterpretation {
                        atoms: atoms.iter().map(|&a| Atom(a)).collect(),
                        assignment: assignment.clone(),
                    });
                }
            }
        }
    }
    let extended_ok = extended == want && extended.len() == 8;
    let fast = start.elapsed().as_secs_f64() < 1.0;
    report(1, "worked examples", plain_ok && extended_ok && fast);
}

fn corpus(n: usize, seed: u64) -> Vec<(GroundProgram, CaspSpec)> {
    let cfg = ProgramConfig::default();
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| random_program(&mut rng, &cfg)).collect()
}

#[test]
fn criterion_2_strict_one_to_one() {
    let mut ok = true;
    for (i, (p, spec)) in corpus(500, 20).iter().enumerate() {
        let verdict =
            check_correspondence(p, spec, TranslateOptions { strict: true }, DEFAULT_CAP)
                .unwrap_or_else(|e| panic!("instance {i}: {e}"));
        if verdict != Verdict::OneToOne {
            eprintln!("instance {i}: {verdict:?}\n{}", p.to_aspif_text());
            ok = false;
            break;
        }
    }
    report(2, "strict translation is one-to-one on 500 random programs", ok);
}

#[test]
fn criterion_3_non_strict_projection_and_rank_uniqueness() {
    let mut ok = true;
    for (i, (p, spec)) in corpus(500, 20).iter().enumerate() {
        let verdict =
            check_correspondence(p, spec, TranslateOptions { strict: false }, DEFAULT_CAP)
                .unwrap_or_else(|e| panic!("instance {i}: {e}"));
        if matches!(verdict, Verdict::Mismatch { .. }) {
            eprintln!("instance {i}: {verdict:?}");
            ok = false;
            break;
        }

        // Strict-mode models that agree on the atoms also agree on every
        // rank variable.
        let scc0 = build_dep_graph(p);
        let shifted = partially_shift(p, &scc0).unwrap();
        let scc = build_dep_graph(&shifted);
        let out =
            translate(&shifted, spec, &scc, TranslateOptions { strict: true }).unwrap();
        let models = enumerate_ir_models(&out.model, DEFAULT_CAP).unwrap();
        let mut by_proj: BTreeMap<EInterpretation, Vec<&Vec<i64>>> = BTreeMap::new();
        for m in &models {
            by_proj.entry(project_model(&out, m)).or_default().push(m);
        }
        for group in by_proj.values() {
            for m in &group[1..] {
                for v in out.rank_vars.values() {
                    if m[v.idx()] != group[0][v.idx()] {
                        eprintln!("instance {i}: rank differs within a projection group");
                        ok = false;
                    }
                }
            }
        }
        if !ok {
            break;
        }
    }
    report(3, "non-strict projection equality and strict rank uniqueness", ok);
}

#[test]
fn criterion_4_shifting_preserves_answer_sets() {
    let cfg = ProgramConfig::default();
    let mut rng = rng_from_seed(33);
    let mut ok = true;
    for i in 0..100 {
        let p = random_shift_program(&mut rng, &cfg);
        let original: BTreeSet<Atom> = p.atoms.clone();
        let before = enumerate_answer_sets(&p, &CaspSpec::default(), DEFAULT_CAP).unwrap();
        let scc = build_dep_graph(&p);
        let shifted = partially_shift(&p, &scc).unwrap();
        let after = enumerate_answer_sets(&shifted, &CaspSpec::default(), DEFAULT_CAP).unwrap();
        let project = |sets: &BTreeSet<EInterpretation>| -> BTreeSet<Vec<u32>> {
            sets.iter()
                .map(|e| {
                    e.atoms.iter().filter(|a| original.contains(a)).map(|a| a.0).collect()
                })
                .collect()
        };
        if project(&before) != project(&after) {
            eprintln!("instance {i}: projections differ\n{}", p.to_aspif_text());
            ok = false;
            break;
        }
    }
    report(4, "partial shifting preserves answer sets on original atoms", ok);
}

#[test]
fn criterion_5_linearization_equivalence() {
    let cfg = ModelConfig::default();
    let mut rng = rng_from_seed(44);
    let mut ok = true;
    for i in 0..200 {
        let m = random_model(&mut rng, &cfg);
        let lin = linearize(&m).unwrap();
        let keep = m.vars.len();
        let before: BTreeSet<Vec<i64>> = enumerate_ir_models(&m, DEFAULT_CAP)
            .unwrap()
            .into_iter()
            .collect();
        let after: BTreeSet<Vec<i64>> = enumerate_ir_models(&lin, DEFAULT_CAP)
            .unwrap()
            .into_iter()
            .map(|mut a| {
                a.truncate(keep);
                a
            })
            .collect();
        if before != after {
            eprintln!("instance {i}: solution sets differ");
            ok = false;
            break;
        }
    }
    report(5, "linearization preserves solution sets on 200 random models", ok);
}

#[test]
fn criterion_6_tight_programs_skip_ranking() {
    let cfg = ProgramConfig::default();
    let mut rng = rng_from_seed(55);
    let mut checked = 0;
    let mut ok = true;
    while checked < 100 {
        let (p, spec) = random_program(&mut rng, &cfg);
        let scc0 = build_dep_graph(&p);
        let shifted = partially_shift(&p, &scc0).unwrap();
        let scc = build_dep_graph(&shifted);
        if !scc.is_tight() {
            continue;
        }
        checked += 1;
        let out = translate(&shifted, &spec, &scc, TranslateOptions { strict: true }).unwrap();
        if out.stats.ranking != 0 || !out.rank_vars.is_empty() {
            ok = false;
            break;
        }
    }
    report(6, "tight programs produce no ranking constraints", ok);
}

#[test]
fn criterion_7_optimization_agreement() {
    let cfg = ProgramConfig { with_minimize: true, ..ProgramConfig::default() };
    let mut rng = rng_from_seed(66);
    let mut checked = 0;
    let mut ok = true;
    while checked < 100 {
        let (p, spec) = random_program(&mut rng, &cfg);
        if p.minimize.is_none() && spec.lin_objective.is_empty() {
            continue;
        }
        checked += 1;
        let got = optimal_cost(&p, &spec, TranslateOptions { strict: true }, DEFAULT_CAP)
            .unwrap_or_else(|e| panic!("instance {checked}: {e}"));
        let sets = {
            let scc = build_dep_graph(&p);
            let shifted = partially_shift(&p, &scc).unwrap();
            enumerate_answer_sets(&shifted, &spec, DEFAULT_CAP).unwrap()
        };
        let want = sets.iter().filter_map(|e| interpretation_cost(&p, &spec, e)).min();
        if got != want {
            eprintln!("instance {checked}: translation {got:?} vs oracle {want:?}");
            ok = false;
            break;
        }
    }
    report(7, "minimum objective agrees with the oracle's optimal cost", ok);
}

#[test]
fn criterion_8_end_to_end_external_solver() {
    // Requires an installed solving toolchain; reports SKIPPED otherwise.
    let available = std::process::Command::new("minizinc")
        .arg("--version")
        .output()
        .is_ok();
    if !available {
        println!("criterion 8 (end-to-end via external solver): SKIPPED (minizinc not found)");
        return;
    }
    use std::io::Write;
    let fixture = include_str!("fixtures/listing1.aspif");
    let mut child = std::process::Command::new(env!("CARGO_BIN_EXE_asp-fzn"))
        .args(["-a", "-s", "gecode"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(fixture.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    let blocks: BTreeSet<BTreeSet<&str>> = text
        .split("----------\n")
        .map(str::trim)
        .filter(|b| !b.is_empty() && !b.starts_with('='))
        .map(|b| b.split_whitespace().collect())
        .collect();
    let expect: BTreeSet<BTreeSet<&str>> = [
        vec!["a", "c", "val(x,2)", "val(y,1)"],
        vec!["b", "c", "val(x,2)", "val(y,1)"],
        vec!["c", "val(x,2)", "val(y,1)"],
        vec!["d", "val(x,0)", "val(y,0)"],
        vec!["d", "val(x,0)", "val(y,1)"],
        vec!["d", "val(x,1)", "val(y,0)"],
        vec!["d", "val(x,1)", "val(y,1)"],
        vec!["d", "val(x,2)", "val(y,0)"],
    ]
    .into_iter()
    .map(|v| v.into_iter().collect())
    .collect();
    report(8, "end-to-end via external solver", blocks == expect);
}

#[test]
fn criterion_9_benchmark_scope_is_documented() {
    // The original competition benchmarks are not reproduced here; the
    // README must say so explicitly instead of implying parity.
    let readme = include_str!("../../../README.md");
    let ok = readme.contains("not reproduced")
        && readme.to_lowercase().contains("benchmark");
    report(9, "benchmark non-reproducibility statement present", ok);
}
