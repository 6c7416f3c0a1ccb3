//! Seeded generators for randomized test suites: small head-cycle-free
//! programs with optional linear variables, shift-requiring disjunctive
//! programs and small constraint models. All generators are deterministic
//! in the seed.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::analysis::{build_dep_graph, is_hcf};
use crate::aspif::{Atom, BodyKind, GroundProgram, HeadKind, Lit, MinimizeStatement, Rule};
use crate::ir::{BLit, Constraint, ConstraintModel};
use crate::theory::{CaspSpec, CmpOp, LinearConstraint};

#[derive(Debug, Clone)]
pub struct ProgramConfig {
    pub max_atoms: usize,
    pub max_rules: usize,
    /// Linear variables reified into dedicated atoms; those atoms never
    /// occur in rule heads.
    pub max_lin_vars: usize,
    pub max_domain_width: i64,
    pub with_minimize: bool,
}

impl Default for ProgramConfig {
    fn default() -> Self {
        ProgramConfig {
            max_atoms: 8,
            max_rules: 10,
            max_lin_vars: 2,
            max_domain_width: 3,
            with_minimize: false,
        }
    }
}

pub fn rng_from_seed(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Positive body occurrences avoid `heads`: tautological rules (a head
/// atom in its own positive body) are rejected by the parser, so the
/// corpus must not contain them.
fn random_body(rng: &mut StdRng, pool: &[Atom], heads: &[Atom]) -> BodyKind {
    let pos_pool: Vec<Atom> =
        pool.iter().copied().filter(|a| !heads.contains(a)).collect();
    if rng.gen_bool(0.3) && pool.len() >= 2 {
        let k = rng.gen_range(2..=3.min(pool.len()));
        let terms: Vec<(Lit, i64)> = (0..k)
            .map(|_| {
                let lit = if rng.gen_bool(0.7) && !pos_pool.is_empty() {
                    Lit::pos(pos_pool[rng.gen_range(0..pos_pool.len())])
                } else {
                    Lit::neg(pool[rng.gen_range(0..pool.len())])
                };
                (lit, rng.gen_range(1..=2))
            })
            .collect();
        let total: i64 = terms.iter().map(|(_, w)| *w).sum();
        BodyKind::Weighted { bound: rng.gen_range(1..=total), terms }
    } else {
        let np = rng.gen_range(0..=3.min(pos_pool.len()));
        let nn = rng.gen_range(0..=2.min(pool.len()));
        BodyKind::Normal {
            pos: (0..np).map(|_| pos_pool[rng.gen_range(0..pos_pool.len())]).collect(),
            neg: (0..nn).map(|_| pool[rng.gen_range(0..pool.len())]).collect(),
        }
    }
}

fn random_head(rng: &mut StdRng, heads: &[Atom]) -> HeadKind {
    let pick = |rng: &mut StdRng, k: usize| -> Vec<Atom> {
        let mut out = Vec::new();
        while out.len() < k {
            let a = heads[rng.gen_range(0..heads.len())];
            if !out.contains(&a) {
                out.push(a);
            }
        }
        out
    };
    match rng.gen_range(0..10) {
        0 | 1 => {
            let k = rng.gen_range(1..=2.min(heads.len()));
            HeadKind::Choice(pick(rng, k))
        }
        2 if heads.len() >= 2 => HeadKind::Disjunctive(pick(rng, 2)),
        3 => HeadKind::Disjunctive(vec![]),
        _ => HeadKind::Disjunctive(pick(rng, 1)),
    }
}

/// A random head-cycle-free program with an optional linear layer.
/// Retries internally until the head-cycle-free filter passes.
pub fn random_program(rng: &mut StdRng, cfg: &ProgramConfig) -> (GroundProgram, CaspSpec) {
    loop {
        let n_head = rng.gen_range(2..=cfg.max_atoms.max(2));
        let n_lin = rng.gen_range(0..=cfg.max_lin_vars);
        let head_atoms: Vec<Atom> = (1..=n_head as u32).map(Atom).collect();
        let lin_atoms: Vec<Atom> =
            (n_head as u32 + 1..=(n_head + n_lin) as u32).map(Atom).collect();
        let pool: Vec<Atom> = head_atoms.iter().chain(&lin_atoms).copied().collect();

        let mut spec = CaspSpec::default();
        let var_names = ["x", "y"];
        for (i, a) in lin_atoms.iter().enumerate() {
            let name = var_names[i].to_string();
            let lb = rng.gen_range(-1..=1);
            let width = rng.gen_range(1..=cfg.max_domain_width);
            spec.vars.insert(name.clone());
            spec.domains.insert(name.clone(), (lb, lb + width - 1));
            let ops = [CmpOp::Le, CmpOp::Lt, CmpOp::Ge, CmpOp::Gt, CmpOp::Eq, CmpOp::Ne];
            spec.lin_atoms.insert(
                *a,
                LinearConstraint {
                    terms: vec![(name, rng.gen_range(1..=2))],
                    op: ops[rng.gen_range(0..ops.len())],
                    rhs: rng.gen_range(-2..=2),
                },
            );
        }

        let n_rules = rng.gen_range(1..=cfg.max_rules);
        let rules: Vec<Rule> = (0..n_rules)
            .map(|_| {
                let head = random_head(rng, &head_atoms);
                let hs = match &head {
                    HeadKind::Choice(v) | HeadKind::Disjunctive(v) => v.clone(),
                };
                Rule { head, body: random_body(rng, &pool, &hs) }
            })
            .collect();
        let mut p = GroundProgram { rules, ..Default::default() };
        for a in &pool {
            p.register_atom(*a);
        }
        if cfg.with_minimize {
            let levels = rng.gen_range(1..=2);
            let mut terms: Vec<(Lit, i64, i64)> = Vec::new();
            for a in &head_atoms {
                if rng.gen_bool(0.5) {
                    let lit = if rng.gen_bool(0.8) { Lit::pos(*a) } else { Lit::neg(*a) };
                    terms.push((lit, rng.gen_range(1..=3), rng.gen_range(0..levels)));
                }
            }
            if !terms.is_empty() {
                p.minimize = Some(MinimizeStatement { terms });
            }
            if n_lin > 0 && rng.gen_bool(0.5) {
                for v in spec.vars.clone() {
                    spec.lin_objective.push((v, rng.gen_range(-2..=2)));
                }
            }
        }
        let scc = build_dep_graph(&p);
        if is_hcf(&p, &scc) {
            return (p, spec);
        }
    }
}

/// A random program guaranteed to contain a disjunctive rule that needs
/// shifting: a proper disjunctive head whose first atom feeds back into the
/// body through an extra rule.
pub fn random_shift_program(rng: &mut StdRng, cfg: &ProgramConfig) -> GroundProgram {
    loop {
        let (mut p, _) = random_program(rng, &ProgramConfig { max_lin_vars: 0, ..cfg.clone() });
        let heads: Vec<Atom> = p.atoms.iter().copied().collect();
        if heads.len() < 3 {
            continue;
        }
        let (a, b, c) = (heads[0], heads[1], heads[2]);
        if rng.gen_bool(0.5) {
            // a | b <- c with the cycle c <- a.
            p.rules.push(Rule {
                head: HeadKind::Disjunctive(vec![a, b]),
                body: BodyKind::Normal { pos: vec![c], neg: vec![] },
            });
        } else {
            // Weighted variant of the same shape.
            p.rules.push(Rule {
                head: HeadKind::Disjunctive(vec![a, b]),
                body: BodyKind::Weighted { bound: 1, terms: vec![(Lit::pos(c), 1)] },
            });
        }
        p.rules.push(Rule {
            head: HeadKind::Disjunctive(vec![c]),
            body: BodyKind::Normal { pos: vec![a], neg: vec![] },
        });
        let scc = build_dep_graph(&p);
        if is_hcf(&p, &scc) {
            return p;
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub max_bools: usize,
    pub max_ints: usize,
    pub max_constraints: usize,
    pub max_domain_width: i64,
    /// Bound on the product of all domain sizes, keeping brute force cheap.
    pub max_domain_product: u128,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            max_bools: 4,
            max_ints: 3,
            max_constraints: 6,
            max_domain_width: 5,
            max_domain_product: 100_000,
        }
    }
}

/// A random constraint model mixing clauses, reifications, linear
/// constraints and globals, with a bounded total domain product.
pub fn random_model(rng: &mut StdRng, cfg: &ModelConfig) -> ConstraintModel {
    loop {
        let mut m = ConstraintModel::default();
        let nb = rng.gen_range(1..=cfg.max_bools);
        let ni = rng.gen_range(1..=cfg.max_ints);
        let bools: Vec<_> = (0..nb).map(|i| m.new_bool(format!("b{i}"))).collect();
        let ints: Vec<_> = (0..ni)
            .map(|i| {
                let lb = rng.gen_range(-3..=3);
                let ub = lb + rng.gen_range(0..cfg.max_domain_width);
                m.new_int(format!("z{i}"), lb, ub)
            })
            .collect();
        let blit = |rng: &mut StdRng, bools: &[crate::ir::VarId]| {
            let v = bools[rng.gen_range(0..bools.len())];
            if rng.gen_bool(0.5) { BLit::pos(v) } else { BLit::neg(v) }
        };
        let terms = |rng: &mut StdRng| {
            let k = rng.gen_range(1..=ints.len().min(2));
            (0..k)
                .map(|_| {
                    let w = if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=2i64);
                    (ints[rng.gen_range(0..ints.len())], w)
                })
                .collect::<Vec<_>>()
        };
        for _ in 0..rng.gen_range(1..=cfg.max_constraints) {
            let c = match rng.gen_range(0..8) {
                0 => {
                    let k = rng.gen_range(1..=3);
                    Constraint::Clause((0..k).map(|_| blit(rng, &bools)).collect())
                }
                1 => Constraint::ReifCon {
                    lits: (0..rng.gen_range(1..=2)).map(|_| blit(rng, &bools)).collect(),
                    reif: bools[rng.gen_range(0..bools.len())],
                },
                2 => Constraint::ReifClause {
                    lits: (0..rng.gen_range(1..=2)).map(|_| blit(rng, &bools)).collect(),
                    reif: bools[rng.gen_range(0..bools.len())],
                },
                3 => Constraint::LinLe { terms: terms(rng), rhs: rng.gen_range(-3..=5) },
                4 => Constraint::LinEq { terms: terms(rng), rhs: rng.gen_range(-3..=5) },
                5 => Constraint::LinNe { terms: terms(rng), rhs: rng.gen_range(-3..=5) },
                6 => {
                    let ops =
                        [CmpOp::Le, CmpOp::Lt, CmpOp::Ge, CmpOp::Gt, CmpOp::Eq, CmpOp::Ne];
                    Constraint::ReifLin {
                        terms: terms(rng),
                        op: ops[rng.gen_range(0..ops.len())],
                        rhs: rng.gen_range(-3..=5),
                        reif: bools[rng.gen_range(0..bools.len())],
                    }
                }
                _ => {
                    if ints.len() >= 2 {
                        Constraint::Distinct(ints.clone())
                    } else {
                        Constraint::Clause(vec![blit(rng, &bools)])
                    }
                }
            };
            m.add(c);
        }
        let product: u128 = m
            .vars
            .iter()
            .enumerate()
            .map(|(i, _)| {
                let (lb, ub) = m.bounds(crate::ir::VarId(i as u32));
                (ub - lb + 1) as u128
            })
            .product();
        if product <= cfg.max_domain_product {
            return m;
        }
    }
}
