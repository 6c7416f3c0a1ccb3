//! Translation of a partially shifted HCF ground program plus its CASP
//! layer into a [`ConstraintModel`].
//!
//! The encoding has four constraint groups: level-ranking constraints over
//! the nontrivial SCCs of the positive dependency graph, per-rule body
//! constraints (Clark completion, with dependency variables standing in for
//! intra-SCC body atoms), per-rule head constraints (disjunctive completion
//! and support variables), and one support clause per non-theory atom.
//! Strict mode adds the gap constraints that make models correspond 1-1 to
//! answer sets; without them the correspondence is many-to-one.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::analysis::SccInfo;
use crate::aspif::{
    compile_priorities, AspifError, Atom, BodyKind, GroundProgram, Lit, Rule,
};
use crate::ir::{BLit, Constraint, ConstraintModel, IntArg, VarId};
use crate::theory::{CaspSpec, CaspVal, CmpOp, GlobalConstraint};

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error(transparent)]
    NotHcf(#[from] crate::analysis::AnalysisError),
    #[error("rule {0}: disjunctive head overlaps a body SCC; program is not partially shifted")]
    PartialShiftViolation(usize),
    #[error("linear variable {0} has no domain; apply fallback bounds first")]
    MissingDomain(String),
    #[error("objective weights overflow during priority compilation")]
    ObjectiveOverflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TranslateOptions {
    /// Emit the gap constraints enforcing a strict (gap-free) ranking.
    pub strict: bool,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions { strict: true }
    }
}

/// Constraint counts per translation group.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TranslateStats {
    pub ranking: usize,
    pub body: usize,
    pub head: usize,
    pub support: usize,
    pub theory: usize,
}

#[derive(Debug, Clone)]
pub struct TranslateOutput {
    pub model: ConstraintModel,
    /// Boolean variable of each program atom.
    pub atom_vars: BTreeMap<Atom, VarId>,
    /// Rank variable of each atom in a nontrivial SCC.
    pub rank_vars: BTreeMap<Atom, VarId>,
    /// Integer variable of each linear variable name.
    pub lin_vars: BTreeMap<String, VarId>,
    pub stats: TranslateStats,
}

/// Translates a partially shifted HCF program. `spec` must have a domain
/// for every linear variable.
pub fn translate(
    p: &GroundProgram,
    spec: &CaspSpec,
    scc: &SccInfo,
    opts: TranslateOptions,
) -> Result<TranslateOutput, TranslateError> {
    Translator::new(p, spec, scc, opts)?.run()
}

struct Translator<'a> {
    p: &'a GroundProgram,
    spec: &'a CaspSpec,
    scc: &'a SccInfo,
    opts: TranslateOptions,
    m: ConstraintModel,
    x: BTreeMap<Atom, VarId>,
    rank: BTreeMap<Atom, VarId>,
    dep: BTreeMap<(Atom, Atom), VarId>,
    y: BTreeMap<(Atom, Atom), VarId>,
    gap: BTreeMap<(Atom, Atom), VarId>,
    lin: BTreeMap<String, VarId>,
    /// Support variable per (rule index, head atom).
    sp: BTreeMap<(usize, Atom), VarId>,
    /// Constant-false variable for self-loop dependency literals.
    never: Option<VarId>,
    stats: TranslateStats,
}

impl<'a> Translator<'a> {
    fn new(
        p: &'a GroundProgram,
        spec: &'a CaspSpec,
        scc: &'a SccInfo,
        opts: TranslateOptions,
    ) -> Result<Self, TranslateError> {
        Ok(Translator {
            p,
            spec,
            scc,
            opts,
            m: ConstraintModel::default(),
            x: BTreeMap::new(),
            rank: BTreeMap::new(),
            dep: BTreeMap::new(),
            y: BTreeMap::new(),
            gap: BTreeMap::new(),
            lin: BTreeMap::new(),
            sp: BTreeMap::new(),
            never: None,
            stats: TranslateStats::default(),
        })
    }

    fn run(mut self) -> Result<TranslateOutput, TranslateError> {
        self.check_shifted()?;
        self.declare_vars()?;
        let before = self.m.constraints.len();
        self.tr_ranking();
        self.stats.ranking = self.m.constraints.len() - before;
        for (i, r) in self.p.rules.iter().enumerate() {
            let before = self.m.constraints.len();
            self.tr_body(i, r)?;
            self.stats.body += self.m.constraints.len() - before;
            let before = self.m.constraints.len();
            self.tr_head(i, r);
            self.stats.head += self.m.constraints.len() - before;
        }
        let before = self.m.constraints.len();
        self.tr_support();
        self.stats.support = self.m.constraints.len() - before;
        let before = self.m.constraints.len();
        self.tr_theory();
        self.stats.theory = self.m.constraints.len() - before;
        self.objective()?;
        Ok(TranslateOutput {
            model: self.m,
            atom_vars: self.x,
            rank_vars: self.rank,
            lin_vars: self.lin,
            stats: self.stats,
        })
    }

    fn check_shifted(&self) -> Result<(), TranslateError> {
        for (i, r) in self.p.rules.iter().enumerate() {
            if r.is_choice() || r.head_atoms().len() <= 1 {
                continue;
            }
            let pos = r.pos_body();
            let overlap = r
                .head_atoms()
                .iter()
                .any(|a| pos.iter().any(|b| self.scc.same_scc(*a, *b)));
            if overlap {
                return Err(TranslateError::PartialShiftViolation(i));
            }
        }
        Ok(())
    }

    fn declare_vars(&mut self) -> Result<(), TranslateError> {
        for &a in &self.p.atoms {
            let v = self.m.new_bool(format!("x_{}", a.0));
            self.x.insert(a, v);
        }
        for &a in &self.p.atoms {
            if self.scc.in_nontrivial(a) {
                let s = self.s_a(a);
                let v = self.m.new_int(format!("l_{}", a.0), 1, s);
                self.rank.insert(a, v);
            }
        }
        for (a, b) in self.intra_edges() {
            let d = self.m.new_bool(format!("dep_{}_{}", a.0, b.0));
            self.dep.insert((a, b), d);
            if self.opts.strict {
                let yv = self.m.new_bool(format!("y_{}_{}", a.0, b.0));
                self.y.insert((a, b), yv);
                let g = self.m.new_bool(format!("gap_{}_{}", a.0, b.0));
                self.gap.insert((a, b), g);
            }
        }
        for v in &self.spec.vars {
            let (l, u) = self
                .spec
                .domains
                .get(v)
                .copied()
                .ok_or_else(|| TranslateError::MissingDomain(v.clone()))?;
            let id = self.m.new_int(format!("v_{v}"), l, u);
            self.lin.insert(v.clone(), id);
        }
        Ok(())
    }

    /// Edges of the positive dependency graph inside one nontrivial SCC.
    fn intra_edges(&self) -> Vec<(Atom, Atom)> {
        let mut out = Vec::new();
        for (a, succs) in &self.scc.edges {
            for b in succs {
                if *a != *b && self.scc.same_scc(*a, *b) {
                    out.push((*a, *b));
                }
            }
        }
        out
    }

    /// Stand-in for dep or gap variables on self-loops: rank(a) < rank(a)
    /// never holds, so both are constant false.
    fn false_var(&mut self) -> VarId {
        if let Some(v) = self.never {
            return v;
        }
        let v = self.m.new_bool("never");
        self.m.add(Constraint::Clause(vec![BLit::neg(v)]));
        self.never = Some(v);
        v
    }

    /// s_a = |SCC(a)| + 1.
    fn s_a(&self, a: Atom) -> i64 {
        self.scc.size_of(a) as i64 + 1
    }

    fn tr_ranking(&mut self) {
        for (&a, &la) in &self.rank {
            let size = self.scc.size_of(a) as i64;
            self.m.add(Constraint::ReifLin {
                terms: vec![(la, 1)],
                op: CmpOp::Le,
                rhs: size,
                reif: self.x[&a],
            });
        }
        let edges: Vec<(Atom, Atom)> = self.dep.keys().copied().collect();
        for (a, b) in edges {
            let (la, lb) = (self.rank[&a], self.rank[&b]);
            self.m.add(Constraint::ReifLin {
                terms: vec![(la, 1), (lb, -1)],
                op: CmpOp::Ge,
                rhs: 1,
                reif: self.dep[&(a, b)],
            });
            if self.opts.strict {
                self.m.add(Constraint::ReifLin {
                    terms: vec![(la, 1), (lb, -1)],
                    op: CmpOp::Ge,
                    rhs: 2,
                    reif: self.y[&(a, b)],
                });
                self.m.add(Constraint::ReifCon {
                    lits: vec![
                        BLit::pos(self.x[&a]),
                        BLit::pos(self.x[&b]),
                        BLit::pos(self.y[&(a, b)]),
                    ],
                    reif: self.gap[&(a, b)],
                });
            }
        }
    }

    /// Pseudo-Boolean sum over body literals with negated atoms folded in:
    /// w * [not b] contributes -w * shadow(b) and w to the constant.
    fn pb_sum(&mut self, terms: &[(Lit, i64)], subst: &BTreeMap<Atom, VarId>) -> (Vec<(VarId, i64)>, i64) {
        let mut out: BTreeMap<VarId, i64> = BTreeMap::new();
        let mut constant = 0;
        for (l, w) in terms {
            let b = if l.positive {
                subst.get(&l.atom).copied().unwrap_or(self.x[&l.atom])
            } else {
                self.x[&l.atom]
            };
            let s = self.m.shadow(b);
            if l.positive {
                *out.entry(s).or_insert(0) += *w;
            } else {
                *out.entry(s).or_insert(0) -= *w;
                constant += *w;
            }
        }
        out.retain(|_, w| *w != 0);
        (out.into_iter().collect(), constant)
    }

    fn tr_body(&mut self, i: usize, r: &Rule) -> Result<(), TranslateError> {
        if r.is_constraint() {
            match &r.body {
                BodyKind::Normal { pos, neg } => {
                    let mut lits: Vec<BLit> =
                        pos.iter().map(|b| BLit::neg(self.x[b])).collect();
                    lits.extend(neg.iter().map(|b| BLit::pos(self.x[b])));
                    self.m.add(Constraint::Clause(lits));
                }
                BodyKind::Weighted { bound, terms } => {
                    let (terms, constant) = self.pb_sum(terms, &BTreeMap::new());
                    self.m.add(Constraint::LinLe { terms, rhs: bound - 1 - constant });
                }
            }
            return Ok(());
        }

        let tight: Vec<Atom> = self.scc.locally_tight_heads(r);
        if !tight.is_empty() {
            let bd = self.m.new_bool(format!("bd_{i}"));
            match &r.body {
                BodyKind::Normal { pos, neg } => {
                    let mut lits: Vec<BLit> =
                        pos.iter().map(|b| BLit::pos(self.x[b])).collect();
                    lits.extend(neg.iter().map(|b| BLit::neg(self.x[b])));
                    if lits.is_empty() {
                        // Empty conjunction: the body variable is just true.
                        self.m.add(Constraint::Clause(vec![BLit::pos(bd)]));
                    } else {
                        self.m.add(Constraint::ReifCon { lits, reif: bd });
                    }
                }
                BodyKind::Weighted { bound, terms } => {
                    let (terms, constant) = self.pb_sum(terms, &BTreeMap::new());
                    self.m.add(Constraint::ReifLin {
                        terms,
                        op: CmpOp::Ge,
                        rhs: bound - constant,
                        reif: bd,
                    });
                }
            }
            if self.opts.strict {
                for &a in &tight {
                    if self.scc.in_nontrivial(a) {
                        self.rank_one_forcing(a, bd);
                    }
                }
            }
        }

        let heads: Vec<Atom> = r.head_atoms().to_vec();
        for a in heads {
            if self.scc.locally_tight_heads(r).contains(&a) {
                continue;
            }
            match &r.body {
                BodyKind::Normal { pos, neg } => {
                    let bda = self.m.new_bool(format!("bda_{}_{}", i, a.0));
                    let mut lits = Vec::new();
                    let mut gaps = Vec::new();
                    for b in pos {
                        if *b == a {
                            let f = self.false_var();
                            lits.push(BLit::pos(f));
                        } else if self.scc.same_scc(a, *b) {
                            lits.push(BLit::pos(self.dep[&(a, *b)]));
                            if self.opts.strict {
                                gaps.push(BLit::neg(self.gap[&(a, *b)]));
                            }
                        } else {
                            lits.push(BLit::pos(self.x[b]));
                        }
                    }
                    lits.extend(neg.iter().map(|b| BLit::neg(self.x[b])));
                    self.m.add(Constraint::ReifCon { lits, reif: bda });
                    if self.opts.strict {
                        let mut clause = vec![BLit::neg(bda)];
                        clause.extend(gaps);
                        self.m.add(Constraint::Clause(clause));
                    }
                }
                BodyKind::Weighted { bound, terms } => {
                    if !r.is_choice() && r.head_atoms().len() > 1 {
                        return Err(TranslateError::PartialShiftViolation(i));
                    }
                    self.weighted_cyclic_body(i, a, *bound, terms);
                }
            }
        }
        Ok(())
    }

    /// Constraints for a head atom `a` of a weighted-body rule whose SCC
    /// overlaps the positive body: external/internal support variables, the
    /// support disjunction, and in strict mode the gap machinery.
    fn weighted_cyclic_body(&mut self, i: usize, a: Atom, bound: i64, terms: &[(Lit, i64)]) {
        let split = |l: &Lit| l.positive && self.scc.same_scc(a, l.atom);
        let external: Vec<(Lit, i64)> =
            terms.iter().filter(|(l, _)| !split(l)).copied().collect();
        let internal: Vec<(Lit, i64)> =
            terms.iter().filter(|(l, _)| split(l)).copied().collect();

        let ext = self.m.new_bool(format!("ext_{}_{}", i, a.0));
        let (t, c) = self.pb_sum(&external, &BTreeMap::new());
        self.m.add(Constraint::ReifLin { terms: t, op: CmpOp::Ge, rhs: bound - c, reif: ext });

        let int = self.m.new_bool(format!("int_{}_{}", i, a.0));
        let mut dep_subst: BTreeMap<Atom, VarId> = BTreeMap::new();
        for (l, _) in &internal {
            let d = if l.atom == a { self.false_var() } else { self.dep[&(a, l.atom)] };
            dep_subst.insert(l.atom, d);
        }
        let all: Vec<(Lit, i64)> = terms.to_vec();
        let (t, c) = self.pb_sum(&all, &dep_subst);
        self.m.add(Constraint::ReifLin { terms: t, op: CmpOp::Ge, rhs: bound - c, reif: int });

        if self.opts.strict {
            let aux = self.m.new_bool(format!("aux_{}_{}", i, a.0));
            let mut gap_subst: BTreeMap<Atom, VarId> = BTreeMap::new();
            for (l, _) in &internal {
                let g = if l.atom == a { self.false_var() } else { self.gap[&(a, l.atom)] };
                gap_subst.insert(l.atom, g);
            }
            let (t, c) = self.pb_sum(&all, &gap_subst);
            self.m.add(Constraint::ReifLin {
                terms: t,
                op: CmpOp::Le,
                rhs: bound - 1 - c,
                reif: aux,
            });
            self.m.add(Constraint::Clause(vec![
                BLit::pos(ext),
                BLit::pos(aux),
                BLit::neg(int),
            ]));
            if self.scc.in_nontrivial(a) {
                self.rank_one_forcing(a, ext);
            }
        }

        let bda = self.m.new_bool(format!("bda_{}_{}", i, a.0));
        self.m.add(Constraint::ReifClause {
            lits: vec![BLit::pos(ext), BLit::pos(int)],
            reif: bda,
        });
    }

    /// s_a * support + s_a * a + rank <= 2 s_a + 1: a supported head atom
    /// that is true gets rank 1.
    fn rank_one_forcing(&mut self, a: Atom, support: VarId) {
        let s = self.s_a(a);
        let sup = self.m.shadow(support);
        let xa = self.m.shadow(self.x[&a]);
        let la = self.rank[&a];
        self.m.add(Constraint::LinLe {
            terms: vec![(sup, s), (xa, s), (la, 1)],
            rhs: 2 * s + 1,
        });
    }

    /// Index of the freshly created body variable of rule `i`, if any.
    fn find_var(&self, name: &str) -> Option<VarId> {
        self.m
            .vars
            .iter()
            .position(|d| d.name == name)
            .map(|i| VarId(i as u32))
    }

    fn tr_head(&mut self, i: usize, r: &Rule) {
        if r.is_constraint() {
            return;
        }
        let heads: Vec<Atom> = r.head_atoms().to_vec();
        let bd = self.find_var(&format!("bd_{i}"));
        if !r.is_choice() && heads.len() > 1 {
            // Partial shifting guarantees every head atom is locally tight.
            let bd = bd.expect("disjunctive rule has a body variable");
            for &a in &heads {
                let sp = self.m.new_bool(format!("sp_{}_{}", i, a.0));
                self.sp.insert((i, a), sp);
                let mut lits = vec![BLit::pos(bd)];
                lits.extend(
                    heads.iter().filter(|b| **b != a).map(|b| BLit::neg(self.x[b])),
                );
                self.m.add(Constraint::ReifCon { lits, reif: sp });
                self.m.add(Constraint::Implication(BLit::pos(sp), BLit::pos(self.x[&a])));
            }
            let mut clause: Vec<BLit> = heads.iter().map(|a| BLit::pos(self.x[a])).collect();
            clause.push(BLit::neg(bd));
            self.m.add(Constraint::Clause(clause));
            return;
        }
        for &a in &heads {
            let sp = self.m.new_bool(format!("sp_{}_{}", i, a.0));
            self.sp.insert((i, a), sp);
            let pos = r.pos_body();
            let overlaps = pos.iter().any(|b| self.scc.same_scc(a, *b));
            let body_var = if overlaps {
                self.find_var(&format!("bda_{}_{}", i, a.0))
                    .expect("cyclic head atom has a per-head body variable")
            } else {
                bd.expect("locally tight head atom has a body variable")
            };
            self.m
                .add(Constraint::ReifClause { lits: vec![BLit::pos(body_var)], reif: sp });
            if !r.is_choice() {
                self.m.add(Constraint::Implication(BLit::pos(sp), BLit::pos(self.x[&a])));
            }
        }
    }

    fn tr_support(&mut self) {
        for &a in &self.p.atoms {
            if self.spec.lin_atoms.contains_key(&a) {
                continue;
            }
            let mut clause: Vec<BLit> = Vec::new();
            for (i, r) in self.p.rules.iter().enumerate() {
                if r.head_atoms().contains(&a) {
                    clause.push(BLit::pos(self.sp[&(i, a)]));
                }
            }
            clause.push(BLit::neg(self.x[&a]));
            self.m.add(Constraint::Clause(clause));
        }
    }

    fn tr_theory(&mut self) {
        for (a, lc) in &self.spec.lin_atoms {
            let terms: Vec<(VarId, i64)> =
                lc.terms.iter().map(|(v, w)| (self.lin[v], *w)).collect();
            self.m.add(Constraint::ReifLin {
                terms,
                op: lc.op,
                rhs: lc.rhs,
                reif: self.x[a],
            });
        }
        let arg = |lin: &BTreeMap<String, VarId>, v: &CaspVal| match v {
            CaspVal::Var(name) => IntArg::Var(lin[name]),
            CaspVal::Const(c) => IntArg::Const(*c),
        };
        for g in &self.spec.globals {
            let c = match g {
                GlobalConstraint::Distinct(vars) => {
                    Constraint::Distinct(vars.iter().map(|v| self.lin[v]).collect())
                }
                GlobalConstraint::Disjoint(tasks) => Constraint::Disjoint(
                    tasks.iter().map(|(s, l)| (arg(&self.lin, s), arg(&self.lin, l))).collect(),
                ),
                GlobalConstraint::Cumulative { tasks, bound } => Constraint::Cumulative {
                    tasks: tasks
                        .iter()
                        .map(|(s, l, r)| {
                            (arg(&self.lin, s), arg(&self.lin, l), arg(&self.lin, r))
                        })
                        .collect(),
                    bound: *bound,
                },
            };
            self.m.add(c);
        }
    }

    fn objective(&mut self) -> Result<(), TranslateError> {
        let min = match &self.p.minimize {
            Some(m) => compile_priorities(std::slice::from_ref(m)).map_err(|e| match e {
                AspifError::Overflow => TranslateError::ObjectiveOverflow,
                other => unreachable!("priority compilation only overflows: {other}"),
            })?,
            None => None,
        };
        let mut terms: BTreeMap<VarId, i64> = BTreeMap::new();
        let mut offset = 0;
        if let Some(min) = min {
            for (l, w, _) in min.terms {
                let s = self.m.shadow(self.x[&l.atom]);
                if l.positive {
                    *terms.entry(s).or_insert(0) += w;
                } else {
                    *terms.entry(s).or_insert(0) -= w;
                    offset += w;
                }
            }
        }
        for (v, w) in &self.spec.lin_objective {
            *terms.entry(self.lin[v]).or_insert(0) += *w;
        }
        if !terms.is_empty() || offset != 0 {
            terms.retain(|_, w| *w != 0);
            self.m.objective = Some(crate::ir::Objective {
                terms: terms.into_iter().collect(),
                offset,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::build_dep_graph;
    use crate::aspif::HeadKind;
    use crate::theory::extract_casp;

    fn prog(rules: Vec<Rule>) -> GroundProgram {
        let mut p = GroundProgram { rules, ..Default::default() };
        let rs = p.rules.clone();
        for r in &rs {
            for a in r.head_atoms() {
                p.register_atom(*a);
            }
            for a in r.pos_body().iter().chain(r.neg_body().iter()) {
                p.register_atom(*a);
            }
        }
        p
    }

    fn normal(head: u32, pos: &[u32], neg: &[u32]) -> Rule {
        Rule {
            head: HeadKind::Disjunctive(vec![Atom(head)]),
            body: BodyKind::Normal {
                pos: pos.iter().map(|&a| Atom(a)).collect(),
                neg: neg.iter().map(|&a| Atom(a)).collect(),
            },
        }
    }

    fn p1() -> GroundProgram {
        prog(vec![
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
            normal(3, &[], &[4]),
        ])
    }

    fn tr(p: &GroundProgram, strict: bool) -> TranslateOutput {
        let scc = build_dep_graph(p);
        let spec = extract_casp(p).unwrap();
        translate(p, &spec, &scc, TranslateOptions { strict }).unwrap()
    }

    #[test]
    fn tight_program_has_no_ranking() {
        let out = tr(&p1(), true);
        assert_eq!(out.stats.ranking, 0);
        assert!(out.rank_vars.is_empty());
    }

    #[test]
    fn two_cycle_ranking_counts() {
        // Q = { a <- b, b <- a }: two intra-SCC edges.
        let q = prog(vec![normal(1, &[2], &[]), normal(2, &[1], &[])]);
        let strict = tr(&q, true);
        assert_eq!(strict.stats.ranking, 8);
        assert_eq!(strict.rank_vars.len(), 2);
        for &la in strict.rank_vars.values() {
            assert_eq!(strict.model.bounds(la), (1, 3));
        }
        let nonstrict = tr(&q, false);
        assert_eq!(nonstrict.stats.ranking, 4);
    }

    #[test]
    fn weighted_constraint_is_pseudo_boolean() {
        // P1's constraint: x_a + 2 x_b <= 2 over the shadows.
        let out = tr(&p1(), true);
        let sa = out.model.shadows[&out.atom_vars[&Atom(1)]];
        let sb = out.model.shadows[&out.atom_vars[&Atom(2)]];
        assert!(out
            .model
            .constraints
            .contains(&Constraint::LinLe { terms: vec![(sa, 1), (sb, 2)], rhs: 2 }));
    }

    #[test]
    fn negated_weights_fold_into_rhs() {
        // <- 2 <= { not a : 2 }  ==>  -2 s_a <= -0 ... rhs 2-1-2 = -1.
        let p = prog(vec![Rule {
            head: HeadKind::Disjunctive(vec![]),
            body: BodyKind::Weighted { bound: 2, terms: vec![(Lit::neg(Atom(1)), 2)] },
        }]);
        let out = tr(&p, true);
        let sa = out.model.shadows[&out.atom_vars[&Atom(1)]];
        assert!(out
            .model
            .constraints
            .contains(&Constraint::LinLe { terms: vec![(sa, -2)], rhs: -1 }));
    }

    #[test]
    fn completion_of_negative_body() {
        // c <- not d: bd <-> not x_d.
        let out = tr(&p1(), true);
        let xd = out.atom_vars[&Atom(4)];
        let found = out.model.constraints.iter().any(|c| {
            matches!(c, Constraint::ReifCon { lits, .. } if lits == &vec![BLit::neg(xd)])
        });
        assert!(found);
    }

    #[test]
    fn cyclic_normal_body_uses_dep() {
        let q = prog(vec![normal(1, &[2], &[]), normal(2, &[1], &[])]);
        let out = tr(&q, true);
        // (a <- b) yields bda defined by the single dep literal.
        let found = out.model.constraints.iter().any(|c| {
            matches!(c, Constraint::ReifCon { lits, reif } if lits.len() == 1
                && out.model.name(lits[0].var).starts_with("dep_")
                && out.model.name(*reif).starts_with("bda_"))
        });
        assert!(found);
    }

    #[test]
    fn support_clause_shape() {
        let out = tr(&p1(), true);
        let xc = out.atom_vars[&Atom(3)];
        let found = out.model.constraints.iter().any(|c| {
            matches!(c, Constraint::Clause(lits) if lits.len() == 2
                && out.model.name(lits[0].var).starts_with("sp_")
                && lits[1] == BLit::neg(xc))
        });
        assert!(found);
        // d has no rules: unit clause not x_d.
        let xd = out.atom_vars[&Atom(4)];
        assert!(out
            .model
            .constraints
            .contains(&Constraint::Clause(vec![BLit::neg(xd)])));
    }

    #[test]
    fn lin_atoms_have_no_support_clause() {
        use crate::theory::{CmpOp, LinearConstraint};
        let mut p = prog(vec![normal(3, &[], &[4])]);
        p.register_atom(Atom(4));
        let mut spec = CaspSpec::default();
        spec.vars.insert("x".into());
        spec.domains.insert("x".into(), (0, 2));
        spec.lin_atoms.insert(
            Atom(4),
            LinearConstraint { terms: vec![("x".into(), 1)], op: CmpOp::Ne, rhs: 1 },
        );
        let scc = build_dep_graph(&p);
        let out = translate(&p, &spec, &scc, TranslateOptions::default()).unwrap();
        let xd = out.atom_vars[&Atom(4)];
        // Reified linear constraint present, support unit clause absent.
        assert!(out.model.constraints.iter().any(|c| {
            matches!(c, Constraint::ReifLin { reif, .. } if *reif == xd)
        }));
        assert!(!out
            .model
            .constraints
            .contains(&Constraint::Clause(vec![BLit::neg(xd)])));
    }

    #[test]
    fn empty_program_is_empty_model() {
        let out = tr(&GroundProgram::default(), true);
        assert!(out.model.vars.is_empty());
        assert!(out.model.constraints.is_empty());
        assert!(out.model.objective.is_none());
    }

    #[test]
    fn fact_forces_atom() {
        let p = prog(vec![normal(1, &[], &[])]);
        let out = tr(&p, true);
        // bd unit clause, sp <-> bd, sp -> x_a, support clause.
        assert_eq!(out.model.constraints.len(), 4);
        out.model.validate().unwrap();
    }

    #[test]
    fn unshifted_disjunction_rejected() {
        let p = prog(vec![
            Rule {
                head: HeadKind::Disjunctive(vec![Atom(1), Atom(2)]),
                body: BodyKind::Normal { pos: vec![Atom(3)], neg: vec![] },
            },
            normal(3, &[1], &[]),
        ]);
        let scc = build_dep_graph(&p);
        let spec = CaspSpec::default();
        let err = translate(&p, &spec, &scc, TranslateOptions::default()).unwrap_err();
        assert!(matches!(err, TranslateError::PartialShiftViolation(0)));
    }

    #[test]
    fn minimize_becomes_objective() {
        use crate::aspif::MinimizeStatement;
        let mut p = prog(vec![normal(1, &[], &[]), normal(2, &[], &[])]);
        p.minimize = Some(MinimizeStatement {
            terms: vec![(Lit::pos(Atom(1)), 2, 0), (Lit::neg(Atom(2)), 3, 0)],
        });
        let out = tr(&p, true);
        let obj = out.model.objective.unwrap();
        assert_eq!(obj.offset, 3);
        let sa = out.model.shadows[&out.atom_vars[&Atom(1)]];
        let sb = out.model.shadows[&out.atom_vars[&Atom(2)]];
        assert_eq!(obj.terms, vec![(sa, 2), (sb, -3)]);
    }

    #[test]
    fn strict_only_constraint_count_gap() {
        let q = prog(vec![normal(1, &[2], &[]), normal(2, &[1], &[])]);
        let strict = tr(&q, true);
        let nonstrict = tr(&q, false);
        // Strict adds y/gap definitions plus one gap clause per cyclic rule.
        assert!(strict.model.constraints.len() > nonstrict.model.constraints.len());
        strict.model.validate().unwrap();
        nonstrict.model.validate().unwrap();
    }

    #[test]
    fn model_validates() {
        let out = tr(&p1(), true);
        out.model.validate().unwrap();
    }
}
