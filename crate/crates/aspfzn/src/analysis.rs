//! Positive dependency graph, SCCs, tightness/HCF classification and
//! partial shifting.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::aspif::{Atom, BodyKind, GroundProgram, HeadKind, Rule};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("program is not head-cycle free: atoms {0} and {1} share a head and an SCC")]
    NotHcf(Atom, Atom),
}

/// Positive dependency graph together with its SCC decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccInfo {
    /// Edges (a, b) for a in H(r), b in B+(r).
    pub edges: BTreeMap<Atom, BTreeSet<Atom>>,
    pub scc_id: BTreeMap<Atom, usize>,
    pub scc_size: BTreeMap<usize, usize>,
    /// Component ids of cardinality > 1.
    pub nontrivial: BTreeSet<usize>,
}

impl SccInfo {
    pub fn is_tight(&self) -> bool {
        self.nontrivial.is_empty()
    }

    pub fn same_scc(&self, a: Atom, b: Atom) -> bool {
        self.scc_id.get(&a) == self.scc_id.get(&b) && self.scc_id.contains_key(&a)
    }

    /// |SCC_P(a)|.
    pub fn size_of(&self, a: Atom) -> usize {
        self.scc_id.get(&a).map_or(1, |id| self.scc_size[id])
    }

    pub fn in_nontrivial(&self, a: Atom) -> bool {
        self.scc_id.get(&a).is_some_and(|id| self.nontrivial.contains(id))
    }

    /// Head atoms of `r` that are locally tight, i.e. SCC_P(a) ∩ B+(r) = ∅.
    pub fn locally_tight_heads(&self, r: &Rule) -> Vec<Atom> {
        let pos = r.pos_body();
        r.head_atoms()
            .iter()
            .copied()
            .filter(|a| !pos.iter().any(|b| self.same_scc(*a, *b)))
            .collect()
    }
}

/// Builds DG+_P and its SCCs. Component ids are deterministic: they are
/// renumbered by the smallest atom id they contain.
pub fn build_dep_graph(p: &GroundProgram) -> SccInfo {
    let mut edges: BTreeMap<Atom, BTreeSet<Atom>> = BTreeMap::new();
    for r in &p.rules {
        let pos = r.pos_body();
        for a in r.head_atoms() {
            let entry = edges.entry(*a).or_default();
            for b in &pos {
                entry.insert(*b);
            }
        }
    }

    let atoms: Vec<Atom> = p.atoms.iter().copied().collect();
    let comps = tarjan(&atoms, &edges);

    let mut ordered: Vec<Vec<Atom>> = comps;
    ordered.sort_by_key(|c| c.iter().min().copied());

    let mut scc_id = BTreeMap::new();
    let mut scc_size = BTreeMap::new();
    let mut nontrivial = BTreeSet::new();
    for (id, comp) in ordered.iter().enumerate() {
        scc_size.insert(id, comp.len());
        if comp.len() > 1 {
            nontrivial.insert(id);
        }
        for a in comp {
            scc_id.insert(*a, id);
        }
    }
    SccInfo { edges, scc_id, scc_size, nontrivial }
}

/// Iterative Tarjan over atoms in ascending id order.
fn tarjan(atoms: &[Atom], edges: &BTreeMap<Atom, BTreeSet<Atom>>) -> Vec<Vec<Atom>> {
    #[derive(Default, Clone)]
    struct NodeState {
        index: Option<usize>,
        lowlink: usize,
        on_stack: bool,
    }

    let empty = BTreeSet::new();
    let mut state: BTreeMap<Atom, NodeState> = BTreeMap::new();
    let mut next_index = 0usize;
    let mut stack: Vec<Atom> = Vec::new();
    let mut comps: Vec<Vec<Atom>> = Vec::new();

    for &root in atoms {
        if state.get(&root).and_then(|s| s.index).is_some() {
            continue;
        }
        // frame: (node, iterator position over successors)
        let mut frames: Vec<(Atom, Vec<Atom>, usize)> = Vec::new();
        let succs: Vec<Atom> = edges.get(&root).unwrap_or(&empty).iter().copied().collect();
        let st = state.entry(root).or_default();
        st.index = Some(next_index);
        st.lowlink = next_index;
        st.on_stack = true;
        next_index += 1;
        stack.push(root);
        frames.push((root, succs, 0));

        while let Some((node, succs, i)) = frames.last_mut() {
            if let Some(&w) = succs.get(*i) {
                *i += 1;
                let w_state = state.entry(w).or_default();
                if w_state.index.is_none() {
                    w_state.index = Some(next_index);
                    w_state.lowlink = next_index;
                    w_state.on_stack = true;
                    next_index += 1;
                    stack.push(w);
                    let ws: Vec<Atom> =
                        edges.get(&w).unwrap_or(&empty).iter().copied().collect();
                    frames.push((w, ws, 0));
                } else if w_state.on_stack {
                    let wl = w_state.lowlink;
                    let node = *node;
                    let ns = state.get_mut(&node).unwrap();
                    ns.lowlink = ns.lowlink.min(wl);
                }
            } else {
                let node = *node;
                frames.pop();
                let ns = state[&node].clone();
                if ns.lowlink == ns.index.unwrap() {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        state.get_mut(&w).unwrap().on_stack = false;
                        comp.push(w);
                        if w == node {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
                if let Some((parent, _, _)) = frames.last() {
                    let parent = *parent;
                    let low = ns.lowlink;
                    let ps = state.get_mut(&parent).unwrap();
                    ps.lowlink = ps.lowlink.min(low);
                }
            }
        }
    }
    comps
}

/// True iff no rule has two distinct head atoms in the same SCC.
pub fn is_hcf(p: &GroundProgram, scc: &SccInfo) -> bool {
    find_head_cycle(p, scc).is_none()
}

fn find_head_cycle(p: &GroundProgram, scc: &SccInfo) -> Option<(Atom, Atom)> {
    for r in &p.rules {
        let heads = r.head_atoms();
        for (i, a) in heads.iter().enumerate() {
            for b in &heads[i + 1..] {
                if scc.same_scc(*a, *b) {
                    return Some((*a, *b));
                }
            }
        }
    }
    None
}

/// Rewrites the program so that every rule satisfies the shape the head and
/// body translations assume: weighted-body rules have at most one head atom
/// or heads disjoint from all positive-body SCCs, and every head atom of a
/// proper disjunction is locally tight.
///
/// Weighted-body violators are split through a fresh auxiliary atom
/// (aux <- B plus one shifted normal rule per head atom); normal-body
/// violators are shifted directly. Answer sets are preserved on the
/// original atoms. The caller must recompute [`SccInfo`] afterwards.
pub fn partially_shift(p: &GroundProgram, scc: &SccInfo) -> Result<GroundProgram, AnalysisError> {
    if let Some((a, b)) = find_head_cycle(p, scc) {
        return Err(AnalysisError::NotHcf(a, b));
    }

    let mut out = p.clone();
    let mut rules = Vec::with_capacity(p.rules.len());
    for r in &p.rules {
        if !needs_shift(r, scc) {
            rules.push(r.clone());
            continue;
        }
        let heads = r.head_atoms().to_vec();
        match &r.body {
            BodyKind::Weighted { .. } => {
                let aux = out.fresh_atom();
                rules.push(Rule {
                    head: HeadKind::Disjunctive(vec![aux]),
                    body: r.body.clone(),
                });
                for (i, a) in heads.iter().enumerate() {
                    let mut neg: Vec<Atom> = heads
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, b)| *b)
                        .collect();
                    neg.sort_unstable();
                    rules.push(Rule {
                        head: HeadKind::Disjunctive(vec![*a]),
                        body: BodyKind::Normal { pos: vec![aux], neg },
                    });
                }
            }
            BodyKind::Normal { pos, neg } => {
                for (i, a) in heads.iter().enumerate() {
                    let mut neg2 = neg.clone();
                    neg2.extend(
                        heads.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, b)| *b),
                    );
                    neg2.sort_unstable();
                    neg2.dedup();
                    rules.push(Rule {
                        head: HeadKind::Disjunctive(vec![*a]),
                        body: BodyKind::Normal { pos: pos.clone(), neg: neg2 },
                    });
                }
            }
        }
    }
    out.rules = rules;
    Ok(out)
}

/// A rule violates the translation's shape assumptions iff it is a proper
/// disjunction with a head atom that is not locally tight. (For choice
/// rules and |H| <= 1 the per-head body machinery handles SCC overlap.)
fn needs_shift(r: &Rule, scc: &SccInfo) -> bool {
    if r.is_choice() || r.head_atoms().len() <= 1 {
        return false;
    }
    let pos = r.pos_body();
    r.head_atoms().iter().any(|a| pos.iter().any(|b| scc.same_scc(*a, *b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aspif::Lit;

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

    /// P1 = { {a,b} <- c,  <- 3 <= {a:1, b:2},  c <- not d } with
    /// a=1, b=2, c=3, d=4.
    pub(crate) fn p1() -> GroundProgram {
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

    #[test]
    fn p1_graph_is_tight() {
        let p = p1();
        let s = build_dep_graph(&p);
        // Edges from the choice heads a and b to the positive body atom c.
        assert_eq!(s.edges[&Atom(1)], [Atom(3)].into_iter().collect());
        assert_eq!(s.edges[&Atom(2)], [Atom(3)].into_iter().collect());
        assert!(!s.edges.contains_key(&Atom(3)) || s.edges[&Atom(3)].is_empty());
        assert!(s.is_tight());
        assert!(s.nontrivial.is_empty());
        assert!(is_hcf(&p, &s));
    }

    #[test]
    fn two_cycle_not_tight() {
        let p = prog(vec![normal(1, &[2], &[]), normal(2, &[1], &[])]);
        let s = build_dep_graph(&p);
        assert!(!s.is_tight());
        assert!(s.same_scc(Atom(1), Atom(2)));
        assert_eq!(s.size_of(Atom(1)), 2);
    }

    #[test]
    fn empty_program_tight() {
        let p = GroundProgram::default();
        let s = build_dep_graph(&p);
        assert!(s.is_tight());
        assert!(s.edges.is_empty());
    }

    #[test]
    fn head_cycle_detected() {
        // { a | b <- c, a <- b, b <- a }: a and b share an SCC and a head.
        let p = prog(vec![
            Rule {
                head: HeadKind::Disjunctive(vec![Atom(1), Atom(2)]),
                body: BodyKind::Normal { pos: vec![Atom(3)], neg: vec![] },
            },
            normal(1, &[2], &[]),
            normal(2, &[1], &[]),
        ]);
        let s = build_dep_graph(&p);
        assert!(!is_hcf(&p, &s));
        assert!(partially_shift(&p, &s).is_err());
    }

    #[test]
    fn facts_are_hcf() {
        let p = prog(vec![normal(1, &[], &[]), normal(2, &[], &[])]);
        let s = build_dep_graph(&p);
        assert!(is_hcf(&p, &s));
    }

    #[test]
    fn conforming_program_unchanged() {
        let p = p1();
        let s = build_dep_graph(&p);
        let shifted = partially_shift(&p, &s).unwrap();
        assert_eq!(p, shifted);
    }

    #[test]
    fn weighted_disjunction_shifted_through_aux() {
        // { a | b <- 1 <= {c:1}, c <- a }: SCC {a, c} overlaps the body.
        let p = prog(vec![
            Rule {
                head: HeadKind::Disjunctive(vec![Atom(1), Atom(2)]),
                body: BodyKind::Weighted { bound: 1, terms: vec![(Lit::pos(Atom(3)), 1)] },
            },
            normal(3, &[1], &[]),
        ]);
        let s = build_dep_graph(&p);
        let shifted = partially_shift(&p, &s).unwrap();
        assert_eq!(shifted.rules.len(), 4);
        let aux = Atom(4);
        assert!(shifted.atoms.contains(&aux));
        assert_eq!(shifted.rules[0].head_atoms(), &[aux]);
        assert_eq!(shifted.rules[1].head_atoms(), &[Atom(1)]);
        assert_eq!(shifted.rules[1].pos_body(), vec![aux]);
        assert_eq!(shifted.rules[1].neg_body(), vec![Atom(2)]);
    }

    #[test]
    fn choice_rules_never_shifted() {
        let p = prog(vec![
            Rule {
                head: HeadKind::Choice(vec![Atom(1), Atom(2)]),
                body: BodyKind::Weighted { bound: 1, terms: vec![(Lit::pos(Atom(3)), 1)] },
            },
            normal(3, &[1], &[]),
        ]);
        let s = build_dep_graph(&p);
        let shifted = partially_shift(&p, &s).unwrap();
        assert_eq!(p, shifted);
    }

    #[test]
    fn normal_disjunction_with_cycle_shifted_directly() {
        // { a | b <- c, c <- a }: head a is not locally tight.
        let p = prog(vec![
            Rule {
                head: HeadKind::Disjunctive(vec![Atom(1), Atom(2)]),
                body: BodyKind::Normal { pos: vec![Atom(3)], neg: vec![] },
            },
            normal(3, &[1], &[]),
        ]);
        let s = build_dep_graph(&p);
        let shifted = partially_shift(&p, &s).unwrap();
        assert_eq!(shifted.rules.len(), 3);
        assert_eq!(shifted.rules[0], normal(1, &[3], &[2]));
        assert_eq!(shifted.rules[1], normal(2, &[3], &[1]));
    }

    #[test]
    fn dep_graph_idempotent() {
        let p = p1();
        assert_eq!(build_dep_graph(&p), build_dep_graph(&p));
    }
}
