//! Answer set enumeration from first principles: candidate interpretations
//! are bitmasks, answer sets are subset-minimal models of the reduct, and
//! the CASP conditions filter extended interpretations afterwards.

use std::collections::BTreeMap;

use super::{EInterpretation, OracleError};
use crate::aspif::{Atom, BodyKind, GroundProgram, HeadKind, Rule};
use crate::theory::CaspSpec;

/// Rule of a reduct: plain disjunction over a normal or weighted body.
struct ReductRule {
    head: u64,
    body: ReductBody,
}

enum ReductBody {
    Normal { pos: u64, neg: u64 },
    /// (bit, positive, weight) terms; reduction leaves positive terms only.
    Weighted { bound: i64, terms: Vec<(u64, bool, i64)> },
}

impl ReductBody {
    fn holds(&self, i: u64) -> bool {
        match self {
            ReductBody::Normal { pos, neg } => pos & i == *pos && neg & i == 0,
            ReductBody::Weighted { bound, terms } => {
                let sum: i64 = terms
                    .iter()
                    .filter(|(bit, positive, _)| (bit & i != 0) == *positive)
                    .map(|(_, _, w)| *w)
                    .sum();
                sum >= *bound
            }
        }
    }
}

struct Ground<'a> {
    rules: &'a [Rule],
    index: BTreeMap<Atom, usize>,
}

impl<'a> Ground<'a> {
    fn bit(&self, a: Atom) -> u64 {
        1u64 << self.index[&a]
    }

    fn head_mask(&self, r: &Rule) -> u64 {
        r.head_atoms().iter().fold(0, |m, a| m | self.bit(*a))
    }

    fn body_holds(&self, r: &Rule, i: u64) -> bool {
        match &r.body {
            BodyKind::Normal { pos, neg } => {
                pos.iter().all(|b| self.bit(*b) & i != 0)
                    && neg.iter().all(|b| self.bit(*b) & i == 0)
            }
            BodyKind::Weighted { bound, terms } => {
                let sum: i64 = terms
                    .iter()
                    .filter(|(l, _)| (self.bit(l.atom) & i != 0) == l.positive)
                    .map(|(_, w)| *w)
                    .sum();
                sum >= *bound
            }
        }
    }

    /// Classical satisfaction; choice heads never constrain.
    fn models(&self, i: u64) -> bool {
        self.rules.iter().all(|r| {
            r.is_choice() || !self.body_holds(r, i) || self.head_mask(r) & i != 0
        })
    }

    /// Reduces a body w.r.t. `i`: negative literals are fixed at their value
    /// under `i`, so they disappear and weighted bounds shrink by the
    /// weights of satisfied negative literals.
    fn reduce_body(&self, body: &BodyKind, i: u64) -> ReductBody {
        match body {
            BodyKind::Normal { pos, .. } => ReductBody::Normal {
                pos: pos.iter().fold(0, |m, b| m | self.bit(*b)),
                neg: 0,
            },
            BodyKind::Weighted { bound, terms } => {
                let false_neg: i64 = terms
                    .iter()
                    .filter(|(l, _)| !l.positive && self.bit(l.atom) & i == 0)
                    .map(|(_, w)| *w)
                    .sum();
                ReductBody::Weighted {
                    bound: (*bound - false_neg).max(0),
                    terms: terms
                        .iter()
                        .filter(|(l, _)| l.positive)
                        .map(|(l, w)| (self.bit(l.atom), true, *w))
                        .collect(),
                }
            }
        }
    }

    /// The reduct w.r.t. `i`: kept non-choice rules with satisfied bodies,
    /// and per true choice head a rule with that single head, all with
    /// reduced bodies.
    fn reduct(&self, i: u64) -> Vec<ReductRule> {
        let mut out = Vec::new();
        for r in self.rules {
            if !self.body_holds(r, i) {
                continue;
            }
            match &r.head {
                HeadKind::Disjunctive(_) => {
                    out.push(ReductRule {
                        head: self.head_mask(r),
                        body: self.reduce_body(&r.body, i),
                    });
                }
                HeadKind::Choice(heads) => {
                    for a in heads {
                        if self.bit(*a) & i == 0 {
                            continue;
                        }
                        out.push(ReductRule {
                            head: self.bit(*a),
                            body: self.reduce_body(&r.body, i),
                        });
                    }
                }
            }
        }
        out
    }

    fn is_answer_set(&self, i: u64) -> bool {
        if !self.models(i) {
            return false;
        }
        let reduct = self.reduct(i);
        let satisfies = |j: u64| {
            reduct.iter().all(|r| !r.body.holds(j) || r.head & j != 0)
        };
        if !satisfies(i) {
            return false;
        }
        // Subset minimality over all proper submasks of i.
        if i != 0 {
            let mut j = (i - 1) & i;
            loop {
                if satisfies(j) {
                    return false;
                }
                if j == 0 {
                    break;
                }
                j = (j - 1) & i;
            }
        }
        true
    }
}

/// Enumerates the constraint answer sets of a ground program. Theory atoms
/// reifying linear constraints become free choices, then extended
/// interpretations are filtered by the per-atom linear conditions and the
/// global constraints.
pub fn enumerate_answer_sets(
    p: &GroundProgram,
    spec: &CaspSpec,
    cap: u128,
) -> Result<std::collections::BTreeSet<EInterpretation>, OracleError> {
    let atoms: Vec<Atom> = p.atoms.iter().copied().collect();
    if atoms.len() > 63 {
        return Err(OracleError::TooManyAtoms);
    }
    let vars: Vec<&String> = spec.vars.iter().collect();
    let widths: Vec<i64> = vars
        .iter()
        .map(|v| {
            let (l, u) = spec.domains[v.as_str()];
            u - l + 1
        })
        .collect();
    let delta_count: u128 = widths.iter().map(|w| *w as u128).product();
    let required = (1u128 << atoms.len()) * delta_count.max(1);
    if required > cap {
        return Err(OracleError::SearchSpaceTooLarge { required, cap });
    }

    // Condition (1): answer set of the program with free choices added for
    // every linear atom.
    let mut rules = p.rules.clone();
    for a in spec.lin_atoms.keys() {
        rules.push(Rule {
            head: HeadKind::Choice(vec![*a]),
            body: BodyKind::Normal { pos: vec![], neg: vec![] },
        });
    }
    let index: BTreeMap<Atom, usize> =
        atoms.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    let g = Ground { rules: &rules, index };

    let mut out = std::collections::BTreeSet::new();
    for i in 0..(1u64 << atoms.len()) {
        if !g.is_answer_set(i) {
            continue;
        }
        let true_atoms: std::collections::BTreeSet<Atom> = atoms
            .iter()
            .filter(|a| g.bit(**a) & i != 0)
            .copied()
            .collect();
        // Walk every assignment within the domains.
        let mut delta: Vec<i64> = vars.iter().map(|v| spec.domains[v.as_str()].0).collect();
        loop {
            let assignment: BTreeMap<String, i64> = vars
                .iter()
                .zip(&delta)
                .map(|(v, d)| ((**v).clone(), *d))
                .collect();
            let lin_ok = spec.lin_atoms.iter().all(|(a, lc)| {
                true_atoms.contains(a) == lc.holds(&assignment)
            });
            let globals_ok = lin_ok && globals_hold(spec, &assignment);
            if globals_ok {
                out.insert(EInterpretation { atoms: true_atoms.clone(), assignment });
            }
            let mut k = 0;
            loop {
                if k == delta.len() {
                    break;
                }
                let (l, u) = spec.domains[vars[k].as_str()];
                if delta[k] < u {
                    delta[k] += 1;
                    break;
                }
                delta[k] = l;
                k += 1;
            }
            if k == delta.len() {
                break;
            }
        }
    }
    Ok(out)
}

fn globals_hold(spec: &CaspSpec, delta: &BTreeMap<String, i64>) -> bool {
    use crate::theory::GlobalConstraint;
    spec.globals.iter().all(|g| match g {
        GlobalConstraint::Distinct(vars) => {
            for (i, a) in vars.iter().enumerate() {
                for b in &vars[i + 1..] {
                    if delta[a] == delta[b] {
                        return false;
                    }
                }
            }
            true
        }
        GlobalConstraint::Disjoint(tasks) => {
            for (i, (s1, l1)) in tasks.iter().enumerate() {
                for (s2, l2) in &tasks[i + 1..] {
                    let (a1, d1) = (s1.value(delta), l1.value(delta));
                    let (a2, d2) = (s2.value(delta), l2.value(delta));
                    if !(a1 + d1 <= a2 || a2 + d2 <= a1) {
                        return false;
                    }
                }
            }
            true
        }
        GlobalConstraint::Cumulative { tasks, bound } => {
            let vals: Vec<(i64, i64, i64)> = tasks
                .iter()
                .map(|(s, l, r)| (s.value(delta), l.value(delta), r.value(delta)))
                .collect();
            let lo = vals.iter().map(|(s, _, _)| *s).min().unwrap_or(0);
            let hi = vals.iter().map(|(s, l, _)| s + l).max().unwrap_or(0);
            (lo..hi).all(|t| {
                vals.iter()
                    .filter(|(s, l, _)| *s <= t && t < s + l)
                    .map(|(_, _, r)| *r)
                    .sum::<i64>()
                    <= *bound
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aspif::Lit;
    use crate::oracle::DEFAULT_CAP;
    use std::collections::BTreeSet;

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

    fn atom_sets(
        sets: &std::collections::BTreeSet<EInterpretation>,
    ) -> BTreeSet<BTreeSet<Atom>> {
        sets.iter().map(|e| e.atoms.clone()).collect()
    }

    #[test]
    fn worked_example_answer_sets() {
        let spec = CaspSpec::default();
        let out = enumerate_answer_sets(&p1(), &spec, DEFAULT_CAP).unwrap();
        let expected: BTreeSet<BTreeSet<Atom>> = [
            [Atom(3)].into_iter().collect(),
            [Atom(3), Atom(1)].into_iter().collect(),
            [Atom(3), Atom(2)].into_iter().collect(),
        ]
        .into_iter()
        .collect();
        assert_eq!(atom_sets(&out), expected);
    }

    #[test]
    fn empty_program_has_empty_answer_set() {
        let out =
            enumerate_answer_sets(&GroundProgram::default(), &CaspSpec::default(), DEFAULT_CAP)
                .unwrap();
        assert_eq!(out.len(), 1);
        assert!(out.iter().next().unwrap().atoms.is_empty());
    }

    #[test]
    fn positive_cycle_unfounded() {
        // a <- b, b <- a: only the empty set.
        let p = prog(vec![normal(1, &[2], &[]), normal(2, &[1], &[])]);
        let out = enumerate_answer_sets(&p, &CaspSpec::default(), DEFAULT_CAP).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out.iter().next().unwrap().atoms.is_empty());
    }

    #[test]
    fn disjunction_is_minimal() {
        // a | b.  ==>  {a}, {b} but not {a,b}.
        let p = prog(vec![Rule {
            head: HeadKind::Disjunctive(vec![Atom(1), Atom(2)]),
            body: BodyKind::Normal { pos: vec![], neg: vec![] },
        }]);
        let out = enumerate_answer_sets(&p, &CaspSpec::default(), DEFAULT_CAP).unwrap();
        let expected: BTreeSet<BTreeSet<Atom>> = [
            [Atom(1)].into_iter().collect(),
            [Atom(2)].into_iter().collect(),
        ]
        .into_iter()
        .collect();
        assert_eq!(atom_sets(&out), expected);
    }

    #[test]
    fn choice_reduct_keeps_supported_sets() {
        // {a} <- not b.  ==>  {} and {a}.
        let p = prog(vec![Rule {
            head: HeadKind::Choice(vec![Atom(1)]),
            body: BodyKind::Normal { pos: vec![], neg: vec![Atom(2)] },
        }]);
        let out = enumerate_answer_sets(&p, &CaspSpec::default(), DEFAULT_CAP).unwrap();
        let expected: BTreeSet<BTreeSet<Atom>> =
            [BTreeSet::new(), [Atom(1)].into_iter().collect()].into_iter().collect();
        assert_eq!(atom_sets(&out), expected);
    }

    #[test]
    fn weighted_choice_reduct_bound() {
        // {a} <- 2 <= {b:1, not c:1}. With c false the bound drops to 1.
        let p = prog(vec![
            Rule {
                head: HeadKind::Choice(vec![Atom(1)]),
                body: BodyKind::Weighted {
                    bound: 2,
                    terms: vec![(Lit::pos(Atom(2)), 1), (Lit::neg(Atom(3)), 1)],
                },
            },
            normal(2, &[], &[]),
        ]);
        let out = enumerate_answer_sets(&p, &CaspSpec::default(), DEFAULT_CAP).unwrap();
        let expected: BTreeSet<BTreeSet<Atom>> = [
            [Atom(2)].into_iter().collect(),
            [Atom(1), Atom(2)].into_iter().collect(),
        ]
        .into_iter()
        .collect();
        assert_eq!(atom_sets(&out), expected);
    }

    #[test]
    fn constraint_prunes() {
        let mut p = prog(vec![normal(1, &[], &[])]);
        p.rules.push(Rule {
            head: HeadKind::Disjunctive(vec![]),
            body: BodyKind::Normal { pos: vec![Atom(1)], neg: vec![] },
        });
        let out = enumerate_answer_sets(&p, &CaspSpec::default(), DEFAULT_CAP).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn cap_enforced() {
        let mut p = GroundProgram::default();
        for i in 1..=10 {
            p.register_atom(Atom(i));
        }
        let err = enumerate_answer_sets(&p, &CaspSpec::default(), 16).unwrap_err();
        assert!(matches!(err, OracleError::SearchSpaceTooLarge { .. }));
    }
}
