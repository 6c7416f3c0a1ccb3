//! Ranked supported model checks: a true atom needs a rule whose body fires
//! at strictly smaller ranks, with an SCC-modular refinement that only
//! compares ranks inside the atom's component.

use std::collections::{BTreeMap, BTreeSet};

use crate::analysis::{build_dep_graph, SccInfo};
use crate::aspif::{Atom, BodyKind, GroundProgram, Rule};

/// Sentinel rank of false atoms.
pub const INF_RANK: i64 = i64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportVariant {
    /// Every positive body atom must have a strictly smaller rank.
    Ranked,
    /// Ranks are compared only inside SCC_P(a) and true atoms must have
    /// rank at most their component size.
    ModularScc,
}

/// Checks whether (I, ranks) is a (modular scc-) ranked supported model.
/// Returns human-readable diagnostics on failure.
pub fn check_ranked_supported(
    p: &GroundProgram,
    atoms: &BTreeSet<Atom>,
    ranks: &BTreeMap<Atom, i64>,
    variant: SupportVariant,
) -> Result<(), Vec<String>> {
    let scc = build_dep_graph(p);
    let mut errs = Vec::new();
    for &a in &p.atoms {
        let r = ranks.get(&a).copied().unwrap_or(INF_RANK);
        if atoms.contains(&a) {
            if r == INF_RANK {
                errs.push(format!("true atom {a} has infinite rank"));
            } else if variant == SupportVariant::ModularScc && r > scc.size_of(a) as i64 {
                errs.push(format!("atom {a} has rank {r} above its component size"));
            }
        } else if r != INF_RANK {
            errs.push(format!("false atom {a} has finite rank {r}"));
        }
    }
    for (i, r) in p.rules.iter().enumerate() {
        if body_holds(r, atoms) && !r.is_choice() {
            let satisfied = r.head_atoms().iter().any(|a| atoms.contains(a));
            if !satisfied && !r.head_atoms().is_empty() {
                errs.push(format!("rule {i} fires but no head atom is true"));
            }
            if r.head_atoms().is_empty() {
                errs.push(format!("constraint {i} is violated"));
            }
        }
    }
    for &a in atoms {
        let supported = p
            .rules
            .iter()
            .any(|r| supports(r, a, atoms, ranks, &scc, variant));
        if !supported {
            errs.push(format!("atom {a} is not supported"));
        }
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

fn body_holds(r: &Rule, atoms: &BTreeSet<Atom>) -> bool {
    match &r.body {
        BodyKind::Normal { pos, neg } => {
            pos.iter().all(|b| atoms.contains(b)) && neg.iter().all(|b| !atoms.contains(b))
        }
        BodyKind::Weighted { bound, terms } => {
            let sum: i64 = terms
                .iter()
                .filter(|(l, _)| atoms.contains(&l.atom) == l.positive)
                .map(|(_, w)| *w)
                .sum();
            sum >= *bound
        }
    }
}

fn supports(
    r: &Rule,
    a: Atom,
    atoms: &BTreeSet<Atom>,
    ranks: &BTreeMap<Atom, i64>,
    scc: &SccInfo,
    variant: SupportVariant,
) -> bool {
    if !r.head_atoms().contains(&a) {
        return false;
    }
    if !r.is_choice() && r.head_atoms().len() > 1 {
        // A disjunctive rule supports a only if a is its sole true head.
        let true_heads = r.head_atoms().iter().filter(|h| atoms.contains(h)).count();
        if true_heads != 1 {
            return false;
        }
    }
    let rank = |b: Atom| ranks.get(&b).copied().unwrap_or(INF_RANK);
    let ra = rank(a);
    let smaller = |b: Atom| match variant {
        SupportVariant::Ranked => rank(b) < ra,
        SupportVariant::ModularScc => {
            atoms.contains(&b) && (!scc.same_scc(a, b) || rank(b) < ra)
        }
    };
    match &r.body {
        BodyKind::Normal { pos, neg } => {
            pos.iter().all(|b| smaller(*b)) && neg.iter().all(|b| !atoms.contains(b))
        }
        BodyKind::Weighted { bound, terms } => {
            let sum: i64 = terms
                .iter()
                .filter(|(l, _)| {
                    if l.positive {
                        smaller(l.atom)
                    } else {
                        !atoms.contains(&l.atom)
                    }
                })
                .map(|(_, w)| *w)
                .sum();
            sum >= *bound
        }
    }
}

/// Searches exhaustively for a rank assignment making (I, ranks) a ranked
/// supported model of the given variant. Ranks of true atoms range over
/// [1, n] for the plain variant and [1, |SCC(a)|] for the modular one.
pub fn exists_rank_assignment(
    p: &GroundProgram,
    atoms: &BTreeSet<Atom>,
    variant: SupportVariant,
) -> bool {
    let scc = build_dep_graph(p);
    let true_atoms: Vec<Atom> = atoms.iter().copied().collect();
    let limits: Vec<i64> = true_atoms
        .iter()
        .map(|a| match variant {
            SupportVariant::Ranked => p.atoms.len() as i64,
            SupportVariant::ModularScc => scc.size_of(*a) as i64,
        })
        .collect();
    let mut ranks: BTreeMap<Atom, i64> = BTreeMap::new();
    let mut current: Vec<i64> = limits.iter().map(|_| 1).collect();
    loop {
        ranks.clear();
        for (a, r) in true_atoms.iter().zip(&current) {
            ranks.insert(*a, *r);
        }
        if check_ranked_supported(p, atoms, &ranks, variant).is_ok() {
            return true;
        }
        let mut k = 0;
        loop {
            if k == current.len() {
                return false;
            }
            if current[k] < limits[k] {
                current[k] += 1;
                break;
            }
            current[k] = 1;
            k += 1;
        }
    }
}
