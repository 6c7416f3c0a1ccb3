use std::collections::BTreeMap;

use super::program::{Lit, MinimizeStatement};
use super::AspifError;

/// Compiles prioritized minimize statements into a single level.
///
/// A term at priority level p is scaled by a factor F_p with F = 1 for the
/// lowest level and F' = F * (1 + sum of |w| over all lower-or-equal levels)
/// for the next one, which makes the scaled sum order coincide with the
/// lexicographic order of per-level costs.
pub fn compile_priorities(
    statements: &[MinimizeStatement],
) -> Result<Option<MinimizeStatement>, AspifError> {
    let mut by_prio: BTreeMap<i64, BTreeMap<Lit, i64>> = BTreeMap::new();
    for stmt in statements {
        for (lit, w, prio) in &stmt.terms {
            *by_prio.entry(*prio).or_default().entry(*lit).or_insert(0) += *w;
        }
    }
    by_prio.retain(|_, terms| {
        terms.retain(|_, w| *w != 0);
        !terms.is_empty()
    });
    if by_prio.is_empty() {
        return Ok(None);
    }

    let mut factor: i128 = 1;
    let mut abs_sum_below: i128 = 0;
    let mut merged: BTreeMap<Lit, i128> = BTreeMap::new();
    for (_, terms) in by_prio {
        let level_abs: i128 = terms.values().map(|w| i128::from(*w).abs()).sum();
        for (lit, w) in &terms {
            let scaled = i128::from(*w) * factor;
            *merged.entry(*lit).or_insert(0) += scaled;
        }
        abs_sum_below += level_abs;
        factor = factor
            .checked_mul(1 + abs_sum_below)
            .ok_or(AspifError::Overflow)?;
        if factor > i128::from(i64::MAX) {
            return Err(AspifError::Overflow);
        }
    }

    let mut out = Vec::new();
    for (lit, w) in merged {
        if w == 0 {
            continue;
        }
        let w = i64::try_from(w).map_err(|_| AspifError::Overflow)?;
        out.push((lit, w, 0));
    }
    Ok(Some(MinimizeStatement { terms: out }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aspif::Atom;

    fn lit(a: u32) -> Lit {
        Lit::pos(Atom(a))
    }

    #[test]
    fn single_level_unchanged() {
        let stmt = MinimizeStatement { terms: vec![(lit(1), 1, 0), (lit(2), 2, 0)] };
        let out = compile_priorities(&[stmt]).unwrap().unwrap();
        assert_eq!(out.terms, vec![(lit(1), 1, 0), (lit(2), 2, 0)]);
    }

    #[test]
    fn empty_absent() {
        assert!(compile_priorities(&[]).unwrap().is_none());
        let stmt = MinimizeStatement { terms: vec![] };
        assert!(compile_priorities(&[stmt]).unwrap().is_none());
    }

    #[test]
    fn two_levels_scaled() {
        // level 1: a:1; level 0: b:1, c:1  ==>  a:3, b:1, c:1
        let stmt = MinimizeStatement {
            terms: vec![(lit(1), 1, 1), (lit(2), 1, 0), (lit(3), 1, 0)],
        };
        let out = compile_priorities(&[stmt]).unwrap().unwrap();
        assert_eq!(out.terms, vec![(lit(1), 3, 0), (lit(2), 1, 0), (lit(3), 1, 0)]);
    }

    #[test]
    fn scaled_order_is_lexicographic() {
        // Brute force: all interpretations over 3 atoms, compare the order
        // induced by (level1 cost, level0 cost) with the scaled-sum order.
        let stmt = MinimizeStatement {
            terms: vec![(lit(1), 2, 1), (lit(2), 1, 0), (lit(3), 3, 0)],
        };
        let out = compile_priorities(std::slice::from_ref(&stmt)).unwrap().unwrap();
        let cost = |mask: u32, terms: &[(Lit, i64, i64)], prio: Option<i64>| -> i64 {
            terms
                .iter()
                .filter(|(_, _, p)| prio.is_none_or(|q| *p == q))
                .map(|(l, w, _)| if mask & (1 << (l.atom.0 - 1)) != 0 { *w } else { 0 })
                .sum()
        };
        for i in 0..8u32 {
            for j in 0..8u32 {
                let lex_i = (cost(i, &stmt.terms, Some(1)), cost(i, &stmt.terms, Some(0)));
                let lex_j = (cost(j, &stmt.terms, Some(1)), cost(j, &stmt.terms, Some(0)));
                let si = cost(i, &out.terms, None);
                let sj = cost(j, &out.terms, None);
                assert_eq!(lex_i.cmp(&lex_j), si.cmp(&sj), "masks {} {}", i, j);
            }
        }
    }

    #[test]
    fn overflow_detected() {
        let stmt = MinimizeStatement {
            terms: vec![(lit(1), i64::MAX / 2, 0), (lit(2), 1, 1)],
        };
        assert!(matches!(compile_priorities(&[stmt]), Err(AspifError::Overflow)));
    }
}
