//! Rewrites a constraint model into integer-programming standard form:
//! only `LinLe` and `LinEq` constraints over integer variables remain.
//!
//! Booleans enter through their 0-1 shadows. Reified linear constraints use
//! big-M terms with the smallest M the declared bounds admit. Globals are
//! decomposed (pairwise for Distinct/Disjoint, time-indexed for Cumulative)
//! into reified pieces which are then linearized in turn; note that the
//! time-indexed expansion grows with the horizon.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::ir::{BLit, Constraint, ConstraintModel, IntArg, LinTerms, VarId, VarKind};
use crate::theory::CmpOp;

#[derive(Debug, Error)]
pub enum LinearizeError {
    #[error("variable {0} has no finite bounds")]
    Unbounded(String),
    #[error("linear bounds overflow 64-bit arithmetic")]
    Overflow,
}

/// True iff the model is already in standard form.
pub fn is_linear(m: &ConstraintModel) -> bool {
    m.constraints
        .iter()
        .all(|c| matches!(c, Constraint::LinLe { .. } | Constraint::LinEq { .. }))
}

pub fn linearize(m: &ConstraintModel) -> Result<ConstraintModel, LinearizeError> {
    for def in &m.vars {
        if let VarKind::Int { lb, ub } = def.kind {
            if lb == i64::MIN || ub == i64::MAX {
                return Err(LinearizeError::Unbounded(def.name.clone()));
            }
        }
    }
    let mut out = m.clone();
    out.constraints = Vec::new();
    let mut queue: VecDeque<Constraint> = m.constraints.iter().cloned().collect();
    let mut fresh = 0usize;
    while let Some(c) = queue.pop_front() {
        rewrite(&mut out, c, &mut queue, &mut fresh)?;
    }
    Ok(out)
}

/// Linear expression `terms + constant` over integer variables.
#[derive(Default, Clone)]
struct Expr {
    terms: BTreeMap<VarId, i64>,
    constant: i64,
}

impl Expr {
    fn var(v: VarId) -> Self {
        let mut e = Expr::default();
        e.terms.insert(v, 1);
        e
    }

    fn constant(c: i64) -> Self {
        Expr { terms: BTreeMap::new(), constant: c }
    }

    fn add_term(&mut self, v: VarId, w: i64) {
        *self.terms.entry(v).or_insert(0) += w;
    }

    fn add(&mut self, other: &Expr, scale: i64) {
        for (v, w) in &other.terms {
            self.add_term(*v, w * scale);
        }
        self.constant += other.constant * scale;
    }

    /// Value of a literal as 0/1: the shadow for positive, 1 - shadow else.
    fn lit(m: &mut ConstraintModel, l: BLit) -> Self {
        let s = m.shadow(l.var);
        let mut e = Expr::default();
        if l.positive {
            e.add_term(s, 1);
        } else {
            e.add_term(s, -1);
            e.constant = 1;
        }
        e
    }

    fn arg(a: IntArg) -> Self {
        match a {
            IntArg::Var(v) => Expr::var(v),
            IntArg::Const(c) => Expr::constant(c),
        }
    }

    fn from_terms(terms: &LinTerms) -> Self {
        let mut e = Expr::default();
        for (v, w) in terms {
            e.add_term(*v, *w);
        }
        e
    }

    /// `self <= rhs` as a standard-form constraint.
    fn le(mut self, rhs: i64) -> Constraint {
        self.terms.retain(|_, w| *w != 0);
        Constraint::LinLe {
            terms: self.terms.into_iter().collect(),
            rhs: rhs - self.constant,
        }
    }

    /// `self >= rhs` as a standard-form constraint.
    fn ge(self, rhs: i64) -> Constraint {
        let mut neg = Expr::default();
        neg.add(&self, -1);
        neg.le(-rhs)
    }

    fn eq(mut self, rhs: i64) -> Constraint {
        self.terms.retain(|_, w| *w != 0);
        Constraint::LinEq {
            terms: self.terms.into_iter().collect(),
            rhs: rhs - self.constant,
        }
    }

    /// Attainable range under the declared bounds.
    fn range(&self, m: &ConstraintModel) -> Result<(i64, i64), LinearizeError> {
        let mut lo = i128::from(self.constant);
        let mut hi = lo;
        for (v, w) in &self.terms {
            let (lb, ub) = m.bounds(*v);
            let (a, b) = (i128::from(*w) * i128::from(lb), i128::from(*w) * i128::from(ub));
            lo += a.min(b);
            hi += a.max(b);
        }
        let lo = i64::try_from(lo).map_err(|_| LinearizeError::Overflow)?;
        let hi = i64::try_from(hi).map_err(|_| LinearizeError::Overflow)?;
        Ok((lo, hi))
    }
}

fn fresh_bool(m: &mut ConstraintModel, fresh: &mut usize) -> VarId {
    let v = m.new_bool(format!("lz_{}", *fresh));
    *fresh += 1;
    // The shadow always exists and sits right next to its Boolean, which
    // keeps derived variables adjacent for enumeration.
    m.shadow(v);
    v
}

/// Smallest M with `expr <= rhs + M` valid, i.e. the relaxed side of a
/// big-M split.
fn big_m_up(m: &ConstraintModel, e: &Expr, rhs: i64) -> Result<i64, LinearizeError> {
    let (_, hi) = e.range(m)?;
    Ok((hi - rhs).max(0))
}

fn big_m_down(m: &ConstraintModel, e: &Expr, rhs: i64) -> Result<i64, LinearizeError> {
    let (lo, _) = e.range(m)?;
    Ok((rhs - lo).max(0))
}

/// `reif -> expr <= rhs` and `!reif -> expr >= rhs + 1`, both via minimal
/// big-M over the shadow of `reif`.
fn reif_le(
    m: &mut ConstraintModel,
    e: &Expr,
    rhs: i64,
    reif: VarId,
) -> Result<Vec<Constraint>, LinearizeError> {
    let s = m.shadow(reif);
    let up = big_m_up(m, e, rhs)?;
    let mut c1 = e.clone();
    c1.add_term(s, up);
    let down = big_m_down(m, e, rhs + 1)?;
    let mut c2 = e.clone();
    c2.add_term(s, down);
    Ok(vec![c1.le(rhs + up), c2.ge(rhs + 1)])
}

fn rewrite(
    m: &mut ConstraintModel,
    c: Constraint,
    queue: &mut VecDeque<Constraint>,
    fresh: &mut usize,
) -> Result<(), LinearizeError> {
    match c {
        Constraint::LinLe { .. } | Constraint::LinEq { .. } => m.add(c),
        Constraint::Clause(lits) => {
            let mut e = Expr::default();
            for l in &lits {
                e.add(&Expr::lit(m, *l), 1);
            }
            m.add(e.ge(1));
        }
        Constraint::Implication(a, b) => {
            let mut e = Expr::lit(m, a);
            e.add(&Expr::lit(m, b), -1);
            m.add(e.le(0));
        }
        Constraint::ReifCon { lits, reif } => {
            let s = m.shadow(reif);
            let n = i64::try_from(lits.len()).expect("literal count fits i64");
            let mut sum = Expr::default();
            for l in &lits {
                let v = Expr::lit(m, *l);
                let mut e = Expr::var(s);
                e.add(&v, -1);
                m.add(e.le(0));
                sum.add(&v, 1);
            }
            sum.add_term(s, -1);
            m.add(sum.le(n - 1));
        }
        Constraint::ReifClause { lits, reif } => {
            let s = m.shadow(reif);
            let mut sum = Expr::default();
            for l in &lits {
                let v = Expr::lit(m, *l);
                let mut e = v.clone();
                e.add(&Expr::var(s), -1);
                m.add(e.le(0));
                sum.add(&v, 1);
            }
            let mut e = Expr::var(s);
            e.add(&sum, -1);
            m.add(e.le(0));
        }
        Constraint::LinNe { terms, rhs } => {
            if let Some(cst) = shadow_pair_ne(m, &terms, rhs) {
                m.add(cst);
                return Ok(());
            }
            // g chooses the side: LHS <= rhs - 1 or LHS >= rhs + 1.
            let e = Expr::from_terms(&terms);
            let g = fresh_bool(m, fresh);
            let s = m.shadow(g);
            let up = big_m_up(m, &e, rhs - 1)?;
            let mut c1 = e.clone();
            c1.add_term(s, up);
            m.add(c1.le(rhs - 1 + up));
            let down = big_m_down(m, &e, rhs + 1)?;
            let mut c2 = e.clone();
            c2.add_term(s, down);
            m.add(c2.ge(rhs + 1));
        }
        Constraint::ReifLin { terms, op, rhs, reif } => {
            let e = Expr::from_terms(&terms);
            match op {
                CmpOp::Le => {
                    for cst in reif_le(m, &e, rhs, reif)? {
                        m.add(cst);
                    }
                }
                CmpOp::Lt => queue.push_back(Constraint::ReifLin {
                    terms,
                    op: CmpOp::Le,
                    rhs: rhs - 1,
                    reif,
                }),
                CmpOp::Gt => queue.push_back(Constraint::ReifLin {
                    terms,
                    op: CmpOp::Ge,
                    rhs: rhs + 1,
                    reif,
                }),
                CmpOp::Ge => {
                    let neg: LinTerms = terms.iter().map(|(v, w)| (*v, -w)).collect();
                    queue.push_back(Constraint::ReifLin {
                        terms: neg,
                        op: CmpOp::Le,
                        rhs: -rhs,
                        reif,
                    });
                }
                CmpOp::Eq => {
                    let b1 = fresh_bool(m, fresh);
                    let b2 = fresh_bool(m, fresh);
                    let neg: LinTerms = terms.iter().map(|(v, w)| (*v, -w)).collect();
                    queue.push_back(Constraint::ReifLin {
                        terms,
                        op: CmpOp::Le,
                        rhs,
                        reif: b1,
                    });
                    queue.push_back(Constraint::ReifLin {
                        terms: neg,
                        op: CmpOp::Le,
                        rhs: -rhs,
                        reif: b2,
                    });
                    queue.push_back(Constraint::ReifCon {
                        lits: vec![BLit::pos(b1), BLit::pos(b2)],
                        reif,
                    });
                }
                CmpOp::Ne => {
                    let eq = fresh_bool(m, fresh);
                    queue.push_back(Constraint::ReifLin { terms, op: CmpOp::Eq, rhs, reif: eq });
                    let s1 = m.shadow(reif);
                    let s2 = m.shadow(eq);
                    let mut e = Expr::var(s1);
                    e.add_term(s2, 1);
                    m.add(e.eq(1));
                }
            }
        }
        Constraint::Distinct(vars) => {
            for (i, a) in vars.iter().enumerate() {
                for b in &vars[i + 1..] {
                    queue.push_back(Constraint::LinNe {
                        terms: vec![(*a, 1), (*b, -1)],
                        rhs: 0,
                    });
                }
            }
        }
        Constraint::Disjoint(tasks) => {
            for (i, (s1, l1)) in tasks.iter().enumerate() {
                for (s2, l2) in &tasks[i + 1..] {
                    // b1: task i ends before j starts; b2: the converse.
                    let b1 = fresh_bool(m, fresh);
                    let b2 = fresh_bool(m, fresh);
                    queue.push_back(before(*s1, *l1, *s2, b1));
                    queue.push_back(before(*s2, *l2, *s1, b2));
                    queue.push_back(Constraint::Clause(vec![BLit::pos(b1), BLit::pos(b2)]));
                }
            }
        }
        Constraint::Cumulative { tasks, bound } => {
            let mut lo = i64::MAX;
            let mut hi = i64::MIN;
            for (s, l, _) in &tasks {
                let (slo, _) = Expr::arg(*s).range(m)?;
                let mut end = Expr::arg(*s);
                end.add(&Expr::arg(*l), 1);
                let (_, ehi) = end.range(m)?;
                lo = lo.min(slo);
                hi = hi.max(ehi);
            }
            for t in lo..hi {
                let mut usage = Expr::default();
                for (s, l, r) in &tasks {
                    // active <-> s <= t and t < s + l
                    let started = fresh_bool(m, fresh);
                    let running = fresh_bool(m, fresh);
                    let active = fresh_bool(m, fresh);
                    let se = Expr::arg(*s);
                    queue.push_back(Constraint::ReifLin {
                        terms: se.terms.iter().map(|(v, w)| (*v, *w)).collect(),
                        op: CmpOp::Le,
                        rhs: t - se.constant,
                        reif: started,
                    });
                    let mut end = Expr::arg(*s);
                    end.add(&Expr::arg(*l), 1);
                    queue.push_back(Constraint::ReifLin {
                        terms: end.terms.iter().map(|(v, w)| (*v, *w)).collect(),
                        op: CmpOp::Ge,
                        rhs: t + 1 - end.constant,
                        reif: active,
                    });
                    queue.push_back(Constraint::ReifCon {
                        lits: vec![BLit::pos(started), BLit::pos(active)],
                        reif: running,
                    });
                    let sa = m.shadow(running);
                    match r {
                        IntArg::Const(rc) => usage.add_term(sa, *rc),
                        IntArg::Var(rv) => {
                            // z = running * r via its convex envelope.
                            let (rl, ru) = m.bounds(*rv);
                            let z = m.new_int(format!("lz_{}", *fresh), rl.min(0), ru.max(0));
                            *fresh += 1;
                            queue.push_back(
                                expr2(z, 1, sa, -ru).le(0),
                            );
                            queue.push_back(expr2(z, -1, sa, rl).le(0));
                            let mut e = Expr::var(z);
                            e.add(&Expr::var(*rv), -1);
                            e.add_term(sa, -rl);
                            queue.push_back(e.le(-rl));
                            let mut e = Expr::var(*rv);
                            e.add(&Expr::var(z), -1);
                            e.add_term(sa, ru);
                            queue.push_back(e.le(ru));
                            usage.add_term(z, 1);
                        }
                    }
                }
                queue.push_back(usage.le(bound));
            }
        }
    }
    Ok(())
}

fn expr2(a: VarId, wa: i64, b: VarId, wb: i64) -> Expr {
    let mut e = Expr::default();
    e.add_term(a, wa);
    e.add_term(b, wb);
    e
}

/// Reifies `s1 + l1 <= s2`.
fn before(s1: IntArg, l1: IntArg, s2: IntArg, reif: VarId) -> Constraint {
    let mut e = Expr::arg(s1);
    e.add(&Expr::arg(l1), 1);
    e.add(&Expr::arg(s2), -1);
    Constraint::ReifLin {
        terms: e.terms.into_iter().collect(),
        op: CmpOp::Le,
        rhs: -e.constant,
        reif,
    }
}

/// `x != y` over two 0-1 variables is exactly `x + y = 1`.
fn shadow_pair_ne(m: &ConstraintModel, terms: &LinTerms, rhs: i64) -> Option<Constraint> {
    if rhs != 0 || terms.len() != 2 {
        return None;
    }
    let ((a, wa), (b, wb)) = (terms[0], terms[1]);
    if !(wa == 1 && wb == -1 || wa == -1 && wb == 1) {
        return None;
    }
    if m.bounds(a) != (0, 1) || m.bounds(b) != (0, 1) {
        return None;
    }
    Some(Constraint::LinEq { terms: vec![(a, 1), (b, 1)], rhs: 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// All satisfying assignments, projected to the first `keep` variables.
    /// Depth-first with early constraint checks, so auxiliary variables
    /// introduced by linearization do not blow up the search.
    fn solutions(m: &ConstraintModel, keep: usize) -> BTreeSet<Vec<i64>> {
        let n = m.vars.len();
        let bounds: Vec<(i64, i64)> = (0..n).map(|i| m.bounds(VarId(i as u32))).collect();
        // Constraints indexed by the last variable they mention; shadow
        // links are treated like equality constraints.
        let mut by_last: Vec<Vec<Constraint>> = vec![Vec::new(); n.max(1)];
        for c in &m.constraints {
            let last = ConstraintModel::constraint_vars(c)
                .iter()
                .map(|v| v.idx())
                .max()
                .unwrap_or(0);
            by_last[last].push(c.clone());
        }
        for (b, s) in &m.shadows {
            by_last[b.idx().max(s.idx())]
                .push(Constraint::LinEq { terms: vec![(*b, 1), (*s, -1)], rhs: 0 });
        }
        let mut out = BTreeSet::new();
        let mut assign = vec![0i64; n];
        fn dfs(
            m: &ConstraintModel,
            bounds: &[(i64, i64)],
            by_last: &[Vec<Constraint>],
            assign: &mut Vec<i64>,
            depth: usize,
            keep: usize,
            out: &mut BTreeSet<Vec<i64>>,
        ) {
            if depth == assign.len() {
                out.insert(assign[..keep].to_vec());
                return;
            }
            for v in bounds[depth].0..=bounds[depth].1 {
                assign[depth] = v;
                if by_last[depth].iter().all(|c| m.eval_constraint(c, assign)) {
                    dfs(m, bounds, by_last, assign, depth + 1, keep, out);
                }
            }
        }
        if n == 0 {
            out.insert(Vec::new());
            return out;
        }
        dfs(m, &bounds, &by_last, &mut assign, 0, keep, &mut out);
        out
    }

    fn assert_equivalent(m: &ConstraintModel) {
        let keep = m.vars.len();
        let lin = linearize(m).unwrap();
        assert!(is_linear(&lin), "output not in standard form");
        assert_eq!(solutions(m, keep), solutions(&lin, keep));
    }

    #[test]
    fn clause_linearization() {
        let mut m = ConstraintModel::default();
        let a = m.new_bool("a");
        let b = m.new_bool("b");
        m.add(Constraint::Clause(vec![BLit::pos(a), BLit::neg(b)]));
        assert_equivalent(&m);
    }

    #[test]
    fn reif_con_linearization() {
        let mut m = ConstraintModel::default();
        let a = m.new_bool("a");
        let b = m.new_bool("b");
        let c = m.new_bool("c");
        m.add(Constraint::ReifCon { lits: vec![BLit::pos(a), BLit::pos(b)], reif: c });
        assert_equivalent(&m);
    }

    #[test]
    fn reif_clause_and_implication() {
        let mut m = ConstraintModel::default();
        let a = m.new_bool("a");
        let b = m.new_bool("b");
        let c = m.new_bool("c");
        m.add(Constraint::ReifClause { lits: vec![BLit::neg(a), BLit::pos(b)], reif: c });
        m.add(Constraint::Implication(BLit::pos(c), BLit::pos(a)));
        assert_equivalent(&m);
    }

    #[test]
    fn reified_ne_big_m_split() {
        // d <-> x + y != 3 with x in [0,2], y in [0,1].
        let mut m = ConstraintModel::default();
        let x = m.new_int("x", 0, 2);
        let y = m.new_int("y", 0, 1);
        let d = m.new_bool("d");
        m.add(Constraint::ReifLin {
            terms: vec![(x, 1), (y, 1)],
            op: CmpOp::Ne,
            rhs: 3,
            reif: d,
        });
        assert_equivalent(&m);
    }

    #[test]
    fn all_reified_operators() {
        for op in [CmpOp::Le, CmpOp::Lt, CmpOp::Ge, CmpOp::Gt, CmpOp::Eq, CmpOp::Ne] {
            let mut m = ConstraintModel::default();
            let x = m.new_int("x", -2, 3);
            let b = m.new_bool("b");
            m.add(Constraint::ReifLin { terms: vec![(x, 2)], op, rhs: 1, reif: b });
            assert_equivalent(&m);
        }
    }

    #[test]
    fn plain_ne() {
        let mut m = ConstraintModel::default();
        let x = m.new_int("x", 0, 3);
        let y = m.new_int("y", 0, 3);
        m.add(Constraint::LinNe { terms: vec![(x, 1), (y, -2)], rhs: 1 });
        assert_equivalent(&m);
    }

    #[test]
    fn ne_on_shadows_specializes() {
        let mut m = ConstraintModel::default();
        let a = m.new_bool("a");
        let b = m.new_bool("b");
        let sa = m.shadow(a);
        let sb = m.shadow(b);
        m.add(Constraint::LinNe { terms: vec![(sa, 1), (sb, -1)], rhs: 0 });
        let lin = linearize(&m).unwrap();
        assert!(lin
            .constraints
            .contains(&Constraint::LinEq { terms: vec![(sa, 1), (sb, 1)], rhs: 1 }));
        assert_equivalent(&m);
    }

    #[test]
    fn distinct_decomposes() {
        let mut m = ConstraintModel::default();
        let x = m.new_int("x", 0, 2);
        let y = m.new_int("y", 0, 2);
        let z = m.new_int("z", 0, 2);
        m.add(Constraint::Distinct(vec![x, y, z]));
        assert_equivalent(&m);
    }

    #[test]
    fn disjoint_decomposes() {
        let mut m = ConstraintModel::default();
        let s1 = m.new_int("s1", 0, 3);
        let s2 = m.new_int("s2", 0, 3);
        m.add(Constraint::Disjoint(vec![
            (IntArg::Var(s1), IntArg::Const(2)),
            (IntArg::Var(s2), IntArg::Const(2)),
        ]));
        assert_equivalent(&m);
    }

    #[test]
    fn cumulative_decomposes() {
        let mut m = ConstraintModel::default();
        let s1 = m.new_int("s1", 0, 2);
        let s2 = m.new_int("s2", 0, 2);
        m.add(Constraint::Cumulative {
            tasks: vec![
                (IntArg::Var(s1), IntArg::Const(2), IntArg::Const(1)),
                (IntArg::Var(s2), IntArg::Const(1), IntArg::Const(1)),
            ],
            bound: 1,
        });
        assert_equivalent(&m);
    }

    #[test]
    fn cumulative_with_variable_resource() {
        let mut m = ConstraintModel::default();
        let s = m.new_int("s", 0, 1);
        let r = m.new_int("r", 0, 2);
        m.add(Constraint::Cumulative {
            tasks: vec![
                (IntArg::Var(s), IntArg::Const(2), IntArg::Var(r)),
                (IntArg::Const(0), IntArg::Const(3), IntArg::Const(1)),
            ],
            bound: 2,
        });
        assert_equivalent(&m);
    }

    #[test]
    fn idempotent_on_linear_models() {
        let mut m = ConstraintModel::default();
        let x = m.new_int("x", 0, 5);
        let y = m.new_int("y", 0, 5);
        m.add(Constraint::LinLe { terms: vec![(x, 1), (y, 2)], rhs: 7 });
        m.add(Constraint::LinEq { terms: vec![(x, 1), (y, -1)], rhs: 0 });
        let lin = linearize(&m).unwrap();
        assert_eq!(m, lin);
    }

    #[test]
    fn big_m_is_minimal() {
        // b <-> x <= 1 with x in [-2, 5]: relaxation needs exactly
        // max attainable lhs minus rhs on the <= side.
        let mut m = ConstraintModel::default();
        let x = m.new_int("x", -2, 5);
        let b = m.new_bool("b");
        m.add(Constraint::ReifLin { terms: vec![(x, 1)], op: CmpOp::Le, rhs: 1, reif: b });
        let lin = linearize(&m).unwrap();
        let s = lin.shadows[&b];
        let up = 5 - 1;
        let down = 1 + 1 - (-2);
        assert!(lin
            .constraints
            .contains(&Constraint::LinLe { terms: vec![(x, 1), (s, up)], rhs: 1 + up }));
        assert!(lin.constraints.contains(&Constraint::LinLe {
            terms: vec![(x, -1), (s, -down)],
            rhs: -(1 + 1),
        }));
    }

    #[test]
    fn unbounded_rejected() {
        let mut m = ConstraintModel::default();
        m.new_int("x", i64::MIN, 5);
        assert!(matches!(linearize(&m), Err(LinearizeError::Unbounded(_))));
    }
}
