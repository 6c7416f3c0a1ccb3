//! Exhaustive model enumeration for constraint models. Variables that are
//! functionally determined (shadows, reification results, unit clauses) are
//! computed instead of branched on, so the search space is the product of
//! the free variable domains only.

use std::collections::BTreeMap;

use crate::ir::{BLit, Constraint, ConstraintModel, VarId};
use crate::oracle::OracleError;

/// One way to compute a variable from earlier ones.
#[derive(Debug, Clone)]
enum Def {
    Const(i64),
    Copy(VarId),
    AllOf(Vec<BLit>),
    AnyOf(Vec<BLit>),
    Lin { terms: Vec<(VarId, i64)>, op: crate::theory::CmpOp, rhs: i64 },
}

impl Def {
    fn inputs(&self) -> Vec<VarId> {
        match self {
            Def::Const(_) => Vec::new(),
            Def::Copy(v) => vec![*v],
            Def::AllOf(lits) | Def::AnyOf(lits) => lits.iter().map(|l| l.var).collect(),
            Def::Lin { terms, .. } => terms.iter().map(|(v, _)| *v).collect(),
        }
    }

    fn eval(&self, assign: &[i64]) -> i64 {
        let truth = |l: &BLit| (assign[l.var.idx()] != 0) == l.positive;
        match self {
            Def::Const(c) => *c,
            Def::Copy(v) => assign[v.idx()],
            Def::AllOf(lits) => i64::from(lits.iter().all(truth)),
            Def::AnyOf(lits) => i64::from(lits.iter().any(truth)),
            Def::Lin { terms, op, rhs } => {
                let sum: i64 = terms.iter().map(|(v, w)| w * assign[v.idx()]).sum();
                i64::from(op.eval(sum, *rhs))
            }
        }
    }
}

fn candidate_defs(m: &ConstraintModel) -> BTreeMap<VarId, Vec<Def>> {
    let mut defs: BTreeMap<VarId, Vec<Def>> = BTreeMap::new();
    for (b, s) in &m.shadows {
        defs.entry(*s).or_default().push(Def::Copy(*b));
        defs.entry(*b).or_default().push(Def::Copy(*s));
    }
    for c in &m.constraints {
        match c {
            Constraint::Clause(lits) if lits.len() == 1 => {
                let l = lits[0];
                defs.entry(l.var).or_default().push(Def::Const(i64::from(l.positive)));
            }
            Constraint::ReifCon { lits, reif } => {
                defs.entry(*reif).or_default().push(Def::AllOf(lits.clone()));
            }
            Constraint::ReifClause { lits, reif } => {
                defs.entry(*reif).or_default().push(Def::AnyOf(lits.clone()));
            }
            Constraint::ReifLin { terms, op, rhs, reif } => {
                defs.entry(*reif).or_default().push(Def::Lin {
                    terms: terms.clone(),
                    op: *op,
                    rhs: *rhs,
                });
            }
            _ => {}
        }
    }
    defs
}

/// Assignment order: at every step all variables computable from the placed
/// ones come first, then the smallest remaining variable becomes a branch
/// point. `Some(def)` marks a computed variable.
fn build_order(m: &ConstraintModel) -> (Vec<(VarId, Option<Def>)>, Vec<VarId>) {
    let n = m.vars.len();
    let defs = candidate_defs(m);
    let mut placed = vec![false; n];
    let mut order: Vec<(VarId, Option<Def>)> = Vec::new();
    let mut free = Vec::new();
    while order.len() < n {
        let mut progressed = true;
        while progressed {
            progressed = false;
            for v in 0..n {
                if placed[v] {
                    continue;
                }
                let id = VarId(v as u32);
                let usable = defs.get(&id).and_then(|ds| {
                    ds.iter().find(|d| d.inputs().iter().all(|i| placed[i.idx()]))
                });
                if let Some(d) = usable {
                    placed[v] = true;
                    order.push((id, Some(d.clone())));
                    progressed = true;
                }
            }
        }
        if let Some(v) = (0..n).find(|v| !placed[*v]) {
            placed[v] = true;
            let id = VarId(v as u32);
            order.push((id, None));
            free.push(id);
        }
    }
    (order, free)
}

/// Enumerates all total assignments satisfying the model, in a fixed order.
/// The search prunes on every partially assigned constraint; `cap` bounds
/// the number of visited search nodes, not the raw domain product.
pub fn enumerate_ir_models(
    m: &ConstraintModel,
    cap: u128,
) -> Result<Vec<Vec<i64>>, OracleError> {
    let (order, _free) = build_order(m);
    let mut position = vec![usize::MAX; m.vars.len()];
    for (i, (v, _)) in order.iter().enumerate() {
        position[v.idx()] = i;
    }
    // Check each constraint as soon as its last variable gets a value.
    let mut at_step: Vec<Vec<&Constraint>> = vec![Vec::new(); order.len()];
    let mut upfront = Vec::new();
    for c in &m.constraints {
        let vars = ConstraintModel::constraint_vars(c);
        match vars.iter().map(|v| position[v.idx()]).max() {
            Some(p) => at_step[p].push(c),
            None => upfront.push(c),
        }
    }
    let empty = vec![0; m.vars.len()];
    if !upfront.iter().all(|c| m.eval_constraint(c, &empty)) {
        return Ok(Vec::new());
    }

    let mut assign = vec![0i64; m.vars.len()];
    let mut out = Vec::new();
    let mut nodes: u128 = 0;
    dfs(m, &order, &at_step, 0, &mut assign, &mut out, &mut nodes, cap)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    m: &ConstraintModel,
    order: &[(VarId, Option<Def>)],
    at_step: &[Vec<&Constraint>],
    step: usize,
    assign: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
    nodes: &mut u128,
    cap: u128,
) -> Result<(), OracleError> {
    if step == order.len() {
        out.push(assign.clone());
        return Ok(());
    }
    let (v, def) = &order[step];
    let (lb, ub) = m.bounds(*v);
    let values: Vec<i64> = match def {
        Some(d) => {
            let val = d.eval(assign);
            if val < lb || val > ub {
                return Ok(());
            }
            vec![val]
        }
        None => (lb..=ub).collect(),
    };
    for val in values {
        // Only branch points count against the budget; computed variables
        // are constant work.
        if def.is_none() {
            *nodes += 1;
            if *nodes > cap {
                return Err(OracleError::SearchSpaceTooLarge { required: *nodes, cap });
            }
        }
        assign[v.idx()] = val;
        if at_step[step].iter().all(|c| m.eval_constraint(c, assign)) {
            dfs(m, order, at_step, step + 1, assign, out, nodes, cap)?;
        }
    }
    Ok(())
}
