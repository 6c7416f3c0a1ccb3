//! Solver-neutral constraint model: Boolean and bounded integer variables,
//! clauses, reified conjunctions/disjunctions, linear constraints, reified
//! linear constraints and global constraints, plus one minimize objective.
//!
//! Linear constraints only mention integer variables. Booleans enter linear
//! arithmetic through 0-1 shadow variables linked by a bijection that is
//! part of the model.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::theory::CmpOp;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("variable {0} used as the wrong type")]
    TypeMismatch(String),
    #[error("integer variable {name} has invalid bounds [{lb}, {ub}]")]
    BadBounds { name: String, lb: i64, ub: i64 },
}

/// Index into the model's variable registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarKind {
    Bool,
    Int { lb: i64, ub: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDef {
    pub name: String,
    pub kind: VarKind,
}

/// A Boolean variable or its negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BLit {
    pub var: VarId,
    pub positive: bool,
}

impl BLit {
    pub fn pos(var: VarId) -> Self {
        BLit { var, positive: true }
    }

    pub fn neg(var: VarId) -> Self {
        BLit { var, positive: false }
    }

    pub fn negated(self) -> Self {
        BLit { var: self.var, positive: !self.positive }
    }
}

/// Integer argument of a global constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntArg {
    Var(VarId),
    Const(i64),
}

pub type LinTerms = Vec<(VarId, i64)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    /// At least one literal is true.
    Clause(Vec<BLit>),
    /// reif holds iff all literals hold.
    ReifCon { lits: Vec<BLit>, reif: VarId },
    /// reif holds iff some literal holds.
    ReifClause { lits: Vec<BLit>, reif: VarId },
    /// lhs implies rhs.
    Implication(BLit, BLit),
    LinLe { terms: LinTerms, rhs: i64 },
    LinEq { terms: LinTerms, rhs: i64 },
    LinNe { terms: LinTerms, rhs: i64 },
    /// reif holds iff the linear comparison holds.
    ReifLin { terms: LinTerms, op: CmpOp, rhs: i64, reif: VarId },
    Distinct(Vec<VarId>),
    /// Tasks (start, length) without overlap in time.
    Disjoint(Vec<(IntArg, IntArg)>),
    /// Tasks (start, length, resource) bounded by `bound` at every time.
    Cumulative { tasks: Vec<(IntArg, IntArg, IntArg)>, bound: i64 },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Objective {
    pub terms: LinTerms,
    pub offset: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintModel {
    pub vars: Vec<VarDef>,
    pub constraints: Vec<Constraint>,
    /// Boolean var to its 0-1 integer shadow; bijective.
    pub shadows: BTreeMap<VarId, VarId>,
    pub objective: Option<Objective>,
}

impl ConstraintModel {
    pub fn new_bool(&mut self, name: impl Into<String>) -> VarId {
        self.push(VarDef { name: name.into(), kind: VarKind::Bool })
    }

    pub fn new_int(&mut self, name: impl Into<String>, lb: i64, ub: i64) -> VarId {
        self.push(VarDef { name: name.into(), kind: VarKind::Int { lb, ub } })
    }

    fn push(&mut self, def: VarDef) -> VarId {
        let id = VarId(u32::try_from(self.vars.len()).expect("variable count fits u32"));
        self.vars.push(def);
        id
    }

    /// The 0-1 integer shadow of a Boolean, created on first use.
    pub fn shadow(&mut self, b: VarId) -> VarId {
        if let Some(s) = self.shadows.get(&b) {
            return *s;
        }
        let name = format!("i_{}", self.vars[b.idx()].name);
        let s = self.new_int(name, 0, 1);
        self.shadows.insert(b, s);
        s
    }

    pub fn add(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn is_bool(&self, v: VarId) -> bool {
        matches!(self.vars[v.idx()].kind, VarKind::Bool)
    }

    pub fn bounds(&self, v: VarId) -> (i64, i64) {
        match self.vars[v.idx()].kind {
            VarKind::Bool => (0, 1),
            VarKind::Int { lb, ub } => (lb, ub),
        }
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.vars[v.idx()].name
    }

    /// Checks structural invariants; used by tests.
    pub fn validate(&self) -> Result<(), ModelError> {
        for def in &self.vars {
            if let VarKind::Int { lb, ub } = def.kind {
                if lb > ub {
                    return Err(ModelError::BadBounds { name: def.name.clone(), lb, ub });
                }
            }
        }
        let check_lits = |lits: &[BLit]| -> Result<(), ModelError> {
            for l in lits {
                if !self.is_bool(l.var) {
                    return Err(ModelError::TypeMismatch(self.name(l.var).to_string()));
                }
            }
            Ok(())
        };
        let check_int = |v: VarId| -> Result<(), ModelError> {
            if self.is_bool(v) {
                return Err(ModelError::TypeMismatch(self.name(v).to_string()));
            }
            Ok(())
        };
        let check_terms = |terms: &LinTerms| -> Result<(), ModelError> {
            terms.iter().try_for_each(|(v, _)| check_int(*v))
        };
        let check_arg = |a: &IntArg| match a {
            IntArg::Var(v) => check_int(*v),
            IntArg::Const(_) => Ok(()),
        };
        for c in &self.constraints {
            match c {
                Constraint::Clause(lits) => check_lits(lits)?,
                Constraint::ReifCon { lits, reif } | Constraint::ReifClause { lits, reif } => {
                    check_lits(lits)?;
                    check_lits(&[BLit::pos(*reif)])?;
                }
                Constraint::Implication(a, b) => check_lits(&[*a, *b])?,
                Constraint::LinLe { terms, .. }
                | Constraint::LinEq { terms, .. }
                | Constraint::LinNe { terms, .. } => check_terms(terms)?,
                Constraint::ReifLin { terms, reif, .. } => {
                    check_terms(terms)?;
                    check_lits(&[BLit::pos(*reif)])?;
                }
                Constraint::Distinct(vars) => vars.iter().try_for_each(|v| check_int(*v))?,
                Constraint::Disjoint(tasks) => {
                    for (s, l) in tasks {
                        check_arg(s)?;
                        check_arg(l)?;
                    }
                }
                Constraint::Cumulative { tasks, .. } => {
                    for (s, l, r) in tasks {
                        check_arg(s)?;
                        check_arg(l)?;
                        check_arg(r)?;
                    }
                }
            }
        }
        if let Some(obj) = &self.objective {
            check_terms(&obj.terms)?;
        }
        for (b, s) in &self.shadows {
            check_lits(&[BLit::pos(*b)])?;
            check_int(*s)?;
            if self.bounds(*s) != (0, 1) {
                return Err(ModelError::TypeMismatch(self.name(*s).to_string()));
            }
        }
        Ok(())
    }

    /// All variables a constraint mentions.
    pub fn constraint_vars(c: &Constraint) -> Vec<VarId> {
        let mut out = Vec::new();
        let mut arg = |a: &IntArg| {
            if let IntArg::Var(v) = a {
                out.push(*v);
            }
        };
        match c {
            Constraint::Clause(lits) => out.extend(lits.iter().map(|l| l.var)),
            Constraint::ReifCon { lits, reif } | Constraint::ReifClause { lits, reif } => {
                out.extend(lits.iter().map(|l| l.var));
                out.push(*reif);
            }
            Constraint::Implication(a, b) => out.extend([a.var, b.var]),
            Constraint::LinLe { terms, .. }
            | Constraint::LinEq { terms, .. }
            | Constraint::LinNe { terms, .. } => out.extend(terms.iter().map(|(v, _)| *v)),
            Constraint::ReifLin { terms, reif, .. } => {
                out.extend(terms.iter().map(|(v, _)| *v));
                out.push(*reif);
            }
            Constraint::Distinct(vars) => out.extend(vars.iter().copied()),
            Constraint::Disjoint(tasks) => {
                for (s, l) in tasks {
                    arg(s);
                    arg(l);
                }
            }
            Constraint::Cumulative { tasks, .. } => {
                for (s, l, r) in tasks {
                    arg(s);
                    arg(l);
                    arg(r);
                }
            }
        }
        out
    }

    /// Evaluates one constraint under a total assignment (Booleans as 0/1).
    pub fn eval_constraint(&self, c: &Constraint, assign: &[i64]) -> bool {
        let truth = |l: &BLit| (assign[l.var.idx()] != 0) == l.positive;
        let lin = |terms: &LinTerms| -> i64 {
            terms.iter().map(|(v, w)| w * assign[v.idx()]).sum()
        };
        let arg = |a: &IntArg| match a {
            IntArg::Var(v) => assign[v.idx()],
            IntArg::Const(c) => *c,
        };
        match c {
            Constraint::Clause(lits) => lits.iter().any(truth),
            Constraint::ReifCon { lits, reif } => {
                (assign[reif.idx()] != 0) == lits.iter().all(truth)
            }
            Constraint::ReifClause { lits, reif } => {
                (assign[reif.idx()] != 0) == lits.iter().any(truth)
            }
            Constraint::Implication(a, b) => !truth(a) || truth(b),
            Constraint::LinLe { terms, rhs } => lin(terms) <= *rhs,
            Constraint::LinEq { terms, rhs } => lin(terms) == *rhs,
            Constraint::LinNe { terms, rhs } => lin(terms) != *rhs,
            Constraint::ReifLin { terms, op, rhs, reif } => {
                (assign[reif.idx()] != 0) == op.eval(lin(terms), *rhs)
            }
            Constraint::Distinct(vars) => {
                for (i, a) in vars.iter().enumerate() {
                    for b in &vars[i + 1..] {
                        if assign[a.idx()] == assign[b.idx()] {
                            return false;
                        }
                    }
                }
                true
            }
            Constraint::Disjoint(tasks) => {
                for (i, (s1, l1)) in tasks.iter().enumerate() {
                    for (s2, l2) in &tasks[i + 1..] {
                        let (a1, d1) = (arg(s1), arg(l1));
                        let (a2, d2) = (arg(s2), arg(l2));
                        if !(a1 + d1 <= a2 || a2 + d2 <= a1) {
                            return false;
                        }
                    }
                }
                true
            }
            Constraint::Cumulative { tasks, bound } => {
                let vals: Vec<(i64, i64, i64)> =
                    tasks.iter().map(|(s, l, r)| (arg(s), arg(l), arg(r))).collect();
                let lo = vals.iter().map(|(s, _, _)| *s).min().unwrap_or(0);
                let hi = vals.iter().map(|(s, l, _)| s + l).max().unwrap_or(0);
                for t in lo..hi {
                    let used: i64 = vals
                        .iter()
                        .filter(|(s, l, _)| *s <= t && t < s + l)
                        .map(|(_, _, r)| *r)
                        .sum();
                    if used > *bound {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// True iff the assignment respects bounds, all constraints and the
    /// shadow bijection.
    pub fn check(&self, assign: &[i64]) -> bool {
        if assign.len() != self.vars.len() {
            return false;
        }
        for (i, _) in self.vars.iter().enumerate() {
            let (lb, ub) = self.bounds(VarId(i as u32));
            if assign[i] < lb || assign[i] > ub {
                return false;
            }
        }
        for (b, s) in &self.shadows {
            if assign[b.idx()] != assign[s.idx()] {
                return false;
            }
        }
        self.constraints.iter().all(|c| self.eval_constraint(c, assign))
    }

    pub fn objective_value(&self, assign: &[i64]) -> Option<i64> {
        let obj = self.objective.as_ref()?;
        Some(obj.offset + obj.terms.iter().map(|(v, w)| w * assign[v.idx()]).sum::<i64>())
    }
}
