//! CASP layer: interprets raw theory statements into variable domains,
//! reified linear constraints, global constraints and a linear objective.
//!
//! The supported statement forms are `&dom{l..u} = v` (head), `&sum{...} op g`
//! (body, op one of <= = != < > >=), `&minimize{...}` (directive),
//! `&distinct{...}`, `&disjoint{s@l; ...}` and `&cumulative{s@l@r; ...} <= g`
//! (head). Elements must be unconditional.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::aspif::{Atom, CompoundKind, GroundProgram, TheoryData, TheoryTerm};

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error("theory statement &{name}: {reason}")]
    Invalid { name: String, reason: String },
    #[error("variable {var}: domain is empty")]
    EmptyDomain { var: String },
    #[error("atom {atom} reifies two different linear constraints")]
    DuplicateReification { atom: u32 },
}

fn invalid(name: &str, reason: impl Into<String>) -> TheoryError {
    TheoryError::Invalid { name: name.to_string(), reason: reason.into() }
}

/// Comparison operator of a linear constraint guard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CmpOp {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "<=" => CmpOp::Le,
            "<" => CmpOp::Lt,
            ">=" => CmpOp::Ge,
            ">" => CmpOp::Gt,
            "=" => CmpOp::Eq,
            "!=" => CmpOp::Ne,
            _ => return None,
        })
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        }
    }

    pub fn eval(self, lhs: i64, rhs: i64) -> bool {
        match self {
            CmpOp::Le => lhs <= rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Linear constraint `sum of coeff * var  op  rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearConstraint {
    pub terms: Vec<(String, i64)>,
    pub op: CmpOp,
    pub rhs: i64,
}

impl LinearConstraint {
    /// Evaluates the constraint under a total assignment to its variables.
    pub fn holds(&self, delta: &BTreeMap<String, i64>) -> bool {
        let lhs: i64 = self.terms.iter().map(|(v, w)| w * delta[v]).sum();
        self.op.eval(lhs, self.rhs)
    }
}

/// Either a linear variable or an integer constant, as allowed in global
/// constraint task fields.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum CaspVal {
    Var(String),
    Const(i64),
}

impl CaspVal {
    pub fn value(&self, delta: &BTreeMap<String, i64>) -> i64 {
        match self {
            CaspVal::Var(v) => delta[v],
            CaspVal::Const(c) => *c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum GlobalConstraint {
    /// All listed variables take pairwise distinct values.
    Distinct(Vec<String>),
    /// Tasks (start, length) do not overlap in time.
    Disjoint(Vec<(CaspVal, CaspVal)>),
    /// Tasks (start, length, resource) never exceed `bound` concurrently.
    Cumulative { tasks: Vec<(CaspVal, CaspVal, CaspVal)>, bound: i64 },
}

/// Everything the theory statements of a program describe.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CaspSpec {
    pub vars: BTreeSet<String>,
    pub domains: BTreeMap<String, (i64, i64)>,
    pub lin_atoms: BTreeMap<Atom, LinearConstraint>,
    pub globals: Vec<GlobalConstraint>,
    pub lin_objective: Vec<(String, i64)>,
}

impl CaspSpec {
    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
            && self.lin_atoms.is_empty()
            && self.globals.is_empty()
            && self.lin_objective.is_empty()
    }
}

/// Gives every variable without a domain the fallback interval. Returns the
/// names of defaulted variables.
pub fn bound_or_default(spec: &mut CaspSpec, fallback: (i64, i64)) -> Vec<String> {
    let mut defaulted = Vec::new();
    for v in &spec.vars {
        if !spec.domains.contains_key(v) {
            spec.domains.insert(v.clone(), fallback);
            defaulted.push(v.clone());
        }
    }
    defaulted
}

/// Interprets the theory statements of a ground program.
pub fn extract_casp(p: &GroundProgram) -> Result<CaspSpec, TheoryError> {
    Extractor::new(p).run()
}

struct Extractor<'a> {
    p: &'a GroundProgram,
    td: &'a TheoryData,
    spec: CaspSpec,
    objective: BTreeMap<String, i64>,
}

impl<'a> Extractor<'a> {
    fn new(p: &'a GroundProgram) -> Self {
        Extractor { p, td: &p.theory, spec: CaspSpec::default(), objective: BTreeMap::new() }
    }

    fn run(mut self) -> Result<CaspSpec, TheoryError> {
        for stmt in &self.td.atoms {
            let name = self
                .td
                .name_of(stmt)
                .ok_or_else(|| invalid("?", "statement name is not a symbolic term"))?
                .to_string();
            match name.as_str() {
                "sum" => self.sum_stmt(stmt, &name)?,
                "dom" => self.dom_stmt(stmt, &name)?,
                "minimize" => self.minimize_stmt(stmt, &name)?,
                "distinct" => self.distinct_stmt(stmt, &name)?,
                "disjoint" => self.disjoint_stmt(stmt, &name)?,
                "cumulative" => self.cumulative_stmt(stmt, &name)?,
                other => {
                    return Err(invalid(other, "unknown theory statement"));
                }
            }
        }
        self.spec.lin_objective =
            self.objective.into_iter().filter(|(_, w)| *w != 0).collect();
        for (v, _) in &self.spec.lin_objective {
            self.spec.vars.insert(v.clone());
        }
        Ok(self.spec)
    }

    fn term(&self, id: u32, name: &str) -> Result<&'a TheoryTerm, TheoryError> {
        self.td.terms.get(&id).ok_or_else(|| invalid(name, format!("unknown term id {id}")))
    }

    fn sym(&self, id: u32, name: &str) -> Result<&'a str, TheoryError> {
        match self.term(id, name)? {
            TheoryTerm::Sym(s) => Ok(s),
            _ => Err(invalid(name, "expected a symbolic term")),
        }
    }

    /// Renders a ground term as a variable name, e.g. `start(j1)` or `(a,v)`.
    fn render(&self, id: u32, name: &str) -> Result<String, TheoryError> {
        let out = match self.term(id, name)? {
            TheoryTerm::Num(n) => n.to_string(),
            TheoryTerm::Sym(s) => s.clone(),
            TheoryTerm::Compound { kind, args } => {
                let rendered: Result<Vec<String>, TheoryError> =
                    args.iter().map(|a| self.render(*a, name)).collect();
                let inner = rendered?.join(",");
                match kind {
                    CompoundKind::Func(f) => format!("{}({})", self.sym(*f, name)?, inner),
                    CompoundKind::Tuple => format!("({inner})"),
                    CompoundKind::Set => format!("{{{inner}}}"),
                    CompoundKind::List => format!("[{inner}]"),
                }
            }
        };
        Ok(out)
    }

    /// Parses a sum term into `coeff * var` or a plain constant.
    fn lin_term(&self, id: u32, name: &str) -> Result<(i64, Option<String>), TheoryError> {
        match self.term(id, name)? {
            TheoryTerm::Num(n) => Ok((*n, None)),
            TheoryTerm::Sym(s) => Ok((1, Some(s.clone()))),
            TheoryTerm::Compound { kind: CompoundKind::Func(f), args } => {
                match (self.sym(*f, name)?, args.len()) {
                    ("-", 1) => {
                        let (c, v) = self.lin_term(args[0], name)?;
                        Ok((-c, v))
                    }
                    ("*", 2) => {
                        let (c1, v1) = self.lin_term(args[0], name)?;
                        let (c2, v2) = self.lin_term(args[1], name)?;
                        match (v1, v2) {
                            (Some(_), Some(_)) => {
                                Err(invalid(name, "nonlinear product of variables"))
                            }
                            (v, None) | (None, v) => Ok((c1 * c2, v)),
                        }
                    }
                    _ => Ok((1, Some(self.render(id, name)?))),
                }
            }
            TheoryTerm::Compound { kind: CompoundKind::Tuple, .. } => {
                Ok((1, Some(self.render(id, name)?)))
            }
            _ => Err(invalid(name, "sets and lists are not linear terms")),
        }
    }

    fn int_const(&self, id: u32, name: &str) -> Result<i64, TheoryError> {
        match self.lin_term(id, name)? {
            (c, None) => Ok(c),
            (_, Some(v)) => Err(invalid(name, format!("expected an integer, got variable {v}"))),
        }
    }

    fn var_name(&mut self, id: u32, name: &str) -> Result<String, TheoryError> {
        match self.lin_term(id, name)? {
            (1, Some(v)) => {
                self.spec.vars.insert(v.clone());
                Ok(v)
            }
            _ => Err(invalid(name, "expected a plain variable")),
        }
    }

    /// The single term of an unconditional element.
    fn element_term(&self, elem_id: u32, name: &str) -> Result<u32, TheoryError> {
        let e = self
            .td
            .elements
            .get(&elem_id)
            .ok_or_else(|| invalid(name, format!("unknown element id {elem_id}")))?;
        if !e.condition.is_empty() {
            return Err(invalid(name, "conditional theory elements are not supported"));
        }
        if e.terms.len() != 1 {
            return Err(invalid(name, "element must carry exactly one term"));
        }
        Ok(e.terms[0])
    }

    fn guard(&self, stmt: &crate::aspif::TheoryAtomStmt, name: &str) -> Result<(CmpOp, u32), TheoryError> {
        let (op_id, g_id) = stmt
            .guard
            .ok_or_else(|| invalid(name, "missing guard"))?;
        let op = CmpOp::parse(self.sym(op_id, name)?)
            .ok_or_else(|| invalid(name, "unknown comparison operator"))?;
        Ok((op, g_id))
    }

    /// Atoms that reify a directive must only occur as heads of facts.
    fn check_directive_atom(&self, stmt: &crate::aspif::TheoryAtomStmt, name: &str) -> Result<(), TheoryError> {
        let Some(a) = stmt.atom else { return Ok(()) };
        for r in &self.p.rules {
            let in_head = r.head_atoms().contains(&a);
            let in_body = r.pos_body().contains(&a) || r.neg_body().contains(&a);
            if in_body {
                return Err(invalid(name, format!("directive atom {a} occurs in a rule body")));
            }
            if in_head {
                let is_fact = !r.is_choice()
                    && r.head_atoms().len() == 1
                    && r.pos_body().is_empty()
                    && r.neg_body().is_empty();
                if !is_fact {
                    return Err(invalid(
                        name,
                        format!("directive atom {a} occurs in a non-fact rule head"),
                    ));
                }
            }
        }
        Ok(())
    }

    fn sum_stmt(&mut self, stmt: &crate::aspif::TheoryAtomStmt, name: &str) -> Result<(), TheoryError> {
        let atom = stmt
            .atom
            .ok_or_else(|| invalid(name, "&sum must be reified by an atom"))?;
        for r in &self.p.rules {
            if r.head_atoms().contains(&atom) {
                return Err(invalid(name, "&sum must occur in rule bodies"));
            }
        }
        let (op, g_id) = self.guard(stmt, name)?;
        let mut terms: BTreeMap<String, i64> = BTreeMap::new();
        let mut lhs_const = 0i64;
        for &e in &stmt.elements {
            let t = self.element_term(e, name)?;
            match self.lin_term(t, name)? {
                (c, None) => lhs_const += c,
                (c, Some(v)) => *terms.entry(v).or_insert(0) += c,
            }
        }
        let mut rhs = match self.lin_term(g_id, name)? {
            (c, None) => c,
            (c, Some(v)) => {
                // Variable guard: move it to the left-hand side.
                if c != 1 {
                    return Err(invalid(name, "guard must be a variable or integer"));
                }
                *terms.entry(v).or_insert(0) -= 1;
                0
            }
        };
        rhs -= lhs_const;
        terms.retain(|_, w| *w != 0);
        for v in terms.keys() {
            self.spec.vars.insert(v.clone());
        }
        let lc = LinearConstraint { terms: terms.into_iter().collect(), op, rhs };
        match self.spec.lin_atoms.get(&atom) {
            Some(existing) if *existing != lc => {
                Err(TheoryError::DuplicateReification { atom: atom.0 })
            }
            _ => {
                self.spec.lin_atoms.insert(atom, lc);
                Ok(())
            }
        }
    }

    fn dom_stmt(&mut self, stmt: &crate::aspif::TheoryAtomStmt, name: &str) -> Result<(), TheoryError> {
        self.check_directive_atom(stmt, name)?;
        let (op, g_id) = self.guard(stmt, name)?;
        if op != CmpOp::Eq {
            return Err(invalid(name, "&dom guard must be ="));
        }
        let var = self.var_name(g_id, name)?;
        if stmt.elements.len() != 1 {
            return Err(invalid(name, "&dom takes exactly one l..u element"));
        }
        let t = self.element_term(stmt.elements[0], name)?;
        let (l, u) = match self.term(t, name)? {
            TheoryTerm::Compound { kind: CompoundKind::Func(f), args } if args.len() == 2 => {
                if self.sym(*f, name)? != ".." {
                    return Err(invalid(name, "&dom element must be l..u"));
                }
                (self.int_const(args[0], name)?, self.int_const(args[1], name)?)
            }
            _ => return Err(invalid(name, "&dom element must be l..u")),
        };
        // Repeated directives for one variable intersect their intervals.
        let (cl, cu) = self.spec.domains.get(&var).copied().unwrap_or((i64::MIN, i64::MAX));
        let (nl, nu) = (cl.max(l), cu.min(u));
        if nl > nu {
            return Err(TheoryError::EmptyDomain { var });
        }
        self.spec.domains.insert(var, (nl, nu));
        Ok(())
    }

    fn minimize_stmt(&mut self, stmt: &crate::aspif::TheoryAtomStmt, name: &str) -> Result<(), TheoryError> {
        self.check_directive_atom(stmt, name)?;
        if stmt.guard.is_some() {
            return Err(invalid(name, "&minimize takes no guard"));
        }
        for &e in &stmt.elements {
            let t = self.element_term(e, name)?;
            match self.lin_term(t, name)? {
                (_, None) => {
                    return Err(invalid(name, "constant objective terms are not supported"))
                }
                (c, Some(v)) => *self.objective.entry(v).or_insert(0) += c,
            }
        }
        Ok(())
    }

    fn distinct_stmt(&mut self, stmt: &crate::aspif::TheoryAtomStmt, name: &str) -> Result<(), TheoryError> {
        self.check_directive_atom(stmt, name)?;
        if stmt.guard.is_some() {
            return Err(invalid(name, "&distinct takes no guard"));
        }
        let mut vars = Vec::new();
        for &e in &stmt.elements {
            let t = self.element_term(e, name)?;
            vars.push(self.var_name(t, name)?);
        }
        self.spec.globals.push(GlobalConstraint::Distinct(vars));
        Ok(())
    }

    /// Splits an `@`-chained term into its operands, left associative.
    fn at_chain(&self, id: u32, name: &str) -> Result<Vec<u32>, TheoryError> {
        match self.term(id, name)? {
            TheoryTerm::Compound { kind: CompoundKind::Func(f), args }
                if args.len() == 2 && self.sym(*f, name)? == "@" =>
            {
                let mut chain = self.at_chain(args[0], name)?;
                chain.push(args[1]);
                Ok(chain)
            }
            _ => Ok(vec![id]),
        }
    }

    fn casp_val(&mut self, id: u32, name: &str) -> Result<CaspVal, TheoryError> {
        match self.lin_term(id, name)? {
            (c, None) => Ok(CaspVal::Const(c)),
            (1, Some(v)) => {
                self.spec.vars.insert(v.clone());
                Ok(CaspVal::Var(v))
            }
            _ => Err(invalid(name, "expected a variable or integer")),
        }
    }

    fn disjoint_stmt(&mut self, stmt: &crate::aspif::TheoryAtomStmt, name: &str) -> Result<(), TheoryError> {
        self.check_directive_atom(stmt, name)?;
        if stmt.guard.is_some() {
            return Err(invalid(name, "&disjoint takes no guard"));
        }
        let mut tasks = Vec::new();
        for &e in &stmt.elements {
            let t = self.element_term(e, name)?;
            let chain = self.at_chain(t, name)?;
            if chain.len() != 2 {
                return Err(invalid(name, "&disjoint element must be start@length"));
            }
            tasks.push((self.casp_val(chain[0], name)?, self.casp_val(chain[1], name)?));
        }
        self.spec.globals.push(GlobalConstraint::Disjoint(tasks));
        Ok(())
    }

    fn cumulative_stmt(&mut self, stmt: &crate::aspif::TheoryAtomStmt, name: &str) -> Result<(), TheoryError> {
        self.check_directive_atom(stmt, name)?;
        let (op, g_id) = self.guard(stmt, name)?;
        if op != CmpOp::Le {
            return Err(invalid(name, "&cumulative guard must be <="));
        }
        let bound = self.int_const(g_id, name)?;
        let mut tasks = Vec::new();
        for &e in &stmt.elements {
            let t = self.element_term(e, name)?;
            let chain = self.at_chain(t, name)?;
            if chain.len() != 3 {
                return Err(invalid(name, "&cumulative element must be start@length@resource"));
            }
            tasks.push((
                self.casp_val(chain[0], name)?,
                self.casp_val(chain[1], name)?,
                self.casp_val(chain[2], name)?,
            ));
        }
        self.spec.globals.push(GlobalConstraint::Cumulative { tasks, bound });
        Ok(())
    }
}
