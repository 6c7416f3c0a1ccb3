//! FlatZinc serialization of a constraint model, plus the output mapping
//! sidecar used to decode solver assignments back into answer sets.
//!
//! One item per line, declarations before constraints, byte-deterministic
//! for identical inputs. Every variable carries an output annotation so any
//! conforming solver prints a full assignment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::aspif::GroundProgram;
use crate::ir::{BLit, Constraint, ConstraintModel, IntArg, VarId};
use crate::theory::CmpOp;
use crate::translate::TranslateOutput;

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("identifier collision after sanitization: {0}")]
    Collision(String),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EmitOptions {
    /// The model went through linearization; globals and reified constraints
    /// are not expected to occur.
    pub linearized: bool,
}

/// Maps registry names to valid FlatZinc identifiers, erroring out if two
/// distinct variables collapse onto the same identifier.
fn sanitized_names(m: &ConstraintModel) -> Result<Vec<String>, EmitError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(m.vars.len());
    for def in &m.vars {
        let mut s = String::with_capacity(def.name.len());
        for c in def.name.chars() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
            } else {
                s.push('_');
            }
        }
        if !s.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
            s.insert(0, 'v');
        }
        if !seen.insert(s.clone()) {
            return Err(EmitError::Collision(s));
        }
        out.push(s);
    }
    Ok(out)
}

struct Emitter {
    names: Vec<String>,
    /// Negated-literal helper Booleans, created on demand.
    negs: BTreeMap<VarId, String>,
    decls: String,
    cons: String,
}

impl Emitter {
    fn lit_name(&mut self, l: BLit) -> String {
        if l.positive {
            return self.names[l.var.idx()].clone();
        }
        if let Some(n) = self.negs.get(&l.var) {
            return n.clone();
        }
        let n = format!("not_{}", self.names[l.var.idx()]);
        let _ = writeln!(self.decls, "var bool: {n};");
        let _ = writeln!(self.cons, "constraint bool_not({}, {n});", self.names[l.var.idx()]);
        self.negs.insert(l.var, n.clone());
        n
    }

    fn lit_names(&mut self, lits: &[BLit]) -> String {
        let parts: Vec<String> = lits.iter().map(|l| self.lit_name(*l)).collect();
        parts.join(", ")
    }

    fn arg(&self, a: IntArg) -> String {
        match a {
            IntArg::Var(v) => self.names[v.idx()].clone(),
            IntArg::Const(c) => c.to_string(),
        }
    }

    fn lin(&mut self, pred: &str, terms: &[(VarId, i64)], rhs: i64, reif: Option<VarId>) {
        let coefs: Vec<String> = terms.iter().map(|(_, w)| w.to_string()).collect();
        let vars: Vec<String> = terms.iter().map(|(v, _)| self.names[v.idx()].clone()).collect();
        let tail = match reif {
            Some(r) => format!(", {}", self.names[r.idx()]),
            None => String::new(),
        };
        let _ = writeln!(
            self.cons,
            "constraint {pred}([{}], [{}], {rhs}{tail});",
            coefs.join(", "),
            vars.join(", ")
        );
    }

    fn constraint(&mut self, c: &Constraint) {
        match c {
            Constraint::Clause(lits) => {
                let pos: Vec<String> = lits
                    .iter()
                    .filter(|l| l.positive)
                    .map(|l| self.names[l.var.idx()].clone())
                    .collect();
                let neg: Vec<String> = lits
                    .iter()
                    .filter(|l| !l.positive)
                    .map(|l| self.names[l.var.idx()].clone())
                    .collect();
                let _ = writeln!(
                    self.cons,
                    "constraint bool_clause([{}], [{}]);",
                    pos.join(", "),
                    neg.join(", ")
                );
            }
            Constraint::ReifCon { lits, reif } => {
                let arr = self.lit_names(lits);
                let _ = writeln!(
                    self.cons,
                    "constraint array_bool_and([{arr}], {});",
                    self.names[reif.idx()]
                );
            }
            Constraint::ReifClause { lits, reif } => {
                let arr = self.lit_names(lits);
                let _ = writeln!(
                    self.cons,
                    "constraint array_bool_or([{arr}], {});",
                    self.names[reif.idx()]
                );
            }
            Constraint::Implication(a, b) => {
                self.constraint(&Constraint::Clause(vec![a.negated(), *b]));
            }
            Constraint::LinLe { terms, rhs } => self.lin("int_lin_le", terms, *rhs, None),
            Constraint::LinEq { terms, rhs } => self.lin("int_lin_eq", terms, *rhs, None),
            Constraint::LinNe { terms, rhs } => self.lin("int_lin_ne", terms, *rhs, None),
            Constraint::ReifLin { terms, op, rhs, reif } => {
                // Only le/eq/ne have reified builtins; fold the strict and
                // reversed forms into le on negated coefficients.
                let (pred, terms, rhs) = match op {
                    CmpOp::Le => ("int_lin_le_reif", terms.clone(), *rhs),
                    CmpOp::Lt => ("int_lin_le_reif", terms.clone(), rhs - 1),
                    CmpOp::Ge => {
                        ("int_lin_le_reif", negate(terms), -rhs)
                    }
                    CmpOp::Gt => ("int_lin_le_reif", negate(terms), -rhs - 1),
                    CmpOp::Eq => ("int_lin_eq_reif", terms.clone(), *rhs),
                    CmpOp::Ne => ("int_lin_ne_reif", terms.clone(), *rhs),
                };
                self.lin(pred, &terms, rhs, Some(*reif));
            }
            Constraint::Distinct(vars) => {
                let parts: Vec<String> =
                    vars.iter().map(|v| self.names[v.idx()].clone()).collect();
                let _ =
                    writeln!(self.cons, "constraint all_different_int([{}]);", parts.join(", "));
            }
            Constraint::Disjoint(tasks) => {
                let s: Vec<String> = tasks.iter().map(|(s, _)| self.arg(*s)).collect();
                let l: Vec<String> = tasks.iter().map(|(_, l)| self.arg(*l)).collect();
                let _ = writeln!(
                    self.cons,
                    "constraint disjunctive([{}], [{}]);",
                    s.join(", "),
                    l.join(", ")
                );
            }
            Constraint::Cumulative { tasks, bound } => {
                let s: Vec<String> = tasks.iter().map(|(s, _, _)| self.arg(*s)).collect();
                let l: Vec<String> = tasks.iter().map(|(_, l, _)| self.arg(*l)).collect();
                let r: Vec<String> = tasks.iter().map(|(_, _, r)| self.arg(*r)).collect();
                let _ = writeln!(
                    self.cons,
                    "constraint cumulative([{}], [{}], [{}], {bound});",
                    s.join(", "),
                    l.join(", "),
                    r.join(", ")
                );
            }
        }
    }
}

fn negate(terms: &[(VarId, i64)]) -> Vec<(VarId, i64)> {
    terms.iter().map(|(v, w)| (*v, -w)).collect()
}

pub fn emit_fzn(m: &ConstraintModel, _opts: EmitOptions) -> Result<String, EmitError> {
    let names = sanitized_names(m)?;
    let mut e = Emitter { names, negs: BTreeMap::new(), decls: String::new(), cons: String::new() };
    for (i, _) in m.vars.iter().enumerate() {
        let v = VarId(i as u32);
        let n = &e.names[i];
        if m.is_bool(v) {
            let _ = writeln!(e.decls, "var bool: {n} :: output_var;");
        } else {
            let (lb, ub) = m.bounds(v);
            let _ = writeln!(e.decls, "var {lb}..{ub}: {n} :: output_var;");
        }
    }
    for (b, s) in &m.shadows {
        let _ = writeln!(
            e.cons,
            "constraint bool2int({}, {});",
            e.names[b.idx()],
            e.names[s.idx()]
        );
    }
    for c in &m.constraints {
        e.constraint(c);
    }
    let solve = match &m.objective {
        None => "solve satisfy;\n".to_string(),
        Some(obj) => {
            // FlatZinc minimizes a variable, so the weighted sum gets its
            // own bounded variable tied down by a linear equation.
            let mut lo: i128 = obj.offset.into();
            let mut hi: i128 = obj.offset.into();
            for (v, w) in &obj.terms {
                let (lb, ub) = m.bounds(*v);
                let a = i128::from(*w) * i128::from(lb);
                let b = i128::from(*w) * i128::from(ub);
                lo += a.min(b);
                hi += a.max(b);
            }
            let lo = lo.clamp(i64::MIN.into(), i64::MAX.into());
            let hi = hi.clamp(i64::MIN.into(), i64::MAX.into());
            let _ = writeln!(e.decls, "var {lo}..{hi}: objective :: output_var;");
            let mut terms: Vec<(VarId, i64)> = obj.terms.clone();
            let coefs: Vec<String> =
                terms.iter().map(|(_, w)| w.to_string()).chain(["-1".into()]).collect();
            let vars: Vec<String> = terms
                .drain(..)
                .map(|(v, _)| e.names[v.idx()].clone())
                .chain(["objective".into()])
                .collect();
            let _ = writeln!(
                e.cons,
                "constraint int_lin_eq([{}], [{}], {});",
                coefs.join(", "),
                vars.join(", "),
                -obj.offset
            );
            "solve minimize objective;\n".to_string()
        }
    };
    if e.names.iter().any(|n| n == "objective") && m.objective.is_some() {
        return Err(EmitError::Collision("objective".into()));
    }
    Ok(format!("{}{}{}", e.decls, e.cons, solve))
}

/// Decoding table from solver assignments back to printable answer sets:
/// which Booleans are shown atoms, which integers are linear variables, and
/// which output strings are unconditional.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OutputMap {
    /// FlatZinc identifier to display name for shown atoms.
    pub atoms: BTreeMap<String, String>,
    /// FlatZinc identifier to linear variable name.
    pub vals: BTreeMap<String, String>,
    pub facts: Vec<String>,
}

impl OutputMap {
    pub fn build(
        p: &GroundProgram,
        out: &TranslateOutput,
    ) -> Result<Self, EmitError> {
        let names = sanitized_names(&out.model)?;
        let mut map = OutputMap { facts: p.shown_facts.clone(), ..Default::default() };
        for (atom, display) in &p.shows {
            if let Some(v) = out.atom_vars.get(atom) {
                map.atoms.insert(names[v.idx()].clone(), display.clone());
            }
        }
        for (name, v) in &out.lin_vars {
            map.vals.insert(names[v.idx()].clone(), name.clone());
        }
        Ok(map)
    }

    /// One `kind name = identifier` line per entry.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (id, display) in &self.atoms {
            let _ = writeln!(s, "atom {display} = {id}");
        }
        for (id, var) in &self.vals {
            let _ = writeln!(s, "val {var} = {id}");
        }
        for f in &self.facts {
            let _ = writeln!(s, "fact {f}");
        }
        s
    }

    pub fn parse(text: &str) -> Self {
        let mut map = OutputMap::default();
        for line in text.lines() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("fact ") {
                map.facts.push(rest.to_string());
            } else if let Some(rest) = line.strip_prefix("atom ") {
                if let Some((display, id)) = rest.split_once(" = ") {
                    map.atoms.insert(id.trim().to_string(), display.trim().to_string());
                }
            } else if let Some(rest) = line.strip_prefix("val ") {
                if let Some((var, id)) = rest.split_once(" = ") {
                    map.vals.insert(id.trim().to_string(), var.trim().to_string());
                }
            }
        }
        map
    }

    /// Renders one answer set line from a solver assignment.
    pub fn render(&self, assign: &BTreeMap<String, i64>) -> String {
        let mut parts: Vec<String> = self.facts.clone();
        for (id, display) in &self.atoms {
            if assign.get(id).copied().unwrap_or(0) != 0 {
                parts.push(display.clone());
            }
        }
        for (id, var) in &self.vals {
            if let Some(v) = assign.get(id) {
                parts.push(format!("val({var},{v})"));
            }
        }
        parts.join(" ")
    }
}

/// Serializes the mapping sidecar written next to the FlatZinc file.
pub fn emit_output_spec(p: &GroundProgram, out: &TranslateOutput) -> Result<String, EmitError> {
    Ok(OutputMap::build(p, out)?.to_text())
}
