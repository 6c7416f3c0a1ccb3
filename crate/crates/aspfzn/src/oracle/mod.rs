//! Brute-force ground truth for the translation: enumerates constraint
//! answer sets directly from the reduct definition, enumerates models of a
//! constraint model, checks ranked-supportedness characterizations and the
//! correspondence between translation models and answer sets.
//!
//! Everything here trades speed for obvious correctness and is capped by a
//! candidate budget.

mod answer_sets;
mod ir_enum;
mod ranked;

pub use answer_sets::enumerate_answer_sets;
pub use ir_enum::enumerate_ir_models;
pub use ranked::{check_ranked_supported, exists_rank_assignment, SupportVariant, INF_RANK};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::analysis::{build_dep_graph, partially_shift};
use crate::aspif::{Atom, GroundProgram};
use crate::theory::CaspSpec;
use crate::translate::{translate, TranslateOptions, TranslateOutput};

/// Default bound on the number of enumeration candidates.
pub const DEFAULT_CAP: u128 = 1 << 22;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("search space of {required} candidates exceeds the cap of {cap}")]
    SearchSpaceTooLarge { required: u128, cap: u128 },
    #[error("programs with more than 63 atoms are not supported by the oracle")]
    TooManyAtoms,
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Analysis(#[from] crate::analysis::AnalysisError),
    #[error(transparent)]
    Translate(#[from] crate::translate::TranslateError),
}

/// An interpretation extended with an assignment to the linear variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct EInterpretation {
    pub atoms: BTreeSet<Atom>,
    pub assignment: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Translation models project bijectively onto the answer sets.
    OneToOne,
    /// Projections form exactly the answer set, with repetitions.
    ProjectionEqual,
    /// The witness appears on exactly one side.
    Mismatch { witness: EInterpretation, in_translation: bool },
}

/// Projects a raw model of the translated constraint program onto the
/// program atoms and linear variables.
pub fn project_model(out: &TranslateOutput, assign: &[i64]) -> EInterpretation {
    let atoms = out
        .atom_vars
        .iter()
        .filter(|(_, v)| assign[v.idx()] != 0)
        .map(|(a, _)| *a)
        .collect();
    let assignment = out
        .lin_vars
        .iter()
        .map(|(name, v)| (name.clone(), assign[v.idx()]))
        .collect();
    EInterpretation { atoms, assignment }
}

/// Shifts, translates and cross-checks a program against the oracle.
/// `spec` must already have finite domains for all linear variables.
pub fn check_correspondence(
    p: &GroundProgram,
    spec: &CaspSpec,
    opts: TranslateOptions,
    cap: u128,
) -> Result<Verdict, VerifyError> {
    let scc0 = build_dep_graph(p);
    let shifted = partially_shift(p, &scc0)?;
    let scc = build_dep_graph(&shifted);
    let expected = enumerate_answer_sets(&shifted, spec, cap)?;
    let out = translate(&shifted, spec, &scc, opts)?;
    let models = enumerate_ir_models(&out.model, cap)?;
    let projections: Vec<EInterpretation> =
        models.iter().map(|a| project_model(&out, a)).collect();
    let got: BTreeSet<EInterpretation> = projections.iter().cloned().collect();
    if let Some(w) = got.difference(&expected).next() {
        return Ok(Verdict::Mismatch { witness: w.clone(), in_translation: true });
    }
    if let Some(w) = expected.difference(&got).next() {
        return Ok(Verdict::Mismatch { witness: w.clone(), in_translation: false });
    }
    if projections.len() == expected.len() {
        Ok(Verdict::OneToOne)
    } else {
        Ok(Verdict::ProjectionEqual)
    }
}

/// Minimum objective value over all models of the translated program, if
/// the program is satisfiable and has an objective.
pub fn optimal_cost(
    p: &GroundProgram,
    spec: &CaspSpec,
    opts: TranslateOptions,
    cap: u128,
) -> Result<Option<i64>, VerifyError> {
    let scc0 = build_dep_graph(p);
    let shifted = partially_shift(p, &scc0)?;
    let scc = build_dep_graph(&shifted);
    let out = translate(&shifted, spec, &scc, opts)?;
    let models = enumerate_ir_models(&out.model, cap)?;
    Ok(models.iter().filter_map(|a| out.model.objective_value(a)).min())
}

/// Cost of an answer set: compiled minimize weights of satisfied literals
/// plus the linear objective.
pub fn interpretation_cost(
    p: &GroundProgram,
    spec: &CaspSpec,
    e: &EInterpretation,
) -> Option<i64> {
    let min = p
        .minimize
        .as_ref()
        .and_then(|m| crate::aspif::compile_priorities(std::slice::from_ref(m)).ok()?);
    if min.is_none() && spec.lin_objective.is_empty() {
        return None;
    }
    let mut cost = 0;
    if let Some(min) = min {
        for (l, w, _) in &min.terms {
            if e.atoms.contains(&l.atom) == l.positive {
                cost += w;
            }
        }
    }
    for (v, w) in &spec.lin_objective {
        cost += w * e.assignment[v];
    }
    Some(cost)
}
