//! Ground program model and ASPIF ingestion.
//!
//! Programs arrive in ASPIF 1.x text form as emitted by a grounder. The
//! parser is statement-for-statement faithful (no preprocessing); the only
//! normalizations applied are the standard weight-body transformation that
//! removes negative weights and the merging of duplicate literals inside one
//! weighted body.

mod parser;
mod priorities;
mod program;

pub use parser::parse_aspif;
pub use priorities::compile_priorities;
pub use program::{
    Atom, BodyKind, CompoundKind, GroundProgram, HeadKind, Lit, MinimizeStatement, Rule,
    TheoryAtomStmt, TheoryData, TheoryElement, TheoryTerm,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AspifError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: unsupported statement: {what}")]
    Unsupported { line: usize, what: String },
    #[error("line {line}: tautological rule: atom {atom} occurs in head and positive body")]
    Tautology { line: usize, atom: u32 },
    #[error("scaled minimize weights overflow the 64-bit objective")]
    Overflow,
}
