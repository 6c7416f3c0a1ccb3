//! Translation-based constraint answer set solving.
//!
//! This crate compiles ground (C)ASP programs, read in ASPIF format, into a
//! solver-neutral constraint model and serializes that model as FlatZinc.
//! Linear variables, reified linear constraints and a few global constraints
//! are supported through a gringo-style theory interface. Non-tight programs
//! are handled with a level-ranking encoding over the strongly connected
//! components of the positive dependency graph; the encoding comes in a
//! strict variant (models correspond 1-1 to answer sets) and a non-strict
//! variant (many-to-one).
//!
//! A brute-force oracle ([`oracle`]) enumerates constraint answer sets
//! directly from the FLP-reduct definition and cross-checks the translation
//! at desk scale. The `examples/` directory has one runnable example per
//! capability; the `asp-fzn` binary exposes the pipeline on the command line.

pub mod analysis;
pub mod aspif;
pub mod cli;
pub mod fzn;
pub mod ir;
pub mod linearize;
pub mod oracle;
pub mod random;
pub mod theory;
pub mod translate;

pub use aspif::{parse_aspif, Atom, BodyKind, GroundProgram, HeadKind, Lit, Rule};
pub use ir::ConstraintModel;
pub use theory::{extract_casp, CaspSpec};
pub use translate::{translate, TranslateOptions, TranslateOutput};
