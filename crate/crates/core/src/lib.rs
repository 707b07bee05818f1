//! Decision procedures for the intuitionistic epistemic logics IEL and IEL⁻.
//!
//! [`prover::decide`] returns either a checkable sequent proof or a Kripke
//! countermodel of minimal depth; [`refuter::pr`] returns a proof or a
//! checkable refutation from which a countermodel is extracted.
//! [`oracle`] cross-validates both by brute-force model enumeration.

pub mod corpus;
pub mod formula;
pub mod kripke;
pub mod liel;
pub mod oracle;
pub mod prover;
pub mod random;
pub mod refuter;
pub mod search;
pub mod sequent;

pub use formula::{parse, render, Formula, FormulaKind, ParseError};
pub use kripke::{check_frame, depth, forces, satisfies, KripkeModel, Violation, World};
pub use corpus::{parse_corpus, CorpusEntry, CorpusError};
pub use liel::{check_proof, instantiations, LielRule, ProofTree};
pub use oracle::{brute_force_invalid, crosscheck, enumerate_models, Crosscheck, OracleReport, Verdict};
pub use prover::{decide, piel, Outcome};
pub use refuter::{check_refutation, extract_model, pr, PrOutcome, Refutation, RielRule};
pub use sequent::{Axiom, Calculus, Logic, Sequent, TerminalClass};
