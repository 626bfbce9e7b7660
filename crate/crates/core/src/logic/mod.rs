//! ZF_ε syntax, natural deduction and program extraction.

pub mod axioms;
pub mod derivation;
pub mod formula;
pub mod sexpr;
pub mod smoke;
pub mod sugar;

pub use axioms::AxiomScheme;
pub use derivation::{check, check_goal, CheckError, CheckFailure, Checked, Derivation, Node};
pub use formula::{arity, Arity, Formula, Rel, SetTerm, SyntaxError};
pub use sexpr::Sexp;
pub use smoke::{extract_and_smoke, SmokeReport, SmokeVerdict};
pub use sugar::{parse_formula, parse_formula_with, Sugared};
