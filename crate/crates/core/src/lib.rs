//! A workbench for Krivine's classical realizability with the standard
//! realizability algebra: terms and the evaluation machine, the combinator
//! compiler, a natural-deduction checker with program extraction, truth
//! values over finite stack universes, and the model of threads.

pub mod terms;
pub mod compile;
pub mod machine;
pub mod logic;
pub mod semantics;
pub mod threads;
pub mod catalogue;
