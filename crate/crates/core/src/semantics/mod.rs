//! Names, finite stack universes, generated poles and truth values.

mod name;
mod pole;
mod truth;
mod universe;

pub use name::{Name, NameParseError};
pub use pole::{pole_member, Pole, PoleVerdict};
pub use truth::{
    delta, forces, gimel, integer_name, norm_member, ntilde, realizes, successor_name, DeltaValue, Evaluator,
    RankLog, Realizes, SemanticsError, Truth, TruthQuery,
};
pub use universe::{StackUniverse, UniverseParams};
