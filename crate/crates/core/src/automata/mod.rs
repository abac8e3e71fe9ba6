//! Symbolic NOFA/RNNA descriptions, their side conditions, expansion over a
//! finite name pool, run semantics, and the brute-force language oracle.

mod concrete;
pub mod fixtures;
mod random;
mod spec;

pub use concrete::{expand, ConcreteAutomaton, State};
pub use random::random_spec;
pub use spec::{
    parse_spec, parse_spec_unchecked, validate_spec, AutomatonKind, AutomatonSpec, OrbitDecl,
    ParseError, Rule, RuleLetter, SpecError, Violation,
};
