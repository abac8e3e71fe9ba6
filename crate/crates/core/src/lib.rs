//! Nominal automata over an infinite alphabet of names.
//!
//! The library implements two automaton models and two routes to their
//! language semantics:
//!
//! - **NOFAs** (non-deterministic orbit-finite automata) accepting data
//!   languages: sets of plain words over names.
//! - **RNNAs** (regular non-deterministic nominal automata) with name-binding
//!   transitions, accepting bar languages: sets of α-equivalence classes of
//!   words with binding letters `|a`.
//!
//! Automata are described symbolically by orbit rules ([`automata`]),
//! expanded over a finite name pool, and interpreted three ways: by direct
//! run enumeration, as a least fixed point of a one-step operator over the
//! Kleisli hom-lattice of the powerset monad ([`kleisli`]), and through
//! powerset determinization into macro-states with derivative structure
//! ([`em`]). All three agree on every depth bound, and the algebraic laws
//! the constructions rest on are executable checks ([`laws`]).

pub mod automata;
pub mod barlang;
pub mod em;
pub mod kleisli;
pub mod laws;
pub mod nominal;
pub mod rng;

/// Errors shared by the language and semantics operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("word length {len} exceeds depth bound {depth}")]
    LengthOverflow { len: usize, depth: usize },
    #[error("bar letter in data-language context: {0}")]
    BarInDataContext(String),
    #[error("pool of {pool} atoms is insufficient: {reason}")]
    PoolInsufficient { pool: usize, reason: String },
    #[error("no name fresh for {context} left in a pool of {pool} atoms")]
    PoolExhausted { pool: usize, context: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
}
