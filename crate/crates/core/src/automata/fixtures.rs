//! The automaton descriptions shipped with the repository, embedded so
//! library tests and the CLI agree on one source of truth.

/// Reads a name, then reads it again: data words `x x`.
pub const EX1: &str = include_str!("../../../../fixtures/ex1.aut");

/// Binds a name, then reads it: the bar language `{ [|a a] }`.
pub const EX2: &str = include_str!("../../../../fixtures/ex2.aut");

/// Binds a name, then reads it any number of times: `{ [|a a^n] : n >= 0 }`.
pub const EX3: &str = include_str!("../../../../fixtures/ex3.aut");
