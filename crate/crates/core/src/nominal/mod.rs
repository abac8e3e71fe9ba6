//! Names, finite permutations, group actions, supports, abstraction values,
//! and finite supported sets with the powerset-monad structure.

mod abs;
mod atom;
mod set;

pub use abs::{abs_eq, Abs};
pub use atom::{fresh_for, least_fresh, Name, Nominal, Perm};
pub use set::{comm_pair, costrength, strength, SuppSet};
