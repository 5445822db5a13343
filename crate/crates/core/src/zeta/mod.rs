//! Polynomial algebra of local coordinates and the relations between them.

pub mod character;
mod linalg;
pub mod poly;
pub mod reduce;
pub mod relations;
pub mod tables;

pub use character::{bprime_coeff, single_zeta, zeta_character, zeta_word};
pub use poly::{Monomial, Side, ZetaPoly, ZetaVar};
pub use reduce::{reduce, reduce_with, OrderPolicy, RewriteSystem, Rule, SideSystem};
pub use relations::{Generator, Relation, RelationSet};
