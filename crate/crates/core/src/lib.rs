pub mod bases;
pub mod error;
pub mod ncpoly;
pub mod numeric;
pub mod rational;
pub mod words;
pub mod zeta;

pub use bases::{BasisId, BasisKind, BasisTable};
pub use error::{Error, Result};
pub use ncpoly::{NcPoly, TensorPoly};
pub use rational::Rational;
pub use words::{Alphabet, Letter, Word};
