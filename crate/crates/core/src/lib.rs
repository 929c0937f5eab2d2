//! Rational and polyhedral sets in free abelian and virtually abelian groups:
//! lattice algorithms, polyhedral/semilinear conversions, growth series,
//! multi-tape automata, EDT0L systems and group-level constructions.

pub mod automata;
pub mod cli;
pub mod error;
pub mod growth;
pub mod lattice;
pub mod oracle;
pub mod polyhedral;
pub mod semilinear;
pub mod vabgroup;

pub use error::{Error, Result};
