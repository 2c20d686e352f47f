//! Finite nondeterministic systems, their lattice semantics, Fraïssé-style
//! limit constructions, shifts of finite type and proshift towers.

pub mod error;
pub mod fraisse;
pub mod lattice;
pub mod proshift;
pub mod shifts;
pub mod systems;
pub mod workspace;

pub use error::{Error, Result};
