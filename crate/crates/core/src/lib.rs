//! Exact invariant cohomology of Lie algebras with para-complex structures.

pub mod catalog;
pub mod cohomology;
pub mod deform;
pub mod dkahler;
pub mod exterior;
pub mod lie;
pub mod linalg;
pub mod paracomplex;
pub mod scalar;
