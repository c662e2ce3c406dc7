//! Verification toolkit for skeletal modular tensor category data.
//!
//! The crate builds fusion rings, modular data, and skeletal F/R data for the
//! Virasoro minimal models and the `su(2)` WZW families, and machine-checks
//! the algebraic identities that the data must satisfy: pentagon and hexagon
//! coherence, braid-matrix relations, rigidity and quantum dimensions,
//! positivity of the transport pairing, and reflection positivity of the
//! diagonal full-field pairing.
//!
//! Everything is multiplicity-free: every fusion channel appears at most once
//! in the skeletal layer, so hom-space bases are indexed by channel labels.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod families;
pub mod modular;
pub mod report;
pub mod ring;
pub mod skeletal;
pub mod transport;
