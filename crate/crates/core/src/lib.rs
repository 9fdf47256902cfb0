//! Torsion in the homology of random simplicial complexes.
//!
//! The crate simulates the Linial–Meshulam process `Y_d(n, m)` and a
//! basis-exchange Markov chain on 2-dimensional Q-acyclic complexes, computes
//! exact integer homology of the resulting complexes, and compares the
//! torsion groups that appear against Cohen–Lenstra style distributions.
//!
//! Module map:
//!
//! * [`simplicial`] face enumeration, colex ranking and boundary matrices.
//! * [`homology`] sparse Smith normal form, mod-`q` ranks, elementary collapses.
//! * [`groups`] finite abelian groups, automorphism counts and the
//!   Cohen–Lenstra / `λ_k` distributions.
//! * [`lmprocess`] the random process, the largest-torsion search and burst anatomy.
//! * [`qtrees`] sampling and enumeration of Q-acyclic 2-complexes.
//! * [`shadow`] shadows, cores and the hitting-time experiment.
//! * [`harness`] seeded parallel experiments, records and summary tables.

pub mod error;
pub mod groups;
pub mod harness;
pub mod homology;
pub mod lmprocess;
pub mod qtrees;
pub mod shadow;
pub mod simplicial;

pub use error::{Error, Result};
