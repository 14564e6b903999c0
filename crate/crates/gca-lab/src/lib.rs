//! Generalized cellular automata between configuration spaces `A^G` and `A^H`
//! over finite groups and free abelian groups.
//!
//! A homomorphism `phi : H -> G` together with a finite memory set `T` in `G`
//! and a local rule `mu : A^T -> A` determines a map `A^G -> A^H` by
//! `T(x)(h) = mu((phi(h^-1) . x)|_T)`. This crate builds those maps, decides
//! their structural properties at desk scale by exhaustive enumeration, and
//! exposes the quotient / restriction / induction constructions together with
//! machine-checked verification of every construction it performs.
//!
//! Exhaustive inner loops run in parallel through rayon when the `parallel`
//! feature (on by default) is enabled; sequential variants are always
//! available for comparison.

pub mod ca;
pub mod config;
pub mod equivariance;
pub mod error;
pub mod exec;
pub mod groups;
pub mod report;
pub mod structure;
pub mod verify;
pub mod workspace;

pub use ca::{Gca, LocalRule};
pub use config::{Alphabet, Configuration, Pattern};
pub use error::Error;
pub use groups::{Element, Group, Homomorphism, Subgroup};

/// Crate version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
