//! Finite-scale engines for order-theoretic fixed points and initial algebras.
//!
//! The crate is organized around a handful of executable constructions:
//!
//! - [`poset`]: finite partial orders, monotone maps, directed subsets and
//!   joins — the substrate everything else runs on.
//! - [`engines`]: four least-fixed-point engines (Kleene iteration, Zermelo
//!   staging, Knaster-Tarski meet-of-prefixed-points, Pataraia closure plus
//!   its monoid-of-inflationary-maps variant) that must all agree.
//! - [`finset`] / [`functor`]: finite sets, functions, directed colimits,
//!   subobject lattices, and a grammar of container/powerset endofunctors
//!   with computable action on objects and morphisms.
//! - [`coalg`]: recursive coalgebras and a hylomorphism solver checked
//!   against a brute-force oracle.
//! - [`initial`]: two constructions of the initial algebra — the iterative
//!   chain and the least fixed point on the subobject lattice of a
//!   pre-fixed point — cross-validated against each other.
//! - [`dcpo`]: finite pointed posets as an order-enriched category:
//!   embedding/projection pairs, the colimit characterization, smoothness
//!   of embeddings, and the initial-algebra/terminal-coalgebra coincidence.
//! - [`metric`]: directed joins of finite metric subspaces with exact
//!   rational arithmetic.
//! - [`cert`] / [`instance`]: witness-carrying certificates, canonical JSON,
//!   and the CLI instance format.

pub mod caps;
pub mod cert;
pub mod coalg;
pub mod dcpo;
pub mod engines;
pub mod error;
pub mod finset;
pub mod functor;
pub mod initial;
pub mod instance;
pub mod metric;
pub mod poset;
pub mod term;

#[cfg(test)]
pub(crate) mod fixtures;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
