//! Finite-dimensional active lattices.
//!
//! The crate realizes, for algebras of the form `⊕ Mₙᵢ(ℂ)`:
//!
//! - [`algebra`]: block-diagonal *-algebra arithmetic, support projections,
//!   square roots and seeded sampling;
//! - [`lattice`]: the projection lattice with joins, meets, commeasurability
//!   and vector projections;
//! - [`symmetry`]: the symmetry group and constructive factorization of
//!   unitaries into symmetries;
//! - [`boolean`]: exact finite Boolean algebras, orthomodular lattices,
//!   piecewise Boolean algebras and the colimit algebra built from them;
//! - [`active`]: morphism checks (equivariance, the Dye condition), the Jordan
//!   machinery and reconstruction of algebra maps from projection and symmetry data.

pub mod active;
pub mod algebra;
pub mod boolean;
pub mod error;
pub mod lattice;
pub mod symmetry;

pub use algebra::{AlgebraShape, Element, SeededSampler, ToleranceConfig, C64};
pub use error::{Error, Result};
