//! Homotopy fixed points of Frobenius-type endomorphisms on explicit
//! abelian groups and directed systems of them.
//!
//! The building blocks are exact: [`abgroup`] does integer linear algebra
//! (Smith normal form, kernels, cokernels, localization), [`fixpoint`] takes
//! fixed points of `1 − φ` on single groups, graded groups and complexes, and
//! [`indgroup`] does the same level-wise on towers such as `colim F_{p^{m!}}^×`.
//! On top sit the worked families: [`ktheory`] (K-groups and stable stems of
//! `F̄_p`), [`curves`] (units, Picard groups and elliptic curves in weight one)
//! and [`thh`] (truncated Kähler differentials with Artin–Schreier fixed points).

pub mod abgroup;
pub mod arith;
pub mod curves;
mod error;
pub mod field;
pub mod fixpoint;
pub mod indgroup;
pub mod ktheory;
pub mod thh;

pub use error::{Error, Result};
