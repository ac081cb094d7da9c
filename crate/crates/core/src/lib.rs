//! Unitary solutions of the Yang–Baxter equation and the operator-algebraic
//! invariants of their endomorphisms of the Cuntz algebra, computed at finite
//! levels `F_d^n ≅ M_d^{⊗n}`.
//!
//! The crate is organized by capability:
//!
//! * [`tensor`] and [`linalg`]: dense complex kernel (Kronecker calculus,
//!   shifts, partial traces, normal eigendecomposition, null spaces).
//! * [`rmatrix`]: verification, constructors and operations (⊠, ⊞, cabling).
//! * [`braid`]: braid words, representations, characters, Thoma formula.
//! * [`commutant`]: relative commutants, fixed points, Wedderburn profiles.
//! * [`analysis`] and [`classify`]: ergodicity, index bounds, normal forms,
//!   the two-dimensional classification and the aggregated report.
//! * [`report`]: aggregated reports and the two-dimensional family table.
//! * [`search`]: Riemannian descent for new solutions.
//! * [`builtin`] and [`canon`]: the named example corpus and canonical JSON.

pub mod analysis;
pub mod braid;
pub mod builtin;
pub mod canon;
pub mod classify;
pub mod commutant;
pub mod error;
pub mod linalg;
pub mod random;
pub mod report;
pub mod rmatrix;
pub mod search;
pub mod tensor;

pub use error::{Error, Result};
pub use rmatrix::{NormalFormSpec, RMatrix, SimpleRSpec};
pub use tensor::{AlgebraElement, CMat, C64};
