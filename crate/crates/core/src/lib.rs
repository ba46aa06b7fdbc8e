//! Skew polynomials over finite fields and the matroid they induce.
//!
//! The crate is layered bottom-up:
//!
//! - [`field`]: `F_{q^m}` in discrete-log form, Frobenius maps, `F_q`
//!   coordinates and Gaussian elimination.
//! - [`skewpoly`]: the ring `F_{q^m}[x;σ_s]` with right division,
//!   grcd/llcm and remainder evaluation.
//! - [`conjugacy`]: the warping map, σ-conjugacy classes and the two
//!   `(q-1)`-th root extraction methods.
//! - [`minimal`]: minimal polynomials, P-independence and P-closure.
//! - [`matroid`]: the induced `F_q`-representable matroid, its flat metric
//!   and the isometry with the subspace lattice.
//! - [`netsim`]: a matroidal network coding simulator with a vector RLNC
//!   oracle driven by mirrored randomness.

pub mod conjugacy;
pub mod field;
pub mod golden;
pub mod matroid;
pub mod minimal;
pub mod netsim;
pub mod skewpoly;

pub use conjugacy::ClassId;
pub use field::{Fe, FieldCtx, FieldError, Matrix};
pub use matroid::{Flat, Matroid, Subspace};
pub use minimal::{MinPoly, PointSet};
pub use skewpoly::SkewPoly;
