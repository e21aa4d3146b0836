//! Exact combinatorics of involutions, labeled Motzkin paths, and the rank
//! generating functions that connect them.
//!
//! Everything here is integer arithmetic. Identities between generating
//! functions are checked coefficientwise over exhaustive enumerations at
//! desk scale; there are no tolerances anywhere.
//!
//! The crate is organized around the objects it manipulates:
//!
//! - [`qpoly`]: polynomials in `q` with checked `i64` coefficients, the
//!   value domain of every identity ([`QPoly`], q-integers, q-binomials).
//! - [`perm`]: permutations, involutions, their statistics (inversions,
//!   visible inversions, matching arcs) and deterministic enumeration
//!   streams.
//! - [`paths`]: Motzkin and Dyck paths, down-step labels, the bijection
//!   between involutions and labeled Motzkin paths, and the step statistics
//!   `H` and `H~`.
//! - [`order`]: Bruhat order induced on involutions, the weak order covers,
//!   rank generating functions, and DOT export of Hasse diagrams.
//! - [`rook`]: labeled Dyck paths as full rook placements on Young diagrams
//!   and the down-position product weight.
//! - [`dinner`]: the dinner-game crossout allocation, its pair of labeled
//!   paths, fairness, and the coincidence with the path bijection on
//!   fixed-point-free involutions.
//! - [`verify`]: the identity-verification harness producing
//!   [`VerificationReport`] records, with guard rails and sharded sums.

pub mod dinner;
mod error;
pub mod order;
pub mod paths;
pub mod perm;
pub mod qpoly;
pub mod rook;
pub mod verify;

pub use error::Error;
pub use paths::{LabeledMotzkinPath, MotzkinPath, Step};
pub use perm::{Involution, Permutation};
pub use qpoly::QPoly;
pub use verify::VerificationReport;
