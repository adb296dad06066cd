//! Strength-two orthogonal arrays with a maximally repeated row.
//!
//! The crate builds, verifies and classifies `OA_λ(k, n)` whose repeated row
//! meets (or nearly meets) the bound `m ≤ λn²/(k(n−1)+1)`:
//!
//! - [`designs`]: the array, parameter quadruple, starting rows, block
//!   designs and Hadamard matrices, plus their text formats.
//! - [`bounds`]: exact bounds on `m` and the feasible/basic parameter calculus.
//! - [`verifier`]: exhaustive pair counting (in memory or streaming) and
//!   optimal / basic / m-optimal classification.
//! - [`cyclic`]: development of starting rows, the distance-pair check and a
//!   backtracking search for starting rows.
//! - [`hadamard_bibd`]: Hadamard matrix → symmetric design → derived and
//!   complemented design → basic binary array, and back.
//! - [`enumerate`]: the all-tuples construction and its partitions.
//! - [`deletion`]: column deletion towards m-optimal arrays.

pub mod bounds;
pub mod cyclic;
pub mod deletion;
pub mod designs;
pub mod enumerate;
mod error;
pub mod hadamard_bibd;
pub mod verifier;

pub use designs::{
    BlockDesign, Development, HadamardMatrix, OrthogonalArray, Quadruple, Rational, StartingRowSet,
    INFINITY,
};
pub use error::{Error, Result};
pub use verifier::{Classification, StreamingVerifier, VerificationReport};
