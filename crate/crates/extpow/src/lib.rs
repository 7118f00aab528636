//! Exact exterior-power calculus for elementary linear groups over
//! commutative rings: the wedge homomorphism via minors, a symbolic
//! transvection calculus with mechanically verified commutator identities,
//! a saturation engine computing the level ideal of an overgroup, and
//! congruence/reduction machinery over finite rings.

pub mod congruence;
pub mod diagram;
pub mod index;
pub mod level;
pub mod matrix;
pub mod ring;
pub mod serialize;
pub mod suite;
pub mod transvect;
pub mod wedge;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("ring mismatch")]
    RingMismatch,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("operation requires a finite modular ring")]
    NotModular,
    #[error("shape mismatch")]
    ShapeMismatch,
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("degenerate commutator: no closed form, use the direct matrix commutator")]
    DegenerateCommutator,
    #[error("diagonal weight pair where an off-diagonal pair is required")]
    DiagonalPair,
    #[error("unknown check id: {0}")]
    UnknownCheck(String),
    #[error("even modulus {0}: the level engine requires 2 to be invertible")]
    EvenModulus(u64),
    #[error("{0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}
