//! Exact combinatorics of conformal-blocks vector bundles for `sl_2m`.
//!
//! A bundle is specified by a Lie algebra `sl_2m`, a level `l`, and `n`
//! weights `c_1 w_m, ..., c_n w_m` (rectangular multiples of the middle
//! fundamental weight, `0 <= c_i <= l`). This crate computes, in exact
//! arithmetic throughout:
//!
//! * the rank of such a bundle on the moduli space of stable n-pointed
//!   rational curves, as a count of proper semistandard Young tableaux
//!   ([`kostka`]);
//! * a closed-form classification of the rank into zero / one / more than
//!   one, with the certificate data behind the verdict ([`bundles`]);
//! * for rank-one bundles, the decomposition of the first Chern class into
//!   level-one bundles, checked against intersection numbers with all
//!   F-curves ([`chern`]).
//!
//! The tableau machinery lives in [`shapes`] (diagrams and their low rows)
//! and [`fills`] (tableaux, the deterministic filling algorithms, and the
//! one-box modification that witnesses higher rank).
//!
//! Counts are arbitrary-precision naturals and intersection arithmetic is
//! exact rational, so every reported number is exact.

pub mod bundles;
pub mod chern;
pub mod fills;
pub mod kostka;
pub mod shapes;

/// Error type shared by all modules.
///
/// `Internal` signals a broken invariant (a bug, or a precondition violated
/// by a caller that bypassed validation); everything else reports a problem
/// with the query itself.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The input fails a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The query is well-formed but outside what the implementation supports.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A filling algorithm ran out of room; reported, not a panic.
    #[error("fill failed: {0}")]
    FillFailed(String),
    /// An internal invariant did not hold.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
