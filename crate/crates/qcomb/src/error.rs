use thiserror::Error;

/// Errors for fallible constructors, parsers and guarded computations.
///
/// Internal invariant violations (coefficient overflow, inexact division,
/// odd statistic sums) panic instead: they indicate a bug, and the checked
/// arithmetic contract turns them into test failures rather than wrong
/// identities.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not a permutation word: {0}")]
    InvalidPermutation(String),

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("not an involution: {0}")]
    NotInvolution(String),

    #[error("invalid step word: {0}")]
    InvalidPath(String),

    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    #[error("invalid rook placement: {0}")]
    InvalidPlacement(String),

    #[error("size must be even, got {0}")]
    OddSize(usize),

    #[error("{what}: n = {requested} exceeds the guard of {max} ({estimate}); rerun with force to override")]
    GuardExceeded {
        what: &'static str,
        requested: usize,
        max: usize,
        estimate: &'static str,
    },

    #[error("parse error: {0}")]
    Parse(String),
}
