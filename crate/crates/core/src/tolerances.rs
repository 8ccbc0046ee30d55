//! Numerical thresholds shared across modules.

/// `1 - 4 det` at or below this is treated as a degenerate 2×2 spectrum.
pub const DEGENERACY: f64 = 1e-12;

/// Determinants in `[-PHYSICALITY, 0)` are clamped to zero.
pub const PHYSICALITY: f64 = 1e-12;

/// Allowed deviation of a rank-2 operator's trace from one.
pub const UNIT_TRACE: f64 = 1e-12;

/// `|p|` at or above `1 - BASIS_COLLAPSE` is rejected.
pub const BASIS_COLLAPSE: f64 = 1e-12;

/// `|b + d p|` below this leaves the off-diagonal phase undefined.
pub const PHASE_UNDEFINED: f64 = 1e-14;

/// Eigenvalues below this are outside the support.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Orthonormality and weight-sum slack for spectral decompositions.
pub const DECOMPOSITION: f64 = 1e-10;

/// Pure-state normalization slack.
pub const NORMALIZATION: f64 = 1e-10;

/// Hermiticity check, relative to the largest entry.
pub const HERMITIAN: f64 = 1e-12;

/// Tiny negative QFI values (cancellation) are clamped to zero.
pub const QFI_NEGATIVE_CLAMP: f64 = 1e-10;

/// Default central-difference step for the SLD oracle.
pub const FD_STEP: f64 = 1e-5;

/// Steps shorter than this (relative to `max(1, |phi|)`) cannot resolve a derivative.
pub const FD_STEP_FLOOR: f64 = 1e-13;

/// Largest Poisson tail a coherent-state truncation may discard.
pub const TRUNCATION_TAIL: f64 = 1e-10;

/// Tail target used when choosing `n_max` adaptively.
pub const ADAPTIVE_TAIL: f64 = 1e-12;

/// Tail accepted when the caller pins `n_max` explicitly.
pub const FORCED_TRUNCATION_TAIL: f64 = 1e-4;

/// Smallest adaptive per-mode cutoff.
pub const MIN_N_MAX: usize = 15;

/// Default cap on `(n_max + 1)^modes`.
pub const MAX_DIM: usize = 1_000_000;
