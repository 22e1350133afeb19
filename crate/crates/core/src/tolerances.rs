//! Numerical tolerances shared across the crate.
//!
//! All values are absolute unless the name says otherwise. They are sized for
//! double precision and operator dimensions up to roughly sixteen.

/// Largest allowed `|A_kl - conj(A_lk)|` for a matrix accepted as Hermitian.
pub const HERMITIAN: f64 = 1e-9;
/// Eigenvalues above `-PSD` count as nonnegative.
pub const PSD: f64 = 1e-9;
/// Orthonormality of computed eigenvectors.
pub const ORTHONORMAL: f64 = 1e-10;
/// Reconstruction and operator identities.
pub const RECONSTRUCTION: f64 = 1e-10;
/// Eigenvalues at or below `SUPPORT_REL * max(1, max |lambda|)` are outside the support.
pub const SUPPORT_REL: f64 = 1e-9;
/// Eigenvalues of a transformed state within `DEGENERACY_REL * C_j` of the top one
/// belong to the top cluster.
pub const DEGENERACY_REL: f64 = 1e-8;
/// A maximum confidence within this distance of one counts as unit confidence.
pub const CONFIDENCE: f64 = 1e-9;
/// Prior probabilities must sum to one within this bound.
pub const PRIOR_SUM: f64 = 1e-12;
/// Unit modulus and `v^N = 1` checks for symmetry eigenphases.
pub const PHASE: f64 = 1e-10;
/// Ties in the rank-one minimisation over eigenbasis indices (relative).
pub const TIE_REL: f64 = 1e-9;
/// Positivity residuals of a certificate may go down to `-CERT_POSITIVITY`.
pub const CERT_POSITIVITY: f64 = 1e-8;
/// Equality residuals of a certificate (operator norm) and the trace gap.
pub const CERT_EQUALITY: f64 = 1e-8;
/// Relative eigenvalue threshold used for the rank data of a certificate.
pub const CERT_RANK_REL: f64 = 1e-6;
/// Outcome probabilities below this leave the achieved confidence undefined.
pub const OUTCOME_PROBABILITY: f64 = 1e-12;
