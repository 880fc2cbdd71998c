//! Exact computer algebra for the Toeplitz algebra of the affine monoid ℕ^× ⋉ ℕ.
//!
//! The algebra 𝒯(ℕ^× ⋉ ℕ) is generated by one additive isometry S and one
//! multiplicative isometry V_a per positive integer a, subject to
//!
//! ```text
//! (T0)  S*S = 1 = V_a*V_a          (T1)  S V_a = V_a S^a
//! (T2)  V_a V_b = V_ab             (T3)  V_a* V_b = V_b V_a*   (gcd(a,b) = 1)
//! (T4)  S* V_a = V_a S*^a
//! ```
//!
//! and is linearly spanned by the monomials V_a S^m S^{*n} V_b^*. Imposing
//! `SS* = 1` yields the additive boundary quotient, `V_aV_a* = 1` the
//! multiplicative one, and both together the full boundary quotient, which is
//! the group algebra of ℚ₊^× ⋉ ℚ.
//!
//! Layers:
//!
//! - [`affine`]: the quasi-lattice order on ℚ₊^× ⋉ ℚ and its cone ℕ^× ⋉ ℕ,
//!   with exact least upper bounds and brute-force order oracles.
//! - [`monomial`], [`algebra`]: normal-form monomial calculus in the full
//!   algebra and the three quotients, plus finite linear combinations.
//! - [`measure`], [`series`], [`state`]: circle measures with exact rational
//!   moments, tail-bounded Dirichlet series, and the induced equilibrium
//!   states (KMS_β, ground, β→1⁺ limits, finite prime sets).
//! - [`rep`], [`spatial`]: truncated Hilbert-space models acting as
//!   independent numerical oracles for all of the above.
//! - [`verify`]: residual checks and seeded sweeps for the KMS identities.
//!
//! Monoid bookkeeping is exact (arbitrary-precision integers and rationals);
//! floating point enters only through state values and series tails, always
//! with a reported error bound.

use num_bigint::BigUint;

pub mod affine;
pub mod algebra;
pub mod measure;
pub mod monomial;
pub mod rep;
pub mod series;
pub mod spatial;
pub mod state;
pub mod verify;
pub mod wire;

/// Errors shared by every module. Variants carry the operation-level context;
/// the messages are stable and matched by the CLI's exit-code mapping.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A brute-force order oracle could not certify minimality inside the
    /// requested search window.
    #[error("bounds too small: {0}")]
    BoundsTooSmall(String),

    /// Two algebra elements over different presentations were combined.
    #[error("mixed presentation: {left} vs {right}")]
    MixedPresentation {
        left: &'static str,
        right: &'static str,
    },

    /// Series evaluation refused: the tail bound degenerates as β ↓ 1.
    #[error("beta too close to 1: series evaluation needs beta ≥ {min}, got {beta}")]
    BetaTooCloseToOne { beta: f64, min: f64 },

    /// The adaptive cutoff needed for the requested tolerance exceeds the
    /// configured term budget and no closed form applies.
    #[error("beta too close to 1: required series cutoff {required:.3e} exceeds the limit {limit}")]
    CutoffExceeded { required: f64, limit: u64 },

    /// A monomial leg has a prime factor outside the configured prime set.
    #[error("element not E-smooth: {value} has a prime factor outside {primes:?}")]
    NotSmooth { value: BigUint, primes: Vec<u64> },

    /// An operation that needs a purely atomic measure received one with a
    /// continuous part.
    #[error("non-atomic measure")]
    NonAtomicMeasure,

    /// A V_a generator was requested on a ℚ₊ grid whose denominator a does
    /// not divide.
    #[error("a does not divide grid: V_{a} on denominator lcm {denominator}")]
    GridMismatch { a: u64, denominator: u64 },

    /// gcd_split precondition failure.
    #[error("precondition ac≠bd: {a}·{c} ≠ {b}·{d}")]
    UnbalancedProducts { a: u64, c: u64, b: u64, d: u64 },

    /// gcd_split postcondition failure; unreachable for positive inputs.
    #[error("lemma violation: splits of ({a},{c},{b},{d}) disagree")]
    LemmaViolation { a: u64, c: u64, b: u64, d: u64 },

    /// Malformed measure data (weights, turns, empty atom lists, ...).
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// Malformed numeric or structural parameter.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A truncated representation does not support the requested generator.
    #[error("unsupported generator: {0}")]
    UnsupportedGenerator(String),

    /// Arbitrary-precision data did not fit the fixed-width context.
    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
