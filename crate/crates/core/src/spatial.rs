//! Spatial form of the KMS states on ℓ²(ℕ^×) ⊗ L²(μ), as an oracle
//! independent of the series engine.
//!
//! For a purely atomic probability measure μ on the circle, represent the
//! algebra on H_μ = ℓ²(ℕ^×) ⊗ L²(μ) by S(f e_d) = (M^d f) e_d and
//! V_a(f e_d) = f e_{ad}, with M multiplication by the atom positions.
//! Then
//!
//! ψ_{β,μ}(T) = ζ(β)^{−1} Σ_{d ∈ ℕ^×} d^{−β} ⟨T(1 e_d), 1 e_d⟩,
//!
//! and the sum truncated at d ≤ depth misses at most
//! depth^{1−β}/(β−1)/ζ(β) in modulus (each bracket has modulus ≤ 1).
//!
//! Evaluation walks the generator word of the monomial letter by letter on
//! the pair (sector d, phase exponent e): V_b^* divides the sector or kills
//! the vector, S^{±1} shifts the exponent by ±d, V_a multiplies the sector,
//! and the final bracket against 1 e_d is moment(μ, e) when the sector
//! returns to d and 0 otherwise. Sectors e_{ad/b} with a ≠ b never return,
//! so off-diagonal monomials evaluate to 0 exactly.

use crate::measure::Measure;
use crate::monomial::Monomial;
use crate::rep::{word_for, Gen};
use crate::series::{pow_neg_beta, zeta_numeric, DEFAULT_MAX_TERMS, DEFAULT_TOL};
use crate::state::{StateOracle, StateValue};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::Zero;

/// ⟨x(1 e_d), 1 e_d⟩ by walking the generator word of x; `None` when the
/// vector leaves the sector family or lands in a different sector.
fn bracket(word: &[Gen], mu: &Measure, d: u64) -> Option<Complex64> {
    let start = BigUint::from(d);
    let mut sector = start.clone();
    let mut exponent = BigInt::zero();
    for gen in word {
        match gen {
            Gen::VStar(b) => {
                let b = BigUint::from(*b);
                if (&sector % &b).is_zero() {
                    sector /= b;
                } else {
                    return None;
                }
            }
            Gen::SStar => exponent -= BigInt::from(sector.clone()),
            Gen::S => exponent += BigInt::from(sector.clone()),
            Gen::V(a) => sector *= *a,
        }
    }
    (sector == start).then(|| mu.moment(&exponent))
}

/// The KMS_β state evaluated spatially by truncating the defining sum at
/// d ≤ depth; needs β > 1 and a purely atomic μ. The reported error bound
/// is the truncation tail plus the ζ(β) uncertainty.
pub fn spatial_kms(beta: f64, mu: &Measure, depth: u64) -> Result<StateOracle> {
    mu.flatten_atoms()?;
    if beta <= 1.0 || beta.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "spatial evaluation needs beta > 1, got {beta}"
        )));
    }
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    let (zeta, zeta_err) = zeta_numeric(beta, DEFAULT_TOL, DEFAULT_MAX_TERMS)?;
    let tail = pow_neg_beta(depth as f64, beta - 1.0) / (beta - 1.0);
    let label = format!("spatial(beta={beta}, mu={}, depth={depth})", mu.label());
    let mu = mu.clone();
    Ok(StateOracle::new(label, move |x: &Monomial| {
        if x.a() != x.b() {
            return Ok(StateValue::ZERO);
        }
        let word = word_for(x)?;
        let mut sum = Complex64::new(0.0, 0.0);
        for d in 1..=depth {
            if let Some(value) = bracket(&word, &mu, d) {
                sum += pow_neg_beta(d as f64, beta) * value;
            }
        }
        let value = sum / zeta;
        let error_bound = (tail + sum.norm() * zeta_err / zeta) / zeta
            + 8.0 * f64::EPSILON * (value.norm() + 1.0);
        Ok(StateValue { value, error_bound })
    }))
}
