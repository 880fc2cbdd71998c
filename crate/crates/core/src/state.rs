//! Equilibrium states: KMS_β states, their β → 1⁺ closed-form limits,
//! ground states, and the finite-prime-set variant.
//!
//! For β > 1 and a probability measure μ on the circle, the KMS_β state is
//!
//! ψ_{β,μ}(V_a S^m S^{*n} V_b^*) = δ_{a,b} · a^{−β} · F(β, m−n, μ) / ζ(β),
//!
//! with F the twisted Dirichlet series of [`crate::series`]. The series
//! engine returns F as unit·ζ(β) + extra, so the unit part cancels ζ
//! symbolically: for measures whose series is closed-form (point masses at
//! ±1, Lebesgue, mixtures of those) no numeric ζ is ever computed and the
//! reported error bound is exactly zero. That keeps evaluation valid
//! arbitrarily close to β = 1, where numeric ζ is refused.
//!
//! Ground states are indexed by states φ of the additive Toeplitz algebra
//! C*(S): ω_φ(V_a S^m S^{*n} V_b^*) = δ_{a,b} δ_{a,1} φ(S^m S^{*n}).
//!
//! With a finite prime set E, the same formulas run over the E-smooth
//! integers with Z_E(β) = ∏_{p∈E}(1−p^{−β})^{−1} in place of ζ(β); these
//! states exist for every β > 0 and reject monomials whose legs are not
//! E-smooth.

use crate::affine::is_smooth;
use crate::measure::Measure;
use crate::monomial::Monomial;
use crate::series::{
    dirichlet_part, domain_zeta, euler_product, pow_neg_beta, Domain, SeriesParams, DEFAULT_MAX_TERMS,
    DEFAULT_TOL,
};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Parameters of the dynamics σ_t(V_a) = a^{it} V_a and of the series
/// evaluation behind the states.
#[derive(Debug, Clone)]
pub struct KmsParams {
    pub beta: f64,
    /// Error budget per state evaluation (split between the numerator
    /// series and the normalizing zeta).
    pub tol: f64,
    /// Restrict to the E-smooth part; `None` means all of ℕ^×.
    pub prime_set: Option<Vec<u64>>,
    /// Budget for numeric series terms before refusing.
    pub max_terms: u64,
}

impl KmsParams {
    pub fn new(beta: f64) -> Self {
        KmsParams {
            beta,
            tol: DEFAULT_TOL,
            prime_set: None,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_prime_set(mut self, primes: Vec<u64>) -> Self {
        self.prime_set = Some(primes);
        self
    }

    fn series(&self, tol: f64) -> Result<SeriesParams> {
        let domain = match &self.prime_set {
            None => Domain::All,
            Some(primes) => Domain::Smooth(primes.clone()),
        };
        let mut params = SeriesParams::new(self.beta, tol, domain)?;
        params.max_terms = self.max_terms;
        Ok(params)
    }
}

/// A state evaluation: the value together with a bound on the truncation
/// error of the series behind it (0 on closed-form paths).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateValue {
    pub value: Complex64,
    pub error_bound: f64,
}

impl StateValue {
    pub fn exact(value: Complex64) -> Self {
        StateValue {
            value,
            error_bound: 0.0,
        }
    }

    pub const ZERO: StateValue = StateValue {
        value: Complex64::new(0.0, 0.0),
        error_bound: 0.0,
    };
}

type Evaluator = dyn Fn(&Monomial) -> Result<StateValue> + Send + Sync;

/// A functional on monomials: a KMS state, a ground state, or any
/// user-supplied assignment. Evaluators are pure; for states the identity
/// monomial evaluates to 1.
#[derive(Clone)]
pub struct StateOracle {
    label: String,
    evaluator: Arc<Evaluator>,
}

impl StateOracle {
    pub fn new(
        label: impl Into<String>,
        evaluator: impl Fn(&Monomial) -> Result<StateValue> + Send + Sync + 'static,
    ) -> Self {
        StateOracle {
            label: label.into(),
            evaluator: Arc::new(evaluator),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn evaluate(&self, x: &Monomial) -> Result<StateValue> {
        (self.evaluator)(x)
    }
}

impl fmt::Debug for StateOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateOracle")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

/// Σ_c c^{−β}·moment(μ, c·j) over the domain selected by `params`, with an
/// error bound honoring `params.tol`.
pub fn dirichlet_sum(params: &KmsParams, j: &BigInt, mu: &Measure) -> Result<(Complex64, f64)> {
    crate::series::dirichlet_sum(&params.series(params.tol / 2.0)?, j, mu)
}

fn leg_to_f64(a: &BigUint) -> f64 {
    a.to_f64().unwrap_or(f64::INFINITY)
}

/// The KMS_β state ψ_{β,μ} for β > 1. With a prime set in `params` this
/// delegates to [`finite_prime_kms_state`].
pub fn kms_state(params: &KmsParams, mu: &Measure) -> Result<StateOracle> {
    if params.prime_set.is_some() {
        return finite_prime_kms_state(params, mu);
    }
    if params.beta <= 1.0 || params.beta.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "KMS states on the full algebra need beta > 1, got {}",
            params.beta
        )));
    }
    let label = format!("kms(beta={}, mu={})", params.beta, mu.label());
    let params = params.clone();
    let mu = mu.clone();
    // ζ(β) is needed only when an atom escapes the closed forms; computed
    // on first use, then reused (idempotent fill).
    let zeta: Arc<OnceLock<std::result::Result<(f64, f64), Error>>> = Arc::new(OnceLock::new());
    Ok(StateOracle::new(label, move |x: &Monomial| {
        if x.a() != x.b() {
            return Ok(StateValue::ZERO);
        }
        let part = dirichlet_part(&params.series(params.tol / 2.0)?, &x.gap(), &mu)?;
        let scale = pow_neg_beta(leg_to_f64(x.a()), params.beta);
        if part.extra == Complex64::new(0.0, 0.0) && part.err == 0.0 {
            return Ok(StateValue::exact(Complex64::new(scale * part.unit, 0.0)));
        }
        let (z, z_err) = zeta
            .get_or_init(|| domain_zeta(&params.series(params.tol / 2.0)?))
            .clone()?;
        let value = scale * (Complex64::new(part.unit, 0.0) + part.extra / z);
        let error_bound = scale * (part.err / z + part.extra.norm() * z_err / (z * z))
            + 8.0 * f64::EPSILON * (value.norm() + 1.0);
        Ok(StateValue { value, error_bound })
    }))
}

type MomentOracle = Arc<dyn Fn(&BigUint, &BigUint) -> Complex64 + Send + Sync>;

/// A state of the additive Toeplitz algebra 𝒯 = C*(S), given by its values
/// φ(S^m S^{*n}). Requires φ(1) = 1 and φ(S^m S^{*n}) = conj(φ(S^n S^{*m})).
#[derive(Clone)]
pub struct ToeplitzStateSpec {
    label: String,
    oracle: MomentOracle,
}

impl ToeplitzStateSpec {
    pub fn new(
        label: impl Into<String>,
        oracle: impl Fn(&BigUint, &BigUint) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        let spec = ToeplitzStateSpec {
            label: label.into(),
            oracle: Arc::new(oracle),
        };
        debug_assert!(
            (spec.value(&BigUint::zero(), &BigUint::zero()) - Complex64::new(1.0, 0.0)).norm()
                < 1e-12,
            "Toeplitz state spec must normalize the identity to 1"
        );
        spec
    }

    /// The state pulled back from C(𝕋) along the symbol map:
    /// φ(S^m S^{*n}) = ∫ z^{m−n} dμ.
    pub fn from_measure(mu: &Measure) -> Self {
        let label = mu.label();
        let mu = mu.clone();
        ToeplitzStateSpec::new(label, move |m, n| {
            mu.moment(&(BigInt::from(m.clone()) - BigInt::from(n.clone())))
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self, m: &BigUint, n: &BigUint) -> Complex64 {
        (self.oracle)(m, n)
    }
}

impl fmt::Debug for ToeplitzStateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ToeplitzStateSpec")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

/// The ground state ω_φ(V_a S^m S^{*n} V_b^*) = δ_{a,b} δ_{a,1} φ(S^m S^{*n}).
pub fn ground_state(spec: ToeplitzStateSpec) -> StateOracle {
    let label = format!("ground({})", spec.label());
    StateOracle::new(label, move |x: &Monomial| {
        if x.a() != x.b() || !x.a().is_one() {
            return Ok(StateValue::ZERO);
        }
        Ok(StateValue::exact(spec.value(x.m(), x.n())))
    })
}

/// The three measures whose KMS_β states have closed-form β → 1⁺ limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kms1Label {
    Lebesgue,
    DeltaPlusOne,
    DeltaMinusOne,
}

impl Kms1Label {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "lebesgue" => Ok(Kms1Label::Lebesgue),
            "delta_plus1" | "delta1" => Ok(Kms1Label::DeltaPlusOne),
            "delta_minus1" | "delta-1" => Ok(Kms1Label::DeltaMinusOne),
            other => Err(Error::InvalidMeasure(format!(
                "unknown measure label {other:?}; expected lebesgue, delta_plus1, or delta_minus1"
            ))),
        }
    }

    pub fn measure(&self) -> Measure {
        match self {
            Kms1Label::Lebesgue => Measure::Lebesgue,
            Kms1Label::DeltaPlusOne => Measure::delta_one(),
            Kms1Label::DeltaMinusOne => Measure::delta_minus_one(),
        }
    }
}

/// Closed-form β → 1⁺ limit of ψ_{β,μ} for the tabulated measures:
/// δ_{a,b} δ_{m,n} a^{−1} (Lebesgue), δ_{a,b} a^{−1} (δ₁), and
/// δ_{a,b} a^{−1} on even gaps, 0 on odd (δ₋₁).
pub fn kms1_limit(mu_label: Kms1Label, x: &Monomial) -> Complex64 {
    if x.a() != x.b() {
        return Complex64::new(0.0, 0.0);
    }
    let inv_a = 1.0 / leg_to_f64(x.a());
    let keep = match mu_label {
        Kms1Label::Lebesgue => x.m() == x.n(),
        Kms1Label::DeltaPlusOne => true,
        Kms1Label::DeltaMinusOne => x.gap().is_even(),
    };
    if keep {
        Complex64::new(inv_a, 0.0)
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// The KMS_β state of the E-smooth part, defined for every β > 0:
/// ψ(V_a S^m S^{*n} V_b^*) = δ_{a,b} a^{−β} Σ_{c E-smooth} c^{−β}
/// moment(μ, c(m−n)) / Z_E(β). Legs must be E-smooth.
pub fn finite_prime_kms_state(params: &KmsParams, mu: &Measure) -> Result<StateOracle> {
    let primes = crate::affine::canonical_prime_set(
        params.prime_set.as_deref().ok_or_else(|| {
            Error::InvalidParameter("finite-prime KMS state needs a prime set".into())
        })?,
    )?;
    if params.beta <= 0.0 || params.beta.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "finite-prime KMS states need beta > 0, got {}",
            params.beta
        )));
    }
    let z = euler_product(&primes, params.beta)?;
    let label = format!(
        "kms(beta={}, mu={}, primes={primes:?})",
        params.beta,
        mu.label()
    );
    let params = KmsParams {
        prime_set: Some(primes.clone()),
        ..params.clone()
    };
    let mu = mu.clone();
    Ok(StateOracle::new(label, move |x: &Monomial| {
        for leg in [x.a(), x.b()] {
            if !is_smooth(leg, &primes) {
                return Err(Error::NotSmooth {
                    value: leg.clone(),
                    primes: primes.clone(),
                });
            }
        }
        if x.a() != x.b() {
            return Ok(StateValue::ZERO);
        }
        let part = dirichlet_part(&params.series(params.tol)?, &x.gap(), &mu)?;
        let scale = pow_neg_beta(leg_to_f64(x.a()), params.beta);
        if part.extra == Complex64::new(0.0, 0.0) && part.err == 0.0 {
            return Ok(StateValue::exact(Complex64::new(scale * part.unit, 0.0)));
        }
        let value = scale * (Complex64::new(part.unit, 0.0) + part.extra / z);
        let error_bound =
            scale * part.err / z + 8.0 * f64::EPSILON * (value.norm() + 1.0);
        Ok(StateValue { value, error_bound })
    }))
}
