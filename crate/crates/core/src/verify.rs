//! Residual checks of the equilibrium identities against any state oracle.
//!
//! Three identities are checked on exact monomials:
//!
//! - the KMS_β characterization
//!   φ(V_a S^m S^{*n} V_b^*) = δ_{a,b} a^{−β} φ(S^{((m−n))}),
//!   where S^{((j))} means S^j for j ≥ 0 and S^{*|j|} for j < 0;
//! - the twisted trace identity φ(xy) = (a_x/b_x)^{−β} φ(yx) — on spanning
//!   monomials the modular flow acts by the exact scalar (a/b)^{it}, so
//!   σ_{iβ} is the scalar (a/b)^{−β} and no analytic continuation is needed;
//! - the ground-state characterization
//!   ω(V_a S^m S^{*n} V_b^*) = δ_{a,b} δ_{a,1} ω(S^m S^{*n}).
//!
//! [`sweep`] runs seeded random batches and reports the worst residual.
//! Legs are drawn divisor-rich (weight τ(n)/n) so that products exercise
//! nontrivial gcd splits, which uniform draws rarely hit. The arithmetic
//! behind those splits is [`gcd_split`], checked here as well.

use crate::affine::SearchWindow;
use crate::measure::{rat_to_f64, Measure};
use crate::monomial::{Monomial, StarMonomial};
use crate::series::pow_neg_beta;
use crate::state::{kms_state, KmsParams, StateOracle};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// One residual check: both sides of an identity and their distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub pass: bool,
}

impl Check {
    fn new(lhs: Complex64, rhs: Complex64, tol: f64) -> Self {
        let residual = (lhs - rhs).norm();
        Check {
            lhs,
            rhs,
            residual,
            pass: residual <= tol,
        }
    }
}

fn saturating_sub(m: &BigUint, n: &BigUint) -> BigUint {
    if m >= n {
        m - n
    } else {
        BigUint::zero()
    }
}

/// S^{((m−n))} as a monomial: (1, m∸n, n∸m, 1).
fn gap_monomial(x: &Monomial) -> Monomial {
    Monomial::new(
        BigUint::from(1u32),
        saturating_sub(x.m(), x.n()),
        saturating_sub(x.n(), x.m()),
        BigUint::from(1u32),
    )
    .expect("legs are 1")
}

fn leg_ratio_pow(x: &Monomial, exponent: f64) -> f64 {
    let ratio = rat_to_f64(&BigRational::new(
        BigInt::from(x.a().clone()),
        BigInt::from(x.b().clone()),
    ));
    ratio.powf(exponent)
}

/// Residual of the KMS_β characterization at x:
/// |φ(x) − δ_{a,b} a^{−β} φ(S^{((m−n))})|.
pub fn check_char(phi: &StateOracle, beta: f64, x: &Monomial, tol: f64) -> Result<Check> {
    let lhs = phi.evaluate(x)?.value;
    let rhs = if x.a() == x.b() {
        let scale = pow_neg_beta(x.a().to_f64().unwrap_or(f64::INFINITY), beta);
        scale * phi.evaluate(&gap_monomial(x))?.value
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(Check::new(lhs, rhs, tol))
}

/// Residual of the twisted trace identity at (x, y):
/// |φ(xy) − (a_x/b_x)^{−β} φ(yx)|.
pub fn check_kms_identity(
    phi: &StateOracle,
    beta: f64,
    x: &Monomial,
    y: &Monomial,
    tol: f64,
) -> Result<Check> {
    let lhs = phi.evaluate(&x.mul(y))?.value;
    let rhs = leg_ratio_pow(x, -beta) * phi.evaluate(&y.mul(x))?.value;
    Ok(Check::new(lhs, rhs, tol))
}

/// Residual of the ground-state characterization at x:
/// |ω(x) − δ_{a,b} δ_{a,1} ω(S^m S^{*n})|.
pub fn check_ground(omega: &StateOracle, x: &Monomial, tol: f64) -> Result<Check> {
    let lhs = omega.evaluate(x)?.value;
    let rhs = if x.a() == x.b() && x.a() == &BigUint::from(1u32) {
        omega
            .evaluate(&Monomial::new(1u32, x.m().clone(), x.n().clone(), 1u32)?)?
            .value
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(Check::new(lhs, rhs, tol))
}

/// The split of a balanced product: for positive integers with ac = bd,
/// a/gcd(a,d) = b/gcd(b,c) and c/gcd(b,c) = d/gcd(a,d).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GcdSplit {
    /// a′ = a/gcd(a,d) = b/gcd(b,c).
    pub left: u64,
    /// c′ = c/gcd(b,c) = d/gcd(a,d).
    pub right: u64,
    /// gcd(a, d).
    pub g: u64,
    /// gcd(b, c).
    pub h: u64,
}

pub fn gcd_split(a: u64, c: u64, b: u64, d: u64) -> Result<GcdSplit> {
    if a == 0 || b == 0 || c == 0 || d == 0 {
        return Err(Error::InvalidParameter(
            "gcd_split needs positive entries".into(),
        ));
    }
    if u128::from(a) * u128::from(c) != u128::from(b) * u128::from(d) {
        return Err(Error::UnbalancedProducts { a, c, b, d });
    }
    let g = num_integer::gcd(a, d);
    let h = num_integer::gcd(b, c);
    if a / g != b / h || c / h != d / g {
        return Err(Error::LemmaViolation { a, c, b, d });
    }
    Ok(GcdSplit {
        left: a / g,
        right: c / h,
        g,
        h,
    })
}

/// Identity family exercised by a [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Char,
    Kms,
    Ground,
}

impl SweepKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "char" => Ok(SweepKind::Char),
            "kms" => Ok(SweepKind::Kms),
            "ground" => Ok(SweepKind::Ground),
            other => Err(Error::InvalidParameter(format!(
                "unknown sweep kind {other:?}; expected char, kms, or ground"
            ))),
        }
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepKind::Char => "char",
            SweepKind::Kms => "kms",
            SweepKind::Ground => "ground",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Failure {
    pub input: String,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub residual: f64,
}

/// Outcome of a seeded random batch; `failures` is nonempty exactly when
/// `max_residual > tolerance`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kind: String,
    pub state: String,
    pub beta: f64,
    pub seed: u64,
    pub tolerance: f64,
    pub checked: u64,
    pub max_residual: f64,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Cumulative weights τ(n)/n over 1..=max, favoring divisor-rich legs.
fn divisor_rich_cdf(max: u64) -> Vec<f64> {
    let mut cdf = Vec::with_capacity(max as usize);
    let mut total = 0.0;
    for n in 1..=max {
        let divisors = (1..=n).filter(|d| n % d == 0).count() as f64;
        total += divisors / n as f64;
        cdf.push(total);
    }
    cdf
}

fn sample_leg(rng: &mut ChaCha8Rng, cdf: &[f64]) -> u64 {
    let total = *cdf.last().expect("nonempty cdf");
    let draw = rng.random::<f64>() * total;
    match cdf.iter().position(|&c| draw < c) {
        Some(idx) => idx as u64 + 1,
        None => cdf.len() as u64,
    }
}

fn sample_monomial(rng: &mut ChaCha8Rng, cdf: &[f64], max_exponent: u64) -> Monomial {
    let a = sample_leg(rng, cdf);
    let b = sample_leg(rng, cdf);
    let m = rng.random_range(0..=max_exponent);
    let n = rng.random_range(0..=max_exponent);
    Monomial::new(a, m, n, b).expect("sampled legs are positive")
}

/// Run `count` seeded random instances of the chosen identity with legs up
/// to `bounds.max_leg` and exponents up to `bounds.max_exponent`.
/// Deterministic given the seed.
pub fn sweep(
    kind: SweepKind,
    phi: &StateOracle,
    beta: f64,
    bounds: &SearchWindow,
    count: u64,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    if bounds.max_leg == 0 {
        return Err(Error::InvalidParameter(
            "sweep bounds need max_leg ≥ 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cdf = divisor_rich_cdf(bounds.max_leg);
    let mut max_residual = 0.0f64;
    let mut failures = Vec::new();
    for _ in 0..count {
        // Uniform draws rarely land in the diagonal sector where the
        // identities have content, so force b = a on a third of single
        // draws and pair x with its adjoint on a quarter of kms draws.
        let mut x = sample_monomial(&mut rng, &cdf, bounds.max_exponent);
        if kind != SweepKind::Kms && rng.random_ratio(1, 3) {
            x = Monomial::new(
                x.a().clone(),
                x.m().clone(),
                x.n().clone(),
                x.a().clone(),
            )
            .expect("legs are positive");
        }
        let (input, check) = match kind {
            SweepKind::Char => (format!("x={x}"), check_char(phi, beta, &x, tol)?),
            SweepKind::Ground => (format!("x={x}"), check_ground(phi, &x, tol)?),
            SweepKind::Kms => {
                let y = if rng.random_ratio(1, 4) {
                    x.adjoint()
                } else {
                    sample_monomial(&mut rng, &cdf, bounds.max_exponent)
                };
                (
                    format!("x={x}, y={y}"),
                    check_kms_identity(phi, beta, &x, &y, tol)?,
                )
            }
        };
        max_residual = max_residual.max(check.residual);
        if !check.pass {
            failures.push(Failure {
                input,
                lhs_re: check.lhs.re,
                lhs_im: check.lhs.im,
                rhs_re: check.rhs.re,
                rhs_im: check.rhs.im,
                residual: check.residual,
            });
        }
    }
    let report = VerificationReport {
        kind: kind.to_string(),
        state: phi.label().to_string(),
        beta,
        seed,
        tolerance: tol,
        checked: count,
        max_residual,
        failures,
    };
    debug_assert_eq!(report.max_residual > report.tolerance, !report.passed());
    Ok(report)
}

/// Deliberately wrong oracle for harness validation: the KMS state with the
/// a^{−β} factor dropped (values scaled by a^{β} on the diagonal). Must fail
/// [`check_kms_identity`] sweeps.
pub fn broken_scaling_oracle(params: &KmsParams, mu: &Measure) -> Result<StateOracle> {
    let inner = kms_state(params, mu)?;
    let beta = params.beta;
    let label = format!("broken({})", inner.label());
    Ok(StateOracle::new(label, move |x: &Monomial| {
        let v = inner.evaluate(x)?;
        let scale = pow_neg_beta(x.a().to_f64().unwrap_or(f64::INFINITY), -beta);
        Ok(crate::state::StateValue {
            value: scale * v.value,
            error_bound: scale * v.error_bound,
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::StarMonomial;
    use crate::state::{ground_state, ToeplitzStateSpec};

    fn mono(a: u64, m: u64, n: u64, b: u64) -> Monomial {
        Monomial::new(a, m, n, b).unwrap()
    }

    fn window(max_leg: u64, max_exponent: u64) -> SearchWindow {
        SearchWindow {
            max_leg,
            max_exponent,
        }
    }

    #[test]
    fn char_examples() {
        let phi = kms_state(&KmsParams::new(2.0), &Measure::delta_one()).unwrap();
        let check = check_char(&phi, 2.0, &mono(3, 5, 1, 3), 1e-9).unwrap();
        assert!(check.pass, "{check:?}");
        assert!((check.lhs.re - 1.0 / 9.0).abs() < 1e-12);

        let off = check_char(&phi, 2.0, &mono(2, 0, 0, 3), 1e-9).unwrap();
        assert_eq!(off.residual, 0.0);

        // Ground states are not KMS₂: the characterization fails at a ≥ 2.
        let spec = ToeplitzStateSpec::from_measure(&Measure::delta_one());
        let omega = ground_state(spec);
        let fail = check_char(&omega, 2.0, &mono(2, 1, 0, 2), 1e-9).unwrap();
        assert!(!fail.pass);
        assert!((fail.residual - 0.25).abs() < 1e-12, "{fail:?}");
    }

    #[test]
    fn kms_identity_examples() {
        let phi = kms_state(&KmsParams::new(2.0), &Measure::delta_one()).unwrap();
        let check = check_kms_identity(&phi, 2.0, &mono(2, 1, 0, 2), &mono(3, 0, 1, 3), 1e-8).unwrap();
        assert!(check.pass, "{check:?}");

        // x = identity: scaling factor 1 and xy = yx = y.
        for y in [mono(3, 2, 1, 5), mono(1, 0, 4, 7)] {
            let check =
                check_kms_identity(&phi, 2.0, &Monomial::identity(), &y, 1e-12).unwrap();
            assert_eq!(check.residual, 0.0);
        }
    }

    #[test]
    fn broken_oracle_fails_kms_identity() {
        // V₂ and V₂*: φ(V₂V₂*) = 1/4 while φ(V₂*V₂) = 1, so dropping the
        // a^{−β} factor leaves residual |1 − (1/4)·1| = 3/4.
        let params = KmsParams::new(2.0);
        let x = mono(2, 0, 0, 1);
        let y = mono(1, 0, 0, 2);
        let honest = kms_state(&params, &Measure::delta_one()).unwrap();
        let check = check_kms_identity(&honest, 2.0, &x, &y, 1e-10).unwrap();
        assert_eq!(check.residual, 0.0, "{check:?}");

        let broken = broken_scaling_oracle(&params, &Measure::delta_one()).unwrap();
        let check = check_kms_identity(&broken, 2.0, &x, &y, 1e-10).unwrap();
        assert!((check.residual - 0.75).abs() < 1e-12, "{check:?}");
    }

    #[test]
    fn ground_examples() {
        let omega = ground_state(ToeplitzStateSpec::from_measure(&Measure::delta_one()));
        assert_eq!(
            check_ground(&omega, &mono(2, 1, 0, 3), 1e-12).unwrap().residual,
            0.0
        );
        assert_eq!(
            check_ground(&omega, &mono(1, 4, 2, 1), 1e-12).unwrap().residual,
            0.0
        );

        let psi = kms_state(&KmsParams::new(2.0), &Measure::delta_one()).unwrap();
        let fail = check_ground(&psi, &mono(2, 0, 0, 2), 1e-9).unwrap();
        assert!((fail.residual - 0.25).abs() < 1e-12, "{fail:?}");
    }

    #[test]
    fn gcd_split_examples() {
        let split = gcd_split(6, 10, 4, 15).unwrap();
        assert_eq!((split.left, split.right, split.g, split.h), (2, 5, 3, 2));
        assert_eq!(
            gcd_split(1, 1, 1, 1).unwrap(),
            GcdSplit {
                left: 1,
                right: 1,
                g: 1,
                h: 1
            }
        );
        let split = gcd_split(2, 3, 3, 2).unwrap();
        assert_eq!((split.left, split.right), (1, 1));

        let err = gcd_split(2, 3, 4, 5).unwrap_err();
        assert!(err.to_string().starts_with("precondition ac≠bd"), "{err}");
        assert!(gcd_split(0, 1, 0, 1).is_err());
    }

    #[test]
    fn gcd_split_exhaustive_small() {
        for a in 1u64..=24 {
            for c in 1u64..=24 {
                let product = a * c;
                for b in (1..=24).filter(|b| product % b == 0) {
                    let d = product / b;
                    if d > 24 {
                        continue;
                    }
                    let split = gcd_split(a, c, b, d).unwrap();
                    assert_eq!(split.left * split.g, a);
                    assert_eq!(split.left * split.h, b);
                    assert_eq!(split.right * split.h, c);
                    assert_eq!(split.right * split.g, d);
                }
            }
        }
    }

    #[test]
    fn sweeps_pass_for_kms_states() {
        let bounds = window(30, 20);
        for (beta, mu) in [
            (2.0, Measure::delta_minus_one()),
            (1.5, Measure::Lebesgue),
            (3.0, Measure::delta_one()),
        ] {
            let phi = kms_state(&KmsParams::new(beta), &mu).unwrap();
            for kind in [SweepKind::Char, SweepKind::Kms] {
                let report = sweep(kind, &phi, beta, &bounds, 200, 7, 1e-8).unwrap();
                assert!(report.passed(), "{kind} {}: {report:?}", mu.label());
                assert_eq!(report.checked, 200);
                assert!(report.max_residual <= 1e-8);
            }
        }
    }

    #[test]
    fn sweeps_are_deterministic() {
        let phi = kms_state(&KmsParams::new(2.0), &Measure::delta_minus_one()).unwrap();
        let bounds = window(12, 8);
        let a = sweep(SweepKind::Kms, &phi, 2.0, &bounds, 64, 11, 1e-8).unwrap();
        let b = sweep(SweepKind::Kms, &phi, 2.0, &bounds, 64, 11, 1e-8).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let c = sweep(SweepKind::Kms, &phi, 2.0, &bounds, 64, 12, 1e-8).unwrap();
        assert_ne!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&c).unwrap()
        );
    }

    #[test]
    fn negative_controls_fail() {
        let bounds = window(12, 8);
        // A KMS state is not a ground state.
        let psi = kms_state(&KmsParams::new(2.0), &Measure::delta_one()).unwrap();
        let report = sweep(SweepKind::Ground, &psi, 2.0, &bounds, 100, 3, 1e-8).unwrap();
        assert!(!report.passed());
        assert!(report.max_residual > 1e-3);

        // The scaling-broken oracle fails the trace identity.
        let broken = broken_scaling_oracle(&KmsParams::new(2.0), &Measure::delta_one()).unwrap();
        let report = sweep(SweepKind::Kms, &broken, 2.0, &bounds, 100, 3, 1e-8).unwrap();
        assert!(!report.passed());

        // And a ground state passes its own characterization.
        let omega = ground_state(ToeplitzStateSpec::from_measure(&Measure::delta_one()));
        let report = sweep(SweepKind::Ground, &omega, 2.0, &bounds, 100, 3, 1e-8).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn kms_identity_symmetric_passing() {
        let phi = kms_state(&KmsParams::new(2.0), &Measure::delta_minus_one()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cdf = divisor_rich_cdf(16);
        for _ in 0..50 {
            let x = sample_monomial(&mut rng, &cdf, 10);
            let y = sample_monomial(&mut rng, &cdf, 10);
            let xy = check_kms_identity(&phi, 2.0, &x, &y, 1e-9).unwrap();
            let yx = check_kms_identity(&phi, 2.0, &y, &x, 1e-9).unwrap();
            assert_eq!(xy.pass, yx.pass, "x={x} y={y}");
        }
    }
}
