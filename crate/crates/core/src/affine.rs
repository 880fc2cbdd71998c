//! The affine group ℚ₊^× ⋉ ℚ and its quasi-lattice ordered cone ℕ^× ⋉ ℕ.
//!
//! Elements are pairs (a, r) with a a positive rational and r rational,
//! multiplied by (a, r)(b, s) = (ab, br + s). The submonoid with a ∈ ℕ^× and
//! r ∈ ℕ is a cone: with the left-invariant order x ≤ y ⟺ x⁻¹y ∈ cone, every
//! group element admits a least cone element above it, and any two cone
//! elements have a least common upper bound (a join). Those two maps,
//! [`AffinePoint::least_upper_bound`] and [`ConePoint::join`], drive the
//! Nica covariance relations of the Toeplitz algebra.
//!
//! [`brute_lub`] and [`brute_join`] recompute both maps by bounded grid
//! search straight from the definition of the order, as independent oracles.

use crate::wire::RatWire;
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Group element (a, r) ∈ ℚ₊^× ⋉ ℚ, a > 0. Serializes as
/// `{"a": {"num": …, "den": …}, "r": {"num": …, "den": …}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AffineWire", into = "AffineWire")]
pub struct AffinePoint {
    a: BigRational,
    r: BigRational,
}

#[derive(Serialize, Deserialize)]
struct AffineWire {
    a: RatWire,
    r: RatWire,
}

impl From<AffinePoint> for AffineWire {
    fn from(point: AffinePoint) -> Self {
        AffineWire {
            a: RatWire::from(&point.a),
            r: RatWire::from(&point.r),
        }
    }
}

impl TryFrom<AffineWire> for AffinePoint {
    type Error = Error;

    fn try_from(wire: AffineWire) -> Result<Self> {
        AffinePoint::new(wire.a.try_into()?, wire.r.try_into()?)
    }
}

impl fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.r)
    }
}

impl AffinePoint {
    pub fn new(a: BigRational, r: BigRational) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "multiplicative part must be positive, got {a}"
            )));
        }
        Ok(AffinePoint { a, r })
    }

    pub fn identity() -> Self {
        AffinePoint {
            a: BigRational::one(),
            r: BigRational::zero(),
        }
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn r(&self) -> &BigRational {
        &self.r
    }

    /// (a, r)(b, s) = (ab, br + s).
    pub fn mul(&self, other: &Self) -> Self {
        AffinePoint {
            a: &self.a * &other.a,
            r: &self.r * &other.a + &other.r,
        }
    }

    /// (a, r)⁻¹ = (a⁻¹, −a⁻¹r).
    pub fn inverse(&self) -> Self {
        let a_inv = self.a.recip();
        AffinePoint {
            r: -(&self.r * &a_inv),
            a: a_inv,
        }
    }

    pub fn is_in_cone(&self) -> bool {
        self.a.is_integer() && self.r.is_integer() && !self.r.is_negative()
    }

    /// Left-invariant order: x ≤ y ⟺ x⁻¹y ∈ ℕ^× ⋉ ℕ. Concretely, y.a/x.a
    /// must be a positive integer q and y.r − q·x.r a nonnegative integer.
    pub fn leq(&self, other: &Self) -> bool {
        let q = &other.a / &self.a;
        if !q.is_integer() {
            return false;
        }
        let t = &other.r - q * &self.r;
        t.is_integer() && !t.is_negative()
    }

    /// Least cone element above x. With c the smallest positive integer for
    /// which c·a ∈ ℕ^× and c·r ∈ ℤ (the lcm of the two denominators),
    /// σ(x) = (c·a, max(0, c·r)); minimality is exercised against
    /// [`brute_lub`] in the tests.
    pub fn least_upper_bound(&self) -> ConePoint {
        let c = BigRational::from_integer(self.a.denom().lcm(self.r.denom()));
        let leg = (&self.a * &c)
            .to_integer()
            .to_biguint()
            .expect("c·a > 0 by construction");
        // to_biguint is None exactly for negative k, which clamps to 0.
        let m = (&self.r * &c).to_integer().to_biguint().unwrap_or_default();
        let lub = ConePoint { a: leg, m };
        debug_assert!(self.leq(&lub.to_affine()));
        lub
    }
}

/// Cone element (a, m) ∈ ℕ^× ⋉ ℕ, a ≥ 1. Serializes as `{"a": …, "m": …}`
/// with bare integer fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ConeWire", into = "ConeWire")]
pub struct ConePoint {
    a: BigUint,
    m: BigUint,
}

#[derive(Serialize, Deserialize)]
struct ConeWire {
    #[serde(with = "crate::wire::nat")]
    a: BigUint,
    #[serde(with = "crate::wire::nat")]
    m: BigUint,
}

impl From<ConePoint> for ConeWire {
    fn from(point: ConePoint) -> Self {
        ConeWire {
            a: point.a,
            m: point.m,
        }
    }
}

impl TryFrom<ConeWire> for ConePoint {
    type Error = Error;

    fn try_from(wire: ConeWire) -> Result<Self> {
        ConePoint::new(wire.a, wire.m)
    }
}

impl fmt::Display for ConePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.m)
    }
}

impl ConePoint {
    pub fn new(a: impl Into<BigUint>, m: impl Into<BigUint>) -> Result<Self> {
        let a = a.into();
        if a.is_zero() {
            return Err(Error::InvalidParameter(
                "multiplicative part must be at least 1".into(),
            ));
        }
        Ok(ConePoint { a, m: m.into() })
    }

    pub fn identity() -> Self {
        ConePoint {
            a: BigUint::one(),
            m: BigUint::zero(),
        }
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    /// (a, m)(b, n) = (ab, bm + n).
    pub fn mul(&self, other: &Self) -> Self {
        ConePoint {
            a: &self.a * &other.a,
            m: &other.a * &self.m + &other.m,
        }
    }

    /// Restriction of the group order: (a, m) ≤ (e, n) ⟺ a | e and
    /// n ≥ (e/a)·m.
    pub fn leq(&self, other: &Self) -> bool {
        if !(&other.a % &self.a).is_zero() {
            return false;
        }
        other.m >= (&other.a / &self.a) * &self.m
    }

    /// Least common upper bound: writing a = ga′, b = gb′ with g = gcd(a, b),
    /// (a, m) ∨ (b, n) = (lcm(a, b), max(b′m, a′n)).
    pub fn join(&self, other: &Self) -> ConePoint {
        let g = self.a.gcd(&other.a);
        let a_hat = &self.a / &g;
        let b_hat = &other.a / &g;
        let m = (&b_hat * &self.m).max(&a_hat * &other.m);
        let join = ConePoint {
            a: &self.a * &b_hat,
            m,
        };
        debug_assert!(self.leq(&join) && other.leq(&join));
        join
    }

    pub fn to_affine(&self) -> AffinePoint {
        AffinePoint {
            a: BigRational::from_integer(self.a.clone().into()),
            r: BigRational::from_integer(self.m.clone().into()),
        }
    }
}

/// Search window for the brute-force order oracles: multiplicative legs run
/// over 1..=max_leg, additive exponents over 0..=max_exponent.
#[derive(Debug, Clone, Copy)]
pub struct SearchWindow {
    pub max_leg: u64,
    pub max_exponent: u64,
}

/// Grid-search counterpart of [`AffinePoint::least_upper_bound`].
///
/// Scans every cone point in the window for membership above `x` using only
/// [`AffinePoint::leq`], cross-checks the scan against per-leg minimal
/// exponents derived from divisibility, and returns the candidate that lies
/// below all others. `Ok(None)` means no cone point in the window dominates
/// `x`; `Err(BoundsTooSmall)` means candidates exist but minimality cannot
/// be certified inside the window.
pub fn brute_lub(x: &AffinePoint, window: SearchWindow) -> Result<Option<ConePoint>> {
    // (e, n) ≥ x for some n iff f = e/x.a is a positive integer and f·x.r an
    // integer; the admissible exponents are then exactly n ≥ max(0, f·x.r).
    let mut floors: Vec<(u64, BigUint)> = Vec::new();
    for e in 1..=window.max_leg {
        let f = BigRational::from_integer(BigInt::from(e)) / &x.a;
        if !f.is_integer() {
            continue;
        }
        let t = f * &x.r;
        if !t.is_integer() {
            continue;
        }
        floors.push((e, t.to_integer().to_biguint().unwrap_or_default()));
    }
    if floors.is_empty() {
        return Ok(None);
    }

    let fast = FastAffineLeq::new(x);
    let mut scanned: Vec<(u64, u64)> = Vec::new();
    for e in 1..=window.max_leg {
        // The order is monotone in the exponent, so the top row decides
        // whether this leg carries any candidate at all.
        if !fast.leq_cone(e, window.max_exponent) {
            continue;
        }
        for n in 0..=window.max_exponent {
            if fast.leq_cone(e, n) {
                scanned.push((e, n));
                break;
            }
        }
    }
    assert_eq!(
        scanned,
        visible_floors(&floors, window),
        "grid scan and divisibility floors disagree for {x}"
    );

    select_least(&floors, window)
}

/// Grid-search counterpart of [`ConePoint::join`], with the same window and
/// certification semantics as [`brute_lub`].
pub fn brute_join(x: &ConePoint, y: &ConePoint, window: SearchWindow) -> Result<Option<ConePoint>> {
    let mut floors: Vec<(u64, BigUint)> = Vec::new();
    for e in 1..=window.max_leg {
        let eb = BigUint::from(e);
        if !(&eb % &x.a).is_zero() || !(&eb % &y.a).is_zero() {
            continue;
        }
        let from_x = (&eb / &x.a) * &x.m;
        let from_y = (&eb / &y.a) * &y.m;
        floors.push((e, from_x.max(from_y)));
    }
    if floors.is_empty() {
        return Ok(None);
    }

    let fast_x = FastConeLeq::new(x);
    let fast_y = FastConeLeq::new(y);
    let mut scanned: Vec<(u64, u64)> = Vec::new();
    for e in 1..=window.max_leg {
        if !(fast_x.leq(e, window.max_exponent) && fast_y.leq(e, window.max_exponent)) {
            continue;
        }
        for n in 0..=window.max_exponent {
            if fast_x.leq(e, n) && fast_y.leq(e, n) {
                scanned.push((e, n));
                break;
            }
        }
    }
    assert_eq!(
        scanned,
        visible_floors(&floors, window),
        "grid scan and divisibility floors disagree for {x} ∨ {y}"
    );

    select_least(&floors, window)
}

fn visible_floors(floors: &[(u64, BigUint)], window: SearchWindow) -> Vec<(u64, u64)> {
    floors
        .iter()
        .filter(|(_, t)| *t <= BigUint::from(window.max_exponent))
        .map(|(e, t)| (*e, t.to_u64().expect("bounded by the window")))
        .collect()
}

/// Picks the floor pair lying below every other floor pair, the unique
/// candidate for a least upper bound.
fn select_least(floors: &[(u64, BigUint)], window: SearchWindow) -> Result<Option<ConePoint>> {
    for (e, t) in floors {
        let least = floors
            .iter()
            .all(|(e2, t2)| e2 % e == 0 && *t2 >= BigUint::from(e2 / e) * t);
        if !least {
            continue;
        }
        if *t > BigUint::from(window.max_exponent) {
            return Err(Error::BoundsTooSmall(format!(
                "least candidate ({e}, {t}) lies beyond max_exponent {}",
                window.max_exponent
            )));
        }
        return Ok(Some(ConePoint {
            a: BigUint::from(*e),
            m: t.clone(),
        }));
    }
    Err(Error::BoundsTooSmall(format!(
        "no candidate with leg ≤ {} lies below every other candidate",
        window.max_leg
    )))
}

/// i128 fast path for `x ≤ (e, n)` inside grid scans, falling back to exact
/// arithmetic when components or intermediates do not fit.
struct FastAffineLeq<'a> {
    x: &'a AffinePoint,
    small: Option<(i128, i128, i128, i128)>,
}

impl<'a> FastAffineLeq<'a> {
    fn new(x: &'a AffinePoint) -> Self {
        let small = (|| {
            Some((
                x.a.numer().to_i128()?,
                x.a.denom().to_i128()?,
                x.r.numer().to_i128()?,
                x.r.denom().to_i128()?,
            ))
        })();
        FastAffineLeq { x, small }
    }

    fn leq_cone(&self, e: u64, n: u64) -> bool {
        if let Some((p, q, u, v)) = self.small {
            if let Some(eq) = (e as i128).checked_mul(q) {
                if eq % p != 0 {
                    return false;
                }
                if let Some(fu) = (eq / p).checked_mul(u) {
                    if fu % v != 0 {
                        return false;
                    }
                    return n as i128 >= fu / v;
                }
            }
        }
        let y = AffinePoint {
            a: BigRational::from_integer(BigInt::from(e)),
            r: BigRational::from_integer(BigInt::from(n)),
        };
        self.x.leq(&y)
    }
}

struct FastConeLeq<'a> {
    point: &'a ConePoint,
    small: Option<(u64, u64)>,
}

impl<'a> FastConeLeq<'a> {
    fn new(point: &'a ConePoint) -> Self {
        let small = point.a.to_u64().zip(point.m.to_u64());
        FastConeLeq { point, small }
    }

    fn leq(&self, e: u64, n: u64) -> bool {
        if let Some((a, m)) = self.small {
            if !e.is_multiple_of(a) {
                return false;
            }
            return n as u128 >= (e / a) as u128 * m as u128;
        }
        let other = ConePoint {
            a: e.into(),
            m: n.into(),
        };
        self.point.leq(&other)
    }
}

/// Canonicalizes a prime set: sorted, deduplicated, every entry verified
/// prime, nonempty.
pub fn canonical_prime_set(primes: &[u64]) -> Result<Vec<u64>> {
    if primes.is_empty() {
        return Err(Error::InvalidParameter(
            "prime set must be nonempty".into(),
        ));
    }
    let mut set: Vec<u64> = primes.to_vec();
    set.sort_unstable();
    set.dedup();
    for &p in &set {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
    }
    Ok(set)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// All E-smooth positive integers ≤ limit, ascending. `primes` must be a
/// nonempty set of primes.
pub fn enumerate_smooth(primes: &[u64], limit: &BigUint) -> Result<Vec<BigUint>> {
    let set = canonical_prime_set(primes)?;
    if limit.is_zero() {
        return Ok(Vec::new());
    }
    let mut out = vec![BigUint::one()];
    let mut stack: Vec<(BigUint, usize)> = vec![(BigUint::one(), 0)];
    while let Some((value, start)) = stack.pop() {
        for (i, &p) in set.iter().enumerate().skip(start) {
            let next = &value * p;
            if next <= *limit {
                out.push(next.clone());
                stack.push((next, i));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// True when every prime factor of `value` lies in `primes`. Zero is not
/// smooth for any prime set.
pub fn is_smooth(value: &BigUint, primes: &[u64]) -> bool {
    if value.is_zero() {
        return false;
    }
    let mut rest = value.clone();
    for &p in primes {
        let p = BigUint::from(p);
        while (&rest % &p).is_zero() {
            rest /= &p;
        }
    }
    rest.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn affine(a: (i64, i64), r: (i64, i64)) -> AffinePoint {
        AffinePoint::new(rat(a.0, a.1), rat(r.0, r.1)).unwrap()
    }

    fn cone(a: u64, m: u64) -> ConePoint {
        ConePoint::new(a, m).unwrap()
    }

    #[test]
    fn group_law_examples() {
        let x = affine((3, 2), (1, 2));
        let y = affine((2, 3), (5, 1));
        assert_eq!(x.mul(&y), affine((1, 1), (16, 3)));
        let z = affine((2, 1), (3, 1));
        assert_eq!(z.inverse(), affine((1, 2), (-3, 2)));
        assert_eq!(z.mul(&z.inverse()), AffinePoint::identity());
    }

    #[test]
    fn cone_product() {
        assert_eq!(cone(2, 1).mul(&cone(3, 4)), cone(6, 7));
        assert_eq!(cone(5, 2).mul(&ConePoint::identity()), cone(5, 2));
    }

    #[test]
    fn order_examples() {
        assert!(affine((2, 1), (1, 1)).leq(&affine((6, 1), (5, 1))));
        assert!(!affine((2, 1), (1, 1)).leq(&affine((6, 1), (2, 1))));
        assert!(affine((3, 2), (1, 2)).leq(&affine((3, 1), (1, 1))));
        assert!(!affine((2, 1), (0, 1)).leq(&affine((3, 1), (0, 1))));
        assert!(cone(2, 1).leq(&cone(6, 5)));
        assert!(!cone(4, 0).leq(&cone(6, 0)));
    }

    #[test]
    fn least_upper_bound_examples() {
        assert_eq!(affine((3, 2), (1, 2)).least_upper_bound(), cone(3, 1));
        assert_eq!(affine((3, 2), (-5, 4)).least_upper_bound(), cone(6, 0));
        assert_eq!(affine((3, 1), (2, 1)).least_upper_bound(), cone(3, 2));
    }

    #[test]
    fn join_example() {
        assert_eq!(cone(4, 3).join(&cone(6, 2)), cone(12, 9));
    }

    #[test]
    fn brute_lub_certifies_or_reports_window() {
        let window = SearchWindow {
            max_leg: 12,
            max_exponent: 12,
        };
        assert_eq!(
            brute_lub(&affine((3, 2), (-5, 4)), window).unwrap(),
            Some(cone(6, 0))
        );
        // No admissible leg at all inside the window.
        assert_eq!(
            brute_lub(
                &affine((17, 1), (0, 1)),
                SearchWindow {
                    max_leg: 16,
                    max_exponent: 4
                }
            )
            .unwrap(),
            None
        );
        // The least candidate exists but its exponent escapes the window.
        let err = brute_lub(
            &affine((1, 1), (50, 1)),
            SearchWindow {
                max_leg: 3,
                max_exponent: 10,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::BoundsTooSmall(_)), "got {err}");
    }

    #[test]
    fn smooth_enumeration() {
        let smooth = enumerate_smooth(&[2, 3], &BigUint::from(20u32)).unwrap();
        let expect: Vec<BigUint> = [1u32, 2, 3, 4, 6, 8, 9, 12, 16, 18]
            .into_iter()
            .map(BigUint::from)
            .collect();
        assert_eq!(smooth, expect);
        assert_eq!(
            enumerate_smooth(&[2], &BigUint::from(1u32)).unwrap(),
            vec![BigUint::one()]
        );
        assert!(enumerate_smooth(&[2], &BigUint::zero()).unwrap().is_empty());
        assert!(enumerate_smooth(&[], &BigUint::one()).is_err());
        assert!(enumerate_smooth(&[4], &BigUint::one()).is_err());

        for value in &smooth {
            assert!(is_smooth(value, &[2, 3]));
        }
        assert!(is_smooth(&BigUint::one(), &[2]));
        assert!(!is_smooth(&BigUint::from(20u32), &[2, 3]));
        assert!(!is_smooth(&BigUint::zero(), &[2]));
    }

    #[test]
    fn prime_set_canonicalization() {
        assert_eq!(canonical_prime_set(&[3, 2, 3]).unwrap(), vec![2, 3]);
        assert!(canonical_prime_set(&[1]).is_err());
        assert!(canonical_prime_set(&[91]).is_err());
        assert!(canonical_prime_set(&[97]).is_ok());
    }

    #[test]
    fn json_shapes() {
        let x = affine((3, 2), (-5, 4));
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(
            text,
            r#"{"a":{"num":3,"den":2},"r":{"num":-5,"den":4}}"#
        );
        assert_eq!(serde_json::from_str::<AffinePoint>(&text).unwrap(), x);
        assert!(serde_json::from_str::<AffinePoint>(
            r#"{"a":{"num":-3,"den":2},"r":{"num":0,"den":1}}"#
        )
        .is_err());

        let c = cone(6, 0);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"a":6,"m":0}"#);
        assert_eq!(serde_json::from_str::<ConePoint>(&text).unwrap(), c);
        assert!(serde_json::from_str::<ConePoint>(r#"{"a":0,"m":1}"#).is_err());
    }

    fn arb_pos_rat() -> impl Strategy<Value = BigRational> {
        (1i64..=12, 1i64..=12).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_rat() -> impl Strategy<Value = BigRational> {
        (-12i64..=12, 1i64..=12).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_affine() -> impl Strategy<Value = AffinePoint> {
        (arb_pos_rat(), arb_rat()).prop_map(|(a, r)| AffinePoint::new(a, r).unwrap())
    }

    fn arb_cone() -> impl Strategy<Value = ConePoint> {
        (1u64..=12, 0u64..=12).prop_map(|(a, m)| cone(a, m))
    }

    proptest! {
        #[test]
        fn group_laws(x in arb_affine(), y in arb_affine(), z in arb_affine()) {
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&AffinePoint::identity()), x.clone());
            prop_assert_eq!(AffinePoint::identity().mul(&x), x.clone());
            prop_assert_eq!(x.mul(&x.inverse()), AffinePoint::identity());
            prop_assert_eq!(x.inverse().mul(&x), AffinePoint::identity());
        }

        #[test]
        fn leq_is_cone_membership_of_quotient(x in arb_affine(), y in arb_affine()) {
            prop_assert_eq!(x.leq(&y), x.inverse().mul(&y).is_in_cone());
        }

        #[test]
        fn leq_is_left_invariant(g in arb_affine(), x in arb_affine(), y in arb_affine()) {
            prop_assert_eq!(x.leq(&y), g.mul(&x).leq(&g.mul(&y)));
        }

        #[test]
        fn cone_mul_embeds_in_group(x in arb_cone(), y in arb_cone()) {
            prop_assert_eq!(x.mul(&y).to_affine(), x.to_affine().mul(&y.to_affine()));
            prop_assert_eq!(x.leq(&y), x.to_affine().leq(&y.to_affine()));
        }

        #[test]
        fn lub_matches_brute_search(x in arb_affine()) {
            let lub = x.least_upper_bound();
            prop_assert!(x.leq(&lub.to_affine()));
            let window = SearchWindow { max_leg: 288, max_exponent: 300 };
            prop_assert_eq!(brute_lub(&x, window).unwrap(), Some(lub));
        }

        #[test]
        fn lub_fixes_cone_points(c in arb_cone()) {
            prop_assert_eq!(c.to_affine().least_upper_bound(), c);
        }

        #[test]
        fn join_matches_brute_search(x in arb_cone(), y in arb_cone()) {
            let join = x.join(&y);
            let window = SearchWindow { max_leg: 288, max_exponent: 300 };
            prop_assert_eq!(brute_join(&x, &y, window).unwrap(), Some(join));
        }

        #[test]
        fn join_laws(x in arb_cone(), y in arb_cone(), z in arb_cone()) {
            prop_assert_eq!(x.join(&y), y.join(&x));
            prop_assert_eq!(x.join(&x), x.clone());
            prop_assert_eq!(x.join(&y).join(&z), x.join(&y.join(&z)));
            prop_assert!(x.leq(&x.join(&y)));
        }

        #[test]
        fn serde_round_trip(x in arb_affine(), c in arb_cone()) {
            let x2: AffinePoint =
                serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
            prop_assert_eq!(x, x2);
            let c2: ConePoint =
                serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
            prop_assert_eq!(c, c2);
        }
    }
}
