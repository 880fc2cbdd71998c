//! Normal-form monomials of the Toeplitz algebra and its three boundary
//! quotients, with exact products, adjoints, and the quotient maps.
//!
//! Every word in the generators of 𝒯(ℕ^× ⋉ ℕ) collapses to a monomial
//! V_a S^m S^{*n} V_b^*, encoded as [`Monomial`]. Passing to a boundary
//! quotient collapses further:
//!
//! - additive (SS* = 1): V_a S^k V_b^* with k ∈ ℤ, encoded as [`AddMonomial`];
//! - multiplicative (V_aV_a* = 1): W_r W_s^* U_g with r, s ∈ ℚ_{≥0} and
//!   g ∈ ℚ₊^×, encoded as [`MultMonomial`], where W_{k/c} = V_c S^k V_c^* are
//!   fractional additive isometries and U_g the unitaries generated by the
//!   (now unitary) V family, normalized so U_g W_t U_g^{-1} = W_{gt};
//! - full (both): unitaries Y_t U_g with t ∈ ℚ, the group ℚ ⋊ ℚ₊^×, encoded
//!   as [`ClMonomial`].
//!
//! Each product rule is the unique normal form of the corresponding operator
//! product; the tests pin them against each other through the quotient maps
//! and against truncated Hilbert-space models in [`crate::rep`].

use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Common interface of the four monomial presentations: a *-semigroup with
/// identity. `PRESENTATION` tags errors and CLI output.
pub trait StarMonomial: Clone + Eq + Ord + fmt::Debug + fmt::Display {
    const PRESENTATION: &'static str;
    fn identity() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn adjoint(&self) -> Self;
}

/// V_a S^m S^{*n} V_b^* with a, b ∈ ℕ^× and m, n ∈ ℕ. Serializes as
/// `{"a": …, "m": …, "n": …, "b": …}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MonomialWire", into = "MonomialWire")]
pub struct Monomial {
    a: BigUint,
    m: BigUint,
    n: BigUint,
    b: BigUint,
}

#[derive(Serialize, Deserialize)]
struct MonomialWire {
    #[serde(with = "crate::wire::nat")]
    a: BigUint,
    #[serde(with = "crate::wire::nat")]
    m: BigUint,
    #[serde(with = "crate::wire::nat")]
    n: BigUint,
    #[serde(with = "crate::wire::nat")]
    b: BigUint,
}

impl From<Monomial> for MonomialWire {
    fn from(x: Monomial) -> Self {
        MonomialWire {
            a: x.a,
            m: x.m,
            n: x.n,
            b: x.b,
        }
    }
}

impl TryFrom<MonomialWire> for Monomial {
    type Error = Error;

    fn try_from(wire: MonomialWire) -> Result<Self> {
        Monomial::new(wire.a, wire.m, wire.n, wire.b)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.m, self.n, self.b)
    }
}

impl Monomial {
    pub fn new(
        a: impl Into<BigUint>,
        m: impl Into<BigUint>,
        n: impl Into<BigUint>,
        b: impl Into<BigUint>,
    ) -> Result<Self> {
        let (a, b) = (a.into(), b.into());
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidParameter(
                "monomial legs must be at least 1".into(),
            ));
        }
        Ok(Monomial {
            a,
            m: m.into(),
            n: n.into(),
            b,
        })
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    pub fn has_equal_legs(&self) -> bool {
        self.a == self.b
    }

    /// Signed exponent gap m − n.
    pub fn gap(&self) -> BigInt {
        BigInt::from(self.m.clone()) - BigInt::from(self.n.clone())
    }

    /// Components as machine integers, if they fit.
    pub fn as_u64_tuple(&self) -> Option<(u64, u64, u64, u64)> {
        Some((
            self.a.to_u64()?,
            self.m.to_u64()?,
            self.n.to_u64()?,
            self.b.to_u64()?,
        ))
    }
}

impl StarMonomial for Monomial {
    const PRESENTATION: &'static str = "full";

    fn identity() -> Self {
        Monomial {
            a: BigUint::one(),
            m: BigUint::zero(),
            n: BigUint::zero(),
            b: BigUint::one(),
        }
    }

    /// Product of normal forms. With g = gcd(b, c), b = g·b̂, c = g·ĉ, the
    /// inner factor V_b^* V_c equals V_ĉ V_b̂^*, and pulling it outward via
    /// S^{*n} V_ĉ = V_ĉ S^{*ĉn} and V_b̂^* S^p = S^{b̂p} V_b̂^* leaves the
    /// middle power S^{b̂p} S^{*ĉn}, which collapses by S*S = 1.
    fn mul(&self, other: &Self) -> Self {
        let g = self.b.gcd(&other.a);
        let b_hat = &self.b / &g;
        let c_hat = &other.a / &g;
        let u = &c_hat * &self.n;
        let v = &b_hat * &other.m;
        if v >= u {
            Monomial {
                a: &self.a * &c_hat,
                m: &c_hat * &self.m + (&v - &u),
                n: &b_hat * &other.n,
                b: &b_hat * &other.b,
            }
        } else {
            Monomial {
                a: &self.a * &c_hat,
                m: &c_hat * &self.m,
                n: (&u - &v) + &b_hat * &other.n,
                b: &b_hat * &other.b,
            }
        }
    }

    fn adjoint(&self) -> Self {
        Monomial {
            a: self.b.clone(),
            m: self.n.clone(),
            n: self.m.clone(),
            b: self.a.clone(),
        }
    }
}

/// α_a(x) = V_a x V_a^*, the transfer-operator endomorphism; on normal forms
/// it scales both legs, α_a(V_c S^m S^{*n} V_d^*) = V_{ac} S^m S^{*n} V_{ad}^*.
pub fn alpha_endo(a: &BigUint, x: &Monomial) -> Result<Monomial> {
    if a.is_zero() {
        return Err(Error::InvalidParameter(
            "endomorphism index must be at least 1".into(),
        ));
    }
    let left = Monomial::new(a.clone(), 0u32, 0u32, 1u32)?;
    let right = Monomial::new(1u32, 0u32, 0u32, a.clone())?;
    Ok(left.mul(x).mul(&right))
}

/// V_a S^k V_b^* with k ∈ ℤ, spanning the additive boundary quotient
/// (SS* = 1 makes S unitary there). Serializes as `{"a": …, "k": …, "b": …}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "AddWire", into = "AddWire")]
pub struct AddMonomial {
    a: BigUint,
    k: BigInt,
    b: BigUint,
}

#[derive(Serialize, Deserialize)]
struct AddWire {
    #[serde(with = "crate::wire::nat")]
    a: BigUint,
    #[serde(with = "crate::wire::int")]
    k: BigInt,
    #[serde(with = "crate::wire::nat")]
    b: BigUint,
}

impl From<AddMonomial> for AddWire {
    fn from(x: AddMonomial) -> Self {
        AddWire {
            a: x.a,
            k: x.k,
            b: x.b,
        }
    }
}

impl TryFrom<AddWire> for AddMonomial {
    type Error = Error;

    fn try_from(wire: AddWire) -> Result<Self> {
        AddMonomial::new(wire.a, wire.k, wire.b)
    }
}

impl fmt::Display for AddMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.k, self.b)
    }
}

impl AddMonomial {
    pub fn new(
        a: impl Into<BigUint>,
        k: impl Into<BigInt>,
        b: impl Into<BigUint>,
    ) -> Result<Self> {
        let (a, b) = (a.into(), b.into());
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidParameter(
                "monomial legs must be at least 1".into(),
            ));
        }
        Ok(AddMonomial { a, k: k.into(), b })
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn k(&self) -> &BigInt {
        &self.k
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    /// Collapse the remaining multiplicative relation: (a, k, b) ↦ (k/a, b/a).
    pub fn to_cl(&self) -> ClMonomial {
        let a = BigRational::from_integer(BigInt::from(self.a.clone()));
        ClMonomial {
            t: BigRational::from_integer(self.k.clone()) / &a,
            g: BigRational::from_integer(BigInt::from(self.b.clone())) / &a,
        }
    }
}

impl StarMonomial for AddMonomial {
    const PRESENTATION: &'static str = "add";

    fn identity() -> Self {
        AddMonomial {
            a: BigUint::one(),
            k: BigInt::zero(),
            b: BigUint::one(),
        }
    }

    /// Same leg bookkeeping as the full product; with S unitary the middle
    /// powers merge additively instead of splitting into (m, n).
    fn mul(&self, other: &Self) -> Self {
        let g = self.b.gcd(&other.a);
        let b_hat = &self.b / &g;
        let c_hat = &other.a / &g;
        AddMonomial {
            a: &self.a * &c_hat,
            k: BigInt::from(c_hat) * &self.k + BigInt::from(b_hat.clone()) * &other.k,
            b: &b_hat * &other.b,
        }
    }

    fn adjoint(&self) -> Self {
        AddMonomial {
            a: self.b.clone(),
            k: -self.k.clone(),
            b: self.a.clone(),
        }
    }
}

/// W_r W_s^* U_g with r, s ∈ ℚ_{≥0}, g ∈ ℚ₊^×, spanning the multiplicative
/// boundary quotient. Serializes as `{"r": …, "s": …, "g": …}` with rational
/// fields.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MultWire", into = "MultWire")]
pub struct MultMonomial {
    r: BigRational,
    s: BigRational,
    g: BigRational,
}

#[derive(Serialize, Deserialize)]
struct MultWire {
    #[serde(with = "crate::wire::rat")]
    r: BigRational,
    #[serde(with = "crate::wire::rat")]
    s: BigRational,
    #[serde(with = "crate::wire::rat")]
    g: BigRational,
}

impl From<MultMonomial> for MultWire {
    fn from(x: MultMonomial) -> Self {
        MultWire {
            r: x.r,
            s: x.s,
            g: x.g,
        }
    }
}

impl TryFrom<MultWire> for MultMonomial {
    type Error = Error;

    fn try_from(wire: MultWire) -> Result<Self> {
        MultMonomial::new(wire.r, wire.s, wire.g)
    }
}

impl fmt::Display for MultMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.s, self.g)
    }
}

impl MultMonomial {
    pub fn new(r: BigRational, s: BigRational, g: BigRational) -> Result<Self> {
        if r.is_negative() || s.is_negative() {
            return Err(Error::InvalidParameter(
                "isometry exponents must be nonnegative".into(),
            ));
        }
        if !g.is_positive() {
            return Err(Error::InvalidParameter(
                "scaling part must be positive".into(),
            ));
        }
        Ok(MultMonomial { r, s, g })
    }

    pub fn r(&self) -> &BigRational {
        &self.r
    }

    pub fn s(&self) -> &BigRational {
        &self.s
    }

    pub fn g(&self) -> &BigRational {
        &self.g
    }

    /// Collapse the remaining additive relation: (r, s, g) ↦ (r − s, g).
    pub fn to_cl(&self) -> ClMonomial {
        ClMonomial {
            t: &self.r - &self.s,
            g: self.g.clone(),
        }
    }
}

impl StarMonomial for MultMonomial {
    const PRESENTATION: &'static str = "mult";

    fn identity() -> Self {
        MultMonomial {
            r: BigRational::zero(),
            s: BigRational::zero(),
            g: BigRational::one(),
        }
    }

    /// Push U_{g₁} through (W_{r₂}, W_{s₂}) by scaling, then resolve the
    /// middle factor with W_s^* W_ρ = W_{(ρ−s)∨0} W_{(s−ρ)∨0}^*.
    fn mul(&self, other: &Self) -> Self {
        let rho = &self.g * &other.r;
        let sigma = &self.g * &other.s;
        let g = &self.g * &other.g;
        if rho >= self.s {
            MultMonomial {
                r: &self.r + (rho - &self.s),
                s: sigma,
                g,
            }
        } else {
            MultMonomial {
                r: self.r.clone(),
                s: (&self.s - rho) + sigma,
                g,
            }
        }
    }

    fn adjoint(&self) -> Self {
        MultMonomial {
            r: &self.s / &self.g,
            s: &self.r / &self.g,
            g: self.g.recip(),
        }
    }
}

/// Group element Y_t U_g of the full boundary quotient C*(ℚ ⋊ ℚ₊^×), with
/// U_g Y_t U_g^{-1} = Y_{gt}. Serializes as `{"t": …, "g": …}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ClWire", into = "ClWire")]
pub struct ClMonomial {
    t: BigRational,
    g: BigRational,
}

#[derive(Serialize, Deserialize)]
struct ClWire {
    #[serde(with = "crate::wire::rat")]
    t: BigRational,
    #[serde(with = "crate::wire::rat")]
    g: BigRational,
}

impl From<ClMonomial> for ClWire {
    fn from(x: ClMonomial) -> Self {
        ClWire { t: x.t, g: x.g }
    }
}

impl TryFrom<ClWire> for ClMonomial {
    type Error = Error;

    fn try_from(wire: ClWire) -> Result<Self> {
        ClMonomial::new(wire.t, wire.g)
    }
}

impl fmt::Display for ClMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t, self.g)
    }
}

impl ClMonomial {
    pub fn new(t: BigRational, g: BigRational) -> Result<Self> {
        if !g.is_positive() {
            return Err(Error::InvalidParameter(
                "scaling part must be positive".into(),
            ));
        }
        Ok(ClMonomial { t, g })
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    pub fn g(&self) -> &BigRational {
        &self.g
    }

    /// Group inverse; coincides with the adjoint since Y_t U_g is unitary.
    pub fn inverse(&self) -> Self {
        let g_inv = self.g.recip();
        ClMonomial {
            t: -(&self.t * &g_inv),
            g: g_inv,
        }
    }
}

impl StarMonomial for ClMonomial {
    const PRESENTATION: &'static str = "cl";

    fn identity() -> Self {
        ClMonomial {
            t: BigRational::zero(),
            g: BigRational::one(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        ClMonomial {
            t: &self.t + &self.g * &other.t,
            g: &self.g * &other.g,
        }
    }

    fn adjoint(&self) -> Self {
        self.inverse()
    }
}

/// Quotient map onto the additive boundary: (a, m, n, b) ↦ (a, m − n, b).
pub fn reduce_add(x: &Monomial) -> AddMonomial {
    AddMonomial {
        a: x.a.clone(),
        k: x.gap(),
        b: x.b.clone(),
    }
}

/// Quotient map onto the multiplicative boundary:
/// (a, m, n, b) ↦ (m/a, n/a, b/a).
pub fn reduce_mult(x: &Monomial) -> MultMonomial {
    let a = BigRational::from_integer(BigInt::from(x.a.clone()));
    let nat = |u: &BigUint| BigRational::from_integer(BigInt::from(u.clone()));
    MultMonomial {
        r: nat(&x.m) / &a,
        s: nat(&x.n) / &a,
        g: nat(&x.b) / &a,
    }
}

/// Quotient map onto the full boundary: (a, m, n, b) ↦ ((m − n)/a, b/a).
pub fn reduce_cl(x: &Monomial) -> ClMonomial {
    let a = BigRational::from_integer(BigInt::from(x.a.clone()));
    ClMonomial {
        t: BigRational::from_integer(x.gap()) / &a,
        g: BigRational::from_integer(BigInt::from(x.b.clone())) / &a,
    }
}

/// Monomial in any of the four presentations, distinguished by its JSON
/// field set: `{a,m,n,b}`, `{a,k,b}`, `{r,s,g}`, or `{t,g}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum AnyMonomial {
    Full(Monomial),
    Add(AddMonomial),
    Mult(MultMonomial),
    Cl(ClMonomial),
}

impl fmt::Display for AnyMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyMonomial::Full(x) => write!(f, "{x}"),
            AnyMonomial::Add(x) => write!(f, "{x}"),
            AnyMonomial::Mult(x) => write!(f, "{x}"),
            AnyMonomial::Cl(x) => write!(f, "{x}"),
        }
    }
}

impl AnyMonomial {
    pub fn presentation(&self) -> &'static str {
        match self {
            AnyMonomial::Full(_) => Monomial::PRESENTATION,
            AnyMonomial::Add(_) => AddMonomial::PRESENTATION,
            AnyMonomial::Mult(_) => MultMonomial::PRESENTATION,
            AnyMonomial::Cl(_) => ClMonomial::PRESENTATION,
        }
    }

    pub fn from_value(value: &serde_json::Value) -> Result<Self> {
        let object = value.as_object().ok_or_else(|| {
            Error::InvalidParameter("monomial must be a JSON object".into())
        })?;
        let mut keys: Vec<&str> = object.keys().map(|k| k.as_str()).collect();
        keys.sort_unstable();
        let parse = value.clone();
        let invalid = crate::wire::invalid_json;
        match keys.as_slice() {
            ["a", "b", "m", "n"] => Ok(AnyMonomial::Full(
                serde_json::from_value(parse).map_err(invalid)?,
            )),
            ["a", "b", "k"] => Ok(AnyMonomial::Add(
                serde_json::from_value(parse).map_err(invalid)?,
            )),
            ["g", "r", "s"] => Ok(AnyMonomial::Mult(
                serde_json::from_value(parse).map_err(invalid)?,
            )),
            ["g", "t"] => Ok(AnyMonomial::Cl(
                serde_json::from_value(parse).map_err(invalid)?,
            )),
            _ => Err(Error::InvalidParameter(format!(
                "unrecognized monomial fields {keys:?}"
            ))),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        AnyMonomial::from_value(&value)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (AnyMonomial::Full(x), AnyMonomial::Full(y)) => Ok(AnyMonomial::Full(x.mul(y))),
            (AnyMonomial::Add(x), AnyMonomial::Add(y)) => Ok(AnyMonomial::Add(x.mul(y))),
            (AnyMonomial::Mult(x), AnyMonomial::Mult(y)) => Ok(AnyMonomial::Mult(x.mul(y))),
            (AnyMonomial::Cl(x), AnyMonomial::Cl(y)) => Ok(AnyMonomial::Cl(x.mul(y))),
            _ => Err(Error::MixedPresentation {
                left: self.presentation(),
                right: other.presentation(),
            }),
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            AnyMonomial::Full(x) => AnyMonomial::Full(x.adjoint()),
            AnyMonomial::Add(x) => AnyMonomial::Add(x.adjoint()),
            AnyMonomial::Mult(x) => AnyMonomial::Mult(x.adjoint()),
            AnyMonomial::Cl(x) => AnyMonomial::Cl(x.adjoint()),
        }
    }

    /// Push the monomial down to the named presentation. Only the quotient
    /// directions exist: full → {full, add, mult, cl}, add → {add, cl},
    /// mult → {mult, cl}, cl → cl.
    pub fn reduce(&self, target: &str) -> Result<Self> {
        if !matches!(target, "full" | "add" | "mult" | "cl") {
            return Err(Error::InvalidParameter(format!(
                "unknown presentation {target:?}"
            )));
        }
        if target == self.presentation() {
            return Ok(self.clone());
        }
        match (self, target) {
            (AnyMonomial::Full(x), "add") => Ok(AnyMonomial::Add(reduce_add(x))),
            (AnyMonomial::Full(x), "mult") => Ok(AnyMonomial::Mult(reduce_mult(x))),
            (AnyMonomial::Full(x), "cl") => Ok(AnyMonomial::Cl(reduce_cl(x))),
            (AnyMonomial::Add(x), "cl") => Ok(AnyMonomial::Cl(x.to_cl())),
            (AnyMonomial::Mult(x), "cl") => Ok(AnyMonomial::Cl(x.to_cl())),
            _ => Err(Error::InvalidParameter(format!(
                "no quotient map from {} to {target}",
                self.presentation()
            ))),
        }
    }
}
