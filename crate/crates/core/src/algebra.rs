//! Finite linear combinations of monomials with complex coefficients.
//!
//! [`AlgebraElement`] is the free *-algebra span of one monomial
//! presentation; products distribute over the exact normal-form products of
//! [`crate::monomial`], so only the scalars are floating point.

use crate::monomial::{Monomial, StarMonomial};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<M: StarMonomial> {
    terms: BTreeMap<M, Complex64>,
}

#[derive(Serialize, Deserialize)]
struct TermWire<M> {
    mono: M,
    re: f64,
    im: f64,
}

impl<M: StarMonomial + Serialize> Serialize for AlgebraElement<M> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let wire: Vec<TermWire<&M>> = self
            .terms
            .iter()
            .map(|(mono, c)| TermWire {
                mono,
                re: c.re,
                im: c.im,
            })
            .collect();
        wire.serialize(ser)
    }
}

impl<'de, M: StarMonomial + DeserializeOwned> Deserialize<'de> for AlgebraElement<M> {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let wire: Vec<TermWire<M>> = Vec::deserialize(de)?;
        Ok(AlgebraElement::from_terms(
            wire.into_iter()
                .map(|t| (t.mono, Complex64::new(t.re, t.im))),
        ))
    }
}

impl<M: StarMonomial> Default for AlgebraElement<M> {
    fn default() -> Self {
        AlgebraElement::zero()
    }
}

impl<M: StarMonomial> AlgebraElement<M> {
    pub fn zero() -> Self {
        AlgebraElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        AlgebraElement::from_monomial(M::identity())
    }

    pub fn from_monomial(mono: M) -> Self {
        AlgebraElement::from_terms([(mono, Complex64::new(1.0, 0.0))])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (M, Complex64)>) -> Self {
        let mut out = AlgebraElement::zero();
        for (mono, c) in terms {
            out.add_term(mono, c);
        }
        out
    }

    fn add_term(&mut self, mono: M, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(slot) => {
                if c.norm_sqr() != 0.0 {
                    slot.insert(c);
                }
            }
            Entry::Occupied(mut slot) => {
                let sum = *slot.get() + c;
                if sum.norm_sqr() == 0.0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&M, Complex64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn coefficient(&self, mono: &M) -> Complex64 {
        self.terms.get(mono).copied().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (mono, c) in other.terms() {
            out.add_term(mono.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c.norm_sqr() == 0.0 {
            return AlgebraElement::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(m, w)| (m.clone(), *w * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = AlgebraElement::zero();
        for (x, c) in self.terms() {
            for (y, d) in other.terms() {
                out.add_term(x.mul(y), c * d);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.adjoint(), c.conj()))
                .collect(),
        }
    }

    /// Largest coefficient magnitude; 0 for the zero element.
    pub fn sup_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Conditional expectation Θ onto the span of the equal-leg monomials
/// V_a S^m S^{*n} V_a^*: keeps a term exactly when its legs agree.
///
/// Θ is an idempotent, adjoint-preserving, contractive projection; every
/// equilibrium state of the algebra factors through it composed with the
/// diagonal data, which is why state evaluation only ever consumes
/// equal-leg monomials.
pub fn expectation_theta(x: &AlgebraElement<Monomial>) -> AlgebraElement<Monomial> {
    AlgebraElement::from_terms(
        x.terms()
            .filter(|(m, _)| m.has_equal_legs())
            .map(|(m, c)| (m.clone(), c)),
    )
}
