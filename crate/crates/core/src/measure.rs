//! Probability measures on the circle 𝕋 = ℝ/ℤ with exact rational data.
//!
//! A measure supplies the diagonal data of an equilibrium state through its
//! moments m_k(μ) = ∫ e^{2πikt} dμ(t). Supported shapes: finitely many
//! atoms at rational angles, normalized Lebesgue measure, and finite convex
//! mixtures of these. Angles are stored in *turns* (fractions of a full
//! revolution), so a rational angle stays rational and quarter-turn moments
//! stay exact in floating point.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Point mass position (in turns, normalized to [0, 1)) and weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(with = "crate::wire::rat")]
    pub turns: BigRational,
    #[serde(with = "crate::wire::rat")]
    pub weight: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixturePart {
    pub measure: Measure,
    #[serde(with = "crate::wire::rat")]
    pub weight: BigRational,
}

/// Serializes as `{"kind": "atoms", "atoms": […]}`, `{"kind": "lebesgue"}`,
/// or `{"kind": "mixture", "parts": […]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
#[serde(try_from = "MeasureWire")]
pub enum Measure {
    #[serde(rename = "atoms")]
    Atomic { atoms: Vec<Atom> },
    Lebesgue,
    Mixture { parts: Vec<MixturePart> },
}

/// Unvalidated mirror of [`Measure`] for deserialization.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum MeasureWire {
    #[serde(rename = "atoms")]
    Atomic { atoms: Vec<Atom> },
    Lebesgue,
    Mixture { parts: Vec<MixturePart> },
}

impl TryFrom<MeasureWire> for Measure {
    type Error = Error;

    fn try_from(wire: MeasureWire) -> Result<Self> {
        match wire {
            MeasureWire::Atomic { atoms } => {
                Measure::atomic(atoms.into_iter().map(|a| (a.turns, a.weight)))
            }
            MeasureWire::Lebesgue => Ok(Measure::Lebesgue),
            MeasureWire::Mixture { parts } => {
                Measure::mixture(parts.into_iter().map(|p| (p.measure, p.weight)))
            }
        }
    }
}

/// Representative of x in [0, 1).
pub(crate) fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

pub(crate) fn rat_to_f64(x: &BigRational) -> f64 {
    let value = x.to_f64().unwrap_or(f64::NAN);
    debug_assert!(value.is_finite(), "rational {x} out of f64 range");
    value
}

/// e^{2πi·turns}, exact on quarter turns.
pub fn unit_phase(turns: &BigRational) -> Complex64 {
    let t = frac(turns);
    if t.is_zero() {
        return Complex64::new(1.0, 0.0);
    }
    let (p, q) = (t.numer(), t.denom());
    if *q == BigInt::from(2) {
        return Complex64::new(-1.0, 0.0);
    }
    if *q == BigInt::from(4) {
        return if *p == BigInt::one() {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(0.0, -1.0)
        };
    }
    let angle = std::f64::consts::TAU * rat_to_f64(&t);
    Complex64::new(angle.cos(), angle.sin())
}

impl Measure {
    /// Atomic measure from (turns, weight) pairs. Weights must be positive
    /// and sum to 1; angles are reduced mod 1 and coinciding atoms merged.
    pub fn atomic(
        atoms: impl IntoIterator<Item = (BigRational, BigRational)>,
    ) -> Result<Measure> {
        let mut merged: Vec<Atom> = Vec::new();
        for (turns, weight) in atoms {
            if !weight.is_positive() {
                return Err(Error::InvalidMeasure(format!(
                    "atom weight must be positive, got {weight}"
                )));
            }
            let turns = frac(&turns);
            match merged.iter_mut().find(|a| a.turns == turns) {
                Some(atom) => atom.weight += weight,
                None => merged.push(Atom { turns, weight }),
            }
        }
        if merged.is_empty() {
            return Err(Error::InvalidMeasure("no atoms given".into()));
        }
        merged.sort_by(|x, y| x.turns.cmp(&y.turns));
        let total: BigRational = merged.iter().map(|a| a.weight.clone()).sum();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!(
                "atom weights sum to {total}, expected 1"
            )));
        }
        Ok(Measure::Atomic { atoms: merged })
    }

    /// Convex mixture. Weights must be positive and sum to 1.
    pub fn mixture(parts: impl IntoIterator<Item = (Measure, BigRational)>) -> Result<Measure> {
        let parts: Vec<MixturePart> = parts
            .into_iter()
            .map(|(measure, weight)| {
                if weight.is_positive() {
                    Ok(MixturePart { measure, weight })
                } else {
                    Err(Error::InvalidMeasure(format!(
                        "mixture weight must be positive, got {weight}"
                    )))
                }
            })
            .collect::<Result<_>>()?;
        if parts.is_empty() {
            return Err(Error::InvalidMeasure("empty mixture".into()));
        }
        let total: BigRational = parts.iter().map(|p| p.weight.clone()).sum();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        Ok(Measure::Mixture { parts })
    }

    /// Point mass at angle 0, i.e. at 1 ∈ 𝕋.
    pub fn delta_one() -> Measure {
        Measure::Atomic {
            atoms: vec![Atom {
                turns: BigRational::zero(),
                weight: BigRational::one(),
            }],
        }
    }

    /// Point mass at half a turn, i.e. at −1 ∈ 𝕋.
    pub fn delta_minus_one() -> Measure {
        Measure::Atomic {
            atoms: vec![Atom {
                turns: BigRational::new(BigInt::one(), BigInt::from(2)),
                weight: BigRational::one(),
            }],
        }
    }

    /// Built-in measures by CLI name.
    pub fn named(name: &str) -> Result<Measure> {
        match name {
            "delta1" => Ok(Measure::delta_one()),
            "delta-1" => Ok(Measure::delta_minus_one()),
            "lebesgue" => Ok(Measure::Lebesgue),
            other => Err(Error::InvalidMeasure(format!(
                "unknown measure name {other:?}; expected delta1, delta-1, or lebesgue"
            ))),
        }
    }

    pub const BUILTIN_NAMES: [&'static str; 3] = ["delta1", "delta-1", "lebesgue"];

    /// Short label for reports and CSV rows.
    pub fn label(&self) -> String {
        if *self == Measure::delta_one() {
            return "delta1".into();
        }
        if *self == Measure::delta_minus_one() {
            return "delta-1".into();
        }
        match self {
            Measure::Lebesgue => "lebesgue".into(),
            Measure::Atomic { atoms } => {
                let mut out = String::from("atoms[");
                for (i, a) in atoms.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{}:{}", a.turns, a.weight);
                }
                out.push(']');
                out
            }
            Measure::Mixture { parts } => {
                let mut out = String::from("mix[");
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{}:{}", p.measure.label(), p.weight);
                }
                out.push(']');
                out
            }
        }
    }

    /// Splits into total Lebesgue mass and a flattened, merged atom list;
    /// every representable measure decomposes this way.
    pub fn decompose(&self) -> (BigRational, Vec<(BigRational, BigRational)>) {
        fn go(
            measure: &Measure,
            scale: &BigRational,
            lebesgue: &mut BigRational,
            atoms: &mut Vec<(BigRational, BigRational)>,
        ) {
            match measure {
                Measure::Lebesgue => *lebesgue += scale,
                Measure::Atomic { atoms: list } => {
                    for atom in list {
                        let w = &atom.weight * scale;
                        match atoms.iter_mut().find(|(t, _)| *t == atom.turns) {
                            Some((_, total)) => *total += w,
                            None => atoms.push((atom.turns.clone(), w)),
                        }
                    }
                }
                Measure::Mixture { parts } => {
                    for part in parts {
                        go(&part.measure, &(scale * &part.weight), lebesgue, atoms);
                    }
                }
            }
        }
        let mut lebesgue = BigRational::zero();
        let mut atoms = Vec::new();
        go(self, &BigRational::one(), &mut lebesgue, &mut atoms);
        atoms.sort_by(|x, y| x.0.cmp(&y.0));
        (lebesgue, atoms)
    }

    pub fn is_purely_atomic(&self) -> bool {
        self.decompose().0.is_zero()
    }

    /// Atom list of a purely atomic measure.
    pub fn flatten_atoms(&self) -> Result<Vec<(BigRational, BigRational)>> {
        let (lebesgue, atoms) = self.decompose();
        if !lebesgue.is_zero() {
            return Err(Error::NonAtomicMeasure);
        }
        Ok(atoms)
    }

    /// k-th moment ∫ e^{2πikt} dμ(t).
    pub fn moment(&self, k: &BigInt) -> Complex64 {
        let (lebesgue, atoms) = self.decompose();
        let mut total = if k.is_zero() {
            Complex64::new(rat_to_f64(&lebesgue), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        for (turns, weight) in &atoms {
            total += rat_to_f64(weight) * unit_phase(&(turns * k));
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn moment_i64(measure: &Measure, k: i64) -> Complex64 {
        measure.moment(&BigInt::from(k))
    }

    #[test]
    fn point_mass_moments_are_exact() {
        let plus = Measure::delta_one();
        let minus = Measure::delta_minus_one();
        for k in -6i64..=6 {
            assert_eq!(moment_i64(&plus, k), Complex64::new(1.0, 0.0));
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(moment_i64(&minus, k), Complex64::new(sign, 0.0));
        }
    }

    #[test]
    fn lebesgue_moments_vanish() {
        let leb = Measure::Lebesgue;
        assert_eq!(moment_i64(&leb, 0), Complex64::new(1.0, 0.0));
        for k in 1i64..=5 {
            assert_eq!(moment_i64(&leb, k), Complex64::new(0.0, 0.0));
            assert_eq!(moment_i64(&leb, -k), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn quarter_turn_moments_are_exact() {
        let mu = Measure::atomic([(rat(1, 4), rat(1, 1))]).unwrap();
        assert_eq!(moment_i64(&mu, 1), Complex64::new(0.0, 1.0));
        assert_eq!(moment_i64(&mu, 2), Complex64::new(-1.0, 0.0));
        assert_eq!(moment_i64(&mu, 3), Complex64::new(0.0, -1.0));
        assert_eq!(moment_i64(&mu, 4), Complex64::new(1.0, 0.0));
        assert_eq!(moment_i64(&mu, -1), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn third_turn_moments_match_trig() {
        let mu = Measure::atomic([(rat(1, 3), rat(1, 1))]).unwrap();
        let m1 = moment_i64(&mu, 1);
        assert!((m1.re + 0.5).abs() < 1e-15);
        assert!((m1.im - 0.75f64.sqrt()).abs() < 1e-15);
        assert_eq!(moment_i64(&mu, 3), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn angles_normalize_and_merge() {
        let mu = Measure::atomic([
            (rat(5, 4), rat(1, 2)),
            (rat(-3, 4), rat(1, 2)),
        ])
        .unwrap();
        // 5/4 and −3/4 are both a quarter turn.
        assert_eq!(
            mu,
            Measure::atomic([(rat(1, 4), rat(1, 1))]).unwrap()
        );
    }

    #[test]
    fn validation_rejects_bad_data() {
        assert!(Measure::atomic([]).is_err());
        assert!(Measure::atomic([(rat(0, 1), rat(1, 2))]).is_err());
        assert!(Measure::atomic([(rat(0, 1), rat(-1, 1)), (rat(1, 2), rat(2, 1))]).is_err());
        assert!(Measure::mixture([]).is_err());
        assert!(Measure::mixture([(Measure::Lebesgue, rat(1, 2))]).is_err());
    }

    #[test]
    fn mixtures_decompose_and_average() {
        let mu = Measure::mixture([
            (
                Measure::mixture([
                    (Measure::delta_one(), rat(1, 2)),
                    (Measure::Lebesgue, rat(1, 2)),
                ])
                .unwrap(),
                rat(1, 2),
            ),
            (Measure::delta_minus_one(), rat(1, 2)),
        ])
        .unwrap();
        let (lebesgue, atoms) = mu.decompose();
        assert_eq!(lebesgue, rat(1, 4));
        assert_eq!(atoms, vec![(rat(0, 1), rat(1, 4)), (rat(1, 2), rat(1, 2))]);
        assert!(!mu.is_purely_atomic());
        assert!(mu.flatten_atoms().is_err());
        assert_eq!(
            mu.flatten_atoms().unwrap_err().to_string(),
            "non-atomic measure"
        );
        // m_1 = 1/4·1 + 0 + 1/2·(−1) = −1/4.
        assert_eq!(moment_i64(&mu, 1), Complex64::new(-0.25, 0.0));
        assert_eq!(moment_i64(&mu, 0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn names_and_labels() {
        assert_eq!(Measure::named("delta1").unwrap(), Measure::delta_one());
        assert_eq!(Measure::named("delta-1").unwrap(), Measure::delta_minus_one());
        assert_eq!(Measure::named("lebesgue").unwrap(), Measure::Lebesgue);
        assert!(Measure::named("gaussian").is_err());
        assert_eq!(Measure::delta_one().label(), "delta1");
        assert_eq!(Measure::delta_minus_one().label(), "delta-1");
        assert_eq!(Measure::Lebesgue.label(), "lebesgue");
        let mix = Measure::mixture([
            (Measure::delta_one(), rat(1, 2)),
            (Measure::delta_minus_one(), rat(1, 2)),
        ])
        .unwrap();
        assert_eq!(mix.label(), "mix[delta1:1/2,delta-1:1/2]");
    }

    #[test]
    fn json_shapes() {
        assert_eq!(
            serde_json::to_string(&Measure::Lebesgue).unwrap(),
            r#"{"kind":"lebesgue"}"#
        );
        let mu = Measure::atomic([(rat(1, 4), rat(1, 1))]).unwrap();
        let text = serde_json::to_string(&mu).unwrap();
        assert_eq!(
            text,
            r#"{"kind":"atoms","atoms":[{"turns":{"num":1,"den":4},"weight":{"num":1,"den":1}}]}"#
        );
        assert_eq!(serde_json::from_str::<Measure>(&text).unwrap(), mu);
        // Bad weights are rejected at parse time.
        assert!(serde_json::from_str::<Measure>(
            r#"{"kind":"atoms","atoms":[{"turns":{"num":0,"den":1},"weight":{"num":1,"den":2}}]}"#
        )
        .is_err());
        let mix = Measure::mixture([
            (Measure::delta_one(), rat(1, 2)),
            (Measure::Lebesgue, rat(1, 2)),
        ])
        .unwrap();
        let text = serde_json::to_string(&mix).unwrap();
        assert_eq!(serde_json::from_str::<Measure>(&text).unwrap(), mix);
    }

    fn arb_turns() -> impl Strategy<Value = BigRational> {
        (-12i64..=12, 1i64..=12).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn moments_are_hermitian(t in arb_turns(), k in -20i64..=20) {
            let mu = Measure::atomic([(t, rat(1, 1))]).unwrap();
            let plus = moment_i64(&mu, k);
            let minus = moment_i64(&mu, -k);
            // m_{−k} = conj(m_k) and |m_k| = 1 for a point mass.
            prop_assert!((plus - minus.conj()).norm() < 1e-12);
            prop_assert!((plus.norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn mixture_moments_are_convex(k in -20i64..=20) {
            let mix = Measure::mixture([
                (Measure::delta_one(), rat(1, 4)),
                (Measure::delta_minus_one(), rat(3, 4)),
            ]).unwrap();
            let expect = 0.25 + 0.75 * if k % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert_eq!(moment_i64(&mix, k), Complex64::new(expect, 0.0));
        }
    }
}
