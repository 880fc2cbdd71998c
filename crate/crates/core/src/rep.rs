//! Truncated Hilbert-space models of the Toeplitz algebra and its quotients.
//!
//! Each model acts on a finite slice of a canonical basis; every generator
//! maps a basis vector to a basis vector, to zero, or out of the slice:
//!
//! - [`TruncatedRep::build_regular`]: the left regular representation on
//!   ℓ²(ℕ^× ⋉ ℕ) with basis ε_{(b,n)}, b ≤ bound_a, n ≤ bound_m. Faithful
//!   model of the Toeplitz relations (T0)–(T4).
//! - [`TruncatedRep::build_qplus`]: the multiplicative boundary acting on
//!   ℓ²(ℚ_{≥0} ∩ (1/L)ℤ) restricted to [0, height]; the V family is unitary
//!   there, so (T5) V_aV_a^* = 1 holds on top of (T0)–(T4). Only V_a with
//!   a | L act on the grid.
//! - [`TruncatedRep::build_nxz`]: the additive boundary acting on
//!   ℓ²(ℕ^× × ℤ) with |exponent| ≤ bound_m; S is unitary there, so
//!   (T6) SS^* = 1 holds on top of (T0)–(T4).
//!
//! A generator application is a [`Step`]: `Kernel` is an honest zero of the
//! infinite model, `Outside` a truncation artifact. Words and matrix columns
//! propagate the first event, and all comparisons are restricted to interior
//! columns, those whose full path never leaves the slice. On the interior
//! the models are exact, which makes them independent oracles for the
//! normal-form product: matrix(x)·matrix(y) must equal matrix(x·y) on the
//! nose, and every presentation relation must hold column by column.

use crate::monomial::Monomial;
use crate::{Error, Result};
use num_integer::Integer;
use std::fmt;

/// One generator of the algebra, acting on basis vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    S,
    SStar,
    V(u64),
    VStar(u64),
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::S => write!(f, "S"),
            Gen::SStar => write!(f, "S*"),
            Gen::V(a) => write!(f, "V_{a}"),
            Gen::VStar(a) => write!(f, "V*_{a}"),
        }
    }
}

/// Image of a basis vector under a generator or word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Another basis vector of the slice.
    In(usize),
    /// Zero in the infinite model; absorbing.
    Kernel,
    /// Left the slice; the infinite model continues but the truncation
    /// cannot see it. Absorbing.
    Outside,
}

#[derive(Debug, Clone)]
enum Model {
    Regular { bound_a: u64, bound_m: u64 },
    QPlus { denominator_lcm: u64, height: u64 },
    NxZ { bound_b: u64, bound_m: u64 },
}

#[derive(Debug, Clone)]
pub struct TruncatedRep {
    model: Model,
    dim: usize,
}

fn checked_dim(dim: u128) -> Result<usize> {
    const MAX_DIM: u128 = 100_000_000;
    if dim == 0 {
        return Err(Error::InvalidParameter("representation is empty".into()));
    }
    if dim > MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "dimension {dim} exceeds the {MAX_DIM} slice limit"
        )));
    }
    Ok(dim as usize)
}

impl TruncatedRep {
    /// Left regular slice: basis ε_{(b,n)} with 1 ≤ b ≤ bound_a,
    /// 0 ≤ n ≤ bound_m.
    pub fn build_regular(bound_a: u64, bound_m: u64) -> Result<Self> {
        if bound_a == 0 {
            return Err(Error::InvalidParameter("bound_a must be at least 1".into()));
        }
        let dim = checked_dim(bound_a as u128 * (bound_m as u128 + 1))?;
        Ok(TruncatedRep {
            model: Model::Regular { bound_a, bound_m },
            dim,
        })
    }

    /// Multiplicative boundary slice: basis δ_{k/L} with 0 ≤ k ≤ height·L,
    /// L = denominator_lcm. V_a is admissible only when a | L.
    pub fn build_qplus(denominator_lcm: u64, height: u64) -> Result<Self> {
        if denominator_lcm == 0 || height == 0 {
            return Err(Error::InvalidParameter(
                "grid denominator and height must be at least 1".into(),
            ));
        }
        let dim = checked_dim(height as u128 * denominator_lcm as u128 + 1)?;
        Ok(TruncatedRep {
            model: Model::QPlus {
                denominator_lcm,
                height,
            },
            dim,
        })
    }

    /// Additive boundary slice: basis ε_{(b,m)} with 1 ≤ b ≤ bound_b,
    /// |m| ≤ bound_m.
    pub fn build_nxz(bound_b: u64, bound_m: u64) -> Result<Self> {
        if bound_b == 0 {
            return Err(Error::InvalidParameter("bound_b must be at least 1".into()));
        }
        let dim = checked_dim(bound_b as u128 * (2 * bound_m as u128 + 1))?;
        Ok(TruncatedRep {
            model: Model::NxZ { bound_b, bound_m },
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> String {
        match self.model {
            Model::Regular { bound_a, bound_m } => format!("regular({bound_a},{bound_m})"),
            Model::QPlus {
                denominator_lcm,
                height,
            } => format!("qplus({denominator_lcm},{height})"),
            Model::NxZ { bound_b, bound_m } => format!("nxz({bound_b},{bound_m})"),
        }
    }

    pub fn basis_label(&self, idx: usize) -> String {
        match self.model {
            Model::Regular { bound_m, .. } => {
                let width = bound_m as usize + 1;
                format!("({},{})", idx / width + 1, idx % width)
            }
            Model::QPlus {
                denominator_lcm, ..
            } => format!("{idx}/{denominator_lcm}"),
            Model::NxZ { bound_m, .. } => {
                let width = 2 * bound_m as usize + 1;
                format!(
                    "({},{})",
                    idx / width + 1,
                    (idx % width) as i64 - bound_m as i64
                )
            }
        }
    }

    /// Indices a for which V_a acts on this slice without leaving its
    /// lattice: every a ≥ 1 except on the ℚ₊ grid, where a must divide L.
    pub fn supports_index(&self, a: u64) -> bool {
        match self.model {
            Model::QPlus {
                denominator_lcm, ..
            } => a >= 1 && denominator_lcm % a == 0,
            _ => a >= 1,
        }
    }

    pub fn apply_gen(&self, gen: Gen, idx: usize) -> Result<Step> {
        debug_assert!(idx < self.dim);
        if let Gen::V(0) | Gen::VStar(0) = gen {
            return Err(Error::InvalidParameter(
                "generator index must be at least 1".into(),
            ));
        }
        match self.model {
            Model::Regular { bound_a, bound_m } => {
                let width = bound_m + 1;
                let b = idx as u64 / width + 1;
                let n = idx as u64 % width;
                Ok(match gen {
                    Gen::S => match n + b {
                        n2 if n2 <= bound_m => Step::In(idx + b as usize),
                        _ => Step::Outside,
                    },
                    Gen::SStar => {
                        if n >= b {
                            Step::In(idx - b as usize)
                        } else {
                            Step::Kernel
                        }
                    }
                    Gen::V(a) => match a.checked_mul(b) {
                        Some(ab) if ab <= bound_a => {
                            Step::In(((ab - 1) * width + n) as usize)
                        }
                        _ => Step::Outside,
                    },
                    Gen::VStar(a) => {
                        if b.is_multiple_of(a) {
                            Step::In(((b / a - 1) * width + n) as usize)
                        } else {
                            Step::Kernel
                        }
                    }
                })
            }
            Model::QPlus {
                denominator_lcm: l,
                height,
            } => {
                let k = idx as u64;
                let max = height * l;
                if let Gen::V(a) | Gen::VStar(a) = gen {
                    if l % a != 0 {
                        return Err(Error::GridMismatch {
                            a,
                            denominator: l,
                        });
                    }
                }
                Ok(match gen {
                    Gen::S => {
                        if k + l <= max {
                            Step::In((k + l) as usize)
                        } else {
                            Step::Outside
                        }
                    }
                    Gen::SStar => {
                        if k >= l {
                            Step::In((k - l) as usize)
                        } else {
                            Step::Kernel
                        }
                    }
                    Gen::V(a) => {
                        if k.is_multiple_of(a) {
                            Step::In((k / a) as usize)
                        } else {
                            Step::Outside
                        }
                    }
                    Gen::VStar(a) => match a.checked_mul(k) {
                        Some(ak) if ak <= max => Step::In(ak as usize),
                        _ => Step::Outside,
                    },
                })
            }
            Model::NxZ { bound_b, bound_m } => {
                let width = 2 * bound_m + 1;
                let b = idx as u64 / width + 1;
                let m = (idx as u64 % width) as i64 - bound_m as i64;
                let locate = |b2: u64, m2: i64| {
                    ((b2 - 1) * width) as usize + (m2 + bound_m as i64) as usize
                };
                Ok(match gen {
                    Gen::S => {
                        let m2 = m + b as i64;
                        if m2 <= bound_m as i64 {
                            Step::In(locate(b, m2))
                        } else {
                            Step::Outside
                        }
                    }
                    Gen::SStar => {
                        let m2 = m - b as i64;
                        if m2 >= -(bound_m as i64) {
                            Step::In(locate(b, m2))
                        } else {
                            Step::Outside
                        }
                    }
                    Gen::V(a) => match a.checked_mul(b) {
                        Some(ab) if ab <= bound_b => Step::In(locate(ab, m)),
                        _ => Step::Outside,
                    },
                    Gen::VStar(a) => {
                        if b.is_multiple_of(a) {
                            Step::In(locate(b / a, m))
                        } else {
                            Step::Kernel
                        }
                    }
                })
            }
        }
    }

    /// Applies a word, first letter first; `Kernel` and `Outside` absorb.
    pub fn apply_word(&self, word: &[Gen], idx: usize) -> Result<Step> {
        let mut at = Step::In(idx);
        for &gen in word {
            let Step::In(here) = at else { break };
            at = self.apply_gen(gen, here)?;
        }
        Ok(at)
    }
}

/// Word realizing V_a S^m S^{*n} V_b^* in application order (V_b^* acts
/// first); identity generators are dropped.
pub fn word_for(x: &Monomial) -> Result<Vec<Gen>> {
    let (a, m, n, b) = x.as_u64_tuple().ok_or_else(|| {
        Error::Overflow(format!("monomial {x} does not fit machine integers"))
    })?;
    let mut word = Vec::with_capacity((m + n) as usize + 2);
    if b != 1 {
        word.push(Gen::VStar(b));
    }
    word.extend(std::iter::repeat_n(Gen::SStar, n as usize));
    word.extend(std::iter::repeat_n(Gen::S, m as usize));
    if a != 1 {
        word.push(Gen::V(a));
    }
    Ok(word)
}

/// Column-wise action of a monomial on a slice: a 0/1 partial permutation
/// matrix with truncation marks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    cols: Vec<Step>,
}

impl MonomialMatrix {
    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> Step {
        self.cols[j]
    }

    pub fn interior_columns(&self) -> usize {
        self.cols.iter().filter(|s| !matches!(s, Step::Outside)).count()
    }

    /// Operator product `self ∘ rhs` (rhs applied first), so that
    /// `matrix(x).compose(&matrix(y))` models the operator x·y.
    pub fn compose(&self, rhs: &MonomialMatrix) -> MonomialMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        let cols = rhs
            .cols
            .iter()
            .map(|step| match *step {
                Step::In(i) => self.cols[i],
                other => other,
            })
            .collect();
        MonomialMatrix { cols }
    }

    /// Exact equality on the columns both sides can see.
    pub fn agrees_on_interior(&self, other: &MonomialMatrix) -> bool {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.cols
            .iter()
            .zip(&other.cols)
            .all(|(l, r)| matches!(l, Step::Outside) || matches!(r, Step::Outside) || l == r)
    }

    /// Positions of the 1 entries as (row, column) pairs.
    pub fn ones(&self) -> Vec<(usize, usize)> {
        self.cols
            .iter()
            .enumerate()
            .filter_map(|(j, s)| match s {
                Step::In(i) => Some((*i, j)),
                _ => None,
            })
            .collect()
    }
}

pub fn monomial_matrix(rep: &TruncatedRep, x: &Monomial) -> Result<MonomialMatrix> {
    let word = word_for(x)?;
    let cols = (0..rep.dim())
        .map(|j| rep.apply_word(&word, j))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonomialMatrix { cols })
}

/// A presentation relation as a pair of words (application order) that must
/// act identically.
#[derive(Debug, Clone)]
pub struct Relation {
    pub name: String,
    pub lhs: Vec<Gen>,
    pub rhs: Vec<Gen>,
}

impl Relation {
    fn new(name: impl Into<String>, lhs: Vec<Gen>, rhs: Vec<Gen>) -> Self {
        Relation {
            name: name.into(),
            lhs,
            rhs,
        }
    }
}

/// Presentation relations applicable to the slice, with generator indices
/// up to `max_index`: (T0)–(T4) everywhere, plus (T5) V_aV_a^* = 1 on the
/// ℚ₊ grid and the unitary-S presentation (T6) = (A3) SS^* = 1, (A1)
/// SV_a = V_aS^a, (A2) Nica covariance of range projections on the
/// ℕ^× × ℤ slice.
pub fn relations_for(rep: &TruncatedRep, max_index: u64) -> Result<Vec<Relation>> {
    if max_index < 2 {
        return Err(Error::InvalidParameter(
            "max_index must be at least 2".into(),
        ));
    }
    let indices: Vec<u64> = (2..=max_index).filter(|&a| rep.supports_index(a)).collect();
    let mut rels = vec![Relation::new("T0s: S*S = 1", vec![Gen::S, Gen::SStar], vec![])];
    for &a in &indices {
        rels.push(Relation::new(
            format!("T0v: V_{a}*V_{a} = 1"),
            vec![Gen::V(a), Gen::VStar(a)],
            vec![],
        ));
        let mut t1_rhs = vec![Gen::S; a as usize];
        t1_rhs.push(Gen::V(a));
        rels.push(Relation::new(
            format!("T1: S V_{a} = V_{a} S^{a}"),
            vec![Gen::V(a), Gen::S],
            t1_rhs,
        ));
        let mut t4_rhs = vec![Gen::SStar; a as usize];
        t4_rhs.push(Gen::V(a));
        rels.push(Relation::new(
            format!("T4: S* V_{a} = V_{a} S*^{a}"),
            vec![Gen::V(a), Gen::SStar],
            t4_rhs,
        ));
    }
    for &a in &indices {
        for &b in &indices {
            if rep.supports_index(a * b) {
                rels.push(Relation::new(
                    format!("T2: V_{a} V_{b} = V_{}", a * b),
                    vec![Gen::V(b), Gen::V(a)],
                    vec![Gen::V(a * b)],
                ));
            }
            if a.gcd(&b) == 1 {
                rels.push(Relation::new(
                    format!("T3: V_{a}* V_{b} = V_{b} V_{a}*"),
                    vec![Gen::V(b), Gen::VStar(a)],
                    vec![Gen::VStar(a), Gen::V(b)],
                ));
            }
        }
    }
    match rep.model {
        Model::Regular { .. } => {}
        Model::QPlus { .. } => {
            for &a in &indices {
                rels.push(Relation::new(
                    format!("T5: V_{a} V_{a}* = 1"),
                    vec![Gen::VStar(a), Gen::V(a)],
                    vec![],
                ));
            }
        }
        Model::NxZ { .. } => {
            rels.push(Relation::new(
                "T6: S S* = 1",
                vec![Gen::SStar, Gen::S],
                vec![],
            ));
            for &a in &indices {
                let mut a1_rhs = vec![Gen::S; a as usize];
                a1_rhs.push(Gen::V(a));
                rels.push(Relation::new(
                    format!("A1: S V_{a} = V_{a} S^{a}"),
                    vec![Gen::V(a), Gen::S],
                    a1_rhs,
                ));
            }
            for &a in &indices {
                for &b in &indices {
                    let l = a.lcm(&b);
                    rels.push(Relation::new(
                        format!("A2: V_{a}V_{a}* V_{b}V_{b}* = V_{l}V_{l}*"),
                        vec![Gen::VStar(b), Gen::V(b), Gen::VStar(a), Gen::V(a)],
                        vec![Gen::VStar(l), Gen::V(l)],
                    ));
                }
            }
            rels.push(Relation::new(
                "A3: S S* = 1",
                vec![Gen::SStar, Gen::S],
                vec![],
            ));
        }
    }
    Ok(rels)
}

/// Outcome of checking one relation column by column.
#[derive(Debug, Clone)]
pub struct RelationReport {
    pub relation: String,
    pub interior_columns: usize,
    pub mismatches: usize,
}

impl RelationReport {
    /// 0.0 exactly when the relation holds on every interior column.
    pub fn residual(&self) -> f64 {
        self.mismatches as f64
    }

    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.interior_columns > 0
    }
}

pub fn check_relation(rep: &TruncatedRep, relation: &Relation) -> Result<RelationReport> {
    let mut interior = 0usize;
    let mut mismatches = 0usize;
    for j in 0..rep.dim() {
        let lhs = rep.apply_word(&relation.lhs, j)?;
        let rhs = rep.apply_word(&relation.rhs, j)?;
        if lhs == Step::Outside || rhs == Step::Outside {
            continue;
        }
        interior += 1;
        if lhs != rhs {
            mismatches += 1;
        }
    }
    Ok(RelationReport {
        relation: relation.name.clone(),
        interior_columns: interior,
        mismatches,
    })
}

/// Checks every applicable relation with indices ≤ max_index.
pub fn relation_residuals(rep: &TruncatedRep, max_index: u64) -> Result<Vec<RelationReport>> {
    relations_for(rep, max_index)?
        .iter()
        .map(|rel| check_relation(rep, rel))
        .collect()
}
