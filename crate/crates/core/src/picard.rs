//! The Picard lattice of a blow-up of the plane at up to eight points:
//! intersection form, exceptional-curve enumeration, nef and ample tests,
//! nef thresholds.
//!
//! Divisor classes are written `D = h*H - sum e_i * E_i` internally (so
//! `e_i > 0` means subtracting the i-th exceptional class); on the JSON
//! wire the `e` entries are the *signed* coefficients of the `E_i`, which
//! avoids any ambiguity about the subtraction convention.

use crate::exact::{q, qserde, ExactScalar, Q};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("blow-up rank {0} out of range (0..=8)")]
    InvalidRank(usize),
    #[error("divisor class has {got} exceptional coefficients, surface has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A rational divisor class `h*H - sum e_i * E_i` on `Bl_r P^2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DivisorClass {
    h: Q,
    e: Vec<Q>,
}

impl DivisorClass {
    /// Subtraction convention: `e[i]` is the coefficient being subtracted.
    pub fn new(h: Q, e: Vec<Q>) -> Self {
        DivisorClass { h, e }
    }

    /// Signed-sum convention: `D = h*H + sum c_i * E_i`.
    pub fn from_signed(h: Q, signed_e: Vec<Q>) -> Self {
        DivisorClass {
            h,
            e: signed_e.into_iter().map(|c| -c).collect(),
        }
    }

    pub fn from_i64(h: i64, e: &[i64]) -> Self {
        DivisorClass {
            h: crate::exact::qi(h),
            e: e.iter().map(|&c| crate::exact::qi(c)).collect(),
        }
    }

    pub fn hyperplane(r: usize) -> Self {
        DivisorClass {
            h: Q::one(),
            e: vec![Q::zero(); r],
        }
    }

    pub fn zero(r: usize) -> Self {
        DivisorClass {
            h: Q::zero(),
            e: vec![Q::zero(); r],
        }
    }

    /// The i-th exceptional class (0-based index).
    pub fn exceptional(r: usize, i: usize) -> Self {
        let mut e = vec![Q::zero(); r];
        e[i] = -Q::one();
        DivisorClass { h: Q::zero(), e }
    }

    pub fn h(&self) -> &Q {
        &self.h
    }

    /// Subtracted coefficients (`L_lambda` has `e = [1,...,1,lambda]`).
    pub fn e(&self) -> &[Q] {
        &self.e
    }

    pub fn rank(&self) -> usize {
        self.e.len()
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_zero() && self.e.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: &Q) -> Self {
        DivisorClass {
            h: &self.h * k,
            e: self.e.iter().map(|c| c * k).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.e.len(), other.e.len());
        DivisorClass {
            h: &self.h + &other.h,
            e: self
                .e
                .iter()
                .zip(&other.e)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        let coeff = |f: &mut fmt::Formatter<'_>, c: &Q, sym: String, first: bool| {
            let mag = qserde::rat_to_string(&c.abs());
            let sgn = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sgn} ")?;
            }
            if c.abs().is_one() {
                write!(f, "{sym}")
            } else if sym == "H" {
                write!(f, "{mag}{sym}")
            } else {
                write!(f, "{mag} {sym}")
            }
        };
        if !self.h.is_zero() {
            coeff(f, &self.h, "H".into(), true)?;
            wrote = true;
        }
        for (i, c) in self.e.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            coeff(f, &-c, format!("E{}", i + 1), !wrote)?;
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct DivisorWire {
    #[serde(with = "qserde")]
    h: Q,
    #[serde(with = "qserde::vec")]
    e: Vec<Q>,
    #[serde(default, skip_deserializing)]
    display: String,
}

impl Serialize for DivisorClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DivisorWire {
            h: self.h.clone(),
            e: self.e.iter().map(|c| -c).collect(),
            display: self.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = DivisorWire::deserialize(d)?;
        Ok(DivisorClass::from_signed(w.h, w.e))
    }
}

/// Outcome of a nef or ample test; `witness` is a violated test class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityCheck {
    pub holds: bool,
    pub witness: Option<DivisorClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum NefThreshold {
    Finite(ExactScalar),
    Infinite,
}

/// `Bl_r P^2` with its eagerly built curve caches. Immutable after
/// construction; all operations are pure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    r: usize,
    general_position: bool,
    no_cuspidal_anticanonical: bool,
    canonical: DivisorClass,
    exceptional: Vec<DivisorClass>,
    test_set: Vec<DivisorClass>,
}

impl SurfaceModel {
    pub fn new(r: usize) -> Result<Self, LatticeError> {
        Self::with_flags(r, true, true)
    }

    pub fn with_flags(
        r: usize,
        general_position: bool,
        no_cuspidal_anticanonical: bool,
    ) -> Result<Self, LatticeError> {
        let exceptional = enumerate_exceptional(r)?;
        // Extremal rays beyond the negative curves exist only for r <= 1:
        // the plane itself (H) and the ruling of the one-point blow-up.
        let mut test_set = exceptional.clone();
        if r == 0 {
            test_set.push(DivisorClass::hyperplane(0));
        } else if r == 1 {
            test_set.push(DivisorClass::from_i64(1, &[1])); // H - E1
        }
        test_set.sort();
        Ok(SurfaceModel {
            r,
            general_position,
            no_cuspidal_anticanonical,
            canonical: DivisorClass::from_i64(-3, &[-1; 8][..r]),
            exceptional,
            test_set,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Anticanonical degree `K^2 = 9 - r`.
    pub fn degree(&self) -> i64 {
        9 - self.r as i64
    }

    pub fn general_position(&self) -> bool {
        self.general_position
    }

    pub fn no_cuspidal_anticanonical(&self) -> bool {
        self.no_cuspidal_anticanonical
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn anticanonical(&self) -> DivisorClass {
        self.canonical.scale(&-Q::one())
    }

    pub fn exceptional_curves(&self) -> &[DivisorClass] {
        &self.exceptional
    }

    /// The classes against which nefness and ampleness are decided: the
    /// exceptional curves, extended for `r <= 1` where extremal rays of
    /// non-negative self-intersection exist.
    pub fn nef_test_set(&self) -> &[DivisorClass] {
        &self.test_set
    }

    fn check_rank(&self, d: &DivisorClass) -> Result<(), LatticeError> {
        if d.rank() != self.r {
            return Err(LatticeError::DimensionMismatch {
                expected: self.r,
                got: d.rank(),
            });
        }
        Ok(())
    }

    /// Intersection number `d1 . d2 = h1 h2 - sum e1_i e2_i`.
    pub fn intersect(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<Q, LatticeError> {
        self.check_rank(d1)?;
        self.check_rank(d2)?;
        let mut acc = &d1.h * &d2.h;
        for (a, b) in d1.e.iter().zip(&d2.e) {
            acc -= a * b;
        }
        Ok(acc)
    }

    pub fn self_intersection(&self, d: &DivisorClass) -> Result<Q, LatticeError> {
        self.intersect(d, d)
    }

    pub fn is_nef(&self, d: &DivisorClass) -> Result<PositivityCheck, LatticeError> {
        self.check_rank(d)?;
        for c in &self.test_set {
            if self.intersect(d, c)?.is_negative() {
                return Ok(PositivityCheck {
                    holds: false,
                    witness: Some(c.clone()),
                });
            }
        }
        Ok(PositivityCheck {
            holds: true,
            witness: None,
        })
    }

    /// Strict positivity against the test set plus `d^2 > 0`
    /// (Nakai-Moishezon form). A failing `d^2` yields no curve witness.
    pub fn is_ample(&self, d: &DivisorClass) -> Result<PositivityCheck, LatticeError> {
        self.check_rank(d)?;
        for c in &self.test_set {
            if !self.intersect(d, c)?.is_positive() {
                return Ok(PositivityCheck {
                    holds: false,
                    witness: Some(c.clone()),
                });
            }
        }
        if !self.self_intersection(d)?.is_positive() {
            return Ok(PositivityCheck {
                holds: false,
                witness: None,
            });
        }
        Ok(PositivityCheck {
            holds: true,
            witness: None,
        })
    }

    /// `sup { t >= 0 : base - t*dir nef }` for a nef `base`, as the minimum
    /// of `(base.C)/(dir.C)` over test classes met positively by `dir`.
    /// Also returns the binding class when finite.
    pub fn nef_threshold(
        &self,
        base: &DivisorClass,
        dir: &DivisorClass,
    ) -> Result<(NefThreshold, Option<DivisorClass>), LatticeError> {
        self.check_rank(base)?;
        self.check_rank(dir)?;
        let mut best: Option<(Q, DivisorClass)> = None;
        for c in &self.test_set {
            let dc = self.intersect(dir, c)?;
            if dc.is_positive() {
                let ratio = self.intersect(base, c)? / dc;
                if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                    best = Some((ratio, c.clone()));
                }
            }
        }
        Ok(match best {
            Some((t, c)) => (NefThreshold::Finite(ExactScalar::Rational(t)), Some(c)),
            None => (NefThreshold::Infinite, None),
        })
    }
}

/// The seven families of exceptional curves on `Bl_r P^2`, written as
/// `(d; m_1..m_k)` for `d*H - sum m_j E_{i_j}` over distinct indices.
const FAMILIES: [(i64, &[i64]); 7] = [
    (0, &[-1]),
    (1, &[1, 1]),
    (2, &[1, 1, 1, 1, 1]),
    (3, &[2, 1, 1, 1, 1, 1, 1]),
    (4, &[2, 2, 2, 1, 1, 1, 1, 1]),
    (5, &[2, 2, 2, 2, 2, 2, 1, 1]),
    (6, &[3, 2, 2, 2, 2, 2, 2, 2]),
];

/// All classes `C` with `C^2 = -1`, `C.(-K) = 1`, in lexicographic order.
pub fn enumerate_exceptional(r: usize) -> Result<Vec<DivisorClass>, LatticeError> {
    if r > 8 {
        return Err(LatticeError::InvalidRank(r));
    }
    let mut out: Vec<DivisorClass> = Vec::new();
    for (d, pattern) in FAMILIES {
        if pattern.len() > r {
            continue;
        }
        // group the multiplicity pattern into (value, count) runs and
        // distribute each run over distinct indices
        let mut groups: Vec<(i64, usize)> = Vec::new();
        for &m in pattern {
            match groups.last_mut() {
                Some((v, n)) if *v == m => *n += 1,
                _ => groups.push((m, 1)),
            }
        }
        let mut partial: Vec<Vec<i64>> = vec![vec![0; r]];
        for (value, count) in groups {
            let mut next = Vec::new();
            for assignment in partial {
                let free: Vec<usize> =
                    (0..r).filter(|&i| assignment[i] == 0).collect();
                for chosen in free.into_iter().combinations(count) {
                    let mut a = assignment.clone();
                    for i in chosen {
                        a[i] = value;
                    }
                    next.push(a);
                }
            }
            partial = next;
        }
        for m in partial {
            out.push(DivisorClass::new(
                q(d, 1),
                m.into_iter().map(|v| q(v, 1)).collect(),
            ));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}
