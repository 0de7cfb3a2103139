//! Intervals with exact algebraic endpoints.

use super::{Algebraic, Q};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "bound", rename_all = "snake_case")]
pub enum Endpoint {
    NegInf,
    PosInf,
    Finite { value: Algebraic, closed: bool },
}

impl Endpoint {
    pub fn at_open(v: Algebraic) -> Self {
        Endpoint::Finite {
            value: v,
            closed: false,
        }
    }

    pub fn at_closed(v: Algebraic) -> Self {
        Endpoint::Finite {
            value: v,
            closed: true,
        }
    }

    pub fn value(&self) -> Option<&Algebraic> {
        match self {
            Endpoint::Finite { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Endpoint::Finite { closed: true, .. })
    }

    /// Order as *lower* bounds: smaller is less restrictive. At equal
    /// values a closed bound admits more, so it sorts first.
    fn cmp_as_lo(&self, other: &Self) -> Ordering {
        use Endpoint::*;
        match (self, other) {
            (NegInf, NegInf) => Ordering::Equal,
            (NegInf, _) => Ordering::Less,
            (_, NegInf) => Ordering::Greater,
            (PosInf, PosInf) => Ordering::Equal,
            (PosInf, _) => Ordering::Greater,
            (_, PosInf) => Ordering::Less,
            (Finite { value: a, closed: ca }, Finite { value: b, closed: cb }) => {
                a.cmp(b).then_with(|| cb.cmp(ca))
            }
        }
    }

    /// Order as *upper* bounds: at equal values an open bound admits less,
    /// so it sorts first.
    fn cmp_as_hi(&self, other: &Self) -> Ordering {
        use Endpoint::*;
        match (self, other) {
            (PosInf, PosInf) => Ordering::Equal,
            (PosInf, _) => Ordering::Greater,
            (_, PosInf) => Ordering::Less,
            (NegInf, NegInf) => Ordering::Equal,
            (NegInf, _) => Ordering::Less,
            (_, NegInf) => Ordering::Greater,
            (Finite { value: a, closed: ca }, Finite { value: b, closed: cb }) => {
                a.cmp(b).then_with(|| ca.cmp(cb))
            }
        }
    }
}

/// An interval of the real line with exact algebraic endpoints; the empty
/// interval is a distinguished value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "interval", rename_all = "snake_case")]
// endpoints are intentionally inline: intervals are few and short-lived
#[allow(clippy::large_enum_variant)]
pub enum AlgebraicInterval {
    Empty,
    Span { lo: Endpoint, hi: Endpoint },
}

impl AlgebraicInterval {
    /// Normalising constructor: collapses inverted or degenerate-open data
    /// to `Empty`.
    pub fn new(lo: Endpoint, hi: Endpoint) -> Self {
        if let (Some(a), Some(b)) = (lo.value(), hi.value()) {
            match a.cmp(b) {
                Ordering::Greater => return AlgebraicInterval::Empty,
                Ordering::Equal => {
                    if !(lo.is_closed() && hi.is_closed()) {
                        return AlgebraicInterval::Empty;
                    }
                }
                Ordering::Less => {}
            }
        }
        if matches!(lo, Endpoint::PosInf) || matches!(hi, Endpoint::NegInf) {
            return AlgebraicInterval::Empty;
        }
        AlgebraicInterval::Span { lo, hi }
    }

    pub fn full() -> Self {
        AlgebraicInterval::Span {
            lo: Endpoint::NegInf,
            hi: Endpoint::PosInf,
        }
    }

    pub fn open(lo: Algebraic, hi: Algebraic) -> Self {
        Self::new(Endpoint::at_open(lo), Endpoint::at_open(hi))
    }

    pub fn closed(lo: Algebraic, hi: Algebraic) -> Self {
        Self::new(Endpoint::at_closed(lo), Endpoint::at_closed(hi))
    }

    pub fn point(v: Algebraic) -> Self {
        Self::closed(v.clone(), v)
    }

    pub fn open_rat(lo: Q, hi: Q) -> Self {
        Self::open(Algebraic::rational(lo), Algebraic::rational(hi))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, AlgebraicInterval::Empty)
    }

    pub fn endpoints(&self) -> Option<(&Endpoint, &Endpoint)> {
        match self {
            AlgebraicInterval::Empty => None,
            AlgebraicInterval::Span { lo, hi } => Some((lo, hi)),
        }
    }

    pub fn contains(&self, x: &Algebraic) -> bool {
        let Some((lo, hi)) = self.endpoints() else {
            return false;
        };
        let lo_ok = match lo {
            Endpoint::NegInf => true,
            Endpoint::PosInf => false,
            Endpoint::Finite { value, closed } => match x.cmp(value) {
                Ordering::Greater => true,
                Ordering::Equal => *closed,
                Ordering::Less => false,
            },
        };
        let hi_ok = match hi {
            Endpoint::PosInf => true,
            Endpoint::NegInf => false,
            Endpoint::Finite { value, closed } => match x.cmp(value) {
                Ordering::Less => true,
                Ordering::Equal => *closed,
                Ordering::Greater => false,
            },
        };
        lo_ok && hi_ok
    }

    pub fn contains_rat(&self, x: &Q) -> bool {
        self.contains(&Algebraic::rational(x.clone()))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (Some((lo1, hi1)), Some((lo2, hi2))) = (self.endpoints(), other.endpoints()) else {
            return AlgebraicInterval::Empty;
        };
        let lo = if lo1.cmp_as_lo(lo2) == Ordering::Greater {
            lo1.clone()
        } else {
            lo2.clone()
        };
        let hi = if hi1.cmp_as_hi(hi2) == Ordering::Less {
            hi1.clone()
        } else {
            hi2.clone()
        };
        Self::new(lo, hi)
    }

    /// Topological interior: finite endpoints become open; isolated points
    /// vanish.
    pub fn interior(&self) -> Self {
        match self {
            AlgebraicInterval::Empty => AlgebraicInterval::Empty,
            AlgebraicInterval::Span { lo, hi } => {
                let open = |e: &Endpoint| match e {
                    Endpoint::Finite { value, .. } => Endpoint::at_open(value.clone()),
                    other => other.clone(),
                };
                Self::new(open(lo), open(hi))
            }
        }
    }

    /// Topological closure: finite endpoints become closed.
    pub fn closure(&self) -> Self {
        match self {
            AlgebraicInterval::Empty => AlgebraicInterval::Empty,
            AlgebraicInterval::Span { lo, hi } => {
                let close = |e: &Endpoint| match e {
                    Endpoint::Finite { value, .. } => Endpoint::at_closed(value.clone()),
                    other => other.clone(),
                };
                Self::new(close(lo), close(hi))
            }
        }
    }

    /// True if the union of `self` and `other` is a single interval
    /// (overlap or touching with at least one closed side).
    fn joinable(&self, other: &Self) -> bool {
        let (Some((_, hi1)), Some((lo2, _))) = (self.endpoints(), other.endpoints()) else {
            return false;
        };
        // assumes self sorts before other by lower bound
        match (hi1, lo2) {
            (Endpoint::PosInf, _) | (_, Endpoint::NegInf) => true,
            (Endpoint::Finite { value: a, closed: ca }, Endpoint::Finite { value: b, closed: cb }) => {
                match a.cmp(b) {
                    Ordering::Greater => true,
                    Ordering::Equal => *ca || *cb,
                    Ordering::Less => false,
                }
            }
            _ => false,
        }
    }

    /// Union of a list of intervals as a disjoint increasing list.
    pub fn union_all(mut parts: Vec<Self>) -> Vec<Self> {
        parts.retain(|p| !p.is_empty());
        parts.sort_by(|a, b| {
            let (la, _) = a.endpoints().unwrap();
            let (lb, _) = b.endpoints().unwrap();
            la.cmp_as_lo(lb)
        });
        let mut out: Vec<Self> = Vec::new();
        for p in parts {
            match out.last_mut() {
                Some(last) if last.joinable(&p) => {
                    let (lo1, hi1) = last.endpoints().unwrap();
                    let (_, hi2) = p.endpoints().unwrap();
                    let hi = if hi1.cmp_as_hi(hi2) == Ordering::Greater {
                        hi1.clone()
                    } else {
                        hi2.clone()
                    };
                    *last = Self::new(lo1.clone(), hi);
                }
                _ => out.push(p),
            }
        }
        out
    }
}

impl fmt::Display for AlgebraicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraicInterval::Empty => write!(f, "{{}}"),
            AlgebraicInterval::Span { lo, hi } => {
                match lo {
                    Endpoint::NegInf => write!(f, "(-inf")?,
                    Endpoint::PosInf => write!(f, "(+inf")?,
                    Endpoint::Finite { value, closed } => {
                        write!(f, "{}{}", if *closed { "[" } else { "(" }, value)?
                    }
                }
                write!(f, ", ")?;
                match hi {
                    Endpoint::PosInf => write!(f, "+inf)"),
                    Endpoint::NegInf => write!(f, "-inf)"),
                    Endpoint::Finite { value, closed } => {
                        write!(f, "{}{}", value, if *closed { "]" } else { ")" })
                    }
                }
            }
        }
    }
}
