//! Exact solving of one-variable polynomial sign systems.
//!
//! Given constraints `p_i(t) REL_i 0` on a domain interval, the solution set
//! is computed by cell decomposition: the roots of all the `p_i` split the
//! domain into cells on which every sign is constant, each open cell is
//! decided at a rational sample point, and each breakpoint is decided by an
//! exact sign evaluation.

use super::{
    isolate_roots, sign_q, Algebraic, AlgebraicInterval, Endpoint, ExactError, RatPoly, MAX_DEGREE,
};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rel {
    Gt,
    Ge,
    Lt,
    Le,
}

impl Rel {
    pub fn holds(self, sign: i32) -> bool {
        match self {
            Rel::Gt => sign > 0,
            Rel::Ge => sign >= 0,
            Rel::Lt => sign < 0,
            Rel::Le => sign <= 0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Gt => ">",
            Rel::Ge => ">=",
            Rel::Lt => "<",
            Rel::Le => "<=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub poly: RatPoly,
    pub rel: Rel,
}

impl Constraint {
    pub fn new(poly: RatPoly, rel: Rel) -> Self {
        Constraint { poly, rel }
    }

    pub fn holds_at_rat(&self, x: &super::Q) -> bool {
        self.rel.holds(sign_q(&self.poly.eval(x)))
    }

    fn holds_at(&self, x: &Algebraic) -> bool {
        self.rel.holds(x.sign_of_poly(&self.poly))
    }
}

/// A rational strictly between two algebraic numbers (either side may be
/// absent, meaning unbounded).
pub(crate) fn rational_between(lo: Option<&Algebraic>, hi: Option<&Algebraic>) -> super::Q {
    use num_traits::{One, Zero};
    let one = super::Q::one();
    let two = super::Q::from(num_bigint::BigInt::from(2));
    match (lo, hi) {
        (None, None) => super::Q::zero(),
        (None, Some(b)) => b.bounds(4).0 - one,
        (Some(a), None) => a.bounds(4).1 + one,
        (Some(a), Some(b)) => {
            let mut level = 4u32;
            loop {
                let (_, ahi) = a.bounds(level);
                let (blo, _) = b.bounds(level);
                if ahi < blo {
                    return (ahi + blo) / two;
                }
                level += 8;
            }
        }
    }
}

/// Solves `p_i(t) REL_i 0` for all `i` simultaneously over `domain`.
///
/// Returns the solution set as a disjoint, increasing list of intervals with
/// exact algebraic endpoints. All polynomials must share one indeterminate
/// and have degree at most [`MAX_DEGREE`]; the domain must be non-empty.
pub fn solve_sign_system(
    constraints: &[Constraint],
    domain: &AlgebraicInterval,
) -> Result<Vec<AlgebraicInterval>, ExactError> {
    let Some((dlo, dhi)) = domain.endpoints() else {
        return Err(ExactError::EmptyDomain);
    };

    let mut active: Vec<&Constraint> = Vec::new();
    let mut var: Option<&str> = None;
    for c in constraints {
        match var {
            None => var = Some(c.poly.var()),
            Some(v) if v != c.poly.var() => {
                return Err(ExactError::VariableMismatch(
                    v.to_string(),
                    c.poly.var().to_string(),
                ))
            }
            _ => {}
        }
        match c.poly.degree() {
            None => {
                // zero polynomial: identically satisfied or identically not
                if !c.rel.holds(0) {
                    return Ok(vec![]);
                }
            }
            Some(0) => {
                if !c.rel.holds(sign_q(c.poly.leading().unwrap())) {
                    return Ok(vec![]);
                }
            }
            Some(d) if d > MAX_DEGREE => return Err(ExactError::DegreeTooHigh(d, MAX_DEGREE)),
            Some(_) => active.push(c),
        }
    }

    // Breakpoints: roots of the active polynomials inside the closure of the
    // domain, plus the finite domain endpoints themselves.
    let in_closure = |x: &Algebraic| {
        dlo.value().is_none_or(|v| x.cmp(v) != Ordering::Less)
            && dhi.value().is_none_or(|v| x.cmp(v) != Ordering::Greater)
    };
    let mut seq: Vec<Algebraic> = Vec::new();
    for c in &active {
        for (root, _) in isolate_roots(&c.poly)? {
            if in_closure(&root) {
                seq.push(root);
            }
        }
    }
    seq.extend(dlo.value().cloned());
    seq.extend(dhi.value().cloned());
    seq.sort();
    seq.dedup();

    let mut parts: Vec<AlgebraicInterval> = Vec::new();

    // open cells between consecutive breakpoints (outermost sides keep the
    // domain's own endpoints)
    let mut cells: Vec<(Endpoint, Endpoint)> = Vec::new();
    if seq.is_empty() {
        cells.push((dlo.clone(), dhi.clone()));
    } else {
        cells.push((dlo.clone(), Endpoint::at_open(seq[0].clone())));
        for w in seq.windows(2) {
            cells.push((
                Endpoint::at_open(w[0].clone()),
                Endpoint::at_open(w[1].clone()),
            ));
        }
        cells.push((Endpoint::at_open(seq.last().unwrap().clone()), dhi.clone()));
    }
    for (lo, hi) in cells {
        let cell = AlgebraicInterval::new(lo, hi);
        let Some((clo, chi)) = cell.endpoints() else {
            continue;
        };
        let sample = rational_between(clo.value(), chi.value());
        debug_assert!(cell.contains_rat(&sample));
        if active.iter().all(|c| c.holds_at_rat(&sample)) {
            parts.push(cell);
        }
    }

    // breakpoints themselves
    for s in seq {
        if domain.contains(&s) && active.iter().all(|c| c.holds_at(&s)) {
            parts.push(AlgebraicInterval::point(s));
        }
    }

    Ok(AlgebraicInterval::union_all(parts))
}
