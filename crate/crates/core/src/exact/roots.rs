//! Exact real-root isolation for rational polynomials of degree at most 4.
//!
//! Roots of degree <= 2 factors come out in closed quadratic form; cubic and
//! quartic irrationals are carried as a defining polynomial plus an isolating
//! rational interval, refined on demand. All comparisons are exact.

use super::{sign_q, ExactError, ExactScalar, Q, RatPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Degree cap for root isolation and sign-system solving.
pub const MAX_DEGREE: usize = 4;

/// A real root carried as (squarefree defining polynomial, isolating
/// interval). Invariants: the polynomial does not vanish at either endpoint
/// and has exactly one root in the open interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatedRoot {
    pub poly: RatPoly,
    #[serde(with = "super::qserde")]
    pub lo: Q,
    #[serde(with = "super::qserde")]
    pub hi: Q,
}

impl IsolatedRoot {
    /// One bisection step. Returns `Ok(narrowed)` or `Err(exact)` when the
    /// midpoint happens to be the root itself.
    fn step(&self) -> Result<IsolatedRoot, Q> {
        let mid = (&self.lo + &self.hi) / Q::from(BigInt::from(2));
        let fm = self.poly.eval(&mid);
        if fm.is_zero() {
            return Err(mid);
        }
        let flo = self.poly.eval(&self.lo);
        let (lo, hi) = if sign_q(&flo) != sign_q(&fm) {
            (self.lo.clone(), mid)
        } else {
            (mid, self.hi.clone())
        };
        Ok(IsolatedRoot {
            poly: self.poly.clone(),
            lo,
            hi,
        })
    }

    /// Bounds after `steps` extra bisections; `(m, m)` if the root turns out
    /// to be the rational `m`.
    pub fn refined_bounds(&self, steps: u32) -> (Q, Q) {
        let mut cur = self.clone();
        for _ in 0..steps {
            match cur.step() {
                Ok(next) => cur = next,
                Err(exact) => return (exact.clone(), exact),
            }
        }
        (cur.lo, cur.hi)
    }

    /// Exact sign of `other` evaluated at this root.
    pub fn sign_of(&self, other: &RatPoly) -> i32 {
        if other.is_zero() {
            return 0;
        }
        let g = self.poly.gcd(other);
        if g.degree().unwrap_or(0) >= 1 && g.count_roots_half_open(&self.lo, &self.hi) >= 1 {
            // the shared root inside the isolating interval is this root
            return 0;
        }
        // Shrink the interval until `other` is sign-constant on it.
        let mut cur = self.clone();
        loop {
            let olo = other.eval(&cur.lo);
            let ohi = other.eval(&cur.hi);
            if !olo.is_zero()
                && !ohi.is_zero()
                && other.count_roots_half_open(&cur.lo, &cur.hi) == 0
            {
                return sign_q(&olo);
            }
            match cur.step() {
                Ok(next) => cur = next,
                Err(exact) => return sign_q(&other.eval(&exact)),
            }
        }
    }

    pub fn approx_f64(&self) -> f64 {
        let (lo, hi) = self.refined_bounds(60);
        ((lo + hi) / Q::from(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl fmt::Display for IsolatedRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "root of {} in ({}, {})",
            self.poly,
            super::qserde::rat_to_string(&self.lo),
            super::qserde::rat_to_string(&self.hi)
        )
    }
}

/// A real algebraic number: closed form where we have one, isolated
/// otherwise. Ordering is exact.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "form", content = "value", rename_all = "snake_case")]
pub enum Algebraic {
    Exact(ExactScalar),
    Root(IsolatedRoot),
}

impl Algebraic {
    pub fn rational(x: Q) -> Self {
        Algebraic::Exact(ExactScalar::Rational(x))
    }

    pub fn as_exact(&self) -> Option<&ExactScalar> {
        match self {
            Algebraic::Exact(s) => Some(s),
            Algebraic::Root(_) => None,
        }
    }

    pub fn approx_f64(&self) -> f64 {
        match self {
            Algebraic::Exact(s) => s.approx_f64(),
            Algebraic::Root(r) => r.approx_f64(),
        }
    }

    /// Rational enclosure, shrinking as `level` grows.
    pub fn bounds(&self, level: u32) -> (Q, Q) {
        match self {
            Algebraic::Exact(s) => s.rational_bounds(level),
            Algebraic::Root(r) => r.refined_bounds(level),
        }
    }

    /// Exact sign of a rational polynomial evaluated at this number.
    pub fn sign_of_poly(&self, p: &RatPoly) -> i32 {
        match self {
            Algebraic::Exact(s) => p
                .eval_scalar(s)
                .expect("rational coefficients stay in field")
                .sign(),
            Algebraic::Root(r) => r.sign_of(p),
        }
    }

    fn cmp_exact_root(s: &ExactScalar, r: &IsolatedRoot) -> Ordering {
        // equality: s is a root of r.poly lying in r's interval
        let at_s = r.poly.eval_scalar(s).expect("rational coefficients");
        if at_s.is_zero()
            && *s > ExactScalar::Rational(r.lo.clone())
            && *s < ExactScalar::Rational(r.hi.clone())
        {
            return Ordering::Equal;
        }
        let mut level = 4u32;
        loop {
            let (lo, hi) = r.refined_bounds(level);
            if lo == hi {
                return s.cmp(&ExactScalar::Rational(lo));
            }
            if *s <= ExactScalar::Rational(lo.clone()) {
                return Ordering::Less;
            }
            if *s >= ExactScalar::Rational(hi.clone()) {
                return Ordering::Greater;
            }
            level += 8;
        }
    }

    fn cmp_root_root(r1: &IsolatedRoot, r2: &IsolatedRoot) -> Ordering {
        // equality via a shared factor inside both isolating intervals
        let g = r1.poly.gcd(&r2.poly);
        if g.degree().unwrap_or(0) >= 1 {
            let lo = if r1.lo >= r2.lo { &r1.lo } else { &r2.lo };
            let hi = if r1.hi <= r2.hi { &r1.hi } else { &r2.hi };
            if lo < hi && g.count_roots_half_open(lo, hi) >= 1 {
                return Ordering::Equal;
            }
        }
        let mut level = 4u32;
        loop {
            let (l1, h1) = r1.refined_bounds(level);
            let (l2, h2) = r2.refined_bounds(level);
            if l1 == h1 {
                return Self::cmp_exact_root(&ExactScalar::Rational(l1), r2);
            }
            if l2 == h2 {
                return Self::cmp_exact_root(&ExactScalar::Rational(l2), r1).reverse();
            }
            if h1 <= l2 {
                return Ordering::Less;
            }
            if h2 <= l1 {
                return Ordering::Greater;
            }
            level += 8;
        }
    }
}

impl PartialEq for Algebraic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Algebraic {}

impl Ord for Algebraic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Algebraic::Exact(a), Algebraic::Exact(b)) => a.cmp(b),
            (Algebraic::Exact(a), Algebraic::Root(b)) => Self::cmp_exact_root(a, b),
            (Algebraic::Root(a), Algebraic::Exact(b)) => Self::cmp_exact_root(b, a).reverse(),
            (Algebraic::Root(a), Algebraic::Root(b)) => Self::cmp_root_root(a, b),
        }
    }
}

impl PartialOrd for Algebraic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Algebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebraic::Exact(s) => write!(f, "{s}"),
            Algebraic::Root(r) => write!(f, "{r}"),
        }
    }
}

/// All real roots of `p` in increasing order, with multiplicities.
///
/// Roots of the degree <= 2 factors are returned in closed form; cubic and
/// quartic irrationals as isolated roots. Errors on the zero polynomial and
/// on degree > 4.
pub fn isolate_roots(p: &RatPoly) -> Result<Vec<(Algebraic, u32)>, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let deg = p.degree().unwrap();
    if deg > MAX_DEGREE {
        return Err(ExactError::DegreeTooHigh(deg, MAX_DEGREE));
    }
    let mut out: Vec<(Algebraic, u32)> = Vec::new();
    for (factor, mult) in squarefree_factors(p) {
        for root in roots_of_squarefree(&factor) {
            out.push((root, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Yun's squarefree factorisation: returns `(factor_i, i)` with
/// `p = lc * prod factor_i^i` and each factor squarefree.
fn squarefree_factors(p: &RatPoly) -> Vec<(RatPoly, u32)> {
    let p = p.monic();
    if p.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    let dp = p.derivative();
    let g = p.gcd(&dp);
    if g.degree().unwrap_or(0) == 0 {
        return vec![(p, 1)];
    }
    let mut factors = Vec::new();
    let mut w = p.div_rem(&g).unwrap().0;
    let mut y = dp.div_rem(&g).unwrap().0;
    let mut i = 1u32;
    while w.degree().unwrap_or(0) >= 1 {
        let z = y.sub(&w.derivative());
        let gi = w.gcd(&z);
        if gi.degree().unwrap_or(0) >= 1 {
            factors.push((gi.clone(), i));
        }
        w = w.div_rem(&gi).unwrap().0;
        y = z.div_rem(&gi).unwrap().0;
        i += 1;
    }
    factors
}

/// Real roots of a squarefree polynomial of degree <= 4.
fn roots_of_squarefree(f: &RatPoly) -> Vec<Algebraic> {
    let mut f = f.monic();
    let mut roots: Vec<Algebraic> = Vec::new();

    // zero root
    if f.coeffs().first().is_some_and(|c| c.is_zero()) {
        roots.push(Algebraic::rational(Q::zero()));
        let x = RatPoly::new(vec![Q::zero(), Q::one()], f.var());
        f = f.div_rem(&x).unwrap().0;
    }
    // rational roots (bounded candidate search)
    for r in rational_roots(&f) {
        let lin = RatPoly::new(vec![-r.clone(), Q::one()], f.var());
        f = f.div_rem(&lin).unwrap().0;
        roots.push(Algebraic::rational(r));
    }
    match f.degree().unwrap_or(0) {
        0 => {}
        1 => {
            let c = f.coeffs();
            roots.push(Algebraic::rational(-(&c[0] / &c[1])));
        }
        2 => roots.extend(quadratic_roots(&f)),
        _ => {
            for (lo, hi) in isolate_intervals(&f) {
                roots.push(Algebraic::Root(IsolatedRoot {
                    poly: f.clone(),
                    lo,
                    hi,
                }));
            }
        }
    }
    roots
}

fn quadratic_roots(f: &RatPoly) -> Vec<Algebraic> {
    let c = f.coeffs();
    let (a, b, cc) = (&c[2], &c[1], &c[0]);
    let disc = b * b - Q::from(BigInt::from(4)) * a * cc;
    if disc.is_negative() {
        return vec![];
    }
    match ExactScalar::sqrt_of(&disc) {
        Ok(sq) => {
            let two_a = Q::from(BigInt::from(2)) * a;
            let mb = ExactScalar::Rational(-b.clone());
            let r1 = mb.try_sub(&sq).unwrap().mul_rat(&two_a.recip());
            let r2 = mb.try_add(&sq).unwrap().mul_rat(&two_a.recip());
            let mut rs = vec![Algebraic::Exact(r1), Algebraic::Exact(r2)];
            rs.sort();
            rs.dedup();
            rs
        }
        // radicand too large for the quadratic-field representation:
        // fall back to isolated form
        Err(_) => isolate_intervals(f)
            .into_iter()
            .map(|(lo, hi)| {
                Algebraic::Root(IsolatedRoot {
                    poly: f.clone(),
                    lo,
                    hi,
                })
            })
            .collect(),
    }
}

/// Rational roots of a squarefree polynomial with non-zero constant term,
/// via the rational root theorem. The divisor search is capped; a miss here
/// only means a root is reported in isolated form instead of closed form.
fn rational_roots(f: &RatPoly) -> Vec<Q> {
    if f.degree().unwrap_or(0) < 1 {
        return vec![];
    }
    // clear denominators to integer coefficients
    let mut lcm = BigInt::one();
    for c in f.coeffs() {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * Q::from(lcm.clone())).to_integer())
        .collect();
    let a0 = ints.first().unwrap().abs();
    let an = ints.last().unwrap().abs();
    const CAP: u64 = 1_000_000_000_000;
    let (a0, an) = match (a0.to_u64(), an.to_u64()) {
        (Some(a), Some(b)) if a > 0 && a <= CAP && b <= CAP => (a, b),
        _ => return vec![],
    };
    let mut found = Vec::new();
    for p in divisors(a0) {
        for q in divisors(an) {
            for sign in [1i64, -1] {
                let cand = Q::new(BigInt::from(sign) * BigInt::from(p), BigInt::from(q));
                if f.eval(&cand).is_zero() && !found.contains(&cand) {
                    found.push(cand);
                }
            }
        }
    }
    found
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out
}

/// Isolating intervals for a squarefree polynomial: each returned interval
/// contains exactly one root and the polynomial is non-zero at endpoints.
fn isolate_intervals(f: &RatPoly) -> Vec<(Q, Q)> {
    let m = f.root_bound();
    let mut stack = vec![(-m.clone(), m)];
    let mut out = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        match f.count_roots_half_open(&lo, &hi) {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mut mid = (&lo + &hi) / Q::from(BigInt::from(2));
                // avoid splitting exactly at a root (possible only when the
                // rational-root search was capped)
                while f.eval(&mid).is_zero() {
                    mid = (&lo + &mid) / Q::from(BigInt::from(2));
                }
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}
