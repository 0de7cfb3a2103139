//! Univariate polynomials with exact rational coefficients, plus the
//! Sturm-sequence machinery used for root counting.

use super::{sign_q, ExactError, ExactScalar, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A polynomial with rational coefficients, stored low degree first.
///
/// Arithmetic is unrestricted; the degree cap (4) is enforced only by the
/// root-isolation and sign-system entry points, which is where a general
/// algebraic-number tower would otherwise be needed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatPoly {
    #[serde(with = "super::qserde::vec")]
    coeffs: Vec<Q>,
    var: String,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Q>, var: &str) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly {
            coeffs,
            var: var.to_string(),
        }
    }

    pub fn from_i64(coeffs: &[i64], var: &str) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Q::from(num_bigint::BigInt::from(c)))
                .collect(),
            var,
        )
    }

    pub fn zero(var: &str) -> Self {
        Self::new(vec![], var)
    }

    pub fn constant(c: Q, var: &str) -> Self {
        Self::new(vec![c], var)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluation at an [`ExactScalar`]; stays inside the scalar's field.
    pub fn eval_scalar(&self, x: &ExactScalar) -> Result<ExactScalar, ExactError> {
        let mut acc = ExactScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.try_mul(x)?.try_add(&ExactScalar::Rational(c.clone()))?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Q::from(num_bigint::BigInt::from(i)))
            .collect();
        Self::new(coeffs, &self.var)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect(), &self.var)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Q::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Self::new(coeffs, &self.var)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.var);
        }
        let mut coeffs = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs, &self.var)
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect(), &self.var)
    }

    /// Exact Euclidean division; errors on a zero divisor.
    pub fn div_rem(&self, other: &Self) -> Result<(Self, Self), ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let dd = other.degree().unwrap();
        let lead = other.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Q::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lead;
            for (j, oc) in other.coeffs.iter().enumerate() {
                let idx = k + j;
                let v = &rem[idx] - &c * oc;
                rem[idx] = v;
            }
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
            quo[k] = c;
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((Self::new(quo, &self.var), Self::new(rem, &self.var)))
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("non-zero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Sturm chain: `p, p', -rem(p, p'), ...`
    pub fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).unwrap();
            chain.push(r.neg());
        }
        chain
    }

    /// Sign variations of the chain at a rational point.
    fn variations_at(chain: &[Self], x: &Q) -> usize {
        count_variations(chain.iter().map(|p| sign_q(&p.eval(x))))
    }

    /// Sign variations of the chain at +inf / -inf via leading coefficients.
    fn variations_at_inf(chain: &[Self], positive: bool) -> usize {
        count_variations(chain.iter().map(|p| match p.degree() {
            None => 0,
            Some(d) => {
                let s = sign_q(p.leading().unwrap());
                if positive || d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }))
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots_half_open(&self, lo: &Q, hi: &Q) -> usize {
        let chain = self.sturm_chain();
        Self::variations_at(&chain, lo) - Self::variations_at(&chain, hi)
    }

    /// Number of distinct real roots in the open interval `(lo, hi)`,
    /// assuming neither endpoint is a root.
    pub fn count_roots_open(&self, lo: &Q, hi: &Q) -> usize {
        debug_assert!(!self.eval(hi).is_zero());
        self.count_roots_half_open(lo, hi)
    }

    /// Total number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        let chain = self.sturm_chain();
        Self::variations_at_inf(&chain, false) - Self::variations_at_inf(&chain, true)
    }

    /// Cauchy bound: all real roots lie in `(-M, M)`.
    pub fn root_bound(&self) -> Q {
        let lead = match self.leading() {
            None => return Q::one(),
            Some(l) => l.abs(),
        };
        let mut m = Q::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let r = c.abs() / &lead;
            if r > m {
                m = r;
            }
        }
        m + Q::one()
    }
}

fn count_variations<I: Iterator<Item = i32>>(signs: I) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs {
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = super::qserde::rat_to_string(&c.abs());
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !c.abs().is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "{}", self.var)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
