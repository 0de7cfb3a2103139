//! Exact scalar arithmetic and real-algebraic sign analysis.
//!
//! Everything downstream (lattice tests, certificates, region solving)
//! reduces its decisions to exact comparisons made here. The kernel knows
//! three kinds of numbers:
//!
//! * arbitrary-precision rationals (`num_rational::BigRational`),
//! * elements `a + b*sqrt(d)` of a real quadratic field ([`ExactScalar`]),
//! * real roots of rational polynomials of degree 3 or 4, represented by
//!   a defining polynomial plus an isolating rational interval
//!   ([`IsolatedRoot`]).
//!
//! Mixed-field *arithmetic* (`sqrt(10)` with `sqrt(7)` in one expression)
//! is intentionally unsupported; mixed-field *comparison* is exact and
//! total, via sign-tracked squaring.

mod interval;
mod poly;
mod roots;
mod scalar;
pub(crate) mod signsys;

pub use interval::{AlgebraicInterval, Endpoint};
pub use poly::RatPoly;
pub use roots::{isolate_roots, Algebraic, IsolatedRoot, MAX_DEGREE};
pub use scalar::{scalar_cmp, ExactScalar};
pub use signsys::{solve_sign_system, Constraint, Rel};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

/// Convenience constructor for small rationals.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor for small integers as rationals.
pub fn qi(n: i64) -> Q {
    Q::from(BigInt::from(n))
}

pub(crate) fn sign_q(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("arithmetic across distinct quadratic fields (sqrt({0}) vs sqrt({1})) is unsupported")]
    MixedField(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("indeterminate sign everywhere: zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial degree {0} exceeds the supported cap of {1}")]
    DegreeTooHigh(usize, usize),
    #[error("constraints use different indeterminates: {0} vs {1}")]
    VariableMismatch(String, String),
    #[error("empty domain")]
    EmptyDomain,
    #[error("malformed scalar expression: {0}")]
    Parse(String),
}

/// Serde helpers rendering `BigRational` as `"p/q"` strings (or plain
/// integers when the denominator is 1). JSON floats are rejected: the wire
/// format stays exact.
pub mod qserde {
    use super::Q;
    use num_bigint::BigInt;
    use serde::{de, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn rat_to_string(x: &Q) -> String {
        if x.denom() == &BigInt::from(1) {
            x.numer().to_string()
        } else {
            format!("{}/{}", x.numer(), x.denom())
        }
    }

    pub fn rat_from_str(s: &str) -> Result<Q, String> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|e| e.to_string())?;
                let d = BigInt::from_str(d.trim()).map_err(|e| e.to_string())?;
                if d == BigInt::from(0) {
                    return Err("zero denominator".into());
                }
                Ok(Q::new(n, d))
            }
            None => Ok(Q::from(BigInt::from_str(s).map_err(|e| e.to_string())?)),
        }
    }

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        struct V;
        impl<'de> de::Visitor<'de> for V {
            type Value = Q;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an exact rational as \"p/q\" string or integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
                rat_from_str(v).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
                Ok(Q::from(BigInt::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
                Ok(Q::from(BigInt::from(v)))
            }
            fn visit_f64<E: de::Error>(self, _: f64) -> Result<Q, E> {
                Err(E::custom("floating point rejected; use \"p/q\""))
            }
        }
        d.deserialize_any(V)
    }

    pub mod vec {
        use super::Q;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        #[derive(Serialize, Deserialize)]
        struct W(#[serde(with = "super::super::qserde")] Q);

        pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
            let w: Vec<W> = xs.iter().cloned().map(W).collect();
            w.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
            let w: Vec<W> = Vec::deserialize(d)?;
            Ok(w.into_iter().map(|W(x)| x).collect())
        }
    }

    pub mod opt {
        use super::Q;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        #[derive(Serialize, Deserialize)]
        struct W(#[serde(with = "super::super::qserde")] Q);

        pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
            x.clone().map(W).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
            let w: Option<W> = Option::deserialize(d)?;
            Ok(w.map(|W(x)| x))
        }
    }
}
