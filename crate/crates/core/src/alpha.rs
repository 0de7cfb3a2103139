//! Alpha-invariant bookkeeping: certified bounds with provenance, scaling,
//! perturbation, the degree-one del Pezzo lower bound, and flag-ideal upper
//! bounds (plain and log).
//!
//! The alpha invariant itself is an infimum over all linear systems and is
//! never computed from scratch here; the module only transports bounds that
//! come with a stated justification.

use crate::exact::{qserde, ExactError, ExactScalar, Q};
use crate::picard::SurfaceModel;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlphaError {
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("lower bound exceeds upper bound")]
    InvertedBounds,
    #[error("lower bound must be non-negative (log canonical hypothesis)")]
    NegativeLower,
    #[error("flag resolution data needs at least one row")]
    EmptyData,
    #[error("row {0}: valuation c must be positive")]
    BadValuation(usize),
    #[error("row {0}: boundary multiplicity d must be non-negative")]
    BadBoundaryMultiplicity(usize),
    #[error("beta must lie in [0, 1]")]
    BadBeta,
    #[error("lambda outside [0, 2): the lower-bound formula does not apply")]
    LambdaOutOfDomain,
    #[error("surface does not declare the no-cuspidal-anticanonical genericity")]
    GenericityNotDeclared,
    #[error("lower bound is stated for the blow-up of the plane at 8 points, got r = {0}")]
    WrongSurface(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A certified two-sided (possibly one-sided) bound on an alpha invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaBound {
    pub lower: Option<ExactScalar>,
    pub upper: Option<ExactScalar>,
    pub provenance: String,
}

impl AlphaBound {
    pub fn new(
        lower: Option<ExactScalar>,
        upper: Option<ExactScalar>,
        provenance: &str,
    ) -> Result<Self, AlphaError> {
        if let Some(l) = &lower {
            if l.sign() < 0 {
                return Err(AlphaError::NegativeLower);
            }
            if let Some(u) = &upper {
                if l > u {
                    return Err(AlphaError::InvertedBounds);
                }
            }
        }
        Ok(AlphaBound {
            lower,
            upper,
            provenance: provenance.to_string(),
        })
    }

    pub fn lower_only(lower: ExactScalar, provenance: &str) -> Result<Self, AlphaError> {
        Self::new(Some(lower), None, provenance)
    }
}

/// One row of flag-ideal resolution data: discrepancy `a`, multiplicity `b`
/// of the central fibre, valuation `c > 0` of the flag ideal, and boundary
/// multiplicity `d >= 0` (0 outside the log setting).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagRow {
    #[serde(with = "qserde")]
    pub a: Q,
    #[serde(with = "qserde")]
    pub b: Q,
    #[serde(with = "qserde")]
    pub c: Q,
    #[serde(with = "qserde", default = "Q::zero")]
    pub d: Q,
}

impl FlagRow {
    pub fn new(a: Q, b: Q, c: Q) -> Self {
        FlagRow {
            a,
            b,
            c,
            d: Q::zero(),
        }
    }

    pub fn with_boundary(a: Q, b: Q, c: Q, d: Q) -> Self {
        FlagRow { a, b, c, d }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagResolutionData {
    pub rows: Vec<FlagRow>,
}

impl FlagResolutionData {
    pub fn new(rows: Vec<FlagRow>) -> Result<Self, AlphaError> {
        if rows.is_empty() {
            return Err(AlphaError::EmptyData);
        }
        for (i, row) in rows.iter().enumerate() {
            if !row.c.is_positive() {
                return Err(AlphaError::BadValuation(i));
            }
            if row.d.is_negative() {
                return Err(AlphaError::BadBoundaryMultiplicity(i));
            }
        }
        Ok(FlagResolutionData { rows })
    }
}

/// Scaling: `alpha(X, cL) = alpha(X, L) / c`.
pub fn alpha_scale(b: &AlphaBound, c: &Q) -> Result<AlphaBound, AlphaError> {
    if !c.is_positive() {
        return Err(AlphaError::NonPositive("scaling factor"));
    }
    let div = |x: &ExactScalar| x.mul_rat(&c.recip());
    Ok(AlphaBound {
        lower: b.lower.as_ref().map(div),
        upper: b.upper.as_ref().map(div),
        provenance: format!(
            "{}; scaled for c = {} via alpha(X,cL) = alpha(X,L)/c",
            b.provenance,
            qserde::rat_to_string(c)
        ),
    })
}

/// Adding an ample class can only decrease alpha, so only the upper bound
/// survives for `L + D`.
pub fn alpha_add_ample_upper(b_of_l: &AlphaBound) -> AlphaBound {
    AlphaBound {
        lower: None,
        upper: b_of_l.upper.clone(),
        provenance: format!(
            "{}; upper bound transported to L+D (D ample, asserted by caller)",
            b_of_l.provenance
        ),
    }
}

/// The continuity radius `delta = c*eps / (2*alpha + eps)`, valid when
/// `L +- cD` are both ample (asserted by the caller); it guarantees
/// `|alpha(X,L) - alpha(X,L+delta*D)| < eps`.
pub fn perturbation_delta(
    eps: &Q,
    c: &Q,
    alpha: &ExactScalar,
) -> Result<ExactScalar, AlphaError> {
    if !eps.is_positive() {
        return Err(AlphaError::NonPositive("eps"));
    }
    if !c.is_positive() {
        return Err(AlphaError::NonPositive("c"));
    }
    if alpha.sign() <= 0 {
        return Err(AlphaError::NonPositive("alpha"));
    }
    let denom = alpha
        .mul_rat(&crate::exact::qi(2))
        .add_rat(eps);
    let delta = denom.recip()?.mul_rat(&(c * eps));
    Ok(delta)
}

/// The certified lower bound `alpha(X, L_lambda) >= min{ 1/(2-lambda), 1 }`
/// on the degree-one del Pezzo surface, valid for `0 <= lambda < 2` under
/// the declared genericity (no cuspidal anticanonical members).
/// Ampleness of `L_lambda` is a separate question, checked by the caller
/// through the lattice tests.
pub fn dp1_alpha_lower(
    lambda: &ExactScalar,
    surface: &SurfaceModel,
) -> Result<ExactScalar, AlphaError> {
    if surface.r() != 8 {
        return Err(AlphaError::WrongSurface(surface.r()));
    }
    if !surface.no_cuspidal_anticanonical() {
        return Err(AlphaError::GenericityNotDeclared);
    }
    let two = ExactScalar::Rational(crate::exact::qi(2));
    if lambda.sign() < 0 || *lambda >= two {
        return Err(AlphaError::LambdaOutOfDomain);
    }
    let one = ExactScalar::one();
    let branch = two.try_sub(lambda)?.recip()?;
    Ok(branch.min(one))
}

/// `alpha(X, L) <= min_i (a_i - b_i + 1) / c_i`.
pub fn flag_upper_bound(data: &FlagResolutionData) -> ExactScalar {
    log_flag_upper_bound(data, &Q::one()).expect("beta = 1 is always valid")
}

/// Log variant: `alpha((X,(1-beta)D); L) <= min_i (a_i - b_i + 1 - (1-beta) d_i) / c_i`.
pub fn log_flag_upper_bound(
    data: &FlagResolutionData,
    beta: &Q,
) -> Result<ExactScalar, AlphaError> {
    if beta.is_negative() || beta > &Q::one() {
        return Err(AlphaError::BadBeta);
    }
    let omb = Q::one() - beta;
    let min = data
        .rows
        .iter()
        .map(|row| (&row.a - &row.b + Q::one() - &omb * &row.d) / &row.c)
        .min()
        .expect("rows non-empty by construction");
    Ok(ExactScalar::Rational(min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> ExactScalar {
        ExactScalar::Rational(q(n, d))
    }

    #[test]
    fn bound_validation() {
        assert!(AlphaBound::new(Some(r(1, 2)), Some(r(2, 1)), "test").is_ok());
        assert_eq!(
            AlphaBound::new(Some(r(2, 1)), Some(r(1, 2)), "test"),
            Err(AlphaError::InvertedBounds)
        );
        assert_eq!(
            AlphaBound::new(Some(r(-1, 2)), None, "test"),
            Err(AlphaError::NegativeLower)
        );
    }

    #[test]
    fn scaling() {
        let b = AlphaBound::new(Some(r(3, 4)), Some(r(2, 1)), "test").unwrap();
        let scaled = alpha_scale(&b, &q(1, 3)).unwrap();
        assert_eq!(scaled.lower, Some(r(9, 4)));
        assert_eq!(scaled.upper, Some(r(6, 1)));
        let b1 = AlphaBound::lower_only(r(1, 1), "test").unwrap();
        assert_eq!(alpha_scale(&b1, &qi(2)).unwrap().lower, Some(r(1, 2)));
        assert_eq!(
            alpha_scale(&b1, &qi(0)),
            Err(AlphaError::NonPositive("scaling factor"))
        );
        // zero lower bound is fixed by any scaling
        let b0 = AlphaBound::lower_only(r(0, 1), "test").unwrap();
        assert_eq!(alpha_scale(&b0, &q(7, 3)).unwrap().lower, Some(r(0, 1)));
    }

    #[test]
    fn scale_round_trip_identity() {
        let b = AlphaBound::new(Some(r(2, 3)), Some(r(5, 4)), "test").unwrap();
        let back = alpha_scale(&alpha_scale(&b, &q(7, 5)).unwrap(), &q(5, 7)).unwrap();
        assert_eq!(back.lower, b.lower);
        assert_eq!(back.upper, b.upper);
    }

    #[test]
    fn ample_addition_keeps_only_upper() {
        let b = AlphaBound::new(Some(r(1, 2)), Some(r(3, 1)), "test").unwrap();
        let t = alpha_add_ample_upper(&b);
        assert_eq!(t.lower, None);
        assert_eq!(t.upper, Some(r(3, 1)));
        let b = AlphaBound::lower_only(r(1, 2), "test").unwrap();
        let t = alpha_add_ample_upper(&b);
        assert_eq!((t.lower, t.upper), (None, None));
    }

    #[test]
    fn perturbation_formula() {
        assert_eq!(
            perturbation_delta(&qi(1), &qi(1), &r(1, 1)).unwrap(),
            r(1, 3)
        );
        assert_eq!(
            perturbation_delta(&q(1, 2), &qi(2), &r(3, 4)).unwrap(),
            r(1, 2)
        );
        assert_eq!(
            perturbation_delta(&qi(1), &qi(0), &r(1, 1)),
            Err(AlphaError::NonPositive("c"))
        );
        // quadratic alpha stays exact: alpha = sqrt(10) - 2
        let alpha = ExactScalar::quadratic(qi(-2), qi(1), 10);
        let d = perturbation_delta(&qi(1), &qi(1), &alpha).unwrap();
        // delta = 1/(2 sqrt(10) - 3) = (3 + 2 sqrt(10))/31
        assert_eq!(d, ExactScalar::quadratic(q(3, 31), q(2, 31), 10));
    }

    #[test]
    fn dp1_lower_bound_branches() {
        let s = SurfaceModel::new(8).unwrap();
        assert_eq!(dp1_alpha_lower(&r(1, 1), &s).unwrap(), r(1, 1));
        assert_eq!(dp1_alpha_lower(&r(0, 1), &s).unwrap(), r(1, 2));
        assert_eq!(dp1_alpha_lower(&r(6, 5), &s).unwrap(), r(1, 1));
        assert_eq!(dp1_alpha_lower(&r(1, 2), &s).unwrap(), r(2, 3));
        assert_eq!(
            dp1_alpha_lower(&r(2, 1), &s),
            Err(AlphaError::LambdaOutOfDomain)
        );
        assert_eq!(
            dp1_alpha_lower(&r(-1, 10), &s),
            Err(AlphaError::LambdaOutOfDomain)
        );
        let no_gen = SurfaceModel::with_flags(8, true, false).unwrap();
        assert_eq!(
            dp1_alpha_lower(&r(1, 1), &no_gen),
            Err(AlphaError::GenericityNotDeclared)
        );
        let wrong = SurfaceModel::new(7).unwrap();
        assert_eq!(dp1_alpha_lower(&r(1, 1), &wrong), Err(AlphaError::WrongSurface(7)));
    }

    #[test]
    fn dp1_lower_bound_quadratic_argument() {
        // at the region endpoint lambda = sqrt(10) - 2 ~ 1.162 the bound is 1
        let s = SurfaceModel::new(8).unwrap();
        let lam = ExactScalar::quadratic(qi(-2), qi(1), 10);
        assert_eq!(dp1_alpha_lower(&lam, &s).unwrap(), r(1, 1));
    }

    #[test]
    fn flag_bounds() {
        let data = FlagResolutionData::new(vec![FlagRow::new(qi(2), qi(1), qi(1))]).unwrap();
        assert_eq!(flag_upper_bound(&data), r(2, 1));
        let data = FlagResolutionData::new(vec![FlagRow::new(qi(0), qi(1), qi(1))]).unwrap();
        assert_eq!(flag_upper_bound(&data), r(0, 1));
        let data = FlagResolutionData::new(vec![
            FlagRow::new(qi(2), qi(1), qi(1)),
            FlagRow::new(qi(3), qi(1), qi(2)),
        ])
        .unwrap();
        assert_eq!(flag_upper_bound(&data), r(3, 2));
        assert_eq!(
            FlagResolutionData::new(vec![]),
            Err(AlphaError::EmptyData)
        );
        assert_eq!(
            FlagResolutionData::new(vec![FlagRow::new(qi(1), qi(1), qi(0))]),
            Err(AlphaError::BadValuation(0))
        );
    }

    #[test]
    fn log_flag_bounds() {
        let data =
            FlagResolutionData::new(vec![FlagRow::with_boundary(qi(2), qi(1), qi(1), qi(1))])
                .unwrap();
        assert_eq!(log_flag_upper_bound(&data, &qi(0)).unwrap(), r(1, 1));
        assert_eq!(log_flag_upper_bound(&data, &qi(1)).unwrap(), flag_upper_bound(&data));
        let data =
            FlagResolutionData::new(vec![FlagRow::with_boundary(qi(2), qi(1), qi(2), qi(2))])
                .unwrap();
        assert_eq!(log_flag_upper_bound(&data, &q(1, 2)).unwrap(), r(1, 2));
        assert_eq!(log_flag_upper_bound(&data, &qi(2)), Err(AlphaError::BadBeta));
    }

    #[test]
    fn flag_data_json_defaults_d() {
        let data: FlagResolutionData =
            serde_json::from_str(r#"{"rows":[{"a":"2","b":"1","c":"1"}]}"#).unwrap();
        assert_eq!(data.rows[0].d, qi(0));
        let round = serde_json::to_string(&data).unwrap();
        let back: FlagResolutionData = serde_json::from_str(&round).unwrap();
        assert_eq!(back, data);
    }

    fn small_q() -> impl Strategy<Value = Q> {
        (-8i64..=8, 1i64..=6).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn log_bound_monotone_in_beta(
            rows in prop::collection::vec(
                (small_q(), small_q(), (1i64..=6, 1i64..=4), (0i64..=6, 1i64..=4)),
                1..5,
            ),
            b1 in (0i64..=24).prop_map(|n| q(n, 24)),
            b2 in (0i64..=24).prop_map(|n| q(n, 24)),
        ) {
            let data = FlagResolutionData::new(
                rows.into_iter()
                    .map(|(a, b, c, d)| FlagRow::with_boundary(a, b, q(c.0, c.1), q(d.0, d.1)))
                    .collect(),
            ).unwrap();
            let (lo, hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
            let vlo = log_flag_upper_bound(&data, &lo).unwrap();
            let vhi = log_flag_upper_bound(&data, &hi).unwrap();
            prop_assert!(vlo <= vhi);
            // beta = 1 always recovers the plain bound
            prop_assert_eq!(
                log_flag_upper_bound(&data, &Q::one()).unwrap(),
                flag_upper_bound(&data)
            );
        }

        #[test]
        fn delta_bounded_by_c(
            eps in (1i64..=40, 1i64..=10),
            c in (1i64..=40, 1i64..=10),
            alpha in (1i64..=40, 1i64..=10),
        ) {
            let eps = q(eps.0, eps.1);
            let c = q(c.0, c.1);
            let alpha = ExactScalar::Rational(q(alpha.0, alpha.1));
            let d = perturbation_delta(&eps, &c, &alpha).unwrap();
            prop_assert!(d.sign() > 0);
            prop_assert!(d < ExactScalar::Rational(c));
        }

        #[test]
        fn dp1_bound_monotone_then_flat(
            l1 in (0i64..=100, 100i64..=100),
            l2 in (0i64..=190, 100i64..=100),
        ) {
            static S: std::sync::OnceLock<SurfaceModel> = std::sync::OnceLock::new();
            let s = S.get_or_init(|| SurfaceModel::new(8).unwrap());
            let a = ExactScalar::Rational(q(l1.0, l1.1)); // in [0, 1]
            let b = ExactScalar::Rational(q(l2.0, l2.1)); // in [0, 1.9]
            let va = dp1_alpha_lower(&a, s).unwrap();
            let vb = dp1_alpha_lower(&b, s).unwrap();
            if a <= b {
                prop_assert!(va <= vb);
            }
            if b >= ExactScalar::one() {
                prop_assert_eq!(vb, ExactScalar::one());
            }
        }
    }
}
