//! Donaldson-Futaki evaluation on intersection tables.
//!
//! The evaluator never constructs blow-ups of `X x P^1` in general: a table
//! records the handful of intersection numbers the DF formula consumes, with
//! mandatory free-text provenance so imported tables stay auditable. The one
//! generator provided is the deformation to the normal cone of a smooth
//! point, whose table entries are forced by the blow-up identities
//! `E^3 = 1`, vanishing of pullback triple products, and relative canonical
//! `2E`. Values are sign-meaningful only (the formula is normalised up to a
//! positive constant).

use crate::exact::{qi, qserde, ExactScalar, Q};
use crate::picard::{DivisorClass, LatticeError, SurfaceModel};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DfError {
    #[error("table is missing required field {0}")]
    MissingField(&'static str),
    #[error("L^n must be positive")]
    NonPositiveLn,
    #[error("dimension n must be at least 1")]
    BadDimension,
    #[error("beta must lie in [0, 1]")]
    BadBeta,
    #[error("polarisation is not ample")]
    NotAmple,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Intersection numbers feeding the DF formula. `LK`, `Ln` live on `X`;
/// `A`, `B`, `C` on the test-configuration total space; the optional log
/// fields carry the boundary data, and `LE_R` / `LE_E` feed the sign-lemma
/// validator.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionTable {
    pub n: u32,
    #[serde(with = "qserde")]
    pub LK: Q,
    #[serde(with = "qserde")]
    pub Ln: Q,
    #[serde(with = "qserde")]
    pub A: Q,
    #[serde(with = "qserde")]
    pub B: Q,
    #[serde(with = "qserde")]
    pub C: Q,
    #[serde(with = "qserde::opt", default, skip_serializing_if = "Option::is_none")]
    pub Dn1: Option<Q>,
    #[serde(with = "qserde::opt", default, skip_serializing_if = "Option::is_none")]
    pub BD: Option<Q>,
    #[serde(with = "qserde::opt", default, skip_serializing_if = "Option::is_none")]
    pub Cexc: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub LE_R: Option<LeRList>,
    #[serde(with = "qserde::opt", default, skip_serializing_if = "Option::is_none")]
    pub LE_E: Option<Q>,
    pub provenance: String,
}

/// Wrapper so the `(L-E)^n . R` list serialises with exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeRList(#[serde(with = "qserde::vec")] pub Vec<Q>);

impl IntersectionTable {
    #[allow(non_snake_case)]
    pub fn new(
        n: u32,
        LK: Q,
        Ln: Q,
        A: Q,
        B: Q,
        C: Q,
        provenance: &str,
    ) -> Result<Self, DfError> {
        if n < 1 {
            return Err(DfError::BadDimension);
        }
        if !Ln.is_positive() {
            return Err(DfError::NonPositiveLn);
        }
        Ok(IntersectionTable {
            n,
            LK,
            Ln,
            A,
            B,
            C,
            Dn1: None,
            BD: None,
            Cexc: None,
            LE_R: None,
            LE_E: None,
            provenance: provenance.to_string(),
        })
    }

    /// The all-zero (trivial) configuration: `E = 0`, every exceptional
    /// product vanishes.
    pub fn trivial(n: u32, lk: Q, ln: Q) -> Result<Self, DfError> {
        Self::new(n, lk, ln, qi(0), qi(0), qi(0), "trivial configuration (E = 0)")
    }
}

/// `DF = -n (L^{n-1}.K) (L-E)^{n+1} + (n+1) (L^n) ((L-E)^n . (K + K_rel))`,
/// sign-meaningful only.
pub fn df_evaluate(t: &IntersectionTable) -> ExactScalar {
    let n = qi(t.n as i64);
    let np1 = qi(t.n as i64 + 1);
    let value = -&n * &t.LK * &t.A + np1 * &t.Ln * (&t.B + &t.C);
    ExactScalar::Rational(value)
}

/// Log variant: the boundary enters condition terms with weight
/// `(1 - beta)`; at `beta = 1` with `Cexc = C` this reduces to
/// [`df_evaluate`].
pub fn df_log_evaluate(t: &IntersectionTable, beta: &Q) -> Result<ExactScalar, DfError> {
    if beta.is_negative() || beta > &Q::one() {
        return Err(DfError::BadBeta);
    }
    let dn1 = t.Dn1.as_ref().ok_or(DfError::MissingField("Dn1"))?;
    let bd = t.BD.as_ref().ok_or(DfError::MissingField("BD"))?;
    let cexc = t.Cexc.as_ref().ok_or(DfError::MissingField("Cexc"))?;
    let omb = Q::one() - beta;
    let n = qi(t.n as i64);
    let np1 = qi(t.n as i64 + 1);
    let value =
        -&n * (&t.LK + &omb * dn1) * &t.A + np1 * &t.Ln * (&t.B + &omb * bd + cexc);
    Ok(ExactScalar::Rational(value))
}

/// Exact table for the deformation to the normal cone of one smooth point
/// of `X`, i.e. blowing up a point on `X x P^1`.
pub fn normal_cone_point_table(
    s: &SurfaceModel,
    l: &DivisorClass,
) -> Result<IntersectionTable, DfError> {
    if !s.is_ample(l)?.holds {
        return Err(DfError::NotAmple);
    }
    let lk = s.intersect(l, s.canonical())?;
    let ln = s.self_intersection(l)?;
    let mut t = IntersectionTable::new(
        2,
        lk,
        ln,
        qi(-1),
        qi(0),
        qi(2),
        "deformation to the normal cone of a smooth point: E^3 = 1, \
         pullback triple products vanish, relative canonical = 2E",
    )?;
    t.LE_E = Some(qi(1));
    t.LE_R = Some(LeRList(vec![qi(0)]));
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignLemmaReport {
    pub passed: bool,
    pub flags: Vec<String>,
}

/// Checks the semi-test-configuration sign lemmas on a table: every
/// `(L-E)^n . R` entry must be `<= 0` for nef `R`, and `(L-E)^n . E > 0`.
/// A violation means the table cannot come from a valid semi-test
/// configuration; report-only, downstream certificates carry the flags.
pub fn validate_sign_lemmas(t: &IntersectionTable) -> SignLemmaReport {
    let mut flags = Vec::new();
    match &t.LE_R {
        None => flags.push("validation field LE_R absent".to_string()),
        Some(LeRList(rs)) => {
            for (i, v) in rs.iter().enumerate() {
                if v.is_positive() {
                    flags.push(format!(
                        "nef-pullback negativity fails: LE_R[{i}] = {} > 0",
                        qserde::rat_to_string(v)
                    ));
                }
            }
        }
    }
    match &t.LE_E {
        None => flags.push("validation field LE_E absent".to_string()),
        Some(v) if !v.is_positive() => {
            flags.push(format!(
                "degenerate: E-positivity fails (LE_E = {})",
                qserde::rat_to_string(v)
            ));
        }
        Some(_) => {}
    }
    SignLemmaReport {
        passed: flags.is_empty(),
        flags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use proptest::prelude::*;

    /// Independent expansion of the normal-cone products for `L = O(k)` on
    /// a surface: binomial expansion of `(p*L - E)^3` and `(p*L - E)^2.2E`
    /// where any product containing fewer than three factors of `E`
    /// vanishes (pullback triples and mixed terms) and `E^3 = 1`.
    fn oracle_normal_cone_abc() -> (Q, Q, Q) {
        let binom3 = [1i64, 3, 3, 1];
        let binom2 = [1i64, 2, 1];
        let term = |e_power: usize, sign: i64| -> Q {
            if e_power == 3 {
                qi(sign) // E^3 = 1
            } else {
                qi(0)
            }
        };
        // A = (p*L - E)^3
        let mut a = Q::from(num_bigint::BigInt::from(0));
        for (j, &b3) in binom3.iter().enumerate() {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            a += qi(b3 * sign) * term(j, 1);
        }
        // B = (p*L - E)^2 . p*K: every term has a pullback factor
        let b = qi(0);
        // C = (p*L - E)^2 . 2E
        let mut c = qi(0);
        for (j, &b2) in binom2.iter().enumerate() {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            c += qi(2 * b2 * sign) * term(j + 1, 1);
        }
        (a, b, c)
    }

    #[test]
    fn normal_cone_table_matches_expansion_oracle() {
        let (a, b, c) = oracle_normal_cone_abc();
        assert_eq!((a, b, c), (qi(-1), qi(0), qi(2)));
        let s = SurfaceModel::new(0).unwrap();
        let t = normal_cone_point_table(&s, &DivisorClass::hyperplane(0)).unwrap();
        assert_eq!((t.A.clone(), t.B.clone(), t.C.clone()), (qi(-1), qi(0), qi(2)));
        assert_eq!(t.LK, qi(-3));
        assert_eq!(t.Ln, qi(1));
        assert_eq!(df_evaluate(&t), ExactScalar::Rational(qi(0)));
    }

    #[test]
    fn trivial_table_evaluates_to_zero() {
        let t = IntersectionTable::trivial(2, qi(-3), qi(1)).unwrap();
        assert_eq!(df_evaluate(&t), ExactScalar::Rational(qi(0)));
        let t = IntersectionTable::trivial(3, qi(5), qi(7)).unwrap();
        assert_eq!(df_evaluate(&t), ExactScalar::Rational(qi(0)));
    }

    #[test]
    fn normal_cone_closed_form() {
        // r = 0, L = kH: DF = 6k^2 - 6k
        let s = SurfaceModel::new(0).unwrap();
        for k in 1i64..=20 {
            let l = DivisorClass::hyperplane(0).scale(&qi(k));
            let t = normal_cone_point_table(&s, &l).unwrap();
            assert_eq!(t.LK, qi(-3 * k));
            assert_eq!(t.Ln, qi(k * k));
            assert_eq!(
                df_evaluate(&t),
                ExactScalar::Rational(qi(6 * k * k - 6 * k)),
                "k = {k}"
            );
        }
    }

    #[test]
    fn normal_cone_on_dp1_anticanonical() {
        let s = SurfaceModel::new(8).unwrap();
        let t = normal_cone_point_table(&s, &s.anticanonical()).unwrap();
        assert_eq!(t.LK, qi(-1));
        assert_eq!(t.Ln, qi(1));
        assert_eq!(df_evaluate(&t), ExactScalar::Rational(qi(4)));
    }

    #[test]
    fn normal_cone_requires_ample() {
        let s = SurfaceModel::new(1).unwrap();
        // H is nef but not ample on the one-point blow-up
        assert_eq!(
            normal_cone_point_table(&s, &DivisorClass::hyperplane(1)),
            Err(DfError::NotAmple)
        );
    }

    #[test]
    fn log_evaluation() {
        // normal-cone table for P^2 with anticanonical boundary data
        let s = SurfaceModel::new(0).unwrap();
        let mut t = normal_cone_point_table(&s, &DivisorClass::hyperplane(0)).unwrap();
        assert_eq!(
            df_log_evaluate(&t, &q(1, 2)),
            Err(DfError::MissingField("Dn1"))
        );
        t.Dn1 = Some(qi(3));
        t.BD = Some(qi(0));
        t.Cexc = Some(qi(2));
        assert_eq!(
            df_log_evaluate(&t, &q(1, 2)).unwrap(),
            ExactScalar::Rational(qi(3))
        );
        // beta = 1 recovers the plain value when Cexc = C
        assert_eq!(df_log_evaluate(&t, &Q::one()).unwrap(), df_evaluate(&t));
        assert_eq!(df_log_evaluate(&t, &q(3, 2)), Err(DfError::BadBeta));
    }

    #[test]
    fn sign_lemma_validation() {
        let s = SurfaceModel::new(0).unwrap();
        let t = normal_cone_point_table(&s, &DivisorClass::hyperplane(0)).unwrap();
        let rep = validate_sign_lemmas(&t);
        assert!(rep.passed, "{:?}", rep.flags);

        let mut bad = t.clone();
        bad.LE_E = Some(qi(0));
        let rep = validate_sign_lemmas(&bad);
        assert!(!rep.passed);
        assert!(rep.flags[0].contains("E-positivity"));

        let mut bad = t.clone();
        bad.LE_R = Some(LeRList(vec![q(1, 2)]));
        let rep = validate_sign_lemmas(&bad);
        assert!(!rep.passed);
        assert!(rep.flags[0].contains("LE_R[0]"));

        let mut absent = t;
        absent.LE_R = None;
        absent.LE_E = None;
        let rep = validate_sign_lemmas(&absent);
        assert!(!rep.passed);
        assert_eq!(rep.flags.len(), 2);
    }

    #[test]
    fn scaling_multiplies_df_by_positive_constant() {
        // L -> rL with the whole configuration rescaled: LK -> r LK,
        // Ln -> r^2 Ln, A -> r^3 A, B -> r^2 B, C -> r^2 C gives DF -> r^4 DF
        let s = SurfaceModel::new(0).unwrap();
        for k in 1i64..=4 {
            let l = DivisorClass::hyperplane(0).scale(&qi(k));
            let t = normal_cone_point_table(&s, &l).unwrap();
            for r in 2i64..=3 {
                let scaled = IntersectionTable::new(
                    2,
                    &t.LK * qi(r),
                    &t.Ln * qi(r * r),
                    &t.A * qi(r * r * r),
                    &t.B * qi(r * r),
                    &t.C * qi(r * r),
                    "rescaled",
                )
                .unwrap();
                let base = df_evaluate(&t);
                let got = df_evaluate(&scaled);
                assert_eq!(got, base.mul_rat(&qi(r * r * r * r)), "k = {k}, r = {r}");
            }
        }
    }

    #[test]
    fn table_json_round_trip_exact_names() {
        let s = SurfaceModel::new(0).unwrap();
        let t = normal_cone_point_table(&s, &DivisorClass::hyperplane(0)).unwrap();
        let json = serde_json::to_value(&t).unwrap();
        for key in ["n", "LK", "Ln", "A", "B", "C", "LE_R", "LE_E", "provenance"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert!(json.get("Dn1").is_none()); // optional fields omitted
        let back: IntersectionTable = serde_json::from_str(&json.to_string()).unwrap();
        assert_eq!(back, t);
    }

    fn small_q() -> impl Strategy<Value = Q> {
        (-9i64..=9, 1i64..=5).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn df_linear_in_each_field(
            lk in small_q(), ln in (1i64..=9, 1i64..=5),
            a in small_q(), b in small_q(), c in small_q(),
            delta in small_q(),
        ) {
            let ln = q(ln.0, ln.1);
            let t = IntersectionTable::new(2, lk.clone(), ln.clone(), a.clone(), b.clone(), c.clone(), "random").unwrap();
            let base = match df_evaluate(&t) { ExactScalar::Rational(v) => v, _ => unreachable!() };
            // shifting LK by delta changes DF by -n * delta * A
            let mut t2 = t.clone();
            t2.LK = &lk + &delta;
            let got = match df_evaluate(&t2) { ExactScalar::Rational(v) => v, _ => unreachable!() };
            prop_assert_eq!(&got - &base, qi(-2) * &delta * &a);
            // shifting A by delta changes DF by -n * LK * delta
            let mut t3 = t.clone();
            t3.A = &a + &delta;
            let got = match df_evaluate(&t3) { ExactScalar::Rational(v) => v, _ => unreachable!() };
            prop_assert_eq!(&got - &base, qi(-2) * &lk * &delta);
            // shifting B (or C) by delta changes DF by (n+1) * Ln * delta
            let mut t4 = t.clone();
            t4.C = &c + &delta;
            let got = match df_evaluate(&t4) { ExactScalar::Rational(v) => v, _ => unreachable!() };
            prop_assert_eq!(&got - &base, qi(3) * &ln * &delta);
        }

        #[test]
        fn df_log_at_beta_one_matches_plain(
            lk in small_q(), ln in (1i64..=9, 1i64..=5),
            a in small_q(), b in small_q(), c in small_q(),
            dn1 in small_q(), bd in small_q(),
        ) {
            let mut t = IntersectionTable::new(2, lk, q(ln.0, ln.1), a, b, c.clone(), "random").unwrap();
            t.Dn1 = Some(dn1);
            t.BD = Some(bd);
            t.Cexc = Some(c); // Cexc = C
            prop_assert_eq!(df_log_evaluate(&t, &Q::one()).unwrap(), df_evaluate(&t));
        }
    }
}
