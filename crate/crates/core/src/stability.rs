//! The slope-based sufficient criterion for K-stability on polarised del
//! Pezzo surfaces, its log variant, the Fano/Calabi-Yau diagnostic, and the
//! openness margin report.
//!
//! A certificate is auditable: it carries every intermediate exact value
//! and the declared hypotheses. The verdict is only ever
//! `KStableCertified` or `Inconclusive` — the criterion is sufficient, not
//! necessary, so no "unstable" verdict exists.

use crate::exact::{q, qserde, sign_q, ExactError, ExactScalar, Q};
use crate::picard::{DivisorClass, LatticeError, PositivityCheck, SurfaceModel};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

/// Ambient dimension of the surface pipeline; kept symbolic in certificates
/// so the ratio n/(n+1) is visible.
pub const N: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StabilityError {
    #[error("degenerate polarisation: L^2 <= 0")]
    DegeneratePolarisation,
    #[error("polarisation is not ample{}", witness_note(.0))]
    NotAmple(Option<DivisorClass>),
    #[error("beta must lie in [0, 1]")]
    BadBeta,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

fn witness_note(w: &Option<DivisorClass>) -> String {
    match w {
        Some(c) => format!(" (witness class {c})"),
        None => String::new(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    KStableCertified,
    Inconclusive,
}

/// Condition (i): the alpha lower bound strictly exceeds the threshold
/// (n/(n+1)) * slope (times beta in the log case).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionI {
    pub alpha_lower: ExactScalar,
    pub threshold: ExactScalar,
    pub margin: ExactScalar,
    pub pass: bool,
}

/// Condition (ii): `-K - threshold * L` is nef.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionII {
    pub tested_class: DivisorClass,
    pub nef: PositivityCheck,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityCertificate {
    pub verdict: Verdict,
    pub n: u32,
    pub polarisation: DivisorClass,
    pub slope: ExactScalar,
    pub threshold: ExactScalar,
    pub condition_i: ConditionI,
    pub condition_ii: ConditionII,
    pub hypotheses: Vec<String>,
    #[serde(with = "qserde::opt", default)]
    pub beta: Option<Q>,
}

/// `mu(X, L) = (-K . L) / (L . L)`; exact and rational.
pub fn slope(s: &SurfaceModel, l: &DivisorClass) -> Result<Q, StabilityError> {
    let l2 = s.self_intersection(l)?;
    if !l2.is_positive() {
        return Err(StabilityError::DegeneratePolarisation);
    }
    let mkl = s.intersect(&s.anticanonical(), l)?;
    Ok(mkl / l2)
}

fn hypothesis_tags(s: &SurfaceModel) -> Vec<String> {
    let mut tags = vec![format!(
        "surface: blow-up of the plane at {} points, degree {}",
        s.r(),
        s.degree()
    )];
    if s.general_position() {
        tags.push("points in general position (declared, not verified)".into());
    }
    if s.no_cuspidal_anticanonical() {
        tags.push("no cuspidal anticanonical members (declared)".into());
    }
    tags.push("polarisation ample (verified against the curve test set)".into());
    tags.push("alpha lower bound supplied with caller provenance".into());
    tags
}

fn criterion_core(
    s: &SurfaceModel,
    l: &DivisorClass,
    alpha_lb: &ExactScalar,
    beta: Option<Q>,
) -> Result<StabilityCertificate, StabilityError> {
    if let Some(b) = &beta {
        if b.is_negative() || b > &Q::one() {
            return Err(StabilityError::BadBeta);
        }
    }
    let ample = s.is_ample(l)?;
    if !ample.holds {
        return Err(StabilityError::NotAmple(ample.witness));
    }
    if alpha_lb.sign() < 0 {
        return Err(StabilityError::Exact(ExactError::Parse(
            "alpha lower bound must be non-negative".into(),
        )));
    }
    let mu = slope(s, l)?;
    // threshold = (n/(n+1)) * mu with n = 2
    let threshold = q(N as i64, N as i64 + 1) * &mu;
    let threshold_i = match &beta {
        Some(b) => b * &threshold,
        None => threshold.clone(),
    };
    let margin = alpha_lb.try_sub(&ExactScalar::Rational(threshold_i.clone()))?;
    let condition_i = ConditionI {
        alpha_lower: alpha_lb.clone(),
        threshold: ExactScalar::Rational(threshold_i),
        margin: margin.clone(),
        pass: margin.sign() > 0,
    };
    let tested = s.anticanonical().sub(&l.scale(&threshold));
    let nef = s.is_nef(&tested)?;
    let condition_ii = ConditionII {
        pass: nef.holds,
        tested_class: tested,
        nef,
    };
    let verdict = if condition_i.pass && condition_ii.pass {
        Verdict::KStableCertified
    } else {
        Verdict::Inconclusive
    };
    Ok(StabilityCertificate {
        verdict,
        n: N,
        polarisation: l.clone(),
        slope: ExactScalar::Rational(mu),
        threshold: ExactScalar::Rational(threshold),
        condition_i,
        condition_ii,
        hypotheses: hypothesis_tags(s),
        beta,
    })
}

/// The main criterion: alpha_lb > (2/3) mu and `-K - (2/3) mu L` nef imply
/// K-stability. An `Inconclusive` verdict asserts nothing.
pub fn check_criterion(
    s: &SurfaceModel,
    l: &DivisorClass,
    alpha_lb: &ExactScalar,
) -> Result<StabilityCertificate, StabilityError> {
    criterion_core(s, l, alpha_lb, None)
}

/// Log variant with cone angle `beta` along a declared anticanonical
/// boundary: condition (i) threshold becomes `beta * (2/3) mu`; condition
/// (ii) is unchanged. At `beta = 1` the certificate coincides with the
/// plain one except for the recorded beta.
pub fn check_log_criterion(
    s: &SurfaceModel,
    l: &DivisorClass,
    alpha_log_lb: &ExactScalar,
    beta: &Q,
) -> Result<StabilityCertificate, StabilityError> {
    criterion_core(s, l, alpha_log_lb, Some(beta.clone()))
}

/// Result of maximising the certified cone angle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxBetaResult {
    /// Condition (ii) outcome; when it fails nothing is certified.
    pub condition_ii: PositivityCheck,
    /// `min(1, 3 alpha / (2 mu))`, absent when condition (ii) fails.
    pub value: Option<ExactScalar>,
    /// True when beta = 1 itself is certified (the cap is interior);
    /// false when the value is an unattained supremum.
    pub attained: bool,
}

/// `sup { beta in [0,1] : condition (i) holds at beta }`, given that
/// condition (ii) holds; the supremum is `min(1, 3 alpha / (2 mu))` and is
/// attained only when the cap at 1 is strict.
pub fn max_certified_beta(
    s: &SurfaceModel,
    l: &DivisorClass,
    alpha_log_lb: &ExactScalar,
) -> Result<MaxBetaResult, StabilityError> {
    let ample = s.is_ample(l)?;
    if !ample.holds {
        return Err(StabilityError::NotAmple(ample.witness));
    }
    let mu = slope(s, l)?;
    let threshold = q(N as i64, N as i64 + 1) * &mu;
    let tested = s.anticanonical().sub(&l.scale(&threshold));
    let nef = s.is_nef(&tested)?;
    if !nef.holds {
        return Ok(MaxBetaResult {
            condition_ii: nef,
            value: None,
            attained: false,
        });
    }
    let raw = alpha_log_lb.mul_rat(&threshold.recip());
    let one = ExactScalar::one();
    let attained = raw > one;
    Ok(MaxBetaResult {
        condition_ii: nef,
        value: Some(raw.min(one)),
        attained,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NumericalType {
    Fano,
    CalabiYau,
    Inapplicable,
}

/// Diagnostic split behind condition (ii): a polarised surface satisfying
/// it is numerically Fano (mu > 0) or numerically Calabi-Yau (mu = 0,
/// `-K` nef); everything else is outside the criterion's reach.
pub fn classify_from_parts(mu_sign: i32, condition_ii: bool, minus_k_nef: bool) -> NumericalType {
    if mu_sign > 0 && condition_ii {
        NumericalType::Fano
    } else if mu_sign == 0 && minus_k_nef {
        NumericalType::CalabiYau
    } else {
        NumericalType::Inapplicable
    }
}

pub fn classify_numerical_type(
    s: &SurfaceModel,
    l: &DivisorClass,
) -> Result<NumericalType, StabilityError> {
    let l2 = s.self_intersection(l)?;
    if !l2.is_positive() {
        return Ok(NumericalType::Inapplicable);
    }
    let mu = slope(s, l)?;
    let threshold = q(N as i64, N as i64 + 1) * &mu;
    let tested = s.anticanonical().sub(&l.scale(&threshold));
    let cond_ii = s.is_nef(&tested)?.holds;
    let minus_k_nef = s.is_nef(&s.anticanonical())?.holds;
    Ok(classify_from_parts(sign_q(&mu), cond_ii, minus_k_nef))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpennessReport {
    pub strict_i: bool,
    pub strict_ii: bool,
    pub margin_i: ExactScalar,
    /// Present when both conditions are strict on a certified certificate.
    pub annotation: Option<String>,
}

/// Strictness check behind the openness statement: when condition (i) has
/// positive margin and condition (ii) holds in the *ample* (strict) form,
/// K-stability survives small perturbations of the polarisation.
pub fn openness_margins(
    s: &SurfaceModel,
    cert: &StabilityCertificate,
) -> Result<OpennessReport, StabilityError> {
    let strict_i = cert.condition_i.margin.sign() > 0;
    let strict_ii = s.is_ample(&cert.condition_ii.tested_class)?.holds;
    let annotation = (cert.verdict == Verdict::KStableCertified && strict_i && strict_ii).then(
        || "K-stability open under perturbation of L (strict margins on both conditions)".into(),
    );
    Ok(OpennessReport {
        strict_i,
        strict_ii,
        margin_i: cert.condition_i.margin.clone(),
        annotation,
    })
}
