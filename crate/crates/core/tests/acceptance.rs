//! End-to-end acceptance suite. Each check prints a single pass/fail line;
//! the test fails if any check fails or exceeds its runtime budget.

use std::time::{Duration, Instant};

use kstab::alpha::{self, FlagResolutionData, FlagRow};
use kstab::dfcalc::{self, IntersectionTable};
use kstab::exact::{
    q, qi, solve_sign_system, Algebraic, AlgebraicInterval, Constraint, ExactScalar, Q, RatPoly,
    Rel,
};
use kstab::picard::{enumerate_exceptional, NefThreshold};
use kstab::region::{BindingCondition, PolarisationFamily};
use kstab::stability::{check_criterion, slope, Verdict};
use kstab::{DivisorClass, SurfaceModel};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = (&'static str, fn() -> Result<String, String>, Duration);

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed)
}

fn rand_q(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Q {
    q(rng.gen_range(lo * den..=hi * den), den)
}

fn dp1_class(lambda: &Q) -> DivisorClass {
    let mut e = vec![Q::one(); 8];
    e[7] = lambda.clone();
    DivisorClass::new(qi(3), e)
}

// 1. The dp1 family region is exactly ((10-sqrt(10))/9, sqrt(10)-2), and
// each endpoint annihilates its binding polynomial.
fn region_reproduction() -> Result<String, String> {
    let res = kstab::region::certified_region(&PolarisationFamily::dp1())
        .map_err(|e| e.to_string())?;
    let lo = ExactScalar::quadratic(q(10, 9), q(-1, 9), 10);
    let hi = ExactScalar::quadratic(qi(-2), qi(1), 10);
    let expected = AlgebraicInterval::open(
        Algebraic::Exact(lo.clone()),
        Algebraic::Exact(hi.clone()),
    );
    if res.region != vec![expected] {
        return Err(format!("region is {:?}", res.region));
    }
    let lower_poly = RatPoly::from_i64(&[10, -20, 9], "lambda"); // 9t^2 - 20t + 10
    let upper_poly = RatPoly::from_i64(&[6, -4, -1], "lambda"); // 6 - 4t - t^2
    if Algebraic::Exact(lo).sign_of_poly(&lower_poly) != 0 {
        return Err("lower endpoint does not satisfy 9t^2 - 20t + 10 = 0".into());
    }
    if Algebraic::Exact(hi).sign_of_poly(&upper_poly) != 0 {
        return Err("upper endpoint does not satisfy 6 - 4t - t^2 = 0".into());
    }
    for b in &res.bindings {
        if b.condition != BindingCondition::ConditionII {
            return Err("unexpected binding condition".into());
        }
    }
    Ok("open interval ((10-sqrt(10))/9, sqrt(10)-2), both binding polynomials vanish exactly".into())
}

// Independent brute-force census: solutions of d^2 - sum m_i^2 = -1,
// 3d - sum m_i = 1 with the known coefficient bounds.
fn census_oracle(r: usize) -> usize {
    fn go(left: usize, sq: i64, lin: i64, count: &mut usize) {
        if left == 0 {
            if sq == -1 && lin == 1 {
                *count += 1;
            }
            return;
        }
        for m in -1..=3i64 {
            go(left - 1, sq - m * m, lin - m, count);
        }
    }
    let mut count = 0;
    for d in 0..=6i64 {
        go(r, d * d, 3 * d, &mut count);
    }
    count
}

// 2. Exceptional-curve counts match the Diophantine oracle, and every
// class has self-intersection -1 and meets -K in 1.
fn exceptional_census() -> Result<String, String> {
    let expected = [0usize, 1, 3, 6, 10, 16, 27, 56, 240];
    for (r, &want) in expected.iter().enumerate() {
        let curves = enumerate_exceptional(r).map_err(|e| e.to_string())?;
        if curves.len() != want || curves.len() != census_oracle(r) {
            return Err(format!("r = {r}: {} classes", curves.len()));
        }
        let s = SurfaceModel::new(r).map_err(|e| e.to_string())?;
        for c in &curves {
            if s.self_intersection(c).unwrap() != qi(-1)
                || s.intersect(c, &s.anticanonical()).unwrap() != Q::one()
            {
                return Err(format!("r = {r}: {c} fails the numerical conditions"));
            }
        }
    }
    Ok("counts 0,1,3,6,10,16,27,56,240 match the brute-force oracle; all C^2 = -1, C.(-K) = 1".into())
}

// 3. The nef threshold of the dp1 base in the -E8 direction is exactly 4/3,
// bound by the sextic through the first seven points.
fn nef_boundary() -> Result<String, String> {
    let s = SurfaceModel::new(8).map_err(|e| e.to_string())?;
    let mut e = vec![Q::one(); 8];
    e[7] = Q::zero();
    let base = DivisorClass::new(qi(3), e);
    let dir = DivisorClass::exceptional(8, 7); // E8
    let (t, w) = s.nef_threshold(&base, &dir).map_err(|e| e.to_string())?;
    if t != NefThreshold::Finite(ExactScalar::Rational(q(4, 3))) {
        return Err(format!("threshold {t:?}"));
    }
    let sextic = DivisorClass::from_i64(6, &[2, 2, 2, 2, 2, 2, 2, 3]);
    if w != Some(sextic) {
        return Err(format!("witness {w:?}"));
    }
    Ok("threshold 4/3 with witness 6H - 2(E1+..+E7) - 3E8".into())
}

// 4. slope(-K) = 1 for every r, and slope(L_lambda) = (2-lambda)/(2-lambda^2)
// at 50 rational probes.
fn slope_identities() -> Result<String, String> {
    for r in 0..=8 {
        let s = SurfaceModel::new(r).map_err(|e| e.to_string())?;
        if slope(&s, &s.anticanonical()).map_err(|e| e.to_string())? != Q::one() {
            return Err(format!("slope(-K) != 1 at r = {r}"));
        }
    }
    let s = SurfaceModel::new(8).map_err(|e| e.to_string())?;
    for k in 1..=50i64 {
        let lam = q(k, 51); // in (0, 1) subset of the ample range
        let mu = slope(&s, &dp1_class(&lam)).map_err(|e| e.to_string())?;
        let expected = (qi(2) - &lam) / (qi(2) - &lam * &lam);
        if mu != expected {
            return Err(format!("slope mismatch at lambda = {lam}"));
        }
    }
    Ok("slope(-K) = 1 for r <= 8; slope(L_lambda) = (2-lambda)/(2-lambda^2) at 50 probes".into())
}

// 5. Pointwise criterion verdicts agree with region membership at 200
// rational probes in (0, 4/3).
fn criterion_region_consistency() -> Result<String, String> {
    let f = PolarisationFamily::dp1();
    let res = kstab::region::certified_region(&f).map_err(|e| e.to_string())?;
    for k in 1..=200i64 {
        let lam = q(4 * k, 3 * 201); // 200 points of (0, 4/3)
        let alpha = ExactScalar::Rational(f.alpha_lb.eval(&lam).expect("piece covers lambda"));
        let cert = check_criterion(&f.surface, &dp1_class(&lam), &alpha)
            .map_err(|e| e.to_string())?;
        let inside = res.region.iter().any(|iv| iv.contains_rat(&lam));
        if (cert.verdict == Verdict::KStableCertified) != inside {
            return Err(format!("disagreement at lambda = {lam}"));
        }
    }
    Ok("200 probes: pointwise verdict == region membership, no tolerance".into())
}

// 6. DF evaluator: trivial table -> 0; normal-cone tables for L = kH give
// 6k^2 - 6k; log invariant at beta = 1 equals the plain one when Cexc = C.
fn df_evaluator() -> Result<String, String> {
    let t = IntersectionTable::trivial(2, qi(-3), qi(1)).map_err(|e| e.to_string())?;
    if dfcalc::df_evaluate(&t) != ExactScalar::zero() {
        return Err("trivial table is nonzero".into());
    }
    let s = SurfaceModel::new(0).map_err(|e| e.to_string())?;
    for k in 1..=20i64 {
        let l = DivisorClass::new(qi(k), vec![]);
        let t = dfcalc::normal_cone_point_table(&s, &l).map_err(|e| e.to_string())?;
        if dfcalc::df_evaluate(&t) != ExactScalar::Rational(qi(6 * k * k - 6 * k)) {
            return Err(format!("normal cone at k = {k}"));
        }
    }
    let mut rng = rng();
    for _ in 0..100 {
        let mut t = IntersectionTable::new(
            rng.gen_range(1..=4),
            rand_q(&mut rng, -5, 5, 3),
            rand_q(&mut rng, 1, 5, 1),
            rand_q(&mut rng, -5, 5, 2),
            rand_q(&mut rng, -5, 5, 2),
            rand_q(&mut rng, -5, 5, 2),
            "randomised acceptance probe",
        )
        .map_err(|e| e.to_string())?;
        t.Dn1 = Some(rand_q(&mut rng, -5, 5, 2));
        t.BD = Some(rand_q(&mut rng, -5, 5, 2));
        t.Cexc = Some(t.C.clone());
        let log = dfcalc::df_log_evaluate(&t, &Q::one()).map_err(|e| e.to_string())?;
        if log != dfcalc::df_evaluate(&t) {
            return Err("log at beta = 1 differs from plain".into());
        }
    }
    Ok("trivial -> 0; 6k^2-6k for k = 1..20; log(beta=1) == plain on 100 random tables".into())
}

// 7. Verdicts are invariant under L -> cL, alpha -> alpha/c.
fn scaling_invariance() -> Result<String, String> {
    let s = SurfaceModel::new(8).map_err(|e| e.to_string())?;
    let mut rng = rng();
    for _ in 0..50 {
        let lam = rand_q(&mut rng, 0, 1, 97) + q(1, 500); // inside (0, 4/3)
        let l = dp1_class(&lam);
        let c = rand_q(&mut rng, 1, 9, 7) + q(1, 13);
        let alpha = ExactScalar::Rational(rand_q(&mut rng, 0, 2, 11) + q(1, 23));
        let v1 = check_criterion(&s, &l, &alpha).map_err(|e| e.to_string())?.verdict;
        let v2 = check_criterion(&s, &l.scale(&c), &alpha.mul_rat(&c.recip()))
            .map_err(|e| e.to_string())?
            .verdict;
        if v1 != v2 {
            return Err(format!("verdict changed under scaling by {c}"));
        }
    }
    Ok("50 random (L, c): verdict invariant under L -> cL, alpha -> alpha/c".into())
}

// 8. Flag-resolution bounds match hand-expanded values; the log bound is
// monotone non-decreasing in beta when every d_i >= 0.
fn flag_bounds() -> Result<String, String> {
    let data = FlagResolutionData::new(vec![
        FlagRow::new(qi(2), qi(1), qi(2)), // (2-1+1)/2 = 1
        FlagRow::new(qi(3), qi(1), qi(4)), // (3-1+1)/4 = 3/4
    ])
    .map_err(|e| e.to_string())?;
    if alpha::flag_upper_bound(&data) != ExactScalar::Rational(q(3, 4)) {
        return Err("upper bound != 3/4".into());
    }
    let logged = FlagResolutionData::new(vec![FlagRow::with_boundary(
        qi(2),
        qi(1),
        qi(2),
        qi(1),
    )])
    .map_err(|e| e.to_string())?;
    // (2 - 1 + 1 - (1 - 1/2)*1)/2 = 3/4 at beta = 1/2
    if alpha::log_flag_upper_bound(&logged, &q(1, 2)).map_err(|e| e.to_string())?
        != ExactScalar::Rational(q(3, 4))
    {
        return Err("log bound at beta = 1/2 != 3/4".into());
    }
    let mut rng = rng();
    for _ in 0..100 {
        let rows: Vec<FlagRow> = (0..rng.gen_range(1..=4))
            .map(|_| {
                FlagRow::with_boundary(
                    rand_q(&mut rng, -3, 5, 2),
                    rand_q(&mut rng, 0, 4, 2),
                    rand_q(&mut rng, 1, 4, 1),
                    rand_q(&mut rng, 0, 3, 2),
                )
            })
            .collect();
        let data = FlagResolutionData::new(rows).map_err(|e| e.to_string())?;
        let b1 = rand_q(&mut rng, 0, 1, 50);
        let b2 = (&b1 + rand_q(&mut rng, 0, 1, 50)).min(Q::one());
        let v1 = alpha::log_flag_upper_bound(&data, &b1).map_err(|e| e.to_string())?;
        let v2 = alpha::log_flag_upper_bound(&data, &b2).map_err(|e| e.to_string())?;
        if v1 > v2 {
            return Err("log bound not monotone in beta".into());
        }
    }
    Ok("hand-expanded examples match; monotone in beta on 100 random datasets".into())
}

// 9. perturbation_delta(1, 1, 1) = 1/3 exactly, and 0 < delta < c always.
fn perturbation_formula() -> Result<String, String> {
    let d = alpha::perturbation_delta(&Q::one(), &Q::one(), &ExactScalar::one())
        .map_err(|e| e.to_string())?;
    if d != ExactScalar::Rational(q(1, 3)) {
        return Err(format!("delta(1,1,1) = {d}"));
    }
    let mut rng = rng();
    for _ in 0..100 {
        let eps = rand_q(&mut rng, 0, 5, 7) + q(1, 19);
        let c = rand_q(&mut rng, 0, 5, 5) + q(1, 17);
        let alpha_v = ExactScalar::Rational(rand_q(&mut rng, 0, 3, 9) + q(1, 29));
        let d = alpha::perturbation_delta(&eps, &c, &alpha_v).map_err(|e| e.to_string())?;
        if d.sign() <= 0 || d >= ExactScalar::Rational(c.clone()) {
            return Err("delta outside (0, c)".into());
        }
    }
    Ok("delta(1,1,1) = 1/3; 0 < delta < c on 100 random inputs".into())
}

// 10. solve_sign_system agrees with dense rational probing on 200 random
// quadratic/cubic systems.
fn sign_system_soundness() -> Result<String, String> {
    let mut rng = rng();
    let domain = AlgebraicInterval::open_rat(qi(-4), qi(4));
    for case in 0..200 {
        let cons: Vec<Constraint> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let deg = rng.gen_range(2..=3usize);
                let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-4..=4)).collect();
                let rel = match rng.gen_range(0..4) {
                    0 => Rel::Gt,
                    1 => Rel::Ge,
                    2 => Rel::Lt,
                    _ => Rel::Le,
                };
                Constraint::new(RatPoly::new(coeffs.iter().map(|&c| qi(c)).collect(), "x"), rel)
            })
            .collect();
        let sol = solve_sign_system(&cons, &domain).map_err(|e| e.to_string())?;
        for k in -79..=79i64 {
            let x = q(k, 20);
            let expected = cons.iter().all(|c| c.holds_at_rat(&x));
            let got = sol.iter().any(|iv| iv.contains_rat(&x));
            if expected != got {
                return Err(format!("case {case}: disagreement at x = {x}"));
            }
        }
    }
    Ok("200 random systems, 159 probes each: solver == pointwise evaluation".into())
}

#[test]
fn acceptance() {
    let sec = Duration::from_secs(1);
    let checks: [Check; 10] = [
        ("region reproduction", region_reproduction, sec),
        ("exceptional-curve census", exceptional_census, 5 * sec),
        ("nef boundary", nef_boundary, sec),
        ("slope identities", slope_identities, 5 * sec),
        ("criterion/region consistency", criterion_region_consistency, 10 * sec),
        ("DF evaluator", df_evaluator, sec),
        ("scaling invariance", scaling_invariance, 10 * sec),
        ("flag-bound formulas", flag_bounds, 5 * sec),
        ("perturbation formula", perturbation_formula, 5 * sec),
        ("exact-kernel soundness", sign_system_soundness, 30 * sec),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in checks.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        match result {
            Ok(detail) if elapsed <= *budget => {
                println!("{:2}. PASS {name} ({elapsed:.2?}) — {detail}", i + 1);
            }
            Ok(_) => {
                failed += 1;
                println!(
                    "{:2}. FAIL {name} — over time budget ({elapsed:.2?} > {budget:.2?})",
                    i + 1
                );
            }
            Err(e) => {
                failed += 1;
                println!("{:2}. FAIL {name} ({elapsed:.2?}) — {e}", i + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance check(s) failed");
}
