//! One-parameter polarisation families `L_t = base + t * direction` and
//! the exact set of parameters where the criterion certifies K-stability.
//!
//! Both criterion conditions are cleared to polynomial sign systems piece
//! by piece — denominator signs are verified by root isolation before any
//! multiplication — and handed to the exact kernel. Endpoints come back in
//! closed algebraic form, with the binding constraint and witness class
//! identified at each one.

use crate::exact::{
    isolate_roots, qi, signsys, Algebraic, AlgebraicInterval, Constraint, Endpoint, ExactError,
    RatPoly, Rel, Q,
};
use crate::picard::{DivisorClass, LatticeError, SurfaceModel};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegionError {
    #[error("degenerate family: base and direction are both zero")]
    DegenerateFamily,
    #[error("alpha bound pieces do not cover the ample domain")]
    PiecesDontCover,
    #[error("alpha bound denominator vanishes inside a piece")]
    DenominatorVanishes,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// One piece of a piecewise lower bound: `alpha_lb(t) = num(t)/den(t)` on
/// `domain`, with `den` of constant sign there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaPiece {
    pub domain: AlgebraicInterval,
    pub num: RatPoly,
    pub den: RatPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewiseBound {
    pub name: String,
    pub pieces: Vec<AlphaPiece>,
}

impl PiecewiseBound {
    pub fn constant(value: Q, var: &str) -> Self {
        PiecewiseBound {
            name: format!("constant {}", crate::exact::qserde::rat_to_string(&value)),
            pieces: vec![AlphaPiece {
                domain: AlgebraicInterval::full(),
                num: RatPoly::constant(value, var),
                den: RatPoly::constant(Q::one(), var),
            }],
        }
    }

    /// The built-in degree-one del Pezzo bound `min{ 1/(2-t), 1 }`:
    /// `1/(2-t)` up to the breakpoint `t = 1`, then constantly 1.
    pub fn dp1(var: &str) -> Self {
        let one = Algebraic::rational(Q::one());
        PiecewiseBound {
            name: "builtin:dp1".into(),
            pieces: vec![
                AlphaPiece {
                    domain: AlgebraicInterval::new(
                        Endpoint::NegInf,
                        Endpoint::at_closed(one.clone()),
                    ),
                    num: RatPoly::from_i64(&[1], var),
                    den: RatPoly::from_i64(&[2, -1], var),
                },
                AlphaPiece {
                    domain: AlgebraicInterval::new(Endpoint::at_closed(one), Endpoint::PosInf),
                    num: RatPoly::from_i64(&[1], var),
                    den: RatPoly::from_i64(&[1], var),
                },
            ],
        }
    }

    /// Pointwise value at a rational parameter, if some piece covers it.
    pub fn eval(&self, t: &Q) -> Option<Q> {
        self.pieces
            .iter()
            .find(|p| p.domain.contains_rat(t))
            .map(|p| p.num.eval(t) / p.den.eval(t))
    }

    /// The bound shifted up by a constant (used to probe monotonicity:
    /// enlarging the bound can only grow the region).
    pub fn shifted(&self, eps: &Q) -> Self {
        PiecewiseBound {
            name: format!(
                "{} + {}",
                self.name,
                crate::exact::qserde::rat_to_string(eps)
            ),
            pieces: self
                .pieces
                .iter()
                .map(|p| AlphaPiece {
                    domain: p.domain.clone(),
                    num: p.num.add(&p.den.scale(eps)),
                    den: p.den.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarisationFamily {
    pub surface: SurfaceModel,
    pub base: DivisorClass,
    pub direction: DivisorClass,
    pub parameter: String,
    pub alpha_lb: PiecewiseBound,
}

impl PolarisationFamily {
    /// The built-in family `L_lambda = 3H - E1 - ... - E7 - lambda*E8` on
    /// the blow-up at 8 points, with the built-in alpha bound.
    pub fn dp1() -> Self {
        let surface = SurfaceModel::new(8).unwrap();
        let mut e = vec![Q::one(); 8];
        e[7] = Q::zero();
        let base = DivisorClass::new(qi(3), e);
        let mut d = vec![Q::zero(); 8];
        d[7] = Q::one(); // subtracting E8
        let direction = DivisorClass::new(qi(0), d);
        PolarisationFamily {
            surface,
            base,
            direction,
            parameter: "lambda".into(),
            alpha_lb: PiecewiseBound::dp1("lambda"),
        }
    }

    /// The class at a rational parameter value.
    pub fn at(&self, t: &Q) -> DivisorClass {
        self.base.add(&self.direction.scale(t))
    }

    /// `L_t . C` as a linear polynomial in `t`.
    fn pairing_poly(&self, c: &DivisorClass) -> Result<RatPoly, RegionError> {
        let s = &self.surface;
        Ok(RatPoly::new(
            vec![s.intersect(&self.base, c)?, s.intersect(&self.direction, c)?],
            &self.parameter,
        ))
    }

    /// `L_t . L_t` as a quadratic polynomial in `t`.
    fn self_pairing_poly(&self) -> Result<RatPoly, RegionError> {
        let s = &self.surface;
        Ok(RatPoly::new(
            vec![
                s.self_intersection(&self.base)?,
                qi(2) * s.intersect(&self.base, &self.direction)?,
                s.self_intersection(&self.direction)?,
            ],
            &self.parameter,
        ))
    }
}

/// The exact set `{ t : L_t ample }`, from `L_t . C > 0` over the curve
/// test set together with `L_t^2 > 0`.
pub fn ample_domain(f: &PolarisationFamily) -> Result<Vec<AlgebraicInterval>, RegionError> {
    let mut cons = vec![Constraint::new(f.self_pairing_poly()?, Rel::Gt)];
    for c in f.surface.nef_test_set() {
        cons.push(Constraint::new(f.pairing_poly(c)?, Rel::Gt));
    }
    Ok(signsys::solve_sign_system(&cons, &AlgebraicInterval::full())?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BindingCondition {
    ConditionI,
    ConditionII,
    AmpleBoundary,
}

/// A constraint that vanishes exactly at a region endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointBinding {
    pub endpoint: Algebraic,
    pub side: BindingSide,
    pub condition: BindingCondition,
    pub constraint: RatPoly,
    pub rel: Rel,
    pub witness: Option<DivisorClass>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BindingSide {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionResult {
    pub parameter: String,
    pub ample_domain: Vec<AlgebraicInterval>,
    /// The solution of the sign systems as solved: condition (i) strict,
    /// condition (ii) non-strict, so endpoints may be attained.
    pub solved: Vec<AlgebraicInterval>,
    /// The certified open region: interior of `solved`.
    pub region: Vec<AlgebraicInterval>,
    pub bindings: Vec<EndpointBinding>,
    pub hypotheses: Vec<String>,
}

struct CellSystem {
    cell: AlgebraicInterval,
    cond_i: RatPoly,
    cond_ii: Vec<(DivisorClass, RatPoly)>,
}

fn cell_sign(cell: &AlgebraicInterval, p: &RatPoly) -> i32 {
    let (lo, hi) = cell.endpoints().expect("non-empty cell");
    if let (Some(a), Some(b)) = (lo.value(), hi.value()) {
        if a == b {
            return a.sign_of_poly(p);
        }
    }
    let sample = signsys::rational_between(lo.value(), hi.value());
    crate::exact::sign_q(&p.eval(&sample))
}

/// The exact parameter set where the criterion certifies K-stability:
/// within the ample domain, `alpha_lb(t) > (2/3) mu(L_t)` and
/// `-K - (2/3) mu(L_t) L_t` nef, cleared to polynomial form per piece.
pub fn certified_region(f: &PolarisationFamily) -> Result<RegionResult, RegionError> {
    if f.base.is_zero() && f.direction.is_zero() {
        return Err(RegionError::DegenerateFamily);
    }
    let s = &f.surface;
    let l2 = f.self_pairing_poly()?;
    let kl = f.pairing_poly(&s.anticanonical())?;

    let amp = ample_domain(f)?;
    let mut systems: Vec<CellSystem> = Vec::new();
    let mut parts: Vec<AlgebraicInterval> = Vec::new();

    for a in &amp {
        let mut covered: Vec<AlgebraicInterval> = Vec::new();
        for piece in &f.alpha_lb.pieces {
            let cell = a.intersect(&piece.domain);
            if cell.is_empty() {
                continue;
            }
            covered.push(cell.clone());

            // denominator must keep one sign on the cell
            if !piece.den.is_zero() && piece.den.degree().unwrap_or(0) >= 1 {
                for (root, _) in isolate_roots(&piece.den)? {
                    if cell.contains(&root) {
                        return Err(RegionError::DenominatorVanishes);
                    }
                }
            }
            let den_sign = cell_sign(&cell, &piece.den);
            if den_sign == 0 {
                return Err(RegionError::DenominatorVanishes);
            }

            // condition (i): alpha_num/alpha_den > (2/3)(-K.L_t)/L_t^2,
            // cleared by den (sign-corrected) and by L_t^2 > 0
            let cond_i = piece
                .num
                .mul(&l2)
                .scale(&qi(3))
                .sub(&piece.den.mul(&kl).scale(&qi(2)))
                .scale(&qi(den_sign as i64));

            // condition (ii), per test class C:
            // 3 (-K.C) L_t^2 - 2 (-K.L_t)(L_t.C) >= 0
            let mut cond_ii = Vec::new();
            for c in s.nef_test_set() {
                let kc = s.intersect(&s.anticanonical(), c)?;
                let p = l2
                    .scale(&(qi(3) * kc))
                    .sub(&kl.mul(&f.pairing_poly(c)?).scale(&qi(2)));
                cond_ii.push((c.clone(), p));
            }

            let mut cons = vec![Constraint::new(cond_i.clone(), Rel::Gt)];
            cons.extend(
                cond_ii
                    .iter()
                    .map(|(_, p)| Constraint::new(p.clone(), Rel::Ge)),
            );
            parts.extend(signsys::solve_sign_system(&cons, &cell)?);
            systems.push(CellSystem {
                cell,
                cond_i,
                cond_ii,
            });
        }
        if AlgebraicInterval::union_all(covered) != vec![a.clone()] {
            return Err(RegionError::PiecesDontCover);
        }
    }

    let solved = AlgebraicInterval::union_all(parts);
    let region: Vec<AlgebraicInterval> = solved
        .iter()
        .map(AlgebraicInterval::interior)
        .filter(|i| !i.is_empty())
        .collect();

    // ample-boundary constraints, for endpoint attribution
    let mut ample_cons: Vec<(Option<DivisorClass>, RatPoly)> = vec![(None, l2)];
    for c in s.nef_test_set() {
        ample_cons.push((Some(c.clone()), f.pairing_poly(c)?));
    }

    let mut bindings = Vec::new();
    for iv in &region {
        let (lo, hi) = iv.endpoints().expect("non-empty");
        for (ep, side) in [(lo, BindingSide::Lower), (hi, BindingSide::Upper)] {
            let Some(v) = ep.value() else { continue };
            for sys in &systems {
                if !sys.cell.closure().contains(v) {
                    continue;
                }
                if v.sign_of_poly(&sys.cond_i) == 0 {
                    bindings.push(EndpointBinding {
                        endpoint: v.clone(),
                        side,
                        condition: BindingCondition::ConditionI,
                        constraint: sys.cond_i.clone(),
                        rel: Rel::Gt,
                        witness: None,
                    });
                }
                for (c, p) in &sys.cond_ii {
                    if v.sign_of_poly(p) == 0 {
                        bindings.push(EndpointBinding {
                            endpoint: v.clone(),
                            side,
                            condition: BindingCondition::ConditionII,
                            constraint: p.clone(),
                            rel: Rel::Ge,
                            witness: Some(c.clone()),
                        });
                    }
                }
            }
            for (c, p) in &ample_cons {
                if !p.is_zero() && v.sign_of_poly(p) == 0 {
                    bindings.push(EndpointBinding {
                        endpoint: v.clone(),
                        side,
                        condition: BindingCondition::AmpleBoundary,
                        constraint: p.clone(),
                        rel: Rel::Gt,
                        witness: c.clone(),
                    });
                }
            }
        }
    }
    bindings.dedup();

    let mut hypotheses = vec![format!("alpha lower bound: {}", f.alpha_lb.name)];
    if s.general_position() {
        hypotheses.push("points in general position (declared, not verified)".into());
    }
    if s.no_cuspidal_anticanonical() {
        hypotheses.push("no cuspidal anticanonical members (declared)".into());
    }

    Ok(RegionResult {
        parameter: f.parameter.clone(),
        ample_domain: amp,
        solved,
        region,
        bindings,
        hypotheses,
    })
}

/// Human-readable report: exact endpoint forms, decimal approximations
/// flagged as approximate, binding constraints, inherited hypotheses.
pub fn region_report(r: &RegionResult) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    if r.region.is_empty() {
        let _ = writeln!(out, "no certified parameters");
    } else {
        let _ = writeln!(out, "certified K-stable region (parameter {}):", r.parameter);
        for iv in &r.region {
            let _ = write!(out, "  {iv}");
            if let Some((lo, hi)) = iv.endpoints() {
                let approx = |e: &Endpoint| e.value().map(|v| v.approx_f64());
                if let (Some(a), Some(b)) = (approx(lo), approx(hi)) {
                    let _ = write!(out, "   [~ ({a:.6}, {b:.6}), approximate]");
                }
            }
            let _ = writeln!(out);
        }
    }
    let _ = writeln!(out, "ample domain:");
    for iv in &r.ample_domain {
        let _ = writeln!(out, "  {iv}");
    }
    if !r.bindings.is_empty() {
        let _ = writeln!(out, "binding constraints at endpoints:");
        for b in &r.bindings {
            let side = match b.side {
                BindingSide::Lower => "lower",
                BindingSide::Upper => "upper",
            };
            let kind = match b.condition {
                BindingCondition::ConditionI => "condition (i)",
                BindingCondition::ConditionII => "condition (ii)",
                BindingCondition::AmpleBoundary => "ample boundary",
            };
            let _ = write!(
                out,
                "  {side} endpoint {} bound by {kind}: {} {} 0",
                b.endpoint,
                b.constraint,
                b.rel.symbol()
            );
            match &b.witness {
                Some(c) => {
                    let _ = writeln!(out, " (witness class {c})");
                }
                None => {
                    let _ = writeln!(out);
                }
            }
        }
    }
    let _ = writeln!(out, "hypotheses:");
    for h in &r.hypotheses {
        let _ = writeln!(out, "  {h}");
    }
    out
}
