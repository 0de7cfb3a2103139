//! Command-line front end: parse surfaces, divisors and families, dispatch
//! to the library, emit machine-stable JSON or human-readable reports.
//!
//! Exit code 0 means the computation ran (an `Inconclusive` verdict is a
//! computed result); non-zero is reserved for input and usage errors.

mod divisor;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kstab::alpha::{self, FlagResolutionData};
use kstab::dfcalc::{self, IntersectionTable};
use kstab::exact::{qserde, ExactScalar, Q};
use kstab::picard::NefThreshold;
use kstab::region::{self, PiecewiseBound, PolarisationFamily};
use kstab::stability::{self, Verdict};
use kstab::{DivisorClass, SurfaceModel};
use num_traits::One;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "kstab",
    about = "Exact K-stability certification for polarised del Pezzo surfaces"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    /// Optional key=value config file providing surface defaults
    /// (keys: surface, r, general_position, no_cuspidal_anticanonical).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Args)]
struct SurfaceArgs {
    /// Named surface; `dp1` is the blow-up of the plane at 8 general points.
    #[arg(long)]
    surface: Option<String>,
    /// Number of blown-up points (0..=8); alternative to --surface.
    #[arg(long)]
    r: Option<usize>,
    /// Drop the general-position hypothesis.
    #[arg(long)]
    no_general_position: bool,
    /// Drop the no-cuspidal-anticanonical-member hypothesis.
    #[arg(long)]
    allow_cuspidal: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Basic invariants of the surface: degree, canonical class, curve count.
    SurfaceInfo {
        #[command(flatten)]
        surface: SurfaceArgs,
    },
    /// Intersection number of two divisor classes.
    Intersect {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        d1: String,
        #[arg(long, allow_hyphen_values = true)]
        d2: String,
    },
    /// Enumerate (or count) the exceptional curve classes.
    Curves {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        count: bool,
    },
    /// Nef test with failing witness class if any.
    Nef {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// Ample test with failing witness class if any.
    Ample {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// sup { t >= 0 : base - t*dir nef }, with the binding class.
    NefThreshold {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
    },
    /// Slope mu(X, L) = (-K.L)/(L.L).
    Slope {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        l: String,
    },
    /// Alpha-invariant bounds: the built-in dp1 lower bound at a parameter
    /// value, or a flag-resolution upper bound from a JSON data file.
    AlphaBound {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Parameter of the dp1 family L = 3H - E1 - ... - E7 - lambda*E8.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// JSON file with flag-resolution rows {a, b, c, d?}.
        #[arg(long)]
        flag_data: Option<PathBuf>,
        /// Cone angle for the log upper bound (default 1).
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
    },
    /// Run the K-stability criterion and print the certificate.
    Certify {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        l: String,
        /// Alpha lower bound: an exact scalar, or `builtin:dp1`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Provenance of a user-supplied bound (required unless builtin).
        #[arg(long)]
        provenance: Option<String>,
    },
    /// Log variant of the criterion at cone angle beta.
    LogCertify {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        l: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        provenance: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Largest certified cone angle in [0, 1].
    MaxBeta {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        l: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        provenance: Option<String>,
    },
    /// Certified K-stable region of a one-parameter polarisation family.
    Region {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Family expression, e.g. "3H - E1 - E2 - ... - E7 - lambda*E8";
        /// defaults to the built-in dp1 family.
        #[arg(long, allow_hyphen_values = true)]
        family: Option<String>,
        #[arg(long, default_value = "lambda")]
        parameter: String,
        /// Alpha lower bound: `builtin:dp1` or `const:<rational>`.
        #[arg(long, default_value = "builtin:dp1")]
        alpha: String,
    },
    /// Donaldson-Futaki invariant of an intersection table (JSON file).
    DfEval {
        #[arg(long)]
        table: PathBuf,
        /// Cone angle for the log invariant (default: plain invariant).
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
    },
    /// Intersection table and invariant for the deformation to the normal
    /// cone of a smooth point.
    DfNormalCone {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        l: String,
    },
    /// Check the sign conventions of an intersection table file.
    ValidateTable {
        #[arg(long)]
        table: PathBuf,
    },
    /// Perturbation margin delta(eps, c, alpha) = c*eps / (2*alpha + eps).
    PerturbDelta {
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
}

struct CliError(String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

type Out = Result<(String, Value), CliError>;

#[derive(Default)]
struct ConfigDefaults {
    surface: Option<String>,
    r: Option<usize>,
    general_position: Option<bool>,
    no_cuspidal: Option<bool>,
}

fn load_config(path: &PathBuf) -> Result<ConfigDefaults, CliError> {
    let mut cfg = ConfigDefaults::default();
    for (lineno, line) in fs::read_to_string(path)?.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError(format!("config line {}: expected key=value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "surface" => cfg.surface = Some(value.to_string()),
            "r" => cfg.r = Some(value.parse()?),
            "general_position" => cfg.general_position = Some(value.parse()?),
            "no_cuspidal_anticanonical" => cfg.no_cuspidal = Some(value.parse()?),
            _ => return Err(CliError(format!("unknown config key {key:?}"))),
        }
    }
    Ok(cfg)
}

fn resolve_surface(args: &SurfaceArgs, cfg: &ConfigDefaults) -> Result<SurfaceModel, CliError> {
    let name = args.surface.as_ref().or(cfg.surface.as_ref());
    let r = match (name, args.r.or(cfg.r)) {
        (Some(n), _) if n == "dp1" => 8,
        (Some(n), _) => return Err(CliError(format!("unknown surface {n:?} (expected dp1)"))),
        (None, Some(r)) => r,
        (None, None) => return Err(CliError("specify --surface dp1 or --r N".into())),
    };
    let gp = !args.no_general_position && cfg.general_position.unwrap_or(true);
    let nc = !args.allow_cuspidal && cfg.no_cuspidal.unwrap_or(true);
    Ok(SurfaceModel::with_flags(r, gp, nc)?)
}

fn parse_rat(s: &str) -> Result<Q, CliError> {
    Ok(qserde::rat_from_str(s)?)
}

fn to_sorted_json<T: serde::Serialize>(x: &T) -> Result<Value, CliError> {
    // serde_json maps are ordered, so passing through Value sorts all keys
    Ok(serde_json::to_value(x)?)
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::KStableCertified => "KStableCertified",
        Verdict::Inconclusive => "Inconclusive",
    }
}

/// The alpha lower bound for a single polarisation: either a user-supplied
/// exact scalar (with provenance) or the built-in dp1 bound, for which the
/// class must lie on the dp1 family so the parameter can be read off.
fn resolve_alpha(
    spec: &str,
    provenance: Option<&String>,
    s: &SurfaceModel,
    l: &DivisorClass,
) -> Result<(ExactScalar, String), CliError> {
    if spec == "builtin:dp1" {
        let lam = dp1_parameter_of(s, l)?;
        let val = alpha::dp1_alpha_lower(&ExactScalar::Rational(lam), s)?;
        return Ok((val, "builtin:dp1".into()));
    }
    let prov = provenance
        .ok_or_else(|| CliError("user-supplied --alpha requires --provenance".into()))?;
    Ok((ExactScalar::from_str(spec)?, prov.clone()))
}

fn dp1_parameter_of(s: &SurfaceModel, l: &DivisorClass) -> Result<Q, CliError> {
    let on_family = s.r() == 8
        && *l.h() == kstab::exact::qi(3)
        && l.e()[..7].iter().all(Q::is_one);
    if !on_family {
        return Err(CliError(format!(
            "builtin:dp1 applies to classes 3H - E1 - ... - E7 - lambda*E8; got {l}"
        )));
    }
    Ok(l.e()[7].clone())
}

fn positivity_out(what: &str, d: &DivisorClass, p: &kstab::picard::PositivityCheck) -> Out {
    let text = match (&p.holds, &p.witness) {
        (true, _) => format!("{d} is {what}"),
        (false, Some(w)) => format!("{d} is not {what}: fails against {w}"),
        (false, None) => format!("{d} is not {what}: non-positive self-intersection"),
    };
    Ok((
        text,
        json!({
            "class": to_sorted_json(d)?,
            "holds": p.holds,
            "witness": p.witness.as_ref().map(to_sorted_json).transpose()?,
        }),
    ))
}

fn certificate_out(s: &SurfaceModel, cert: &stability::StabilityCertificate) -> Out {
    let openness = stability::openness_margins(s, cert)?;
    let mut text = format!(
        "verdict: {}\npolarisation: {}\nslope: {}\nthreshold: {}\ncondition (i): alpha >= {} vs threshold {} (margin {}) -> {}\ncondition (ii): {} nef -> {}\n",
        verdict_str(cert.verdict),
        cert.polarisation,
        cert.slope,
        cert.threshold,
        cert.condition_i.alpha_lower,
        cert.condition_i.threshold,
        cert.condition_i.margin,
        if cert.condition_i.pass { "pass" } else { "fail" },
        cert.condition_ii.tested_class,
        if cert.condition_ii.pass { "pass" } else { "fail" },
    );
    if let Some(b) = &cert.beta {
        text.push_str(&format!("cone angle beta: {}\n", qserde::rat_to_string(b)));
    }
    for h in &cert.hypotheses {
        text.push_str(&format!("hypothesis: {h}\n"));
    }
    if let Some(a) = &openness.annotation {
        text.push_str(&format!("openness: {a}\n"));
    }
    Ok((
        text,
        json!({
            "certificate": to_sorted_json(cert)?,
            "openness": to_sorted_json(&openness)?,
        }),
    ))
}

fn run(cmd: &Cmd, cfg: &ConfigDefaults) -> Out {
    match cmd {
        Cmd::SurfaceInfo { surface } => {
            let s = resolve_surface(surface, cfg)?;
            let text = format!(
                "Bl_{} P^2: degree {}, canonical class {}, {} exceptional curve classes\nhypotheses: general position = {}, no cuspidal anticanonical = {}",
                s.r(),
                s.degree(),
                s.canonical(),
                s.exceptional_curves().len(),
                s.general_position(),
                s.no_cuspidal_anticanonical(),
            );
            Ok((
                text,
                json!({
                    "r": s.r(),
                    "degree": s.degree(),
                    "canonical": to_sorted_json(s.canonical())?,
                    "exceptional_count": s.exceptional_curves().len(),
                    "general_position": s.general_position(),
                    "no_cuspidal_anticanonical": s.no_cuspidal_anticanonical(),
                }),
            ))
        }
        Cmd::Intersect { surface, d1, d2 } => {
            let s = resolve_surface(surface, cfg)?;
            let a = divisor::parse_divisor(d1, s.r())?;
            let b = divisor::parse_divisor(d2, s.r())?;
            let v = s.intersect(&a, &b)?;
            Ok((
                format!("({a}) . ({b}) = {}", qserde::rat_to_string(&v)),
                json!({
                    "d1": to_sorted_json(&a)?,
                    "d2": to_sorted_json(&b)?,
                    "value": qserde::rat_to_string(&v),
                }),
            ))
        }
        Cmd::Curves { surface, count } => {
            let s = resolve_surface(surface, cfg)?;
            let curves = s.exceptional_curves();
            if *count {
                Ok((
                    format!("{}", curves.len()),
                    json!({ "r": s.r(), "count": curves.len() }),
                ))
            } else {
                let mut text = String::new();
                for c in curves {
                    text.push_str(&format!("{c}\n"));
                }
                text.push_str(&format!("total: {}", curves.len()));
                Ok((
                    text,
                    json!({
                        "r": s.r(),
                        "count": curves.len(),
                        "classes": to_sorted_json(&curves)?,
                    }),
                ))
            }
        }
        Cmd::Nef { surface, d } => {
            let s = resolve_surface(surface, cfg)?;
            let c = divisor::parse_divisor(d, s.r())?;
            positivity_out("nef", &c, &s.is_nef(&c)?)
        }
        Cmd::Ample { surface, d } => {
            let s = resolve_surface(surface, cfg)?;
            let c = divisor::parse_divisor(d, s.r())?;
            positivity_out("ample", &c, &s.is_ample(&c)?)
        }
        Cmd::NefThreshold { surface, base, dir } => {
            let s = resolve_surface(surface, cfg)?;
            let b = divisor::parse_divisor(base, s.r())?;
            let d = divisor::parse_divisor(dir, s.r())?;
            let (t, witness) = s.nef_threshold(&b, &d)?;
            let (text, value) = match &t {
                NefThreshold::Finite(v) => (
                    format!(
                        "threshold = {v}, binding class {}",
                        witness.as_ref().expect("finite threshold has witness")
                    ),
                    Some(to_sorted_json(v)?),
                ),
                NefThreshold::Infinite => ("threshold = infinite".into(), None),
            };
            Ok((
                text,
                json!({
                    "base": to_sorted_json(&b)?,
                    "dir": to_sorted_json(&d)?,
                    "threshold": value,
                    "witness": witness.as_ref().map(to_sorted_json).transpose()?,
                }),
            ))
        }
        Cmd::Slope { surface, l } => {
            let s = resolve_surface(surface, cfg)?;
            let c = divisor::parse_divisor(l, s.r())?;
            let mu = stability::slope(&s, &c)?;
            Ok((
                format!("mu = {}", qserde::rat_to_string(&mu)),
                json!({
                    "polarisation": to_sorted_json(&c)?,
                    "slope": qserde::rat_to_string(&mu),
                }),
            ))
        }
        Cmd::AlphaBound {
            surface,
            lambda,
            flag_data,
            beta,
        } => match (lambda, flag_data) {
            (Some(lam), None) => {
                let s = resolve_surface(surface, cfg)?;
                let lam = parse_rat(lam)?;
                let v = alpha::dp1_alpha_lower(&ExactScalar::Rational(lam.clone()), &s)?;
                Ok((
                    format!("alpha lower bound at lambda = {}: {v}", qserde::rat_to_string(&lam)),
                    json!({
                        "lambda": qserde::rat_to_string(&lam),
                        "lower": to_sorted_json(&v)?,
                        "provenance": "builtin:dp1",
                    }),
                ))
            }
            (None, Some(path)) => {
                let data: FlagResolutionData = serde_json::from_str(&fs::read_to_string(path)?)?;
                let beta = beta.as_deref().map(parse_rat).transpose()?.unwrap_or_else(Q::one);
                let v = alpha::log_flag_upper_bound(&data, &beta)?;
                Ok((
                    format!("alpha upper bound: {v} (beta = {})", qserde::rat_to_string(&beta)),
                    json!({
                        "upper": to_sorted_json(&v)?,
                        "beta": qserde::rat_to_string(&beta),
                    }),
                ))
            }
            _ => Err(CliError("give exactly one of --lambda or --flag-data".into())),
        },
        Cmd::Certify {
            surface,
            l,
            alpha,
            provenance,
        } => {
            let s = resolve_surface(surface, cfg)?;
            let c = divisor::parse_divisor(l, s.r())?;
            let (val, prov) = resolve_alpha(alpha, provenance.as_ref(), &s, &c)?;
            let mut cert = stability::check_criterion(&s, &c, &val)?;
            cert.hypotheses.push(format!("alpha lower bound provenance: {prov}"));
            certificate_out(&s, &cert)
        }
        Cmd::LogCertify {
            surface,
            l,
            alpha,
            provenance,
            beta,
        } => {
            let s = resolve_surface(surface, cfg)?;
            let c = divisor::parse_divisor(l, s.r())?;
            let (val, prov) = resolve_alpha(alpha, provenance.as_ref(), &s, &c)?;
            let beta = parse_rat(beta)?;
            let mut cert = stability::check_log_criterion(&s, &c, &val, &beta)?;
            cert.hypotheses.push(format!("alpha lower bound provenance: {prov}"));
            certificate_out(&s, &cert)
        }
        Cmd::MaxBeta {
            surface,
            l,
            alpha,
            provenance,
        } => {
            let s = resolve_surface(surface, cfg)?;
            let c = divisor::parse_divisor(l, s.r())?;
            let (val, _) = resolve_alpha(alpha, provenance.as_ref(), &s, &c)?;
            let res = stability::max_certified_beta(&s, &c, &val)?;
            let text = match &res.value {
                Some(v) if res.attained => format!("max certified beta = {v} (attained)"),
                Some(v) => format!("max certified beta = {v} (supremum, not attained)"),
                None => "nothing certified: condition (ii) fails".into(),
            };
            Ok((text, json!({ "result": to_sorted_json(&res)? })))
        }
        Cmd::Region {
            surface,
            family,
            parameter,
            alpha,
        } => {
            let s = resolve_surface(surface, cfg)?;
            let (base, direction) = match family {
                Some(expr) => divisor::parse_family(expr, s.r(), Some(parameter))?,
                None => {
                    if s.r() != 8 {
                        return Err(CliError("default family requires --surface dp1".into()));
                    }
                    let f = PolarisationFamily::dp1();
                    (f.base, f.direction)
                }
            };
            let alpha_lb = if alpha == "builtin:dp1" {
                PiecewiseBound::dp1(parameter)
            } else if let Some(v) = alpha.strip_prefix("const:") {
                PiecewiseBound::constant(parse_rat(v)?, parameter)
            } else {
                return Err(CliError(
                    "region --alpha must be builtin:dp1 or const:<rational>".into(),
                ));
            };
            let f = PolarisationFamily {
                surface: s,
                base,
                direction,
                parameter: parameter.clone(),
                alpha_lb,
            };
            let res = region::certified_region(&f)?;
            Ok((
                region::region_report(&res),
                json!({ "result": to_sorted_json(&res)? }),
            ))
        }
        Cmd::DfEval { table, beta } => {
            let t: IntersectionTable = serde_json::from_str(&fs::read_to_string(table)?)?;
            let (v, beta_str) = match beta {
                Some(b) => {
                    let b = parse_rat(b)?;
                    (dfcalc::df_log_evaluate(&t, &b)?, Some(qserde::rat_to_string(&b)))
                }
                None => (dfcalc::df_evaluate(&t), None),
            };
            Ok((
                format!("DF = {v}"),
                json!({ "value": to_sorted_json(&v)?, "beta": beta_str }),
            ))
        }
        Cmd::DfNormalCone { surface, l } => {
            let s = resolve_surface(surface, cfg)?;
            let c = divisor::parse_divisor(l, s.r())?;
            let t = dfcalc::normal_cone_point_table(&s, &c)?;
            let v = dfcalc::df_evaluate(&t);
            Ok((
                format!("DF = {v} for the normal-cone degeneration of ({c})"),
                json!({ "table": to_sorted_json(&t)?, "value": to_sorted_json(&v)? }),
            ))
        }
        Cmd::ValidateTable { table } => {
            let t: IntersectionTable = serde_json::from_str(&fs::read_to_string(table)?)?;
            let report = dfcalc::validate_sign_lemmas(&t);
            let mut text = format!(
                "sign conventions: {}",
                if report.passed { "all hold" } else { "violations found" }
            );
            for f in &report.flags {
                text.push_str(&format!("\n  {f}"));
            }
            Ok((text, json!({ "report": to_sorted_json(&report)? })))
        }
        Cmd::PerturbDelta { eps, c, alpha } => {
            let eps = parse_rat(eps)?;
            let cc = parse_rat(c)?;
            let a = ExactScalar::from_str(alpha)?;
            let v = alpha::perturbation_delta(&eps, &cc, &a)?;
            Ok((
                format!("delta = {v}"),
                json!({ "delta": to_sorted_json(&v)? }),
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.config.as_ref().map(load_config).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {}", e.0);
            return ExitCode::from(2);
        }
    };
    match run(&cli.cmd, &cfg) {
        Ok((text, value)) => {
            match cli.output {
                Output::Text => println!("{}", text.trim_end()),
                Output::Json => {
                    println!("{}", serde_json::to_string_pretty(&value).expect("serializable"))
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.0);
            ExitCode::from(2)
        }
    }
}
