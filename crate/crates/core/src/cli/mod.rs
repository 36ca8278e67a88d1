//! Command-line front end: parse a system file, run one analysis, print JSON.
//!
//! Exit codes: 0 success, 1 domain error (reported as JSON on stdout), 2 usage error.

pub mod dsl;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::algebra::{MultiPoly, RatFunc, Rational, Scalar};
use crate::darboux::{darboux_search, invariant_family_b_eq_d, DarbouxReport, InvariantCurve};
use crate::error::{Error, Result};
use crate::forms::{rosenlicht_normalize, BasisElement, LogCombination};
use crate::lv::{
    brestovski_reduce, displayed_coefficient_polynomial, enumerate_transform_solutions, omega1_form,
    ortho_coefficient_system, LVSystem, Variant,
};
use crate::minimality::{check_strong_minimality, MinimalityReport};
use crate::numeric::integrate_rk4;
use crate::symbol::Symbol;
use crate::vectorfield::{is_invariant, lie_derivative, singular_points, SingularPoint, VectorField};

use dsl::{parse_assignment, parse_expr, parse_scalar, parse_system, SystemSpec};

#[derive(Parser, Debug)]
#[command(name = "invcurve", version, about = "Invariant curves and Lotka-Volterra analysis of polynomial vector fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SystemArgs {
    /// System description file
    #[arg(long)]
    system: PathBuf,
    /// Specialize a parameter, e.g. --set b=2
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lie derivative of a polynomial, with its cofactor when invariant
    Lie {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        poly: String,
    },
    /// Invariant polynomials up to a degree bound
    Darboux {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// Singular points with coordinates in the parameter field
    Singular {
        #[command(flatten)]
        sys: SystemArgs,
    },
    /// Singular-point criterion for strong minimality
    Minimality {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// Invariance of du + sum c dv/v and its normalized log part
    FormsCheck {
        #[command(flatten)]
        sys: SystemArgs,
        /// The function u
        #[arg(long, default_value = "0")]
        exact: String,
        /// A log term COEFF:ARG, repeatable
        #[arg(long = "log", value_name = "COEFF:ARG")]
        logs: Vec<String>,
        /// Comma-separated Q-basis for the coefficients ("1" and parameter names)
        #[arg(long)]
        basis: Option<String>,
    },
    /// Curves, minimality and reductions for X' = X(aY + b), Y' = Y(cX + d)
    LvAnalyze {
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "1")]
        c: String,
        #[arg(long)]
        d: String,
        /// classical, or 2d for Y' = Y(cX + dY)
        #[arg(long, default_value = "classical")]
        variant: String,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// Affine relations between solutions of two normalized systems
    LvOrtho {
        #[arg(long)]
        b1: String,
        #[arg(long)]
        d1: String,
        #[arg(long)]
        b2: String,
        #[arg(long)]
        d2: String,
    },
    /// RK4 trajectory of a specialized system
    Simulate {
        #[command(flatten)]
        sys: SystemArgs,
        /// Comma-separated start point
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Emit t,x,y rows instead of JSON
        #[arg(long)]
        csv: bool,
    },
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

struct Report {
    input: Value,
    result: Value,
    caveats: Vec<String>,
    raw: Option<String>,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Lie { .. } => "lie",
        Command::Darboux { .. } => "darboux",
        Command::Singular { .. } => "singular",
        Command::Minimality { .. } => "minimality",
        Command::FormsCheck { .. } => "forms-check",
        Command::LvAnalyze { .. } => "lv-analyze",
        Command::LvOrtho { .. } => "lv-ortho",
        Command::Simulate { .. } => "simulate",
    }
}

/// Run the tool on an argument vector (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let name = command_name(&cli.command);
    let mut input = Value::Null;
    match dispatch(&cli.command, &mut input) {
        Ok(Report { raw: Some(text), .. }) => Outcome { code: 0, stdout: text, stderr: String::new() },
        Ok(r) => Outcome {
            code: 0,
            stdout: envelope(name, r.input, r.result, r.caveats, None),
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Domain(e)) => Outcome {
            code: 1,
            stdout: envelope(name, input, Value::Null, vec![], Some(&e)),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn envelope(command: &str, input: Value, result: Value, caveats: Vec<String>, error: Option<&Error>) -> String {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("input".into(), input);
    m.insert("result".into(), result);
    m.insert("caveats".into(), json!(caveats));
    if let Some(e) = error {
        m.insert("error".into(), json!({"kind": e.kind(), "message": e.to_string()}));
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("json");
    s.push('\n');
    s
}

fn load(sys: &SystemArgs, input: &mut Value) -> std::result::Result<(SystemSpec, VectorField), Failure> {
    let text = std::fs::read_to_string(&sys.system)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", sys.system.display())))?;
    let sets = sys
        .set
        .iter()
        .map(|s| parse_assignment(s))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let set_json: Map<String, Value> = sets.iter().map(|(k, v)| (k.clone(), json!(v.to_string()))).collect();
    *input = json!({"system": sys.system.display().to_string(), "set": set_json});
    let spec = parse_system(&text)?;
    input["spec"] = json!(spec.to_string());
    let field = spec.to_field(&sets)?;
    Ok((spec, field))
}

fn add_input(input: &mut Value, key: &str, v: Value) {
    if let Value::Object(m) = input {
        m.insert(key.into(), v);
    }
}

fn point_json(p: &SingularPoint) -> Value {
    json!(p.coordinates.iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn curve_json(c: &InvariantCurve) -> Value {
    json!({
        "poly": c.poly.to_string(),
        "cofactor": c.cofactor.to_string(),
        "definition_field": c.definition_field.to_string(),
    })
}

fn darboux_json(r: &DarbouxReport) -> Value {
    json!({
        "degree_bound": r.degree_bound,
        "completeness": r.completeness.to_string(),
        "curves": r.curves.iter().map(curve_json).collect::<Vec<_>>(),
        "families": r.families.iter().map(|f| json!({
            "cofactor": f.cofactor.to_string(),
            "basis": f.basis.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "branching_conditions": r.branching_conditions.iter().map(|c| format!("{c} = 0")).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

fn minimality_json(r: &MinimalityReport) -> Value {
    json!({
        "verdict": r.verdict.to_string(),
        "witness": r.witness.as_ref().map(point_json),
        "singular_points": r.singular_points.points.iter().map(point_json).collect::<Vec<_>>(),
        "curves_checked": darboux_json(&r.curves_checked),
    })
}

fn poly_in_field(s: &VectorField, text: &str) -> Result<MultiPoly> {
    let r = parse_expr(text)?.eval(&Default::default())?;
    MultiPoly::from_ratfunc(s.vars(), &r).ok_or(Error::NotPolynomial)
}

fn dispatch(cmd: &Command, input: &mut Value) -> std::result::Result<Report, Failure> {
    let report = |input: &Value, result: Value, caveats: Vec<String>| Report {
        input: input.clone(),
        result,
        caveats,
        raw: None,
    };
    match cmd {
        Command::Lie { sys, poly } => {
            let (_, s) = load(sys, input)?;
            add_input(input, "poly", json!(poly));
            let p = poly_in_field(&s, poly)?;
            let l = lie_derivative(&s, &p)?;
            let k = if p.is_zero() { None } else { is_invariant(&s, &p)? };
            Ok(report(
                input,
                json!({"poly": p.to_string(), "lie_derivative": l.to_string(), "cofactor": k.map(|k| k.to_string())}),
                vec![],
            ))
        }
        Command::Darboux { sys, max_degree } => {
            let (_, s) = load(sys, input)?;
            add_input(input, "max_degree", json!(max_degree));
            let r = darboux_search(&s, *max_degree)?;
            let mut caveats = vec![format!("complete only up to degree {max_degree}")];
            if !r.branching_conditions.is_empty() {
                caveats.push("answer holds for generic parameters; see branching_conditions".into());
            }
            Ok(report(input, darboux_json(&r), caveats))
        }
        Command::Singular { sys } => {
            let (_, s) = load(sys, input)?;
            let locus = singular_points(&s)?;
            let mut caveats = vec![];
            if locus.discarded_nonrational {
                caveats.push("singular points outside the parameter field were discarded".into());
            }
            if locus.uncertain {
                caveats.push("some factors could not be decided; the list may be incomplete".into());
            }
            Ok(report(
                input,
                json!({
                    "points": locus.points.iter().map(point_json).collect::<Vec<_>>(),
                    "discarded_nonrational": locus.discarded_nonrational,
                }),
                caveats,
            ))
        }
        Command::Minimality { sys, max_degree } => {
            let (_, s) = load(sys, input)?;
            add_input(input, "max_degree", json!(max_degree));
            let r = check_strong_minimality(&s, *max_degree)?;
            Ok(report(input, minimality_json(&r), r.caveats.clone()))
        }
        Command::FormsCheck { sys, exact, logs, basis } => {
            let (spec, s) = load(sys, input)?;
            add_input(input, "exact", json!(exact));
            add_input(input, "log", json!(logs));
            let rf = |t: &str| -> Result<RatFunc> { parse_expr(t)?.eval(&Default::default()) };
            let mut terms = Vec::new();
            for l in logs {
                let (c, a) = l
                    .split_once(':')
                    .ok_or_else(|| Failure::Usage(format!("--log expects COEFF:ARG, got {l}")))?;
                terms.push((parse_scalar(c)?, rf(a)?));
            }
            let basis = match basis {
                Some(b) => b
                    .split(',')
                    .map(|t| match t.trim() {
                        "1" => BasisElement::One,
                        n => BasisElement::Symbol(Symbol::new(n)),
                    })
                    .collect(),
                None => std::iter::once(BasisElement::One)
                    .chain(spec.params.iter().map(|(n, _)| BasisElement::Symbol(Symbol::new(n))))
                    .collect(),
            };
            let lc = LogCombination::new(basis, rf(exact)?, terms);
            let coords = s.coordinates();
            let form = lc.to_form(&coords)?;
            let lie = form.lie_derivative(&s)?;
            let mut caveats = vec![];
            let normalized = match rosenlicht_normalize(&lc) {
                Ok(n) => json!(n.log_terms.iter().map(|(c, w)| json!({"coefficient": c.to_string(), "argument": w.to_string()})).collect::<Vec<_>>()),
                Err(e @ Error::NonRepresentableCoefficient(_)) => {
                    caveats.push(e.to_string());
                    Value::Null
                }
                Err(e) => return Err(e.into()),
            };
            Ok(report(
                input,
                json!({
                    "form": form.to_string(),
                    "lie_derivative": lie.to_string(),
                    "invariant": lie.is_zero(),
                    "normalized_log_terms": normalized,
                }),
                caveats,
            ))
        }
        Command::LvAnalyze { a, b, c, d, variant, max_degree } => {
            *input = json!({"a": a, "b": b, "c": c, "d": d, "variant": variant, "max_degree": max_degree});
            let variant = match variant.as_str() {
                "classical" => Variant::Classical,
                "2d" => Variant::TwoD,
                v => return Err(Failure::Usage(format!("unknown variant {v}; use classical or 2d"))),
            };
            let sys = LVSystem::new(parse_scalar(a)?, parse_scalar(b)?, parse_scalar(c)?, parse_scalar(d)?, variant)?;
            let field = sys.field();
            let minimality = check_strong_minimality(&field, *max_degree)?;
            let mut result = json!({
                "system": sys.to_string(),
                "field": field.to_string(),
                "singular_points": sys.singular_points().iter().map(point_json).collect::<Vec<_>>(),
                "minimality": minimality_json(&minimality),
                "b_eq_d_curve": Value::Null,
                "reduction": Value::Null,
            });
            if variant == Variant::Classical && sys.b == sys.d {
                result["b_eq_d_curve"] = curve_json(&invariant_family_b_eq_d(&sys.a, &sys.b, &sys.c)?);
            }
            if variant == Variant::Classical && sys.b != sys.d {
                let red = brestovski_reduce(&sys.b, &sys.d)?;
                let plane = red.system.field()?;
                let w = omega1_form(&red.system)?;
                result["reduction"] = json!({
                    "substitution": "Z = X - Y on the normalized system X' = X(Y + b), Y' = Y(X + d)",
                    "x_from_z": red.x.to_string(),
                    "y_from_z": red.y.to_string(),
                    "second_derivative": plane.components()[1].to_string(),
                    "omega1": w.to_string(),
                    "omega1_invariant": w.is_invariant(&plane)?,
                });
            }
            Ok(report(input, result, minimality.caveats.clone()))
        }
        Command::LvOrtho { b1, d1, b2, d2 } => {
            *input = json!({"b1": b1, "d1": d1, "b2": b2, "d2": d2});
            let [b1, d1, b2, d2] = [b1, d1, b2, d2].map(|t| parse_scalar(t));
            let (b1, d1, b2, d2) = (b1?, d1?, b2?, d2?);
            let sols = enumerate_transform_solutions(&b1, &d1, &b2, &d2)?;
            let (e, f) = (Scalar::var("e"), Scalar::var("f"));
            let derived = ortho_coefficient_system(&b1, &d1, &b2, &d2, &e, &f)?;
            let shown = displayed_coefficient_polynomial(&derived.coefficients, &b1, &d1, &b2, &d2);
            Ok(report(
                input,
                json!({
                    "solutions": sols.iter().map(|s| json!({
                        "case": s.case_tag.to_string(),
                        "e": s.e.to_string(),
                        "f": s.f.to_string(),
                        "constraints": s.constraints,
                    })).collect::<Vec<_>>(),
                    "coefficient_polynomial": derived.poly.to_string(),
                    "matches_displayed_polynomial": derived.poly == shown,
                }),
                vec![],
            ))
        }
        Command::Simulate { sys, start, t_end, step, csv } => {
            let (_, s) = load(sys, input)?;
            add_input(input, "start", json!(start));
            add_input(input, "t_end", json!(t_end));
            add_input(input, "step", json!(step));
            let x0 = start
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Failure::Usage(format!("--start: {e}")))?;
            let tr = integrate_rk4(&s, &x0, *t_end, *step)?;
            let stop = format!("{:?}", tr.stop);
            if *csv {
                let names: Vec<String> = s.vars().iter().map(|v| v.to_string()).collect();
                let mut out = format!("t,{}\n", names.join(","));
                for (t, p) in tr.times.iter().zip(&tr.states) {
                    let row: Vec<String> = p.iter().map(|v| v.to_string()).collect();
                    out.push_str(&format!("{t},{}\n", row.join(",")));
                }
                return Ok(Report { input: Value::Null, result: Value::Null, caveats: vec![], raw: Some(out) });
            }
            let caveats = if tr.completed() { vec![] } else { vec![format!("integration stopped early: {stop}")] };
            Ok(report(
                input,
                json!({
                    "step": tr.step,
                    "stop": stop,
                    "times": tr.times,
                    "states": tr.states,
                }),
                caveats,
            ))
        }
    }
}

/// Parse `--set`-style values into rationals (exposed for bindings).
pub fn parse_sets(items: &[String]) -> Result<Vec<(String, Rational)>> {
    items.iter().map(|s| parse_assignment(s)).collect()
}
