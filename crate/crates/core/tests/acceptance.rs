//! Acceptance run: one PASS/FAIL line per criterion, with tolerances pinned here.
//!
//! Criterion 3's numeric part cannot pass as stated: the trajectory from (1, 1)
//! escapes to infinity before t = 1. It is run exactly as specified and reported
//! as FAIL, next to supplementary runs that do exist on their whole interval.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::laws::*;
use common::oracle::agreement_cases;
use common::*;
use invcurve_core::algebra::{MultiPoly, RatFunc, Scalar};
use invcurve_core::darboux::{darboux_search, invariant_family_b_eq_d, Completeness, DefinitionField};
use invcurve_core::forms::{BasisElement, LogCombination};
use invcurve_core::lv::{self, CaseTag, LVSystem};
use invcurve_core::minimality::{check_strong_minimality, Verdict};
use invcurve_core::numeric::{first_integral_drift, integrate_rk4};
use invcurve_core::vectorfield::{is_invariant, DiffParam, VectorField};
use invcurve_core::Symbol;
use proptest::prelude::*;
use proptest::test_runner::TestRunner;

const CURVE_SEARCH_BUDGET: Duration = Duration::from_secs(60);
const MINIMALITY_BUDGET: Duration = Duration::from_secs(10);
const OMEGA_BUDGET: Duration = Duration::from_secs(30);
const LAWS_BUDGET: Duration = Duration::from_secs(60);
const DRIFT_TOL: f64 = 1e-8;
const ORDER_RATIO: (f64, f64) = (8.0, 32.0);
const RK4_STEP: f64 = 1e-3;
const RESIDUAL_TOL: f64 = 1e-6;
const FD_STEP: f64 = 1e-5;
const LAW_CASES: u32 = 200;
const ROSENLICHT_CASES: u32 = 50;
const ORACLE_FIELDS: usize = 10;

/// Criteria that cannot hold as written; each still runs and prints FAIL.
const KNOWN_UNATTAINABLE: &[u32] = &[3];

struct Line {
    id: u32,
    pass: bool,
    detail: String,
}

fn line(id: u32, pass: bool, detail: impl Into<String>) -> Line {
    Line {
        id,
        pass,
        detail: detail.into(),
    }
}

fn s(name: &str) -> Scalar {
    Scalar::var(name)
}

fn curve_names(f: &VectorField, degree: u32) -> (Vec<String>, Completeness) {
    let r = darboux_search(f, degree).unwrap();
    let mut names: Vec<String> = r.curves.iter().map(|c| c.poly.to_string()).collect();
    names.sort();
    (names, r.completeness)
}

fn criterion_1() -> Line {
    let start = Instant::now();
    let generic = LVSystem::classical(1, s("b"), 1, s("d")).unwrap().field();
    let (g, _) = curve_names(&generic, 4);
    let equal = LVSystem::classical(1, s("b"), 1, s("b")).unwrap().field();
    let (e, _) = curve_names(&equal, 4);
    let general = LVSystem::classical(s("a"), s("b"), s("c"), s("b")).unwrap().field();
    let (a, _) = curve_names(&general, 4);
    let took = start.elapsed();
    let pass = g == ["X", "Y"] && e == ["X", "X - Y", "Y"] && a == ["X", "Y", "c*X - a*Y"] && took < CURVE_SEARCH_BUDGET;
    line(1, pass, format!("b!=d {g:?}; b=d {e:?}; general a,c {a:?}; {took:.1?}"))
}

fn criterion_2() -> Line {
    let mut ok = true;
    let mut notes = Vec::new();
    let cases: [(LVSystem, Verdict, Option<&str>); 3] = [
        (LVSystem::classical(1, 2, 1, 3).unwrap(), Verdict::StronglyMinimalCertified, Some("(-3, -2)")),
        (LVSystem::classical(1, 2, 1, 2).unwrap(), Verdict::CriterionFails, None),
        (LVSystem::two_d(1, 1, 1, 1).unwrap(), Verdict::StronglyMinimalCertified, None),
    ];
    for (sys, want, witness) in cases {
        let start = Instant::now();
        let r = check_strong_minimality(&sys.field(), 3).unwrap();
        let took = start.elapsed();
        let w = r.witness.as_ref().map(|p| p.to_string());
        let witness_ok = witness.is_none_or(|expected| w.as_deref() == Some(expected));
        ok &= r.verdict == want && witness_ok && took < MINIMALITY_BUDGET;
        notes.push(format!("{sys} {} {} {took:.1?}", r.verdict, w.unwrap_or_else(|| "-".into())));
    }
    line(2, ok, notes.join("; "))
}

fn drift_on(sys: &LVSystem, start: [f64; 2], t_end: f64, step: f64) -> Option<f64> {
    let traj = integrate_rk4(&sys.field(), &start, t_end, step).ok()?;
    if !traj.completed() {
        return None;
    }
    first_integral_drift(&traj, 2.0, 3.0).ok()
}

fn order_check(sys: &LVSystem, start: [f64; 2], t_end: f64) -> (bool, String) {
    match (drift_on(sys, start, t_end, RK4_STEP), drift_on(sys, start, t_end, RK4_STEP / 2.0)) {
        (Some(full), Some(half)) => {
            let ratio = full / half;
            let pass = full < DRIFT_TOL && (ORDER_RATIO.0..=ORDER_RATIO.1).contains(&ratio);
            (pass, format!("drift {full:.1e}, ratio {ratio:.1}"))
        }
        _ => {
            let traj = integrate_rk4(&sys.field(), &start, t_end, RK4_STEP).unwrap();
            (false, format!("no trajectory on the interval: {:?}", traj.stop))
        }
    }
}

fn criterion_3() -> Line {
    // Symbolic: d of Y − X + b log Y − d log X is invariant.
    let vars = [Symbol::new("X"), Symbol::new("Y")];
    let field = LVSystem::classical(1, s("b"), 1, s("d")).unwrap().field();
    let (x, y) = (RatFunc::symbol(vars[0]), RatFunc::symbol(vars[1]));
    let df = LogCombination::new(
        vec![BasisElement::Symbol(Symbol::new("b")), BasisElement::Symbol(Symbol::new("d"))],
        &y - &x,
        vec![(s("b"), y), (-&s("d"), x)],
    )
    .to_form(&vars)
    .unwrap();
    let symbolic = df.is_invariant(&field).unwrap();

    let sys = LVSystem::classical(1, 2, 1, 3).unwrap();
    let (stated, stated_note) = order_check(&sys, [1.0, 1.0], 1.0);
    let (short, short_note) = order_check(&sys, [1.0, 1.0], 0.3);
    let (other, other_note) = order_check(&sys, [-1.0, -1.0], 1.0);
    line(
        3,
        symbolic && stated,
        format!(
            "symbolic {symbolic}; (1,1) on [0,1]: {stated_note}; supplementary (1,1) on [0,0.3] {} ({short_note}), (-1,-1) on [0,1] {} ({other_note})",
            if short { "ok" } else { "bad" },
            if other { "ok" } else { "bad" }
        ),
    )
}

fn criterion_4() -> Line {
    let start = Instant::now();
    let mut results = Vec::new();
    for (b, d) in [(Scalar::from_int(2), Scalar::from_int(3)), (s("b"), s("d"))] {
        let red = lv::brestovski_reduce(&b, &d).unwrap();
        let w = lv::omega1_form(&red.system).unwrap();
        let lie = w.lie_derivative(&red.system.field().unwrap()).unwrap();
        results.push(!w.is_zero() && lie.is_zero());
    }
    let took = start.elapsed();
    line(4, results.iter().all(|&r| r) && took < OMEGA_BUDGET, format!("(2,3) {}, symbolic {}, {took:.1?}", results[0], results[1]))
}

fn criterion_5() -> Line {
    let run = |v: [i64; 4]| {
        let v = v.map(Scalar::from_int);
        lv::enumerate_transform_solutions(&v[0], &v[1], &v[2], &v[3]).unwrap()
    };
    let direct = run([2, 3, 2, 3]);
    let swapped = run([2, 3, 3, 2]);
    let none = run([2, 3, 4, 5]);
    let direct_ok = direct.len() == 1
        && direct[0].case_tag == CaseTag::Direct
        && direct[0].e == Scalar::one()
        && direct[0].f.is_zero();
    let swapped_ok = !swapped.is_empty() && swapped.iter().all(|t| t.case_tag == CaseTag::Swapped);
    let (b1, d1, b2, d2) = (s("b1"), s("d1"), s("b2"), s("d2"));
    let sys = lv::ortho_coefficient_system(&b1, &d1, &b2, &d2, &s("e"), &s("f")).unwrap();
    let shown = lv::displayed_coefficient_polynomial(&sys.coefficients, &b1, &d1, &b2, &d2);
    let diff = &sys.poly - &shown;
    line(
        5,
        direct_ok && swapped_ok && none.is_empty() && diff.is_zero(),
        format!(
            "direct {direct_ok}, swapped {swapped_ok}, (2,3,4,5) -> {} solutions, derived minus displayed = {diff}",
            none.len()
        ),
    )
}

fn criterion_6() -> Line {
    let b = s("b");
    let curve = invariant_family_b_eq_d(&Scalar::one(), &b, &Scalar::one()).unwrap();
    // Independent certificate on a freshly built field.
    let vars = [Symbol::new("X"), Symbol::new("Y")];
    let field = LVSystem::classical(1, b.clone(), 1, b.clone())
        .unwrap()
        .field()
        .with_diff_params(vec![DiffParam::log("z", b.clone())])
        .unwrap();
    let target = &(&MultiPoly::var(&vars, "X") - &MultiPoly::var(&vars, "Y")) - &MultiPoly::var(&vars, "z");
    let cofactor = is_invariant(&field, &target).unwrap();
    let symbolic = cofactor == Some(MultiPoly::constant(&vars, b))
        && curve.poly == target
        && curve.definition_field == DefinitionField::DiffParam(Symbol::new("z"));

    let sys = LVSystem::classical(1, 1, 1, 1).unwrap();
    let (alpha, beta) = (1.0f64, 2.0f64);
    // The closed form has a pole where alpha e^t = beta; sample away from it.
    let pole = (beta / alpha).ln();
    let samples: Vec<f64> = (0..40)
        .map(|i| -1.0 + 0.07 * i as f64)
        .filter(|t| (t - pole).abs() > 0.1)
        .take(20)
        .collect();
    let mut worst: f64 = 0.0;
    for &t in &samples {
        let r = lv::varma_residuals(&sys, alpha, beta, t, FD_STEP).unwrap();
        worst = worst.max(r.x).max(r.y).max(r.diagonal);
    }
    line(
        6,
        symbolic && samples.len() == 20 && worst < RESIDUAL_TOL,
        format!("X - Y - z cofactor {:?}; worst residual over {} samples {worst:.1e}", cofactor.map(|k| k.to_string()), samples.len()),
    )
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(pinned(cases))
}

fn err<T: std::fmt::Debug>(e: proptest::test_runner::TestError<T>) -> String {
    e.to_string()
}

fn criterion_7() -> Line {
    let result = runner(ROSENLICHT_CASES).run(&log_combination(false), |lc| rosenlicht_round_trip(&lc));
    line(7, result.is_ok(), format!("{ROSENLICHT_CASES} cases: {}", result.err().map_or("ok".into(), |e| e.to_string())))
}

fn criterion_8() -> Line {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut record = |name: &str, r: Result<(), String>| {
        if let Err(e) = r {
            failures.push(format!("{name}: {e}"));
        }
    };
    let scalars = (scalar(), scalar(), scalar());
    record("additive group", runner(LAW_CASES).run(&scalars, |(a, b, c)| additive_group(&a, &b, &c)).map_err(err));
    record("multiplicative", runner(LAW_CASES).run(&scalars, |(a, b, c)| multiplicative_monoid(&a, &b, &c)).map_err(err));
    record("distributive", runner(LAW_CASES).run(&scalars, |(a, b, c)| distributive(&a, &b, &c)).map_err(err));
    record("inverses", runner(LAW_CASES).run(&(scalar(), scalar()), |(a, b)| inverses(&a, &b)).map_err(err));
    record("leibniz (partial)", runner(LAW_CASES).run(&(ratfunc(), ratfunc()), |(f, g)| partial_leibniz(&f, &g)).map_err(err));
    record(
        "leibniz (field)",
        runner(LAW_CASES).run(&(field(), ratfunc(), ratfunc()), |(s, f, g)| field_leibniz(&s, &f, &g)).map_err(err),
    );
    record("graded leibniz", runner(LAW_CASES).run(&form_pair(), |(a, b)| graded_leibniz(&a, &b)).map_err(err));
    record("d∘d", runner(LAW_CASES).run(&(0usize..=2).prop_flat_map(form), |w| d_squared(&w)).map_err(err));
    record("wedge antisymmetry", runner(LAW_CASES).run(&form_pair(), |(a, b)| graded_commutative(&a, &b)).map_err(err));
    record(
        "interior antiderivation",
        runner(LAW_CASES).run(&(field(), form_pair()), |(s, (a, b))| interior_antiderivation(&s, &a, &b)).map_err(err),
    );
    record(
        "cartan base case",
        runner(LAW_CASES).run(&(field(), ratfunc(), ratfunc()), |(s, f, g)| cartan_base_case(&s, &f, &g)).map_err(err),
    );
    let took = start.elapsed();
    line(
        8,
        failures.is_empty() && took < LAWS_BUDGET,
        format!("11 laws x {LAW_CASES} cases in {took:.1?}{}", if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }),
    )
}

fn criterion_9() -> Line {
    let cases = agreement_cases(ORACLE_FIELDS, 2);
    let agreeing = cases.iter().filter(|c| c.agrees()).count();
    let curves: usize = cases.iter().map(|c| c.oracle.curves.len()).sum();
    let seeds: Vec<u64> = cases.iter().map(|c| c.seed).collect();
    line(
        9,
        agreeing == ORACLE_FIELDS,
        format!("{agreeing}/{ORACLE_FIELDS} fields agree ({curves} curves in total, seeds {seeds:?})"),
    )
}

#[test]
fn acceptance() {
    let lines = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ];
    // Straight to the stderr handle: the report shows up even when libtest captures output.
    let mut err = std::io::stderr().lock();
    for l in &lines {
        let known = !l.pass && KNOWN_UNATTAINABLE.contains(&l.id);
        writeln!(
            err,
            "criterion {}: {}{} | {}",
            l.id,
            if l.pass { "PASS" } else { "FAIL" },
            if known { " (known, unattainable as stated)" } else { "" },
            l.detail
        )
        .unwrap();
    }
    let unexpected: Vec<u32> = lines
        .iter()
        .filter(|l| !l.pass && !KNOWN_UNATTAINABLE.contains(&l.id))
        .map(|l| l.id)
        .collect();
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
