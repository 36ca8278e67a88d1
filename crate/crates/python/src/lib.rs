//! Python bindings: systems in the text format, invariant-curve search,
//! minimality verdicts, exterior-calculus checks and the Lotka-Volterra suite.

use std::collections::HashMap;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use invcurve_core::algebra::{MultiPoly, Scalar};
use invcurve_core::cli::dsl::{parse_expr, parse_number, parse_scalar, parse_system};
use invcurve_core::darboux::{self as core_darboux, DarbouxReport as CoreReport};
use invcurve_core::forms::{self, BasisElement, LogCombination};
use invcurve_core::lv::{self, Variant};
use invcurve_core::minimality::check_strong_minimality;
use invcurve_core::numeric::integrate_rk4;
use invcurve_core::vectorfield::{self, VectorField as CoreField};
use invcurve_core::{Error, Symbol};

create_exception!(invcurve, InvcurveError, PyValueError);

fn err(e: Error) -> PyErr {
    InvcurveError::new_err(format!("{}: {e}", e.kind()))
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for Result<T, Error> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn scalar(s: &str) -> PyResult<Scalar> {
    parse_scalar(s).py()
}

/// A vector field, built from the text format (`vars x, y; x' = ...`).
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct VectorField {
    inner: CoreField,
}

fn poly_in(s: &CoreField, text: &str) -> PyResult<MultiPoly> {
    let r = parse_expr(text).and_then(|e| e.eval(&HashMap::new())).py()?;
    MultiPoly::from_ratfunc(s.vars(), &r).ok_or_else(|| err(Error::NotPolynomial))
}

#[pymethods]
impl VectorField {
    /// Parse a system; `set` maps parameter names to rational strings such as "2" or "-1/3".
    #[new]
    #[pyo3(signature = (text, set = None))]
    fn new(text: &str, set: Option<HashMap<String, String>>) -> PyResult<Self> {
        let spec = parse_system(text).py()?;
        let mut sets = Vec::new();
        for (k, v) in set.unwrap_or_default() {
            sets.push((k, parse_number(&v).py()?));
        }
        sets.sort();
        Ok(VectorField {
            inner: spec.to_field(&sets).py()?,
        })
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.vars().iter().map(|v| v.to_string()).collect()
    }

    #[getter]
    fn components(&self) -> Vec<String> {
        self.inner.components().iter().map(|c| c.to_string()).collect()
    }

    fn lie_derivative(&self, poly: &str) -> PyResult<String> {
        let p = poly_in(&self.inner, poly)?;
        Ok(vectorfield::lie_derivative(&self.inner, &p).py()?.to_string())
    }

    /// The cofactor if `poly` divides its Lie derivative, else None.
    fn is_invariant(&self, poly: &str) -> PyResult<Option<String>> {
        let p = poly_in(&self.inner, poly)?;
        Ok(vectorfield::is_invariant(&self.inner, &p).py()?.map(|k| k.to_string()))
    }

    fn singular_points(&self) -> PyResult<Vec<Vec<String>>> {
        let locus = vectorfield::singular_points(&self.inner).py()?;
        Ok(locus
            .points
            .iter()
            .map(|p| p.coordinates.iter().map(|c| c.to_string()).collect())
            .collect())
    }

    #[pyo3(signature = (max_degree = 3))]
    fn darboux(&self, py: Python<'_>, max_degree: u32) -> PyResult<DarbouxReport> {
        let field = self.inner.clone();
        let report = py.detach(move || core_darboux::darboux_search(&field, max_degree)).py()?;
        Ok(DarbouxReport { inner: report })
    }

    /// (verdict, witness or None, caveats)
    #[pyo3(signature = (max_degree = 3))]
    fn minimality(&self, py: Python<'_>, max_degree: u32) -> PyResult<(String, Option<Vec<String>>, Vec<String>)> {
        let field = self.inner.clone();
        let r = py.detach(move || check_strong_minimality(&field, max_degree)).py()?;
        Ok((
            r.verdict.to_string(),
            r.witness.map(|w| w.coordinates.iter().map(|c| c.to_string()).collect()),
            r.caveats,
        ))
    }

    /// RK4 from `start`; returns (times, states, stop reason).
    #[pyo3(signature = (start, t_end, step = 1e-3))]
    fn integrate(&self, start: Vec<f64>, t_end: f64, step: f64) -> PyResult<(Vec<f64>, Vec<Vec<f64>>, String)> {
        let tr = integrate_rk4(&self.inner, &start, t_end, step).py()?;
        Ok((tr.times, tr.states, format!("{:?}", tr.stop)))
    }

    /// Whether du + Σ c dv/v is invariant; `logs` holds (coefficient, argument) strings.
    #[pyo3(signature = (exact, logs = vec![]))]
    fn log_form_invariant(&self, exact: &str, logs: Vec<(String, String)>) -> PyResult<bool> {
        let lc = log_combination(exact, &logs, &[])?;
        let form = lc.to_form(&self.inner.coordinates()).py()?;
        form.is_invariant(&self.inner).py()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("VectorField({:?})", self.inner.to_string())
    }
}

#[pyclass(frozen)]
struct DarbouxReport {
    inner: CoreReport,
}

#[pymethods]
impl DarbouxReport {
    #[getter]
    fn degree_bound(&self) -> u32 {
        self.inner.degree_bound
    }

    #[getter]
    fn completeness(&self) -> String {
        self.inner.completeness.to_string()
    }

    /// (poly, cofactor) pairs.
    #[getter]
    fn curves(&self) -> Vec<(String, String)> {
        self.inner
            .curves
            .iter()
            .map(|c| (c.poly.to_string(), c.cofactor.to_string()))
            .collect()
    }

    #[getter]
    fn branching_conditions(&self) -> Vec<String> {
        self.inner.branching_conditions.iter().map(|c| c.to_string()).collect()
    }

    /// (cofactor, basis) for each family of curves.
    #[getter]
    fn families(&self) -> Vec<(String, Vec<String>)> {
        self.inner
            .families
            .iter()
            .map(|f| (f.cofactor.to_string(), f.basis.iter().map(|b| b.to_string()).collect()))
            .collect()
    }

    fn __repr__(&self) -> String {
        let curves: Vec<String> = self.inner.curves.iter().map(|c| c.poly.to_string()).collect();
        format!(
            "DarbouxReport(degree_bound={}, completeness={}, curves=[{}])",
            self.inner.degree_bound,
            self.inner.completeness,
            curves.join(", ")
        )
    }
}

/// X' = X(aY + b), Y' = Y(cX + d), or Y' = Y(cX + dY) with variant "2d".
/// Coefficients are strings: rationals or parameter names.
#[pyclass(frozen)]
struct LVSystem {
    inner: lv::LVSystem,
}

#[pymethods]
impl LVSystem {
    #[new]
    #[pyo3(signature = (a, b, c, d, variant = "classical"))]
    fn new(a: &str, b: &str, c: &str, d: &str, variant: &str) -> PyResult<Self> {
        let variant = match variant {
            "classical" => Variant::Classical,
            "2d" => Variant::TwoD,
            v => return Err(PyValueError::new_err(format!("unknown variant {v}"))),
        };
        Ok(LVSystem {
            inner: lv::LVSystem::new(scalar(a)?, scalar(b)?, scalar(c)?, scalar(d)?, variant).py()?,
        })
    }

    fn field(&self) -> VectorField {
        VectorField {
            inner: self.inner.field(),
        }
    }

    fn singular_points(&self) -> Vec<Vec<String>> {
        self.inner
            .singular_points()
            .iter()
            .map(|p| p.coordinates.iter().map(|c| c.to_string()).collect())
            .collect()
    }

    /// (normalized system, (x factor, y factor))
    fn scale_transform(&self) -> PyResult<(LVSystem, (String, String))> {
        let (t, m) = lv::lv_scale_transform(&self.inner).py()?;
        Ok((LVSystem { inner: t }, (m.x_factor.to_string(), m.y_factor.to_string())))
    }

    fn swap_transform(&self) -> PyResult<LVSystem> {
        Ok(LVSystem {
            inner: lv::lv_swap_transform(&self.inner).py()?,
        })
    }

    /// Closed-form solution at t when b = d.
    fn varma_solution(&self, alpha: f64, beta: f64, t: f64) -> PyResult<(f64, f64)> {
        lv::varma_solution(&self.inner, alpha, beta, t).py()
    }

    /// Finite-difference residuals (x, y, cX - aY) of the closed form at t.
    #[pyo3(signature = (alpha, beta, t, h = 1e-5))]
    fn varma_residuals(&self, alpha: f64, beta: f64, t: f64, h: f64) -> PyResult<(f64, f64, f64)> {
        let r = lv::varma_residuals(&self.inner, alpha, beta, t, h).py()?;
        Ok((r.x, r.y, r.diagonal))
    }

    fn __repr__(&self) -> String {
        self.inner.to_string()
    }
}

/// (case, e, f) for every affine relation X - Y = e(U - V) + f.
#[pyfunction]
fn enumerate_transform_solutions(b1: &str, d1: &str, b2: &str, d2: &str) -> PyResult<Vec<(String, String, String)>> {
    let sols = lv::enumerate_transform_solutions(&scalar(b1)?, &scalar(d1)?, &scalar(b2)?, &scalar(d2)?).py()?;
    Ok(sols
        .into_iter()
        .map(|s| (s.case_tag.to_string(), s.e.to_string(), s.f.to_string()))
        .collect())
}

/// The derived coefficient polynomial in (u, v).
#[pyfunction]
#[pyo3(signature = (b1, d1, b2, d2, e = "e", f = "f"))]
fn ortho_coefficient_polynomial(b1: &str, d1: &str, b2: &str, d2: &str, e: &str, f: &str) -> PyResult<String> {
    let sys = lv::ortho_coefficient_system(&scalar(b1)?, &scalar(d1)?, &scalar(b2)?, &scalar(d2)?, &scalar(e)?, &scalar(f)?)
        .py()?;
    Ok(sys.poly.to_string())
}

/// (poly, cofactor) of c*X - a*Y - z with z' = b*z.
#[pyfunction]
fn invariant_family_b_eq_d(a: &str, b: &str, c: &str) -> PyResult<(String, String)> {
    let curve = core_darboux::invariant_family_b_eq_d(&scalar(a)?, &scalar(b)?, &scalar(c)?).py()?;
    Ok((curve.poly.to_string(), curve.cofactor.to_string()))
}

/// Whether the 2-form of the reduced equation for (b, d) is invariant.
#[pyfunction]
fn omega1_invariant(b: &str, d: &str) -> PyResult<bool> {
    let red = lv::brestovski_reduce(&scalar(b)?, &scalar(d)?).py()?;
    let w = lv::omega1_form(&red.system).py()?;
    w.is_invariant(&red.system.field().py()?).py()
}

fn log_combination(exact: &str, logs: &[(String, String)], basis: &[String]) -> PyResult<LogCombination> {
    let rf = |t: &str| parse_expr(t).and_then(|e| e.eval(&HashMap::new())).py();
    let terms = logs
        .iter()
        .map(|(c, a)| Ok((scalar(c)?, rf(a)?)))
        .collect::<PyResult<Vec<_>>>()?;
    let basis = basis
        .iter()
        .map(|b| match b.as_str() {
            "1" => BasisElement::One,
            n => BasisElement::Symbol(Symbol::new(n)),
        })
        .collect();
    Ok(LogCombination::new(basis, rf(exact)?, terms))
}

/// Rewrite Σ c dv/v with Q-independent coefficients; returns (coefficient, argument) pairs.
#[pyfunction]
#[pyo3(signature = (logs, basis = vec!["1".to_string()]))]
fn rosenlicht_normalize(logs: Vec<(String, String)>, basis: Vec<String>) -> PyResult<Vec<(String, String)>> {
    let lc = log_combination("0", &logs, &basis)?;
    let out = forms::rosenlicht_normalize(&lc).py()?;
    Ok(out
        .log_terms
        .iter()
        .map(|(c, w)| (c.to_string(), w.to_string()))
        .collect())
}

/// Run the command-line tool in-process; returns (exit code, stdout, stderr).
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = invcurve_core::cli::run(std::iter::once("invcurve".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn invcurve(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("InvcurveError", m.py().get_type::<InvcurveError>())?;
    m.add_class::<VectorField>()?;
    m.add_class::<DarbouxReport>()?;
    m.add_class::<LVSystem>()?;
    m.add_function(wrap_pyfunction!(enumerate_transform_solutions, m)?)?;
    m.add_function(wrap_pyfunction!(ortho_coefficient_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_family_b_eq_d, m)?)?;
    m.add_function(wrap_pyfunction!(omega1_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(rosenlicht_normalize, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
