//! Python bindings: problems, descent reports, minimal polynomials and
//! Gröbner bases, with polynomials passed as text.

// pyo3 0.22's generated wrappers trip this lint on every `PyResult` method
#![allow(clippy::useless_conversion)]

use std::sync::Arc;

use fibre_descent::arith::FieldSpec;
use fibre_descent::descent::{dominance_check, minimal_polynomial, DescentProblem};
use fibre_descent::error::Error;
use fibre_descent::frontend::{build_report, parse_polynomial, parse_problem, render_problem, Report};
use fibre_descent::groebner::buchberger;
use fibre_descent::poly::{MonomialOrder, Poly, PolyRing};
use fibre_descent::verify::{SampleBudget, DEFAULT_BOX};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Internal(msg) => PyRuntimeError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn order_from(name: &str) -> PyResult<MonomialOrder> {
    match name {
        "lex" => Ok(MonomialOrder::Lex),
        "grevlex" => Ok(MonomialOrder::Grevlex),
        other => Err(PyValueError::new_err(format!(
            "unknown order `{other}`; expected lex or grevlex"
        ))),
    }
}

fn ring_from(variables: Vec<String>, characteristic: u64, order: &str) -> PyResult<Arc<PolyRing<FieldSpec>>> {
    let field = FieldSpec::new(characteristic).map_err(to_py)?;
    PolyRing::new(field, variables, order_from(order)?).map_err(to_py)
}

fn polys(texts: &[String], ring: &Arc<PolyRing<FieldSpec>>) -> PyResult<Vec<Poly>> {
    texts.iter().map(|t| parse_polynomial(t, ring).map_err(to_py)).collect()
}

/// A parsed descent problem.
#[pyclass(name = "Problem", frozen)]
struct PyProblem {
    inner: DescentProblem,
}

#[pymethods]
impl PyProblem {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyProblem {
            inner: parse_problem(text).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyValueError::new_err(format!("{path}: {e}")))?;
        Self::parse(&text)
    }

    #[getter]
    fn characteristic(&self) -> u64 {
        use fibre_descent::arith::Field;
        self.inner.field().characteristic()
    }

    #[getter]
    fn source_vars(&self) -> Vec<String> {
        self.inner.source().vars().to_vec()
    }

    #[getter]
    fn target_vars(&self) -> Vec<String> {
        self.inner.target().vars().to_vec()
    }

    fn is_dominant(&self) -> PyResult<bool> {
        dominance_check(&self.inner).map_err(to_py)
    }

    /// Minimal polynomial of `f[component]` over `k(Y)`, or `"0"` when transcendental.
    fn minimal_polynomial(&self, component: usize) -> PyResult<String> {
        Ok(minimal_polynomial(&self.inner, component).map_err(to_py)?.render())
    }

    /// Runs the full analysis. `check_samples` is a point count, `"all"`, or `None`.
    #[pyo3(signature = (check_samples=None, witness_budget=10_000))]
    fn descend(&self, check_samples: Option<&Bound<'_, PyAny>>, witness_budget: u64) -> PyResult<PyReport> {
        let samples = match check_samples {
            None => None,
            Some(v) if v.extract::<String>().is_ok_and(|s| s == "all") => Some(SampleBudget::Exhaustive),
            Some(v) => {
                let n: u64 = v.extract()?;
                if n == 0 {
                    return Err(PyValueError::new_err("check_samples must be positive"));
                }
                Some(SampleBudget::Points(n))
            }
        };
        let report = build_report(&self.inner, samples, witness_budget, DEFAULT_BOX).map_err(to_py)?;
        Ok(PyReport {
            report,
            problem: self.inner.clone(),
        })
    }

    fn __str__(&self) -> String {
        render_problem(&self.inner)
    }
}

/// Outcome of `Problem.descend`.
#[pyclass(name = "Report", frozen)]
struct PyReport {
    report: Report,
    problem: DescentProblem,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn dominant(&self) -> bool {
        self.report.dominant
    }

    /// `regular`, `rational`, `frobenius` or `none`.
    #[getter]
    fn status(&self) -> &'static str {
        self.report.result.as_ref().map_or("none", |r| r.status())
    }

    /// Frobenius twist exponent.
    #[getter]
    #[allow(non_snake_case)]
    fn N(&self) -> u32 {
        self.report.result.as_ref().map_or(0, |r| r.twist_exponent())
    }

    /// Witness components as `(numerator, denominator)` text pairs.
    #[getter]
    fn h(&self) -> Vec<(String, String)> {
        let Some(result) = &self.report.result else {
            return Vec::new();
        };
        result
            .witness()
            .iter()
            .map(|c| (c.num().render(), c.den().render()))
            .collect()
    }

    #[getter]
    fn minimal_polynomials(&self) -> Vec<String> {
        self.report.minimal_polynomials.iter().map(|m| m.render()).collect()
    }

    #[getter]
    fn symbolic_certificate(&self) -> bool {
        self.report.certificates.symbolic
    }

    fn to_json(&self) -> String {
        self.report.to_json()
    }

    fn to_text(&self) -> String {
        self.report.to_text(&self.problem)
    }
}

/// Reduced Gröbner basis of `generators` in `k[variables]`; characteristic 0 means Q.
#[pyfunction]
#[pyo3(signature = (generators, variables, characteristic=0, order="grevlex"))]
fn groebner_basis(
    generators: Vec<String>,
    variables: Vec<String>,
    characteristic: u64,
    order: &str,
) -> PyResult<Vec<String>> {
    let ring = ring_from(variables, characteristic, order)?;
    let gens = polys(&generators, &ring)?;
    let gb = buchberger(&ring, &gens, ring.order()).map_err(to_py)?;
    Ok(gb.generators().iter().map(Poly::render).collect())
}

/// Normal form of `poly` modulo the ideal generated by `generators`.
#[pyfunction]
#[pyo3(signature = (poly, generators, variables, characteristic=0, order="grevlex"))]
fn normal_form(
    poly: String,
    generators: Vec<String>,
    variables: Vec<String>,
    characteristic: u64,
    order: &str,
) -> PyResult<String> {
    let ring = ring_from(variables, characteristic, order)?;
    let gens = polys(&generators, &ring)?;
    let f = parse_polynomial(&poly, &ring).map_err(to_py)?;
    let gb = buchberger(&ring, &gens, ring.order()).map_err(to_py)?;
    Ok(gb.normal_form(&f).map_err(to_py)?.render())
}

#[pymodule]
fn fibre_descent_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProblem>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(groebner_basis, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    Ok(())
}
