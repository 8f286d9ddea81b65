//! Python bindings: allocation rules over float or exact backends, basin
//! graphs, claims-boundedness thresholds, sweeps, and the axiom checkers.
//!
//! Scalars cross the boundary as floats for day-to-day work and as decimal
//! strings for exact work (awards come back as reduced fractions). Axiom
//! reports cross as JSON strings, the same schema the command-line tool
//! emits.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use riparian::analysis::{
    argmax_gamma_per_agent, min_gamma_claims_bounded, min_lambda_claims_bounded, sweep_gamma,
    uniform_grid, ThresholdResult, DEFAULT_THRESHOLD_TOL,
};
use riparian::axioms::{
    axiom_matrix as core_matrix, check_axiom as core_check, default_rules, Axiom, CheckConfig,
    RuleSpec,
};
use riparian::basin::{basin_geometric, BasinGraph, BasinNode};
use riparian::problem::Problem as CoreProblem;
use riparian::quantity::{Quantity, Rational};
use riparian::rules::GammaParam;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_exact(label: &str, text: &str) -> PyResult<Rational> {
    Rational::from_decimal_str(text).map_err(|e| value_error(format!("{label}: {e}")))
}

/// A claims problem on a line of agents, ordered source to mouth.
#[pyclass(name = "Problem", module = "riparian_py")]
struct PyProblem {
    inner: CoreProblem<f64>,
}

#[pymethods]
impl PyProblem {
    #[new]
    fn new(claims: Vec<f64>, budget: f64) -> PyResult<Self> {
        Ok(Self {
            inner: CoreProblem::new(claims, budget).map_err(value_error)?,
        })
    }

    #[getter]
    fn claims(&self) -> Vec<f64> {
        self.inner.claims().to_vec()
    }

    #[getter]
    fn budget(&self) -> f64 {
        *self.inner.budget()
    }

    #[getter]
    fn aggregate(&self) -> f64 {
        *self.inner.aggregate()
    }

    fn is_redistribution(&self) -> bool {
        self.inner.is_redistribution()
    }

    /// Apply a rule spec (`prop`, `ft`, `geometric:G`, `averaging:L`,
    /// `gengeo:SPEC`) and return the awards.
    fn allocate(&self, rule: &str) -> PyResult<Vec<f64>> {
        let rule = RuleSpec::<f64>::parse(rule).map_err(value_error)?;
        Ok(rule.apply(&self.inner).map_err(value_error)?.into_awards())
    }

    fn __repr__(&self) -> String {
        format!(
            "Problem(claims={:?}, budget={})",
            self.inner.claims(),
            self.inner.budget()
        )
    }
}

/// Awards for a rule spec over float claims.
#[pyfunction]
fn allocate(claims: Vec<f64>, budget: f64, rule: &str) -> PyResult<Vec<f64>> {
    PyProblem::new(claims, budget)?.allocate(rule)
}

/// Awards for a rule spec over decimal-string claims, as reduced fractions.
#[pyfunction]
fn allocate_exact(claims: Vec<String>, budget: &str, rule: &str) -> PyResult<Vec<String>> {
    let claims = claims
        .iter()
        .map(|c| parse_exact("claim", c))
        .collect::<PyResult<Vec<_>>>()?;
    let budget = parse_exact("budget", budget)?;
    let problem = CoreProblem::new(claims, budget).map_err(value_error)?;
    let rule = RuleSpec::<Rational>::parse(rule).map_err(value_error)?;
    Ok(rule
        .apply(&problem)
        .map_err(value_error)?
        .into_awards()
        .iter()
        .map(Quantity::repr)
        .collect())
}

fn build_basin<Q: Quantity>(
    nodes: Vec<(String, Q, Option<Q>)>,
    edges: Vec<(String, String)>,
    budget: Q,
) -> PyResult<BasinGraph<Q>> {
    let nodes = nodes
        .into_iter()
        .map(|(id, claim, gamma)| {
            let node = BasinNode::new(id, claim);
            match gamma {
                Some(g) => node.with_gamma(g),
                None => node,
            }
        })
        .collect();
    BasinGraph::new(nodes, &edges, budget).map_err(value_error)
}

/// Geometric allocation on a basin graph over floats.
///
/// `nodes` is a list of `(id, claim, gamma_override_or_None)` triples;
/// returns `(awards, retained)` as ordered `(id, value)` pair lists.
#[pyfunction]
fn basin_allocate(
    nodes: Vec<(String, f64, Option<f64>)>,
    edges: Vec<(String, String)>,
    budget: f64,
    gamma: f64,
) -> PyResult<(Vec<(String, f64)>, Vec<(String, f64)>)> {
    let graph = build_basin(nodes, edges, budget)?;
    let gamma = GammaParam::new(gamma).map_err(value_error)?;
    let result = basin_geometric(&graph, &gamma);
    let awards = result.awards().iter().map(|(id, v)| (id.clone(), *v)).collect();
    let retained = result.retained().iter().map(|(id, v)| (id.clone(), *v)).collect();
    Ok((awards, retained))
}

/// Exact geometric allocation on a basin graph; values are decimal strings
/// in and reduced fractions out.
#[pyfunction]
fn basin_allocate_exact(
    nodes: Vec<(String, String, Option<String>)>,
    edges: Vec<(String, String)>,
    budget: &str,
    gamma: &str,
) -> PyResult<(Vec<(String, String)>, Vec<(String, String)>)> {
    let nodes = nodes
        .into_iter()
        .map(|(id, claim, gamma)| {
            Ok((
                id,
                parse_exact("claim", &claim)?,
                gamma.map(|g| parse_exact("gamma", &g)).transpose()?,
            ))
        })
        .collect::<PyResult<Vec<_>>>()?;
    let graph = build_basin(nodes, edges, parse_exact("budget", budget)?)?;
    let gamma = GammaParam::new(parse_exact("gamma", gamma)?).map_err(value_error)?;
    let result = basin_geometric(&graph, &gamma);
    let awards = result.awards().iter().map(|(id, v)| (id.clone(), v.repr())).collect();
    let retained = result.retained().iter().map(|(id, v)| (id.clone(), v.repr())).collect();
    Ok((awards, retained))
}

fn threshold_dict<'py>(py: Python<'py>, result: &ThresholdResult) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("family", result.family.to_string())?;
    dict.set_item("threshold", result.threshold)?;
    dict.set_item("binding_agent", result.binding_agent)?;
    dict.set_item("feasible_intervals", result.feasible_intervals.clone())?;
    dict.set_item("tol", result.tol)?;
    dict.set_item("formula", result.formula_path)?;
    dict.set_item("warning", result.warning.clone())?;
    Ok(dict)
}

/// Smallest γ whose geometric awards stay within every claim.
#[pyfunction]
#[pyo3(signature = (claims, budget, tol=DEFAULT_THRESHOLD_TOL))]
fn min_gamma<'py>(
    py: Python<'py>,
    claims: Vec<f64>,
    budget: f64,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(value_error("tol must be a positive number"));
    }
    let problem = CoreProblem::new(claims, budget).map_err(value_error)?;
    threshold_dict(py, &min_gamma_claims_bounded(&problem, tol))
}

/// Smallest λ whose averaging awards stay within every claim (closed form).
#[pyfunction]
fn min_lambda<'py>(py: Python<'py>, claims: Vec<f64>, budget: f64) -> PyResult<Bound<'py, PyDict>> {
    let problem = CoreProblem::new(claims, budget).map_err(value_error)?;
    threshold_dict(py, &min_lambda_claims_bounded(&problem))
}

/// Geometric award paths over a uniform γ grid.
#[pyfunction]
fn sweep<'py>(
    py: Python<'py>,
    claims: Vec<f64>,
    budget: f64,
    points: usize,
) -> PyResult<Bound<'py, PyDict>> {
    if points < 2 {
        return Err(value_error("points must be at least 2"));
    }
    let problem = CoreProblem::new(claims, budget).map_err(value_error)?;
    let grid = uniform_grid::<f64>(points);
    let result = sweep_gamma(&problem, &grid).map_err(value_error)?;
    let dict = PyDict::new(py);
    dict.set_item("gamma", result.grid)?;
    dict.set_item(
        "awards",
        result.awards.iter().map(|a| a.awards().to_vec()).collect::<Vec<_>>(),
    )?;
    Ok(dict)
}

/// γ maximizing each agent's award, by grid scan plus refinement.
#[pyfunction]
#[pyo3(signature = (claims, budget, tol=DEFAULT_THRESHOLD_TOL))]
fn argmax_gamma(claims: Vec<f64>, budget: f64, tol: f64) -> PyResult<Vec<f64>> {
    let problem = CoreProblem::new(claims, budget).map_err(value_error)?;
    Ok(argmax_gamma_per_agent(&problem, tol))
}

/// Check one axiom against a rule spec by seeded sampling over exact
/// instances; returns the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (rule, axiom, seed=7, samples=500))]
fn check_axiom(rule: &str, axiom: &str, seed: u64, samples: usize) -> PyResult<String> {
    let rule = RuleSpec::<Rational>::parse(rule).map_err(value_error)?;
    let axiom = Axiom::from_name(axiom).ok_or_else(|| {
        value_error(format!(
            "unknown axiom `{axiom}`; available: {}",
            Axiom::all().iter().map(|a| a.name()).collect::<Vec<_>>().join(", ")
        ))
    })?;
    let config = CheckConfig {
        seed,
        samples,
        ..CheckConfig::default()
    };
    let report = core_check(&rule, axiom, &config);
    serde_json::to_string(&report.to_json()).map_err(value_error)
}

/// The satisfy/violate battery for the four bundled rules, flattened to a
/// JSON array of reports (axiom-major order).
#[pyfunction]
#[pyo3(signature = (seed=7, samples=500))]
fn axiom_matrix(seed: u64, samples: usize) -> PyResult<String> {
    let config = CheckConfig {
        seed,
        samples,
        ..CheckConfig::default()
    };
    let matrix = core_matrix(&default_rules::<Rational>(), &config);
    let reports: Vec<serde_json::Value> = matrix
        .iter()
        .flat_map(|(_, reports)| reports.iter().map(|r| r.to_json()))
        .collect();
    serde_json::to_string(&serde_json::Value::Array(reports)).map_err(value_error)
}

/// Kebab-case names accepted by `check_axiom`.
#[pyfunction]
fn axiom_names() -> Vec<&'static str> {
    Axiom::all().iter().map(|a| a.name()).collect()
}

#[pymodule]
fn riparian_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProblem>()?;
    m.add_function(wrap_pyfunction!(allocate, m)?)?;
    m.add_function(wrap_pyfunction!(allocate_exact, m)?)?;
    m.add_function(wrap_pyfunction!(basin_allocate, m)?)?;
    m.add_function(wrap_pyfunction!(basin_allocate_exact, m)?)?;
    m.add_function(wrap_pyfunction!(min_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(min_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(argmax_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(check_axiom, m)?)?;
    m.add_function(wrap_pyfunction!(axiom_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(axiom_names, m)?)?;
    Ok(())
}
