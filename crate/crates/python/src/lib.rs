//! Python module `prym`.
//!
//! Graphs, covers, towers and Gram matrices are passed as JSON, either as a
//! string or as the equivalent dict. Results come back as plain Python
//! objects (dicts, lists, strings, floats).

use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::{json, Value};

use prym_core::enumerate::{run_verification, stage_counts};
use prym_core::graph::json::graph_from_json;
use prym_core::graph::Graph;
use prym_core::linear::{fmt_q, parse_assignment, q, Var, Q};
use prym_core::matroid::fs_sets;
use prym_core::moments::{i2_jac, i2_prym, w0_jac, w0_prym, AppendixReading, PrymOptions};
use prym_core::morphism::{DoubleCover, Tower};
use prym_core::oracle::{mc_moment, prym_gram, Gram};
use prym_core::poly::MomentExpression;
use prym_core::random::length_vars;
use prym_core::trigonal::verify_tower;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn value_of(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let s: String = match obj.extract::<String>() {
        Ok(s) => s,
        Err(_) => obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?,
    };
    serde_json::from_str(&s).map_err(err)
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (v.to_string(),))?.unbind())
}

fn options(p_coefficient: i64, reading: &str) -> PyResult<PrymOptions> {
    if !(1..=2).contains(&p_coefficient) {
        return Err(PyValueError::new_err("p_coefficient must be 1 or 2"));
    }
    let reading = match reading {
        "corrected" => AppendixReading::Corrected,
        "printed" => AppendixReading::Printed,
        r => return Err(PyValueError::new_err(format!("unknown reading '{r}'"))),
    };
    Ok(PrymOptions { p_coefficient, reading })
}

// unspecified lengths default to 1
fn point(g: &Graph, at: Option<&str>) -> PyResult<Option<HashMap<Var, Q>>> {
    let Some(s) = at else { return Ok(None) };
    let given = parse_assignment(s).map_err(err)?;
    let vars = length_vars(g);
    if let Some(v) = given.keys().find(|v| !vars.contains(v)) {
        return Err(PyValueError::new_err(format!("unknown length variable '{}'", v.name())));
    }
    Ok(Some(vars.into_iter().map(|v| (v, given.get(&v).cloned().unwrap_or_else(|| q(1)))).collect()))
}

fn moment(m: &MomentExpression, w0: String, pt: Option<HashMap<Var, Q>>) -> PyResult<Value> {
    let mut v = json!({"w0": w0, "i2": m.to_json(), "expression": m.to_string()});
    if let Some(pt) = pt {
        let e = m.eval_exact(&pt).map_err(err)?;
        v["value"] = json!({
            "scaled_numerator": fmt_q(&e.scaled_numerator),
            "radicand": fmt_q(&e.radicand),
            "decimal": e.to_f64(),
        });
    }
    Ok(v)
}

/// Volume polynomial and second moment of the Jacobian of a metric graph.
#[pyfunction]
#[pyo3(signature = (graph, at=None))]
fn jacobian_moments(py: Python<'_>, graph: &Bound<'_, PyAny>, at: Option<&str>) -> PyResult<Py<PyAny>> {
    let g = graph_from_json(&value_of(graph)?).map_err(err)?;
    let w0 = w0_jac(&g).map_err(err)?.to_string();
    let i2 = i2_jac(&g).map_err(err)?;
    to_py(py, &moment(&i2, w0, point(&g, at)?)?)
}

/// Volume polynomial and second moment of the Prym variety of a double cover.
#[pyfunction]
#[pyo3(signature = (cover, at=None, p_coefficient=2, reading="corrected"))]
fn prym_moments(
    py: Python<'_>,
    cover: &Bound<'_, PyAny>,
    at: Option<&str>,
    p_coefficient: i64,
    reading: &str,
) -> PyResult<Py<PyAny>> {
    let c = DoubleCover::from_json(&value_of(cover)?).map_err(err)?;
    let opts = options(p_coefficient, reading)?;
    let w0 = w0_prym(&c).map_err(err)?.to_string();
    let i2 = i2_prym(&c, opts).map_err(err)?;
    let mut v = moment(&i2, w0, point(&c.base, at)?)?;
    v["torus_rank"] = json!(c.torus_rank().map_err(err)?);
    to_py(py, &v)
}

/// FS_n edge sets of a cover for every n >= 2, as lists of edge names.
#[pyfunction]
fn fs_edge_sets(cover: &Bound<'_, PyAny>) -> PyResult<Vec<Vec<String>>> {
    let c = DoubleCover::from_json(&value_of(cover)?).map_err(err)?;
    let name = |e: usize| c.base.edges[e].name.clone();
    Ok((2..=c.base.num_edges())
        .flat_map(|n| fs_sets(&c, n))
        .map(|s| s.into_iter().map(name).collect())
        .collect())
}

/// Runs the trigonal construction on one tower and compares both sides.
#[pyfunction]
#[pyo3(signature = (tower, p_coefficient=2, reading="corrected"))]
fn check_tower(py: Python<'_>, tower: &Bound<'_, PyAny>, p_coefficient: i64, reading: &str) -> PyResult<Py<PyAny>> {
    let t = Tower::from_json(&value_of(tower)?).map_err(err)?;
    let r = verify_tower(&t, options(p_coefficient, reading)?).map_err(err)?;
    to_py(py, &r.to_json())
}

/// Counts at each enumeration stage for genus 2, 3 or 4.
#[pyfunction]
fn enumeration_counts(py: Python<'_>, genus: usize) -> PyResult<Py<PyAny>> {
    if !(2..=4).contains(&genus) {
        return Err(PyValueError::new_err("genus must be 2, 3 or 4"));
    }
    to_py(py, &stage_counts(genus).to_json())
}

/// Full symbolic sweep over all trigonal towers of the given genus.
#[pyfunction]
#[pyo3(signature = (genus, p_coefficient=2, reading="corrected"))]
fn verify(py: Python<'_>, genus: usize, p_coefficient: i64, reading: &str) -> PyResult<Py<PyAny>> {
    if !(2..=4).contains(&genus) {
        return Err(PyValueError::new_err("genus must be 2, 3 or 4"));
    }
    let opts = options(p_coefficient, reading)?;
    let r = py.detach(|| run_verification(genus, opts)).map_err(err)?;
    let mut v = r.to_json(false);
    v["all_passed"] = json!(r.all_passed());
    to_py(py, &v)
}

/// Monte Carlo second moment of a lattice, given by a Gram matrix or by a
/// cover at a point.
#[pyfunction]
#[pyo3(signature = (gram=None, cover=None, at="", samples=100_000, seed=0))]
fn monte_carlo(
    py: Python<'_>,
    gram: Option<&Bound<'_, PyAny>>,
    cover: Option<&Bound<'_, PyAny>>,
    at: &str,
    samples: usize,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let g = match (gram, cover) {
        (Some(g), None) => Gram::from_json(&value_of(g)?).map_err(err)?,
        (None, Some(c)) => {
            let c = DoubleCover::from_json(&value_of(c)?).map_err(err)?;
            let pt = point(&c.base, Some(at))?.expect("point given");
            prym_gram(&c, &pt).map_err(err)?
        }
        _ => return Err(PyValueError::new_err("pass exactly one of gram, cover")),
    };
    let r = py.detach(|| mc_moment(&g, samples, seed)).map_err(err)?;
    to_py(
        py,
        &json!({"det": fmt_q(&g.det()), "i0": r.i0, "i2": r.i2, "std_error": r.std_error}),
    )
}

#[pymodule]
fn prym(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(jacobian_moments, m)?)?;
    m.add_function(wrap_pyfunction!(prym_moments, m)?)?;
    m.add_function(wrap_pyfunction!(fs_edge_sets, m)?)?;
    m.add_function(wrap_pyfunction!(check_tower, m)?)?;
    m.add_function(wrap_pyfunction!(enumeration_counts, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo, m)?)?;
    Ok(())
}
