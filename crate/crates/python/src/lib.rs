//! Python bindings for the `stdist` engine.

use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use stdist::affine::{orbit_side_st_chi0, twisted_harmonic_exists};
use stdist::catalog::{self, CatalogEntry};
use stdist::checks::run_all;
use stdist::dual_group::{parameter_factors_through_iota, unipotent_criterion};
use stdist::hypergraph::OrbitHypergraph;
use stdist::root_system::Character;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn load() -> PyResult<Vec<CatalogEntry>> {
    catalog::builtin().map_err(err)
}

fn with_entry<T>(name: &str, f: impl FnOnce(&CatalogEntry) -> PyResult<T>) -> PyResult<T> {
    let entries = load()?;
    let e = catalog::find(&entries, name).ok_or_else(|| err(format!("unknown entry {name:?}")))?;
    f(e)
}

fn graph<'a>(e: &'a CatalogEntry, mode: &str) -> PyResult<&'a OrbitHypergraph> {
    match mode {
        "closed" => Ok(&e.closed),
        "rational" => e.rational.as_ref().ok_or_else(|| err("no rational graph")),
        "affine" => e.affine.as_ref().map(|a| &a.gamma1).ok_or_else(|| err("no affine fragment")),
        other => Err(err(format!("unknown mode {other:?}"))),
    }
}

/// Names of the built-in catalog entries, in catalog order.
#[pyfunction]
fn entries() -> PyResult<Vec<String>> {
    Ok(load()?.into_iter().map(|e| e.name).collect())
}

#[pyfunction]
#[pyo3(signature = (entry, mode = "closed"))]
fn harmonic_dim(entry: &str, mode: &str) -> PyResult<usize> {
    with_entry(entry, |e| Ok(graph(e, mode)?.harmonic_space().dim()))
}

#[pyfunction]
fn full_closed_count(entry: &str) -> PyResult<usize> {
    with_entry(entry, |e| Ok(e.closed.full_closed_vertices().len()))
}

#[pyfunction]
#[pyo3(signature = (entry, mode = "closed"))]
fn hypergraph_json(entry: &str, mode: &str) -> PyResult<String> {
    with_entry(entry, |e| serde_json::to_string(graph(e, mode)?).map_err(err))
}

/// Orbit side and dual side verdicts; `st_chi` is present when a
/// character is given and the entry carries an affine fragment.
#[pyfunction]
#[pyo3(signature = (entry, character = None))]
fn decide(entry: &str, character: Option<&str>) -> PyResult<HashMap<String, bool>> {
    with_entry(entry, |e| {
        let inv = &e.involution;
        let mut out = HashMap::new();
        out.insert("quasi_split".to_string(), inv.quasi_split());
        out.insert("st_chi0".to_string(), orbit_side_st_chi0(&e.closed, inv));
        out.insert(
            "dual".to_string(),
            unipotent_criterion(inv, &e.factor_data).map_err(err)?,
        );
        out.insert("dual_factors_through_iota".to_string(), parameter_factors_through_iota(inv));
        if let (Some(spec), Some(frag)) = (character, &e.affine) {
            let chi = Character::parse(&e.omega, spec).map_err(err)?;
            let t = twisted_harmonic_exists(&frag.gamma1, &e.omega, &frag.h_action, &chi).map_err(err)?;
            out.insert("st_chi".to_string(), t.exists);
        }
        Ok(out)
    })
}

#[pyfunction]
fn sp_embedding_jordan_type(n: usize) -> PyResult<Vec<usize>> {
    if n == 0 {
        return Err(err("n must be positive"));
    }
    Ok(stdist::dual_group::sp_embedding_jordan_type(n))
}

/// `(criterion, name, passed)` for each acceptance criterion.
#[pyfunction]
fn verify_all() -> PyResult<Vec<(u8, String, bool)>> {
    Ok(run_all(&load()?)
        .into_iter()
        .map(|r| (r.id, r.name.to_string(), r.passed))
        .collect())
}

#[pymodule]
fn stdist_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(entries, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic_dim, m)?)?;
    m.add_function(wrap_pyfunction!(full_closed_count, m)?)?;
    m.add_function(wrap_pyfunction!(hypergraph_json, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(sp_embedding_jordan_type, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
