//! Python bindings. Models cross the boundary as JSON document strings, and
//! editor model sets as dicts keyed by `domain`, `graph`, `tooling`,
//! `mapping` and `emfgen`.

use std::collections::BTreeMap;

use coevo_core::adapters::{adapt_all, Strategy};
use coevo_core::diff::{classify_changes, compute_diff, derive_difference_schema, DiffModel};
use coevo_core::fixtures;
use coevo_core::model::{parse_model, serialize_to_string, Document, EditorModelSet, Metamodel};
use coevo_core::soundness::{assert_matrix, render_table, validate as validate_set};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

const SET_KEYS: [&str; 5] = ["domain", "graph", "tooling", "mapping", "emfgen"];

fn invalid(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: Document>(what: &str, text: &str) -> PyResult<T> {
    parse_model(text.as_bytes()).map_err(|e| invalid(format!("{what}: {e}")))
}

fn model_set(models: &BTreeMap<String, String>) -> PyResult<EditorModelSet> {
    if let Some(extra) = models.keys().find(|k| !SET_KEYS.contains(&k.as_str())) {
        return Err(invalid(format!("unexpected model key {extra:?}")));
    }
    let get = |key: &str| models.get(key).ok_or_else(|| invalid(format!("missing model {key:?}")));
    Ok(EditorModelSet {
        domain: parse("domain", get("domain")?)?,
        graph: parse("graph", get("graph")?)?,
        tooling: parse("tooling", get("tooling")?)?,
        mapping: parse("mapping", get("mapping")?)?,
        emfgen: parse("emfgen", get("emfgen")?)?,
    })
}

fn set_documents(set: &EditorModelSet) -> BTreeMap<String, String> {
    let docs = [
        serialize_to_string(&set.domain),
        serialize_to_string(&set.graph),
        serialize_to_string(&set.tooling),
        serialize_to_string(&set.mapping),
        serialize_to_string(&set.emfgen),
    ];
    SET_KEYS.iter().map(|k| k.to_string()).zip(docs).collect()
}

/// Difference model document between two metamodel documents.
#[pyfunction]
fn diff(old: &str, new: &str) -> PyResult<String> {
    let old: Metamodel = parse("old", old)?;
    let new: Metamodel = parse("new", new)?;
    Ok(serialize_to_string(&compute_diff(&old, &new)))
}

/// Catalog changes found in a difference model, as (kind, bindings) pairs.
#[pyfunction]
fn classify(old: &str, diff: &str) -> PyResult<Vec<(String, BTreeMap<String, String>)>> {
    let old: Metamodel = parse("old", old)?;
    let diff: DiffModel = parse("diff", diff)?;
    let new = coevo_core::diff::apply_diff(&old, &diff).map_err(invalid)?;
    let c = classify_changes(&diff, &old, &new);
    Ok(c.changes.into_iter().map(|ch| (ch.kind.to_string(), ch.bindings)).collect())
}

/// Adapts an editor model set; the result holds the five models and a `plan` report.
#[pyfunction]
#[pyo3(signature = (diff, models, strategy = "best-effort"))]
fn adapt(diff: &str, models: BTreeMap<String, String>, strategy: &str) -> PyResult<BTreeMap<String, String>> {
    let strategy: Strategy = strategy.parse().map_err(invalid)?;
    let diff: DiffModel = parse("diff", diff)?;
    let set = model_set(&models)?;
    let plan = adapt_all(&diff, &set, strategy).map_err(invalid)?;
    let mut out = set_documents(&plan.outputs);
    out.insert("plan".into(), serialize_to_string(&plan.report(SET_KEYS.iter().map(|k| k.to_string()).collect())));
    Ok(out)
}

/// Blame report document for an editor model set.
#[pyfunction]
#[pyo3(signature = (models, trace = None))]
fn validate(models: BTreeMap<String, String>, trace: Option<&str>) -> PyResult<String> {
    let set = model_set(&models)?;
    let trace: Option<DiffModel> = trace.map(|t| parse("trace", t)).transpose()?;
    Ok(serialize_to_string(&validate_set(&set, trace.as_ref())))
}

/// Difference metamodel document of a metamodel document.
#[pyfunction]
fn schema(source: &str) -> PyResult<String> {
    Ok(serialize_to_string(&derive_difference_schema(&parse("source", source)?)))
}

#[pyfunction]
fn scenario_names() -> Vec<&'static str> {
    fixtures::scenario_names()
}

/// The base model set of a bundled scenario and its evolved metamodel.
#[pyfunction]
fn scenario_models(name: &str) -> PyResult<(BTreeMap<String, String>, String)> {
    let s = fixtures::scenario(name).map_err(invalid)?;
    let set = s.base_set().map_err(invalid)?;
    let new = s.new_domain().map_err(invalid)?;
    Ok((set_documents(&set), serialize_to_string(&new)))
}

/// Runs a bundled scenario against its expected matrix: (passed, table).
#[pyfunction]
fn run_scenario(name: &str) -> PyResult<(bool, String)> {
    let s = fixtures::scenario(name).map_err(invalid)?;
    let outcome = assert_matrix(&s).map_err(invalid)?;
    let table = render_table(&[("before".into(), &outcome.before), ("after".into(), &outcome.after)]);
    Ok((outcome.passed(), table))
}

#[pymodule]
fn coevo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(diff, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(adapt, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(schema, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_names, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_models, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
