//! Built-in example editors and evolution scenarios.
//!
//! A base is a complete editor model set stored as five documents. A scenario
//! names a base, an edit script producing the new domain model, the adapter
//! strategy, and the verdicts expected before and after co-change. All files
//! live under `fixtures/` in this crate and are compiled into the library.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adapters::Strategy;
use crate::diff::{compute_diff, ApplyError, DiffModel};
use crate::edit::{apply_script, EditError, EditOp};
use crate::model::{parse_model, Document, EditorModelSet, Metamodel, ModelKind, ParseError};
use crate::soundness::Expectations;

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("unknown base {0:?}")]
    UnknownBase(String),
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("{file}: {source}")]
    Parse {
        file: String,
        #[source]
        source: ParseError,
    },
    #[error("edit {index} fails: {source}")]
    Edit {
        index: usize,
        #[source]
        source: EditError,
    },
    #[error(transparent)]
    Apply(#[from] ApplyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub title: String,
    pub base: String,
    /// Row of the change catalog this scenario exercises, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog_row: Option<u32>,
    #[serde(default)]
    pub strategy: Strategy,
    pub edits: Vec<EditOp>,
    pub expected: Expectations,
}

impl Document for Scenario {
    const KIND: ModelKind = ModelKind::Scenario;
}

impl Scenario {
    pub fn base_set(&self) -> Result<EditorModelSet, FixtureError> {
        base(&self.base)
    }

    /// The domain model after applying the edit script to the base domain.
    pub fn new_domain(&self) -> Result<Metamodel, FixtureError> {
        let set = self.base_set()?;
        apply_script(&set.domain, &self.edits).map_err(|(index, source)| FixtureError::Edit { index, source })
    }

    pub fn diff(&self) -> Result<DiffModel, FixtureError> {
        Ok(compute_diff(&self.base_set()?.domain, &self.new_domain()?))
    }

    /// The editor right after the domain change: old editor models over the
    /// new domain model.
    pub fn before_set(&self) -> Result<EditorModelSet, FixtureError> {
        let mut set = self.base_set()?;
        set.domain = self.new_domain()?;
        Ok(set)
    }
}

macro_rules! base_files {
    ($name:literal) => {
        (
            $name,
            [
                (
                    concat!($name, ".mm.json"),
                    include_str!(concat!("../fixtures/bases/", $name, "/", $name, ".mm.json")),
                ),
                (
                    concat!($name, ".graph.json"),
                    include_str!(concat!("../fixtures/bases/", $name, "/", $name, ".graph.json")),
                ),
                (
                    concat!($name, ".tool.json"),
                    include_str!(concat!("../fixtures/bases/", $name, "/", $name, ".tool.json")),
                ),
                (
                    concat!($name, ".map.json"),
                    include_str!(concat!("../fixtures/bases/", $name, "/", $name, ".map.json")),
                ),
                (
                    concat!($name, ".gen.json"),
                    include_str!(concat!("../fixtures/bases/", $name, "/", $name, ".gen.json")),
                ),
            ],
        )
    };
}

macro_rules! scenario_file {
    ($name:literal) => {
        ($name, include_str!(concat!("../fixtures/scenarios/", $name, ".scenario.json")))
    };
}

type BaseEntry = (&'static str, [(&'static str, &'static str); 5]);

const BASES: &[BaseEntry] = &[base_files!("catalog"), base_files!("mindmap")];

const SCENARIOS: &[(&str, &str)] = &[
    scenario_file!("add-concrete-class"),
    scenario_file!("add-abstract-class"),
    scenario_file!("add-specialization"),
    scenario_file!("delete-concrete-class"),
    scenario_file!("rename-class"),
    scenario_file!("add-property"),
    scenario_file!("delete-property"),
    scenario_file!("rename-property"),
    scenario_file!("move-property"),
    scenario_file!("pull-up-property"),
    scenario_file!("change-property-type"),
    scenario_file!("add-class-as-specialization"),
    scenario_file!("mindmap-evolution"),
];

pub fn base_names() -> Vec<&'static str> {
    BASES.iter().map(|(n, _)| *n).collect()
}

/// File names and contents of a base, in domain, graph, tooling, mapping,
/// generator order.
pub fn base_files(name: &str) -> Option<[(&'static str, &'static str); 5]> {
    BASES.iter().find(|(n, _)| *n == name).map(|(_, files)| *files)
}

fn parse<T: Document>(file: &str, text: &str) -> Result<T, FixtureError> {
    parse_model(text.as_bytes()).map_err(|source| FixtureError::Parse { file: file.to_string(), source })
}

pub fn base(name: &str) -> Result<EditorModelSet, FixtureError> {
    let [mm, graph, tool, map, gen] = base_files(name).ok_or_else(|| FixtureError::UnknownBase(name.to_string()))?;
    Ok(EditorModelSet {
        domain: parse(mm.0, mm.1)?,
        graph: parse(graph.0, graph.1)?,
        tooling: parse(tool.0, tool.1)?,
        mapping: parse(map.0, map.1)?,
        emfgen: parse(gen.0, gen.1)?,
    })
}

pub fn scenario_names() -> Vec<&'static str> {
    SCENARIOS.iter().map(|(n, _)| *n).collect()
}

/// The raw document text of a scenario.
pub fn scenario_source(name: &str) -> Option<&'static str> {
    SCENARIOS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn scenario(name: &str) -> Result<Scenario, FixtureError> {
    let text = scenario_source(name).ok_or_else(|| FixtureError::UnknownScenario(name.to_string()))?;
    parse(&format!("{name}.scenario.json"), text)
}

pub fn scenarios() -> Result<Vec<Scenario>, FixtureError> {
    scenario_names().into_iter().map(scenario).collect()
}

/// The catalog scenarios, ordered by catalog row.
pub fn catalog_scenarios() -> Result<Vec<Scenario>, FixtureError> {
    let mut all: Vec<Scenario> = scenarios()?.into_iter().filter(|s| s.catalog_row.is_some()).collect();
    all.sort_by_key(|s| s.catalog_row);
    Ok(all)
}
