//! Rule-based adapters that co-change the editor models after a domain change.
//!
//! Three adapters exist: generator configuration, tooling and mapping. The
//! graph model has no adapter and is passed through untouched. Every adapter
//! reads the difference model together with its classification and records
//! the rules it fires; a rule that cannot apply is skipped with a diagnostic
//! instead of aborting the run.
//!
//! Two strategies are available. [`Strategy::Minimalistic`] only removes what
//! would break the editor. [`Strategy::BestEffort`] also replicates the
//! management of a sibling class for newly added specializations and shows
//! added attributes in an existing label.

mod emfgen;
mod helpers;
mod mapping;
mod tooling;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diff::{
    apply_diff, classify_changes, ApplyError, CatalogChange, ChangeKind, Classification, DiffModel, Trace,
};
use crate::model::{Document, EditorModelSet, Metamodel, ModelKind};

pub use emfgen::adapt_emfgen;
pub(crate) use helpers::contains_word;
pub use helpers::{rename_word, LookupError};
pub use mapping::adapt_mapping;
pub use tooling::adapt_tooling;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Minimalistic,
    #[default]
    BestEffort,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Minimalistic => "minimalistic",
            Strategy::BestEffort => "best-effort",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minimalistic" => Ok(Strategy::Minimalistic),
            "best-effort" => Ok(Strategy::BestEffort),
            other => Err(format!("unknown strategy {other:?} (expected minimalistic or best-effort)")),
        }
    }
}

/// Everything the adapters know about one domain change: both metamodel
/// versions, the difference model, its classification and lookup tables.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub old: Metamodel,
    pub new: Metamodel,
    pub diff: DiffModel,
    pub classification: Classification,
    pub trace: Trace,
}

impl Evolution {
    /// Patches `old` with `diff` and classifies the entries.
    pub fn new(old: &Metamodel, diff: &DiffModel) -> Result<Evolution, ApplyError> {
        let new = apply_diff(old, diff)?;
        let classification = classify_changes(diff, old, &new);
        Ok(Evolution { old: old.clone(), new, diff: diff.clone(), classification, trace: Trace::from_diff(diff) })
    }

    pub(crate) fn change_for(&self, entry: usize) -> Option<&CatalogChange> {
        self.classification.covering(entry)
    }

    pub(crate) fn kind_for(&self, entry: usize) -> Option<ChangeKind> {
        self.change_for(entry).map(|c| c.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FiredRule {
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub change: Option<ChangeKind>,
    #[serde(default)]
    pub bindings: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Diagnostic {
    pub rule: String,
    pub message: String,
}

/// An adapted model plus the rules fired and the diagnostics raised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adapted<T> {
    pub model: T,
    pub fired: Vec<FiredRule>,
    pub diagnostics: Vec<Diagnostic>,
}

impl<T> Adapted<T> {
    pub(crate) fn new(model: T) -> Self {
        Adapted { model, fired: Vec::new(), diagnostics: Vec::new() }
    }

    pub(crate) fn fire(&mut self, rule: &str, evo: &Evolution, entry: Option<usize>, extra: &[(&str, &str)]) {
        let change = entry.and_then(|e| evo.change_for(e));
        let mut bindings = change.map(|c| c.bindings.clone()).unwrap_or_default();
        for (k, v) in extra {
            bindings.insert(k.to_string(), v.to_string());
        }
        self.fired.push(FiredRule { rule: rule.to_string(), change: change.map(|c| c.kind), bindings });
    }

    pub(crate) fn note(&mut self, rule: &str, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic { rule: rule.to_string(), message: message.into() });
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptationPlan {
    pub strategy: Strategy,
    pub fired_rules: Vec<FiredRule>,
    pub diagnostics: Vec<Diagnostic>,
    pub outputs: EditorModelSet,
}

impl AdaptationPlan {
    pub fn report(&self, outputs: Vec<String>) -> PlanReport {
        PlanReport {
            strategy: self.strategy,
            fired_rules: self.fired_rules.clone(),
            diagnostics: self.diagnostics.clone(),
            outputs,
        }
    }
}

/// Serializable summary of an adaptation run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PlanReport {
    pub strategy: Strategy,
    #[serde(default)]
    pub fired_rules: Vec<FiredRule>,
    #[serde(default)]
    pub diagnostics: Vec<Diagnostic>,
    /// Paths of the written model files.
    #[serde(default)]
    pub outputs: Vec<String>,
}

impl Document for PlanReport {
    const KIND: ModelKind = ModelKind::Plan;
}

/// Runs the generator, tooling and mapping adapters in that order. The
/// mapping adapter sees the already adapted tooling model.
pub fn adapt_all(diff: &DiffModel, set: &EditorModelSet, strategy: Strategy) -> Result<AdaptationPlan, ApplyError> {
    let evo = Evolution::new(&set.domain, diff)?;
    Ok(adapt_evolution(&evo, set, strategy))
}

pub fn adapt_evolution(evo: &Evolution, set: &EditorModelSet, strategy: Strategy) -> AdaptationPlan {
    let emfgen = adapt_emfgen(evo, &set.emfgen);
    let tooling = adapt_tooling(evo, &set.mapping, &set.tooling, strategy);
    let mapping = adapt_mapping(evo, &set.mapping, &tooling.model, strategy);

    let domain = if evo.new.canonical_eq(&set.domain) { set.domain.clone() } else { evo.new.clone() };
    let mut fired_rules = emfgen.fired;
    fired_rules.extend(tooling.fired);
    fired_rules.extend(mapping.fired);
    let mut diagnostics = emfgen.diagnostics;
    diagnostics.extend(tooling.diagnostics);
    diagnostics.extend(mapping.diagnostics);

    AdaptationPlan {
        strategy,
        fired_rules,
        diagnostics,
        outputs: EditorModelSet {
            domain,
            graph: set.graph.clone(),
            tooling: tooling.model,
            mapping: mapping.model,
            emfgen: emfgen.model,
        },
    }
}
