//! Editor soundness: per-model blame and the overall soundness level.
//!
//! Each editor model gets a verdict. A model is *broken* (×) when it holds a
//! reference that no longer resolves, *gapped* (○) when the editor lacks a
//! capability the domain calls for, and *ok* (•) otherwise. The level is 1 if
//! any model is broken, 2 if any has a gap, 3 otherwise.

mod matrix;
mod rules;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diff::{DiffModel, Trace};
use crate::model::{Document, EditorModelSet, ModelKind};

pub use matrix::{assert_matrix, render_table, Cell, Expectations, ExpectedRow, MatrixOutcome, Mismatch, Phase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Broken,
    Gap,
    Ok,
}

impl Verdict {
    pub const ALL: [Verdict; 3] = [Verdict::Broken, Verdict::Gap, Verdict::Ok];

    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::Broken => "×",
            Verdict::Gap => "○",
            Verdict::Ok => "•",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// The editor models that can be blamed, in report column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EditorModel {
    EmfGen,
    Graph,
    Tooling,
    Mapping,
}

impl EditorModel {
    pub const ALL: [EditorModel; 4] =
        [EditorModel::EmfGen, EditorModel::Graph, EditorModel::Tooling, EditorModel::Mapping];

    pub fn label(self) -> &'static str {
        match self {
            EditorModel::EmfGen => "EmfGen",
            EditorModel::Graph => "Graph",
            EditorModel::Tooling => "Tooling",
            EditorModel::Mapping => "Mapping",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Broken,
    Gap,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Finding {
    pub model: EditorModel,
    pub code: String,
    pub subject: String,
    pub severity: Severity,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct BlameReport {
    pub per_model: BTreeMap<EditorModel, Verdict>,
    #[serde(default)]
    pub findings: Vec<Finding>,
    pub level: u8,
}

impl Document for BlameReport {
    const KIND: ModelKind = ModelKind::Blame;
}

impl BlameReport {
    pub fn verdict(&self, model: EditorModel) -> Verdict {
        self.per_model.get(&model).copied().unwrap_or(Verdict::Ok)
    }

    pub fn verdicts(&self) -> [Verdict; 4] {
        EditorModel::ALL.map(|m| self.verdict(m))
    }

    fn from_findings(mut findings: Vec<Finding>) -> BlameReport {
        findings.sort();
        findings.dedup();
        let per_model: BTreeMap<_, _> = EditorModel::ALL
            .iter()
            .map(|&m| {
                let mine = findings.iter().filter(|f| f.model == m);
                let verdict = mine.fold(Verdict::Ok, |v, f| match f.severity {
                    Severity::Broken => Verdict::Broken,
                    Severity::Gap if v == Verdict::Ok => Verdict::Gap,
                    Severity::Gap => v,
                });
                (m, verdict)
            })
            .collect();
        let level = soundness_level(per_model.values().copied());
        BlameReport { per_model, findings, level }
    }
}

/// 1 if any verdict is broken, else 2 if any has a gap, else 3.
pub fn soundness_level(verdicts: impl IntoIterator<Item = Verdict>) -> u8 {
    verdicts.into_iter().fold(3, |level, v| match v {
        Verdict::Broken => 1,
        Verdict::Gap => level.min(2),
        Verdict::Ok => level,
    })
}

/// Validates an editor model set against its domain model. With a
/// difference model, references made stale by a rename count as gaps rather
/// than breakage in the tooling model, and stale tool titles are reported.
pub fn validate(set: &EditorModelSet, diff: Option<&DiffModel>) -> BlameReport {
    let trace = diff.map(Trace::from_diff);
    BlameReport::from_findings(rules::findings(set, trace.as_ref()))
}
