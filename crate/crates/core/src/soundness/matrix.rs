use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use super::{validate, BlameReport, EditorModel, Verdict};
use crate::adapters::{adapt_all, AdaptationPlan};
use crate::fixtures::{FixtureError, Scenario};

/// An expected verdict cell. Besides the three verdicts, a cell may accept
/// anything but breakage, or anything at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cell {
    #[serde(rename = "×")]
    Broken,
    #[serde(rename = "○")]
    Gap,
    #[serde(rename = "•")]
    Ok,
    #[serde(rename = "¬×")]
    NotBroken,
    #[serde(rename = "?")]
    Any,
}

impl Cell {
    pub fn accepts(self, v: Verdict) -> bool {
        match self {
            Cell::Broken => v == Verdict::Broken,
            Cell::Gap => v == Verdict::Gap,
            Cell::Ok => v == Verdict::Ok,
            Cell::NotBroken => v != Verdict::Broken,
            Cell::Any => true,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cell::Broken => "×",
            Cell::Gap => "○",
            Cell::Ok => "•",
            Cell::NotBroken => "¬×",
            Cell::Any => "?",
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExpectedRow {
    pub emfgen: Cell,
    pub graph: Cell,
    pub tooling: Cell,
    pub mapping: Cell,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u8>,
}

impl ExpectedRow {
    pub fn cell(&self, model: EditorModel) -> Cell {
        match model {
            EditorModel::EmfGen => self.emfgen,
            EditorModel::Graph => self.graph,
            EditorModel::Tooling => self.tooling,
            EditorModel::Mapping => self.mapping,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Expectations {
    pub before: ExpectedRow,
    pub after: ExpectedRow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Before,
    After,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Before => "before",
            Phase::After => "after",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub phase: Phase,
    /// A model label or `Level`.
    pub column: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: expected {}, got {}", self.phase, self.column, self.expected, self.actual)
    }
}

#[derive(Debug, Clone)]
pub struct MatrixOutcome {
    pub scenario: String,
    pub before: BlameReport,
    pub after: BlameReport,
    pub plan: AdaptationPlan,
    pub mismatches: Vec<Mismatch>,
}

impl MatrixOutcome {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn compare(phase: Phase, expected: &ExpectedRow, report: &BlameReport, out: &mut Vec<Mismatch>) {
    for m in EditorModel::ALL {
        let cell = expected.cell(m);
        let actual = report.verdict(m);
        if !cell.accepts(actual) {
            out.push(Mismatch {
                phase,
                column: m.label().to_string(),
                expected: cell.to_string(),
                actual: actual.to_string(),
            });
        }
    }
    if let Some(level) = expected.level {
        if level != report.level {
            out.push(Mismatch {
                phase,
                column: "Level".into(),
                expected: level.to_string(),
                actual: report.level.to_string(),
            });
        }
    }
}

/// Validates the scenario's editor before co-change (old editor models over
/// the new domain) and after adaptation with the scenario's strategy, then
/// compares both reports with the expected rows cell by cell.
pub fn assert_matrix(scenario: &Scenario) -> Result<MatrixOutcome, FixtureError> {
    let old = scenario.base_set()?;
    let diff = scenario.diff()?;
    let before = validate(&scenario.before_set()?, Some(&diff));
    let plan = adapt_all(&diff, &old, scenario.strategy)?;
    let after = validate(&plan.outputs, Some(&diff));

    let mut mismatches = Vec::new();
    compare(Phase::Before, &scenario.expected.before, &before, &mut mismatches);
    compare(Phase::After, &scenario.expected.after, &after, &mut mismatches);
    Ok(MatrixOutcome { scenario: scenario.name.clone(), before, after, plan, mismatches })
}

/// Renders reports as a verdict table, one row per labelled report.
pub fn render_table(rows: &[(String, &BlameReport)]) -> String {
    let width = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0).max(8);
    let mut s = format!("{:width$}  EmfGen  Graph  Tooling  Mapping  Level\n", "");
    for (label, r) in rows {
        let _ = writeln!(
            s,
            "{label:width$}  {:^6}  {:^5}  {:^7}  {:^7}  {:^5}",
            r.verdict(EditorModel::EmfGen).symbol(),
            r.verdict(EditorModel::Graph).symbol(),
            r.verdict(EditorModel::Tooling).symbol(),
            r.verdict(EditorModel::Mapping).symbol(),
            r.level,
        );
    }
    s
}
