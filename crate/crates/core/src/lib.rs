//! Co-evolution of generated graphical editors.
//!
//! When the domain metamodel of an editor changes, the companion models
//! (generator configuration, tooling palette, mapping) drift out of sync.
//! This crate diffs two metamodel versions into a difference model,
//! classifies the differences against a fixed change catalog, propagates
//! them into the companion models with rule-based adapters, and rates the
//! resulting editor with per-model blame and a soundness level.
//!
//! The pipeline, end to end:
//!
//! ```
//! use coevo_core::prelude::*;
//!
//! let scenario = fixtures::scenario("rename-class").unwrap();
//! let old = scenario.base_set().unwrap();
//! let new_domain = scenario.new_domain().unwrap();
//!
//! let diff = compute_diff(&old.domain, &new_domain);
//! let plan = adapt_all(&diff, &old, Strategy::BestEffort).unwrap();
//! let report = validate(&plan.outputs, Some(&diff));
//! assert_eq!(report.level, 3);
//! ```

pub mod adapters;
pub mod diff;
pub mod edit;
pub mod fixtures;
pub mod model;
pub mod soundness;

pub mod prelude {
    pub use crate::adapters::{adapt_all, AdaptationPlan, Evolution, Strategy};
    pub use crate::diff::{
        apply_diff, classify_changes, compute_diff, derive_difference_schema, match_elements, CatalogChange,
        ChangeKind, DiffEntry, DiffModel,
    };
    pub use crate::fixtures;
    pub use crate::model::{parse_model, resolve, serialize_model, EditorModelSet, Metamodel, ModelKind};
    pub use crate::soundness::{validate, BlameReport, Verdict};
}
