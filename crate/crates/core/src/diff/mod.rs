//! Metamodel differencing.
//!
//! A [`DiffModel`] is an ordered list of added, deleted and changed classes,
//! attributes and references. Classes travel as shells (no features); every
//! feature change is its own entry. A changed entry pairs the old element
//! with its updated element, so renames and moves are self-describing.

mod apply;
mod classify;
mod compute;
mod matching;
mod schema;
mod trace;

use serde::{Deserialize, Serialize};

use crate::model::{AttributeDef, ClassDef, Document, InvariantError, ModelKind, ReferenceDef};

pub use apply::{apply_diff, ApplyError};
pub use classify::{classify_changes, CatalogChange, ChangeKind, Classification};
pub use compute::compute_diff;
pub use matching::{class_similarity, jaccard, match_elements, Correspondence, FeatureKey, RENAME_THRESHOLD};
pub use schema::{derive_difference_schema, ecore_meta_schema, DifferenceSchema};
pub use trace::{FeatureFate, Trace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase", rename_all_fields = "camelCase", deny_unknown_fields)]
pub enum DiffEntry {
    AddedClass {
        new: ClassDef,
    },
    DeletedClass {
        old: ClassDef,
    },
    ChangedClass {
        old: ClassDef,
        #[serde(rename = "updatedElement")]
        updated: ClassDef,
    },
    AddedAttribute {
        owner: String,
        new: AttributeDef,
    },
    DeletedAttribute {
        owner: String,
        old: AttributeDef,
    },
    ChangedAttribute {
        old_owner: String,
        old: AttributeDef,
        new_owner: String,
        #[serde(rename = "updatedElement")]
        updated: AttributeDef,
    },
    AddedReference {
        owner: String,
        new: ReferenceDef,
    },
    DeletedReference {
        owner: String,
        old: ReferenceDef,
    },
    ChangedReference {
        old_owner: String,
        old: ReferenceDef,
        new_owner: String,
        #[serde(rename = "updatedElement")]
        updated: ReferenceDef,
    },
}

impl DiffEntry {
    /// The difference-metamodel class this entry instantiates, e.g. `ChangedEClass`.
    pub fn meta_class(&self) -> &'static str {
        match self {
            DiffEntry::AddedClass { .. } => "AddedEClass",
            DiffEntry::DeletedClass { .. } => "DeletedEClass",
            DiffEntry::ChangedClass { .. } => "ChangedEClass",
            DiffEntry::AddedAttribute { .. } => "AddedEAttribute",
            DiffEntry::DeletedAttribute { .. } => "DeletedEAttribute",
            DiffEntry::ChangedAttribute { .. } => "ChangedEAttribute",
            DiffEntry::AddedReference { .. } => "AddedEReference",
            DiffEntry::DeletedReference { .. } => "DeletedEReference",
            DiffEntry::ChangedReference { .. } => "ChangedEReference",
        }
    }

    /// Sort key giving the canonical entry order: classes, then attributes,
    /// then references; by name within each group.
    pub(crate) fn sort_key(&self) -> (u8, &str, &str, u8) {
        match self {
            DiffEntry::DeletedClass { old } => (0, &old.name, "", 0),
            DiffEntry::ChangedClass { updated, .. } => (0, &updated.name, "", 1),
            DiffEntry::AddedClass { new } => (0, &new.name, "", 2),
            DiffEntry::DeletedAttribute { owner, old } => (1, owner, &old.name, 0),
            DiffEntry::ChangedAttribute { new_owner, updated, .. } => (1, new_owner, &updated.name, 1),
            DiffEntry::AddedAttribute { owner, new } => (1, owner, &new.name, 2),
            DiffEntry::DeletedReference { owner, old } => (2, owner, &old.name, 0),
            DiffEntry::ChangedReference { new_owner, updated, .. } => (2, new_owner, &updated.name, 1),
            DiffEntry::AddedReference { owner, new } => (2, owner, &new.name, 2),
        }
    }

    /// Short human-readable description.
    pub fn summary(&self) -> String {
        match self {
            DiffEntry::AddedClass { new } => {
                let abs = if new.is_abstract { " (abstract)" } else { "" };
                format!("added class {}{abs}", new.name)
            }
            DiffEntry::DeletedClass { old } => format!("deleted class {}", old.name),
            DiffEntry::ChangedClass { old, updated } => {
                if old.name != updated.name {
                    format!("changed class {} -> {}", old.name, updated.name)
                } else {
                    format!("changed class {}", old.name)
                }
            }
            DiffEntry::AddedAttribute { owner, new } => {
                format!("added attribute {owner}.{}: {}", new.name, new.type_name)
            }
            DiffEntry::DeletedAttribute { owner, old } => format!("deleted attribute {owner}.{}", old.name),
            DiffEntry::ChangedAttribute { old_owner, old, new_owner, updated } => format!(
                "changed attribute {old_owner}.{}: {} -> {new_owner}.{}: {}",
                old.name, old.type_name, updated.name, updated.type_name
            ),
            DiffEntry::AddedReference { owner, new } => {
                format!("added reference {owner}.{} -> {}", new.name, new.target)
            }
            DiffEntry::DeletedReference { owner, old } => format!("deleted reference {owner}.{}", old.name),
            DiffEntry::ChangedReference { old_owner, old, new_owner, updated } => format!(
                "changed reference {old_owner}.{} -> {new_owner}.{} (target {} -> {})",
                old.name, updated.name, old.target, updated.target
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DiffModel {
    #[serde(default)]
    pub entries: Vec<DiffEntry>,
}

impl DiffModel {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub(crate) fn sort(&mut self) {
        self.entries.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    }
}

impl Document for DiffModel {
    const KIND: ModelKind = ModelKind::Diff;

    fn check(&self) -> Result<(), InvariantError> {
        for (i, e) in self.entries.iter().enumerate() {
            let bad_shell = match e {
                DiffEntry::AddedClass { new: c } | DiffEntry::DeletedClass { old: c } => {
                    !c.attributes.is_empty() || !c.references.is_empty()
                }
                DiffEntry::ChangedClass { old, updated } => {
                    !old.attributes.is_empty()
                        || !old.references.is_empty()
                        || !updated.attributes.is_empty()
                        || !updated.references.is_empty()
                }
                _ => false,
            };
            if bad_shell {
                return Err(InvariantError::new(
                    format!("entries[{i}]"),
                    "class entries carry class shells; features are separate entries",
                ));
            }
        }
        Ok(())
    }
}
