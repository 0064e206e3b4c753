//! Lookup tables over a difference model: what happened to each old element.

use std::collections::BTreeMap;

use super::matching::FeatureKey;
use super::{DiffEntry, DiffModel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeatureFate {
    Deleted {
        entry: usize,
    },
    Changed {
        /// Index of the diff entry.
        entry: usize,
        new_owner: String,
        new_name: String,
        /// Attribute type name or reference target after the change.
        new_type: String,
        moved: bool,
        renamed: bool,
        retyped: bool,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    /// Old name → new name, for changed classes whose name differs.
    pub class_renames: BTreeMap<String, String>,
    /// Old name → entry index, for every changed class.
    pub changed_classes: BTreeMap<String, usize>,
    pub deleted_classes: BTreeMap<String, usize>,
    pub added_classes: BTreeMap<String, usize>,
    /// Keyed by old owner and old name.
    pub features: BTreeMap<FeatureKey, FeatureFate>,
    /// Keyed by new owner and new name.
    pub added_features: BTreeMap<FeatureKey, usize>,
}

impl Trace {
    pub fn from_diff(diff: &DiffModel) -> Trace {
        let mut t = Trace::default();
        for (i, e) in diff.entries.iter().enumerate() {
            match e {
                DiffEntry::ChangedClass { old, updated } => {
                    t.changed_classes.insert(old.name.clone(), i);
                    if old.name != updated.name {
                        t.class_renames.insert(old.name.clone(), updated.name.clone());
                    }
                }
                DiffEntry::DeletedClass { old } => {
                    t.deleted_classes.insert(old.name.clone(), i);
                }
                DiffEntry::AddedClass { new } => {
                    t.added_classes.insert(new.name.clone(), i);
                }
                _ => {}
            }
        }
        for (i, e) in diff.entries.iter().enumerate() {
            match e {
                DiffEntry::DeletedAttribute { owner, old } => {
                    t.features.insert(FeatureKey::new(owner, &old.name), FeatureFate::Deleted { entry: i });
                }
                DiffEntry::DeletedReference { owner, old } => {
                    t.features.insert(FeatureKey::new(owner, &old.name), FeatureFate::Deleted { entry: i });
                }
                DiffEntry::AddedAttribute { owner, new } => {
                    t.added_features.insert(FeatureKey::new(owner, &new.name), i);
                }
                DiffEntry::AddedReference { owner, new } => {
                    t.added_features.insert(FeatureKey::new(owner, &new.name), i);
                }
                DiffEntry::ChangedAttribute { old_owner, old, new_owner, updated } => {
                    let fate = FeatureFate::Changed {
                        entry: i,
                        new_owner: new_owner.clone(),
                        new_name: updated.name.clone(),
                        new_type: updated.type_name.as_str().to_string(),
                        moved: t.class_in_new(old_owner) != new_owner.as_str(),
                        renamed: old.name != updated.name,
                        retyped: old.type_name != updated.type_name,
                    };
                    t.features.insert(FeatureKey::new(old_owner, &old.name), fate);
                }
                DiffEntry::ChangedReference { old_owner, old, new_owner, updated } => {
                    let fate = FeatureFate::Changed {
                        entry: i,
                        new_owner: new_owner.clone(),
                        new_name: updated.name.clone(),
                        new_type: updated.target.clone(),
                        moved: t.class_in_new(old_owner) != new_owner.as_str(),
                        renamed: old.name != updated.name,
                        retyped: t.class_in_new(&old.target) != updated.target.as_str(),
                    };
                    t.features.insert(FeatureKey::new(old_owner, &old.name), fate);
                }
                _ => {}
            }
        }
        t
    }

    /// The name an old class goes by after the change; unchanged names pass
    /// through (deleted classes too, callers check `deleted_classes`).
    pub fn class_in_new<'a>(&'a self, old: &'a str) -> &'a str {
        self.class_renames.get(old).map_or(old, String::as_str)
    }

    pub fn old_name_of(&self, new: &str) -> Option<&str> {
        self.class_renames.iter().find(|(_, n)| n.as_str() == new).map(|(o, _)| o.as_str())
    }

    pub fn is_deleted(&self, old_class: &str) -> bool {
        self.deleted_classes.contains_key(old_class)
    }

    pub fn is_added(&self, new_class: &str) -> bool {
        self.added_classes.contains_key(new_class)
    }

    pub fn fate(&self, owner: &str, name: &str) -> Option<&FeatureFate> {
        self.features.get(&FeatureKey::new(owner, name))
    }

    pub fn fate_entry(&self, owner: &str, name: &str) -> Option<usize> {
        self.fate(owner, name).map(|f| match f {
            FeatureFate::Deleted { entry } | FeatureFate::Changed { entry, .. } => *entry,
        })
    }

    /// True when the feature is untouched or only renamed in place.
    pub fn feature_survives_by_rename(&self, owner: &str, name: &str) -> bool {
        match self.fate(owner, name) {
            None => true,
            Some(FeatureFate::Deleted { .. }) => false,
            Some(FeatureFate::Changed { moved, retyped, .. }) => !moved && !retyped,
        }
    }
}
