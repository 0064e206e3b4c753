use regex::Regex;
use thiserror::Error;

use super::Evolution;
use crate::diff::FeatureFate;
use crate::model::{MappingModel, NodeMapping};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error("{0} was deleted and has no counterpart in the new metamodel")]
    Deleted(String),
    #[error("{0} does not exist in the old metamodel")]
    NotFound(String),
}

impl Evolution {
    /// The class an old class corresponds to in the new metamodel.
    pub fn class_in_new_metamodel<'a>(&'a self, class: &'a str) -> Result<&'a str, LookupError> {
        if !self.old.has_class(class) {
            return Err(LookupError::NotFound(class.to_string()));
        }
        if self.trace.is_deleted(class) {
            return Err(LookupError::Deleted(class.to_string()));
        }
        Ok(self.trace.class_in_new(class))
    }

    /// The owner of an old feature in the new metamodel.
    pub fn new_container<'a>(&'a self, owner: &'a str, feature: &str) -> Result<&'a str, LookupError> {
        let qualified = || format!("{owner}.{feature}");
        if !self.old.class(owner).is_some_and(|c| c.declares(feature)) {
            return Err(LookupError::NotFound(qualified()));
        }
        match self.trace.fate(owner, feature) {
            Some(FeatureFate::Deleted { .. }) => Err(LookupError::Deleted(qualified())),
            Some(FeatureFate::Changed { new_owner, .. }) => Ok(new_owner),
            None => self.class_in_new_metamodel(owner),
        }
    }

    pub fn is_moved(&self, owner: &str, feature: &str) -> bool {
        matches!(self.trace.fate(owner, feature), Some(FeatureFate::Changed { moved: true, .. }))
    }

    pub fn is_moved_to_added_class(&self, owner: &str, feature: &str) -> bool {
        match self.trace.fate(owner, feature) {
            Some(FeatureFate::Changed { moved: true, new_owner, .. }) => self.trace.is_added(new_owner),
            _ => false,
        }
    }

    pub fn is_renamed(&self, owner: &str, feature: &str) -> bool {
        matches!(self.trace.fate(owner, feature), Some(FeatureFate::Changed { renamed: true, .. }))
    }

    /// The name a class had before the change, for classes that existed then.
    pub(crate) fn old_name_of<'a>(&'a self, new_class: &'a str) -> Option<&'a str> {
        if self.trace.is_added(new_class) {
            return None;
        }
        let old = self.trace.old_name_of(new_class).unwrap_or(new_class);
        self.old.has_class(old).then_some(old)
    }
}

/// The existing class whose management a new specialization copies.
pub(crate) struct Sibling<'m> {
    pub new_name: String,
    pub old_name: String,
    pub node: &'m NodeMapping,
}

/// Picks the sibling of `added` to replicate: a concrete direct subclass of
/// the first supertype of `added` that existed before the change and has a
/// node mapping in `mapping`. Several candidates resolve to the smallest name.
pub(crate) fn sibling_for<'m>(evo: &Evolution, mapping: &'m MappingModel, added: &str) -> Option<Sibling<'m>> {
    let parent = evo.new.class(added)?.super_types.first()?;
    let mut candidates: Vec<&str> = evo
        .new
        .classes
        .iter()
        .filter(|c| c.name != added && !c.is_abstract && c.super_types.contains(parent))
        .map(|c| c.name.as_str())
        .collect();
    candidates.sort_unstable();
    candidates.into_iter().find_map(|new_name| {
        let old_name = evo.old_name_of(new_name)?;
        let node = mapping.node_mappings().find(|n| n.domain_meta_element == old_name)?;
        Some(Sibling { new_name: new_name.to_string(), old_name: old_name.to_string(), node })
    })
}

fn word(name: &str) -> Regex {
    Regex::new(&format!(r"\b{}\b", regex::escape(name))).expect("escaped pattern is valid")
}

pub(crate) fn contains_word(text: &str, name: &str) -> bool {
    word(name).is_match(text)
}

/// Replaces every whole-word occurrence of `from` in `text` by `to`.
pub fn rename_word(text: &str, from: &str, to: &str) -> String {
    word(from).replace_all(text, regex::NoExpand(to)).into_owned()
}

/// Title of the tool created for `added`, derived from the sibling's tool.
pub(crate) fn specialization_title(sibling: &Sibling<'_>, added: &str) -> String {
    let title = &sibling.node.tool;
    for name in [&sibling.new_name, &sibling.old_name] {
        if contains_word(title, name) {
            return rename_word(title, name, added);
        }
    }
    added.to_string()
}

pub(crate) fn creation_description(class: &str) -> String {
    format!("Create new {class}")
}
