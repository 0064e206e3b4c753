use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{DiffEntry, DiffModel};
use crate::model::{ClassDef, InvariantError, Metamodel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApplyError {
    #[error("entry {index}: {element} does not exist in the old metamodel")]
    Missing { index: usize, element: String },
    #[error("entry {index}: {element} does not match the old metamodel")]
    Mismatch { index: usize, element: String },
    #[error("entry {index}: {element} is already touched by entry {previous}")]
    Duplicate { index: usize, previous: usize, element: String },
    #[error("entry {index}: {element} already exists")]
    Collision { index: usize, element: String },
    #[error("entry {index}: owner class {owner:?} is missing after patching")]
    MissingOwner { index: usize, owner: String },
    #[error("patched metamodel is invalid: {0}")]
    Invalid(#[from] InvariantError),
}

enum OldSide<'a> {
    Class(&'a str),
    Feature(&'a str, &'a str),
}

fn old_side(e: &DiffEntry) -> Option<OldSide<'_>> {
    match e {
        DiffEntry::DeletedClass { old } | DiffEntry::ChangedClass { old, .. } => Some(OldSide::Class(&old.name)),
        DiffEntry::DeletedAttribute { owner, old } => Some(OldSide::Feature(owner, &old.name)),
        DiffEntry::ChangedAttribute { old_owner, old, .. } => Some(OldSide::Feature(old_owner, &old.name)),
        DiffEntry::DeletedReference { owner, old } => Some(OldSide::Feature(owner, &old.name)),
        DiffEntry::ChangedReference { old_owner, old, .. } => Some(OldSide::Feature(old_owner, &old.name)),
        _ => None,
    }
}

/// Patches `old` with `diff`. The result is in canonical order (see
/// [`Metamodel::canonical`]) and is validated.
pub fn apply_diff(old: &Metamodel, diff: &DiffModel) -> Result<Metamodel, ApplyError> {
    // Every old-side element must exist, match, and be touched at most once.
    let mut touched: BTreeMap<(String, String), usize> = BTreeMap::new();
    for (index, e) in diff.entries.iter().enumerate() {
        let Some(side) = old_side(e) else { continue };
        let key = match side {
            OldSide::Class(name) => {
                let Some(c) = old.class(name) else {
                    return Err(ApplyError::Missing { index, element: format!("class {name}") });
                };
                let shell = match e {
                    DiffEntry::DeletedClass { old } | DiffEntry::ChangedClass { old, .. } => old,
                    _ => unreachable!(),
                };
                if &c.shell() != shell {
                    return Err(ApplyError::Mismatch { index, element: format!("class {name}") });
                }
                (name.to_string(), String::new())
            }
            OldSide::Feature(owner, name) => {
                let element = format!("feature {owner}.{name}");
                let class = old.class(owner).ok_or_else(|| ApplyError::Missing { index, element: element.clone() })?;
                let matches = match e {
                    DiffEntry::DeletedAttribute { old, .. } | DiffEntry::ChangedAttribute { old, .. } => {
                        class.attribute(name).map(|a| a == old)
                    }
                    DiffEntry::DeletedReference { old, .. } | DiffEntry::ChangedReference { old, .. } => {
                        class.reference(name).map(|r| r == old)
                    }
                    _ => unreachable!(),
                };
                match matches {
                    None => return Err(ApplyError::Missing { index, element }),
                    Some(false) => return Err(ApplyError::Mismatch { index, element }),
                    Some(true) => {}
                }
                (owner.to_string(), name.to_string())
            }
        };
        if let Some(previous) = touched.insert(key.clone(), index) {
            let element = if key.1.is_empty() { key.0 } else { format!("{}.{}", key.0, key.1) };
            return Err(ApplyError::Duplicate { index, previous, element });
        }
    }

    let mut renames: BTreeMap<&str, &str> = BTreeMap::new();
    let mut changed_shells: BTreeMap<&str, &ClassDef> = BTreeMap::new();
    let mut deleted: BTreeSet<&str> = BTreeSet::new();
    for e in &diff.entries {
        match e {
            DiffEntry::DeletedClass { old } => {
                deleted.insert(&old.name);
            }
            DiffEntry::ChangedClass { old, updated } => {
                renames.insert(&old.name, &updated.name);
                changed_shells.insert(&old.name, updated);
            }
            _ => {}
        }
    }
    let rename = |n: &str| renames.get(n).map_or_else(|| n.to_string(), |r| r.to_string());

    let mut classes: Vec<ClassDef> = Vec::new();
    for c in old.classes.iter().filter(|c| !deleted.contains(c.name.as_str())) {
        let mut out = match changed_shells.get(c.name.as_str()) {
            Some(updated) => (*updated).clone(),
            None => {
                let mut s = c.shell();
                s.super_types = s.super_types.iter().map(|t| rename(t)).collect();
                s
            }
        };
        out.attributes =
            c.attributes.iter().filter(|a| !touched.contains_key(&(c.name.clone(), a.name.clone()))).cloned().collect();
        out.references = c
            .references
            .iter()
            .filter(|r| !touched.contains_key(&(c.name.clone(), r.name.clone())))
            .map(|r| {
                let mut r = r.clone();
                r.target = rename(&r.target);
                r
            })
            .collect();
        classes.push(out);
    }

    let mut result = Metamodel { name: old.name.clone(), classes };
    for (index, e) in diff.entries.iter().enumerate() {
        if let DiffEntry::AddedClass { new } = e {
            if result.has_class(&new.name) {
                return Err(ApplyError::Collision { index, element: format!("class {}", new.name) });
            }
            result.classes.push(new.shell());
        }
    }
    for (index, e) in diff.entries.iter().enumerate() {
        let (owner, attr, reference) = match e {
            DiffEntry::AddedAttribute { owner, new } => (owner, Some(new), None),
            DiffEntry::ChangedAttribute { new_owner, updated, .. } => (new_owner, Some(updated), None),
            DiffEntry::AddedReference { owner, new } => (owner, None, Some(new)),
            DiffEntry::ChangedReference { new_owner, updated, .. } => (new_owner, None, Some(updated)),
            _ => continue,
        };
        let class = result.class_mut(owner).ok_or_else(|| ApplyError::MissingOwner { index, owner: owner.clone() })?;
        let name = attr.map(|a| &a.name).or(reference.map(|r| &r.name)).expect("one is set");
        if class.declares(name) {
            return Err(ApplyError::Collision { index, element: format!("feature {owner}.{name}") });
        }
        if let Some(a) = attr {
            class.attributes.push(a.clone());
        }
        if let Some(r) = reference {
            class.references.push(r.clone());
        }
    }

    let result = result.canonical();
    result.check()?;
    Ok(result)
}
