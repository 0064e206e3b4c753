use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::trace::Trace;
use super::{DiffEntry, DiffModel};
use crate::model::Metamodel;

/// The change catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ChangeKind {
    AddEmptyConcreteClass,
    AddEmptyAbstractClass,
    AddSpecialization,
    DeleteConcreteClass,
    RenameClass,
    AddProperty,
    DeleteProperty,
    RenameProperty,
    MoveProperty,
    PullUpProperty,
    ChangePropertyType,
}

impl ChangeKind {
    pub const ALL: [ChangeKind; 11] = [
        ChangeKind::AddEmptyConcreteClass,
        ChangeKind::AddEmptyAbstractClass,
        ChangeKind::AddSpecialization,
        ChangeKind::DeleteConcreteClass,
        ChangeKind::RenameClass,
        ChangeKind::AddProperty,
        ChangeKind::DeleteProperty,
        ChangeKind::RenameProperty,
        ChangeKind::MoveProperty,
        ChangeKind::PullUpProperty,
        ChangeKind::ChangePropertyType,
    ];

    pub fn title(self) -> &'static str {
        match self {
            ChangeKind::AddEmptyConcreteClass => "Add empty, concrete class",
            ChangeKind::AddEmptyAbstractClass => "Add empty, abstract class",
            ChangeKind::AddSpecialization => "Add specialization",
            ChangeKind::DeleteConcreteClass => "Delete concrete class",
            ChangeKind::RenameClass => "Rename class",
            ChangeKind::AddProperty => "Add property",
            ChangeKind::DeleteProperty => "Delete property",
            ChangeKind::RenameProperty => "Rename property",
            ChangeKind::MoveProperty => "Move property",
            ChangeKind::PullUpProperty => "Pull up property",
            ChangeKind::ChangePropertyType => "Change property type",
        }
    }
}

impl fmt::Display for ChangeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalogChange {
    pub kind: ChangeKind,
    /// Rule role → element name.
    pub bindings: BTreeMap<String, String>,
    /// Indices of the diff entries this change covers.
    pub entries: Vec<usize>,
}

impl CatalogChange {
    fn new(kind: ChangeKind, entries: Vec<usize>, bindings: &[(&str, &str)]) -> Self {
        CatalogChange {
            kind,
            bindings: bindings.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            entries,
        }
    }

    pub fn binding(&self, role: &str) -> Option<&str> {
        self.bindings.get(role).map(String::as_str)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Classification {
    pub changes: Vec<CatalogChange>,
    pub unclassified: Vec<usize>,
}

impl Classification {
    pub fn kinds(&self) -> Vec<ChangeKind> {
        self.changes.iter().map(|c| c.kind).collect()
    }

    pub fn of_kind(&self, kind: ChangeKind) -> impl Iterator<Item = &CatalogChange> {
        self.changes.iter().filter(move |c| c.kind == kind)
    }

    /// The change covering entry `index`, if any.
    pub fn covering(&self, index: usize) -> Option<&CatalogChange> {
        self.changes.iter().find(|c| c.entries.contains(&index))
    }
}

struct Compound {
    s1: usize,
    s4: usize,
    bindings: Vec<(String, String)>,
}

/// An added concrete class `s1` under an added abstract class `s2`, which an
/// existing class `s3` now also specializes, while attribute `s5` moved from
/// `s3` up into `s2` (entry `s4`).
fn find_compounds(diff: &DiffModel, covered: &BTreeSet<usize>) -> Vec<Compound> {
    let entries = &diff.entries;
    let mut used = covered.clone();
    let mut out = Vec::new();
    for (i1, e1) in entries.iter().enumerate() {
        let DiffEntry::AddedClass { new: s1 } = e1 else { continue };
        if s1.is_abstract || used.contains(&i1) {
            continue;
        }
        let Some(s2_name) = s1.super_types.first() else { continue };
        let s2_added_abstract = entries
            .iter()
            .any(|e| matches!(e, DiffEntry::AddedClass { new } if &new.name == s2_name && new.is_abstract));
        if !s2_added_abstract {
            continue;
        }
        let mut s3_candidates: Vec<(&str, &str)> = entries
            .iter()
            .filter_map(|e| match e {
                DiffEntry::ChangedClass { old, updated } if updated.super_types.first() == Some(s2_name) => {
                    Some((updated.name.as_str(), old.name.as_str()))
                }
                _ => None,
            })
            .collect();
        s3_candidates.sort();
        for (s3_new, s3_old) in s3_candidates {
            let s4 = entries.iter().enumerate().find(|(i, e)| {
                !used.contains(i)
                    && matches!(e, DiffEntry::ChangedAttribute { old_owner, new_owner, .. }
                        if old_owner == s3_old && new_owner == s2_name)
            });
            if let Some((i4, DiffEntry::ChangedAttribute { updated, .. })) = s4 {
                used.insert(i1);
                used.insert(i4);
                out.push(Compound {
                    s1: i1,
                    s4: i4,
                    bindings: vec![
                        ("s1".into(), s1.name.clone()),
                        ("s2".into(), s2_name.clone()),
                        ("s3".into(), s3_new.to_string()),
                        ("s4".into(), format!("{s3_old}.{}", updated.name)),
                        ("s5".into(), updated.name.clone()),
                    ],
                });
                break;
            }
        }
    }
    out
}

/// Assigns every diff entry to at most one catalog change. The compound
/// specialization-with-pull-up pattern is matched first; the remaining
/// entries are classified one by one. Entries fitting no catalog kind are
/// reported in `unclassified`.
pub fn classify_changes(diff: &DiffModel, _old: &Metamodel, new: &Metamodel) -> Classification {
    let trace = Trace::from_diff(diff);
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    let mut changes = Vec::new();

    for c in find_compounds(diff, &covered) {
        let bindings: BTreeMap<String, String> = c.bindings.into_iter().collect();
        covered.insert(c.s1);
        covered.insert(c.s4);
        changes.push(CatalogChange {
            kind: ChangeKind::AddSpecialization,
            bindings: bindings.clone(),
            entries: vec![c.s1],
        });
        changes.push(CatalogChange { kind: ChangeKind::PullUpProperty, bindings, entries: vec![c.s4] });
    }

    // Deleting a concrete class takes its own features and the references
    // pointing at it along.
    for (i, e) in diff.entries.iter().enumerate() {
        let DiffEntry::DeletedClass { old: class } = e else { continue };
        if class.is_abstract {
            continue;
        }
        let mut cover = vec![i];
        for (j, f) in diff.entries.iter().enumerate() {
            let folded = match f {
                DiffEntry::DeletedAttribute { owner, .. } => owner == &class.name,
                DiffEntry::DeletedReference { owner, old } => owner == &class.name || old.target == class.name,
                _ => false,
            };
            if folded && !covered.contains(&j) {
                cover.push(j);
            }
        }
        covered.extend(cover.iter().copied());
        changes.push(CatalogChange::new(ChangeKind::DeleteConcreteClass, cover, &[("class", &class.name)]));
    }

    let mut unclassified = Vec::new();
    for (i, e) in diff.entries.iter().enumerate() {
        if covered.contains(&i) {
            continue;
        }
        let change = classify_entry(e, i, &trace, new);
        match change {
            Some(c) => changes.push(c),
            None => unclassified.push(i),
        }
    }

    changes.sort_by(|a, b| (a.entries.first(), a.kind).cmp(&(b.entries.first(), b.kind)));
    Classification { changes, unclassified }
}

fn classify_entry(e: &DiffEntry, i: usize, trace: &Trace, new: &Metamodel) -> Option<CatalogChange> {
    let one = |kind, bindings: &[(&str, &str)]| Some(CatalogChange::new(kind, vec![i], bindings));
    match e {
        DiffEntry::AddedClass { new: c } if c.is_abstract => {
            one(ChangeKind::AddEmptyAbstractClass, &[("class", &c.name)])
        }
        DiffEntry::AddedClass { new: c } => match c.super_types.first() {
            Some(s) => one(ChangeKind::AddSpecialization, &[("s1", &c.name), ("s2", s)]),
            None => one(ChangeKind::AddEmptyConcreteClass, &[("class", &c.name)]),
        },
        DiffEntry::DeletedClass { .. } => None,
        DiffEntry::ChangedClass { old: o, updated: u } => {
            if o.is_abstract != u.is_abstract {
                return None;
            }
            if o.name != u.name {
                return one(ChangeKind::RenameClass, &[("old", &o.name), ("new", &u.name)]);
            }
            let before: BTreeSet<&str> = o.super_types.iter().map(|s| trace.class_in_new(s)).collect();
            let after: BTreeSet<&str> = u.super_types.iter().map(String::as_str).collect();
            if before.is_subset(&after) && before.len() < after.len() {
                let gained = u.super_types.iter().find(|s| !before.contains(s.as_str())).expect("strict superset");
                return one(ChangeKind::AddSpecialization, &[("s1", &u.name), ("s2", gained)]);
            }
            None
        }
        DiffEntry::AddedAttribute { owner, new: a } => {
            one(ChangeKind::AddProperty, &[("owner", owner), ("property", &a.name)])
        }
        DiffEntry::AddedReference { owner, new: r } => {
            one(ChangeKind::AddProperty, &[("owner", owner), ("property", &r.name)])
        }
        DiffEntry::DeletedAttribute { owner, old: a } => {
            one(ChangeKind::DeleteProperty, &[("owner", owner), ("property", &a.name)])
        }
        DiffEntry::DeletedReference { owner, old: r } => {
            one(ChangeKind::DeleteProperty, &[("owner", owner), ("property", &r.name)])
        }
        DiffEntry::ChangedAttribute { old_owner, old: a, new_owner, updated } => {
            let owner_now = trace.class_in_new(old_owner);
            if owner_now != new_owner {
                return moved(i, old_owner, owner_now, new_owner, &updated.name, new);
            }
            if a.type_name != updated.type_name {
                return one(
                    ChangeKind::ChangePropertyType,
                    &[
                        ("owner", new_owner),
                        ("property", &updated.name),
                        ("oldType", a.type_name.as_str()),
                        ("newType", updated.type_name.as_str()),
                    ],
                );
            }
            if a.name != updated.name {
                return one(
                    ChangeKind::RenameProperty,
                    &[("owner", new_owner), ("old", &a.name), ("new", &updated.name)],
                );
            }
            None
        }
        DiffEntry::ChangedReference { old_owner, old: r, new_owner, updated } => {
            let owner_now = trace.class_in_new(old_owner);
            if owner_now != new_owner {
                return moved(i, old_owner, owner_now, new_owner, &updated.name, new);
            }
            if trace.class_in_new(&r.target) != updated.target {
                return one(
                    ChangeKind::ChangePropertyType,
                    &[
                        ("owner", new_owner),
                        ("property", &updated.name),
                        ("oldType", &r.target),
                        ("newType", &updated.target),
                    ],
                );
            }
            if r.containment != updated.containment
                || r.lower_bound != updated.lower_bound
                || r.upper_bound != updated.upper_bound
            {
                return None;
            }
            if r.name != updated.name {
                return one(
                    ChangeKind::RenameProperty,
                    &[("owner", new_owner), ("old", &r.name), ("new", &updated.name)],
                );
            }
            None
        }
    }
}

fn moved(i: usize, from: &str, from_now: &str, to: &str, property: &str, new: &Metamodel) -> Option<CatalogChange> {
    let kind = if new.is_ancestor(to, from_now) { ChangeKind::PullUpProperty } else { ChangeKind::MoveProperty };
    Some(CatalogChange::new(kind, vec![i], &[("from", from), ("to", to), ("property", property)]))
}
