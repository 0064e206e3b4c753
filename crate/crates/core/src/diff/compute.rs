use std::collections::BTreeSet;

use super::matching::{match_elements, Correspondence, FeatureKey};
use super::{DiffEntry, DiffModel};
use crate::model::{ClassDef, Metamodel};

fn map_class<'a>(corr: &'a Correspondence, old: &'a str) -> Option<&'a str> {
    corr.class(old)
}

fn same_shell(old: &ClassDef, new: &ClassDef, corr: &Correspondence) -> bool {
    old.id == new.id
        && old.name == new.name
        && old.is_abstract == new.is_abstract
        && old.super_types.len() == new.super_types.len()
        && old.super_types.iter().zip(&new.super_types).all(|(o, n)| map_class(corr, o) == Some(n.as_str()))
}

/// Difference between two metamodels, minimal with respect to
/// [`match_elements`]: matched elements that are equal up to the class
/// correspondence produce no entry.
pub fn compute_diff(old: &Metamodel, new: &Metamodel) -> DiffModel {
    let corr = match_elements(old, new);
    let mut entries = Vec::new();

    let matched_new: BTreeSet<&str> = corr.classes.values().map(String::as_str).collect();
    for c in &old.classes {
        match corr.class(&c.name).and_then(|n| new.class(n)) {
            None => entries.push(DiffEntry::DeletedClass { old: c.shell() }),
            Some(n) if !same_shell(c, n, &corr) => {
                entries.push(DiffEntry::ChangedClass { old: c.shell(), updated: n.shell() })
            }
            Some(_) => {}
        }
    }
    for c in new.classes.iter().filter(|c| !matched_new.contains(c.name.as_str())) {
        entries.push(DiffEntry::AddedClass { new: c.shell() });
    }

    let matched_attrs: BTreeSet<&FeatureKey> = corr.attributes.values().collect();
    let matched_refs: BTreeSet<&FeatureKey> = corr.references.values().collect();
    for c in &old.classes {
        for a in &c.attributes {
            let key = FeatureKey::new(&c.name, &a.name);
            let counterpart = corr
                .attributes
                .get(&key)
                .and_then(|k| new.class(&k.owner).and_then(|nc| nc.attribute(&k.name)).map(|n| (k, n)));
            match counterpart {
                None => entries.push(DiffEntry::DeletedAttribute { owner: c.name.clone(), old: a.clone() }),
                Some((k, n)) => {
                    let owner_same = corr.class(&c.name) == Some(k.owner.as_str());
                    if !owner_same || a != n {
                        entries.push(DiffEntry::ChangedAttribute {
                            old_owner: c.name.clone(),
                            old: a.clone(),
                            new_owner: k.owner.clone(),
                            updated: n.clone(),
                        });
                    }
                }
            }
        }
        for r in &c.references {
            let key = FeatureKey::new(&c.name, &r.name);
            let counterpart = corr
                .references
                .get(&key)
                .and_then(|k| new.class(&k.owner).and_then(|nc| nc.reference(&k.name)).map(|n| (k, n)));
            match counterpart {
                None => entries.push(DiffEntry::DeletedReference { owner: c.name.clone(), old: r.clone() }),
                Some((k, n)) => {
                    let owner_same = corr.class(&c.name) == Some(k.owner.as_str());
                    let target_same = corr.class(&r.target) == Some(n.target.as_str());
                    let rest_same = r.id == n.id
                        && r.name == n.name
                        && r.containment == n.containment
                        && r.lower_bound == n.lower_bound
                        && r.upper_bound == n.upper_bound;
                    if !owner_same || !target_same || !rest_same {
                        entries.push(DiffEntry::ChangedReference {
                            old_owner: c.name.clone(),
                            old: r.clone(),
                            new_owner: k.owner.clone(),
                            updated: n.clone(),
                        });
                    }
                }
            }
        }
    }
    for c in &new.classes {
        for a in &c.attributes {
            if !matched_attrs.contains(&FeatureKey::new(&c.name, &a.name)) {
                entries.push(DiffEntry::AddedAttribute { owner: c.name.clone(), new: a.clone() });
            }
        }
        for r in &c.references {
            if !matched_refs.contains(&FeatureKey::new(&c.name, &r.name)) {
                entries.push(DiffEntry::AddedReference { owner: c.name.clone(), new: r.clone() });
            }
        }
    }

    let mut diff = DiffModel { entries };
    diff.sort();
    diff
}
