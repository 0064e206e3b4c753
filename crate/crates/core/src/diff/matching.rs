//! Element correspondence between two metamodel versions.
//!
//! Matching runs in rounds, each over elements still unmatched: stable ids,
//! then equal names, then (features only) unique same-name moves, then rename
//! candidates scored by Jaccard similarity. Rename pairs below
//! [`RENAME_THRESHOLD`] stay a deletion plus an addition.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{ClassDef, Metamodel};

pub const RENAME_THRESHOLD: f64 = 0.5;

/// A feature addressed by owner class and feature name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureKey {
    pub owner: String,
    pub name: String,
}

impl FeatureKey {
    pub fn new(owner: impl Into<String>, name: impl Into<String>) -> Self {
        FeatureKey { owner: owner.into(), name: name.into() }
    }
}

/// Partial injective maps from old elements to new elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Correspondence {
    pub classes: BTreeMap<String, String>,
    pub attributes: BTreeMap<FeatureKey, FeatureKey>,
    pub references: BTreeMap<FeatureKey, FeatureKey>,
}

impl Correspondence {
    pub fn class(&self, old: &str) -> Option<&str> {
        self.classes.get(old).map(String::as_str)
    }

    pub fn is_total_identity(&self, old: &Metamodel) -> bool {
        old.classes.iter().all(|c| self.class(&c.name) == Some(c.name.as_str()))
            && old.classes.iter().all(|c| {
                c.attributes.iter().all(|a| {
                    let k = FeatureKey::new(&c.name, &a.name);
                    self.attributes.get(&k) == Some(&k)
                }) && c.references.iter().all(|r| {
                    let k = FeatureKey::new(&c.name, &r.name);
                    self.references.get(&k) == Some(&k)
                })
            })
    }
}

/// |a ∩ b| / |a ∪ b|; two empty sets score 0 so that featureless classes are
/// never paired as renames on similarity alone.
pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

fn class_signature(c: &ClassDef, map_super: impl Fn(&str) -> String) -> BTreeSet<String> {
    c.feature_names()
        .map(|f| format!("feature:{f}"))
        .chain(c.super_types.iter().map(|s| format!("super:{}", map_super(s))))
        .collect()
}

/// Similarity of an old and a new class over their feature names and
/// supertype names (old supertypes translated through `classes`).
pub fn class_similarity(old: &ClassDef, new: &ClassDef, classes: &BTreeMap<String, String>) -> f64 {
    let a = class_signature(old, |s| classes.get(s).cloned().unwrap_or_else(|| s.to_string()));
    let b = class_signature(new, str::to_string);
    jaccard(&a, &b)
}

fn ids_conflict(a: &Option<String>, b: &Option<String>) -> bool {
    matches!((a, b), (Some(x), Some(y)) if x != y)
}

/// Pairs old and new items greedily by descending score, ties broken by old
/// then new key.
fn greedy_pairs<K: Ord + Clone>(mut candidates: Vec<(f64, K, K)>) -> Vec<(K, K)> {
    candidates.sort_by(|a, b| {
        b.0.partial_cmp(&a.0).expect("scores are finite").then_with(|| a.1.cmp(&b.1)).then_with(|| a.2.cmp(&b.2))
    });
    let mut used_old = BTreeSet::new();
    let mut used_new = BTreeSet::new();
    let mut out = Vec::new();
    for (_, o, n) in candidates {
        if used_old.contains(&o) || used_new.contains(&n) {
            continue;
        }
        used_old.insert(o.clone());
        used_new.insert(n.clone());
        out.push((o, n));
    }
    out
}

struct FeatureInfo<'a> {
    key: FeatureKey,
    id: &'a Option<String>,
    descriptor: BTreeSet<String>,
}

fn match_features(
    old: Vec<FeatureInfo<'_>>,
    new: Vec<FeatureInfo<'_>>,
    classes: &BTreeMap<String, String>,
) -> BTreeMap<FeatureKey, FeatureKey> {
    let mut map: BTreeMap<FeatureKey, FeatureKey> = BTreeMap::new();
    let mut matched_new: BTreeSet<FeatureKey> = BTreeSet::new();

    // ids
    let new_by_id: BTreeMap<&str, &FeatureInfo> =
        new.iter().filter_map(|f| f.id.as_deref().map(|id| (id, f))).collect();
    for o in &old {
        if let Some(n) = o.id.as_deref().and_then(|id| new_by_id.get(id)) {
            map.insert(o.key.clone(), n.key.clone());
            matched_new.insert(n.key.clone());
        }
    }

    // same name in the corresponding owner
    let new_by_key: BTreeMap<&FeatureKey, &FeatureInfo> = new.iter().map(|f| (&f.key, f)).collect();
    for o in &old {
        if map.contains_key(&o.key) {
            continue;
        }
        let Some(owner) = classes.get(&o.key.owner) else { continue };
        let k = FeatureKey::new(owner.clone(), o.key.name.clone());
        if let Some(n) = new_by_key.get(&k) {
            if !matched_new.contains(&k) && !ids_conflict(o.id, n.id) {
                map.insert(o.key.clone(), k.clone());
                matched_new.insert(k);
            }
        }
    }

    // moves: a name that is unmatched exactly once on each side
    let mut old_by_name: BTreeMap<&str, Vec<&FeatureInfo>> = BTreeMap::new();
    for o in old.iter().filter(|o| !map.contains_key(&o.key)) {
        old_by_name.entry(&o.key.name).or_default().push(o);
    }
    let mut new_by_name: BTreeMap<&str, Vec<&FeatureInfo>> = BTreeMap::new();
    for n in new.iter().filter(|n| !matched_new.contains(&n.key)) {
        new_by_name.entry(&n.key.name).or_default().push(n);
    }
    for (name, olds) in &old_by_name {
        if let (1, Some(news)) = (olds.len(), new_by_name.get(name)) {
            if news.len() == 1 && !ids_conflict(olds[0].id, news[0].id) {
                map.insert(olds[0].key.clone(), news[0].key.clone());
                matched_new.insert(news[0].key.clone());
            }
        }
    }

    // renames within the corresponding owner
    let mut candidates = Vec::new();
    for o in old.iter().filter(|o| !map.contains_key(&o.key)) {
        let Some(owner) = classes.get(&o.key.owner) else { continue };
        for n in new.iter().filter(|n| !matched_new.contains(&n.key) && &n.key.owner == owner) {
            if ids_conflict(o.id, n.id) {
                continue;
            }
            let score = jaccard(&o.descriptor, &n.descriptor);
            if score >= RENAME_THRESHOLD {
                candidates.push((score, o.key.clone(), n.key.clone()));
            }
        }
    }
    map.extend(greedy_pairs(candidates));
    map
}

/// Computes the old→new correspondence between two valid metamodels.
pub fn match_elements<'m>(old: &'m Metamodel, new: &'m Metamodel) -> Correspondence {
    let mut classes: BTreeMap<String, String> = BTreeMap::new();
    let mut matched_new: BTreeSet<String> = BTreeSet::new();

    let new_by_id: BTreeMap<&str, &ClassDef> =
        new.classes.iter().filter_map(|c| c.id.as_deref().map(|id| (id, c))).collect();
    for o in &old.classes {
        if let Some(n) = o.id.as_deref().and_then(|id| new_by_id.get(id)) {
            classes.insert(o.name.clone(), n.name.clone());
            matched_new.insert(n.name.clone());
        }
    }
    for o in &old.classes {
        if classes.contains_key(&o.name) || matched_new.contains(&o.name) {
            continue;
        }
        if let Some(n) = new.class(&o.name) {
            if !ids_conflict(&o.id, &n.id) {
                classes.insert(o.name.clone(), n.name.clone());
                matched_new.insert(n.name.clone());
            }
        }
    }
    let mut candidates = Vec::new();
    for o in old.classes.iter().filter(|c| !classes.contains_key(&c.name)) {
        for n in new.classes.iter().filter(|c| !matched_new.contains(&c.name)) {
            if ids_conflict(&o.id, &n.id) {
                continue;
            }
            let score = class_similarity(o, n, &classes);
            if score >= RENAME_THRESHOLD {
                candidates.push((score, o.name.clone(), n.name.clone()));
            }
        }
    }
    classes.extend(greedy_pairs(candidates));

    let map_target = |t: &str, side_old: bool| -> String {
        if side_old {
            classes.get(t).cloned().unwrap_or_else(|| format!("?{t}"))
        } else {
            t.to_string()
        }
    };
    let collect = |m: &'m Metamodel, side_old: bool| -> (Vec<FeatureInfo<'m>>, Vec<FeatureInfo<'m>>) {
        let mut attrs = Vec::new();
        let mut refs = Vec::new();
        for c in &m.classes {
            for a in &c.attributes {
                attrs.push(FeatureInfo {
                    key: FeatureKey::new(&c.name, &a.name),
                    id: &a.id,
                    descriptor: [format!("type:{}", a.type_name)].into_iter().collect(),
                });
            }
            for r in &c.references {
                refs.push(FeatureInfo {
                    key: FeatureKey::new(&c.name, &r.name),
                    id: &r.id,
                    descriptor: [
                        format!("target:{}", map_target(&r.target, side_old)),
                        format!("containment:{}", r.containment),
                        format!("bounds:{}..{:?}", r.lower_bound, r.upper_bound),
                    ]
                    .into_iter()
                    .collect(),
                });
            }
        }
        (attrs, refs)
    };
    let (old_attrs, old_refs) = collect(old, true);
    let (new_attrs, new_refs) = collect(new, false);
    let attributes = match_features(old_attrs, new_attrs, &classes);
    let references = match_features(old_refs, new_refs, &classes);
    Correspondence { classes, attributes, references }
}
