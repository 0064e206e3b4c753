mod common;

use std::collections::BTreeMap;

use coevo_core::diff::{
    apply_diff, class_similarity, classify_changes, compute_diff, jaccard, match_elements, ApplyError, ChangeKind,
    DiffEntry, DiffModel, RENAME_THRESHOLD,
};
use coevo_core::edit::EditOp;
use coevo_core::fixtures;
use coevo_core::model::{parse_model, serialize_model, AttributeDef, ClassDef, Metamodel, PrimitiveType};
use rand::seq::SliceRandom;

fn mindmap() -> (Metamodel, Metamodel) {
    let s = fixtures::scenario("mindmap-evolution").unwrap();
    (s.base_set().unwrap().domain, s.new_domain().unwrap())
}

#[test]
fn diff_of_a_model_with_itself_is_empty() {
    for seed in 0..100 {
        let mut rng = common::rng(seed);
        let m = common::metamodel(&mut rng, &mut common::Fresh::default(), 1 + seed as usize % 9, seed % 3 != 0);
        assert!(compute_diff(&m, &m).is_empty(), "seed {seed}");
        assert_eq!(apply_diff(&m, &DiffModel::default()).unwrap(), m.canonical());
    }
}

#[test]
fn identical_models_correspond_totally() {
    let (old, _) = mindmap();
    let corr = match_elements(&old, &old);
    assert!(corr.is_total_identity(&old));
}

#[test]
fn shared_ids_match_the_renamed_topic() {
    let (old, new) = mindmap();
    let corr = match_elements(&old, &new);
    assert_eq!(corr.class("Topic"), Some("ScientificTopic"));
    assert_eq!(corr.class("Relation"), Some("Relation"));
}

#[test]
fn mindmap_diff_patches_old_into_new() {
    let (old, new) = mindmap();
    let diff = compute_diff(&old, &new);
    assert_eq!(diff.len(), 5);
    assert!(apply_diff(&old, &diff).unwrap().canonical_eq(&new));
}

#[test]
fn diff_documents_round_trip_byte_for_byte() {
    let (old, new) = mindmap();
    let diff = compute_diff(&old, &new);
    let bytes = serialize_model(&diff);
    let back: DiffModel = parse_model(&bytes).unwrap();
    assert_eq!(back, diff);
    assert_eq!(serialize_model(&back), bytes);
}

#[test]
fn diff_entries_come_in_canonical_order() {
    let (old, new) = mindmap();
    let diff = compute_diff(&old, &new);
    let groups: Vec<u8> = diff
        .entries
        .iter()
        .map(|e| match e {
            DiffEntry::AddedClass { .. } | DiffEntry::DeletedClass { .. } | DiffEntry::ChangedClass { .. } => 0,
            DiffEntry::AddedAttribute { .. }
            | DiffEntry::DeletedAttribute { .. }
            | DiffEntry::ChangedAttribute { .. } => 1,
            _ => 2,
        })
        .collect();
    assert!(groups.windows(2).all(|w| w[0] <= w[1]), "{groups:?}");
}

fn class_with(name: &str, features: &[&str]) -> ClassDef {
    let mut c = ClassDef::new(name);
    for f in features {
        c.attributes.push(AttributeDef::new(*f, PrimitiveType::String));
    }
    c
}

#[test]
fn idless_rename_with_unchanged_features_is_a_rename() {
    let mut old = Metamodel::new("m");
    old.classes.push(class_with("Topic", &["name", "size"]));
    let mut new = Metamodel::new("m");
    new.classes.push(class_with("Subject", &["name", "size"]));

    // Brute-force Jaccard over feature and supertype names.
    let names = |c: &ClassDef| c.attributes.iter().map(|a| a.name.clone()).collect::<std::collections::BTreeSet<_>>();
    let (a, b) = (names(&old.classes[0]), names(&new.classes[0]));
    let brute = a.intersection(&b).count() as f64 / a.union(&b).count() as f64;
    assert_eq!(brute, 1.0);
    assert_eq!(jaccard(&a, &b), brute);
    assert_eq!(class_similarity(&old.classes[0], &new.classes[0], &BTreeMap::new()), brute);
    assert!(brute >= RENAME_THRESHOLD);

    assert_eq!(match_elements(&old, &new).class("Topic"), Some("Subject"));
    let diff = compute_diff(&old, &new);
    assert!(
        matches!(diff.entries.as_slice(), [DiffEntry::ChangedClass { old, updated }] if old.name == "Topic" && updated.name == "Subject")
    );
}

#[test]
fn idless_rename_below_threshold_stays_delete_and_add() {
    let mut old = Metamodel::new("m");
    old.classes.push(class_with("Topic", &["name", "size"]));
    let mut new = Metamodel::new("m");
    new.classes.push(class_with("Subject", &["title", "size", "color"]));
    // 1 shared name of 4: 0.25.
    assert!(class_similarity(&old.classes[0], &new.classes[0], &BTreeMap::new()) < RENAME_THRESHOLD);
    let diff = compute_diff(&old, &new);
    assert!(diff.entries.iter().any(|e| matches!(e, DiffEntry::DeletedClass { old } if old.name == "Topic")));
    assert!(diff.entries.iter().any(|e| matches!(e, DiffEntry::AddedClass { new } if new.name == "Subject")));
    assert!(apply_diff(&old, &diff).unwrap().canonical_eq(&new));
}

#[test]
fn rename_ties_break_by_name() {
    let mut old = Metamodel::new("m");
    old.classes.push(class_with("B", &["x"]));
    old.classes.push(class_with("A", &["x"]));
    let mut new = Metamodel::new("m");
    new.classes.push(class_with("D", &["x"]));
    new.classes.push(class_with("C", &["x"]));
    let corr = match_elements(&old, &new);
    assert_eq!(corr.class("A"), Some("C"));
    assert_eq!(corr.class("B"), Some("D"));
}

#[test]
fn applying_a_diff_to_the_wrong_model_is_a_conflict() {
    let (old, new) = mindmap();
    let diff = compute_diff(&old, &new);
    let err = apply_diff(&Metamodel::new("other"), &diff).unwrap_err();
    assert!(matches!(err, ApplyError::Missing { .. } | ApplyError::MissingOwner { .. }), "{err:?}");

    let mut twice = diff.clone();
    twice.entries.push(twice.entries[2].clone());
    assert!(apply_diff(&old, &twice).is_err());
}

#[test]
fn mindmap_scenario_classifies_into_five_catalog_changes() {
    let (old, new) = mindmap();
    let diff = compute_diff(&old, &new);
    let c = classify_changes(&diff, &old, &new);
    assert!(c.unclassified.is_empty());
    let mut kinds = c.kinds();
    kinds.sort();
    let mut expected = vec![
        ChangeKind::RenameClass,
        ChangeKind::AddEmptyAbstractClass,
        ChangeKind::PullUpProperty,
        ChangeKind::AddProperty,
        ChangeKind::AddSpecialization,
    ];
    expected.sort();
    assert_eq!(kinds, expected);

    let special = c.of_kind(ChangeKind::AddSpecialization).next().unwrap();
    let pull = c.of_kind(ChangeKind::PullUpProperty).next().unwrap();
    assert_eq!(special.bindings, pull.bindings);
    assert_eq!(special.binding("s1"), Some("LiteratureTopic"));
    assert_eq!(special.binding("s2"), Some("NamedElement"));
    assert_eq!(special.binding("s3"), Some("ScientificTopic"));
    assert_eq!(special.binding("s5"), Some("name"));
    let rename = c.of_kind(ChangeKind::RenameClass).next().unwrap();
    assert_eq!((rename.binding("old"), rename.binding("new")), (Some("Topic"), Some("ScientificTopic")));
}

#[test]
fn catalog_fixtures_classify_as_their_row() {
    use ChangeKind::*;
    let expected = [
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
    ];
    let scenarios = fixtures::catalog_scenarios().unwrap();
    assert_eq!(scenarios.len(), expected.len());
    for (s, kind) in scenarios.iter().zip(expected) {
        let (old, new) = (s.base_set().unwrap().domain, s.new_domain().unwrap());
        let c = classify_changes(&compute_diff(&old, &new), &old, &new);
        assert_eq!(c.kinds(), [kind], "{}", s.name);
        assert!(c.unclassified.is_empty(), "{}", s.name);
    }
}

#[test]
fn deleting_a_class_folds_its_feature_deletions() {
    let s = fixtures::scenario("delete-concrete-class").unwrap();
    let (old, new) = (s.base_set().unwrap().domain, s.new_domain().unwrap());
    let diff = compute_diff(&old, &new);
    // Relation, its two references and Mindmap.relations.
    assert_eq!(diff.len(), 4);
    let c = classify_changes(&diff, &old, &new);
    assert_eq!(c.changes.len(), 1);
    assert_eq!(c.changes[0].entries.len(), 4);
}

#[test]
fn empty_diff_classifies_to_nothing() {
    let (old, _) = mindmap();
    let c = classify_changes(&DiffModel::default(), &old, &old);
    assert!(c.changes.is_empty() && c.unclassified.is_empty());
}

fn random_pair(seed: u64) -> (Metamodel, Metamodel) {
    let mut rng = common::rng(seed);
    let mut fresh = common::Fresh::default();
    let old = common::metamodel(&mut rng, &mut fresh, 2 + seed as usize % 7, true);
    let ev = common::evolve(&mut rng, &mut fresh, &old, 1 + seed as usize % 6);
    (ev.old, ev.new)
}

#[test]
fn classification_covers_every_entry_exactly_once() {
    for seed in 0..300 {
        let (old, new) = random_pair(seed);
        let diff = compute_diff(&old, &new);
        let c = classify_changes(&diff, &old, &new);
        let mut seen = vec![0; diff.len()];
        for i in c.changes.iter().flat_map(|ch| &ch.entries).chain(&c.unclassified) {
            seen[*i] += 1;
        }
        assert!(seen.iter().all(|n| *n == 1), "seed {seed}: {seen:?}");
    }
}

#[test]
fn classification_ignores_class_order() {
    for seed in 0..200 {
        let (old, new) = random_pair(seed);
        let multiset = |o: &Metamodel, n: &Metamodel| {
            let c = classify_changes(&compute_diff(o, n), o, n);
            let mut v: Vec<_> = c.changes.into_iter().map(|ch| (ch.kind, ch.bindings)).collect();
            v.sort();
            (v, c.unclassified.len())
        };
        let mut rng = common::rng(seed ^ 0xfeed);
        let (mut old2, mut new2) = (old.clone(), new.clone());
        old2.classes.shuffle(&mut rng);
        new2.classes.shuffle(&mut rng);
        assert_eq!(multiset(&old, &new), multiset(&old2, &new2), "seed {seed}");
    }
}

#[test]
fn owner_changes_split_into_moves_and_pull_ups_by_inheritance() {
    let mut checked = 0;
    for seed in 0..400 {
        let (old, new) = random_pair(seed);
        let diff = compute_diff(&old, &new);
        let corr = match_elements(&old, &new);
        let c = classify_changes(&diff, &old, &new);
        for (i, e) in diff.entries.iter().enumerate() {
            let (DiffEntry::ChangedAttribute { old_owner, new_owner, .. }
            | DiffEntry::ChangedReference { old_owner, new_owner, .. }) = e
            else {
                continue;
            };
            let Some(owner_now) = corr.class(old_owner) else { continue };
            if owner_now == new_owner {
                continue;
            }
            // Reachability over supertypes in the new metamodel, walked by hand.
            let mut stack = vec![owner_now.to_string()];
            let mut reachable = false;
            while let Some(c) = stack.pop() {
                for s in &new.class(&c).unwrap().super_types {
                    reachable |= s == new_owner;
                    stack.push(s.clone());
                }
            }
            let kind = c.covering(i).map(|ch| ch.kind);
            let want = if reachable { ChangeKind::PullUpProperty } else { ChangeKind::MoveProperty };
            assert_eq!(kind, Some(want), "seed {seed}: {e:?}");
            checked += 1;
        }
    }
    assert!(checked > 50, "only {checked} owner changes generated");
}

#[test]
fn abstractness_toggles_stay_unclassified() {
    let (old, _) = mindmap();
    let new = EditOp::SetAbstract { class: "Relation".into(), value: true }.apply(&old).unwrap();
    let diff = compute_diff(&old, &new);
    let c = classify_changes(&diff, &old, &new);
    assert!(c.changes.is_empty());
    assert_eq!(c.unclassified, [0]);
}
