mod common;

use coevo_core::adapters::{adapt_all, Strategy};
use coevo_core::diff::compute_diff;
use coevo_core::edit::EditOp;
use coevo_core::fixtures;
use coevo_core::model::{parse_model, serialize_model, EditorModelSet};
use coevo_core::soundness::{soundness_level, validate, BlameReport, EditorModel, Severity, Verdict};

#[test]
fn level_agrees_with_a_direct_reading_on_all_combinations() {
    let mut seen = 0;
    for a in Verdict::ALL {
        for b in Verdict::ALL {
            for c in Verdict::ALL {
                for d in Verdict::ALL {
                    let v = [a, b, c, d];
                    let expected = if v.contains(&Verdict::Broken) {
                        1
                    } else if v.contains(&Verdict::Gap) {
                        2
                    } else {
                        3
                    };
                    assert_eq!(soundness_level(v), expected, "{v:?}");
                    seen += 1;
                }
            }
        }
    }
    assert_eq!(seen, 81);
    assert_eq!(soundness_level([]), 3);
}

#[test]
fn pristine_fixtures_are_fully_sound() {
    for base in fixtures::base_names() {
        let r = validate(&fixtures::base(base).unwrap(), None);
        assert_eq!(r.level, 3, "{base}: {:?}", r.findings);
        assert!(r.findings.is_empty());
    }
}

fn renamed_topic() -> (EditorModelSet, coevo_core::diff::DiffModel) {
    let base = fixtures::base("mindmap").unwrap();
    let new = EditOp::RenameClass { from: "Topic".into(), to: "ScientificTopic".into() }.apply(&base.domain).unwrap();
    let diff = compute_diff(&base.domain, &new);
    (EditorModelSet { domain: new, ..base }, diff)
}

#[test]
fn class_rename_before_and_after_co_change() {
    use Verdict::*;
    let (before, diff) = renamed_topic();
    let r = validate(&before, Some(&diff));
    assert_eq!(r.verdicts(), [Broken, Gap, Gap, Broken], "{:#?}", r.findings);
    assert_eq!(r.level, 1);

    let mut old = before.clone();
    old.domain = fixtures::base("mindmap").unwrap().domain;
    let plan = adapt_all(&diff, &old, Strategy::BestEffort).unwrap();
    let r = validate(&plan.outputs, Some(&diff));
    assert_eq!(r.verdicts(), [Ok; 4], "{:#?}", r.findings);
    assert_eq!(r.level, 3);
}

#[test]
fn findings_are_sorted_and_repeatable() {
    let (before, diff) = renamed_topic();
    let a = validate(&before, Some(&diff));
    let b = validate(&before.clone(), Some(&diff.clone()));
    assert_eq!(serialize_model(&a), serialize_model(&b));
    assert!(a.findings.windows(2).all(|w| w[0] < w[1]));
    let back: BlameReport = parse_model(&serialize_model(&a)).unwrap();
    assert_eq!(back, a);
}

#[test]
fn verdicts_match_the_worst_finding_per_model() {
    for s in fixtures::scenarios().unwrap() {
        let diff = s.diff().unwrap();
        let r = validate(&s.before_set().unwrap(), Some(&diff));
        for m in EditorModel::ALL {
            let worst = r
                .findings
                .iter()
                .filter(|f| f.model == m)
                .map(|f| match f.severity {
                    Severity::Broken => Verdict::Broken,
                    Severity::Gap => Verdict::Gap,
                })
                .min()
                .unwrap_or(Verdict::Ok);
            assert_eq!(r.verdict(m), worst, "{} {m:?}", s.name);
        }
    }
}

#[test]
fn the_graph_is_never_broken() {
    for s in fixtures::scenarios().unwrap() {
        let diff = s.diff().unwrap();
        assert_ne!(validate(&s.before_set().unwrap(), Some(&diff)).verdict(EditorModel::Graph), Verdict::Broken);
    }
    for seed in 0..150 {
        let mut rng = common::rng(seed);
        let mut fresh = common::Fresh::default();
        let old = common::metamodel(&mut rng, &mut fresh, 3 + seed as usize % 6, true);
        let set = common::editor_for(&old);
        let ev = common::evolve(&mut rng, &mut fresh, &old, 1 + seed as usize % 5);
        let diff = compute_diff(&ev.old, &ev.new);
        let before = EditorModelSet { domain: ev.new.clone(), ..set.clone() };
        assert_ne!(validate(&before, Some(&diff)).verdict(EditorModel::Graph), Verdict::Broken, "seed {seed}");
        for strategy in [Strategy::Minimalistic, Strategy::BestEffort] {
            let plan = adapt_all(&diff, &set, strategy).unwrap();
            let r = validate(&plan.outputs, Some(&diff));
            assert_ne!(r.verdict(EditorModel::Graph), Verdict::Broken, "seed {seed}");
        }
    }
}

#[test]
fn random_editors_start_sound() {
    for seed in 0..100 {
        let mut rng = common::rng(seed);
        let domain = common::metamodel(&mut rng, &mut common::Fresh::default(), 2 + seed as usize % 8, true);
        let r = validate(&common::editor_for(&domain), None);
        assert!(r.verdicts().iter().all(|v| *v != Verdict::Broken), "seed {seed}: {:#?}", r.findings);
    }
}
