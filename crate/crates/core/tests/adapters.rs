mod common;

use coevo_core::adapters::{
    adapt_all, adapt_emfgen, adapt_evolution, adapt_mapping, adapt_tooling, rename_word, Evolution, LookupError,
    Strategy,
};
use coevo_core::diff::compute_diff;
use coevo_core::fixtures::{self, Scenario};
use coevo_core::model::{resolve, EditorModelSet, LinkOrigin};
use coevo_core::soundness::{validate, EditorModel, Verdict};

fn evolution(name: &str) -> (Scenario, EditorModelSet, Evolution) {
    let s = fixtures::scenario(name).unwrap();
    let set = s.base_set().unwrap();
    let evo = Evolution::new(&set.domain, &s.diff().unwrap()).unwrap();
    (s, set, evo)
}

fn fired(plan: &coevo_core::adapters::AdaptationPlan) -> Vec<&str> {
    plan.fired_rules.iter().map(|r| r.rule.as_str()).collect()
}

#[test]
fn lookups_follow_the_mindmap_evolution() {
    let (_, _, evo) = evolution("mindmap-evolution");
    assert_eq!(evo.class_in_new_metamodel("Topic"), Ok("ScientificTopic"));
    assert_eq!(evo.class_in_new_metamodel("Relation"), Ok("Relation"));
    assert!(evo.is_moved("Topic", "name"));
    assert!(!evo.is_moved_to_added_class("Relation", "source"));
    assert_eq!(evo.new_container("Topic", "name"), Ok("NamedElement"));
    assert_eq!(evo.new_container("Relation", "source"), Ok("Relation"));
    assert!(!evo.is_renamed("Relation", "source"));
    assert!(matches!(evo.class_in_new_metamodel("Nowhere"), Err(LookupError::NotFound(_))));
}

#[test]
fn lookups_report_deleted_elements() {
    let (_, _, evo) = evolution("delete-concrete-class");
    assert_eq!(evo.class_in_new_metamodel("Relation"), Err(LookupError::Deleted("Relation".into())));
    assert!(matches!(evo.new_container("Mindmap", "relations"), Err(LookupError::Deleted(_))));

    let (_, _, evo) = evolution("rename-property");
    assert!(evo.is_renamed("Topic", "name"));
    assert!(!evo.is_moved("Topic", "name"));
}

#[test]
fn emfgen_follows_the_mindmap_domain() {
    let (_, set, evo) = evolution("mindmap-evolution");
    let out = adapt_emfgen(&evo, &set.emfgen).model;
    let mut entries: Vec<_> = out.gen_classes.iter().map(|g| (g.class_name.as_str(), g.gen_features.clone())).collect();
    entries.sort();
    let names: Vec<_> = entries.iter().map(|(c, _)| *c).collect();
    assert_eq!(names, ["LiteratureTopic", "Mindmap", "NamedElement", "Relation", "ScientificTopic"]);
    let named = entries.iter().find(|(c, _)| *c == "NamedElement").unwrap();
    let mut features = named.1.clone();
    features.sort();
    assert_eq!(features, ["duration", "name"]);
    assert_eq!(out.package_prefix, set.emfgen.package_prefix);
}

#[test]
fn deleting_a_class_removes_its_tool_and_mappings() {
    let (_, set, evo) = evolution("delete-concrete-class");
    let plan = adapt_evolution(&evo, &set, Strategy::BestEffort);
    assert!(plan.outputs.tooling.tool("Relation").is_none());
    assert!(plan.outputs.mapping.link_mappings.iter().all(|l| l.domain_meta_element != "Relation"));
    assert!(fired(&plan).contains(&"DeletedClassToCreationTool"), "{:?}", fired(&plan));
}

#[test]
fn class_rename_leaves_nothing_dangling() {
    let (_, set, evo) = evolution("rename-class");
    let plan = adapt_evolution(&evo, &set, Strategy::BestEffort);
    let table = resolve(&plan.outputs);
    assert_eq!(table.unresolved().count(), 0, "{:?}", table.unresolved().collect::<Vec<_>>());
    assert!(plan.outputs.tooling.tool("Idea").is_some());
}

#[test]
fn specialization_is_replicated_into_tooling_and_mapping() {
    let (_, set, evo) = evolution("mindmap-evolution");
    let plan = adapt_evolution(&evo, &set, Strategy::BestEffort);
    let rules = fired(&plan);
    assert!(rules.contains(&"AddedSpecializationClassToCreationTool"), "{rules:?}");
    assert!(rules.contains(&"AddedSpecializationClassToNodeMapping"), "{rules:?}");

    let tool = plan.outputs.tooling.tool("LiteratureTopic").unwrap();
    assert_eq!(tool.description, "Create new LiteratureTopic");
    let node = plan.outputs.mapping.node_mappings().find(|n| n.domain_meta_element == "LiteratureTopic").unwrap();
    assert_eq!(node.tool, "LiteratureTopic");
    assert!(plan.diagnostics.iter().any(|d| d.message.starts_with("review:")));
}

#[test]
fn minimalistic_adds_no_management() {
    let (_, set, evo) = evolution("mindmap-evolution");
    let plan = adapt_evolution(&evo, &set, Strategy::Minimalistic);
    assert!(plan.outputs.tooling.tool("LiteratureTopic").is_none());
    assert!(!fired(&plan).iter().any(|r| r.starts_with("AddedSpecialization")));
    assert_eq!(validate(&plan.outputs, Some(&evo.diff)).level, 2);
}

#[test]
fn tooling_and_mapping_adapt_independently_of_the_pipeline() {
    let (_, set, evo) = evolution("mindmap-evolution");
    let plan = adapt_evolution(&evo, &set, Strategy::BestEffort);
    let tooling = adapt_tooling(&evo, &set.mapping, &set.tooling, Strategy::BestEffort).model;
    let mapping = adapt_mapping(&evo, &set.mapping, &tooling, Strategy::BestEffort).model;
    assert_eq!(tooling, plan.outputs.tooling);
    assert_eq!(mapping, plan.outputs.mapping);
}

#[test]
fn adapted_models_reference_only_existing_elements_where_rated_ok() {
    for s in fixtures::scenarios().unwrap() {
        let set = s.base_set().unwrap();
        let diff = s.diff().unwrap();
        let plan = adapt_all(&diff, &set, s.strategy).unwrap();
        let report = validate(&plan.outputs, Some(&diff));
        let table = resolve(&plan.outputs);
        for link in table.unresolved() {
            let model = match link.origin {
                LinkOrigin::EmfGen => EditorModel::EmfGen,
                LinkOrigin::Mapping => EditorModel::Mapping,
            };
            assert_ne!(report.verdict(model), Verdict::Ok, "{}: {link:?}", s.name);
        }
    }
}

fn level_of(set: &EditorModelSet, diff: &coevo_core::diff::DiffModel, strategy: Strategy) -> u8 {
    let plan = adapt_all(diff, set, strategy).unwrap();
    validate(&plan.outputs, Some(diff)).level
}

#[test]
fn best_effort_never_rates_below_minimalistic_on_fixtures() {
    for s in fixtures::scenarios().unwrap() {
        let set = s.base_set().unwrap();
        let diff = s.diff().unwrap();
        let min = level_of(&set, &diff, Strategy::Minimalistic);
        let best = level_of(&set, &diff, Strategy::BestEffort);
        assert!(min <= best, "{}: {min} > {best}", s.name);
    }
}

#[test]
fn best_effort_never_rates_below_minimalistic_on_random_editors() {
    for seed in 0..150 {
        let mut rng = common::rng(seed);
        let mut fresh = common::Fresh::default();
        let old = common::metamodel(&mut rng, &mut fresh, 3 + seed as usize % 6, true);
        let set = common::editor_for(&old);
        let ev = common::evolve(&mut rng, &mut fresh, &old, 1 + seed as usize % 4);
        let diff = compute_diff(&ev.old, &ev.new);
        let min = level_of(&set, &diff, Strategy::Minimalistic);
        let best = level_of(&set, &diff, Strategy::BestEffort);
        assert!(min <= best, "seed {seed}: {min} > {best}");
    }
}

#[test]
fn empty_diff_leaves_every_model_untouched() {
    for base in fixtures::base_names() {
        let set = fixtures::base(base).unwrap();
        for strategy in [Strategy::Minimalistic, Strategy::BestEffort] {
            let plan = adapt_all(&Default::default(), &set, strategy).unwrap();
            assert_eq!(plan.outputs, set);
            assert!(plan.fired_rules.is_empty());
        }
    }
}

#[test]
fn rename_word_only_touches_whole_words() {
    assert_eq!(rename_word("Create new Topic", "Topic", "Idea"), "Create new Idea");
    assert_eq!(rename_word("TopicFigure", "Topic", "Idea"), "TopicFigure");
    assert_eq!(rename_word("Sub Topic Topic", "Topic", "T"), "Sub T T");
    assert_eq!(rename_word("a.b", "a.b", "c"), "c");
    assert_eq!(rename_word("axb", "a.b", "c"), "axb");
}
