use std::collections::BTreeSet;

use super::helpers::{rename_word, sibling_for, specialization_title};
use super::{Adapted, Evolution, Strategy};
use crate::diff::{ChangeKind, DiffEntry, FeatureFate};
use crate::model::metamodel::feature_type_name;
use crate::model::resolve::feature_status;
use crate::model::{
    FeatureLabelMapping, FeatureRef, LinkMapping, LinkStatus, MappingModel, NodeMapping, ToolingModel, TopNodeReference,
};

enum Outcome {
    /// The reference survives, possibly rewritten; `cause` is the diff entry
    /// that changed it.
    Keep {
        feature: FeatureRef,
        cause: Option<usize>,
    },
    Remove {
        cause: usize,
    },
}

/// Follows a feature reference through the change. References that did not
/// resolve against the old metamodel are left alone.
fn follow(evo: &Evolution, f: &FeatureRef) -> Outcome {
    let unchanged = || Outcome::Keep { feature: f.clone(), cause: None };
    if feature_status(&evo.old, f) != LinkStatus::Resolved {
        return unchanged();
    }
    match evo.trace.fate(&f.class_name, &f.feature_name) {
        Some(FeatureFate::Deleted { entry }) => Outcome::Remove { cause: *entry },
        Some(FeatureFate::Changed { entry, new_owner, new_name, new_type, moved, retyped, .. }) => {
            let pulled_up = evo.kind_for(*entry) == Some(ChangeKind::PullUpProperty);
            if *retyped || (*moved && !pulled_up) {
                return Outcome::Remove { cause: *entry };
            }
            Outcome::Keep { feature: FeatureRef::new(new_owner, new_name, new_type), cause: Some(*entry) }
        }
        None => {
            let class = evo.trace.class_in_new(&f.class_name);
            let recorded = evo
                .new
                .class(class)
                .and_then(|c| feature_type_name(c, &f.feature_name))
                .unwrap_or_else(|| f.recorded_type_name.clone());
            let feature = FeatureRef::new(class, &f.feature_name, recorded);
            if &feature == f {
                return unchanged();
            }
            let cause = evo
                .trace
                .changed_classes
                .get(&f.class_name)
                .or_else(|| evo.trace.changed_classes.get(&f.recorded_type_name))
                .copied();
            Outcome::Keep { feature, cause }
        }
    }
}

/// The new title of a bound tool: the whole-word renames applied, provided
/// the adapted palette holds a tool of that title.
fn retitle(tool: &str, renames: &[(&str, &str)], tooling_after: &ToolingModel) -> String {
    let mut title = tool.to_string();
    for (from, to) in renames {
        title = rename_word(&title, from, to);
    }
    if title != tool && tooling_after.tool(&title).is_some() {
        title
    } else {
        tool.to_string()
    }
}

/// Class rename seen from a mapping entry naming `class`.
fn class_rename<'e>(evo: &'e Evolution, class: &'e str) -> Option<(&'e str, &'e str)> {
    evo.trace.class_renames.get(class).map(|new| (class, new.as_str()))
}

fn feature_rename<'e>(evo: &'e Evolution, f: &'e FeatureRef) -> Option<(&'e str, &'e str)> {
    match evo.trace.fate(&f.class_name, &f.feature_name) {
        Some(FeatureFate::Changed { new_name, renamed: true, moved: false, retyped: false, .. }) => {
            Some((f.feature_name.as_str(), new_name.as_str()))
        }
        _ => None,
    }
}

struct Rewriter<'a> {
    evo: &'a Evolution,
    out: Adapted<MappingModel>,
}

impl Rewriter<'_> {
    /// Follows a list of references; `None` when one of them is removed.
    fn follow_all(&mut self, features: &[FeatureRef], remove_rule: &str, subject: &str) -> Option<Vec<FeatureRef>> {
        let mut rewritten = Vec::with_capacity(features.len());
        let mut causes = Vec::new();
        for f in features {
            match follow(self.evo, f) {
                Outcome::Remove { cause } => {
                    self.out.fire(
                        remove_rule,
                        self.evo,
                        Some(cause),
                        &[("element", subject), ("feature", &f.to_string())],
                    );
                    return None;
                }
                Outcome::Keep { feature, cause } => {
                    if &feature != f {
                        causes.push((cause, feature.to_string()));
                    }
                    rewritten.push(feature);
                }
            }
        }
        for (cause, feature) in causes {
            self.out.fire(
                "ChangedFeatureToFeatureRef",
                self.evo,
                cause,
                &[("element", subject), ("feature", &feature)],
            );
        }
        Some(rewritten)
    }

    fn rename_class(&mut self, class: &str, rule: &str) -> String {
        let evo = self.evo;
        if !evo.old.has_class(class) {
            return class.to_string();
        }
        let renamed = evo.trace.class_in_new(class).to_string();
        if renamed != class {
            let cause = evo.trace.changed_classes.get(class).copied();
            self.out.fire(rule, evo, cause, &[("class", &renamed)]);
        }
        renamed
    }

    fn node(&mut self, top: &TopNodeReference, tooling_after: &ToolingModel) -> Option<TopNodeReference> {
        let evo = self.evo;
        let node = &top.owned_child;
        let class = &node.domain_meta_element;
        if let Some(&entry) = evo.trace.deleted_classes.get(class) {
            self.out.fire("DeletedClassToTopNodeReference", evo, Some(entry), &[("class", class)]);
            return None;
        }
        let containment = self
            .follow_all(std::slice::from_ref(&top.containment_feature), "DeletedFeatureToTopNodeReference", class)?
            .remove(0);
        let renames: Vec<_> = class_rename(evo, class).into_iter().collect();
        let tool = retitle(&node.tool, &renames, tooling_after);
        let domain_meta_element = self.rename_class(class, "ChangedClassToNodeMapping");
        let mut label_mappings = Vec::new();
        for label in &node.label_mappings {
            if let Some(features) = self.follow_all(&label.features, "DeletedFeatureToFeatureLabelMapping", class) {
                label_mappings.push(FeatureLabelMapping { features, diagram_label: label.diagram_label.clone() });
            }
        }
        Some(TopNodeReference {
            containment_feature: containment,
            owned_child: NodeMapping {
                domain_meta_element,
                tool,
                diagram_node: node.diagram_node.clone(),
                label_mappings,
            },
        })
    }

    fn link(&mut self, link: &LinkMapping, tooling_after: &ToolingModel) -> Option<LinkMapping> {
        let evo = self.evo;
        let class = &link.domain_meta_element;
        if let Some(&entry) = evo.trace.deleted_classes.get(class) {
            self.out.fire("DeletedClassToLinkMapping", evo, Some(entry), &[("class", class)]);
            return None;
        }
        let ends = [link.source_feature.clone(), link.target_feature.clone()];
        let mut ends = self.follow_all(&ends, "DeletedFeatureToLinkMapping", class)?;
        let target_feature = ends.pop().expect("two ends");
        let source_feature = ends.pop().expect("two ends");
        let renames: Vec<_> = class_rename(evo, class)
            .into_iter()
            .chain(feature_rename(evo, &link.source_feature))
            .chain(feature_rename(evo, &link.target_feature))
            .collect();
        let tool = retitle(&link.tool, &renames, tooling_after);
        let domain_meta_element = self.rename_class(class, "ChangedClassToLinkMapping");
        Some(LinkMapping {
            domain_meta_element,
            tool,
            diagram_link: link.diagram_link.clone(),
            source_feature,
            target_feature,
        })
    }

    fn show_added_attributes(&mut self) {
        let evo = self.evo;
        for change in evo.classification.of_kind(ChangeKind::AddProperty) {
            let entry = change.entries[0];
            let DiffEntry::AddedAttribute { owner, new: attr } = &evo.diff.entries[entry] else { continue };
            let feature = FeatureRef::new(owner, &attr.name, attr.type_name.as_str());
            for top in &mut self.out.model.top_node_references {
                let node = &mut top.owned_child;
                let class = &node.domain_meta_element;
                if class != owner && !evo.new.is_ancestor(owner, class) {
                    continue;
                }
                let Some(label) = node.label_mappings.first_mut() else { continue };
                if label.features.contains(&feature) {
                    continue;
                }
                label.features.push(feature.clone());
                let subject = format!("{}:{}", node.domain_meta_element, label.diagram_label);
                self.out.fired.push(super::FiredRule {
                    rule: "AddedAttributeToFeatureLabelMapping".into(),
                    change: Some(change.kind),
                    bindings: change.bindings.clone().into_iter().chain([("label".to_string(), subject)]).collect(),
                });
            }
        }
    }

    fn replicate_specializations(&mut self, input: &MappingModel, tooling_after: &ToolingModel) {
        const RULE: &str = "AddedSpecializationClassToNodeMapping";
        let evo = self.evo;
        for change in evo.classification.of_kind(ChangeKind::AddSpecialization) {
            let entry = change.entries[0];
            let DiffEntry::AddedClass { new: s1 } = &evo.diff.entries[entry] else { continue };
            if self.out.model.node_mappings().any(|n| n.domain_meta_element == s1.name) {
                self.out.note(RULE, format!("{} already has a node mapping", s1.name));
                continue;
            }
            let Some(sibling) = sibling_for(evo, input, &s1.name) else {
                self.out.note(RULE, format!("no mapped sibling class to replicate for {}", s1.name));
                continue;
            };
            let Some(template) = self
                .out
                .model
                .top_node_references
                .iter()
                .find(|t| t.owned_child.domain_meta_element == sibling.new_name)
                .cloned()
            else {
                self.out.note(RULE, format!("node mapping of sibling {} did not survive adaptation", sibling.new_name));
                continue;
            };
            let tool = specialization_title(&sibling, &s1.name);
            if tooling_after.tool(&tool).is_none() {
                self.out.note(RULE, format!("no creation tool {tool:?} in the adapted palette"));
                continue;
            }
            let mut visible: BTreeSet<String> = evo.new.ancestors(&s1.name).into_iter().collect();
            visible.insert(s1.name.clone());
            let label_mappings = template
                .owned_child
                .label_mappings
                .iter()
                .filter_map(|l| {
                    let features: Vec<_> =
                        l.features.iter().filter(|f| visible.contains(&f.class_name)).cloned().collect();
                    (!features.is_empty())
                        .then(|| FeatureLabelMapping { features, diagram_label: l.diagram_label.clone() })
                })
                .collect();
            self.out.model.top_node_references.push(TopNodeReference {
                containment_feature: template.containment_feature.clone(),
                owned_child: NodeMapping {
                    domain_meta_element: s1.name.clone(),
                    tool: tool.clone(),
                    diagram_node: template.owned_child.diagram_node.clone(),
                    label_mappings,
                },
            });
            self.out.fire(RULE, evo, Some(entry), &[("sibling", &sibling.new_name), ("tool", &tool)]);
            self.out.note(
                RULE,
                format!(
                    "review: management of {} replicated from {}; diagram node {:?} is shared",
                    s1.name, sibling.new_name, template.owned_child.diagram_node
                ),
            );
            let containment = &template.containment_feature;
            let target = &containment.recorded_type_name;
            if !visible.contains(target) {
                self.out.note(
                    RULE,
                    format!("review: containment {containment} holds {target}, which {} does not specialize", s1.name),
                );
            }
        }
    }
}

/// Co-changes the mapping model. `tooling_after` is the palette already
/// produced by [`super::adapt_tooling`]; tool references are only rewritten
/// to titles that exist there.
pub fn adapt_mapping(
    evo: &Evolution,
    mapping: &MappingModel,
    tooling_after: &ToolingModel,
    strategy: Strategy,
) -> Adapted<MappingModel> {
    let mut rw = Rewriter { evo, out: Adapted::new(MappingModel::default()) };

    let tops: Vec<_> = mapping.top_node_references.iter().filter_map(|t| rw.node(t, tooling_after)).collect();
    let links: Vec<_> = mapping.link_mappings.iter().filter_map(|l| rw.link(l, tooling_after)).collect();
    rw.out.model = MappingModel { top_node_references: tops, link_mappings: links };

    if strategy == Strategy::BestEffort {
        rw.show_added_attributes();
        rw.replicate_specializations(mapping, tooling_after);
    }
    rw.out
}
