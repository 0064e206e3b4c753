use std::collections::BTreeSet;

use super::{EditorModel, Finding, Severity};
use crate::adapters::contains_word;
use crate::diff::{FeatureFate, Trace};
use crate::model::resolve::feature_status;
use crate::model::{resolve, EditorModelSet, FeatureLabelMapping, FeatureRef, LinkOrigin, LinkStatus, NodeMapping};

struct Ctx<'a> {
    set: &'a EditorModelSet,
    trace: Option<&'a Trace>,
    canvas: BTreeSet<&'a str>,
    out: Vec<Finding>,
}

impl<'a> Ctx<'a> {
    fn push(
        &mut self,
        model: EditorModel,
        severity: Severity,
        code: &str,
        subject: impl Into<String>,
        message: impl Into<String>,
    ) {
        self.out.push(Finding {
            model,
            code: code.to_string(),
            subject: subject.into(),
            severity,
            message: message.into(),
        });
    }

    fn gap(&mut self, model: EditorModel, code: &str, subject: impl Into<String>, message: impl Into<String>) {
        self.push(model, Severity::Gap, code, subject, message);
    }

    /// Concrete classes that need editor support: not abstract and not the canvas.
    fn concrete_classes(&self) -> Vec<&'a str> {
        self.set
            .domain
            .classes
            .iter()
            .filter(|c| !c.is_abstract && !self.canvas.contains(c.name.as_str()))
            .map(|c| c.name.as_str())
            .collect()
    }

    fn resolved(&self, f: &FeatureRef) -> bool {
        feature_status(&self.set.domain, f) == LinkStatus::Resolved
    }

    fn is_sole_label(&self, label: &FeatureLabelMapping, class: &str, attribute: &str) -> bool {
        matches!(label.features.as_slice(), [f] if f.same_feature(class, attribute) && self.resolved(f))
    }

    fn node_mappings_of(&self, class: &str) -> impl Iterator<Item = &'a NodeMapping> + '_ {
        let class = class.to_string();
        self.set.mapping.node_mappings().filter(move |n| n.domain_meta_element == class)
    }

    fn has_node_mapping(&self, class: &str) -> bool {
        self.node_mappings_of(class).next().is_some()
    }

    /// Whether an unresolved class reference is explained by a class rename.
    fn class_renamed(&self, class: &str) -> bool {
        self.trace.and_then(|t| t.class_renames.get(class)).is_some_and(|new| self.set.domain.has_class(new))
    }

    /// Whether an unresolved feature reference is explained by renames only.
    fn feature_renamed(&self, f: &FeatureRef, status: &LinkStatus) -> bool {
        let Some(trace) = self.trace else { return false };
        let fate = trace.fate(&f.class_name, &f.feature_name);
        match status {
            LinkStatus::Resolved => true,
            LinkStatus::Dangling => match fate {
                None => self.class_renamed(&f.class_name),
                Some(FeatureFate::Changed { moved: false, retyped: false, .. }) => true,
                Some(_) => false,
            },
            LinkStatus::Stale { recorded, actual } => {
                let retyped = matches!(fate, Some(FeatureFate::Changed { retyped: true, .. }));
                !retyped && trace.class_renames.get(recorded) == Some(actual)
            }
        }
    }
}

fn emfgen(cx: &mut Ctx<'_>) {
    let domain = &cx.set.domain;
    let gen = &cx.set.emfgen;
    const M: EditorModel = EditorModel::EmfGen;
    for c in &domain.classes {
        match gen.gen_class(&c.name) {
            None => {
                cx.push(M, Severity::Broken, "missing-gen-class", &c.name, format!("class {} has no genClass", c.name))
            }
            Some(g) => {
                for f in c.feature_names() {
                    if !g.gen_features.iter().any(|x| x == f) {
                        cx.push(
                            M,
                            Severity::Broken,
                            "missing-gen-feature",
                            format!("{}.{f}", c.name),
                            "feature has no genFeature",
                        );
                    }
                }
            }
        }
    }
    for g in &gen.gen_classes {
        match domain.class(&g.class_name) {
            None => cx.push(
                M,
                Severity::Broken,
                "extra-gen-class",
                &g.class_name,
                "genClass refers to a class missing from the domain model",
            ),
            Some(c) => {
                for f in &g.gen_features {
                    if !c.declares(f) {
                        cx.push(
                            M,
                            Severity::Broken,
                            "extra-gen-feature",
                            format!("{}.{f}", g.class_name),
                            "genFeature refers to a feature the class does not declare",
                        );
                    }
                }
            }
        }
    }
}

fn mapping(cx: &mut Ctx<'_>) {
    const M: EditorModel = EditorModel::Mapping;
    let table = resolve(cx.set);
    for link in table.unresolved_from(LinkOrigin::Mapping) {
        let (code, message) = match &link.status {
            LinkStatus::Stale { recorded, actual } => {
                ("stale-type", format!("{} was recorded with type {recorded} but is now {actual}", link.target))
            }
            _ => ("dangling-reference", format!("{:?} reference to {} does not resolve", link.kind, link.target)),
        };
        cx.push(M, Severity::Broken, code, link.subject.clone(), message);
    }

    let mapping = &cx.set.mapping;
    for class in cx.concrete_classes() {
        let mapped = cx.has_node_mapping(class) || mapping.link_mappings.iter().any(|l| l.domain_meta_element == class);
        if !mapped {
            cx.gap(M, "unmapped-class", class, "concrete class has no node or link mapping");
        }
    }

    let domain = &cx.set.domain;
    for c in &domain.classes {
        let node_mapped =
            cx.has_node_mapping(&c.name) || domain.descendants(&c.name).iter().any(|d| cx.has_node_mapping(&d.name));
        if !node_mapped {
            continue;
        }
        for a in &c.attributes {
            let displayed = mapping
                .node_mappings()
                .flat_map(|n| &n.label_mappings)
                .flat_map(|l| &l.features)
                .any(|f| f.same_feature(&c.name, &a.name) && cx.resolved(f));
            if !displayed {
                cx.gap(
                    M,
                    "undisplayed-attribute",
                    format!("{}.{}", c.name, a.name),
                    "attribute appears in no label mapping",
                );
            }
        }
    }
}

fn tooling(cx: &mut Ctx<'_>) {
    const M: EditorModel = EditorModel::Tooling;
    let set = cx.set;
    let domain = &set.domain;
    let tooling = &set.tooling;

    // Every mapping entry with an existing tool, together with the domain
    // elements that tool manages.
    let mut bindings: Vec<(&str, &str, Vec<&FeatureRef>)> = Vec::new();
    for top in &set.mapping.top_node_references {
        let n = &top.owned_child;
        let mut features = vec![&top.containment_feature];
        features.extend(n.label_mappings.iter().flat_map(|l| &l.features));
        bindings.push((&n.tool, &n.domain_meta_element, features));
    }
    for l in &set.mapping.link_mappings {
        bindings.push((&l.tool, &l.domain_meta_element, vec![&l.source_feature, &l.target_feature]));
    }
    bindings.retain(|(tool, _, _)| tooling.tool(tool).is_some());

    for (tool, class, features) in &bindings {
        if !domain.has_class(class) {
            if cx.class_renamed(class) {
                cx.gap(
                    M,
                    "stale-binding",
                    format!("{tool}: {class}"),
                    "tool is bound to the old name of a renamed class",
                );
            } else {
                cx.push(
                    M,
                    Severity::Broken,
                    "bound-to-removed",
                    format!("{tool}: {class}"),
                    "tool is bound to a class that no longer exists",
                );
            }
        }
        for f in features {
            let status = feature_status(domain, f);
            if status == LinkStatus::Resolved {
                continue;
            }
            if cx.feature_renamed(f, &status) {
                cx.gap(M, "stale-binding", format!("{tool}: {f}"), "tool manages a feature through a renamed element");
            } else {
                cx.push(
                    M,
                    Severity::Broken,
                    "bound-to-removed",
                    format!("{tool}: {f}"),
                    "tool manages a feature that was deleted, moved or retyped",
                );
            }
        }
    }

    if let Some(trace) = cx.trace {
        for (title, class, _) in &bindings {
            let old = if trace.class_renames.contains_key(*class) { Some(*class) } else { trace.old_name_of(class) };
            let Some(old) = old else { continue };
            let tool = tooling.tool(title).expect("retained above");
            if contains_word(&tool.title, old) || contains_word(&tool.description, old) {
                cx.gap(M, "stale-title", *title, format!("tool text still names {old}"));
            }
        }
    }

    for class in cx.concrete_classes() {
        if !bindings.iter().any(|(_, c, _)| *c == class) {
            cx.gap(M, "missing-tool", class, "concrete class has no creation tool");
        }
    }

    let bound = set.mapping.bound_tools();
    for t in tooling.tools() {
        if !bound.contains(t.title.as_str()) {
            cx.gap(M, "unbound-tool", &t.title, "tool is bound to no domain element");
        }
    }

    for n in set.mapping.node_mappings() {
        let Some(c) = domain.class(&n.domain_meta_element) else { continue };
        for a in &c.attributes {
            if !n.label_mappings.iter().any(|l| cx.is_sole_label(l, &c.name, &a.name)) {
                cx.gap(
                    M,
                    "uneditable-attribute",
                    format!("{}.{}", c.name, a.name),
                    "attribute has no label of its own to edit it",
                );
            }
        }
    }
}

fn graph(cx: &mut Ctx<'_>) {
    const M: EditorModel = EditorModel::Graph;
    let set = cx.set;
    let domain = &set.domain;
    let graph = &set.graph;
    let live_nodes: Vec<&NodeMapping> =
        set.mapping.node_mappings().filter(|n| domain.has_class(&n.domain_meta_element)).collect();
    let live_links: Vec<_> =
        set.mapping.link_mappings.iter().filter(|l| domain.has_class(&l.domain_meta_element)).collect();

    for class in cx.concrete_classes() {
        let shown = live_nodes.iter().any(|n| n.domain_meta_element == class && graph.has_node(&n.diagram_node))
            || live_links.iter().any(|l| l.domain_meta_element == class && graph.has_connection(&l.diagram_link));
        if !shown {
            cx.gap(M, "missing-node", class, "concrete class has no node or connection");
        }
    }

    let used_nodes: BTreeSet<&str> = live_nodes.iter().map(|n| n.diagram_node.as_str()).collect();
    let used_connections: BTreeSet<&str> = live_links.iter().map(|l| l.diagram_link.as_str()).collect();
    let used_labels: BTreeSet<&str> = live_nodes
        .iter()
        .flat_map(|n| &n.label_mappings)
        .filter(|l| l.features.iter().all(|f| cx.resolved(f)))
        .map(|l| l.diagram_label.as_str())
        .collect();
    let mut used_figures = BTreeSet::new();
    for (category, items, used) in [
        ("node", &graph.nodes, &used_nodes),
        ("connection", &graph.connections, &used_connections),
        ("label", &graph.diagram_labels, &used_labels),
    ] {
        for item in items {
            if used.contains(item.name.as_str()) {
                used_figures.insert(item.figure.as_str());
            } else {
                cx.gap(M, "unused-element", format!("{category} {}", item.name), "no live mapping uses this element");
            }
        }
    }
    for f in &graph.figures {
        if !used_figures.contains(f.name.as_str()) {
            cx.gap(M, "unused-figure", format!("figure {}", f.name), "figure is drawn by no used element");
        }
    }

    for n in &live_nodes {
        for (owner, a) in domain.effective_attributes(&n.domain_meta_element) {
            let dedicated = n
                .label_mappings
                .iter()
                .any(|l| cx.is_sole_label(l, owner, &a.name) && graph.has_label(&l.diagram_label));
            if !dedicated {
                cx.gap(
                    M,
                    "no-dedicated-label",
                    format!("{}.{}", n.domain_meta_element, a.name),
                    format!("attribute {owner}.{} has no label of its own", a.name),
                );
            }
        }
    }
}

pub(super) fn findings(set: &EditorModelSet, trace: Option<&Trace>) -> Vec<Finding> {
    let mut cx = Ctx { set, trace, canvas: set.mapping.canvas_classes(), out: Vec::new() };
    emfgen(&mut cx);
    mapping(&mut cx);
    tooling(&mut cx);
    graph(&mut cx);
    cx.out
}
