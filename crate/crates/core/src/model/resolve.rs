//! Resolution of the name-based links between editor models and the domain.

use serde::Serialize;

use super::editor::{EditorModelSet, FeatureRef};
use super::metamodel::{feature_type_name, Metamodel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum LinkOrigin {
    Mapping,
    EmfGen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum LinkKind {
    DomainClass,
    Feature,
    Tool,
    GraphNode,
    GraphLabel,
    GraphConnection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "status")]
pub enum LinkStatus {
    Resolved,
    Dangling,
    /// The feature exists but its type no longer matches the recorded one.
    Stale {
        recorded: String,
        actual: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Link {
    pub origin: LinkOrigin,
    pub kind: LinkKind,
    /// Path of the referring slot, e.g. `topNodeReferences[0].ownedChild.tool`.
    pub subject: String,
    pub target: String,
    pub status: LinkStatus,
}

impl Link {
    pub fn is_resolved(&self) -> bool {
        self.status == LinkStatus::Resolved
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ResolutionTable {
    pub links: Vec<Link>,
}

impl ResolutionTable {
    pub fn unresolved(&self) -> impl Iterator<Item = &Link> {
        self.links.iter().filter(|l| !l.is_resolved())
    }

    pub fn dangling(&self) -> impl Iterator<Item = &Link> {
        self.links.iter().filter(|l| l.status == LinkStatus::Dangling)
    }

    pub fn unresolved_from(&self, origin: LinkOrigin) -> impl Iterator<Item = &Link> {
        self.unresolved().filter(move |l| l.origin == origin)
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}

/// Status of a feature link: the feature must be declared directly by the
/// named class (inherited features do not count).
pub fn feature_status(domain: &Metamodel, feature: &FeatureRef) -> LinkStatus {
    let Some(class) = domain.class(&feature.class_name) else {
        return LinkStatus::Dangling;
    };
    match feature_type_name(class, &feature.feature_name) {
        None => LinkStatus::Dangling,
        Some(actual) if actual == feature.recorded_type_name => LinkStatus::Resolved,
        Some(actual) => LinkStatus::Stale { recorded: feature.recorded_type_name.clone(), actual },
    }
}

fn presence(found: bool) -> LinkStatus {
    if found {
        LinkStatus::Resolved
    } else {
        LinkStatus::Dangling
    }
}

/// Lists every cross-model link of `set` with its status. Never fails:
/// dangling links are reported, not rejected.
pub fn resolve(set: &EditorModelSet) -> ResolutionTable {
    let domain = &set.domain;
    let mut links = Vec::new();
    let mut push = |origin, kind, subject: String, target: &str, status| {
        links.push(Link { origin, kind, subject, target: target.to_string(), status });
    };
    let feature_link = |f: &FeatureRef| (f.to_string(), feature_status(domain, f));

    for (i, top) in set.mapping.top_node_references.iter().enumerate() {
        let base = format!("topNodeReferences[{i}]");
        let (target, status) = feature_link(&top.containment_feature);
        push(LinkOrigin::Mapping, LinkKind::Feature, format!("{base}.containmentFeature"), &target, status);
        let node = &top.owned_child;
        let base = format!("{base}.ownedChild");
        push(
            LinkOrigin::Mapping,
            LinkKind::DomainClass,
            format!("{base}.domainMetaElement"),
            &node.domain_meta_element,
            presence(domain.has_class(&node.domain_meta_element)),
        );
        push(
            LinkOrigin::Mapping,
            LinkKind::Tool,
            format!("{base}.tool"),
            &node.tool,
            presence(set.tooling.tool(&node.tool).is_some()),
        );
        push(
            LinkOrigin::Mapping,
            LinkKind::GraphNode,
            format!("{base}.diagramNode"),
            &node.diagram_node,
            presence(set.graph.has_node(&node.diagram_node)),
        );
        for (j, label) in node.label_mappings.iter().enumerate() {
            let lbase = format!("{base}.labelMappings[{j}]");
            for (k, f) in label.features.iter().enumerate() {
                let (target, status) = feature_link(f);
                push(LinkOrigin::Mapping, LinkKind::Feature, format!("{lbase}.features[{k}]"), &target, status);
            }
            push(
                LinkOrigin::Mapping,
                LinkKind::GraphLabel,
                format!("{lbase}.diagramLabel"),
                &label.diagram_label,
                presence(set.graph.has_label(&label.diagram_label)),
            );
        }
    }

    for (i, link) in set.mapping.link_mappings.iter().enumerate() {
        let base = format!("linkMappings[{i}]");
        push(
            LinkOrigin::Mapping,
            LinkKind::DomainClass,
            format!("{base}.domainMetaElement"),
            &link.domain_meta_element,
            presence(domain.has_class(&link.domain_meta_element)),
        );
        push(
            LinkOrigin::Mapping,
            LinkKind::Tool,
            format!("{base}.tool"),
            &link.tool,
            presence(set.tooling.tool(&link.tool).is_some()),
        );
        push(
            LinkOrigin::Mapping,
            LinkKind::GraphConnection,
            format!("{base}.diagramLink"),
            &link.diagram_link,
            presence(set.graph.has_connection(&link.diagram_link)),
        );
        for (slot, f) in [("sourceFeature", &link.source_feature), ("targetFeature", &link.target_feature)] {
            let (target, status) = feature_link(f);
            push(LinkOrigin::Mapping, LinkKind::Feature, format!("{base}.{slot}"), &target, status);
        }
    }

    for (i, gen) in set.emfgen.gen_classes.iter().enumerate() {
        let class = domain.class(&gen.class_name);
        push(
            LinkOrigin::EmfGen,
            LinkKind::DomainClass,
            format!("genClasses[{i}].className"),
            &gen.class_name,
            presence(class.is_some()),
        );
        for (j, f) in gen.gen_features.iter().enumerate() {
            push(
                LinkOrigin::EmfGen,
                LinkKind::Feature,
                format!("genClasses[{i}].genFeatures[{j}]"),
                &format!("{}.{}", gen.class_name, f),
                presence(class.is_some_and(|c| c.declares(f))),
            );
        }
    }

    ResolutionTable { links }
}
