//! The four editor-definition models that sit next to the domain metamodel.
//!
//! Cross-model links are plain names and titles. Only per-model structure is
//! checked here; whether a link resolves against another model is decided by
//! [`crate::model::resolve`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::metamodel::{check_identifier, Metamodel};
use super::InvariantError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FigureKind {
    Rectangle,
    Ellipse,
    Polyline,
    Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FigureDef {
    pub name: String,
    pub kind: FigureKind,
}

/// A node, connection or diagram label: a named canvas element drawn with a figure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CanvasElement {
    pub name: String,
    pub figure: String,
}

pub type NodeDef = CanvasElement;
pub type ConnectionDef = CanvasElement;
pub type LabelDef = CanvasElement;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GraphModel {
    #[serde(default)]
    pub figures: Vec<FigureDef>,
    #[serde(default)]
    pub nodes: Vec<NodeDef>,
    #[serde(default)]
    pub connections: Vec<ConnectionDef>,
    #[serde(default)]
    pub diagram_labels: Vec<LabelDef>,
}

impl GraphModel {
    pub fn has_figure(&self, name: &str) -> bool {
        self.figures.iter().any(|f| f.name == name)
    }

    pub fn has_node(&self, name: &str) -> bool {
        self.nodes.iter().any(|n| n.name == name)
    }

    pub fn has_connection(&self, name: &str) -> bool {
        self.connections.iter().any(|n| n.name == name)
    }

    pub fn has_label(&self, name: &str) -> bool {
        self.diagram_labels.iter().any(|n| n.name == name)
    }

    pub fn check(&self) -> Result<(), InvariantError> {
        let mut figures = BTreeSet::new();
        for f in &self.figures {
            check_name(&f.name, "figure")?;
            if !figures.insert(f.name.as_str()) {
                return Err(InvariantError::new(format!("figure {}", f.name), "duplicate figure name"));
            }
        }
        for (category, items) in
            [("node", &self.nodes), ("connection", &self.connections), ("diagram label", &self.diagram_labels)]
        {
            let mut names = BTreeSet::new();
            for item in items {
                check_name(&item.name, category)?;
                if !names.insert(item.name.as_str()) {
                    return Err(InvariantError::new(
                        format!("{category} {}", item.name),
                        format!("duplicate {category} name"),
                    ));
                }
                if !figures.contains(item.figure.as_str()) {
                    return Err(InvariantError::new(
                        format!("{category} {}", item.name),
                        format!("unresolved figure {:?}", item.figure),
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CreationTool {
    pub title: String,
    #[serde(default)]
    pub description: String,
}

impl CreationTool {
    pub fn new(title: impl Into<String>, description: impl Into<String>) -> Self {
        CreationTool { title: title.into(), description: description.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ToolGroup {
    pub name: String,
    #[serde(default)]
    pub tools: Vec<CreationTool>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ToolingModel {
    #[serde(default)]
    pub palette: Vec<ToolGroup>,
}

impl ToolingModel {
    pub fn tools(&self) -> impl Iterator<Item = &CreationTool> {
        self.palette.iter().flat_map(|g| g.tools.iter())
    }

    pub fn tool(&self, title: &str) -> Option<&CreationTool> {
        self.tools().find(|t| t.title == title)
    }

    pub fn check(&self) -> Result<(), InvariantError> {
        let mut titles = BTreeSet::new();
        for g in &self.palette {
            check_name(&g.name, "tool group")?;
            for t in &g.tools {
                check_name(&t.title, "tool")?;
                if !titles.insert(t.title.as_str()) {
                    return Err(InvariantError::new(
                        format!("tool {}", t.title),
                        "tool titles must be unique across the palette",
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A name-based pointer to a structural feature, plus the feature's type at
/// the time the link was made.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FeatureRef {
    pub class_name: String,
    pub feature_name: String,
    pub recorded_type_name: String,
}

impl FeatureRef {
    pub fn new(
        class_name: impl Into<String>,
        feature_name: impl Into<String>,
        recorded_type_name: impl Into<String>,
    ) -> Self {
        FeatureRef {
            class_name: class_name.into(),
            feature_name: feature_name.into(),
            recorded_type_name: recorded_type_name.into(),
        }
    }

    pub fn same_feature(&self, class: &str, feature: &str) -> bool {
        self.class_name == class && self.feature_name == feature
    }
}

impl std::fmt::Display for FeatureRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.class_name, self.feature_name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FeatureLabelMapping {
    pub features: Vec<FeatureRef>,
    pub diagram_label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct NodeMapping {
    pub domain_meta_element: String,
    pub tool: String,
    pub diagram_node: String,
    #[serde(default)]
    pub label_mappings: Vec<FeatureLabelMapping>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TopNodeReference {
    pub containment_feature: FeatureRef,
    pub owned_child: NodeMapping,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LinkMapping {
    pub domain_meta_element: String,
    pub tool: String,
    pub diagram_link: String,
    pub source_feature: FeatureRef,
    pub target_feature: FeatureRef,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MappingModel {
    #[serde(default)]
    pub top_node_references: Vec<TopNodeReference>,
    #[serde(default)]
    pub link_mappings: Vec<LinkMapping>,
}

impl MappingModel {
    pub fn node_mappings(&self) -> impl Iterator<Item = &NodeMapping> {
        self.top_node_references.iter().map(|t| &t.owned_child)
    }

    /// Classes that own a containment feature used by a top node reference;
    /// these play the diagram canvas role and need no node of their own.
    pub fn canvas_classes(&self) -> BTreeSet<&str> {
        self.top_node_references.iter().map(|t| t.containment_feature.class_name.as_str()).collect()
    }

    /// Tool titles referenced by any mapping entry.
    pub fn bound_tools(&self) -> BTreeSet<&str> {
        self.node_mappings()
            .map(|n| n.tool.as_str())
            .chain(self.link_mappings.iter().map(|l| l.tool.as_str()))
            .collect()
    }

    pub fn check(&self) -> Result<(), InvariantError> {
        let feature = |f: &FeatureRef, path: &str| -> Result<(), InvariantError> {
            check_name(&f.class_name, path)?;
            check_name(&f.feature_name, path)?;
            check_name(&f.recorded_type_name, path)
        };
        for (i, t) in self.top_node_references.iter().enumerate() {
            let path = format!("topNodeReferences[{i}]");
            feature(&t.containment_feature, &path)?;
            let n = &t.owned_child;
            check_name(&n.domain_meta_element, &path)?;
            check_name(&n.tool, &path)?;
            check_name(&n.diagram_node, &path)?;
            for (j, l) in n.label_mappings.iter().enumerate() {
                let lpath = format!("{path}.ownedChild.labelMappings[{j}]");
                check_name(&l.diagram_label, &lpath)?;
                if l.features.is_empty() {
                    return Err(InvariantError::new(lpath, "label mapping without features"));
                }
                for f in &l.features {
                    feature(f, &lpath)?;
                }
            }
        }
        for (i, l) in self.link_mappings.iter().enumerate() {
            let path = format!("linkMappings[{i}]");
            check_name(&l.domain_meta_element, &path)?;
            check_name(&l.tool, &path)?;
            check_name(&l.diagram_link, &path)?;
            feature(&l.source_feature, &path)?;
            feature(&l.target_feature, &path)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GenClass {
    pub class_name: String,
    #[serde(default)]
    pub gen_features: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EmfGenModel {
    #[serde(default)]
    pub package_prefix: String,
    #[serde(default)]
    pub gen_classes: Vec<GenClass>,
}

impl EmfGenModel {
    /// Generator configuration covering every class and declared feature of `domain`.
    pub fn for_metamodel(package_prefix: impl Into<String>, domain: &Metamodel) -> Self {
        EmfGenModel {
            package_prefix: package_prefix.into(),
            gen_classes: domain
                .classes
                .iter()
                .map(|c| GenClass {
                    class_name: c.name.clone(),
                    gen_features: c.feature_names().map(str::to_string).collect(),
                })
                .collect(),
        }
    }

    pub fn gen_class(&self, name: &str) -> Option<&GenClass> {
        self.gen_classes.iter().find(|g| g.class_name == name)
    }

    pub fn gen_class_mut(&mut self, name: &str) -> Option<&mut GenClass> {
        self.gen_classes.iter_mut().find(|g| g.class_name == name)
    }

    pub fn check(&self) -> Result<(), InvariantError> {
        let mut names = BTreeSet::new();
        for g in &self.gen_classes {
            check_identifier(&g.class_name, "genClass")?;
            if !names.insert(g.class_name.as_str()) {
                return Err(InvariantError::new(format!("genClass {}", g.class_name), "duplicate genClass entry"));
            }
            let mut features = BTreeSet::new();
            for f in &g.gen_features {
                check_identifier(f, &g.class_name)?;
                if !features.insert(f.as_str()) {
                    return Err(InvariantError::new(
                        format!("genClass {}", g.class_name),
                        format!("duplicate genFeature {f:?}"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The domain metamodel together with its four companion editor models.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditorModelSet {
    pub domain: Metamodel,
    pub graph: GraphModel,
    pub tooling: ToolingModel,
    pub mapping: MappingModel,
    pub emfgen: EmfGenModel,
}

fn check_name(value: &str, element: &str) -> Result<(), InvariantError> {
    if value.trim().is_empty() {
        Err(InvariantError::new(element, "empty name"))
    } else {
        Ok(())
    }
}
