//! Derivation of difference schemas: for every class `MC` of a source
//! metamodel, the classes `AddedMC`, `DeletedMC` and `ChangedMC` that a
//! difference model instantiates.

use serde::{Deserialize, Serialize};

use crate::model::{AttributeDef, ClassDef, Document, Metamodel, ModelKind, PrimitiveType, ReferenceDef, UpperBound};

pub const UPDATED_ELEMENT: &str = "updatedElement";

/// Shaped like a metamodel document, but its supertypes and reference
/// targets point into the source metamodel rather than into itself.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DifferenceSchema {
    pub name: String,
    #[serde(default)]
    pub classes: Vec<ClassDef>,
}

impl Document for DifferenceSchema {
    const KIND: ModelKind = ModelKind::DiffSchema;
}

impl DifferenceSchema {
    pub fn class(&self, name: &str) -> Option<&ClassDef> {
        self.classes.iter().find(|c| c.name == name)
    }
}

fn generated(prefix: &str, source: &ClassDef) -> ClassDef {
    let mut c = ClassDef::new(format!("{prefix}{}", source.name));
    c.super_types.push(source.name.clone());
    c
}

pub fn derive_difference_schema(source: &Metamodel) -> DifferenceSchema {
    let mut classes = Vec::with_capacity(source.classes.len() * 3);
    for mc in &source.classes {
        classes.push(generated("Added", mc));
        classes.push(generated("Deleted", mc));
        let mut changed = generated("Changed", mc);
        let mut updated = ReferenceDef::new(UPDATED_ELEMENT, mc.name.clone());
        updated.lower_bound = 1;
        updated.upper_bound = UpperBound::Bounded(1);
        changed.references.push(updated);
        classes.push(changed);
    }
    DifferenceSchema { name: format!("{}Difference", source.name), classes }
}

/// The metamodel of metamodels this crate works with.
pub fn ecore_meta_schema() -> Metamodel {
    let many = |name: &str, target: &str, containment: bool| {
        let mut r = ReferenceDef::new(name, target);
        r.containment = containment;
        r.upper_bound = UpperBound::Unbounded;
        r
    };
    let one = |name: &str, target: &str| ReferenceDef::new(name, target);

    let mut eclass = ClassDef::new("EClass");
    eclass.attributes =
        vec![AttributeDef::new("name", PrimitiveType::String), AttributeDef::new("abstract", PrimitiveType::Boolean)];
    eclass.references = vec![
        many("eSuperTypes", "EClass", false),
        many("eAttributes", "EAttribute", true),
        many("eReferences", "EReference", true),
    ];

    let mut eattribute = ClassDef::new("EAttribute");
    eattribute.attributes = vec![
        AttributeDef::new("name", PrimitiveType::String),
        AttributeDef::new("eAttributeType", PrimitiveType::String),
    ];
    eattribute.references = vec![one("eContainingClass", "EClass")];

    let mut ereference = ClassDef::new("EReference");
    ereference.attributes = vec![
        AttributeDef::new("name", PrimitiveType::String),
        AttributeDef::new("containment", PrimitiveType::Boolean),
        AttributeDef::new("lowerBound", PrimitiveType::Int),
        AttributeDef::new("upperBound", PrimitiveType::Int),
    ];
    ereference.references = vec![one("eReferenceType", "EClass"), one("eContainingClass", "EClass")];

    Metamodel { name: "ecore".into(), classes: vec![eclass, eattribute, ereference] }
}
