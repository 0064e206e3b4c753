//! Edit scripts over metamodels.
//!
//! Fixtures describe an evolution as a base metamodel plus a short list of
//! these operations; the randomized tests build evolutions the same way.
//! Every operation keeps the metamodel valid or fails without effect.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{AttributeDef, ClassDef, InvariantError, Metamodel, PrimitiveType, ReferenceDef, UpperBound};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase", rename_all_fields = "camelCase", deny_unknown_fields)]
pub enum EditOp {
    AddClass {
        name: String,
        #[serde(rename = "abstract", default)]
        is_abstract: bool,
        #[serde(default)]
        super_types: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
    /// Removes the class, its features and every reference targeting it.
    DeleteClass {
        name: String,
    },
    RenameClass {
        from: String,
        to: String,
    },
    SetAbstract {
        class: String,
        value: bool,
    },
    AddSuperType {
        class: String,
        super_type: String,
    },
    AddAttribute {
        owner: String,
        name: String,
        type_name: PrimitiveType,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
    AddReference {
        owner: String,
        name: String,
        target: String,
        #[serde(default)]
        containment: bool,
        #[serde(default)]
        lower_bound: u32,
        upper_bound: UpperBound,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
    DeleteFeature {
        owner: String,
        name: String,
    },
    RenameFeature {
        owner: String,
        from: String,
        to: String,
    },
    MoveFeature {
        from: String,
        to: String,
        name: String,
    },
    ChangeAttributeType {
        owner: String,
        name: String,
        type_name: PrimitiveType,
    },
    RetargetReference {
        owner: String,
        name: String,
        target: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EditError {
    #[error("no class named {0:?}")]
    NoClass(String),
    #[error("class {0:?} has no feature {1:?}")]
    NoFeature(String, String),
    #[error("class {0:?} is a supertype of {1:?} and cannot be deleted")]
    StillSpecialized(String, String),
    #[error("{0:?} is not an attribute")]
    NotAnAttribute(String),
    #[error("{0:?} is not a reference")]
    NotAReference(String),
    #[error("edit leaves an invalid metamodel: {0}")]
    Invalid(#[from] InvariantError),
}

enum Feature {
    Attribute(AttributeDef),
    Reference(ReferenceDef),
}

fn class_mut<'a>(m: &'a mut Metamodel, name: &str) -> Result<&'a mut ClassDef, EditError> {
    m.class_mut(name).ok_or_else(|| EditError::NoClass(name.to_string()))
}

fn take_feature(m: &mut Metamodel, owner: &str, name: &str) -> Result<Feature, EditError> {
    let c = class_mut(m, owner)?;
    if let Some(i) = c.attributes.iter().position(|a| a.name == name) {
        return Ok(Feature::Attribute(c.attributes.remove(i)));
    }
    if let Some(i) = c.references.iter().position(|r| r.name == name) {
        return Ok(Feature::Reference(c.references.remove(i)));
    }
    Err(EditError::NoFeature(owner.to_string(), name.to_string()))
}

fn put_feature(c: &mut ClassDef, f: Feature) {
    match f {
        Feature::Attribute(a) => c.attributes.push(a),
        Feature::Reference(r) => c.references.push(r),
    }
}

impl EditOp {
    /// Applies the operation to a copy of `model`.
    pub fn apply(&self, model: &Metamodel) -> Result<Metamodel, EditError> {
        let mut m = model.clone();
        match self {
            EditOp::AddClass { name, is_abstract, super_types, id } => {
                let mut c = ClassDef::new(name.clone());
                c.is_abstract = *is_abstract;
                c.super_types = super_types.clone();
                c.id = id.clone();
                m.classes.push(c);
            }
            EditOp::DeleteClass { name } => {
                if !m.has_class(name) {
                    return Err(EditError::NoClass(name.clone()));
                }
                if let Some(sub) = m.classes.iter().find(|c| c.super_types.contains(name)) {
                    return Err(EditError::StillSpecialized(name.clone(), sub.name.clone()));
                }
                m.classes.retain(|c| &c.name != name);
                for c in &mut m.classes {
                    c.references.retain(|r| &r.target != name);
                }
            }
            EditOp::RenameClass { from, to } => {
                class_mut(&mut m, from)?.name = to.clone();
                for c in &mut m.classes {
                    for s in &mut c.super_types {
                        if s == from {
                            *s = to.clone();
                        }
                    }
                    for r in &mut c.references {
                        if &r.target == from {
                            r.target = to.clone();
                        }
                    }
                }
            }
            EditOp::SetAbstract { class, value } => class_mut(&mut m, class)?.is_abstract = *value,
            EditOp::AddSuperType { class, super_type } => {
                if !m.has_class(super_type) {
                    return Err(EditError::NoClass(super_type.clone()));
                }
                class_mut(&mut m, class)?.super_types.push(super_type.clone());
            }
            EditOp::AddAttribute { owner, name, type_name, id } => {
                let mut a = AttributeDef::new(name.clone(), *type_name);
                a.id = id.clone();
                class_mut(&mut m, owner)?.attributes.push(a);
            }
            EditOp::AddReference { owner, name, target, containment, lower_bound, upper_bound, id } => {
                let r = ReferenceDef {
                    id: id.clone(),
                    name: name.clone(),
                    target: target.clone(),
                    containment: *containment,
                    lower_bound: *lower_bound,
                    upper_bound: *upper_bound,
                };
                class_mut(&mut m, owner)?.references.push(r);
            }
            EditOp::DeleteFeature { owner, name } => {
                take_feature(&mut m, owner, name)?;
            }
            EditOp::RenameFeature { owner, from, to } => {
                let c = class_mut(&mut m, owner)?;
                if let Some(a) = c.attributes.iter_mut().find(|a| &a.name == from) {
                    a.name = to.clone();
                } else if let Some(r) = c.references.iter_mut().find(|r| &r.name == from) {
                    r.name = to.clone();
                } else {
                    return Err(EditError::NoFeature(owner.clone(), from.clone()));
                }
            }
            EditOp::MoveFeature { from, to, name } => {
                let f = take_feature(&mut m, from, name)?;
                put_feature(class_mut(&mut m, to)?, f);
            }
            EditOp::ChangeAttributeType { owner, name, type_name } => {
                let c = class_mut(&mut m, owner)?;
                let declared = c.declares(name);
                match c.attributes.iter_mut().find(|a| &a.name == name) {
                    Some(a) => a.type_name = *type_name,
                    None if declared => return Err(EditError::NotAnAttribute(name.clone())),
                    None => return Err(EditError::NoFeature(owner.clone(), name.clone())),
                }
            }
            EditOp::RetargetReference { owner, name, target } => {
                let c = class_mut(&mut m, owner)?;
                let declared = c.declares(name);
                match c.references.iter_mut().find(|r| &r.name == name) {
                    Some(r) => r.target = target.clone(),
                    None if declared => return Err(EditError::NotAReference(name.clone())),
                    None => return Err(EditError::NoFeature(owner.clone(), name.clone())),
                }
            }
        }
        m.check()?;
        Ok(m)
    }
}

/// Applies a whole script, stopping at the first failing operation.
pub fn apply_script(model: &Metamodel, script: &[EditOp]) -> Result<Metamodel, (usize, EditError)> {
    script.iter().enumerate().try_fold(model.clone(), |m, (i, op)| op.apply(&m).map_err(|e| (i, e)))
}
