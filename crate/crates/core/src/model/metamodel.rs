//! The domain metamodel: a small Ecore subset of classes, attributes and
//! references with single-namespace features and multiple inheritance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::InvariantError;

/// Closed set of attribute types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimitiveType {
    String,
    Int,
    Boolean,
    Float,
}

impl PrimitiveType {
    pub const ALL: [PrimitiveType; 4] =
        [PrimitiveType::String, PrimitiveType::Int, PrimitiveType::Boolean, PrimitiveType::Float];

    pub fn as_str(self) -> &'static str {
        match self {
            PrimitiveType::String => "string",
            PrimitiveType::Int => "int",
            PrimitiveType::Boolean => "boolean",
            PrimitiveType::Float => "float",
        }
    }
}

impl fmt::Display for PrimitiveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Upper multiplicity bound; serialized as a positive integer or `"unbounded"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpperBound {
    Bounded(u32),
    Unbounded,
}

impl Serialize for UpperBound {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            UpperBound::Bounded(n) => serializer.serialize_u32(*n),
            UpperBound::Unbounded => serializer.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for UpperBound {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct BoundVisitor;

        impl Visitor<'_> for BoundVisitor {
            type Value = UpperBound;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive integer or \"unbounded\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<UpperBound, E> {
                match u32::try_from(v) {
                    Ok(n) if n > 0 => Ok(UpperBound::Bounded(n)),
                    _ => Err(E::custom(format!("upper bound {v} out of range"))),
                }
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<UpperBound, E> {
                match u64::try_from(v) {
                    Ok(n) => self.visit_u64(n),
                    Err(_) => Err(E::custom(format!("upper bound {v} out of range"))),
                }
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<UpperBound, E> {
                if v == "unbounded" {
                    Ok(UpperBound::Unbounded)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(BoundVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AttributeDef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub name: String,
    pub type_name: PrimitiveType,
}

impl AttributeDef {
    pub fn new(name: impl Into<String>, type_name: PrimitiveType) -> Self {
        AttributeDef { id: None, name: name.into(), type_name }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ReferenceDef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub name: String,
    pub target: String,
    #[serde(default)]
    pub containment: bool,
    #[serde(default)]
    pub lower_bound: u32,
    pub upper_bound: UpperBound,
}

impl ReferenceDef {
    pub fn new(name: impl Into<String>, target: impl Into<String>) -> Self {
        ReferenceDef {
            id: None,
            name: name.into(),
            target: target.into(),
            containment: false,
            lower_bound: 0,
            upper_bound: UpperBound::Bounded(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ClassDef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub name: String,
    #[serde(rename = "abstract", default)]
    pub is_abstract: bool,
    #[serde(default)]
    pub super_types: Vec<String>,
    #[serde(default)]
    pub attributes: Vec<AttributeDef>,
    #[serde(default)]
    pub references: Vec<ReferenceDef>,
}

impl ClassDef {
    pub fn new(name: impl Into<String>) -> Self {
        ClassDef {
            id: None,
            name: name.into(),
            is_abstract: false,
            super_types: Vec::new(),
            attributes: Vec::new(),
            references: Vec::new(),
        }
    }

    /// The class without its features; diff entries carry classes in this form.
    pub fn shell(&self) -> ClassDef {
        ClassDef {
            id: self.id.clone(),
            name: self.name.clone(),
            is_abstract: self.is_abstract,
            super_types: self.super_types.clone(),
            attributes: Vec::new(),
            references: Vec::new(),
        }
    }

    pub fn attribute(&self, name: &str) -> Option<&AttributeDef> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn reference(&self, name: &str) -> Option<&ReferenceDef> {
        self.references.iter().find(|r| r.name == name)
    }

    pub fn declares(&self, feature: &str) -> bool {
        self.attribute(feature).is_some() || self.reference(feature).is_some()
    }

    /// Declared feature names, attributes first, in authored order.
    pub fn feature_names(&self) -> impl Iterator<Item = &str> {
        self.attributes.iter().map(|a| a.name.as_str()).chain(self.references.iter().map(|r| r.name.as_str()))
    }
}

/// A feature's type as recorded by mapping links: the primitive type name of
/// an attribute, the target class name of a reference.
pub fn feature_type_name(class: &ClassDef, feature: &str) -> Option<String> {
    if let Some(a) = class.attribute(feature) {
        return Some(a.type_name.as_str().to_string());
    }
    class.reference(feature).map(|r| r.target.clone())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Metamodel {
    pub name: String,
    #[serde(default)]
    pub classes: Vec<ClassDef>,
}

pub(crate) fn check_identifier(value: &str, element: &str) -> Result<(), InvariantError> {
    let mut chars = value.chars();
    let ok = match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(InvariantError::new(element, format!("{value:?} is not an identifier")))
    }
}

impl Metamodel {
    pub fn new(name: impl Into<String>) -> Self {
        Metamodel { name: name.into(), classes: Vec::new() }
    }

    pub fn class(&self, name: &str) -> Option<&ClassDef> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn class_mut(&mut self, name: &str) -> Option<&mut ClassDef> {
        self.classes.iter_mut().find(|c| c.name == name)
    }

    pub fn has_class(&self, name: &str) -> bool {
        self.class(name).is_some()
    }

    /// Transitive supertypes of `name` in breadth-first order, without `name`.
    /// Tolerates cycles and unresolved names.
    pub fn ancestors(&self, name: &str) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut queue: Vec<String> = self.class(name).map(|c| c.super_types.clone()).unwrap_or_default();
        let mut i = 0;
        while i < queue.len() {
            let s = queue[i].clone();
            i += 1;
            if s == name || !seen.insert(s.clone()) {
                continue;
            }
            if let Some(c) = self.class(&s) {
                queue.extend(c.super_types.iter().cloned());
            }
            out.push(s);
        }
        out
    }

    pub fn is_ancestor(&self, ancestor: &str, of: &str) -> bool {
        self.ancestors(of).iter().any(|a| a == ancestor)
    }

    /// Classes that have `name` among their transitive supertypes.
    pub fn descendants(&self, name: &str) -> Vec<&ClassDef> {
        self.classes.iter().filter(|c| self.is_ancestor(name, &c.name)).collect()
    }

    /// `(declaring class, attribute)` pairs visible in `class`, own first.
    pub fn effective_attributes(&self, class: &str) -> Vec<(&str, &AttributeDef)> {
        let mut owners = vec![class.to_string()];
        owners.extend(self.ancestors(class));
        owners
            .iter()
            .filter_map(|o| self.class(o))
            .flat_map(|c| c.attributes.iter().map(move |a| (c.name.as_str(), a)))
            .collect()
    }

    /// Canonical form: classes and features sorted by name. Supertype order is
    /// significant and kept.
    pub fn canonical(&self) -> Metamodel {
        let mut m = self.clone();
        m.classes.sort_by(|a, b| a.name.cmp(&b.name));
        for c in &mut m.classes {
            c.attributes.sort_by(|a, b| a.name.cmp(&b.name));
            c.references.sort_by(|a, b| a.name.cmp(&b.name));
        }
        m
    }

    pub fn canonical_eq(&self, other: &Metamodel) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn check(&self) -> Result<(), InvariantError> {
        check_identifier(&self.name, "metamodel")?;
        let mut names = BTreeSet::new();
        let mut ids = BTreeSet::new();
        let mut claim_id = |id: &Option<String>, element: &str| -> Result<(), InvariantError> {
            if let Some(id) = id {
                if id.is_empty() {
                    return Err(InvariantError::new(element, "empty id"));
                }
                if !ids.insert(id.clone()) {
                    return Err(InvariantError::new(element, format!("duplicate id {id:?}")));
                }
            }
            Ok(())
        };
        for c in &self.classes {
            check_identifier(&c.name, &c.name)?;
            if !names.insert(c.name.as_str()) {
                return Err(InvariantError::new(&c.name, "duplicate class name"));
            }
            claim_id(&c.id, &c.name)?;
            for a in &c.attributes {
                let path = format!("{}.{}", c.name, a.name);
                check_identifier(&a.name, &path)?;
                claim_id(&a.id, &path)?;
            }
            for r in &c.references {
                let path = format!("{}.{}", c.name, r.name);
                check_identifier(&r.name, &path)?;
                claim_id(&r.id, &path)?;
                if let UpperBound::Bounded(u) = r.upper_bound {
                    if u == 0 {
                        return Err(InvariantError::new(&path, "upper bound must be positive"));
                    }
                    if r.lower_bound > u {
                        return Err(InvariantError::new(&path, "lower bound exceeds upper bound"));
                    }
                }
            }
        }
        for c in &self.classes {
            let mut seen = BTreeSet::new();
            for s in &c.super_types {
                if !names.contains(s.as_str()) {
                    return Err(InvariantError::new(&c.name, format!("unresolved supertype {s:?}")));
                }
                if !seen.insert(s) {
                    return Err(InvariantError::new(&c.name, format!("supertype {s:?} listed twice")));
                }
            }
            for r in &c.references {
                if !names.contains(r.target.as_str()) {
                    return Err(InvariantError::new(
                        format!("{}.{}", c.name, r.name),
                        format!("unresolved reference target {:?}", r.target),
                    ));
                }
            }
        }
        self.check_acyclic()?;
        for c in &self.classes {
            let mut owner_of: BTreeMap<&str, &str> = BTreeMap::new();
            let mut lineage = vec![c.name.clone()];
            lineage.extend(self.ancestors(&c.name));
            for owner in lineage.iter().filter_map(|o| self.class(o)) {
                for f in owner.feature_names() {
                    if let Some(prev) = owner_of.insert(f, owner.name.as_str()) {
                        return Err(InvariantError::new(
                            format!("{}.{}", owner.name, f),
                            format!("feature name clashes with {prev}.{f} as seen from class {}", c.name),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_acyclic(&self) -> Result<(), InvariantError> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let index: BTreeMap<&str, usize> = self.classes.iter().enumerate().map(|(i, c)| (c.name.as_str(), i)).collect();
        let mut state = vec![0u8; self.classes.len()];
        for start in 0..self.classes.len() {
            if state[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            state[start] = 1;
            while let Some((node, next)) = stack.pop() {
                let supers = &self.classes[node].super_types;
                if next < supers.len() {
                    stack.push((node, next + 1));
                    let Some(&s) = index.get(supers[next].as_str()) else {
                        continue;
                    };
                    match state[s] {
                        0 => {
                            state[s] = 1;
                            stack.push((s, 0));
                        }
                        1 => return Err(InvariantError::new(&self.classes[s].name, "inheritance cycle")),
                        _ => {}
                    }
                } else {
                    state[node] = 2;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn topic_model() -> Metamodel {
        let mut m = Metamodel::new("mindmap");
        let mut named = ClassDef::new("NamedElement");
        named.is_abstract = true;
        named.attributes.push(AttributeDef::new("name", PrimitiveType::String));
        let mut topic = ClassDef::new("Topic");
        topic.super_types.push("NamedElement".into());
        m.classes.push(named);
        m.classes.push(topic);
        m
    }

    #[test]
    fn valid_model_passes() {
        topic_model().check().unwrap();
        Metamodel::new("empty").check().unwrap();
    }

    #[test]
    fn duplicate_class_rejected() {
        let mut m = topic_model();
        m.classes.push(ClassDef::new("Topic"));
        assert!(m.check().unwrap_err().message.contains("duplicate class"));
    }

    #[test]
    fn cycle_rejected() {
        let mut m = topic_model();
        m.class_mut("NamedElement").unwrap().super_types.push("Topic".into());
        let err = m.check().unwrap_err();
        assert!(err.message.contains("cycle"), "{err}");
    }

    #[test]
    fn self_supertype_is_a_cycle() {
        let mut m = Metamodel::new("m");
        let mut c = ClassDef::new("A");
        c.super_types.push("A".into());
        m.classes.push(c);
        assert!(m.check().unwrap_err().message.contains("cycle"));
    }

    #[test]
    fn shadowing_rejected() {
        let mut m = topic_model();
        m.class_mut("Topic").unwrap().attributes.push(AttributeDef::new("name", PrimitiveType::Int));
        assert!(m.check().unwrap_err().message.contains("clashes"));
    }

    #[test]
    fn attribute_and_reference_share_namespace() {
        let mut m = topic_model();
        m.class_mut("Topic").unwrap().references.push(ReferenceDef::new("name", "Topic"));
        assert!(m.check().is_err());
    }

    #[test]
    fn unresolved_target_and_bounds() {
        let mut m = topic_model();
        m.class_mut("Topic").unwrap().references.push(ReferenceDef::new("parent", "Nope"));
        assert!(m.check().unwrap_err().message.contains("unresolved"));

        let mut m = topic_model();
        let mut r = ReferenceDef::new("parent", "Topic");
        r.lower_bound = 3;
        r.upper_bound = UpperBound::Bounded(2);
        m.class_mut("Topic").unwrap().references.push(r);
        assert!(m.check().unwrap_err().message.contains("lower bound"));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let mut m = topic_model();
        m.classes[0].id = Some("x".into());
        m.classes[1].id = Some("x".into());
        assert!(m.check().unwrap_err().message.contains("duplicate id"));
    }

    #[test]
    fn ancestry() {
        let m = topic_model();
        assert_eq!(m.ancestors("Topic"), vec!["NamedElement".to_string()]);
        assert!(m.is_ancestor("NamedElement", "Topic"));
        assert!(!m.is_ancestor("Topic", "NamedElement"));
        let eff = m.effective_attributes("Topic");
        assert_eq!(eff.len(), 1);
        assert_eq!(eff[0].0, "NamedElement");
    }

    #[test]
    fn identifiers() {
        assert!(check_identifier("Topic_2", "x").is_ok());
        assert!(check_identifier("2Topic", "x").is_err());
        assert!(check_identifier("", "x").is_err());
        assert!(check_identifier("a-b", "x").is_err());
    }
}
