//! Versioned JSON documents: one model per file, wrapped in a
//! `{"formatVersion": "1.0", "kind": ...}` envelope.
//!
//! Canonical output puts the envelope first, then the model's fields in
//! declaration order, with two-space indentation, LF line endings and a
//! trailing newline.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use super::editor::{EmfGenModel, GraphModel, MappingModel, ToolingModel};
use super::metamodel::Metamodel;
use super::InvariantError;

pub const FORMAT_VERSION: &str = "1.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelKind {
    Metamodel,
    Graph,
    Tooling,
    Mapping,
    EmfGen,
    Diff,
    Blame,
    DiffSchema,
    Plan,
    Scenario,
}

impl ModelKind {
    pub const ALL: [ModelKind; 10] = [
        ModelKind::Metamodel,
        ModelKind::Graph,
        ModelKind::Tooling,
        ModelKind::Mapping,
        ModelKind::EmfGen,
        ModelKind::Diff,
        ModelKind::Blame,
        ModelKind::DiffSchema,
        ModelKind::Plan,
        ModelKind::Scenario,
    ];

    /// Value of the `kind` field.
    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::Metamodel => "metamodel",
            ModelKind::Graph => "graph",
            ModelKind::Tooling => "tooling",
            ModelKind::Mapping => "mapping",
            ModelKind::EmfGen => "emfgen",
            ModelKind::Diff => "diff",
            ModelKind::Blame => "blame",
            ModelKind::DiffSchema => "diffschema",
            ModelKind::Plan => "plan",
            ModelKind::Scenario => "scenario",
        }
    }

    pub fn from_tag(tag: &str) -> Option<ModelKind> {
        ModelKind::ALL.into_iter().find(|k| k.tag() == tag)
    }

    /// Conventional file extension, including the leading dot.
    pub fn extension(self) -> &'static str {
        match self {
            ModelKind::Metamodel | ModelKind::DiffSchema => ".mm.json",
            ModelKind::Graph => ".graph.json",
            ModelKind::Tooling => ".tool.json",
            ModelKind::Mapping => ".map.json",
            ModelKind::EmfGen => ".gen.json",
            ModelKind::Diff => ".diff.json",
            ModelKind::Blame => ".blame.json",
            ModelKind::Plan => ".plan.json",
            ModelKind::Scenario => ".scenario.json",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("document is not a JSON object")]
    NotAnObject,
    #[error("missing envelope field {0:?}")]
    MissingEnvelope(&'static str),
    #[error("unknown formatVersion {0:?} (expected \"1.0\")")]
    UnsupportedVersion(String),
    #[error("unknown document kind {0:?}")]
    UnknownKind(String),
    #[error("expected a {expected} document, found {found}")]
    WrongKind { expected: ModelKind, found: ModelKind },
    #[error("malformed {kind} document: {message}")]
    Schema { kind: ModelKind, message: String },
    #[error("invalid {kind} document: {source}")]
    Invariant {
        kind: ModelKind,
        #[source]
        source: InvariantError,
    },
}

/// A model that can be stored as a versioned document.
pub trait Document: Serialize + DeserializeOwned {
    const KIND: ModelKind;

    /// Per-model invariants, run after every parse.
    fn check(&self) -> Result<(), InvariantError> {
        Ok(())
    }
}

impl Document for Metamodel {
    const KIND: ModelKind = ModelKind::Metamodel;
    fn check(&self) -> Result<(), InvariantError> {
        Metamodel::check(self)
    }
}

impl Document for GraphModel {
    const KIND: ModelKind = ModelKind::Graph;
    fn check(&self) -> Result<(), InvariantError> {
        GraphModel::check(self)
    }
}

impl Document for ToolingModel {
    const KIND: ModelKind = ModelKind::Tooling;
    fn check(&self) -> Result<(), InvariantError> {
        ToolingModel::check(self)
    }
}

impl Document for MappingModel {
    const KIND: ModelKind = ModelKind::Mapping;
    fn check(&self) -> Result<(), InvariantError> {
        MappingModel::check(self)
    }
}

impl Document for EmfGenModel {
    const KIND: ModelKind = ModelKind::EmfGen;
    fn check(&self) -> Result<(), InvariantError> {
        EmfGenModel::check(self)
    }
}

/// Reads the envelope and returns the declared kind plus the body fields.
pub fn read_envelope(bytes: &[u8]) -> Result<(ModelKind, serde_json::Map<String, Value>), ParseError> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let Value::Object(mut map) = value else {
        return Err(ParseError::NotAnObject);
    };
    let version = match map.remove("formatVersion") {
        Some(Value::String(v)) => v,
        Some(other) => return Err(ParseError::UnsupportedVersion(other.to_string())),
        None => return Err(ParseError::MissingEnvelope("formatVersion")),
    };
    if version != FORMAT_VERSION {
        return Err(ParseError::UnsupportedVersion(version));
    }
    let kind = match map.remove("kind") {
        Some(Value::String(k)) => ModelKind::from_tag(&k).ok_or(ParseError::UnknownKind(k))?,
        Some(other) => return Err(ParseError::UnknownKind(other.to_string())),
        None => return Err(ParseError::MissingEnvelope("kind")),
    };
    Ok((kind, map))
}

/// Peeks at the `kind` field of a document.
pub fn document_kind(bytes: &[u8]) -> Result<ModelKind, ParseError> {
    read_envelope(bytes).map(|(k, _)| k)
}

pub fn parse_model<T: Document>(bytes: &[u8]) -> Result<T, ParseError> {
    let (kind, body) = read_envelope(bytes)?;
    if kind != T::KIND {
        return Err(ParseError::WrongKind { expected: T::KIND, found: kind });
    }
    let model: T =
        serde_json::from_value(Value::Object(body)).map_err(|e| ParseError::Schema { kind, message: e.to_string() })?;
    model.check().map_err(|source| ParseError::Invariant { kind, source })?;
    Ok(model)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Envelope<'a, T> {
    format_version: &'static str,
    kind: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

/// Canonical document bytes for `model`.
pub fn serialize_model<T: Document>(model: &T) -> Vec<u8> {
    let envelope = Envelope { format_version: FORMAT_VERSION, kind: T::KIND.tag(), body: model };
    let mut out = serde_json::to_vec_pretty(&envelope).expect("model types always serialize");
    out.push(b'\n');
    out
}

pub fn serialize_to_string<T: Document>(model: &T) -> String {
    String::from_utf8(serialize_model(model)).expect("serde_json emits UTF-8")
}

/// Any of the five editor-set model kinds, dispatched on the `kind` field.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyModel {
    Metamodel(Metamodel),
    Graph(GraphModel),
    Tooling(ToolingModel),
    Mapping(MappingModel),
    EmfGen(EmfGenModel),
}

impl AnyModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            AnyModel::Metamodel(_) => ModelKind::Metamodel,
            AnyModel::Graph(_) => ModelKind::Graph,
            AnyModel::Tooling(_) => ModelKind::Tooling,
            AnyModel::Mapping(_) => ModelKind::Mapping,
            AnyModel::EmfGen(_) => ModelKind::EmfGen,
        }
    }

    pub fn serialize(&self) -> Vec<u8> {
        match self {
            AnyModel::Metamodel(m) => serialize_model(m),
            AnyModel::Graph(m) => serialize_model(m),
            AnyModel::Tooling(m) => serialize_model(m),
            AnyModel::Mapping(m) => serialize_model(m),
            AnyModel::EmfGen(m) => serialize_model(m),
        }
    }
}

/// Parses a document of the given kind; `kind` must name one of the five
/// editor-set kinds.
pub fn parse_any(bytes: &[u8], kind: ModelKind) -> Result<AnyModel, ParseError> {
    Ok(match kind {
        ModelKind::Metamodel => AnyModel::Metamodel(parse_model(bytes)?),
        ModelKind::Graph => AnyModel::Graph(parse_model(bytes)?),
        ModelKind::Tooling => AnyModel::Tooling(parse_model(bytes)?),
        ModelKind::Mapping => AnyModel::Mapping(parse_model(bytes)?),
        ModelKind::EmfGen => AnyModel::EmfGen(parse_model(bytes)?),
        other => return Err(ParseError::Schema { kind: other, message: "not an editor model kind".into() }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_metamodel_is_minimal() {
        let m = Metamodel::new("empty");
        let text = serialize_to_string(&m);
        assert_eq!(
            text,
            "{\n  \"formatVersion\": \"1.0\",\n  \"kind\": \"metamodel\",\n  \"name\": \"empty\",\n  \"classes\": []\n}\n"
        );
        let back: Metamodel = parse_model(text.as_bytes()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_model::<Metamodel>(b"{\n  \"formatVersion\": \"1.0\",\n  oops\n}").unwrap_err();
        match err {
            ParseError::Syntax { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn version_and_kind_checked() {
        let err = parse_model::<Metamodel>(br#"{"formatVersion":"2.0","kind":"metamodel","name":"m","classes":[]}"#)
            .unwrap_err();
        assert!(matches!(err, ParseError::UnsupportedVersion(v) if v == "2.0"));

        let err = parse_model::<Metamodel>(br#"{"formatVersion":"1.0","kind":"graph"}"#).unwrap_err();
        assert!(matches!(err, ParseError::WrongKind { .. }));

        let err = parse_model::<Metamodel>(br#"{"formatVersion":"1.0","kind":"uml"}"#).unwrap_err();
        assert!(matches!(err, ParseError::UnknownKind(_)));

        let err = parse_model::<Metamodel>(br#"{"kind":"metamodel"}"#).unwrap_err();
        assert!(matches!(err, ParseError::MissingEnvelope("formatVersion")));
    }

    #[test]
    fn unknown_fields_and_types_rejected() {
        let err = parse_model::<Metamodel>(
            br#"{"formatVersion":"1.0","kind":"metamodel","name":"m","classes":[],"extra":1}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ParseError::Schema { .. }));

        let err = parse_model::<Metamodel>(
            br#"{"formatVersion":"1.0","kind":"metamodel","name":"m","classes":[{"name":"A","attributes":[{"name":"x","typeName":"double"}]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ParseError::Schema { .. }), "{err}");
    }

    #[test]
    fn invariant_violation_names_element() {
        let err = parse_model::<Metamodel>(
            br#"{"formatVersion":"1.0","kind":"metamodel","name":"m","classes":[{"name":"A","superTypes":["B"]}]}"#,
        )
        .unwrap_err();
        match err {
            ParseError::Invariant { source, .. } => assert_eq!(source.element, "A"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn kinds_round_trip_through_tags() {
        for k in ModelKind::ALL {
            assert_eq!(ModelKind::from_tag(k.tag()), Some(k));
        }
    }
}
