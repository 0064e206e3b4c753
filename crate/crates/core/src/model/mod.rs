//! Domain metamodel, the editor-definition models, their document format and
//! cross-model name resolution.

pub mod document;
pub mod editor;
pub mod metamodel;
pub mod resolve;

use thiserror::Error;

pub use document::{
    document_kind, parse_any, parse_model, serialize_model, serialize_to_string, AnyModel, Document, ModelKind,
    ParseError, FORMAT_VERSION,
};
pub use editor::{
    CanvasElement, ConnectionDef, CreationTool, EditorModelSet, EmfGenModel, FeatureLabelMapping, FeatureRef,
    FigureDef, FigureKind, GenClass, GraphModel, LabelDef, LinkMapping, MappingModel, NodeDef, NodeMapping, ToolGroup,
    ToolingModel, TopNodeReference,
};
pub use metamodel::{AttributeDef, ClassDef, Metamodel, PrimitiveType, ReferenceDef, UpperBound};
pub use resolve::{resolve, Link, LinkKind, LinkOrigin, LinkStatus, ResolutionTable};

/// A per-model invariant does not hold; `element` names the offender.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{element}: {message}")]
pub struct InvariantError {
    pub element: String,
    pub message: String,
}

impl InvariantError {
    pub fn new(element: impl Into<String>, message: impl Into<String>) -> Self {
        InvariantError { element: element.into(), message: message.into() }
    }
}
