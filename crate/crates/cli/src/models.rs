//! Reading and writing a directory that holds one editor model set.

use std::fs;
use std::path::{Path, PathBuf};

use coevo_core::model::{
    document_kind, parse_model, EditorModelSet, EmfGenModel, GraphModel, MappingModel, Metamodel, ModelKind,
    ToolingModel,
};

use crate::Failure;

/// One model file as found on disk.
pub struct Source {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
}

impl Source {
    pub fn file_name(&self) -> String {
        self.path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
    }
}

/// An editor model set together with the files it was read from, in the
/// order domain, graph, tooling, mapping, generator configuration.
pub struct ModelDir {
    pub set: EditorModelSet,
    pub sources: [Source; 5],
}

pub const SET_KINDS: [ModelKind; 5] =
    [ModelKind::Metamodel, ModelKind::Graph, ModelKind::Tooling, ModelKind::Mapping, ModelKind::EmfGen];

pub fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))
}

pub fn parse<T: coevo_core::model::Document>(path: &Path, bytes: &[u8]) -> Result<T, Failure> {
    parse_model(bytes).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))
}

/// Loads the five models of a set from `dir`. Files are recognised by their
/// `kind` field; JSON files of other kinds (plans, reports, diffs) are
/// skipped.
pub fn load(dir: &Path) -> Result<ModelDir, Failure> {
    let entries =
        fs::read_dir(dir).map_err(|e| Failure::io(format!("cannot read directory {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();

    let mut found: [Option<Source>; 5] = Default::default();
    for path in paths {
        let bytes = read(&path)?;
        let kind = document_kind(&bytes).map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
        let Some(slot) = SET_KINDS.iter().position(|k| *k == kind) else { continue };
        if let Some(first) = &found[slot] {
            return Err(Failure::data(format!(
                "{} holds two {kind} models: {} and {}",
                dir.display(),
                first.file_name(),
                path.file_name().unwrap_or_default().to_string_lossy()
            )));
        }
        found[slot] = Some(Source { path, bytes });
    }

    let missing: Vec<_> = SET_KINDS.iter().zip(&found).filter(|(_, s)| s.is_none()).map(|(k, _)| k.tag()).collect();
    if !missing.is_empty() {
        return Err(Failure::data(format!("{} is missing model kinds: {}", dir.display(), missing.join(", "))));
    }
    let sources = found.map(|s| s.expect("checked above"));
    let set = EditorModelSet {
        domain: parse::<Metamodel>(&sources[0].path, &sources[0].bytes)?,
        graph: parse::<GraphModel>(&sources[1].path, &sources[1].bytes)?,
        tooling: parse::<ToolingModel>(&sources[2].path, &sources[2].bytes)?,
        mapping: parse::<MappingModel>(&sources[3].path, &sources[3].bytes)?,
        emfgen: parse::<EmfGenModel>(&sources[4].path, &sources[4].bytes)?,
    };
    Ok(ModelDir { set, sources })
}
