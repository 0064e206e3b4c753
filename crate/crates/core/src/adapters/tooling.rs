use super::helpers::{creation_description, rename_word, sibling_for, specialization_title};
use super::{Adapted, Evolution, Strategy};
use crate::diff::{CatalogChange, ChangeKind, DiffEntry};
use crate::model::{CreationTool, LinkMapping, MappingModel, ToolingModel};

pub(crate) fn old_feature(entry: &DiffEntry) -> Option<(&str, &str)> {
    match entry {
        DiffEntry::DeletedAttribute { owner, old } => Some((owner, &old.name)),
        DiffEntry::DeletedReference { owner, old } => Some((owner, &old.name)),
        DiffEntry::ChangedAttribute { old_owner, old, .. } => Some((old_owner, &old.name)),
        DiffEntry::ChangedReference { old_owner, old, .. } => Some((old_owner, &old.name)),
        _ => None,
    }
}

fn uses_feature(link: &LinkMapping, owner: &str, name: &str) -> bool {
    link.source_feature.same_feature(owner, name) || link.target_feature.same_feature(owner, name)
}

fn remove_tool(tooling: &mut ToolingModel, title: &str) -> bool {
    let mut removed = false;
    for g in &mut tooling.palette {
        let before = g.tools.len();
        g.tools.retain(|t| t.title != title);
        removed |= g.tools.len() != before;
    }
    removed
}

fn tool_mut<'a>(tooling: &'a mut ToolingModel, title: &str) -> Option<&'a mut CreationTool> {
    tooling.palette.iter_mut().flat_map(|g| g.tools.iter_mut()).find(|t| t.title == title)
}

/// Tool titles bound to `class` by a node or link mapping.
fn tools_bound_to_class<'m>(mapping: &'m MappingModel, class: &'m str) -> impl Iterator<Item = &'m str> {
    mapping
        .node_mappings()
        .filter(move |n| n.domain_meta_element == class)
        .map(|n| n.tool.as_str())
        .chain(mapping.link_mappings.iter().filter(move |l| l.domain_meta_element == class).map(|l| l.tool.as_str()))
}

fn rewrite_tool(
    out: &mut Adapted<ToolingModel>,
    evo: &Evolution,
    change: &CatalogChange,
    rule: &str,
    title: &str,
    from: &str,
    to: &str,
) {
    let new_title = rename_word(title, from, to);
    if new_title != title && out.model.tool(&new_title).is_some() {
        out.note(rule, format!("cannot retitle {title:?}: {new_title:?} already exists"));
        return;
    }
    let Some(tool) = tool_mut(&mut out.model, title) else { return };
    let new_description = rename_word(&tool.description, from, to);
    if new_title == tool.title && new_description == tool.description {
        return;
    }
    tool.title = new_title.clone();
    tool.description = new_description;
    out.fire(rule, evo, change.entries.first().copied(), &[("tool", &new_title)]);
}

fn create_specialization_tools(out: &mut Adapted<ToolingModel>, evo: &Evolution, mapping: &MappingModel) {
    const RULE: &str = "AddedSpecializationClassToCreationTool";
    for change in evo.classification.of_kind(ChangeKind::AddSpecialization) {
        let entry = change.entries[0];
        let DiffEntry::AddedClass { new: s1 } = &evo.diff.entries[entry] else { continue };
        let Some(sibling) = sibling_for(evo, mapping, &s1.name) else {
            out.note(RULE, format!("no mapped sibling class to replicate for {}", s1.name));
            continue;
        };
        let Some(group) = out.model.palette.iter().position(|g| g.tools.iter().any(|t| t.title == sibling.node.tool))
        else {
            out.note(RULE, format!("sibling tool {:?} not found in the palette", sibling.node.tool));
            continue;
        };
        let title = specialization_title(&sibling, &s1.name);
        if out.model.tool(&title).is_some() {
            out.note(RULE, format!("tool {title:?} already exists"));
            continue;
        }
        out.model.palette[group].tools.push(CreationTool::new(title.clone(), creation_description(&s1.name)));
        out.fire(RULE, evo, Some(entry), &[("sibling", &sibling.new_name), ("tool", &title)]);
    }
}

/// Co-changes the palette. The mapping is the input (pre-change) mapping and
/// is only used to find which tools are bound to which domain elements.
pub fn adapt_tooling(
    evo: &Evolution,
    mapping: &MappingModel,
    tooling: &ToolingModel,
    strategy: Strategy,
) -> Adapted<ToolingModel> {
    let mut out = Adapted::new(tooling.clone());
    if strategy == Strategy::BestEffort {
        create_specialization_tools(&mut out, evo, mapping);
    }

    for change in &evo.classification.changes {
        match change.kind {
            ChangeKind::DeleteConcreteClass => {
                let class = change.binding("class").unwrap_or_default();
                let mut doomed: Vec<&str> = tools_bound_to_class(mapping, class).collect();
                for &i in &change.entries {
                    if let Some((owner, name)) = old_feature(&evo.diff.entries[i]) {
                        doomed.extend(
                            mapping
                                .link_mappings
                                .iter()
                                .filter(|l| uses_feature(l, owner, name))
                                .map(|l| l.tool.as_str()),
                        );
                    }
                }
                for title in doomed {
                    if remove_tool(&mut out.model, title) {
                        out.fire(
                            "DeletedClassToCreationTool",
                            evo,
                            change.entries.first().copied(),
                            &[("tool", title)],
                        );
                    }
                }
            }
            ChangeKind::RenameClass => {
                let (Some(from), Some(to)) = (change.binding("old"), change.binding("new")) else { continue };
                for title in tools_bound_to_class(mapping, from) {
                    rewrite_tool(&mut out, evo, change, "ChangedClassToCreationTool", title, from, to);
                }
            }
            ChangeKind::DeleteProperty | ChangeKind::MoveProperty | ChangeKind::ChangePropertyType => {
                let rule = match change.kind {
                    ChangeKind::DeleteProperty => "DeletedPropertyToCreationTool",
                    ChangeKind::MoveProperty => "MovedPropertyToCreationTool",
                    _ => "ChangedPropertyTypeToCreationTool",
                };
                let Some((owner, name)) = old_feature(&evo.diff.entries[change.entries[0]]) else { continue };
                for l in mapping.link_mappings.iter().filter(|l| uses_feature(l, owner, name)) {
                    if remove_tool(&mut out.model, &l.tool) {
                        out.fire(rule, evo, Some(change.entries[0]), &[("tool", &l.tool)]);
                    }
                }
            }
            ChangeKind::RenameProperty => {
                let (Some(from), Some(to)) = (change.binding("old"), change.binding("new")) else { continue };
                let Some((owner, name)) = old_feature(&evo.diff.entries[change.entries[0]]) else { continue };
                for l in mapping.link_mappings.iter().filter(|l| uses_feature(l, owner, name)) {
                    rewrite_tool(&mut out, evo, change, "RenamedPropertyToCreationTool", &l.tool, from, to);
                }
            }
            _ => {}
        }
    }
    out
}
