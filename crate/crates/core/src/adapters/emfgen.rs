use super::{Adapted, Evolution};
use crate::diff::DiffEntry;
use crate::model::{EmfGenModel, GenClass};

fn remove_feature(model: &mut EmfGenModel, class: &str, feature: &str) -> bool {
    let Some(g) = model.gen_class_mut(class) else { return false };
    let before = g.gen_features.len();
    g.gen_features.retain(|f| f != feature);
    g.gen_features.len() != before
}

/// Keeps the generator configuration in step with the new metamodel.
///
/// Entries are processed in passes so that every rule sees a consistent
/// intermediate state: outgoing features first, then classes (delete,
/// rename, add), then feature renames in place, then incoming features.
/// Added classes and features are appended; renames keep their position.
pub fn adapt_emfgen(evo: &Evolution, emfgen: &EmfGenModel) -> Adapted<EmfGenModel> {
    let mut out = Adapted::new(emfgen.clone());
    let entries = &evo.diff.entries;

    for (i, e) in entries.iter().enumerate() {
        let (owner, name, rule) = match e {
            DiffEntry::DeletedAttribute { owner, old } => (owner, &old.name, "DeletedAttributeToGenFeature"),
            DiffEntry::DeletedReference { owner, old } => (owner, &old.name, "DeletedReferenceToGenFeature"),
            DiffEntry::ChangedAttribute { old_owner, old, .. } if evo.is_moved(old_owner, &old.name) => {
                (old_owner, &old.name, "MovedAttributeToGenFeature")
            }
            DiffEntry::ChangedReference { old_owner, old, .. } if evo.is_moved(old_owner, &old.name) => {
                (old_owner, &old.name, "MovedReferenceToGenFeature")
            }
            _ => continue,
        };
        if remove_feature(&mut out.model, owner, name) {
            out.fire(rule, evo, Some(i), &[("genFeature", &format!("{owner}.{name}"))]);
        } else {
            out.note(rule, format!("no genFeature {owner}.{name} to remove"));
        }
    }

    for (i, e) in entries.iter().enumerate() {
        if let DiffEntry::DeletedClass { old } = e {
            let before = out.model.gen_classes.len();
            out.model.gen_classes.retain(|g| g.class_name != old.name);
            if out.model.gen_classes.len() != before {
                out.fire("DeletedClassToGenClass", evo, Some(i), &[("genClass", &old.name)]);
            } else {
                out.note("DeletedClassToGenClass", format!("no genClass {} to remove", old.name));
            }
        }
    }

    for (i, e) in entries.iter().enumerate() {
        if let DiffEntry::ChangedClass { old, updated } = e {
            if old.name == updated.name {
                continue;
            }
            match out.model.gen_class_mut(&old.name) {
                Some(g) => {
                    g.class_name = updated.name.clone();
                    out.fire("ChangedClassToGenClass", evo, Some(i), &[("genClass", &updated.name)]);
                }
                None => out.note("ChangedClassToGenClass", format!("no genClass {} to rename", old.name)),
            }
        }
    }

    for (i, e) in entries.iter().enumerate() {
        if let DiffEntry::AddedClass { new } = e {
            if out.model.gen_class(&new.name).is_some() {
                out.note("AddedClassToGenClass", format!("genClass {} already present", new.name));
                continue;
            }
            out.model.gen_classes.push(GenClass { class_name: new.name.clone(), gen_features: Vec::new() });
            out.fire("AddedClassToGenClass", evo, Some(i), &[("genClass", &new.name)]);
        }
    }

    for (i, e) in entries.iter().enumerate() {
        let (old_owner, old_name, new_owner, new_name) = match e {
            DiffEntry::ChangedAttribute { old_owner, old, new_owner, updated } => {
                (old_owner, &old.name, new_owner, &updated.name)
            }
            DiffEntry::ChangedReference { old_owner, old, new_owner, updated } => {
                (old_owner, &old.name, new_owner, &updated.name)
            }
            _ => continue,
        };
        if evo.is_moved(old_owner, old_name) || old_name == new_name {
            continue;
        }
        let renamed = out
            .model
            .gen_class_mut(new_owner)
            .and_then(|g| g.gen_features.iter_mut().find(|f| *f == old_name))
            .map(|f| *f = new_name.clone())
            .is_some();
        if renamed {
            out.fire("ChangedFeatureToGenFeature", evo, Some(i), &[("genFeature", &format!("{new_owner}.{new_name}"))]);
        } else {
            out.note("ChangedFeatureToGenFeature", format!("no genFeature {old_owner}.{old_name} to rename"));
        }
    }

    for (i, e) in entries.iter().enumerate() {
        let (owner, name, rule) = match e {
            DiffEntry::AddedAttribute { owner, new } => (owner, &new.name, "AddedAttributeToGenFeature"),
            DiffEntry::AddedReference { owner, new } => (owner, &new.name, "AddedReferenceToGenFeature"),
            DiffEntry::ChangedAttribute { old_owner, old, new_owner, updated }
                if evo.is_moved(old_owner, &old.name) =>
            {
                (new_owner, &updated.name, "MovedAttributeToGenFeature")
            }
            DiffEntry::ChangedReference { old_owner, old, new_owner, updated }
                if evo.is_moved(old_owner, &old.name) =>
            {
                (new_owner, &updated.name, "MovedReferenceToGenFeature")
            }
            _ => continue,
        };
        match out.model.gen_class_mut(owner) {
            Some(g) if !g.gen_features.contains(name) => {
                g.gen_features.push(name.clone());
                out.fire(rule, evo, Some(i), &[("genFeature", &format!("{owner}.{name}"))]);
            }
            Some(_) => out.note(rule, format!("genFeature {owner}.{name} already present")),
            None => out.note(rule, format!("no genClass {owner} to receive {name}")),
        }
    }

    out
}
