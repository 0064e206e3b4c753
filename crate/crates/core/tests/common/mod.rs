//! Seeded generators for randomized tests.
//!
//! `metamodel` builds a valid metamodel; `evolve` grows a random edit script
//! over it and keeps ground-truth labels of what the script did to each
//! element, independently of the diff engine.

#![allow(dead_code)]

use std::collections::BTreeMap;

use coevo_core::edit::EditOp;
use coevo_core::model::{
    AttributeDef, CanvasElement, ClassDef, CreationTool, EditorModelSet, EmfGenModel, FeatureLabelMapping, FeatureRef,
    FigureDef, FigureKind, GraphModel, MappingModel, Metamodel, NodeMapping, PrimitiveType, ReferenceDef, ToolGroup,
    ToolingModel, TopNodeReference, UpperBound,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hands out names and ids that are never reused, so renames cannot revert
/// and features never shadow each other.
#[derive(Default)]
pub struct Fresh {
    next: u32,
}

impl Fresh {
    fn bump(&mut self) -> u32 {
        self.next += 1;
        self.next
    }

    pub fn class(&mut self) -> String {
        format!("C{}", self.bump())
    }

    pub fn feature(&mut self) -> String {
        format!("f{}", self.bump())
    }

    pub fn id(&mut self, prefix: &str) -> String {
        format!("{prefix}-{}", self.bump())
    }
}

fn primitive(rng: &mut impl Rng) -> PrimitiveType {
    *PrimitiveType::ALL.choose(rng).unwrap()
}

fn upper(rng: &mut impl Rng) -> UpperBound {
    if rng.gen_bool(0.5) {
        UpperBound::Unbounded
    } else {
        UpperBound::Bounded(rng.gen_range(1..4))
    }
}

fn reference(rng: &mut impl Rng, fresh: &mut Fresh, target: String, with_ids: bool) -> ReferenceDef {
    let upper_bound = upper(rng);
    let max = match upper_bound {
        UpperBound::Bounded(n) => n,
        UpperBound::Unbounded => 2,
    };
    ReferenceDef {
        id: with_ids.then(|| fresh.id("r")),
        name: fresh.feature(),
        target,
        containment: rng.gen_bool(0.3),
        lower_bound: rng.gen_range(0..=max),
        upper_bound,
    }
}

/// A valid metamodel with `classes` classes. Supertypes only point to
/// earlier classes, so the hierarchy is acyclic.
pub fn metamodel(rng: &mut impl Rng, fresh: &mut Fresh, classes: usize, with_ids: bool) -> Metamodel {
    let names: Vec<String> = (0..classes).map(|_| fresh.class()).collect();
    let mut m = Metamodel::new("generated");
    for (i, name) in names.iter().enumerate() {
        let mut c = ClassDef::new(name.clone());
        c.id = with_ids.then(|| fresh.id("c"));
        c.is_abstract = rng.gen_bool(0.2);
        if i > 0 && rng.gen_bool(0.4) {
            c.super_types.push(names[rng.gen_range(0..i)].clone());
        }
        for _ in 0..rng.gen_range(0..3) {
            let mut a = AttributeDef::new(fresh.feature(), primitive(rng));
            a.id = with_ids.then(|| fresh.id("a"));
            c.attributes.push(a);
        }
        for _ in 0..rng.gen_range(0..2) {
            let target = names.choose(rng).unwrap().clone();
            c.references.push(reference(rng, fresh, target, with_ids));
        }
        m.classes.push(c);
    }
    m.check().expect("generated metamodel is valid");
    m
}

/// What an edit script did to one element, by element kind and id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Fate {
    Added,
    Deleted,
    Changed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Element {
    Class,
    Attribute,
    Reference,
}

#[derive(Default)]
struct Ledger {
    fates: BTreeMap<String, (Element, Fate)>,
    /// Edit kinds already applied per id, so no element is edited twice the
    /// same way.
    done: BTreeMap<String, Vec<&'static str>>,
}

impl Ledger {
    fn added(&mut self, kind: Element, id: &str) {
        self.fates.insert(id.to_string(), (kind, Fate::Added));
    }

    fn changed(&mut self, kind: Element, id: &str) {
        self.fates.entry(id.to_string()).or_insert((kind, Fate::Changed));
    }

    fn deleted(&mut self, kind: Element, id: &str) {
        match self.fates.get(id) {
            Some((_, Fate::Added)) => {
                self.fates.remove(id);
            }
            _ => {
                self.fates.insert(id.to_string(), (kind, Fate::Deleted));
            }
        }
    }

    fn once(&mut self, id: &str, edit: &'static str) -> bool {
        let done = self.done.entry(id.to_string()).or_default();
        if done.contains(&edit) {
            return false;
        }
        done.push(edit);
        true
    }
}

pub struct Evolved {
    pub old: Metamodel,
    pub new: Metamodel,
    pub script: Vec<EditOp>,
    /// Ground truth as sorted (element, fate, id) triples.
    pub labels: Vec<(Element, Fate, String)>,
}

fn id_of(id: &Option<String>) -> String {
    id.clone().expect("evolve requires ids")
}

/// Applies up to `len` random edits to `old` (which must carry ids).
pub fn evolve(rng: &mut impl Rng, fresh: &mut Fresh, old: &Metamodel, len: usize) -> Evolved {
    let mut m = old.clone();
    let mut ledger = Ledger::default();
    let mut script = Vec::new();
    let mut attempts = 0;
    while script.len() < len && attempts < len * 20 {
        attempts += 1;
        let Some((op, effects)) = propose(rng, fresh, &m, &mut ledger) else { continue };
        let Ok(next) = op.apply(&m) else { continue };
        for (kind, fate, id) in effects {
            match fate {
                Fate::Added => ledger.added(kind, &id),
                Fate::Changed => ledger.changed(kind, &id),
                Fate::Deleted => ledger.deleted(kind, &id),
            }
        }
        m = next;
        script.push(op);
    }
    let labels = ledger.fates.into_iter().map(|(id, (k, f))| (k, f, id)).collect::<Vec<_>>();
    let mut labels = labels;
    labels.sort();
    Evolved { old: old.clone(), new: m, script, labels }
}

type Effects = Vec<(Element, Fate, String)>;

fn propose(rng: &mut impl Rng, fresh: &mut Fresh, m: &Metamodel, ledger: &mut Ledger) -> Option<(EditOp, Effects)> {
    let class = m.classes.choose(rng).cloned();
    let choice = rng.gen_range(0..12);
    if class.is_none() && choice != 0 {
        return None;
    }
    let pick_feature = |rng: &mut _, c: &ClassDef| -> Option<(Element, String, String)> {
        let mut all: Vec<(Element, String, String)> = c
            .attributes
            .iter()
            .map(|a| (Element::Attribute, a.name.clone(), id_of(&a.id)))
            .chain(c.references.iter().map(|r| (Element::Reference, r.name.clone(), id_of(&r.id))))
            .collect();
        all.shuffle(rng);
        all.pop()
    };
    Some(match choice {
        0 => {
            let id = fresh.id("c");
            let super_types = match &class {
                Some(s) if rng.gen_bool(0.5) => vec![s.name.clone()],
                _ => Vec::new(),
            };
            let op = EditOp::AddClass {
                name: fresh.class(),
                is_abstract: rng.gen_bool(0.3),
                super_types,
                id: Some(id.clone()),
            };
            (op, vec![(Element::Class, Fate::Added, id)])
        }
        1 => {
            let c = class?;
            let mut effects = vec![(Element::Class, Fate::Deleted, id_of(&c.id))];
            for a in &c.attributes {
                effects.push((Element::Attribute, Fate::Deleted, id_of(&a.id)));
            }
            for other in &m.classes {
                for r in &other.references {
                    if other.name == c.name || r.target == c.name {
                        effects.push((Element::Reference, Fate::Deleted, id_of(&r.id)));
                    }
                }
            }
            (EditOp::DeleteClass { name: c.name }, effects)
        }
        2 => {
            let c = class?;
            let id = id_of(&c.id);
            if !ledger.once(&id, "rename") {
                return None;
            }
            (EditOp::RenameClass { from: c.name, to: fresh.class() }, vec![(Element::Class, Fate::Changed, id)])
        }
        3 => {
            let c = class?;
            let id = id_of(&c.id);
            if !ledger.once(&id, "abstract") {
                return None;
            }
            let op = EditOp::SetAbstract { class: c.name, value: !c.is_abstract };
            (op, vec![(Element::Class, Fate::Changed, id)])
        }
        4 => {
            let c = class?;
            let s = m.classes.choose(rng)?;
            if s.name == c.name || c.super_types.contains(&s.name) {
                return None;
            }
            let op = EditOp::AddSuperType { class: c.name, super_type: s.name.clone() };
            (op, vec![(Element::Class, Fate::Changed, id_of(&c.id))])
        }
        5 => {
            let c = class?;
            let id = fresh.id("a");
            let op = EditOp::AddAttribute {
                owner: c.name,
                name: fresh.feature(),
                type_name: primitive(rng),
                id: Some(id.clone()),
            };
            (op, vec![(Element::Attribute, Fate::Added, id)])
        }
        6 => {
            let c = class?;
            let target = m.classes.choose(rng)?.name.clone();
            let r = reference(rng, fresh, target, true);
            let id = id_of(&r.id);
            let op = EditOp::AddReference {
                owner: c.name,
                name: r.name,
                target: r.target,
                containment: r.containment,
                lower_bound: r.lower_bound,
                upper_bound: r.upper_bound,
                id: Some(id.clone()),
            };
            (op, vec![(Element::Reference, Fate::Added, id)])
        }
        7 => {
            let c = class?;
            let (kind, name, id) = pick_feature(rng, &c)?;
            (EditOp::DeleteFeature { owner: c.name, name }, vec![(kind, Fate::Deleted, id)])
        }
        8 => {
            let c = class?;
            let (kind, name, id) = pick_feature(rng, &c)?;
            if !ledger.once(&id, "rename") {
                return None;
            }
            let op = EditOp::RenameFeature { owner: c.name, from: name, to: fresh.feature() };
            (op, vec![(kind, Fate::Changed, id)])
        }
        9 => {
            let c = class?;
            let (kind, name, id) = pick_feature(rng, &c)?;
            let to = m.classes.choose(rng)?;
            if to.name == c.name || !ledger.once(&id, "move") {
                return None;
            }
            let op = EditOp::MoveFeature { from: c.name, to: to.name.clone(), name };
            (op, vec![(kind, Fate::Changed, id)])
        }
        10 => {
            let c = class?;
            let a = c.attributes.choose(rng)?;
            let id = id_of(&a.id);
            let type_name =
                **PrimitiveType::ALL.iter().filter(|t| **t != a.type_name).collect::<Vec<_>>().choose(rng)?;
            if !ledger.once(&id, "retype") {
                return None;
            }
            let op = EditOp::ChangeAttributeType { owner: c.name.clone(), name: a.name.clone(), type_name };
            (op, vec![(Element::Attribute, Fate::Changed, id)])
        }
        _ => {
            let c = class?;
            let r = c.references.choose(rng)?;
            let target = m.classes.choose(rng)?;
            let id = id_of(&r.id);
            if target.name == r.target || !ledger.once(&id, "retarget") {
                return None;
            }
            let op =
                EditOp::RetargetReference { owner: c.name.clone(), name: r.name.clone(), target: target.name.clone() };
            (op, vec![(Element::Reference, Fate::Changed, id)])
        }
    })
}

/// A complete, pristine editor for `domain`: one tool, node, label and
/// node mapping per concrete class, one label mapping per attribute, and
/// the generator configuration projected from the domain. The first class
/// with a containment reference serves as the canvas.
pub fn editor_for(domain: &Metamodel) -> EditorModelSet {
    let mut graph = GraphModel::default();
    let mut tools = Vec::new();
    let mut mapping = MappingModel::default();
    let canvas = domain.classes.iter().find(|c| c.references.iter().any(|r| r.containment));
    for c in domain.classes.iter().filter(|c| !c.is_abstract && Some(*c) != canvas) {
        let Some((owner, containment)) = domain
            .classes
            .iter()
            .flat_map(|o| o.references.iter().map(move |r| (o, r)))
            .find(|(_, r)| r.containment && (r.target == c.name || domain.is_ancestor(&r.target, &c.name)))
        else {
            continue;
        };
        let figure = format!("{}Figure", c.name);
        graph.figures.push(FigureDef { name: figure.clone(), kind: FigureKind::Rectangle });
        graph.nodes.push(CanvasElement { name: c.name.clone(), figure });
        tools.push(CreationTool::new(c.name.clone(), format!("Create new {}", c.name)));
        let mut label_mappings = Vec::new();
        for (attr_owner, a) in domain.effective_attributes(&c.name) {
            let label = format!("{}{}Label", c.name, a.name);
            let figure = format!("{label}Figure");
            graph.figures.push(FigureDef { name: figure.clone(), kind: FigureKind::Label });
            graph.diagram_labels.push(CanvasElement { name: label.clone(), figure });
            label_mappings.push(FeatureLabelMapping {
                features: vec![FeatureRef::new(attr_owner, a.name.clone(), a.type_name.as_str())],
                diagram_label: label,
            });
        }
        mapping.top_node_references.push(TopNodeReference {
            containment_feature: FeatureRef::new(
                owner.name.clone(),
                containment.name.clone(),
                containment.target.clone(),
            ),
            owned_child: NodeMapping {
                domain_meta_element: c.name.clone(),
                tool: c.name.clone(),
                diagram_node: c.name.clone(),
                label_mappings,
            },
        });
    }
    EditorModelSet {
        domain: domain.clone(),
        graph,
        tooling: ToolingModel { palette: vec![ToolGroup { name: "Nodes".into(), tools }] },
        mapping,
        emfgen: EmfGenModel::for_metamodel("org.example.generated", domain),
    }
}
