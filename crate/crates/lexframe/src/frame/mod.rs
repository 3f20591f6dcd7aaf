//! The frame system shared by the three knowledge-base partitions.
//!
//! Units are frames: a kind, SUBCLASS.OF / MEMBER.OF links, and named slots
//! whose values carry facets. Slot behaviour (inheritance role, inverse,
//! attribute class) comes from per-relation slot definitions. Taxonomic
//! relations are backed by the subclass hierarchy itself, so asserting
//! HYPERONYME adds a parent link and inheritance falls out of the hierarchy.

pub mod listing;
pub mod snapshot;

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use listing::{render_frame, ListingView};
pub use snapshot::{export_snapshot, import_snapshot, SnapshotError};

/// Identifier of a unit: a rendered concept reference for concepts, the bare
/// headword for entries, the class name for built-in classes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitId(pub String);

impl UnitId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for UnitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for UnitId {
    fn from(s: &str) -> Self {
        UnitId(s.to_string())
    }
}

impl From<String> for UnitId {
    fn from(s: String) -> Self {
        UnitId(s)
    }
}

impl Borrow<str> for UnitId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitKind {
    KbClass,
    Concept,
    PhrasalConcept,
    Entry,
    Reference,
}

impl UnitKind {
    /// Conceptual units live in the thesaurus network; classes and entries
    /// do not.
    pub fn is_conceptual(self) -> bool {
        matches!(
            self,
            UnitKind::Concept | UnitKind::PhrasalConcept | UnitKind::Reference
        )
    }
}

/// A slot value: a pointer to another unit, free text, or a number.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    Unit(UnitId),
    Text(String),
    Number(f64),
}

impl Value {
    pub fn as_unit(&self) -> Option<&UnitId> {
        match self {
            Value::Unit(id) => Some(id),
            _ => None,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Unit(a), Value::Unit(b)) => a == b,
            (Value::Text(a), Value::Text(b)) => a == b,
            (Value::Number(a), Value::Number(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl Eq for Value {}

/// Facet values: enumerated text, certainty numbers, or name lists such as
/// RELATIONNELS-CORRESPONDANTS.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FacetValue {
    Number(f64),
    Text(String),
    List(Vec<String>),
}

impl PartialEq for FacetValue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FacetValue::Text(a), FacetValue::Text(b)) => a == b,
            (FacetValue::Number(a), FacetValue::Number(b)) => a.to_bits() == b.to_bits(),
            (FacetValue::List(a), FacetValue::List(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for FacetValue {}

pub const FACET_CLASSE_ATTRIBUT: &str = "CLASSE-ATTRIBUT";
pub const FACET_CORRESPONDENTS: &str = "RELATIONNELS-CORRESPONDANTS";
pub const FACET_INVERSES: &str = "INVERSES-CORRESPONDANTS";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotValue {
    pub value: Value,
    /// Ordered facet table; order is part of the canonical form.
    pub facets: Vec<(String, FacetValue)>,
}

impl SlotValue {
    pub fn facet(&self, name: &str) -> Option<&FacetValue> {
        self.facets.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn facet_number(&self, name: &str) -> Option<f64> {
        match self.facet(name) {
            Some(FacetValue::Number(x)) => Some(*x),
            _ => None,
        }
    }

    pub fn correspondents(&self) -> Option<&[String]> {
        match self.facet(FACET_CORRESPONDENTS) {
            Some(FacetValue::List(names)) => Some(names),
            _ => None,
        }
    }
}

/// Attribute classes: which level of the representation a slot belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlotLevel {
    GeneralInfo,
    Definitory,
    Syntagmatic,
    Relational,
}

impl SlotLevel {
    pub fn classe_attribut(self) -> &'static str {
        match self {
            SlotLevel::GeneralInfo => "INFO-GENERALE",
            SlotLevel::Definitory => "DEFINITOIRES",
            SlotLevel::Syntagmatic => "SYNTAGMATIQUES",
            SlotLevel::Relational => "RELATIONNELS",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InheritanceRole {
    /// Values are the union of local values and every hypernym's values.
    Union,
    /// Values never flow down the taxonomy.
    Inhibit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueKind {
    UnitRef,
    Text,
    Literal,
}

/// Orientation of a taxonomy-backed slot: whether its values read off the
/// parent links or the child links of the subclass hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaxonomyOrientation {
    Up,
    Down,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotDefinition {
    pub name: String,
    pub level: SlotLevel,
    #[serde(default)]
    pub inverse: Option<String>,
    pub role: InheritanceRole,
    pub value_kind: ValueKind,
    /// Default relational correspondents: (relation, default certainty).
    #[serde(default)]
    pub correspondents: Vec<(String, Option<f64>)>,
    /// Present on HYPERONYME/HYPONYME: values live in the class hierarchy.
    #[serde(default)]
    pub taxonomy: Option<TaxonomyOrientation>,
    /// Composition triples (R1 R2 R3) are stored on R3's definition.
    #[serde(default)]
    pub composition_triples: Vec<(String, String)>,
}

impl SlotDefinition {
    pub fn new(name: &str, level: SlotLevel, role: InheritanceRole, value_kind: ValueKind) -> Self {
        SlotDefinition {
            name: name.to_string(),
            level,
            inverse: None,
            role,
            value_kind,
            correspondents: Vec::new(),
            taxonomy: None,
            composition_triples: Vec::new(),
        }
    }

    pub fn with_inverse(mut self, inverse: &str) -> Self {
        self.inverse = Some(inverse.to_string());
        self
    }

    pub fn with_correspondents(mut self, correspondents: Vec<(String, Option<f64>)>) -> Self {
        self.correspondents = correspondents;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Unit {
    pub id: UnitId,
    pub kind: UnitKind,
    /// SUBCLASS.OF links, in insertion order, no duplicates.
    pub parents: Vec<UnitId>,
    /// MEMBER.OF links, in insertion order.
    pub memberships: Vec<UnitId>,
    /// Slot table; slot order and value order are insertion order.
    pub slots: IndexMap<String, Vec<SlotValue>>,
}

impl Unit {
    pub fn slot(&self, name: &str) -> &[SlotValue] {
        self.slots.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    /// First text value of a slot, if any.
    pub fn text_value(&self, name: &str) -> Option<&str> {
        self.slot(name).iter().find_map(|sv| match &sv.value {
            Value::Text(t) => Some(t.as_str()),
            _ => None,
        })
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum FrameError {
    #[error("unknown unit `{0}`")]
    UnknownUnit(UnitId),
    #[error("duplicate unit `{0}`")]
    DuplicateUnit(UnitId),
    #[error("unknown slot `{0}`")]
    UnknownSlot(String),
    #[error("slot `{0}` is already defined")]
    DuplicateSlot(String),
    #[error("inverse conflict: `{slot}` declares inverse `{inverse}`, which is paired with `{existing}`")]
    InverseConflict {
        slot: String,
        inverse: String,
        existing: String,
    },
    #[error("adding `{parent}` as a parent of `{unit}` would create a cycle")]
    Cycle { unit: UnitId, parent: UnitId },
    #[error("value for slot `{slot}` must be a {expected}")]
    ValueKindMismatch {
        slot: String,
        expected: &'static str,
    },
    #[error("knowledge base is frozen; mutation rejected")]
    Frozen,
    #[error("membership target `{0}` is not a class")]
    NotAClass(UnitId),
    #[error("phrasal concept `{0}` must have exactly one concept head among its parents")]
    PhrasalHead(UnitId),
    #[error("correspondents are only allowed on definitory or syntagmatic slots: `{0}`")]
    CorrespondentsOnRelational(String),
}

pub type FrameResult<T> = Result<T, FrameError>;

/// Built-in class names. The spellings used in frame listings come from the
/// thesaurus itself (NOMS, NOMINALES, ENTITES, ...); classes that only ever
/// appear in the meta level keep their usual names.
pub mod classes {
    pub const ROOT: &str = "LKB-STRUCTURES";
    pub const ENTRIES: &str = "ENTRIES";
    pub const DEFINITIONS: &str = "DEFINITIONS";
    pub const REFERENCES: &str = "REFERENCES";
    pub const CONCEPTS: &str = "CONCEPTS";
    pub const TYPE_CONCEPTS: &str = "TYPE-CONCEPTS";
    pub const ENTITES: &str = "ENTITES";
    pub const ACTIONS_EVENTS: &str = "ACTIONS/EVENTS";
    pub const QUALITIES: &str = "QUALITIES";
    pub const STATES: &str = "STATES";
    pub const PHRASAL_CONCEPTS: &str = "PHRASAL-CONCEPTS";
    pub const NOMINALES: &str = "NOMINALES";
    pub const VERBALES: &str = "VERBALES";
    pub const ADJECTIVALES: &str = "ADJECTIVALES";
    pub const ADVERBIALES: &str = "ADVERBIALES";
    pub const AMBIGUOUS_CONCEPTS: &str = "AMBIGUOUS-CONCEPTS";
    pub const HOMOGRAPHE: &str = "HOMOGRAPHE";
    pub const SENSE: &str = "SENSE";
    pub const COMPLEX: &str = "COMPLEX";
    pub const NOMS: &str = "NOMS";
    pub const VERBES: &str = "VERBES";
    pub const ADJECTIFS: &str = "ADJECTIFS";
    pub const ADVERBES: &str = "ADVERBES";

    pub const AMBIGUITY_CLASSES: [&str; 3] = [HOMOGRAPHE, SENSE, COMPLEX];

    /// (class, parent) pairs in creation order.
    pub const TREE: [(&str, Option<&str>); 23] = [
        (ROOT, None),
        (ENTRIES, Some(ROOT)),
        (DEFINITIONS, Some(ROOT)),
        (NOMS, Some(DEFINITIONS)),
        (VERBES, Some(DEFINITIONS)),
        (ADJECTIFS, Some(DEFINITIONS)),
        (ADVERBES, Some(DEFINITIONS)),
        (REFERENCES, Some(ROOT)),
        (CONCEPTS, Some(ROOT)),
        (TYPE_CONCEPTS, Some(CONCEPTS)),
        (ENTITES, Some(TYPE_CONCEPTS)),
        (ACTIONS_EVENTS, Some(TYPE_CONCEPTS)),
        (QUALITIES, Some(TYPE_CONCEPTS)),
        (STATES, Some(TYPE_CONCEPTS)),
        (PHRASAL_CONCEPTS, Some(CONCEPTS)),
        (NOMINALES, Some(PHRASAL_CONCEPTS)),
        (VERBALES, Some(PHRASAL_CONCEPTS)),
        (ADJECTIVALES, Some(PHRASAL_CONCEPTS)),
        (ADVERBIALES, Some(PHRASAL_CONCEPTS)),
        (AMBIGUOUS_CONCEPTS, Some(CONCEPTS)),
        (HOMOGRAPHE, Some(AMBIGUOUS_CONCEPTS)),
        (SENSE, Some(AMBIGUOUS_CONCEPTS)),
        (COMPLEX, Some(AMBIGUOUS_CONCEPTS)),
    ];
}

/// Relation names used by the dictionary-linkage layer. They are maintained
/// like any other slot pair but left out of thesaurus frame listings.
pub const SLOT_SENS: &str = "SENS";
pub const SLOT_MOTS_ENTREE: &str = "MOTS-ENTREE";

#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    units: IndexMap<UnitId, Unit>,
    slot_definitions: IndexMap<String, SlotDefinition>,
    /// Reverse index of `parents`, kept in child-insertion order.
    children: BTreeMap<UnitId, Vec<UnitId>>,
    frozen: bool,
}

impl KnowledgeBase {
    /// An empty knowledge base holding only the built-in class units.
    pub fn new() -> Self {
        let mut kb = KnowledgeBase::default();
        for &(name, parent) in classes::TREE.iter() {
            let parents: Vec<UnitId> = parent.map(UnitId::from).into_iter().collect();
            kb.create_unit(UnitId::from(name), UnitKind::KbClass, parents, Vec::new())
                .expect("built-in class tree is well-formed");
        }
        kb
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    /// Freeze the base: every later mutation fails with `FrameError::Frozen`.
    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn units(&self) -> impl Iterator<Item = &Unit> {
        self.units.values()
    }

    /// Unit ids in lexicographic order, for passes that must not depend on
    /// creation order.
    pub fn unit_ids_sorted(&self) -> Vec<UnitId> {
        let mut ids: Vec<UnitId> = self.units.keys().cloned().collect();
        ids.sort();
        ids
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.units.contains_key(id)
    }

    pub fn unit(&self, id: &str) -> FrameResult<&Unit> {
        self.units
            .get(id)
            .ok_or_else(|| FrameError::UnknownUnit(UnitId::from(id)))
    }

    pub fn get_unit(&self, id: &str) -> Option<&Unit> {
        self.units.get(id)
    }

    pub fn slot_definition(&self, name: &str) -> FrameResult<&SlotDefinition> {
        self.slot_definitions
            .get(name)
            .ok_or_else(|| FrameError::UnknownSlot(name.to_string()))
    }

    pub fn slot_definitions(&self) -> impl Iterator<Item = &SlotDefinition> {
        self.slot_definitions.values()
    }

    pub fn has_slot(&self, name: &str) -> bool {
        self.slot_definitions.contains_key(name)
    }

    /// Attach a composition triple (r1 r2 r3) to r3's slot definition.
    /// Duplicate declarations are ignored.
    pub fn add_composition_triple(&mut self, r1: &str, r2: &str, r3: &str) -> FrameResult<bool> {
        if self.frozen {
            return Err(FrameError::Frozen);
        }
        for name in [r1, r2, r3] {
            if !self.slot_definitions.contains_key(name) {
                return Err(FrameError::UnknownSlot(name.to_string()));
            }
        }
        let def = self.slot_definitions.get_mut(r3).expect("checked above");
        let pair = (r1.to_string(), r2.to_string());
        if def.composition_triples.contains(&pair) {
            return Ok(false);
        }
        def.composition_triples.push(pair);
        Ok(true)
    }

    /// Register a relation. If it names an inverse that is not yet defined,
    /// the reverse definition is created with mirrored inverse and the same
    /// level; the mirror inherits the INHIBIT role unless self-paired.
    pub fn define_slot(&mut self, def: SlotDefinition) -> FrameResult<()> {
        if self.frozen {
            return Err(FrameError::Frozen);
        }
        if self.slot_definitions.contains_key(&def.name) {
            return Err(FrameError::DuplicateSlot(def.name));
        }
        if !def.correspondents.is_empty()
            && !matches!(def.level, SlotLevel::Definitory | SlotLevel::Syntagmatic)
        {
            return Err(FrameError::CorrespondentsOnRelational(def.name));
        }
        if let Some(inverse) = def.inverse.clone() {
            if let Some(existing) = self.slot_definitions.get(&inverse) {
                match &existing.inverse {
                    Some(back) if back == &def.name => {}
                    Some(back) => {
                        return Err(FrameError::InverseConflict {
                            slot: def.name,
                            inverse,
                            existing: back.clone(),
                        })
                    }
                    None => {
                        return Err(FrameError::InverseConflict {
                            slot: def.name,
                            inverse: inverse.clone(),
                            existing: inverse,
                        })
                    }
                }
            } else if inverse != def.name {
                let mirror = SlotDefinition {
                    name: inverse.clone(),
                    level: def.level,
                    inverse: Some(def.name.clone()),
                    role: InheritanceRole::Inhibit,
                    value_kind: ValueKind::UnitRef,
                    correspondents: Vec::new(),
                    taxonomy: def.taxonomy.map(|t| match t {
                        TaxonomyOrientation::Up => TaxonomyOrientation::Down,
                        TaxonomyOrientation::Down => TaxonomyOrientation::Up,
                    }),
                    composition_triples: Vec::new(),
                };
                self.slot_definitions.insert(inverse, mirror);
            }
        }
        self.slot_definitions.insert(def.name.clone(), def);
        Ok(())
    }

    pub fn create_unit(
        &mut self,
        id: UnitId,
        kind: UnitKind,
        parents: Vec<UnitId>,
        memberships: Vec<UnitId>,
    ) -> FrameResult<&Unit> {
        if self.frozen {
            return Err(FrameError::Frozen);
        }
        if self.units.contains_key(&id) {
            return Err(FrameError::DuplicateUnit(id));
        }
        let mut seen = BTreeSet::new();
        for parent in &parents {
            if parent == &id {
                return Err(FrameError::Cycle {
                    unit: id.clone(),
                    parent: parent.clone(),
                });
            }
            if !self.units.contains_key(parent) {
                return Err(FrameError::UnknownUnit(parent.clone()));
            }
            if !seen.insert(parent.clone()) {
                continue;
            }
        }
        for class in &memberships {
            let target = self
                .units
                .get(class)
                .ok_or_else(|| FrameError::UnknownUnit(class.clone()))?;
            if target.kind != UnitKind::KbClass {
                return Err(FrameError::NotAClass(class.clone()));
            }
        }
        if kind == UnitKind::PhrasalConcept {
            let heads = parents
                .iter()
                .filter(|p| {
                    self.units
                        .get(*p)
                        .map(|u| u.kind.is_conceptual())
                        .unwrap_or(false)
                })
                .count();
            if heads != 1 {
                return Err(FrameError::PhrasalHead(id));
            }
        }
        let mut dedup_parents = Vec::new();
        for p in parents {
            if !dedup_parents.contains(&p) {
                dedup_parents.push(p);
            }
        }
        for parent in &dedup_parents {
            self.children
                .entry(parent.clone())
                .or_default()
                .push(id.clone());
        }
        let unit = Unit {
            id: id.clone(),
            kind,
            parents: dedup_parents,
            memberships,
            slots: IndexMap::new(),
        };
        self.units.insert(id.clone(), unit);
        Ok(self.units.get(&id).unwrap())
    }

    pub fn add_membership(&mut self, unit: &str, class: &str) -> FrameResult<bool> {
        if self.frozen {
            return Err(FrameError::Frozen);
        }
        let target = self
            .units
            .get(class)
            .ok_or_else(|| FrameError::UnknownUnit(UnitId::from(class)))?;
        if target.kind != UnitKind::KbClass {
            return Err(FrameError::NotAClass(UnitId::from(class)));
        }
        let class_id = UnitId::from(class);
        let u = self
            .units
            .get_mut(unit)
            .ok_or_else(|| FrameError::UnknownUnit(UnitId::from(unit)))?;
        if u.memberships.contains(&class_id) {
            return Ok(false);
        }
        u.memberships.push(class_id);
        Ok(true)
    }

    /// Add a SUBCLASS.OF link, rejecting cycles atomically.
    pub fn add_parent(&mut self, unit: &str, parent: &str) -> FrameResult<bool> {
        if self.frozen {
            return Err(FrameError::Frozen);
        }
        if !self.units.contains_key(unit) {
            return Err(FrameError::UnknownUnit(UnitId::from(unit)));
        }
        if !self.units.contains_key(parent) {
            return Err(FrameError::UnknownUnit(UnitId::from(parent)));
        }
        if self
            .units
            .get(unit)
            .unwrap()
            .parents
            .iter()
            .any(|p| p.as_str() == parent)
        {
            return Ok(false);
        }
        if unit == parent || self.ancestors(parent)?.iter().any(|a| a.as_str() == unit) {
            return Err(FrameError::Cycle {
                unit: UnitId::from(unit),
                parent: UnitId::from(parent),
            });
        }
        let parent_id = UnitId::from(parent);
        self.units
            .get_mut(unit)
            .unwrap()
            .parents
            .push(parent_id.clone());
        self.children
            .entry(parent_id)
            .or_default()
            .push(UnitId::from(unit));
        Ok(true)
    }

    fn remove_parent(&mut self, unit: &str, parent: &str) -> FrameResult<bool> {
        if self.frozen {
            return Err(FrameError::Frozen);
        }
        let u = self
            .units
            .get_mut(unit)
            .ok_or_else(|| FrameError::UnknownUnit(UnitId::from(unit)))?;
        let before = u.parents.len();
        u.parents.retain(|p| p.as_str() != parent);
        let removed = u.parents.len() != before;
        if removed {
            if let Some(kids) = self.children.get_mut(parent) {
                kids.retain(|c| c.as_str() != unit);
            }
        }
        Ok(removed)
    }

    /// Children in the subclass hierarchy, in insertion order.
    pub fn children_of(&self, unit: &str) -> &[UnitId] {
        self.children.get(unit).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Assert a slot value with the standard facets only.
    pub fn add_value(&mut self, unit: &str, slot: &str, value: Value) -> FrameResult<bool> {
        self.add_value_with_facets(unit, slot, value, Vec::new())
    }

    /// Assert a slot value. Stamps CLASSE-ATTRIBUT from the slot level,
    /// appends the caller's facets, and closes the relation in the other
    /// direction when the slot has an inverse. Duplicate values are kept
    /// once; re-assertion is a no-op.
    pub fn add_value_with_facets(
        &mut self,
        unit: &str,
        slot: &str,
        value: Value,
        facets: Vec<(String, FacetValue)>,
    ) -> FrameResult<bool> {
        if self.frozen {
            return Err(FrameError::Frozen);
        }
        if !self.units.contains_key(unit) {
            return Err(FrameError::UnknownUnit(UnitId::from(unit)));
        }
        let def = self
            .slot_definitions
            .get(slot)
            .ok_or_else(|| FrameError::UnknownSlot(slot.to_string()))?
            .clone();

        if let Some(orientation) = def.taxonomy {
            let target = value
                .as_unit()
                .ok_or(FrameError::ValueKindMismatch {
                    slot: slot.to_string(),
                    expected: "unit reference",
                })?
                .clone();
            return match orientation {
                TaxonomyOrientation::Up => self.add_parent(unit, target.as_str()),
                TaxonomyOrientation::Down => self.add_parent(target.as_str(), unit),
            };
        }

        match (def.value_kind, &value) {
            (ValueKind::UnitRef, Value::Unit(target)) => {
                if !self.units.contains_key(target) {
                    return Err(FrameError::UnknownUnit(target.clone()));
                }
            }
            (ValueKind::UnitRef, _) => {
                return Err(FrameError::ValueKindMismatch {
                    slot: slot.to_string(),
                    expected: "unit reference",
                })
            }
            (ValueKind::Text, Value::Text(_)) => {}
            (ValueKind::Text, _) => {
                return Err(FrameError::ValueKindMismatch {
                    slot: slot.to_string(),
                    expected: "text",
                })
            }
            (ValueKind::Literal, Value::Unit(_)) => {
                return Err(FrameError::ValueKindMismatch {
                    slot: slot.to_string(),
                    expected: "literal",
                })
            }
            (ValueKind::Literal, _) => {}
        }

        let added = self.store_value(unit, &def, value.clone(), facets);
        if added {
            if let (Some(inverse), Value::Unit(target)) = (&def.inverse, &value) {
                let inv_def = self
                    .slot_definitions
                    .get(inverse)
                    .ok_or_else(|| FrameError::UnknownSlot(inverse.clone()))?
                    .clone();
                self.store_value(
                    target.as_str(),
                    &inv_def,
                    Value::Unit(UnitId::from(unit)),
                    Vec::new(),
                );
            }
        }
        Ok(added)
    }

    fn store_value(
        &mut self,
        unit: &str,
        def: &SlotDefinition,
        value: Value,
        extra: Vec<(String, FacetValue)>,
    ) -> bool {
        let u = self.units.get_mut(unit).expect("caller checked unit");
        let values = u.slots.entry(def.name.clone()).or_default();
        if values.iter().any(|sv| sv.value == value) {
            return false;
        }
        let mut facets = Vec::with_capacity(extra.len() + 2);
        facets.push((
            FACET_CLASSE_ATTRIBUT.to_string(),
            FacetValue::Text(def.level.classe_attribut().to_string()),
        ));
        facets.extend(extra);
        if def.level == SlotLevel::Relational {
            if let Some(inverse) = &def.inverse {
                facets.push((
                    FACET_INVERSES.to_string(),
                    FacetValue::Text(inverse.clone()),
                ));
            }
        }
        values.push(SlotValue { value, facets });
        true
    }

    /// Remove a stored value and its inverse; used by ambiguity re-targeting.
    pub fn remove_value(&mut self, unit: &str, slot: &str, value: &Value) -> FrameResult<bool> {
        if self.frozen {
            return Err(FrameError::Frozen);
        }
        let def = self
            .slot_definitions
            .get(slot)
            .ok_or_else(|| FrameError::UnknownSlot(slot.to_string()))?
            .clone();
        if let Some(orientation) = def.taxonomy {
            let target = value.as_unit().ok_or(FrameError::ValueKindMismatch {
                slot: slot.to_string(),
                expected: "unit reference",
            })?;
            return match orientation {
                TaxonomyOrientation::Up => self.remove_parent(unit, target.as_str()),
                TaxonomyOrientation::Down => self.remove_parent(target.as_str(), unit),
            };
        }
        let u = self
            .units
            .get_mut(unit)
            .ok_or_else(|| FrameError::UnknownUnit(UnitId::from(unit)))?;
        let mut removed = false;
        if let Some(values) = u.slots.get_mut(slot) {
            let before = values.len();
            values.retain(|sv| &sv.value != value);
            removed = values.len() != before;
            if values.is_empty() {
                u.slots.shift_remove(slot);
            }
        }
        if removed {
            if let (Some(inverse), Value::Unit(target)) = (&def.inverse, value) {
                let target = target.clone();
                let back = Value::Unit(UnitId::from(unit));
                if let Some(t) = self.units.get_mut(target.as_str()) {
                    if let Some(values) = t.slots.get_mut(inverse.as_str()) {
                        values.retain(|sv| sv.value != back);
                        if values.is_empty() {
                            t.slots.shift_remove(inverse.as_str());
                        }
                    }
                }
            }
        }
        Ok(removed)
    }

    /// Drop a unit entirely. The caller is responsible for having removed or
    /// re-targeted incoming references first.
    pub fn remove_unit(&mut self, unit: &str) -> FrameResult<()> {
        if self.frozen {
            return Err(FrameError::Frozen);
        }
        let u = self
            .units
            .get(unit)
            .ok_or_else(|| FrameError::UnknownUnit(UnitId::from(unit)))?
            .clone();
        for parent in &u.parents {
            if let Some(kids) = self.children.get_mut(parent) {
                kids.retain(|c| c.as_str() != unit);
            }
        }
        self.children.remove(unit);
        self.units.shift_remove(unit);
        Ok(())
    }

    /// Locally asserted values only. For taxonomy-backed slots the values
    /// are read off the hierarchy (conceptual parents or children).
    pub fn local_values(&self, unit: &str, slot: &str) -> FrameResult<Vec<SlotValue>> {
        let u = self.unit(unit)?;
        let def = self.slot_definition(slot)?;
        match def.taxonomy {
            // taxonomic relations hold between conceptual units only;
            // classes have subclasses, not hypernyms
            Some(_) if !u.kind.is_conceptual() => Ok(Vec::new()),
            Some(TaxonomyOrientation::Up) => Ok(self.conceptual_links(&u.parents, def)),
            Some(TaxonomyOrientation::Down) => {
                Ok(self.conceptual_links(self.children_of(unit), def))
            }
            None => Ok(u.slot(slot).to_vec()),
        }
    }

    fn conceptual_links(&self, ids: &[UnitId], def: &SlotDefinition) -> Vec<SlotValue> {
        ids.iter()
            .filter(|id| {
                self.units
                    .get(*id)
                    .map(|t| t.kind.is_conceptual())
                    .unwrap_or(false)
            })
            .map(|id| {
                let mut facets = vec![(
                    FACET_CLASSE_ATTRIBUT.to_string(),
                    FacetValue::Text(def.level.classe_attribut().to_string()),
                )];
                if let Some(inverse) = &def.inverse {
                    facets.push((
                        FACET_INVERSES.to_string(),
                        FacetValue::Text(inverse.clone()),
                    ));
                }
                SlotValue {
                    value: Value::Unit(id.clone()),
                    facets,
                }
            })
            .collect()
    }

    /// Values visible under the slot's inheritance role: local values plus,
    /// for UNION slots, every ancestor's local values in depth-first parent
    /// order, deduplicated.
    pub fn inherited_values(&self, unit: &str, slot: &str) -> FrameResult<Vec<SlotValue>> {
        let def = self.slot_definition(slot)?;
        let mut out = self.local_values(unit, slot)?;
        if def.role == InheritanceRole::Inhibit {
            return Ok(out);
        }
        for ancestor in self.ancestors(unit)? {
            for sv in self.local_values(ancestor.as_str(), slot)? {
                if !out.iter().any(|existing| existing.value == sv.value) {
                    out.push(sv);
                }
            }
        }
        Ok(out)
    }

    /// Transitive SUBCLASS.OF closure, pre-order depth-first, deduplicated.
    pub fn ancestors(&self, unit: &str) -> FrameResult<Vec<UnitId>> {
        let u = self.unit(unit)?;
        let mut out = Vec::new();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        seen.insert(u.id.as_str());
        let mut stack: Vec<&UnitId> = u.parents.iter().rev().collect();
        while let Some(next) = stack.pop() {
            if !seen.insert(next.as_str()) {
                continue;
            }
            out.push(next.clone());
            if let Some(parent_unit) = self.units.get(next) {
                for p in parent_unit.parents.iter().rev() {
                    stack.push(p);
                }
            }
        }
        Ok(out)
    }

    /// Conceptual ancestors only: the hypernym closure, excluding classes.
    pub fn hypernym_ancestors(&self, unit: &str) -> FrameResult<Vec<UnitId>> {
        Ok(self
            .ancestors(unit)?
            .into_iter()
            .filter(|id| {
                self.units
                    .get(id)
                    .map(|u| u.kind.is_conceptual())
                    .unwrap_or(false)
            })
            .collect())
    }

    /// True when `unit` has at least one conceptual (non-class) parent.
    pub fn has_hypernym(&self, unit: &str) -> bool {
        self.units
            .get(unit)
            .map(|u| {
                u.parents.iter().any(|p| {
                    self.units
                        .get(p)
                        .map(|t| t.kind.is_conceptual())
                        .unwrap_or(false)
                })
            })
            .unwrap_or(false)
    }

    /// Count of directed relational arcs: every value of a relational slot,
    /// taxonomy-backed pairs included in both directions.
    pub fn relational_arc_count(&self) -> usize {
        let relational: Vec<&SlotDefinition> = self
            .slot_definitions
            .values()
            .filter(|d| d.level == SlotLevel::Relational)
            .collect();
        let mut count = 0;
        for unit in self.units.values() {
            for def in &relational {
                count += self
                    .local_values(unit.id.as_str(), &def.name)
                    .map(|v| v.len())
                    .unwrap_or(0);
            }
        }
        count
    }

    /// Structural invariant check: inverse completeness, subclass acyclicity,
    /// phrasal-head rule, facet ranges, and link target existence.
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut problems = Vec::new();

        for unit in self.units.values() {
            for parent in &unit.parents {
                if !self.units.contains_key(parent) {
                    problems.push(format!(
                        "unit `{}` has missing parent `{}`",
                        unit.id, parent
                    ));
                }
            }
            for class in &unit.memberships {
                match self.units.get(class) {
                    None => {
                        problems.push(format!("unit `{}` has missing class `{}`", unit.id, class))
                    }
                    Some(c) if c.kind != UnitKind::KbClass => problems.push(format!(
                        "unit `{}` is member of non-class `{}`",
                        unit.id, class
                    )),
                    _ => {}
                }
            }
            if unit.kind == UnitKind::PhrasalConcept {
                let heads = unit
                    .parents
                    .iter()
                    .filter(|p| {
                        self.units
                            .get(*p)
                            .map(|u| u.kind.is_conceptual())
                            .unwrap_or(false)
                    })
                    .count();
                if heads != 1 {
                    problems.push(format!(
                        "phrasal `{}` has {} conceptual heads, expected exactly 1",
                        unit.id, heads
                    ));
                }
            }
            if self
                .ancestors(unit.id.as_str())
                .map(|a| a.iter().any(|x| x == &unit.id))
                .unwrap_or(false)
            {
                problems.push(format!("subclass cycle through `{}`", unit.id));
            }
            for (slot, values) in &unit.slots {
                let def = match self.slot_definitions.get(slot) {
                    Some(d) => d,
                    None => {
                        problems.push(format!("unit `{}` uses undefined slot `{}`", unit.id, slot));
                        continue;
                    }
                };
                let mut seen = Vec::new();
                for sv in values {
                    if seen.contains(&&sv.value) {
                        problems.push(format!(
                            "unit `{}` slot `{}` holds a duplicate value",
                            unit.id, slot
                        ));
                    }
                    seen.push(&sv.value);
                    for (name, fv) in &sv.facets {
                        if name == FACET_CLASSE_ATTRIBUT {
                            match fv {
                                FacetValue::Text(t)
                                    if matches!(
                                        t.as_str(),
                                        "INFO-GENERALE"
                                            | "DEFINITOIRES"
                                            | "SYNTAGMATIQUES"
                                            | "RELATIONNELS"
                                    ) => {}
                                _ => problems.push(format!(
                                    "unit `{}` slot `{}`: bad CLASSE-ATTRIBUT facet",
                                    unit.id, slot
                                )),
                            }
                        }
                        if let FacetValue::Number(x) = fv {
                            if !(0.0..=1.0).contains(x) {
                                problems.push(format!(
                                    "unit `{}` slot `{}`: certainty {} outside [0,1]",
                                    unit.id, slot, x
                                ));
                            }
                        }
                    }
                    if let Value::Unit(target) = &sv.value {
                        if !self.units.contains_key(target) {
                            problems.push(format!(
                                "unit `{}` slot `{}` points at missing unit `{}`",
                                unit.id, slot, target
                            ));
                            continue;
                        }
                        if let Some(inverse) = &def.inverse {
                            let ok = self
                                .units
                                .get(target)
                                .map(|t| {
                                    t.slot(inverse)
                                        .iter()
                                        .any(|back| back.value == Value::Unit(unit.id.clone()))
                                })
                                .unwrap_or(false);
                            if !ok {
                                problems.push(format!(
                                    "inverse incompleteness: ({}, {}, {}) lacks ({}, {}, {})",
                                    unit.id, slot, target, target, inverse, unit.id
                                ));
                            }
                        }
                    }
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems)
        }
    }
}
