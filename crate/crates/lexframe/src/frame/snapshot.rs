//! Canonical snapshot serialization.
//!
//! Snapshots are UTF-8 JSON with every object key sorted; slot and facet
//! order, which is part of the canonical form, is carried in arrays. Export
//! is byte-deterministic and `import(export(kb))` reproduces the base
//! structurally.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{KnowledgeBase, SlotDefinition, SlotValue, Unit, UnitId, UnitKind};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("snapshot is not valid UTF-8")]
    NotUtf8,
    #[error("snapshot parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported snapshot format version {0}")]
    BadVersion(u32),
    #[error("snapshot is structurally invalid: {0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
struct SnapshotDoc {
    format_version: u32,
    slot_definitions: BTreeMap<String, SlotDefinition>,
    units: BTreeMap<String, UnitDoc>,
}

#[derive(Serialize, Deserialize)]
struct UnitDoc {
    kind: UnitKind,
    parents: Vec<String>,
    memberships: Vec<String>,
    slots: Vec<SlotDoc>,
}

#[derive(Serialize, Deserialize)]
struct SlotDoc {
    slot: String,
    values: Vec<SlotValue>,
}

/// Serialize to canonical bytes. Keys are sorted by routing the document
/// through `serde_json::Value`, whose object representation is ordered.
pub fn export_snapshot(kb: &KnowledgeBase) -> Vec<u8> {
    let doc = SnapshotDoc {
        format_version: FORMAT_VERSION,
        slot_definitions: kb
            .slot_definitions()
            .map(|d| (d.name.clone(), d.clone()))
            .collect(),
        units: kb
            .units()
            .map(|u| {
                (
                    u.id.0.clone(),
                    UnitDoc {
                        kind: u.kind,
                        parents: u.parents.iter().map(|p| p.0.clone()).collect(),
                        memberships: u.memberships.iter().map(|m| m.0.clone()).collect(),
                        slots: u
                            .slots
                            .iter()
                            .map(|(slot, values)| SlotDoc {
                                slot: slot.clone(),
                                values: values.clone(),
                            })
                            .collect(),
                    },
                )
            })
            .collect(),
    };
    let value = serde_json::to_value(&doc).expect("snapshot document serializes");
    let mut bytes = serde_json::to_string_pretty(&value)
        .expect("snapshot document prints")
        .into_bytes();
    bytes.push(b'\n');
    bytes
}

pub fn import_snapshot(bytes: &[u8]) -> Result<KnowledgeBase, SnapshotError> {
    let text = std::str::from_utf8(bytes).map_err(|_| SnapshotError::NotUtf8)?;
    let doc: SnapshotDoc = serde_json::from_str(text).map_err(|e| SnapshotError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.format_version != FORMAT_VERSION {
        return Err(SnapshotError::BadVersion(doc.format_version));
    }

    let mut kb = KnowledgeBase::default();
    for (name, def) in doc.slot_definitions {
        if name != def.name {
            return Err(SnapshotError::Invalid(format!(
                "slot key `{name}` disagrees with definition name `{}`",
                def.name
            )));
        }
        kb.slot_definitions.insert(name, def);
    }
    for (id, unit_doc) in doc.units {
        let id = UnitId(id);
        let mut slots = indexmap::IndexMap::new();
        for slot_doc in unit_doc.slots {
            if slots
                .insert(slot_doc.slot.clone(), slot_doc.values)
                .is_some()
            {
                return Err(SnapshotError::Invalid(format!(
                    "unit `{id}` repeats slot `{}`",
                    slot_doc.slot
                )));
            }
        }
        let unit = Unit {
            id: id.clone(),
            kind: unit_doc.kind,
            parents: unit_doc.parents.into_iter().map(UnitId).collect(),
            memberships: unit_doc.memberships.into_iter().map(UnitId).collect(),
            slots,
        };
        kb.units.insert(id, unit);
    }
    // rebuild the child index from the parent links
    let pairs: Vec<(UnitId, UnitId)> = kb
        .units
        .values()
        .flat_map(|u| u.parents.iter().map(|p| (p.clone(), u.id.clone())))
        .collect();
    for (parent, child) in pairs {
        kb.children.entry(parent).or_default().push(child);
    }
    kb.validate()
        .map_err(|problems| SnapshotError::Invalid(problems.join("; ")))?;
    Ok(kb)
}

/// Deep structural equality, insensitive to unit/slot-definition insertion
/// order but sensitive to parent, membership, slot, value, and facet order.
pub fn structurally_equal(a: &KnowledgeBase, b: &KnowledgeBase) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let defs_a: BTreeMap<&str, &SlotDefinition> =
        a.slot_definitions().map(|d| (d.name.as_str(), d)).collect();
    let defs_b: BTreeMap<&str, &SlotDefinition> =
        b.slot_definitions().map(|d| (d.name.as_str(), d)).collect();
    if defs_a.len() != defs_b.len()
        || defs_a
            .iter()
            .any(|(k, v)| defs_b.get(k).map(|w| w != v).unwrap_or(true))
    {
        return false;
    }
    a.units()
        .all(|u| b.get_unit(u.id.as_str()).map(|v| u == v).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{classes, InheritanceRole, SlotLevel, Value, ValueKind};

    fn sample_kb() -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        kb.define_slot(
            SlotDefinition::new(
                "OBJECTIF",
                SlotLevel::Relational,
                InheritanceRole::Union,
                ValueKind::UnitRef,
            )
            .with_inverse("OBJECTIF+INV"),
        )
        .unwrap();
        kb.define_slot(SlotDefinition::new(
            "TEXTE-DEFINITION",
            SlotLevel::GeneralInfo,
            InheritanceRole::Inhibit,
            ValueKind::Text,
        ))
        .unwrap();
        kb.create_unit(
            UnitId::from("géranium I 1"),
            UnitKind::Concept,
            vec![UnitId::from(classes::ENTITES)],
            vec![UnitId::from(classes::NOMS)],
        )
        .unwrap();
        kb.create_unit(
            UnitId::from("ornement I 1"),
            UnitKind::Reference,
            vec![],
            vec![UnitId::from(classes::REFERENCES)],
        )
        .unwrap();
        kb.add_value(
            "géranium I 1",
            "TEXTE-DEFINITION",
            Value::Text("une plante d'ornement".into()),
        )
        .unwrap();
        kb.add_value(
            "géranium I 1",
            "OBJECTIF",
            Value::Unit(UnitId::from("ornement I 1")),
        )
        .unwrap();
        kb
    }

    #[test]
    fn export_is_deterministic() {
        let kb = sample_kb();
        assert_eq!(export_snapshot(&kb), export_snapshot(&kb));
    }

    #[test]
    fn round_trip_preserves_structure() {
        let kb = sample_kb();
        let bytes = export_snapshot(&kb);
        let back = import_snapshot(&bytes).unwrap();
        assert!(structurally_equal(&kb, &back));
        assert_eq!(export_snapshot(&back), bytes);
    }

    #[test]
    fn truncated_stream_is_a_parse_error() {
        let kb = sample_kb();
        let bytes = export_snapshot(&kb);
        let cut = &bytes[..bytes.len() / 2];
        match import_snapshot(cut) {
            Err(SnapshotError::Parse { line, .. }) => assert!(line >= 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn object_keys_are_sorted() {
        let kb = sample_kb();
        let text = String::from_utf8(export_snapshot(&kb)).unwrap();
        let fv = text.find("\"format_version\"").unwrap();
        let sd = text.find("\"slot_definitions\"").unwrap();
        let un = text.find("\"units\"").unwrap();
        assert!(fv < sd && sd < un);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        fn sorted(v: &serde_json::Value) -> bool {
            match v {
                serde_json::Value::Object(map) => {
                    let keys: Vec<&String> = map.keys().collect();
                    keys.windows(2).all(|w| w[0] < w[1]) && map.values().all(sorted)
                }
                serde_json::Value::Array(items) => items.iter().all(sorted),
                _ => true,
            }
        }
        assert!(sorted(&value));
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let kb = sample_kb();
        let text = String::from_utf8(export_snapshot(&kb)).unwrap();
        let bumped = text.replace("\"format_version\": 1", "\"format_version\": 9");
        match import_snapshot(bumped.as_bytes()) {
            Err(SnapshotError::BadVersion(9)) => {}
            other => panic!("expected version error, got {other:?}"),
        }
    }

    #[test]
    fn dangling_reference_is_rejected() {
        let kb = sample_kb();
        let text = String::from_utf8(export_snapshot(&kb)).unwrap();
        let broken = text.replace("\"ornement I 1\": {", "\"ornament x\": {");
        match import_snapshot(broken.as_bytes()) {
            Err(SnapshotError::Invalid(_)) => {}
            other => panic!("expected invalid error, got {other:?}"),
        }
    }
}
