//! Query commands over a frozen knowledge base.
//!
//! Every command is read-only and renders deterministically, both as
//! aligned text and as sorted-key JSON built from the same payload, so the
//! REPL and batch invocations cannot drift apart.

use serde::Serialize;
use thiserror::Error;

use crate::concept::ConceptRef;
use crate::defaults::{SLOT_GROUPE_CATEGORIEL, SLOT_TEXTE, SLOT_TEXTE_DEFINITION};
use crate::enrich::KbStats;
use crate::frame::{KnowledgeBase, SlotLevel, UnitId, UnitKind, Value, SLOT_SENS};
use crate::infer::{
    query_relation, resolve_relation_alias, InferError, Provenance, QueryOptions, RuleSet,
};

#[derive(Debug, Error)]
pub enum QueryError {
    #[error(transparent)]
    Frame(#[from] crate::frame::FrameError),
    #[error(transparent)]
    Infer(#[from] InferError),
    #[error("cannot resolve `{text}`{}", candidates_hint(.candidates))]
    UnresolvableRef {
        text: String,
        candidates: Vec<String>,
    },
    #[error("`{0}` is neither a relation nor an aliased concept")]
    UnknownRelation(String),
    #[error("hop count must be at least 1")]
    BadHops,
}

fn candidates_hint(candidates: &[String]) -> String {
    if candidates.is_empty() {
        String::new()
    } else {
        format!(" (candidates: {})", candidates.join(", "))
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QueryResult {
    Definitions {
        word: String,
        senses: Vec<SenseInfo>,
        suggestions: Vec<String>,
    },
    Relations {
        unit: String,
        relation: String,
        hits: Vec<RelationHit>,
    },
    Common {
        left: String,
        right: String,
        pairs: Vec<RelationPair>,
    },
    Diff {
        left: String,
        right: String,
        only_left: Vec<RelationPair>,
        only_right: Vec<RelationPair>,
    },
    Neighborhood {
        root: String,
        hops: u32,
        groups: Vec<NeighborGroup>,
    },
    Examples {
        concept: String,
        examples: Vec<ExampleHit>,
    },
    Stats(KbStats),
}

#[derive(Debug, Clone, Serialize)]
pub struct SenseInfo {
    pub id: String,
    pub pos: String,
    pub definition: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationHit {
    pub value: String,
    pub provenance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RelationPair {
    pub relation: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NeighborGroup {
    pub path: String,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleHit {
    pub texte: String,
    pub serves: String,
}

impl QueryResult {
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("query results serialize");
        serde_json::to_string_pretty(&value).expect("query results print")
    }

    pub fn to_text(&self) -> String {
        match self {
            QueryResult::Definitions {
                word,
                senses,
                suggestions,
            } => {
                let mut out = String::new();
                if senses.is_empty() {
                    out.push_str(&format!("{word}: no entry\n"));
                    if !suggestions.is_empty() {
                        out.push_str(&format!("suggestions: {}\n", suggestions.join(", ")));
                    }
                } else {
                    out.push_str(&format!("{word}\n"));
                    for s in senses {
                        out.push_str(&format!("  |{}|  {}  \"{}\"\n", s.id, s.pos, s.definition));
                    }
                }
                out
            }
            QueryResult::Relations {
                unit,
                relation,
                hits,
            } => {
                let mut out = format!("|{unit}| {relation}\n");
                if hits.is_empty() {
                    out.push_str("  (none)\n");
                }
                for h in hits {
                    match &h.trace {
                        Some(trace) => out
                            .push_str(&format!("  |{}|  ({}; {})\n", h.value, h.provenance, trace)),
                        None => out.push_str(&format!("  |{}|  ({})\n", h.value, h.provenance)),
                    }
                }
                out
            }
            QueryResult::Common { left, right, pairs } => {
                let mut out = format!("common |{left}| ~ |{right}|\n");
                if pairs.is_empty() {
                    out.push_str("  (none)\n");
                }
                for p in pairs {
                    out.push_str(&format!("  {} |{}|\n", p.relation, p.value));
                }
                out
            }
            QueryResult::Diff {
                left,
                right,
                only_left,
                only_right,
            } => {
                let mut out = format!("diff |{left}| ~ |{right}|\n");
                out.push_str(&format!("  only |{left}|:\n"));
                if only_left.is_empty() {
                    out.push_str("    (none)\n");
                }
                for p in only_left {
                    out.push_str(&format!("    {} |{}|\n", p.relation, p.value));
                }
                out.push_str(&format!("  only |{right}|:\n"));
                if only_right.is_empty() {
                    out.push_str("    (none)\n");
                }
                for p in only_right {
                    out.push_str(&format!("    {} |{}|\n", p.relation, p.value));
                }
                out
            }
            QueryResult::Neighborhood { root, hops, groups } => {
                let mut out = format!("|{root}| neighborhood ({hops} hops)\n");
                if groups.is_empty() {
                    out.push_str("  (empty)\n");
                }
                for g in groups {
                    let members: Vec<String> = g.members.iter().map(|m| format!("|{m}|")).collect();
                    out.push_str(&format!("  {}: {}\n", g.path, members.join(", ")));
                }
                out
            }
            QueryResult::Examples { concept, examples } => {
                let mut out = format!("examples of |{concept}|\n");
                if examples.is_empty() {
                    out.push_str("  (none)\n");
                }
                for e in examples {
                    out.push_str(&format!("  \"{}\" (serving |{}|)\n", e.texte, e.serves));
                }
                out
            }
            QueryResult::Stats(stats) => format!("{}\n", stats.to_text()),
        }
    }
}

/// Resolve a reference string to a unit: the canonical rendering must name
/// a unit, or a bare headword with exactly one sense resolves to it.
pub fn resolve_ref(kb: &KnowledgeBase, text: &str) -> Result<UnitId, QueryError> {
    let parsed = ConceptRef::parse(text).map_err(|_| QueryError::UnresolvableRef {
        text: text.to_string(),
        candidates: vec![],
    })?;
    let rendered = parsed.render();
    if kb.contains(&rendered) {
        return Ok(UnitId::from(rendered));
    }
    // an id that is not a concept reference (classes, odd spellings)
    if let Some(unit) = kb.get_unit(text) {
        if unit.kind != UnitKind::Entry {
            return Ok(unit.id.clone());
        }
    }
    // bare headword: resolve through the entry when unambiguous
    if let Some(entry) = kb.get_unit(&parsed.headword) {
        if entry.kind == UnitKind::Entry {
            let senses: Vec<String> = entry
                .slot(SLOT_SENS)
                .iter()
                .filter_map(|sv| sv.value.as_unit().map(|u| u.0.clone()))
                .collect();
            if senses.len() == 1 {
                return Ok(UnitId::from(senses[0].clone()));
            }
            return Err(QueryError::UnresolvableRef {
                text: text.to_string(),
                candidates: senses,
            });
        }
    }
    Err(QueryError::UnresolvableRef {
        text: text.to_string(),
        candidates: vec![],
    })
}

pub fn cmd_lookup(kb: &KnowledgeBase, word: &str) -> QueryResult {
    let senses = kb
        .get_unit(word)
        .filter(|u| u.kind == UnitKind::Entry)
        .map(|entry| {
            entry
                .slot(SLOT_SENS)
                .iter()
                .filter_map(|sv| sv.value.as_unit())
                .filter_map(|sense_id| {
                    let sense = kb.get_unit(sense_id.as_str())?;
                    Some(SenseInfo {
                        id: sense.id.0.clone(),
                        pos: sense
                            .text_value(SLOT_GROUPE_CATEGORIEL)
                            .unwrap_or("?")
                            .to_string(),
                        definition: sense
                            .text_value(SLOT_TEXTE_DEFINITION)
                            .unwrap_or("")
                            .to_string(),
                    })
                })
                .collect::<Vec<_>>()
        })
        .unwrap_or_default();

    let suggestions = if senses.is_empty() {
        let mut scored: Vec<(usize, String)> = kb
            .units()
            .filter(|u| u.kind == UnitKind::Entry)
            .map(|u| (common_prefix_len(word, u.id.as_str()), u.id.0.clone()))
            .filter(|(lcp, _)| *lcp >= 1)
            .collect();
        scored.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        scored.into_iter().take(5).map(|(_, w)| w).collect()
    } else {
        Vec::new()
    };
    QueryResult::Definitions {
        word: word.to_string(),
        senses,
        suggestions,
    }
}

fn common_prefix_len(a: &str, b: &str) -> usize {
    a.chars().zip(b.chars()).take_while(|(x, y)| x == y).count()
}

/// Relation lookup with optional deduction. `relation` may be a relation
/// name or a concept that denotes one through the alias table.
pub fn cmd_rel(
    kb: &KnowledgeBase,
    ref_text: &str,
    relation: &str,
    opts: QueryOptions,
    rules: &RuleSet,
) -> Result<QueryResult, QueryError> {
    let unit = resolve_ref(kb, ref_text)?;
    let relation = resolve_relation_name(kb, relation, rules)?;
    let hits = query_relation(kb, unit.as_str(), &relation, opts, rules)?;
    Ok(QueryResult::Relations {
        unit: unit.0,
        relation,
        hits: hits
            .into_iter()
            .map(|h| match h.provenance {
                Provenance::Explicit => RelationHit {
                    value: h.value.0,
                    provenance: "explicit".into(),
                    trace: None,
                },
                Provenance::Inherited => RelationHit {
                    value: h.value.0,
                    provenance: "inherited".into(),
                    trace: None,
                },
                Provenance::Derived(trace) => RelationHit {
                    value: h.value.0,
                    provenance: "derived".into(),
                    trace: Some(trace.render()),
                },
            })
            .collect(),
    })
}

pub fn resolve_relation_name(
    kb: &KnowledgeBase,
    text: &str,
    rules: &RuleSet,
) -> Result<String, QueryError> {
    if kb.has_slot(text) {
        return Ok(text.to_string());
    }
    if let Ok(reference) = ConceptRef::parse(text) {
        if let Ok(relation) = resolve_relation_alias(&reference, rules) {
            return Ok(relation);
        }
    }
    Err(QueryError::UnknownRelation(text.to_string()))
}

/// All (relation, value) pairs visible on a unit, inheritance included.
fn relation_pairs(kb: &KnowledgeBase, unit: &str) -> Result<Vec<RelationPair>, QueryError> {
    let mut out = Vec::new();
    let relations: Vec<String> = kb
        .slot_definitions()
        .filter(|d| d.level == SlotLevel::Relational)
        .map(|d| d.name.clone())
        .collect();
    for relation in relations {
        for sv in kb.inherited_values(unit, &relation)? {
            if let Value::Unit(v) = sv.value {
                out.push(RelationPair {
                    relation: relation.clone(),
                    value: v.0,
                });
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn cmd_common(kb: &KnowledgeBase, left: &str, right: &str) -> Result<QueryResult, QueryError> {
    let l = resolve_ref(kb, left)?;
    let r = resolve_ref(kb, right)?;
    let lp = relation_pairs(kb, l.as_str())?;
    let rp = relation_pairs(kb, r.as_str())?;
    let pairs = lp.into_iter().filter(|p| rp.contains(p)).collect();
    Ok(QueryResult::Common {
        left: l.0,
        right: r.0,
        pairs,
    })
}

pub fn cmd_diff(kb: &KnowledgeBase, left: &str, right: &str) -> Result<QueryResult, QueryError> {
    let l = resolve_ref(kb, left)?;
    let r = resolve_ref(kb, right)?;
    let lp = relation_pairs(kb, l.as_str())?;
    let rp = relation_pairs(kb, r.as_str())?;
    let only_left = lp.iter().filter(|p| !rp.contains(p)).cloned().collect();
    let only_right = rp.iter().filter(|p| !lp.contains(p)).cloned().collect();
    Ok(QueryResult::Diff {
        left: l.0,
        right: r.0,
        only_left,
        only_right,
    })
}

/// Breadth-first neighborhood over relational arcs (both directions are
/// present as stored inverses), grouped by relation path. Phrasal concepts
/// are reported through their head concepts.
pub fn cmd_thesaurus(kb: &KnowledgeBase, root: &str, hops: u32) -> Result<QueryResult, QueryError> {
    if hops < 1 {
        return Err(QueryError::BadHops);
    }
    let start = resolve_ref(kb, root)?;
    let relations: Vec<String> = kb
        .slot_definitions()
        .filter(|d| d.level == SlotLevel::Relational)
        .map(|d| d.name.clone())
        .collect();

    let mut groups: indexmap::IndexMap<String, Vec<String>> = indexmap::IndexMap::new();
    let mut visited: std::collections::BTreeSet<UnitId> = std::collections::BTreeSet::new();
    visited.insert(start.clone());
    let mut frontier: Vec<(UnitId, Vec<String>)> = vec![(start.clone(), Vec::new())];

    for _ in 0..hops {
        let mut next: Vec<(UnitId, Vec<String>)> = Vec::new();
        for (unit, path) in &frontier {
            for relation in &relations {
                for sv in kb.local_values(unit.as_str(), relation)? {
                    if let Value::Unit(target) = sv.value {
                        if !visited.insert(target.clone()) {
                            continue;
                        }
                        let mut new_path = path.clone();
                        new_path.push(relation.clone());
                        let display = display_id(kb, &target);
                        let key = new_path.join(" > ");
                        let members = groups.entry(key).or_default();
                        if !members.contains(&display) {
                            members.push(display);
                        }
                        next.push((target, new_path));
                    }
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(QueryResult::Neighborhood {
        root: start.0,
        hops,
        groups: groups
            .into_iter()
            .map(|(path, members)| NeighborGroup { path, members })
            .collect(),
    })
}

fn display_id(kb: &KnowledgeBase, id: &UnitId) -> String {
    if let Some(unit) = kb.get_unit(id.as_str()) {
        if unit.kind == UnitKind::PhrasalConcept {
            if let Some(head) = unit.parents.iter().find(|p| {
                kb.get_unit(p.as_str())
                    .map(|t| t.kind.is_conceptual())
                    .unwrap_or(false)
            }) {
                return head.0.clone();
            }
        }
    }
    id.0.clone()
}

/// Phrasal concepts whose structure references the concept: the virtual
/// usage-example set.
pub fn cmd_examples(kb: &KnowledgeBase, ref_text: &str) -> Result<QueryResult, QueryError> {
    let concept = resolve_ref(kb, ref_text)?;
    let mut examples = Vec::new();
    for unit in kb.units() {
        if unit.kind != UnitKind::PhrasalConcept {
            continue;
        }
        let as_head = unit.parents.iter().any(|p| p == &concept);
        // sub-structure means the phrase's own composition: its head and its
        // definitory/syntagmatic content, not relational back-links
        let in_slots = unit.slots.iter().any(|(slot, values)| {
            kb.slot_definition(slot)
                .map(|d| matches!(d.level, SlotLevel::Definitory | SlotLevel::Syntagmatic))
                .unwrap_or(false)
                && values
                    .iter()
                    .any(|sv| sv.value == Value::Unit(concept.clone()))
        });
        if !(as_head || in_slots) {
            continue;
        }
        let texte = unit.text_value(SLOT_TEXTE).unwrap_or("").to_string();
        let serves = find_definiendum(kb, &unit.id)
            .map(|u| u.0)
            .unwrap_or_else(|| "?".to_string());
        examples.push(ExampleHit { texte, serves });
    }
    Ok(QueryResult::Examples {
        concept: concept.0,
        examples,
    })
}

/// The concept a phrasal ultimately defines: follow definitory and
/// syntagmatic incoming links upward.
fn find_definiendum(kb: &KnowledgeBase, phrasal: &UnitId) -> Option<UnitId> {
    let mut current = phrasal.clone();
    for _ in 0..16 {
        let mut parent_phrasal: Option<UnitId> = None;
        for unit in kb.units() {
            for (slot, values) in &unit.slots {
                let def = match kb.slot_definition(slot) {
                    Ok(d) => d,
                    Err(_) => continue,
                };
                if !values
                    .iter()
                    .any(|sv| sv.value == Value::Unit(current.clone()))
                {
                    continue;
                }
                match def.level {
                    SlotLevel::Definitory => return Some(unit.id.clone()),
                    SlotLevel::Syntagmatic if unit.kind == UnitKind::PhrasalConcept => {
                        parent_phrasal = Some(unit.id.clone());
                    }
                    _ => {}
                }
            }
        }
        current = parent_phrasal?;
    }
    None
}

pub fn cmd_stats(kb: &KnowledgeBase) -> QueryResult {
    QueryResult::Stats(crate::enrich::kb_stats(kb))
}
