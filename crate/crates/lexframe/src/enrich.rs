//! Second-phase enrichment.
//!
//! Three passes exploit relation properties to add facts the parser never
//! saw: synonymy is closed under symmetry and transitivity (within a POS),
//! genus-less concepts borrow the hypernyms of their synonyms, and
//! relational arcs that target sense-ambiguous units are re-targeted when
//! the taxonomy singles out one candidate sense. Passes mutate the base in
//! sorted unit order, so a rebuilt and a reloaded base enrich identically.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::build::BuildError;
use crate::concept::{ConceptRef, Sense};
use crate::defaults::{SLOT_GROUPE_CATEGORIEL, SLOT_SYNONYMES};
use crate::frame::{classes, FrameError, KnowledgeBase, SlotLevel, UnitId, UnitKind, Value};

/// One-line knowledge-base statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KbStats {
    pub entries: usize,
    pub units: usize,
    pub phrasal: usize,
    pub ambiguous: usize,
    pub arcs: usize,
}

impl KbStats {
    pub fn to_text(&self) -> String {
        format!(
            "entries={} units={} phrasal={} ambiguous={} arcs={}",
            self.entries, self.units, self.phrasal, self.ambiguous, self.arcs
        )
    }
}

pub fn kb_stats(kb: &KnowledgeBase) -> KbStats {
    let mut stats = KbStats {
        entries: 0,
        units: 0,
        phrasal: 0,
        ambiguous: 0,
        arcs: 0,
    };
    for unit in kb.units() {
        match unit.kind {
            UnitKind::Entry => stats.entries += 1,
            UnitKind::Concept => stats.units += 1,
            UnitKind::PhrasalConcept => {
                stats.units += 1;
                stats.phrasal += 1;
            }
            UnitKind::Reference => {
                stats.units += 1;
                if unit
                    .memberships
                    .iter()
                    .any(|m| classes::AMBIGUITY_CLASSES.contains(&m.as_str()))
                {
                    stats.ambiguous += 1;
                }
            }
            UnitKind::KbClass => {}
        }
    }
    stats.arcs = kb.relational_arc_count();
    stats
}

#[derive(Debug, Clone, Serialize)]
pub struct EnrichmentReport {
    pub arcs_before: usize,
    pub arcs_after: usize,
    /// (after - before) / before, zero when the base held no arcs.
    pub percent_increase: f64,
    pub synonymy_arcs_added: usize,
    pub taxonomy_arcs_added: usize,
    pub resolved: usize,
    pub unresolved: usize,
}

impl EnrichmentReport {
    pub fn to_text(&self) -> String {
        format!(
            "arcs-before:      {}\n\
             arcs-after:       {}\n\
             percent-increase: {}\n\
             synonymy-added:   {}\n\
             taxonomy-added:   {}\n\
             resolved:         {}\n\
             unresolved:       {}\n",
            self.arcs_before,
            self.arcs_after,
            self.percent_increase,
            self.synonymy_arcs_added,
            self.taxonomy_arcs_added,
            self.resolved,
            self.unresolved
        )
    }
}

/// Run the enrichment passes in order and report the arc growth.
pub fn enrich_all(kb: &mut KnowledgeBase) -> Result<EnrichmentReport, BuildError> {
    let arcs_before = kb.relational_arc_count();
    let synonymy_arcs_added = close_synonymy(kb)?;
    let taxonomy_arcs_added = extend_taxonomy_by_synonymy(kb)?;
    let (resolved, unresolved) = disambiguate(kb)?;
    let arcs_after = kb.relational_arc_count();
    let percent_increase = if arcs_before == 0 {
        0.0
    } else {
        (arcs_after as f64 - arcs_before as f64) / arcs_before as f64
    };
    Ok(EnrichmentReport {
        arcs_before,
        arcs_after,
        percent_increase,
        synonymy_arcs_added,
        taxonomy_arcs_added,
        resolved,
        unresolved,
    })
}

fn unit_pos(kb: &KnowledgeBase, unit: &str) -> Option<String> {
    kb.get_unit(unit)?
        .text_value(SLOT_GROUPE_CATEGORIEL)
        .map(String::from)
}

/// Units with unknown POS (references) are compatible with anything; known
/// POS values must agree.
fn pos_compatible(a: &Option<String>, b: &Option<String>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x == y,
        _ => true,
    }
}

/// Close SYNONYMES under symmetry and transitivity, asserting only same-POS
/// pairs (references count as POS wildcards). Returns the number of
/// directed relational arcs added.
pub fn close_synonymy(kb: &mut KnowledgeBase) -> Result<usize, BuildError> {
    let before = kb.relational_arc_count();

    // undirected adjacency over every synonym arc
    let mut adjacency: BTreeMap<UnitId, BTreeSet<UnitId>> = BTreeMap::new();
    for id in kb.unit_ids_sorted() {
        for sv in kb.local_values(id.as_str(), SLOT_SYNONYMES)? {
            if let Value::Unit(target) = sv.value {
                adjacency
                    .entry(id.clone())
                    .or_default()
                    .insert(target.clone());
                adjacency.entry(target).or_default().insert(id.clone());
            }
        }
    }

    // connected components, then assert every compatible in-component pair
    let mut seen: BTreeSet<UnitId> = BTreeSet::new();
    let nodes: Vec<UnitId> = adjacency.keys().cloned().collect();
    for start in nodes {
        if seen.contains(&start) {
            continue;
        }
        let mut component = Vec::new();
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start);
        while let Some(next) = queue.pop_front() {
            component.push(next.clone());
            for neighbour in adjacency.get(&next).into_iter().flatten() {
                if seen.insert(neighbour.clone()) {
                    queue.push_back(neighbour.clone());
                }
            }
        }
        component.sort();
        let pos: Vec<Option<String>> = component.iter().map(|u| unit_pos(kb, u.as_str())).collect();
        for i in 0..component.len() {
            for j in 0..component.len() {
                if i == j || !pos_compatible(&pos[i], &pos[j]) {
                    continue;
                }
                kb.add_value(
                    component[i].as_str(),
                    SLOT_SYNONYMES,
                    Value::Unit(component[j].clone()),
                )?;
            }
        }
    }
    Ok(kb.relational_arc_count() - before)
}

/// Give genus-less concepts the hypernyms of their synonyms. Synonyms'
/// hypernyms are read from the state before the pass; concepts that already
/// own a genus are untouched. Returns the number of arcs added.
pub fn extend_taxonomy_by_synonymy(kb: &mut KnowledgeBase) -> Result<usize, BuildError> {
    let before = kb.relational_arc_count();

    // snapshot the pre-pass hypernyms
    let mut genus: BTreeMap<UnitId, Vec<UnitId>> = BTreeMap::new();
    for id in kb.unit_ids_sorted() {
        let unit = kb.unit(id.as_str())?;
        if !unit.kind.is_conceptual() {
            continue;
        }
        let parents: Vec<UnitId> = unit
            .parents
            .iter()
            .filter(|p| {
                kb.get_unit(p.as_str())
                    .map(|t| t.kind.is_conceptual())
                    .unwrap_or(false)
            })
            .cloned()
            .collect();
        genus.insert(id, parents);
    }

    let mut plan: Vec<(UnitId, UnitId)> = Vec::new();
    for (id, own) in &genus {
        if !own.is_empty() {
            continue;
        }
        let mut gains: Vec<UnitId> = Vec::new();
        for sv in kb.local_values(id.as_str(), SLOT_SYNONYMES)? {
            if let Value::Unit(synonym) = sv.value {
                for g in genus.get(&synonym).into_iter().flatten() {
                    if !gains.contains(g) {
                        gains.push(g.clone());
                    }
                }
            }
        }
        for g in gains {
            plan.push((id.clone(), g));
        }
    }
    for (unit, parent) in plan {
        match kb.add_parent(unit.as_str(), parent.as_str()) {
            Ok(_) | Err(FrameError::Cycle { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(kb.relational_arc_count() - before)
}

/// Re-target relational arcs that point at SENSE- or COMPLEX-ambiguous
/// units when exactly one candidate sense shares hypernym ancestry with
/// the arc's source. HOMOGRAPHE-level ambiguity is out of this heuristic's
/// reach. Returns (arcs re-targeted, arcs left ambiguous).
pub fn disambiguate(kb: &mut KnowledgeBase) -> Result<(usize, usize), BuildError> {
    let mut resolved = 0usize;
    let mut unresolved = 0usize;

    let ambiguous: Vec<UnitId> = kb
        .unit_ids_sorted()
        .into_iter()
        .filter(|id| {
            kb.get_unit(id.as_str())
                .map(|u| {
                    u.memberships
                        .iter()
                        .any(|m| m.as_str() == classes::SENSE || m.as_str() == classes::COMPLEX)
                })
                .unwrap_or(false)
        })
        .collect();

    for amb in ambiguous {
        let candidates = candidate_senses(kb, amb.as_str());
        let incoming = incoming_relational_arcs(kb, amb.as_str());
        for (source, slot) in incoming {
            let src_ancestry: BTreeSet<UnitId> = kb
                .hypernym_ancestors(source.as_str())?
                .into_iter()
                .collect();
            let mut hits = Vec::new();
            for candidate in &candidates {
                let cand_ancestry: BTreeSet<UnitId> = kb
                    .hypernym_ancestors(candidate.as_str())?
                    .into_iter()
                    .collect();
                if src_ancestry.intersection(&cand_ancestry).next().is_some() {
                    hits.push(candidate.clone());
                }
            }
            if hits.len() == 1 {
                retarget(kb, source.as_str(), &slot, amb.clone(), hits[0].clone())?;
                resolved += 1;
            } else {
                unresolved += 1;
            }
        }
        if is_orphan(kb, amb.as_str()) {
            kb.remove_unit(amb.as_str())?;
        }
    }
    Ok((resolved, unresolved))
}

fn candidate_senses(kb: &KnowledgeBase, amb: &str) -> Vec<UnitId> {
    let reference = match ConceptRef::parse(amb) {
        Ok(r) => r,
        Err(_) => return Vec::new(),
    };
    let wanted: Option<Vec<u32>> = match &reference.sense {
        Sense::Candidates(set) => Some(set.clone()),
        Sense::Unknown => None,
        Sense::Known(_) => return Vec::new(),
    };
    let mut found: Vec<(u32, UnitId)> = Vec::new();
    for unit in kb.units() {
        if unit.kind != UnitKind::Concept {
            continue;
        }
        if let Ok(r) = ConceptRef::parse(unit.id.as_str()) {
            if r.headword == reference.headword
                && r.homograph == reference.homograph
                && r.occurrence.is_none()
            {
                if let Sense::Known(s) = r.sense {
                    if wanted.as_ref().map(|w| w.contains(&s)).unwrap_or(true) {
                        found.push((s, unit.id.clone()));
                    }
                }
            }
        }
    }
    found.sort();
    found.into_iter().map(|(_, id)| id).collect()
}

fn incoming_relational_arcs(kb: &KnowledgeBase, amb: &str) -> Vec<(UnitId, String)> {
    let mut arcs = Vec::new();
    for id in kb.unit_ids_sorted() {
        if id.as_str() == amb {
            continue;
        }
        let unit = kb.get_unit(id.as_str()).expect("listed id");
        for (slot, values) in &unit.slots {
            let def = match kb.slot_definition(slot) {
                Ok(d) => d,
                Err(_) => continue,
            };
            if def.level != SlotLevel::Relational {
                continue;
            }
            for sv in values {
                if sv.value == Value::Unit(UnitId::from(amb)) {
                    arcs.push((id.clone(), slot.clone()));
                }
            }
        }
    }
    arcs
}

fn retarget(
    kb: &mut KnowledgeBase,
    source: &str,
    slot: &str,
    old: UnitId,
    new: UnitId,
) -> Result<(), BuildError> {
    let extra: Vec<(String, crate::frame::FacetValue)> = kb
        .unit(source)?
        .slot(slot)
        .iter()
        .find(|sv| sv.value == Value::Unit(old.clone()))
        .map(|sv| {
            sv.facets
                .iter()
                .filter(|(name, _)| {
                    name != crate::frame::FACET_CLASSE_ATTRIBUT
                        && name != crate::frame::FACET_INVERSES
                })
                .cloned()
                .collect()
        })
        .unwrap_or_default();
    kb.remove_value(source, slot, &Value::Unit(old))?;
    kb.add_value_with_facets(source, slot, Value::Unit(new), extra)?;
    Ok(())
}

fn is_orphan(kb: &KnowledgeBase, amb: &str) -> bool {
    let unit = match kb.get_unit(amb) {
        Some(u) => u,
        None => return false,
    };
    if !unit.slots.is_empty() || !kb.children_of(amb).is_empty() {
        return false;
    }
    for other in kb.units() {
        if other.id.as_str() == amb {
            continue;
        }
        for values in other.slots.values() {
            if values
                .iter()
                .any(|sv| sv.value == Value::Unit(UnitId::from(amb)))
            {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests;
