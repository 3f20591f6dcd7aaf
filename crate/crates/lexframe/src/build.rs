//! Initial construction of the dictionary knowledge base.
//!
//! The build runs in four passes over the lexicon: (A) create entry and
//! concept units for every record, (B) parse each definition and execute
//! its construction rule, (C) promote definitory values with qualifying
//! correspondents to the relational level, (D) transfer the definiens
//! content onto each definiendum and make the genus explicit. Inverse
//! maintenance is automatic throughout, so the relational network is
//! bidirectional by construction.

use serde::Serialize;
use thiserror::Error;

use crate::concept::{AmbiguityLevel, ConceptRef, Sense};
use crate::defaults::{self, standard_kb};
use crate::defparser::token::{LexiconIndex, Token};
use crate::defparser::{match_definition, tokenize, PatternHierarchy};
use crate::frame::{classes, FrameError, KnowledgeBase, SlotLevel, UnitId, UnitKind, Value};
use crate::ingest::{EntryRecord, Pos};

pub const DEFAULT_PROMOTION_THRESHOLD: f64 = 0.75;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("cannot apply construction rule to a failed match")]
    FailedMatch,
    #[error("unknown pattern `{0}`")]
    UnknownPattern(String),
    #[error("phrase capture has no head token")]
    HeadlessCapture,
    #[error("phrasal head `{0}` is ambiguous")]
    AmbiguousPhrasalHead(String),
    #[error("`{0}` has no phrasal definition to transfer")]
    MissingPhrasal(String),
}

/// Construction report: unit counts, relational arcs, and the definitions
/// the partial parser could not catch.
#[derive(Debug, Clone, Default, Serialize)]
pub struct BuildReport {
    pub entries: usize,
    pub concepts: usize,
    pub phrasal_concepts: usize,
    pub references: usize,
    pub ambiguous_units: usize,
    pub relational_arcs: usize,
    pub unparsed: Vec<UnparsedDefinition>,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnparsedDefinition {
    pub concept: String,
    pub definition: String,
    pub reason: String,
}

impl BuildReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "entries={} concepts={} phrasal={} references={} ambiguous={} arcs={} unparsed={}\n",
            self.entries,
            self.concepts,
            self.phrasal_concepts,
            self.references,
            self.ambiguous_units,
            self.relational_arcs,
            self.unparsed.len()
        );
        for u in &self.unparsed {
            out.push_str(&format!(
                "unparsed: {} \"{}\" ({})\n",
                u.concept, u.definition, u.reason
            ));
        }
        out
    }
}

fn semantic_class(pos: Pos) -> Option<&'static str> {
    match pos {
        Pos::Nom => Some(classes::ENTITES),
        Pos::Verbe => Some(classes::ACTIONS_EVENTS),
        Pos::Adjectif => Some(classes::QUALITIES),
        Pos::Adverbe => None,
    }
}

fn pos_class(pos: Pos) -> &'static str {
    match pos {
        Pos::Nom => classes::NOMS,
        Pos::Verbe => classes::VERBES,
        Pos::Adjectif => classes::ADJECTIFS,
        Pos::Adverbe => classes::ADVERBES,
    }
}

pub fn phrasal_class_for(pos: Pos) -> &'static str {
    match pos {
        Pos::Nom => classes::NOMINALES,
        Pos::Verbe => classes::VERBALES,
        Pos::Adjectif => classes::ADJECTIVALES,
        Pos::Adverbe => classes::ADVERBIALES,
    }
}

/// Create (or extend) the entry unit for a record's headword and link it to
/// the sense unit through the SENS / MOTS-ENTREE pair.
pub fn build_entry(kb: &mut KnowledgeBase, record: &EntryRecord) -> Result<UnitId, BuildError> {
    let entry_id = UnitId::from(record.headword.as_str());
    if !kb.contains(entry_id.as_str()) {
        kb.create_unit(
            entry_id.clone(),
            UnitKind::Entry,
            Vec::new(),
            vec![UnitId::from(classes::ENTRIES)],
        )?;
    }
    let sense_id = UnitId::from(record.concept_ref().render());
    kb.add_value(
        entry_id.as_str(),
        crate::frame::SLOT_SENS,
        Value::Unit(sense_id),
    )?;
    Ok(entry_id)
}

/// Create the concept unit for a defined record: a member of its POS class,
/// a subclass of the POS's semantic class, carrying GROUPE-CATEGORIEL and
/// TEXTE-DEFINITION as general information.
pub fn build_concept(kb: &mut KnowledgeBase, record: &EntryRecord) -> Result<UnitId, BuildError> {
    let id = UnitId::from(record.concept_ref().render());
    let parents = semantic_class(record.pos)
        .map(|c| vec![UnitId::from(c)])
        .unwrap_or_default();
    kb.create_unit(
        id.clone(),
        UnitKind::Concept,
        parents,
        vec![UnitId::from(pos_class(record.pos))],
    )?;
    kb.add_value(
        id.as_str(),
        defaults::SLOT_GROUPE_CATEGORIEL,
        Value::Text(record.pos.label().to_string()),
    )?;
    kb.add_value(
        id.as_str(),
        defaults::SLOT_TEXTE_DEFINITION,
        Value::Text(record.definition.clone()),
    )?;
    Ok(id)
}

/// Get or create the unit a concept reference denotes. Resolved references
/// become plain REFERENCES members; unresolved ones become ambiguity units
/// classed by what is unknown.
pub fn ensure_reference(
    kb: &mut KnowledgeBase,
    reference: &ConceptRef,
) -> Result<UnitId, BuildError> {
    let id = UnitId::from(reference.render());
    if kb.contains(id.as_str()) {
        return Ok(id);
    }
    let class = match reference.ambiguity() {
        AmbiguityLevel::None => classes::REFERENCES,
        AmbiguityLevel::Homograph => classes::HOMOGRAPHE,
        AmbiguityLevel::Sense => classes::SENSE,
        AmbiguityLevel::Complex => classes::COMPLEX,
    };
    kb.create_unit(
        id.clone(),
        UnitKind::Reference,
        Vec::new(),
        vec![UnitId::from(class)],
    )?;
    Ok(id)
}

/// Resolve a definition token to a unit. A word with one known sense maps
/// to that sense; several senses yield an ambiguity unit; a word outside
/// the lexicon becomes a reference under (I, 1).
pub fn resolve_token_unit(
    kb: &mut KnowledgeBase,
    index: &LexiconIndex,
    token: &Token,
) -> Result<UnitId, BuildError> {
    let word = token.effective_word().to_string();
    let reference = match index.lookup(&word) {
        None | Some([]) => ConceptRef::sense(word, 1, 1),
        Some([single]) => ConceptRef::sense(word, single.homograph, single.sense),
        Some(senses) => {
            let homograph = senses[0].homograph;
            if senses.iter().all(|s| s.homograph == homograph) {
                ConceptRef {
                    headword: word,
                    homograph: crate::concept::Homograph::Known(homograph),
                    sense: Sense::Unknown,
                    occurrence: None,
                }
            } else {
                ConceptRef {
                    headword: word,
                    homograph: crate::concept::Homograph::Unknown,
                    sense: Sense::Unknown,
                    occurrence: None,
                }
            }
        }
    };
    ensure_reference(kb, &reference)
}

/// Create a phrasal concept under `head`, numbering it with the head's
/// per-concept occurrence counter.
pub fn create_phrasal(
    kb: &mut KnowledgeBase,
    head: &UnitId,
    member_class: &str,
    texte: &str,
) -> Result<UnitId, BuildError> {
    let head_ref = ConceptRef::parse(head.as_str())
        .map_err(|_| BuildError::AmbiguousPhrasalHead(head.to_string()))?;
    if !head_ref.is_resolved() {
        return Err(BuildError::AmbiguousPhrasalHead(head.to_string()));
    }
    let next = kb
        .children_of(head.as_str())
        .iter()
        .filter_map(|c| ConceptRef::parse(c.as_str()).ok())
        .filter_map(|r| r.occurrence)
        .max()
        .unwrap_or(0)
        + 1;
    let phrasal_ref = ConceptRef {
        occurrence: Some(next),
        ..head_ref
    };
    let id = UnitId::from(phrasal_ref.render());
    kb.create_unit(
        id.clone(),
        UnitKind::PhrasalConcept,
        vec![head.clone()],
        vec![UnitId::from(member_class)],
    )?;
    kb.add_value(
        id.as_str(),
        defaults::SLOT_TEXTE,
        Value::Text(texte.to_string()),
    )?;
    Ok(id)
}

/// Promote definitory and syntagmatic values to the relational level. A
/// candidate is promoted when its stated certainty reaches the threshold,
/// or when it is the sole candidate and no certainty is stated.
pub fn promote(
    kb: &mut KnowledgeBase,
    unit: &str,
    threshold: f64,
) -> Result<Vec<(String, Value)>, BuildError> {
    let plan = promotion_plan(kb, unit, threshold)?;
    let mut promoted = Vec::new();
    for (relation, value) in plan {
        match kb.add_value(unit, &relation, value.clone()) {
            Ok(_) => promoted.push((relation, value)),
            // a genus candidate that would loop the taxonomy is skipped
            Err(FrameError::Cycle { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(promoted)
}

fn promotion_plan(
    kb: &KnowledgeBase,
    unit: &str,
    threshold: f64,
) -> Result<Vec<(String, Value)>, BuildError> {
    let u = kb.unit(unit)?;
    let mut plan = Vec::new();
    for (slot, values) in &u.slots {
        let def = kb.slot_definition(slot)?;
        if !matches!(def.level, SlotLevel::Definitory | SlotLevel::Syntagmatic) {
            continue;
        }
        for sv in values {
            let candidates = match sv.correspondents() {
                Some(c) => c,
                None => continue,
            };
            if !matches!(sv.value, Value::Unit(_)) {
                continue;
            }
            for name in candidates {
                let qualifies = match sv.facet_number(name) {
                    Some(certainty) => certainty >= threshold,
                    None => candidates.len() == 1,
                };
                if qualifies {
                    plan.push((name.clone(), sv.value.clone()));
                }
            }
        }
    }
    Ok(plan)
}

/// Transfer the definiens onto the definiendum: assert the DEFINI-PAR /
/// DEFINITION-DE equivalence, make the genus explicit as a hypernym link,
/// assert the meta-linguistic SORTE-DE for relator definitions, and promote
/// the phrasal's syntagmatic content directly onto the definiendum.
pub fn transfer_definiens(
    kb: &mut KnowledgeBase,
    unit: &str,
    threshold: f64,
) -> Result<(), BuildError> {
    let (def_slot, phrasal_id) = match genus_bearing_phrasal(kb, unit)? {
        Some(found) => found,
        None => return Err(BuildError::MissingPhrasal(unit.to_string())),
    };
    kb.add_value(
        unit,
        defaults::SLOT_DEFINI_PAR,
        Value::Unit(phrasal_id.clone()),
    )?;

    let head = kb
        .unit(phrasal_id.as_str())?
        .parents
        .iter()
        .find(|p| {
            kb.get_unit(p.as_str())
                .map(|t| t.kind.is_conceptual())
                .unwrap_or(false)
        })
        .cloned()
        .ok_or_else(|| BuildError::MissingPhrasal(unit.to_string()))?;
    match kb.add_parent(unit, head.as_str()) {
        Ok(_) | Err(FrameError::Cycle { .. }) => {}
        Err(e) => return Err(e.into()),
    }
    if def_slot == defaults::SLOT_DEF_SORTED {
        kb.add_value(unit, defaults::SLOT_SORTE_DE, Value::Unit(head.clone()))?;
    }

    // the phrasal's promotable content also describes the definiendum
    let plan = promotion_plan(kb, phrasal_id.as_str(), threshold)?;
    for (relation, value) in plan {
        if value == Value::Unit(UnitId::from(unit)) {
            continue;
        }
        match kb.add_value(unit, &relation, value) {
            Ok(_) | Err(FrameError::Cycle { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

fn genus_bearing_phrasal(
    kb: &KnowledgeBase,
    unit: &str,
) -> Result<Option<(&'static str, UnitId)>, BuildError> {
    let u = kb.unit(unit)?;
    for slot in [defaults::SLOT_DEF_CLASSIQUE, defaults::SLOT_DEF_SORTED] {
        for sv in u.slot(slot) {
            if let Value::Unit(target) = &sv.value {
                if kb
                    .get_unit(target.as_str())
                    .map(|t| t.kind == UnitKind::PhrasalConcept)
                    .unwrap_or(false)
                {
                    return Ok(Some((slot, target.clone())));
                }
            }
        }
    }
    Ok(None)
}

/// Run the whole construction over a lexicon.
pub fn build_all(
    records: &[EntryRecord],
    hierarchy: &PatternHierarchy,
    threshold: f64,
) -> Result<(KnowledgeBase, BuildReport), BuildError> {
    let mut kb = standard_kb();
    let index = LexiconIndex::from_records(records);
    let mut report = BuildReport::default();

    // pass A: units for every record
    for record in records {
        if record.is_stub() {
            ensure_reference(&mut kb, &record.concept_ref())?;
        } else {
            build_concept(&mut kb, record)?;
            build_entry(&mut kb, record)?;
        }
    }

    // pass B: parse definitions and build definitory structure
    for record in records {
        if record.is_stub() {
            continue;
        }
        let concept_id = record.concept_ref().render();
        let tokens = tokenize(&record.definition, &index);
        let result = match_definition(&tokens, hierarchy, record.pos);
        if !result.success {
            report.unparsed.push(UnparsedDefinition {
                concept: concept_id,
                definition: record.definition.clone(),
                reason: "no pattern matched".to_string(),
            });
            continue;
        }
        match crate::defparser::apply_sscr(
            &mut kb,
            &index,
            &tokens,
            hierarchy,
            &result,
            &concept_id,
        ) {
            Ok(_) => {}
            Err(BuildError::AmbiguousPhrasalHead(head)) => {
                report.unparsed.push(UnparsedDefinition {
                    concept: concept_id,
                    definition: record.definition.clone(),
                    reason: format!("ambiguous phrasal head {head}"),
                });
            }
            Err(e) => return Err(e),
        }
    }

    // pass C: promotion, in creation order
    let ids: Vec<UnitId> = kb.units().map(|u| u.id.clone()).collect();
    for id in &ids {
        promote(&mut kb, id.as_str(), threshold)?;
    }

    // pass D: definiens transfer for genus-bearing definitions
    for id in &ids {
        if kb
            .unit(id.as_str())
            .map(|u| u.kind == UnitKind::Concept)
            .unwrap_or(false)
            && genus_bearing_phrasal(&kb, id.as_str())?.is_some()
        {
            transfer_definiens(&mut kb, id.as_str(), threshold)?;
        }
    }

    fill_report_counts(&kb, &mut report);
    Ok((kb, report))
}

fn fill_report_counts(kb: &KnowledgeBase, report: &mut BuildReport) {
    for unit in kb.units() {
        match unit.kind {
            UnitKind::Entry => report.entries += 1,
            UnitKind::Concept => report.concepts += 1,
            UnitKind::PhrasalConcept => report.phrasal_concepts += 1,
            UnitKind::Reference => {
                if unit
                    .memberships
                    .iter()
                    .any(|m| classes::AMBIGUITY_CLASSES.contains(&m.as_str()))
                {
                    report.ambiguous_units += 1;
                } else {
                    report.references += 1;
                }
            }
            UnitKind::KbClass => {}
        }
    }
    report.relational_arcs = kb.relational_arc_count();
}

#[cfg(test)]
pub(crate) mod tests;
