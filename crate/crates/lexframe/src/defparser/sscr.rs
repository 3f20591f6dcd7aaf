//! Execution of semantic-structure construction directives.
//!
//! A successful match drives frame construction: phrasal concepts are
//! created as subclasses of their head, definitory and syntagmatic slots
//! are set with their grammatical facets and relational correspondents,
//! and reference units are created for target words the knowledge base
//! does not hold yet. Target words with several candidate senses resolve
//! to an ambiguity unit instead.

use std::collections::BTreeMap;

use super::token::{determiner_facets, render_span, LexiconIndex, Token};
use super::{MatchResult, PatternElem, PatternHierarchy, SlotTargetOwner, SscrAction};
use crate::build::{create_phrasal, phrasal_class_for, resolve_token_unit, BuildError};
use crate::frame::{FacetValue, KnowledgeBase, UnitId, Value, FACET_CORRESPONDENTS};
use crate::ingest::Pos;

pub fn apply_sscr(
    kb: &mut KnowledgeBase,
    index: &LexiconIndex,
    tokens: &[Token],
    hierarchy: &PatternHierarchy,
    result: &MatchResult,
    definiendum: &str,
) -> Result<Vec<UnitId>, BuildError> {
    if !result.success {
        return Err(BuildError::FailedMatch);
    }
    let pattern = hierarchy
        .get(&result.pattern)
        .ok_or_else(|| BuildError::UnknownPattern(result.pattern.clone()))?;
    if !kb.contains(definiendum) {
        return Err(BuildError::Frame(crate::frame::FrameError::UnknownUnit(
            UnitId::from(definiendum),
        )));
    }

    let gap_pos = |var: &str| -> Option<Pos> {
        pattern.elems.iter().find_map(|e| match e {
            PatternElem::Gap { pos, var: v, .. } if v == var => Some(*pos),
            _ => None,
        })
    };
    let capture_kind = |var: &str| {
        pattern.elems.iter().find_map(|e| match e {
            PatternElem::PhraseCapture { kind, var: v } if v == var => Some(*kind),
            _ => None,
        })
    };
    let span = |var: &str| -> Result<(usize, usize), BuildError> {
        result
            .bindings
            .get(var)
            .copied()
            .ok_or_else(|| BuildError::UnknownPattern(format!("unbound variable ${var}")))
    };

    let mut phrasals: BTreeMap<String, UnitId> = BTreeMap::new();
    let mut touched: Vec<UnitId> = vec![UnitId::from(definiendum)];
    let record = |touched: &mut Vec<UnitId>, id: &UnitId| {
        if !touched.contains(id) {
            touched.push(id.clone());
        }
    };

    for action in &pattern.sscr {
        match action {
            SscrAction::CreatePhrasal { var, head_var } => {
                let (start, _) = span(head_var)?;
                let head = resolve_token_unit(kb, index, &tokens[start])?;
                let pos = gap_pos(head_var).ok_or_else(|| {
                    BuildError::UnknownPattern(format!("${head_var} is not a gap"))
                })?;
                let texte = render_span(tokens, start, result.matched_len, true);
                let phrasal = create_phrasal(kb, &head, phrasal_class_for(pos), &texte)?;
                record(&mut touched, &head);
                record(&mut touched, &phrasal);
                phrasals.insert(var.clone(), phrasal);
            }
            SscrAction::CreatePhrasalFromCapture { var, capture_var } => {
                let (start, end) = span(capture_var)?;
                let kind = capture_kind(capture_var).ok_or_else(|| {
                    BuildError::UnknownPattern(format!("${capture_var} is not a capture"))
                })?;
                let head_pos = kind.head_pos();
                let head_idx = (start..end)
                    .find(|i| tokens[*i].pos.contains(&head_pos))
                    .ok_or(BuildError::HeadlessCapture)?;
                let head = resolve_token_unit(kb, index, &tokens[head_idx])?;
                let texte = render_span(tokens, start, end, head_idx == start);
                let phrasal = create_phrasal(kb, &head, phrasal_class_for(head_pos), &texte)?;
                record(&mut touched, &head);
                record(&mut touched, &phrasal);
                phrasals.insert(var.clone(), phrasal);
            }
            SscrAction::SetSlot {
                owner,
                slot,
                target_var,
                det_var,
                facets,
                correspondents,
            } => {
                let on: UnitId = match owner {
                    SlotTargetOwner::Definiendum => UnitId::from(definiendum),
                    SlotTargetOwner::Phrasal(p) => phrasals.get(p).cloned().ok_or_else(|| {
                        BuildError::UnknownPattern(format!("${p} has no phrasal"))
                    })?,
                };
                let target: UnitId = match phrasals.get(target_var) {
                    Some(p) => p.clone(),
                    None => {
                        let (start, _) = span(target_var)?;
                        resolve_token_unit(kb, index, &tokens[start])?
                    }
                };
                let mut all_facets: Vec<(String, FacetValue)> = Vec::new();
                if let Some(d) = det_var {
                    let (start, _) = span(d)?;
                    all_facets.extend(determiner_facets(&tokens[start].norm));
                }
                all_facets.extend(facets.clone());
                if !correspondents.is_empty() {
                    let names: Vec<String> =
                        correspondents.iter().map(|(n, _)| n.clone()).collect();
                    all_facets.push((FACET_CORRESPONDENTS.to_string(), FacetValue::List(names)));
                    for (name, certainty) in correspondents {
                        if let Some(c) = certainty {
                            all_facets.push((name.clone(), FacetValue::Number(*c)));
                        }
                    }
                }
                kb.add_value_with_facets(
                    on.as_str(),
                    slot,
                    Value::Unit(target.clone()),
                    all_facets,
                )?;
                record(&mut touched, &on);
                record(&mut touched, &target);
            }
        }
    }
    Ok(touched)
}
