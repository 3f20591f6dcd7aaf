//! Printable frame listings.
//!
//! A frame prints as its heading, the SUBCLASS.OF / MEMBER.OF links, then
//! one line per slot value with the facets indented underneath. Two views
//! exist: the definitory view hides relational slot values and class
//! parents (the state of a frame before relational completion), the full
//! view shows everything. Dictionary-linkage slots (SENS / MOTS-ENTREE)
//! belong to the word level and never appear in thesaurus listings.

use std::fmt::Write;

use super::{
    FacetValue, KnowledgeBase, SlotLevel, UnitKind, Value, FACET_CLASSE_ATTRIBUT, SLOT_MOTS_ENTREE,
    SLOT_SENS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ListingView {
    /// Non-relational slots; SUBCLASS.OF restricted to conceptual parents.
    Definitory,
    /// Every slot and every parent link.
    Full,
}

pub fn render_frame(kb: &KnowledgeBase, unit_id: &str, view: ListingView) -> Option<String> {
    let unit = kb.get_unit(unit_id)?;
    let mut out = String::new();

    writeln!(out, "{}", render_id(kb, unit_id)).ok()?;

    let parents: Vec<String> = unit
        .parents
        .iter()
        .filter(|p| match view {
            ListingView::Full => true,
            ListingView::Definitory => kb
                .get_unit(p.as_str())
                .map(|u| u.kind.is_conceptual())
                .unwrap_or(false),
        })
        .map(|p| render_id(kb, p.as_str()))
        .collect();
    if !parents.is_empty() {
        writeln!(out, "  SUBCLASS.OF: {}", parents.join(", ")).ok()?;
    }
    if !unit.memberships.is_empty() {
        let members: Vec<String> = unit
            .memberships
            .iter()
            .map(|m| render_id(kb, m.as_str()))
            .collect();
        writeln!(out, "  MEMBER.OF: {}", members.join(", ")).ok()?;
    }

    for (slot, values) in &unit.slots {
        if slot == SLOT_SENS || slot == SLOT_MOTS_ENTREE {
            continue;
        }
        let quote_text = kb
            .slot_definition(slot)
            .map(|d| d.value_kind == super::ValueKind::Text)
            .unwrap_or(true);
        for sv in values {
            if view == ListingView::Definitory && is_relational(sv) {
                continue;
            }
            writeln!(
                out,
                "  {}: {}",
                slot,
                render_value(kb, &sv.value, quote_text)
            )
            .ok()?;
            for (name, fv) in &sv.facets {
                writeln!(out, "    {}: {}", name, render_facet(fv)).ok()?;
            }
        }
    }
    Some(out)
}

fn is_relational(sv: &super::SlotValue) -> bool {
    matches!(
        sv.facet(FACET_CLASSE_ATTRIBUT),
        Some(FacetValue::Text(t)) if t == SlotLevel::Relational.classe_attribut()
    )
}

/// Classes print bare, everything else between pipes.
pub fn render_id(kb: &KnowledgeBase, id: &str) -> String {
    match kb.get_unit(id) {
        Some(u) if u.kind == UnitKind::KbClass => id.to_string(),
        Some(u) if u.kind == UnitKind::Entry => id.to_string(),
        _ => format!("|{id}|"),
    }
}

fn render_value(kb: &KnowledgeBase, value: &Value, quote_text: bool) -> String {
    match value {
        Value::Unit(id) => render_id(kb, id.as_str()),
        Value::Text(t) if quote_text => format!("\"{t}\""),
        Value::Text(t) => t.clone(),
        Value::Number(x) => format!("{x}"),
    }
}

fn render_facet(fv: &FacetValue) -> String {
    match fv {
        FacetValue::Text(t) => t.clone(),
        FacetValue::Number(x) => format!("{x}"),
        FacetValue::List(items) => items.join(", "),
    }
}
