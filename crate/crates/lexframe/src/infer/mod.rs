//! Dynamic deduction by composition of lexical relations.
//!
//! Relation compositions are declared as triples (R1 R2 R3): whenever
//! X R1 Y and Y R2 Z hold, X R3 Z may be deduced. Triples are stored on
//! R3's slot definition; asking for R3 turns them into transitivity rules
//! and fires a backward chainer. Deduced facts land in a per-query scratch
//! context and are discarded with it, never in the knowledge base. Explicit
//! composition rules cover the cases the triple shape cannot express, and
//! an alias table lets actual concepts denote relations.

pub mod chain;
pub mod rules;

pub use chain::{query_relation, Provenance, QueryHit, QueryOptions, Trace, TraceStep};
pub use rules::{parse_rules_file, RulesParseError};

use thiserror::Error;

use crate::concept::ConceptRef;
use crate::frame::{FrameError, KnowledgeBase, UnitId};

#[derive(Debug, Error)]
pub enum InferError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("rule `{0}`: head variable `{1}` does not appear in the body")]
    UnboundHeadVariable(String, String),
    #[error("rule `{0}`: body needs at least two atoms")]
    BodyTooShort(String),
    #[error("rule `{0}`: atom subject `{1}` is not bound by the time it is evaluated")]
    NotWellModed(String, String),
    #[error("no relation alias for `{reference}`{}", nearest_hint(.nearest))]
    NoAlias {
        reference: String,
        nearest: Vec<String>,
    },
    #[error("depth limit must be at least 1")]
    BadDepthLimit,
}

fn nearest_hint(nearest: &[String]) -> String {
    if nearest.is_empty() {
        String::new()
    } else {
        format!(" (nearest: {})", nearest.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionTriple {
    pub r1: String,
    pub r2: String,
    pub r3: String,
}

impl CompositionTriple {
    pub fn new(r1: &str, r2: &str, r3: &str) -> Self {
        CompositionTriple {
            r1: r1.into(),
            r2: r2.into(),
            r3: r3.into(),
        }
    }

    pub fn label(&self) -> String {
        format!("({} {} {})", self.r1, self.r2, self.r3)
    }
}

/// The compositions stated in the system by default: meronymic
/// transitivity, meronymic/locative and taxonomic combinations, and the
/// two meta-language compositions. Deliberately absent is
/// (PARTIE-DE MEMBRE-DE PARTIE-DE), whose transitivity does not hold.
pub fn default_triples() -> Vec<CompositionTriple> {
    vec![
        CompositionTriple::new("PARTIE-DE", "PARTIE-DE", "PARTIE-DE"),
        CompositionTriple::new("PARTIE-DE", "LOCATIF", "LOCATIF"),
        CompositionTriple::new("LOCATIF", "HYPERONYME", "LOCATIF"),
        CompositionTriple::new("MEMBRE-DE", "HYPERONYME", "MEMBRE-DE"),
        CompositionTriple::new("CARACTERISTIQUE", "QUI-A", "POSSESSION"),
        CompositionTriple::new("OBJECTIF", "CE-QUI", "OBJECTIF"),
    ]
}

/// Register a triple on R3's slot definition.
pub fn declare_triple(
    kb: &mut KnowledgeBase,
    r1: &str,
    r2: &str,
    r3: &str,
) -> Result<bool, InferError> {
    Ok(kb.add_composition_triple(r1, r2, r3)?)
}

/// Install all default triples.
pub fn declare_default_triples(kb: &mut KnowledgeBase) -> Result<(), InferError> {
    for t in default_triples() {
        declare_triple(kb, &t.r1, &t.r2, &t.r3)?;
    }
    Ok(())
}

/// One side of a rule atom: a variable (single uppercase letter) or a
/// concept constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(UnitId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub subject: Term,
    pub relation: String,
    pub object: Term,
}

/// An explicit composition rule: body atoms evaluated left to right, one
/// head atom deriving values for the head relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionRule {
    pub name: String,
    pub body: Vec<Atom>,
    pub head: Atom,
}

impl CompositionRule {
    /// The transitivity rule a triple generates.
    pub fn from_triple(triple: &CompositionTriple) -> Self {
        let var = |v: &str| Term::Var(v.to_string());
        CompositionRule {
            name: format!("triple {}", triple.label()),
            body: vec![
                Atom {
                    subject: var("X"),
                    relation: triple.r1.clone(),
                    object: var("Y"),
                },
                Atom {
                    subject: var("Y"),
                    relation: triple.r2.clone(),
                    object: var("Z"),
                },
            ],
            head: Atom {
                subject: var("X"),
                relation: triple.r3.clone(),
                object: var("Z"),
            },
        }
    }
}

/// Validate a rule: known relations, head variables bound by the body,
/// body of at least two atoms, and left-to-right evaluability (every atom's
/// subject bound when reached, starting from the head subject).
pub fn validate_rule(kb: &KnowledgeBase, rule: &CompositionRule) -> Result<(), InferError> {
    if rule.body.len() < 2 {
        return Err(InferError::BodyTooShort(rule.name.clone()));
    }
    for atom in rule.body.iter().chain(std::iter::once(&rule.head)) {
        if !kb.has_slot(&atom.relation) {
            return Err(InferError::UnknownRelation(atom.relation.clone()));
        }
    }
    let mut bound: Vec<&str> = Vec::new();
    if let Term::Var(v) = &rule.head.subject {
        bound.push(v);
    }
    for atom in &rule.body {
        if let Term::Var(v) = &atom.subject {
            if !bound.contains(&v.as_str()) {
                return Err(InferError::NotWellModed(rule.name.clone(), v.clone()));
            }
        }
        if let Term::Var(v) = &atom.object {
            if !bound.contains(&v.as_str()) {
                bound.push(v);
            }
        }
    }
    for term in [&rule.head.subject, &rule.head.object] {
        if let Term::Var(v) = term {
            if !bound.contains(&v.as_str()) {
                return Err(InferError::UnboundHeadVariable(
                    rule.name.clone(),
                    v.clone(),
                ));
            }
        }
    }
    Ok(())
}

/// Runtime rule collection: extra triples, explicit rules, and the alias
/// table mapping concepts to the relations they denote.
#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    pub triples: Vec<CompositionTriple>,
    pub rules: Vec<CompositionRule>,
    pub aliases: Vec<(String, String)>,
}

impl RuleSet {
    /// Add a rule after validation.
    pub fn declare_rule(
        &mut self,
        kb: &KnowledgeBase,
        rule: CompositionRule,
    ) -> Result<(), InferError> {
        validate_rule(kb, &rule)?;
        self.rules.push(rule);
        Ok(())
    }

    /// Every alias target must be a defined relation.
    pub fn validate(&self, kb: &KnowledgeBase) -> Result<(), InferError> {
        for rule in &self.rules {
            validate_rule(kb, rule)?;
        }
        for t in &self.triples {
            for name in [&t.r1, &t.r2, &t.r3] {
                if !kb.has_slot(name) {
                    return Err(InferError::UnknownRelation(name.clone()));
                }
            }
        }
        for (_, relation) in &self.aliases {
            if !kb.has_slot(relation) {
                return Err(InferError::UnknownRelation(relation.clone()));
            }
        }
        Ok(())
    }
}

/// The relation a concept denotes, e.g. |partie I 1| for PARTIE-DE.
pub fn resolve_relation_alias(
    reference: &ConceptRef,
    rules: &RuleSet,
) -> Result<String, InferError> {
    let key = reference.render();
    for (alias, relation) in &rules.aliases {
        if *alias == key {
            return Ok(relation.clone());
        }
    }
    let mut known: Vec<String> = rules.aliases.iter().map(|(a, _)| a.clone()).collect();
    known.sort();
    let position = known.partition_point(|a| a < &key);
    let from = position.saturating_sub(1);
    let to = (position + 2).min(known.len());
    Err(InferError::NoAlias {
        reference: key,
        nearest: known[from..to].to_vec(),
    })
}

#[cfg(test)]
mod tests;
