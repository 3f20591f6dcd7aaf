//! Partial parsing of definition sentences.
//!
//! Definitions are matched against a hierarchy of phrasal patterns; children
//! refine their parents, and the deepest matching pattern wins. Matching a
//! pattern only requires its elements to cover an initial span of the
//! sentence, which is what makes the parse partial. Each pattern carries the
//! construction directives that turn a match into frame structure.

pub mod compile;
pub mod matcher;
pub mod sscr;
pub mod token;

pub use compile::{compile_hierarchy, PatternError};
pub use matcher::match_definition;
pub use sscr::apply_sscr;
pub use token::{tokenize, LexiconIndex, Token};

use indexmap::IndexMap;

use crate::frame::FacetValue;
use crate::ingest::Pos;

/// One element of a pattern, matched against one token (or, for relators
/// and captures, a token run).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternElem {
    /// A bare word, matched on the normalized surface.
    Literal(String),
    /// A multi-word relator such as "sorte de".
    RelatorLiteral(Vec<String>),
    /// A determiner gap.
    DetGap { var: String },
    /// A single-token gap constrained by POS, optionally pinned to a lemma.
    Gap {
        pos: Pos,
        var: String,
        word: Option<String>,
    },
    /// A trailing capture of one or more tokens forming a phrase.
    PhraseCapture { kind: PhraseKind, var: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhraseKind {
    Np,
    Vp,
    Adjp,
}

impl PhraseKind {
    pub fn head_pos(self) -> Pos {
        match self {
            PhraseKind::Np => Pos::Nom,
            PhraseKind::Vp => Pos::Verbe,
            PhraseKind::Adjp => Pos::Adjectif,
        }
    }
}

/// Where a slot-setting directive writes: the concept being defined or a
/// phrasal built earlier in the same rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotTargetOwner {
    Definiendum,
    Phrasal(String),
}

/// One construction directive.
#[derive(Debug, Clone, PartialEq)]
pub enum SscrAction {
    /// Create a phrasal concept under the unit bound by `head_var`.
    CreatePhrasal { var: String, head_var: String },
    /// Create a phrasal from an undecomposed capture: the head is the first
    /// token tagged with the capture kind's POS; no internal slots.
    CreatePhrasalFromCapture { var: String, capture_var: String },
    /// Assert a slot value with grammatical facets and correspondents.
    SetSlot {
        owner: SlotTargetOwner,
        slot: String,
        target_var: String,
        det_var: Option<String>,
        facets: Vec<(String, FacetValue)>,
        correspondents: Vec<(String, Option<f64>)>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternNode {
    pub id: String,
    pub parent: Option<String>,
    pub domain: Pos,
    pub elems: Vec<PatternElem>,
    pub sscr: Vec<SscrAction>,
    pub depth: usize,
}

impl PatternNode {
    /// Leading literal words before the first gap or capture.
    pub fn literal_prefix(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for elem in &self.elems {
            match elem {
                PatternElem::Literal(w) => out.push(w.as_str()),
                PatternElem::RelatorLiteral(ws) => out.extend(ws.iter().map(String::as_str)),
                _ => break,
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PatternHierarchy {
    pub patterns: IndexMap<String, PatternNode>,
}

impl PatternHierarchy {
    pub fn get(&self, id: &str) -> Option<&PatternNode> {
        self.patterns.get(id)
    }

    pub fn in_domain(&self, domain: Pos) -> impl Iterator<Item = &PatternNode> {
        self.patterns.values().filter(move |p| p.domain == domain)
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

/// Result of matching one definition: the winning pattern, its variable
/// bindings as token spans, and the matched prefix length. `success: false`
/// is a value, not an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub success: bool,
    pub pattern: String,
    /// var -> [start, end) token span
    pub bindings: IndexMap<String, (usize, usize)>,
    pub matched_len: usize,
}

impl MatchResult {
    pub fn failure() -> Self {
        MatchResult {
            success: false,
            pattern: String::new(),
            bindings: IndexMap::new(),
            matched_len: 0,
        }
    }
}
