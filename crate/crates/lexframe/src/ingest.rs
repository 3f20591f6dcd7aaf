//! Lexicon ingestion.
//!
//! The source lexicon is a flat pipe-separated UTF-8 file, one sense per
//! line: `headword|homograph|sense|POS|definition|usage`. The definition may
//! be empty for reference-only stubs. `#` starts a comment line.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::concept::{from_roman, ConceptRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pos {
    Nom,
    Verbe,
    Adjectif,
    Adverbe,
}

impl Pos {
    pub fn parse(text: &str) -> Option<Pos> {
        match text {
            "NOM" => Some(Pos::Nom),
            "VERBE" => Some(Pos::Verbe),
            "ADJECTIF" => Some(Pos::Adjectif),
            "ADVERBE" => Some(Pos::Adverbe),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pos::Nom => "NOM",
            Pos::Verbe => "VERBE",
            Pos::Adjectif => "ADJECTIF",
            Pos::Adverbe => "ADVERBE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryRecord {
    pub headword: String,
    pub homograph: u32,
    pub sense: u32,
    pub pos: Pos,
    /// Empty for reference-only stubs.
    pub definition: String,
    pub usage: Option<String>,
}

impl EntryRecord {
    pub fn concept_ref(&self) -> ConceptRef {
        ConceptRef::sense(self.headword.clone(), self.homograph, self.sense)
    }

    pub fn is_stub(&self) -> bool {
        self.definition.is_empty()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IngestError {
    #[error("lexicon is not valid UTF-8")]
    NotUtf8,
    #[error("line {line}: expected 5 or 6 pipe-separated fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: empty headword")]
    EmptyHeadword { line: usize },
    #[error("line {line}: bad homograph `{text}` (roman numeral expected)")]
    BadHomograph { line: usize, text: String },
    #[error("line {line}: bad sense number `{text}`")]
    BadSense { line: usize, text: String },
    #[error("line {line}: unknown POS `{text}`")]
    UnknownPos { line: usize, text: String },
    #[error("line {line}: duplicate key ({headword}, {homograph}, {sense})")]
    Duplicate {
        line: usize,
        headword: String,
        homograph: String,
        sense: u32,
    },
}

/// Parse a lexicon file into records, in file order.
pub fn parse_lexicon(bytes: &[u8]) -> Result<Vec<EntryRecord>, IngestError> {
    let text = std::str::from_utf8(bytes).map_err(|_| IngestError::NotUtf8)?;
    let mut records = Vec::new();
    let mut keys: BTreeSet<(String, u32, u32)> = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('|').collect();
        // a trailing pipe yields an empty 6th field; 5 fields means no usage
        if fields.len() < 5 || fields.len() > 6 {
            return Err(IngestError::FieldCount {
                line,
                found: fields.len(),
            });
        }
        let headword = fields[0].trim();
        if headword.is_empty() {
            return Err(IngestError::EmptyHeadword { line });
        }
        let homograph_text = fields[1].trim();
        let homograph = from_roman(homograph_text).ok_or_else(|| IngestError::BadHomograph {
            line,
            text: homograph_text.to_string(),
        })?;
        let sense_text = fields[2].trim();
        let sense: u32 =
            sense_text
                .parse()
                .ok()
                .filter(|s| *s >= 1)
                .ok_or_else(|| IngestError::BadSense {
                    line,
                    text: sense_text.to_string(),
                })?;
        let pos_text = fields[3].trim();
        let pos = Pos::parse(pos_text).ok_or_else(|| IngestError::UnknownPos {
            line,
            text: pos_text.to_string(),
        })?;
        let definition = fields[4].trim().to_string();
        let usage = fields
            .get(5)
            .map(|u| u.trim())
            .filter(|u| !u.is_empty())
            .map(String::from);

        if !keys.insert((headword.to_string(), homograph, sense)) {
            return Err(IngestError::Duplicate {
                line,
                headword: headword.to_string(),
                homograph: homograph_text.to_string(),
                sense,
            });
        }
        records.push(EntryRecord {
            headword: headword.to_string(),
            homograph,
            sense,
            pos,
            definition,
            usage,
        });
    }
    Ok(records)
}
