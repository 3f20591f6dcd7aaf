//! Structured concept identifiers.
//!
//! A concept reference names a word sense: headword, homograph (roman
//! numeral), sense number, and an optional phrasal-occurrence suffix
//! (`plante I 1#3` is the third phrase headed by `plante I 1`). Homograph
//! and sense may be unknown (`?`) or narrowed to a candidate set (`5/6`),
//! which is how ambiguous references are spelled.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConceptRefError {
    #[error("empty concept reference")]
    Empty,
    #[error("invalid homograph `{0}`: expected a roman numeral or `?`")]
    BadHomograph(String),
    #[error("invalid sense `{0}`: expected an integer, `?`, or candidates like `5/6`")]
    BadSense(String),
    #[error("invalid occurrence `{0}`: expected `#k` with k >= 1")]
    BadOccurrence(String),
    #[error("occurrence suffix requires a fully resolved homograph and sense")]
    OccurrenceOnAmbiguous,
    #[error("candidate set `{0}` needs at least two distinct senses")]
    TooFewCandidates(String),
    #[error("trailing input `{0}` after concept reference")]
    TrailingInput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Homograph {
    Known(u32),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sense {
    Known(u32),
    Unknown,
    /// Narrowed to a candidate set; sorted, deduplicated, len >= 2.
    Candidates(Vec<u32>),
}

/// Levels of remaining lexical ambiguity, mirroring the ambiguity classes
/// a reference can be filed under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmbiguityLevel {
    /// Fully resolved homograph and sense.
    None,
    /// Homograph unknown (`facult\u{e9} ? ?`).
    Homograph,
    /// Homograph known, sense unknown (`panser I ?`).
    Sense,
    /// Sense narrowed to a candidate set (`donner I 5/6`).
    Complex,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConceptRef {
    pub headword: String,
    pub homograph: Homograph,
    pub sense: Sense,
    pub occurrence: Option<u32>,
}

impl ConceptRef {
    /// A fully resolved sense reference.
    pub fn sense(headword: impl Into<String>, homograph: u32, sense: u32) -> Self {
        ConceptRef {
            headword: headword.into(),
            homograph: Homograph::Known(homograph),
            sense: Sense::Known(sense),
            occurrence: None,
        }
    }

    /// The k-th phrasal occurrence under a resolved sense.
    pub fn occurrence(headword: impl Into<String>, homograph: u32, sense: u32, occ: u32) -> Self {
        ConceptRef {
            occurrence: Some(occ),
            ..ConceptRef::sense(headword, homograph, sense)
        }
    }

    pub fn ambiguity(&self) -> AmbiguityLevel {
        match (&self.homograph, &self.sense) {
            (Homograph::Unknown, _) => AmbiguityLevel::Homograph,
            (_, Sense::Unknown) => AmbiguityLevel::Sense,
            (_, Sense::Candidates(_)) => AmbiguityLevel::Complex,
            _ => AmbiguityLevel::None,
        }
    }

    pub fn is_resolved(&self) -> bool {
        self.ambiguity() == AmbiguityLevel::None
    }

    /// Canonical text rendering; parsing this back yields `self`.
    pub fn render(&self) -> String {
        let mut out = self.headword.clone();
        out.push(' ');
        match self.homograph {
            Homograph::Known(n) => out.push_str(&to_roman(n)),
            Homograph::Unknown => out.push('?'),
        }
        out.push(' ');
        match &self.sense {
            Sense::Known(n) => out.push_str(&n.to_string()),
            Sense::Unknown => out.push('?'),
            Sense::Candidates(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                out.push_str(&parts.join("/"));
            }
        }
        if let Some(occ) = self.occurrence {
            out.push('#');
            out.push_str(&occ.to_string());
        }
        out
    }

    /// Parse a concept reference. A bare headword is shorthand for an
    /// entirely unresolved reference; `render` spells it out canonically.
    pub fn parse(text: &str) -> Result<Self, ConceptRefError> {
        let mut parts = text.split_whitespace();
        let headword = parts.next().ok_or(ConceptRefError::Empty)?.to_string();
        if headword.contains('#') || headword.contains('|') {
            return Err(ConceptRefError::BadHomograph(headword));
        }

        let homograph = match parts.next() {
            None => {
                return Ok(ConceptRef {
                    headword,
                    homograph: Homograph::Unknown,
                    sense: Sense::Unknown,
                    occurrence: None,
                })
            }
            Some("?") => Homograph::Unknown,
            Some(tok) => Homograph::Known(
                from_roman(tok).ok_or_else(|| ConceptRefError::BadHomograph(tok.to_string()))?,
            ),
        };

        let (sense, occurrence) = match parts.next() {
            None => (Sense::Unknown, None),
            Some(tok) => parse_sense_token(tok)?,
        };

        if let Some(extra) = parts.next() {
            return Err(ConceptRefError::TrailingInput(extra.to_string()));
        }

        let reference = ConceptRef {
            headword,
            homograph,
            sense,
            occurrence,
        };
        if reference.occurrence.is_some() && !reference.is_resolved() {
            return Err(ConceptRefError::OccurrenceOnAmbiguous);
        }
        Ok(reference)
    }
}

impl fmt::Display for ConceptRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn parse_sense_token(tok: &str) -> Result<(Sense, Option<u32>), ConceptRefError> {
    let (sense_part, occ_part) = match tok.split_once('#') {
        Some((s, o)) => (s, Some(o)),
        None => (tok, None),
    };
    let occurrence = match occ_part {
        None => None,
        Some(o) => {
            let k: u32 = o
                .parse()
                .map_err(|_| ConceptRefError::BadOccurrence(tok.to_string()))?;
            if k == 0 {
                return Err(ConceptRefError::BadOccurrence(tok.to_string()));
            }
            Some(k)
        }
    };
    let sense = if sense_part == "?" {
        Sense::Unknown
    } else if sense_part.contains('/') {
        let mut senses = Vec::new();
        for piece in sense_part.split('/') {
            let n: u32 = piece
                .parse()
                .map_err(|_| ConceptRefError::BadSense(tok.to_string()))?;
            if n == 0 {
                return Err(ConceptRefError::BadSense(tok.to_string()));
            }
            senses.push(n);
        }
        senses.sort_unstable();
        senses.dedup();
        if senses.len() < 2 {
            return Err(ConceptRefError::TooFewCandidates(sense_part.to_string()));
        }
        Sense::Candidates(senses)
    } else {
        let n: u32 = sense_part
            .parse()
            .map_err(|_| ConceptRefError::BadSense(tok.to_string()))?;
        if n == 0 {
            return Err(ConceptRefError::BadSense(tok.to_string()));
        }
        Sense::Known(n)
    };
    Ok((sense, occurrence))
}

const ROMAN: [(u32, &str); 13] = [
    (1000, "M"),
    (900, "CM"),
    (500, "D"),
    (400, "CD"),
    (100, "C"),
    (90, "XC"),
    (50, "L"),
    (40, "XL"),
    (10, "X"),
    (9, "IX"),
    (5, "V"),
    (4, "IV"),
    (1, "I"),
];

pub fn to_roman(mut n: u32) -> String {
    let mut out = String::new();
    for &(value, digits) in ROMAN.iter() {
        while n >= value {
            out.push_str(digits);
            n -= value;
        }
    }
    out
}

/// Strict roman-numeral parse: only the canonical spelling is accepted.
pub fn from_roman(text: &str) -> Option<u32> {
    if text.is_empty() {
        return None;
    }
    let mut total = 0u32;
    let bytes = text.as_bytes();
    let digit = |b: u8| -> Option<u32> {
        match b {
            b'I' => Some(1),
            b'V' => Some(5),
            b'X' => Some(10),
            b'L' => Some(50),
            b'C' => Some(100),
            b'D' => Some(500),
            b'M' => Some(1000),
            _ => None,
        }
    };
    let mut i = 0;
    while i < bytes.len() {
        let cur = digit(bytes[i])?;
        let next = if i + 1 < bytes.len() {
            digit(bytes[i + 1])?
        } else {
            0
        };
        if cur < next {
            total += next - cur;
            i += 2;
        } else {
            total += cur;
            i += 1;
        }
    }
    if to_roman(total) == text {
        Some(total)
    } else {
        None
    }
}
