//! Definition-sentence tokenization and lexicon-driven tagging.
//!
//! There is no external tagger: a token's POS tags are those of its lexicon
//! entry, found through a small candidate chain that undoes the common
//! French inflections (plural -s/-es, feminine -e, -er verb third person).
//! Function words come from a closed list. Elisions are split so patterns
//! stay word-aligned ("d'ornement" becomes "d'" + "ornement").

use std::collections::BTreeMap;

use crate::ingest::{EntryRecord, Pos};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SenseEntry {
    pub homograph: u32,
    pub sense: u32,
    pub pos: Pos,
}

/// Headword index over the lexicon, in file order per headword.
#[derive(Debug, Clone, Default)]
pub struct LexiconIndex {
    senses: BTreeMap<String, Vec<SenseEntry>>,
}

impl LexiconIndex {
    pub fn from_records(records: &[EntryRecord]) -> Self {
        let mut senses: BTreeMap<String, Vec<SenseEntry>> = BTreeMap::new();
        for r in records {
            senses
                .entry(r.headword.clone())
                .or_default()
                .push(SenseEntry {
                    homograph: r.homograph,
                    sense: r.sense,
                    pos: r.pos,
                });
        }
        LexiconIndex { senses }
    }

    pub fn lookup(&self, headword: &str) -> Option<&[SenseEntry]> {
        self.senses.get(headword).map(Vec::as_slice)
    }

    pub fn headwords(&self) -> impl Iterator<Item = &str> {
        self.senses.keys().map(String::as_str)
    }

    /// First headword reached from `word` by the de-inflection chain.
    pub fn lemma_of(&self, word: &str) -> Option<&str> {
        for candidate in lemma_candidates(word) {
            if let Some((key, _)) = self.senses.get_key_value(candidate.as_str()) {
                return Some(key.as_str());
            }
        }
        None
    }
}

fn lemma_candidates(word: &str) -> Vec<String> {
    let mut out = vec![word.to_string()];
    out.push(format!("{word}r"));
    if let Some(stem) = word.strip_suffix('s') {
        out.push(stem.to_string());
        out.push(format!("{stem}r"));
    }
    if let Some(stem) = word.strip_suffix('e') {
        out.push(stem.to_string());
    }
    if let Some(stem) = word.strip_suffix("es") {
        out.push(stem.to_string());
    }
    out
}

pub const DETERMINERS: [&str; 6] = ["un", "une", "des", "le", "la", "les"];
pub const FUNCTION_WORDS: [&str; 11] = [
    "un", "une", "des", "de", "qui", "que", "le", "la", "les", "ce", "ne",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Original spelling, elision apostrophe included ("d'").
    pub surface: String,
    /// Lowercased, elisions expanded ("d'" -> "de").
    pub norm: String,
    /// Lexicon headword the surface resolves to, if any.
    pub lemma: Option<String>,
    /// POS tags of the lexicon senses behind `lemma`.
    pub pos: Vec<Pos>,
}

impl Token {
    pub fn is_determiner(&self) -> bool {
        DETERMINERS.contains(&self.norm.as_str())
    }

    pub fn is_function_word(&self) -> bool {
        FUNCTION_WORDS.contains(&self.norm.as_str())
    }

    /// The headword this token stands for: its lemma when the lexicon knows
    /// it, its normalized surface otherwise.
    pub fn effective_word(&self) -> &str {
        self.lemma.as_deref().unwrap_or(&self.norm)
    }
}

fn expand_elision(prefix: &str) -> &str {
    match prefix {
        "d" => "de",
        "l" => "le",
        "qu" => "que",
        "n" => "ne",
        "s" => "se",
        "j" => "je",
        "m" => "me",
        "t" => "te",
        "c" => "ce",
        other => other,
    }
}

pub fn tokenize(text: &str, index: &LexiconIndex) -> Vec<Token> {
    let mut tokens = Vec::new();
    for raw in text.split_whitespace() {
        let word = raw.trim_matches(|c: char| matches!(c, '.' | ',' | ';' | ':' | '!' | '?'));
        if word.is_empty() {
            continue;
        }
        let mut pieces: Vec<String> = Vec::new();
        let lowered = word.to_lowercase();
        if let Some(pos) = lowered.find(['\'', '\u{2019}']) {
            let apostrophe_len = lowered[pos..].chars().next().unwrap().len_utf8();
            let (prefix, rest) = lowered.split_at(pos + apostrophe_len);
            let stem = &prefix[..pos];
            if !stem.is_empty() && stem.chars().count() <= 2 && !rest.is_empty() {
                pieces.push(prefix.to_string());
                pieces.push(rest.to_string());
            } else {
                pieces.push(lowered.clone());
            }
        } else {
            pieces.push(lowered.clone());
        }
        for piece in pieces {
            let norm = if let Some(stripped) = piece.strip_suffix(['\'', '\u{2019}']) {
                expand_elision(stripped).to_string()
            } else {
                piece.clone()
            };
            let (lemma, pos) = if FUNCTION_WORDS.contains(&norm.as_str()) {
                (None, Vec::new())
            } else {
                match index.lemma_of(&norm) {
                    Some(lemma) => {
                        let mut pos: Vec<Pos> = index
                            .lookup(lemma)
                            .unwrap_or(&[])
                            .iter()
                            .map(|s| s.pos)
                            .collect();
                        pos.dedup();
                        (Some(lemma.to_string()), pos)
                    }
                    None => (None, Vec::new()),
                }
            };
            tokens.push(Token {
                surface: piece,
                norm,
                lemma,
                pos,
            });
        }
    }
    tokens
}

/// Reassemble the original surface of a token span, eliding the space after
/// apostrophes. When `lemma_head` is set the first token prints as its
/// lemma, which is how phrasal TEXTE strings are spelled.
pub fn render_span(tokens: &[Token], start: usize, end: usize, lemma_head: bool) -> String {
    let mut out = String::new();
    for (offset, token) in tokens[start..end].iter().enumerate() {
        let piece: &str = if offset == 0 && lemma_head {
            token.effective_word()
        } else {
            &token.surface
        };
        out.push_str(piece);
        let last = start + offset + 1 == end;
        if !last && !piece.ends_with(['\'', '\u{2019}']) {
            out.push(' ');
        }
    }
    out
}

/// Grammatical facets carried by a determiner surface form.
pub fn determiner_facets(norm: &str) -> Vec<(String, crate::frame::FacetValue)> {
    use crate::frame::FacetValue;
    let text = |s: &str| FacetValue::Text(s.to_string());
    match norm {
        "un" => vec![("DETERMINATION".into(), text("UN"))],
        "une" => vec![
            ("DETERMINATION".into(), text("UN")),
            ("GENRE".into(), text("F")),
        ],
        "des" => vec![
            ("DETERMINATION".into(), text("UN")),
            ("NOMBRE".into(), text("PL")),
        ],
        "le" => vec![("DETERMINATION".into(), text("LE"))],
        "la" => vec![
            ("DETERMINATION".into(), text("LE")),
            ("GENRE".into(), text("F")),
        ],
        "les" => vec![
            ("DETERMINATION".into(), text("LE")),
            ("NOMBRE".into(), text("PL")),
        ],
        _ => Vec::new(),
    }
}


#[cfg(test)]
mod curly_apostrophe {
    use super::*;
    use crate::ingest::parse_lexicon;

    #[test]
    fn typographic_apostrophes_split_like_ascii_ones() {
        let records = parse_lexicon("ornement|I|1|NOM||".as_bytes()).unwrap();
        let index = LexiconIndex::from_records(&records);
        let tokens = tokenize("une plante d\u{2019}ornement", &index);
        let norms: Vec<&str> = tokens.iter().map(|t| t.norm.as_str()).collect();
        assert_eq!(norms, vec!["une", "plante", "de", "ornement"]);
        assert_eq!(render_span(&tokens, 1, 4, true), "plante d\u{2019}ornement");
    }
}
