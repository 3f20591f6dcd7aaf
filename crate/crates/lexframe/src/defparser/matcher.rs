//! Pattern matching over tokenized definitions.
//!
//! A pattern matches when its elements cover an initial span of the token
//! sequence; trailing tokens are ignored (partial parse). Among matching
//! patterns the deepest wins, then the longest matched prefix, then the
//! lexicographically smallest id.

use indexmap::IndexMap;

use super::token::Token;
use super::{MatchResult, PatternElem, PatternHierarchy, PatternNode};
use crate::ingest::Pos;

/// var -> [start, end) token spans
type Bindings = IndexMap<String, (usize, usize)>;

pub fn match_definition(
    tokens: &[Token],
    hierarchy: &PatternHierarchy,
    domain: Pos,
) -> MatchResult {
    let mut best: Option<(usize, usize, &PatternNode, Bindings)> = None;
    for pattern in hierarchy.in_domain(domain) {
        if let Some((bindings, matched_len)) = match_elems(&pattern.elems, tokens) {
            let better = match &best {
                None => true,
                Some((depth, len, node, _)) => {
                    (
                        pattern.depth,
                        matched_len,
                        std::cmp::Reverse(pattern.id.as_str()),
                    ) > (*depth, *len, std::cmp::Reverse(node.id.as_str()))
                }
            };
            if better {
                best = Some((pattern.depth, matched_len, pattern, bindings));
            }
        }
    }
    match best {
        Some((_, matched_len, pattern, bindings)) => MatchResult {
            success: true,
            pattern: pattern.id.clone(),
            bindings,
            matched_len,
        },
        None => MatchResult::failure(),
    }
}

fn match_elems(elems: &[PatternElem], tokens: &[Token]) -> Option<(Bindings, usize)> {
    let mut bindings = IndexMap::new();
    let mut at = 0usize;
    for elem in elems {
        match elem {
            PatternElem::Literal(word) => {
                if tokens.get(at)?.norm != *word {
                    return None;
                }
                at += 1;
            }
            PatternElem::RelatorLiteral(words) => {
                for word in words {
                    if tokens.get(at)?.norm != *word {
                        return None;
                    }
                    at += 1;
                }
            }
            PatternElem::DetGap { var } => {
                if !tokens.get(at)?.is_determiner() {
                    return None;
                }
                bindings.insert(var.clone(), (at, at + 1));
                at += 1;
            }
            PatternElem::Gap { pos, var, word } => {
                let token = tokens.get(at)?;
                if !gap_matches(token, *pos) {
                    return None;
                }
                if let Some(required) = word {
                    if token.effective_word() != required {
                        return None;
                    }
                }
                bindings.insert(var.clone(), (at, at + 1));
                at += 1;
            }
            PatternElem::PhraseCapture { kind, var } => {
                if at >= tokens.len() {
                    return None;
                }
                let head_pos = kind.head_pos();
                if !tokens[at..].iter().any(|t| t.pos.contains(&head_pos)) {
                    return None;
                }
                bindings.insert(var.clone(), (at, tokens.len()));
                at = tokens.len();
            }
        }
    }
    if at == 0 {
        return None;
    }
    Some((bindings, at))
}

/// POS gaps accept tokens the lexicon tags with that POS; unknown open-class
/// words (untagged, not function words) match any POS gap, which is what
/// lets definitions reference words outside the lexicon.
fn gap_matches(token: &Token, pos: Pos) -> bool {
    if token.pos.contains(&pos) {
        return true;
    }
    token.pos.is_empty() && token.lemma.is_none() && !token.is_function_word()
}


#[cfg(test)]
mod specificity {
    use super::*;
    use crate::defparser::compile_hierarchy;
    use crate::defparser::token::{tokenize, LexiconIndex};
    use crate::ingest::parse_lexicon;

    /// The winner of a match is never the parent of another matching
    /// pattern: children pre-empt their ancestors.
    #[test]
    fn the_deepest_matching_pattern_always_wins() {
        let hierarchy =
            compile_hierarchy(include_str!("../../../../fixtures/patterns.txt")).unwrap();
        for lexicon in [
            include_str!("../../../../fixtures/lexicon.golden.txt"),
            include_str!("../../../../fixtures/lexicon.demo.txt"),
        ] {
            let records = parse_lexicon(lexicon.as_bytes()).unwrap();
            let index = LexiconIndex::from_records(&records);
            for record in records.iter().filter(|r| !r.is_stub()) {
                let tokens = tokenize(&record.definition, &index);
                let result = match_definition(&tokens, &hierarchy, record.pos);
                assert!(result.success, "{} must parse", record.headword);
                // no strict descendant of the winner also matches
                for candidate in hierarchy.in_domain(record.pos) {
                    let mut ancestor = candidate.parent.as_deref();
                    let mut descends = false;
                    while let Some(a) = ancestor {
                        if a == result.pattern {
                            descends = true;
                            break;
                        }
                        ancestor = hierarchy.get(a).and_then(|p| p.parent.as_deref());
                    }
                    if descends {
                        assert!(
                            match_elems(&candidate.elems, &tokens).is_none(),
                            "{}: descendant `{}` of winner `{}` also matches \"{}\"",
                            record.headword,
                            candidate.id,
                            result.pattern,
                            record.definition
                        );
                    }
                }
            }
        }
    }
}
