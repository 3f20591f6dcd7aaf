//! Pattern file compilation.
//!
//! One pattern per block:
//!
//! ```text
//! pattern np-det-de parent np-det
//!   domain NOM
//!   elems <DET:$d> <NOM:$h> de <NOM:$x>
//!   sscr
//!     phrasal $p head $h
//!     slot $p DE $x corr ORIGINE,POSSESSEUR,MATIERE,OBJECTIF
//!     def-slot DEF-CLASSIQUE $p det $d corr DEFINI-PAR
//! ```
//!
//! Elements are space-separated: bare words are literals, quoted strings are
//! multi-word relators, `<DET:$d>` is a determiner gap, `<NOM:$h>` a POS gap
//! (`<NOM=partie:$h>` pins the gap to a lemma), and `<NP:$x>` / `<VP:$x>` /
//! `<ADJP:$x>` capture a trailing phrase. Children repeat their parent's
//! elements; only the root of a hierarchy states the domain.

use std::collections::BTreeSet;

use indexmap::IndexMap;
use thiserror::Error;

use super::{PatternElem, PatternHierarchy, PatternNode, PhraseKind, SlotTargetOwner, SscrAction};
use crate::frame::FacetValue;
use crate::ingest::Pos;

#[derive(Debug, Error, PartialEq)]
pub enum PatternError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate pattern id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: unknown parent `{parent}` for pattern `{id}`")]
    UnknownParent {
        line: usize,
        id: String,
        parent: String,
    },
    #[error("pattern `{id}`: domain disagrees with parent `{parent}`")]
    DomainMismatch { id: String, parent: String },
    #[error("pattern `{id}`: missing domain (roots must declare one)")]
    MissingDomain { id: String },
    #[error("pattern `{id}`: parent literal prefix is not a prefix of the child's")]
    PrefixMismatch { id: String },
    #[error("pattern `{id}`: duplicate binding variable `${var}`")]
    DuplicateVar { id: String, var: String },
    #[error("pattern `{id}`: SSCR references unbound variable `${var}`")]
    UnboundVar { id: String, var: String },
    #[error("pattern `{id}`: a phrase capture must be the last element")]
    CaptureNotLast { id: String },
    #[error("pattern `{id}`: no elements")]
    Empty { id: String },
}

struct Block {
    line: usize,
    id: String,
    parent: Option<String>,
    domain: Option<Pos>,
    elems: Vec<PatternElem>,
    sscr: Vec<SscrAction>,
}

pub fn compile_hierarchy(text: &str) -> Result<PatternHierarchy, PatternError> {
    let blocks = split_blocks(text)?;
    let mut patterns: IndexMap<String, PatternNode> = IndexMap::new();

    for block in blocks {
        if patterns.contains_key(&block.id) {
            return Err(PatternError::DuplicateId {
                line: block.line,
                id: block.id,
            });
        }
        let (domain, depth) = match &block.parent {
            None => {
                let domain = block.domain.ok_or(PatternError::MissingDomain {
                    id: block.id.clone(),
                })?;
                (domain, 0)
            }
            Some(parent_id) => {
                let parent =
                    patterns
                        .get(parent_id)
                        .ok_or_else(|| PatternError::UnknownParent {
                            line: block.line,
                            id: block.id.clone(),
                            parent: parent_id.clone(),
                        })?;
                if let Some(d) = block.domain {
                    if d != parent.domain {
                        return Err(PatternError::DomainMismatch {
                            id: block.id.clone(),
                            parent: parent_id.clone(),
                        });
                    }
                }
                (parent.domain, parent.depth + 1)
            }
        };
        let node = PatternNode {
            id: block.id.clone(),
            parent: block.parent.clone(),
            domain,
            elems: block.elems,
            sscr: block.sscr,
            depth,
        };
        validate_pattern(&node, &patterns)?;
        patterns.insert(block.id, node);
    }
    Ok(PatternHierarchy { patterns })
}

fn validate_pattern(
    node: &PatternNode,
    patterns: &IndexMap<String, PatternNode>,
) -> Result<(), PatternError> {
    if node.elems.is_empty() {
        return Err(PatternError::Empty {
            id: node.id.clone(),
        });
    }
    // captures close the pattern
    for (i, elem) in node.elems.iter().enumerate() {
        if matches!(elem, PatternElem::PhraseCapture { .. }) && i + 1 != node.elems.len() {
            return Err(PatternError::CaptureNotLast {
                id: node.id.clone(),
            });
        }
    }
    // binding variables are unique
    let mut vars: BTreeSet<&str> = BTreeSet::new();
    for elem in &node.elems {
        let var = match elem {
            PatternElem::DetGap { var } => Some(var),
            PatternElem::Gap { var, .. } => Some(var),
            PatternElem::PhraseCapture { var, .. } => Some(var),
            _ => None,
        };
        if let Some(var) = var {
            if !vars.insert(var) {
                return Err(PatternError::DuplicateVar {
                    id: node.id.clone(),
                    var: var.clone(),
                });
            }
        }
    }
    // hierarchy refinement: the parent's literal prefix leads the child's
    if let Some(parent_id) = &node.parent {
        let parent = &patterns[parent_id.as_str()];
        let child_prefix = node.literal_prefix();
        let parent_prefix = parent.literal_prefix();
        if child_prefix.len() < parent_prefix.len()
            || child_prefix[..parent_prefix.len()] != parent_prefix[..]
        {
            return Err(PatternError::PrefixMismatch {
                id: node.id.clone(),
            });
        }
    }
    // every variable an action reads must be bound by the pattern or by an
    // earlier phrasal directive
    let mut bound: BTreeSet<&str> = vars;
    for action in &node.sscr {
        match action {
            SscrAction::CreatePhrasal { var, head_var } => {
                if !bound.contains(head_var.as_str()) {
                    return Err(PatternError::UnboundVar {
                        id: node.id.clone(),
                        var: head_var.clone(),
                    });
                }
                bound.insert(var);
            }
            SscrAction::CreatePhrasalFromCapture { var, capture_var } => {
                if !bound.contains(capture_var.as_str()) {
                    return Err(PatternError::UnboundVar {
                        id: node.id.clone(),
                        var: capture_var.clone(),
                    });
                }
                bound.insert(var);
            }
            SscrAction::SetSlot {
                owner,
                target_var,
                det_var,
                ..
            } => {
                if let SlotTargetOwner::Phrasal(p) = owner {
                    if !bound.contains(p.as_str()) {
                        return Err(PatternError::UnboundVar {
                            id: node.id.clone(),
                            var: p.clone(),
                        });
                    }
                }
                if !bound.contains(target_var.as_str()) {
                    return Err(PatternError::UnboundVar {
                        id: node.id.clone(),
                        var: target_var.clone(),
                    });
                }
                if let Some(d) = det_var {
                    if !bound.contains(d.as_str()) {
                        return Err(PatternError::UnboundVar {
                            id: node.id.clone(),
                            var: d.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

fn split_blocks(text: &str) -> Result<Vec<Block>, PatternError> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut in_sscr = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indented = raw.starts_with(' ') || raw.starts_with('\t');
        if !indented {
            let mut words = trimmed.split_whitespace();
            match words.next() {
                Some("pattern") => {}
                _ => {
                    return Err(PatternError::Syntax {
                        line,
                        message: format!("expected `pattern <id>`, found `{trimmed}`"),
                    })
                }
            }
            let id = words
                .next()
                .ok_or_else(|| PatternError::Syntax {
                    line,
                    message: "missing pattern id".into(),
                })?
                .to_string();
            let parent = match (words.next(), words.next()) {
                (None, _) => None,
                (Some("parent"), Some(p)) => Some(p.to_string()),
                _ => {
                    return Err(PatternError::Syntax {
                        line,
                        message: "expected `parent <id>` after the pattern id".into(),
                    })
                }
            };
            blocks.push(Block {
                line,
                id,
                parent,
                domain: None,
                elems: Vec::new(),
                sscr: Vec::new(),
            });
            in_sscr = false;
            continue;
        }
        let block = blocks.last_mut().ok_or_else(|| PatternError::Syntax {
            line,
            message: "content before any pattern".into(),
        })?;
        if in_sscr {
            block.sscr.push(parse_directive(line, trimmed)?);
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("domain") {
            let name = rest.trim();
            block.domain = Some(Pos::parse(name).ok_or_else(|| PatternError::Syntax {
                line,
                message: format!("unknown domain `{name}`"),
            })?);
        } else if let Some(rest) = trimmed.strip_prefix("elems") {
            block.elems = parse_elems(line, rest.trim())?;
        } else if trimmed == "sscr" {
            in_sscr = true;
        } else {
            return Err(PatternError::Syntax {
                line,
                message: format!("expected `domain`, `elems`, or `sscr`, found `{trimmed}`"),
            });
        }
    }
    Ok(blocks)
}

fn parse_elems(line: usize, text: &str) -> Result<Vec<PatternElem>, PatternError> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if let Some(after) = rest.strip_prefix('"') {
            let end = after.find('"').ok_or_else(|| PatternError::Syntax {
                line,
                message: "unterminated relator quote".into(),
            })?;
            let words: Vec<String> = after[..end].split_whitespace().map(String::from).collect();
            if words.is_empty() {
                return Err(PatternError::Syntax {
                    line,
                    message: "empty relator".into(),
                });
            }
            out.push(PatternElem::RelatorLiteral(words));
            rest = after[end + 1..].trim_start();
            continue;
        }
        let token_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let token = &rest[..token_end];
        rest = rest[token_end..].trim_start();
        out.push(parse_elem(line, token)?);
    }
    Ok(out)
}

fn parse_elem(line: usize, token: &str) -> Result<PatternElem, PatternError> {
    if let Some(body) = token.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        let (head, var) = body.split_once(":$").ok_or_else(|| PatternError::Syntax {
            line,
            message: format!("gap element `{token}` needs a `:$var` binding"),
        })?;
        if var.is_empty() {
            return Err(PatternError::Syntax {
                line,
                message: format!("empty variable in `{token}`"),
            });
        }
        let var = var.to_string();
        let (category, word) = match head.split_once('=') {
            Some((c, w)) => (c, Some(w.to_string())),
            None => (head, None),
        };
        let restricted = word.is_some();
        let elem = match category {
            "DET" => PatternElem::DetGap { var },
            "NP" => PatternElem::PhraseCapture {
                kind: PhraseKind::Np,
                var,
            },
            "VP" => PatternElem::PhraseCapture {
                kind: PhraseKind::Vp,
                var,
            },
            "ADJP" => PatternElem::PhraseCapture {
                kind: PhraseKind::Adjp,
                var,
            },
            other => match Pos::parse(other) {
                Some(pos) => PatternElem::Gap { pos, var, word },
                None => {
                    return Err(PatternError::Syntax {
                        line,
                        message: format!("unknown gap category `{other}`"),
                    })
                }
            },
        };
        if restricted && !matches!(elem, PatternElem::Gap { .. }) {
            return Err(PatternError::Syntax {
                line,
                message: "only POS gaps take a lemma restriction".into(),
            });
        }
        Ok(elem)
    } else {
        Ok(PatternElem::Literal(token.to_string()))
    }
}

fn parse_directive(line: usize, text: &str) -> Result<SscrAction, PatternError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let syntax = |message: String| PatternError::Syntax { line, message };
    match words.first().copied() {
        Some("phrasal") => {
            // phrasal $p head $h   |   phrasal $p capture $vp
            if words.len() == 4 && words[2] == "head" {
                Ok(SscrAction::CreatePhrasal {
                    var: parse_var(line, words[1])?,
                    head_var: parse_var(line, words[3])?,
                })
            } else if words.len() == 4 && words[2] == "capture" {
                Ok(SscrAction::CreatePhrasalFromCapture {
                    var: parse_var(line, words[1])?,
                    capture_var: parse_var(line, words[3])?,
                })
            } else {
                Err(syntax(
                    "expected `phrasal $p head $h` or `phrasal $p capture $vp`".into(),
                ))
            }
        }
        Some("slot") => {
            if words.len() < 4 {
                return Err(syntax("expected `slot $p SLOT $target ...`".into()));
            }
            let owner = SlotTargetOwner::Phrasal(parse_var(line, words[1])?);
            parse_set_slot(line, owner, words[2], &words[3..])
        }
        Some("def-slot") => {
            if words.len() < 3 {
                return Err(syntax("expected `def-slot SLOT $target ...`".into()));
            }
            parse_set_slot(line, SlotTargetOwner::Definiendum, words[1], &words[2..])
        }
        _ => Err(syntax(format!("unknown directive `{text}`"))),
    }
}

fn parse_var(line: usize, token: &str) -> Result<String, PatternError> {
    token
        .strip_prefix('$')
        .filter(|v| !v.is_empty())
        .map(String::from)
        .ok_or_else(|| PatternError::Syntax {
            line,
            message: format!("expected a `$var`, found `{token}`"),
        })
}

fn parse_set_slot(
    line: usize,
    owner: SlotTargetOwner,
    slot: &str,
    rest: &[&str],
) -> Result<SscrAction, PatternError> {
    let syntax = |message: String| PatternError::Syntax { line, message };
    let target_var = parse_var(
        line,
        rest.first()
            .ok_or_else(|| syntax("missing slot target".into()))?,
    )?;
    let mut det_var = None;
    let mut facets = Vec::new();
    let mut correspondents = Vec::new();
    let mut i = 1;
    while i < rest.len() {
        match rest[i] {
            "det" => {
                let var = rest
                    .get(i + 1)
                    .ok_or_else(|| syntax("`det` needs a variable".into()))?;
                det_var = Some(parse_var(line, var)?);
                i += 2;
            }
            "facet" => {
                let spec = rest
                    .get(i + 1)
                    .ok_or_else(|| syntax("`facet` needs NAME=VALUE".into()))?;
                let (name, value) = spec
                    .split_once('=')
                    .ok_or_else(|| syntax(format!("facet `{spec}` needs NAME=VALUE")))?;
                facets.push((name.to_string(), FacetValue::Text(value.to_string())));
                i += 2;
            }
            "corr" => {
                let spec = rest
                    .get(i + 1)
                    .ok_or_else(|| syntax("`corr` needs a candidate list".into()))?;
                for candidate in spec.split(',') {
                    let (name, certainty) = match candidate.split_once('=') {
                        Some((n, c)) => {
                            let value: f64 = c
                                .parse()
                                .map_err(|_| syntax(format!("bad certainty `{c}` in `corr`")))?;
                            if !(0.0..=1.0).contains(&value) {
                                return Err(syntax(format!("certainty {value} outside [0,1]")));
                            }
                            (n, Some(value))
                        }
                        None => (candidate, None),
                    };
                    if name.is_empty() {
                        return Err(syntax("empty correspondent name".into()));
                    }
                    correspondents.push((name.to_string(), certainty));
                }
                i += 2;
            }
            other => return Err(syntax(format!("unknown slot modifier `{other}`"))),
        }
    }
    Ok(SscrAction::SetSlot {
        owner,
        slot: slot.to_string(),
        target_var,
        det_var,
        facets,
        correspondents,
    })
}
