//! The triples/rules/alias file.
//!
//! One declaration per line:
//!
//! ```text
//! triple PARTIE-DE PARTIE-DE PARTIE-DE
//! rule X OBJECTIF Y and Y CE-QUI Z => X OBJECTIF Z
//! alias partie I 1 PARTIE-DE
//! ```
//!
//! Rule variables are single uppercase letters; anything else in object
//! position is a concept constant (it may contain spaces). The alias line
//! ends with the relation; the tokens before it spell the concept.

use thiserror::Error;

use super::{Atom, CompositionRule, CompositionTriple, RuleSet, Term};
use crate::frame::UnitId;

#[derive(Debug, Error, PartialEq)]
pub enum RulesParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

fn is_var(token: &str) -> bool {
    token.len() == 1 && token.chars().all(|c| c.is_ascii_uppercase())
}

fn parse_term(tokens: &[&str]) -> Term {
    if tokens.len() == 1 && is_var(tokens[0]) {
        Term::Var(tokens[0].to_string())
    } else {
        Term::Const(UnitId::from(tokens.join(" ")))
    }
}

fn parse_atom(line: usize, text: &str) -> Result<Atom, RulesParseError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() < 3 {
        return Err(RulesParseError::Syntax {
            line,
            message: format!("atom `{text}` needs subject, relation, object"),
        });
    }
    if !is_var(tokens[0]) {
        return Err(RulesParseError::Syntax {
            line,
            message: format!("atom subject `{}` must be a variable", tokens[0]),
        });
    }
    Ok(Atom {
        subject: Term::Var(tokens[0].to_string()),
        relation: tokens[1].to_string(),
        object: parse_term(&tokens[2..]),
    })
}

pub fn parse_rules_file(text: &str) -> Result<RuleSet, RulesParseError> {
    let mut out = RuleSet::default();
    let mut rule_count = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("triple ") {
            let names: Vec<&str> = rest.split_whitespace().collect();
            if names.len() != 3 {
                return Err(RulesParseError::Syntax {
                    line,
                    message: "triple takes exactly three relation names".into(),
                });
            }
            out.triples
                .push(CompositionTriple::new(names[0], names[1], names[2]));
        } else if let Some(rest) = trimmed.strip_prefix("rule ") {
            let (body_text, head_text) =
                rest.split_once("=>")
                    .ok_or_else(|| RulesParseError::Syntax {
                        line,
                        message: "rule needs `body => head`".into(),
                    })?;
            let body: Vec<Atom> = body_text
                .split(" and ")
                .map(|a| parse_atom(line, a.trim()))
                .collect::<Result<_, _>>()?;
            if body.len() < 2 {
                return Err(RulesParseError::Syntax {
                    line,
                    message: "rule body needs at least two atoms joined by `and`".into(),
                });
            }
            let head = parse_atom(line, head_text.trim())?;
            rule_count += 1;
            out.rules.push(CompositionRule {
                name: format!("rule#{rule_count}"),
                body,
                head,
            });
        } else if let Some(rest) = trimmed.strip_prefix("alias ") {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            if tokens.len() < 2 {
                return Err(RulesParseError::Syntax {
                    line,
                    message: "alias needs a concept reference and a relation".into(),
                });
            }
            let relation = tokens[tokens.len() - 1].to_string();
            let reference = tokens[..tokens.len() - 1].join(" ");
            out.aliases.push((reference, relation));
        } else {
            return Err(RulesParseError::Syntax {
                line,
                message: format!("expected `triple`, `rule`, or `alias`, found `{trimmed}`"),
            });
        }
    }
    Ok(out)
}
