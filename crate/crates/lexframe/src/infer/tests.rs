use std::collections::BTreeSet;

use super::chain::replay_trace;
use super::*;
use crate::defaults::standard_kb;
use crate::frame::{
    classes, InheritanceRole, KnowledgeBase, SlotDefinition, SlotLevel, UnitKind, Value, ValueKind,
};

fn concept(kb: &mut KnowledgeBase, id: &str) {
    kb.create_unit(
        UnitId::from(id),
        UnitKind::Concept,
        vec![],
        vec![UnitId::from(classes::NOMS)],
    )
    .unwrap();
}

fn assert_values(hits: &[QueryHit], expected: &[&str]) {
    let got: BTreeSet<&str> = hits.iter().map(|h| h.value.as_str()).collect();
    let want: BTreeSet<&str> = expected.iter().copied().collect();
    assert_eq!(got, want);
}

#[test]
fn default_triples_are_the_declared_six() {
    let triples = default_triples();
    assert_eq!(triples.len(), 6);
    assert!(triples.contains(&CompositionTriple::new("LOCATIF", "HYPERONYME", "LOCATIF")));
    assert!(triples.contains(&CompositionTriple::new(
        "PARTIE-DE",
        "PARTIE-DE",
        "PARTIE-DE"
    )));
    assert!(triples.contains(&CompositionTriple::new("OBJECTIF", "CE-QUI", "OBJECTIF")));
    assert!(triples.contains(&CompositionTriple::new(
        "CARACTERISTIQUE",
        "QUI-A",
        "POSSESSION"
    )));
    assert!(
        !triples.contains(&CompositionTriple::new(
            "PARTIE-DE",
            "MEMBRE-DE",
            "PARTIE-DE"
        )),
        "that transitivity does not hold and must not be stated"
    );
}

#[test]
fn declare_triple_attaches_to_r3() {
    let mut kb = standard_kb();
    assert!(declare_triple(&mut kb, "PARTIE-DE", "PARTIE-DE", "PARTIE-DE").unwrap());
    assert!(
        !declare_triple(&mut kb, "PARTIE-DE", "PARTIE-DE", "PARTIE-DE").unwrap(),
        "duplicate ignored"
    );
    let def = kb.slot_definition("PARTIE-DE").unwrap();
    assert_eq!(
        def.composition_triples,
        vec![("PARTIE-DE".to_string(), "PARTIE-DE".to_string())]
    );
    assert!(matches!(
        declare_triple(&mut kb, "PARTIE-DE", "INCONNU", "PARTIE-DE"),
        Err(InferError::Frame(_))
    ));
}

#[test]
fn objectif_composition_derives_the_action() {
    let mut kb = standard_kb();
    declare_default_triples(&mut kb).unwrap();
    for id in ["géranium I 1", "ornement I 1", "orner I 1"] {
        concept(&mut kb, id);
    }
    kb.add_value(
        "géranium I 1",
        "OBJECTIF",
        Value::Unit(UnitId::from("ornement I 1")),
    )
    .unwrap();
    kb.add_value(
        "ornement I 1",
        "CE-QUI",
        Value::Unit(UnitId::from("orner I 1")),
    )
    .unwrap();
    kb.freeze();

    let rules = RuleSet::default();
    let opts = QueryOptions {
        deduce: true,
        ..QueryOptions::default()
    };
    let hits = query_relation(&kb, "géranium I 1", "OBJECTIF", opts, &rules).unwrap();
    assert_values(&hits, &["ornement I 1", "orner I 1"]);
    assert!(matches!(hits[0].provenance, Provenance::Explicit));
    match &hits[1].provenance {
        Provenance::Derived(trace) => {
            assert!(trace.render().contains("(OBJECTIF CE-QUI OBJECTIF)"));
            assert!(trace
                .intermediates()
                .iter()
                .any(|u| u.as_str() == "orner I 1"));
            let fact = (
                UnitId::from("géranium I 1"),
                "OBJECTIF".to_string(),
                UnitId::from("orner I 1"),
            );
            assert!(
                replay_trace(&kb, trace, &fact, true),
                "trace replays against explicit arcs"
            );
        }
        other => panic!("expected derived, got {other:?}"),
    }

    // without deduction only the explicit value comes back
    let hits = query_relation(
        &kb,
        "géranium I 1",
        "OBJECTIF",
        QueryOptions::default(),
        &rules,
    )
    .unwrap();
    assert_values(&hits, &["ornement I 1"]);
}

#[test]
fn meronymic_transitivity_composes() {
    let mut kb = standard_kb();
    declare_default_triples(&mut kb).unwrap();
    for id in ["a I 1", "b I 1", "c I 1"] {
        concept(&mut kb, id);
    }
    kb.add_value("a I 1", "PARTIE-DE", Value::Unit(UnitId::from("b I 1")))
        .unwrap();
    kb.add_value("b I 1", "PARTIE-DE", Value::Unit(UnitId::from("c I 1")))
        .unwrap();

    let opts = QueryOptions {
        deduce: true,
        ..QueryOptions::default()
    };
    let hits = query_relation(&kb, "a I 1", "PARTIE-DE", opts, &RuleSet::default()).unwrap();
    assert_values(&hits, &["b I 1", "c I 1"]);
}

#[test]
fn undeclared_composition_does_not_fire() {
    let mut kb = standard_kb();
    declare_default_triples(&mut kb).unwrap();
    for id in ["a I 1", "b I 1", "c I 1"] {
        concept(&mut kb, id);
    }
    kb.add_value("a I 1", "PARTIE-DE", Value::Unit(UnitId::from("b I 1")))
        .unwrap();
    kb.add_value("b I 1", "MEMBRE-DE", Value::Unit(UnitId::from("c I 1")))
        .unwrap();

    let opts = QueryOptions {
        deduce: true,
        ..QueryOptions::default()
    };
    let hits = query_relation(&kb, "a I 1", "PARTIE-DE", opts, &RuleSet::default()).unwrap();
    assert_values(&hits, &["b I 1"]);
}

#[test]
fn cycle_terminates_and_matches_oracle() {
    let mut kb = standard_kb();
    declare_default_triples(&mut kb).unwrap();
    concept(&mut kb, "a I 1");
    concept(&mut kb, "b I 1");
    kb.add_value("a I 1", "PARTIE-DE", Value::Unit(UnitId::from("b I 1")))
        .unwrap();
    kb.add_value("b I 1", "PARTIE-DE", Value::Unit(UnitId::from("a I 1")))
        .unwrap();

    let opts = QueryOptions {
        deduce: true,
        ..QueryOptions::default()
    };
    let hits = query_relation(&kb, "a I 1", "PARTIE-DE", opts, &RuleSet::default()).unwrap();
    // closure of the two-cycle: everything reaches everything, self included
    assert_values(&hits, &["a I 1", "b I 1"]);
}

#[test]
fn deduction_composes_with_inheritance() {
    let mut kb = standard_kb();
    declare_default_triples(&mut kb).unwrap();
    for id in ["meuble I 1", "tiroir I 1", "commode I 1", "maison I 1"] {
        concept(&mut kb, id);
    }
    // the hypernym carries the arc; the hyponym sees it through inheritance
    kb.add_parent("commode I 1", "meuble I 1").unwrap();
    kb.add_value(
        "meuble I 1",
        "LOCATIF",
        Value::Unit(UnitId::from("maison I 1")),
    )
    .unwrap();
    kb.add_value(
        "tiroir I 1",
        "PARTIE-DE",
        Value::Unit(UnitId::from("commode I 1")),
    )
    .unwrap();

    // (PARTIE-DE LOCATIF LOCATIF): tiroir PARTIE-DE commode, commode
    // LOCATIF maison (inherited) => tiroir LOCATIF maison
    let opts = QueryOptions {
        deduce: true,
        ..QueryOptions::default()
    };
    let hits = query_relation(&kb, "tiroir I 1", "LOCATIF", opts, &RuleSet::default()).unwrap();
    assert_values(&hits, &["maison I 1"]);

    // with inheritance off the premise disappears
    let opts = QueryOptions {
        deduce: true,
        inherit: false,
        ..QueryOptions::default()
    };
    let hits = query_relation(&kb, "tiroir I 1", "LOCATIF", opts, &RuleSet::default()).unwrap();
    assert!(hits.is_empty());
}

#[test]
fn explicit_rule_equals_its_triple() {
    use rand::SeedableRng;
    for seed in 0..10u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (kb, ids) = random_graph(&mut rng, 8, &["REL-A", "REL-B"], 14);

        let mut with_triple = RuleSet::default();
        with_triple
            .triples
            .push(CompositionTriple::new("REL-A", "REL-B", "REL-A"));
        let mut with_rule = RuleSet::default();
        with_rule
            .declare_rule(
                &kb,
                CompositionRule {
                    name: "as-rule".into(),
                    body: vec![
                        Atom {
                            subject: Term::Var("X".into()),
                            relation: "REL-A".into(),
                            object: Term::Var("Y".into()),
                        },
                        Atom {
                            subject: Term::Var("Y".into()),
                            relation: "REL-B".into(),
                            object: Term::Var("Z".into()),
                        },
                    ],
                    head: Atom {
                        subject: Term::Var("X".into()),
                        relation: "REL-A".into(),
                        object: Term::Var("Z".into()),
                    },
                },
            )
            .unwrap();

        let opts = QueryOptions {
            deduce: true,
            depth_limit: 64,
            inherit: true,
        };
        for id in &ids {
            let a = query_relation(&kb, id, "REL-A", opts, &with_triple).unwrap();
            let b = query_relation(&kb, id, "REL-A", opts, &with_rule).unwrap();
            let va: BTreeSet<&str> = a.iter().map(|h| h.value.as_str()).collect();
            let vb: BTreeSet<&str> = b.iter().map(|h| h.value.as_str()).collect();
            assert_eq!(va, vb, "seed {seed}, unit {id}");
        }
    }
}

#[test]
fn three_atom_rule_chains() {
    let mut kb = standard_kb();
    for name in ["REL-A", "REL-B", "REL-C", "REL-D"] {
        kb.define_slot(SlotDefinition::new(
            name,
            SlotLevel::Relational,
            InheritanceRole::Union,
            ValueKind::UnitRef,
        ))
        .unwrap();
    }
    for id in ["n1 I 1", "n2 I 1", "n3 I 1", "n4 I 1"] {
        concept(&mut kb, id);
    }
    kb.add_value("n1 I 1", "REL-A", Value::Unit(UnitId::from("n2 I 1")))
        .unwrap();
    kb.add_value("n2 I 1", "REL-B", Value::Unit(UnitId::from("n3 I 1")))
        .unwrap();
    kb.add_value("n3 I 1", "REL-C", Value::Unit(UnitId::from("n4 I 1")))
        .unwrap();

    let mut rules = RuleSet::default();
    let var = |v: &str| Term::Var(v.to_string());
    rules
        .declare_rule(
            &kb,
            CompositionRule {
                name: "chain3".into(),
                body: vec![
                    Atom {
                        subject: var("X"),
                        relation: "REL-A".into(),
                        object: var("Y"),
                    },
                    Atom {
                        subject: var("Y"),
                        relation: "REL-B".into(),
                        object: var("Z"),
                    },
                    Atom {
                        subject: var("Z"),
                        relation: "REL-C".into(),
                        object: var("W"),
                    },
                ],
                head: Atom {
                    subject: var("X"),
                    relation: "REL-D".into(),
                    object: var("W"),
                },
            },
        )
        .unwrap();

    // hand fixpoint: the only REL-D fact is (n1, REL-D, n4)
    let opts = QueryOptions {
        deduce: true,
        ..QueryOptions::default()
    };
    let hits = query_relation(&kb, "n1 I 1", "REL-D", opts, &rules).unwrap();
    assert_values(&hits, &["n4 I 1"]);
    for id in ["n2 I 1", "n3 I 1", "n4 I 1"] {
        assert!(query_relation(&kb, id, "REL-D", opts, &rules)
            .unwrap()
            .is_empty());
    }
}

#[test]
fn rule_validation_rejects_bad_shapes() {
    let kb = standard_kb();
    let var = |v: &str| Term::Var(v.to_string());
    let mut rules = RuleSet::default();

    // head variable not in body
    let err = rules
        .declare_rule(
            &kb,
            CompositionRule {
                name: "bad-head".into(),
                body: vec![
                    Atom {
                        subject: var("X"),
                        relation: "PARTIE-DE".into(),
                        object: var("Y"),
                    },
                    Atom {
                        subject: var("Y"),
                        relation: "PARTIE-DE".into(),
                        object: var("Y"),
                    },
                ],
                head: Atom {
                    subject: var("X"),
                    relation: "PARTIE-DE".into(),
                    object: var("Z"),
                },
            },
        )
        .unwrap_err();
    assert!(matches!(err, InferError::UnboundHeadVariable(_, _)));

    // single-atom body
    let err = rules
        .declare_rule(
            &kb,
            CompositionRule {
                name: "short".into(),
                body: vec![Atom {
                    subject: var("X"),
                    relation: "PARTIE-DE".into(),
                    object: var("Y"),
                }],
                head: Atom {
                    subject: var("X"),
                    relation: "PARTIE-DE".into(),
                    object: var("Y"),
                },
            },
        )
        .unwrap_err();
    assert!(matches!(err, InferError::BodyTooShort(_)));

    // second atom's subject never bound
    let err = rules
        .declare_rule(
            &kb,
            CompositionRule {
                name: "floating".into(),
                body: vec![
                    Atom {
                        subject: var("X"),
                        relation: "PARTIE-DE".into(),
                        object: var("Y"),
                    },
                    Atom {
                        subject: var("W"),
                        relation: "PARTIE-DE".into(),
                        object: var("Z"),
                    },
                ],
                head: Atom {
                    subject: var("X"),
                    relation: "PARTIE-DE".into(),
                    object: var("Y"),
                },
            },
        )
        .unwrap_err();
    assert!(matches!(err, InferError::NotWellModed(_, _)));

    // unknown relation
    let err = rules
        .declare_rule(
            &kb,
            CompositionRule {
                name: "ghost".into(),
                body: vec![
                    Atom {
                        subject: var("X"),
                        relation: "GHOST".into(),
                        object: var("Y"),
                    },
                    Atom {
                        subject: var("Y"),
                        relation: "GHOST".into(),
                        object: var("Z"),
                    },
                ],
                head: Atom {
                    subject: var("X"),
                    relation: "GHOST".into(),
                    object: var("Z"),
                },
            },
        )
        .unwrap_err();
    assert!(matches!(err, InferError::UnknownRelation(_)));
}

#[test]
fn alias_resolution_and_errors() {
    let kb = standard_kb();
    let rules = parse_rules_file(
        "alias partie I 1 PARTIE-DE\nalias objectif I 1 OBJECTIF\nalias synonyme I 1 SYNONYMES\n",
    )
    .unwrap();
    rules.validate(&kb).unwrap();

    let reference = crate::concept::ConceptRef::parse("partie I 1").unwrap();
    assert_eq!(
        resolve_relation_alias(&reference, &rules).unwrap(),
        "PARTIE-DE"
    );

    let unknown = crate::concept::ConceptRef::parse("peinture I 1").unwrap();
    match resolve_relation_alias(&unknown, &rules) {
        Err(InferError::NoAlias { nearest, .. }) => {
            assert!(!nearest.is_empty(), "error names nearest alias entries");
        }
        other => panic!("expected NoAlias, got {other:?}"),
    }

    // alias targets must be defined relations
    let bad = parse_rules_file("alias partie I 1 INCONNU\n").unwrap();
    assert!(matches!(
        bad.validate(&kb),
        Err(InferError::UnknownRelation(_))
    ));
}

#[test]
fn rules_file_round_trip() {
    let text = "\
# comment
triple PARTIE-DE PARTIE-DE PARTIE-DE
rule X OBJECTIF Y and Y CE-QUI Z => X OBJECTIF Z
rule X CARACTERISTIQUE Y and Y SYNONYMES plat I 1 => X CARACTERISTIQUE plat I 1
alias partie I 1 PARTIE-DE
";
    let rules = parse_rules_file(text).unwrap();
    assert_eq!(rules.triples.len(), 1);
    assert_eq!(rules.rules.len(), 2);
    assert_eq!(
        rules.rules[1].body[1].object,
        Term::Const(UnitId::from("plat I 1")),
        "multi-token constants parse"
    );
    assert_eq!(
        rules.aliases,
        vec![("partie I 1".to_string(), "PARTIE-DE".to_string())]
    );

    assert!(parse_rules_file("nonsense line\n").is_err());
    assert!(parse_rules_file("triple A B\n").is_err());
    assert!(
        parse_rules_file("rule X A Y => X A Y\n").is_err(),
        "missing `and` means one atom"
    );
}

/// Random relational graph over fresh relations with no inverses.
fn random_graph(
    rng: &mut impl rand::Rng,
    max_nodes: usize,
    relations: &[&str],
    max_edges: usize,
) -> (KnowledgeBase, Vec<String>) {
    let mut kb = standard_kb();
    for name in relations {
        if !kb.has_slot(name) {
            kb.define_slot(SlotDefinition::new(
                name,
                SlotLevel::Relational,
                InheritanceRole::Union,
                ValueKind::UnitRef,
            ))
            .unwrap();
        }
    }
    let n = rng.gen_range(3..=max_nodes);
    let ids: Vec<String> = (0..n).map(|i| format!("noeud{i} I 1")).collect();
    for id in &ids {
        concept(&mut kb, id);
    }
    for _ in 0..rng.gen_range(1..=max_edges) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let r = relations[rng.gen_range(0..relations.len())];
        kb.add_value(&ids[a], r, Value::Unit(UnitId::from(ids[b].as_str())))
            .unwrap();
    }
    (kb, ids)
}

/// Semi-naive forward-chaining oracle over triples: iterate the rule set
/// against the growing fact set until fixpoint.
pub(crate) fn forward_fixpoint(
    facts: &BTreeSet<(String, String, String)>,
    triples: &[CompositionTriple],
) -> BTreeSet<(String, String, String)> {
    let mut all = facts.clone();
    let mut frontier = facts.clone();
    while !frontier.is_empty() {
        let mut fresh = BTreeSet::new();
        for t in triples {
            // join frontier facts with all facts in both orders
            for (x, r1, y) in all.iter().chain(frontier.iter()) {
                if *r1 != t.r1 {
                    continue;
                }
                for (y2, r2, z) in all.iter() {
                    if *r2 == t.r2 && y2 == y {
                        let fact = (x.clone(), t.r3.clone(), z.clone());
                        if !all.contains(&fact) {
                            fresh.insert(fact);
                        }
                    }
                }
            }
            for (x, r1, y) in all.iter() {
                if *r1 != t.r1 {
                    continue;
                }
                for (y2, r2, z) in frontier.iter() {
                    if *r2 == t.r2 && y2 == y {
                        let fact = (x.clone(), t.r3.clone(), z.clone());
                        if !all.contains(&fact) {
                            fresh.insert(fact);
                        }
                    }
                }
            }
        }
        all.extend(fresh.iter().cloned());
        frontier = fresh;
    }
    all
}

pub(crate) fn kb_facts(
    kb: &KnowledgeBase,
    relations: &[&str],
) -> BTreeSet<(String, String, String)> {
    let mut facts = BTreeSet::new();
    for unit in kb.units() {
        for r in relations {
            if let Ok(values) = kb.local_values(unit.id.as_str(), r) {
                for sv in values {
                    if let Value::Unit(v) = sv.value {
                        facts.insert((unit.id.0.clone(), r.to_string(), v.0));
                    }
                }
            }
        }
    }
    facts
}

#[test]
fn random_graphs_match_forward_oracle() {
    use rand::{Rng, SeedableRng};
    let relations = ["REL-A", "REL-B", "REL-C"];
    for seed in 0..25u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (kb, ids) = random_graph(&mut rng, 12, &relations, 20);
        let mut rules = RuleSet::default();
        for _ in 0..rng.gen_range(1..=4) {
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| relations[rng.gen_range(0..3)];
            let t = CompositionTriple::new(pick(&mut rng), pick(&mut rng), pick(&mut rng));
            if !rules.triples.contains(&t) {
                rules.triples.push(t);
            }
        }

        let closure = forward_fixpoint(&kb_facts(&kb, &relations), &rules.triples);
        let opts = QueryOptions {
            deduce: true,
            depth_limit: 64,
            inherit: true,
        };
        for id in &ids {
            for r in &relations {
                let hits = query_relation(&kb, id, r, opts, &rules).unwrap();
                let got: BTreeSet<String> = hits.iter().map(|h| h.value.0.clone()).collect();
                let want: BTreeSet<String> = closure
                    .iter()
                    .filter(|(x, rel, _)| x == id && rel == r)
                    .map(|(_, _, z)| z.clone())
                    .collect();
                assert_eq!(got, want, "seed {seed}, unit {id}, relation {r}");

                // soundness: every derived hit replays against the base
                for hit in &hits {
                    if let Provenance::Derived(trace) = &hit.provenance {
                        let fact = (UnitId::from(id.as_str()), r.to_string(), hit.value.clone());
                        assert!(
                            replay_trace(&kb, trace, &fact, true),
                            "seed {seed}: unsound trace"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn derived_set_is_monotone_in_depth() {
    use rand::SeedableRng;
    for seed in 0..10u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (kb, ids) = random_graph(&mut rng, 10, &["REL-A"], 14);
        let mut rules = RuleSet::default();
        rules
            .triples
            .push(CompositionTriple::new("REL-A", "REL-A", "REL-A"));

        let mut previous: Option<BTreeSet<String>> = None;
        for depth in 1..=12 {
            let opts = QueryOptions {
                deduce: true,
                depth_limit: depth,
                inherit: true,
            };
            let hits = query_relation(&kb, &ids[0], "REL-A", opts, &rules).unwrap();
            let values: BTreeSet<String> = hits.into_iter().map(|h| h.value.0).collect();
            if let Some(prev) = &previous {
                assert!(
                    prev.is_subset(&values),
                    "seed {seed}: derived({}) ⊄ derived({})",
                    depth - 1,
                    depth
                );
            }
            previous = Some(values);
        }
    }
}

#[test]
fn queries_never_mutate_the_base() {
    let mut kb = standard_kb();
    declare_default_triples(&mut kb).unwrap();
    for id in ["a I 1", "b I 1", "c I 1"] {
        concept(&mut kb, id);
    }
    kb.add_value("a I 1", "PARTIE-DE", Value::Unit(UnitId::from("b I 1")))
        .unwrap();
    kb.add_value("b I 1", "PARTIE-DE", Value::Unit(UnitId::from("c I 1")))
        .unwrap();
    kb.freeze();

    let before = crate::frame::export_snapshot(&kb);
    let opts = QueryOptions {
        deduce: true,
        ..QueryOptions::default()
    };
    for _ in 0..50 {
        query_relation(&kb, "a I 1", "PARTIE-DE", opts, &RuleSet::default()).unwrap();
        query_relation(&kb, "c I 1", "PARTIE-DE+INV", opts, &RuleSet::default()).unwrap();
    }
    assert_eq!(crate::frame::export_snapshot(&kb), before);
}

#[test]
fn unknown_unit_and_relation_error() {
    let kb = standard_kb();
    assert!(query_relation(
        &kb,
        "fantôme I 1",
        "PARTIE-DE",
        QueryOptions::default(),
        &RuleSet::default()
    )
    .is_err());
    let mut kb = standard_kb();
    concept(&mut kb, "a I 1");
    assert!(matches!(
        query_relation(
            &kb,
            "a I 1",
            "INCONNU",
            QueryOptions::default(),
            &RuleSet::default()
        ),
        Err(InferError::UnknownRelation(_))
    ));
}

#[test]
fn frozen_base_serves_concurrent_queries() {
    let (mut kb, _) = crate::build::tests::build_fixture(crate::build::tests::DEMO_LEXICON);
    declare_default_triples(&mut kb).unwrap();
    kb.freeze();
    let kb = &kb;
    let expected = {
        let opts = QueryOptions {
            deduce: true,
            ..QueryOptions::default()
        };
        query_relation(kb, "géranium I 1", "OBJECTIF", opts, &RuleSet::default()).unwrap()
    };
    let expected = &expected;
    std::thread::scope(|scope| {
        for _ in 0..8 {
            scope.spawn(move || {
                let rules = RuleSet::default();
                let opts = QueryOptions {
                    deduce: true,
                    ..QueryOptions::default()
                };
                for _ in 0..25 {
                    let hits =
                        query_relation(kb, "géranium I 1", "OBJECTIF", opts, &rules).unwrap();
                    assert_eq!(&hits, expected);
                }
            });
        }
    });
}
