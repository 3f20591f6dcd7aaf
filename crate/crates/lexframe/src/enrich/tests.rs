use super::*;
use crate::build::tests::{build_fixture, DEMO_LEXICON, GOLDEN_LEXICON};
use crate::defaults::{standard_kb, SLOT_GROUPE_CATEGORIEL, SLOT_PARTIE_DE, SLOT_SYNONYMES};
use crate::frame::{classes, UnitKind};

fn concept(kb: &mut KnowledgeBase, id: &str, pos: &str) -> UnitId {
    let uid = UnitId::from(id);
    kb.create_unit(
        uid.clone(),
        UnitKind::Concept,
        vec![],
        vec![UnitId::from(classes::NOMS)],
    )
    .unwrap();
    kb.add_value(id, SLOT_GROUPE_CATEGORIEL, Value::Text(pos.to_string()))
        .unwrap();
    uid
}

fn synonyms(kb: &KnowledgeBase, id: &str) -> Vec<String> {
    let mut out: Vec<String> = kb
        .local_values(id, SLOT_SYNONYMES)
        .unwrap()
        .into_iter()
        .filter_map(|sv| match sv.value {
            Value::Unit(u) => Some(u.0),
            _ => None,
        })
        .collect();
    out.sort();
    out
}

#[test]
fn symmetry_holds_after_assertion_and_closure() {
    let mut kb = standard_kb();
    concept(&mut kb, "a I 1", "NOM");
    concept(&mut kb, "b I 1", "NOM");
    kb.add_value("a I 1", SLOT_SYNONYMES, Value::Unit(UnitId::from("b I 1")))
        .unwrap();
    close_synonymy(&mut kb).unwrap();
    assert_eq!(synonyms(&kb, "b I 1"), vec!["a I 1"]);
    assert_eq!(synonyms(&kb, "a I 1"), vec!["b I 1"]);
}

#[test]
fn transitivity_is_closed() {
    let mut kb = standard_kb();
    for id in ["a I 1", "b I 1", "c I 1"] {
        concept(&mut kb, id, "NOM");
    }
    kb.add_value("a I 1", SLOT_SYNONYMES, Value::Unit(UnitId::from("b I 1")))
        .unwrap();
    kb.add_value("b I 1", SLOT_SYNONYMES, Value::Unit(UnitId::from("c I 1")))
        .unwrap();
    let added = close_synonymy(&mut kb).unwrap();
    assert_eq!(added, 2, "a~c and c~a");
    assert_eq!(synonyms(&kb, "a I 1"), vec!["b I 1", "c I 1"]);
    assert_eq!(synonyms(&kb, "c I 1"), vec!["a I 1", "b I 1"]);
    // no self-loops anywhere
    for id in ["a I 1", "b I 1", "c I 1"] {
        assert!(!synonyms(&kb, id).contains(&id.to_string()));
    }
    // idempotent
    assert_eq!(close_synonymy(&mut kb).unwrap(), 0);
}

#[test]
fn closure_respects_pos_boundaries() {
    let mut kb = standard_kb();
    concept(&mut kb, "n1 I 1", "NOM");
    concept(&mut kb, "v1 I 1", "VERBE");
    concept(&mut kb, "n2 I 1", "NOM");
    // a cross-POS arc bridges the component but composes only same-POS pairs
    kb.add_value(
        "n1 I 1",
        SLOT_SYNONYMES,
        Value::Unit(UnitId::from("v1 I 1")),
    )
    .unwrap();
    kb.add_value(
        "v1 I 1",
        SLOT_SYNONYMES,
        Value::Unit(UnitId::from("n2 I 1")),
    )
    .unwrap();
    close_synonymy(&mut kb).unwrap();
    assert!(
        synonyms(&kb, "n1 I 1").contains(&"n2 I 1".to_string()),
        "same-POS pair added"
    );
    assert_eq!(
        synonyms(&kb, "n1 I 1").len(),
        2,
        "the original cross-POS arc is kept, never deleted"
    );
}

/// Boolean-matrix oracle: symmetric-transitive closure by fixpoint, then
/// restricted to POS-compatible pairs (input arcs always kept).
fn matrix_closure(n: usize, edges: &[(usize, usize)], pos: &[Option<&str>]) -> Vec<Vec<bool>> {
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in edges {
        reach[a][b] = true;
        reach[b][a] = true;
    }
    loop {
        let mut grew = false;
        for i in 0..n {
            for j in 0..n {
                if !reach[i][j] {
                    continue;
                }
                for k in 0..n {
                    if reach[j][k] && !reach[i][k] && i != k {
                        reach[i][k] = true;
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    for i in 0..n {
        reach[i][i] = false;
        for j in 0..n {
            let compatible = match (pos[i], pos[j]) {
                (Some(x), Some(y)) => x == y,
                _ => true,
            };
            if !compatible && reach[i][j] {
                let input = edges
                    .iter()
                    .any(|&(a, b)| (a, b) == (i, j) || (b, a) == (i, j));
                if !input {
                    reach[i][j] = false;
                }
            }
        }
    }
    reach
}

#[test]
fn random_graph_matches_matrix_oracle() {
    use rand::{Rng, SeedableRng};
    for seed in 0..25u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(3..=20);
        let mut kb = standard_kb();
        let pos_choices = ["NOM", "VERBE", "ADJECTIF"];
        let mut pos: Vec<Option<&str>> = Vec::new();
        let ids: Vec<String> = (0..n).map(|i| format!("mot{i} I 1")).collect();
        for id in &ids {
            let p = if rng.gen_bool(0.85) {
                Some(pos_choices[rng.gen_range(0..3)])
            } else {
                None
            };
            pos.push(p);
            match p {
                Some(p) => {
                    concept(&mut kb, id, p);
                }
                None => {
                    kb.create_unit(
                        UnitId::from(id.as_str()),
                        UnitKind::Reference,
                        vec![],
                        vec![UnitId::from(classes::REFERENCES)],
                    )
                    .unwrap();
                }
            }
        }
        let mut edges = Vec::new();
        for _ in 0..rng.gen_range(0..=n * 2) {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b {
                edges.push((a, b));
                kb.add_value(
                    &ids[a],
                    SLOT_SYNONYMES,
                    Value::Unit(UnitId::from(ids[b].as_str())),
                )
                .unwrap();
            }
        }
        close_synonymy(&mut kb).unwrap();
        let expected = matrix_closure(n, &edges, &pos);
        for i in 0..n {
            let got = synonyms(&kb, &ids[i]);
            let mut want: Vec<String> = (0..n)
                .filter(|&j| expected[i][j])
                .map(|j| ids[j].clone())
                .collect();
            want.sort();
            assert_eq!(got, want, "seed {seed}, node {i}");
        }
        assert_eq!(
            close_synonymy(&mut kb).unwrap(),
            0,
            "seed {seed}: idempotent"
        );
    }
}

#[test]
fn genus_less_synonym_borrows_hypernyms() {
    let mut kb = standard_kb();
    concept(&mut kb, "a I 1", "VERBE");
    concept(&mut kb, "b I 1", "VERBE");
    concept(&mut kb, "g I 1", "VERBE");
    kb.add_parent("a I 1", "g I 1").unwrap();
    kb.add_value("a I 1", SLOT_SYNONYMES, Value::Unit(UnitId::from("b I 1")))
        .unwrap();
    close_synonymy(&mut kb).unwrap();
    let added = extend_taxonomy_by_synonymy(&mut kb).unwrap();
    assert_eq!(added, 2, "HYPERONYME and HYPONYME directions");
    assert!(kb
        .unit("b I 1")
        .unwrap()
        .parents
        .contains(&UnitId::from("g I 1")));
    assert_eq!(
        extend_taxonomy_by_synonymy(&mut kb).unwrap(),
        0,
        "idempotent"
    );
}

#[test]
fn concepts_with_a_genus_are_untouched() {
    let mut kb = standard_kb();
    concept(&mut kb, "a I 1", "NOM");
    concept(&mut kb, "b I 1", "NOM");
    concept(&mut kb, "ga I 1", "NOM");
    concept(&mut kb, "gb I 1", "NOM");
    kb.add_parent("a I 1", "ga I 1").unwrap();
    kb.add_parent("b I 1", "gb I 1").unwrap();
    kb.add_value("a I 1", SLOT_SYNONYMES, Value::Unit(UnitId::from("b I 1")))
        .unwrap();
    close_synonymy(&mut kb).unwrap();
    assert_eq!(extend_taxonomy_by_synonymy(&mut kb).unwrap(), 0);
    assert_eq!(
        kb.unit("b I 1").unwrap().parents,
        vec![UnitId::from("gb I 1")]
    );
}

#[test]
fn synonym_chain_spreads_the_genus() {
    let mut kb = standard_kb();
    for id in ["a I 1", "b I 1", "c I 1", "g I 1"] {
        concept(&mut kb, id, "NOM");
    }
    kb.add_parent("a I 1", "g I 1").unwrap();
    kb.add_value("a I 1", SLOT_SYNONYMES, Value::Unit(UnitId::from("b I 1")))
        .unwrap();
    kb.add_value("b I 1", SLOT_SYNONYMES, Value::Unit(UnitId::from("c I 1")))
        .unwrap();
    close_synonymy(&mut kb).unwrap();
    extend_taxonomy_by_synonymy(&mut kb).unwrap();
    for id in ["b I 1", "c I 1"] {
        assert!(
            kb.unit(id)
                .unwrap()
                .parents
                .contains(&UnitId::from("g I 1")),
            "{id} gains the genus through the closed synonym set"
        );
    }
}

/// Hand-built fixture in the shape of the panser example: an ambiguous
/// reference whose candidate senses sit under different ancestries, with
/// the arc source sharing one of them.
fn disambiguation_fixture() -> (KnowledgeBase, UnitId) {
    let mut kb = standard_kb();
    for id in [
        "soigner I 1",
        "recouvrir I 1",
        "panser I 1",
        "panser I 2",
        "blesser I 1",
    ] {
        concept(&mut kb, id, "VERBE");
    }
    kb.add_parent("panser I 1", "soigner I 1").unwrap();
    kb.add_parent("panser I 2", "recouvrir I 1").unwrap();
    kb.add_parent("blesser I 1", "soigner I 1").unwrap();
    let amb = crate::build::ensure_reference(
        &mut kb,
        &crate::concept::ConceptRef::parse("panser I ?").unwrap(),
    )
    .unwrap();
    kb.add_value("blesser I 1", SLOT_PARTIE_DE, Value::Unit(amb.clone()))
        .unwrap();
    (kb, amb)
}

#[test]
fn unique_ancestor_intersection_resolves() {
    let (mut kb, amb) = disambiguation_fixture();
    let (resolved, unresolved) = disambiguate(&mut kb).unwrap();
    assert_eq!(
        (resolved, unresolved),
        (1, 0),
        "the arc re-targets; its inverse moves with it"
    );
    let targets = kb.local_values("blesser I 1", SLOT_PARTIE_DE).unwrap();
    assert_eq!(targets.len(), 1);
    assert_eq!(targets[0].value, Value::Unit(UnitId::from("panser I 1")));
    assert!(
        !kb.contains(amb.as_str()),
        "orphaned ambiguity unit is dropped"
    );
    kb.validate()
        .expect("inverse pairs preserved by re-targeting");
    assert_eq!(disambiguate(&mut kb).unwrap(), (0, 0), "idempotent");
}

#[test]
fn shared_ancestry_stays_ambiguous() {
    let mut kb = standard_kb();
    for id in ["soigner I 1", "panser I 1", "panser I 2", "blesser I 1"] {
        concept(&mut kb, id, "VERBE");
    }
    kb.add_parent("panser I 1", "soigner I 1").unwrap();
    kb.add_parent("panser I 2", "soigner I 1").unwrap();
    kb.add_parent("blesser I 1", "soigner I 1").unwrap();
    let amb = crate::build::ensure_reference(
        &mut kb,
        &crate::concept::ConceptRef::parse("panser I ?").unwrap(),
    )
    .unwrap();
    kb.add_value("blesser I 1", SLOT_PARTIE_DE, Value::Unit(amb.clone()))
        .unwrap();
    let (resolved, unresolved) = disambiguate(&mut kb).unwrap();
    assert_eq!(resolved, 0, "both candidates intersect: tie");
    assert_eq!(unresolved, 1);
    assert!(kb.contains(amb.as_str()));
}

#[test]
fn homographe_ambiguity_is_out_of_scope() {
    let mut kb = standard_kb();
    concept(&mut kb, "livre I 1", "NOM");
    concept(&mut kb, "blesser I 1", "VERBE");
    let amb = crate::build::ensure_reference(
        &mut kb,
        &crate::concept::ConceptRef::parse("livre ? ?").unwrap(),
    )
    .unwrap();
    kb.add_value("blesser I 1", SLOT_PARTIE_DE, Value::Unit(amb.clone()))
        .unwrap();
    let (resolved, _) = disambiguate(&mut kb).unwrap();
    assert_eq!(resolved, 0);
    assert!(
        kb.contains(amb.as_str()),
        "HOMOGRAPHE units are never touched"
    );
}

#[test]
fn stats_line_formats_all_five_fields() {
    let stats = KbStats {
        entries: 2400,
        units: 6130,
        phrasal: 1738,
        ambiguous: 1255,
        arcs: 19691,
    };
    assert_eq!(
        stats.to_text(),
        "entries=2400 units=6130 phrasal=1738 ambiguous=1255 arcs=19691"
    );
}

#[test]
fn empty_base_counts_zero() {
    let stats = kb_stats(&standard_kb());
    assert_eq!(
        stats,
        KbStats {
            entries: 0,
            units: 0,
            phrasal: 0,
            ambiguous: 0,
            arcs: 0
        }
    );
}

#[test]
fn enrichment_report_matches_hand_recount() {
    let (mut kb, _) = build_fixture(DEMO_LEXICON);
    let before = kb.relational_arc_count();
    let report = enrich_all(&mut kb).unwrap();
    assert_eq!(report.arcs_before, before);
    assert_eq!(report.arcs_after, kb.relational_arc_count());
    assert!(
        report.arcs_after > report.arcs_before,
        "demo corpus strictly enriches"
    );
    let expected =
        (report.arcs_after as f64 - report.arcs_before as f64) / report.arcs_before as f64;
    assert!((report.percent_increase - expected).abs() < 1e-12);
    kb.validate().expect("invariants hold after enrichment");

    // second run adds nothing
    let again = enrich_all(&mut kb).unwrap();
    assert_eq!(again.arcs_before, again.arcs_after);
    assert_eq!(again.synonymy_arcs_added, 0);
    assert_eq!(again.taxonomy_arcs_added, 0);
}

#[test]
fn demo_corpus_enrichment_effects() {
    let (mut kb, _) = build_fixture(DEMO_LEXICON);
    enrich_all(&mut kb).unwrap();

    // bêcher ~ labourer ~ cultiver closed into a clique
    assert!(synonyms(&kb, "bêcher I 1").contains(&"cultiver I 1".to_string()));
    // the genus-less chain members borrowed cultiver's genus
    for id in ["bêcher I 1", "labourer I 1"] {
        assert!(
            kb.unit(id)
                .unwrap()
                .parents
                .contains(&UnitId::from("travailler I 1")),
            "{id} should gain HYPERONYME travailler"
        );
    }
    // the ambiguous feuille reference resolved to the plant sense
    let targets = kb.local_values("pétiole I 1", SLOT_PARTIE_DE).unwrap();
    assert_eq!(targets.len(), 1);
    assert_eq!(targets[0].value, Value::Unit(UnitId::from("feuille I 1")));
}

#[test]
fn golden_corpus_invariants_after_enrichment() {
    let (mut kb, _) = build_fixture(GOLDEN_LEXICON);
    enrich_all(&mut kb).unwrap();
    kb.validate().expect("invariants hold");
    // SYNONYMES never inherited across hypernym links
    for unit in kb.unit_ids_sorted() {
        assert_eq!(
            kb.local_values(unit.as_str(), SLOT_SYNONYMES).unwrap(),
            kb.inherited_values(unit.as_str(), SLOT_SYNONYMES).unwrap(),
            "unit {unit}"
        );
    }
}

#[test]
fn retargeting_preserves_the_arc_count() {
    let (mut kb, _) = disambiguation_fixture();
    let before = kb.relational_arc_count();
    let (resolved, _) = disambiguate(&mut kb).unwrap();
    assert_eq!(resolved, 1);
    assert_eq!(
        kb.relational_arc_count(),
        before,
        "one removed, one added, inverses paired"
    );
}
