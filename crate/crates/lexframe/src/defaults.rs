//! The standard slot-definition table.
//!
//! Installs the relation inventory the builder and the deduction layer rely
//! on: general-information slots, the DEF-* definitory slots, syntagmatic
//! slots with their default relational correspondents, and the relational
//! slots with automatic inverses. HYPERONYME/HYPONYME are taxonomy-backed:
//! asserting them moves the subclass hierarchy, which is also what gives
//! value inheritance for free.

use crate::frame::{
    InheritanceRole, KnowledgeBase, SlotDefinition, SlotLevel, TaxonomyOrientation, ValueKind,
    SLOT_MOTS_ENTREE, SLOT_SENS,
};

pub const SLOT_GROUPE_CATEGORIEL: &str = "GROUPE-CATEGORIEL";
pub const SLOT_TEXTE_DEFINITION: &str = "TEXTE-DEFINITION";
pub const SLOT_TEXTE: &str = "TEXTE";

pub const SLOT_DEF_CLASSIQUE: &str = "DEF-CLASSIQUE";
pub const SLOT_DEF_RENDRE: &str = "DEF-RENDRE";
pub const SLOT_DEF_QUI: &str = "DEF-QUI";
pub const SLOT_DEF_SORTED: &str = "DEF-SORTED";

/// The definition slots a successful parse may populate.
pub const DEFINITION_SLOTS: [&str; 4] = [
    SLOT_DEF_CLASSIQUE,
    SLOT_DEF_RENDRE,
    SLOT_DEF_QUI,
    SLOT_DEF_SORTED,
];

pub const SLOT_DE: &str = "DE";
pub const SLOT_OBJET: &str = "OBJET";
pub const SLOT_QUALIFICATIF: &str = "QUALIFICATIF";
pub const SLOT_AVEC: &str = "AVEC";

pub const SLOT_HYPERONYME: &str = "HYPERONYME";
pub const SLOT_HYPONYME: &str = "HYPONYME";
pub const SLOT_SYNONYMES: &str = "SYNONYMES";
pub const SLOT_SORTE_DE: &str = "SORTE-DE";
pub const SLOT_DEFINI_PAR: &str = "DEFINI-PAR";
pub const SLOT_DEFINITION_DE: &str = "DEFINITION-DE";
pub const SLOT_CARACTERISTIQUE: &str = "CARACTERISTIQUE";
pub const SLOT_OBJECTIF: &str = "OBJECTIF";
pub const SLOT_PARTIE_DE: &str = "PARTIE-DE";
pub const SLOT_MEMBRE_DE: &str = "MEMBRE-DE";
pub const SLOT_LOCATIF: &str = "LOCATIF";
pub const SLOT_CE_QUI: &str = "CE-QUI";
pub const SLOT_QUI_A: &str = "QUI-A";
pub const SLOT_POSSESSION: &str = "POSSESSION";

fn general(name: &str, kind: ValueKind) -> SlotDefinition {
    SlotDefinition::new(name, SlotLevel::GeneralInfo, InheritanceRole::Inhibit, kind)
}

fn definitory(name: &str) -> SlotDefinition {
    SlotDefinition::new(
        name,
        SlotLevel::Definitory,
        InheritanceRole::Inhibit,
        ValueKind::UnitRef,
    )
}

fn syntagmatic(name: &str, correspondents: &[&str]) -> SlotDefinition {
    SlotDefinition::new(
        name,
        SlotLevel::Syntagmatic,
        InheritanceRole::Inhibit,
        ValueKind::UnitRef,
    )
    .with_correspondents(
        correspondents
            .iter()
            .map(|c| (c.to_string(), None))
            .collect(),
    )
}

fn relational(name: &str, inverse: &str, role: InheritanceRole) -> SlotDefinition {
    SlotDefinition::new(name, SlotLevel::Relational, role, ValueKind::UnitRef).with_inverse(inverse)
}

/// Install the standard table into `kb`.
pub fn install_standard_slots(kb: &mut KnowledgeBase) {
    // taxonomic pair, backed by the subclass hierarchy
    let mut hyperonyme = relational(SLOT_HYPERONYME, SLOT_HYPONYME, InheritanceRole::Union);
    hyperonyme.taxonomy = Some(TaxonomyOrientation::Up);

    let defs = vec![
        general(SLOT_GROUPE_CATEGORIEL, ValueKind::Literal),
        general(SLOT_TEXTE_DEFINITION, ValueKind::Text),
        general(SLOT_TEXTE, ValueKind::Text),
        SlotDefinition::new(
            SLOT_SENS,
            SlotLevel::GeneralInfo,
            InheritanceRole::Inhibit,
            ValueKind::UnitRef,
        )
        .with_inverse(SLOT_MOTS_ENTREE),
        definitory(SLOT_DEF_CLASSIQUE),
        definitory(SLOT_DEF_RENDRE),
        definitory(SLOT_DEF_QUI),
        definitory(SLOT_DEF_SORTED),
        syntagmatic(
            SLOT_DE,
            &["ORIGINE", "POSSESSEUR", "MATIERE", SLOT_OBJECTIF],
        ),
        syntagmatic(SLOT_OBJET, &["THEME"]),
        syntagmatic(SLOT_QUALIFICATIF, &[SLOT_CARACTERISTIQUE]),
        syntagmatic(SLOT_AVEC, &[SLOT_QUI_A]),
        hyperonyme,
        relational(SLOT_SYNONYMES, SLOT_SYNONYMES, InheritanceRole::Inhibit),
        relational("ANTONYMES", "ANTONYMES", InheritanceRole::Inhibit),
        relational(
            SLOT_DEFINI_PAR,
            SLOT_DEFINITION_DE,
            InheritanceRole::Inhibit,
        ),
        relational(SLOT_SORTE_DE, "SORTE-DE+INV", InheritanceRole::Union),
        relational(
            SLOT_CARACTERISTIQUE,
            "CARACTERISTIQUE+INV",
            InheritanceRole::Union,
        ),
        relational(SLOT_OBJECTIF, "OBJECTIF+INV", InheritanceRole::Union),
        relational(SLOT_PARTIE_DE, "PARTIE-DE+INV", InheritanceRole::Union),
        relational(SLOT_MEMBRE_DE, "MEMBRE-DE+INV", InheritanceRole::Union),
        relational(SLOT_LOCATIF, "LOCATIF+INV", InheritanceRole::Union),
        relational(SLOT_CE_QUI, "CE-QUI+INV", InheritanceRole::Union),
        relational(SLOT_QUI_A, "QUI-A+INV", InheritanceRole::Union),
        relational(SLOT_POSSESSION, "POSSESSION+INV", InheritanceRole::Union),
        relational("ORIGINE", "ORIGINE+INV", InheritanceRole::Union),
        relational("POSSESSEUR", "POSSESSEUR+INV", InheritanceRole::Union),
        relational("MATIERE", "MATIERE+INV", InheritanceRole::Union),
        relational("THEME", "THEME+INV", InheritanceRole::Union),
        relational("RENDRE", "RENDRE+INV", InheritanceRole::Union),
        relational("QUI", "QUI+INV", InheritanceRole::Union),
        relational("AGENT", "AGENT+INV", InheritanceRole::Union),
    ];
    for def in defs {
        kb.define_slot(def)
            .expect("standard slot table is consistent");
    }
}

/// A fresh knowledge base with built-in classes and the standard slots.
pub fn standard_kb() -> KnowledgeBase {
    let mut kb = KnowledgeBase::new();
    install_standard_slots(&mut kb);
    kb
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_table_installs_cleanly() {
        let kb = standard_kb();
        for name in [
            SLOT_HYPERONYME,
            SLOT_HYPONYME,
            SLOT_SYNONYMES,
            SLOT_SORTE_DE,
            "SORTE-DE+INV",
            SLOT_DEFINI_PAR,
            SLOT_DEFINITION_DE,
            SLOT_CE_QUI,
            SLOT_QUI_A,
            SLOT_POSSESSION,
            SLOT_PARTIE_DE,
            SLOT_MEMBRE_DE,
            SLOT_LOCATIF,
            SLOT_SENS,
            SLOT_MOTS_ENTREE,
        ] {
            assert!(kb.has_slot(name), "missing standard slot {name}");
        }
        // inverse symmetry: inv(inv(r)) = r
        for def in kb.slot_definitions() {
            if let Some(inv) = &def.inverse {
                let back = kb.slot_definition(inv).unwrap();
                assert_eq!(
                    back.inverse.as_deref(),
                    Some(def.name.as_str()),
                    "slot {}",
                    def.name
                );
            }
        }
    }

    #[test]
    fn hyponyme_mirror_reads_children() {
        let def = standard_kb()
            .slot_definition(SLOT_HYPONYME)
            .unwrap()
            .clone();
        assert_eq!(def.taxonomy, Some(crate::frame::TaxonomyOrientation::Down));
        assert_eq!(def.role, InheritanceRole::Inhibit);
    }
}
