//! A frame-network dictionary knowledge base.
//!
//! The pipeline reads a flat lexicon, partially parses each definition
//! sentence against a hierarchy of phrasal patterns, builds a network of
//! concept frames linked by lexical-semantic relations, enriches it by
//! exploiting relation properties (synonymy closure, taxonomy enlargement,
//! taxonomy-guided disambiguation), and answers queries with dynamic
//! deduction by composing relations at query time.

pub mod build;
pub mod concept;
pub mod defaults;
pub mod defparser;
pub mod enrich;
pub mod frame;
pub mod infer;
pub mod ingest;
pub mod query;

pub use build::{build_all, BuildReport};
pub use concept::{AmbiguityLevel, ConceptRef, Homograph, Sense};
pub use frame::{
    FacetValue, FrameError, InheritanceRole, KnowledgeBase, SlotDefinition, SlotLevel, SlotValue,
    Unit, UnitId, UnitKind, Value, ValueKind,
};
pub use ingest::{parse_lexicon, EntryRecord, Pos};
