//! Backward chaining over composition rules.
//!
//! Asking for a relation value collects the explicit values, the values
//! visible through inheritance, and the least fixpoint of every rule whose
//! head derives the relation. Goals are tabled with a memo keyed on
//! (unit, relation); self-referential goals (transitive triples) converge
//! by re-running discovered goals until no answer is added. The depth limit
//! bounds how far subgoals may sit from the root goal, so the derived set
//! grows monotonically with it.

use std::collections::BTreeMap;

use indexmap::IndexMap;

use super::{CompositionRule, InferError, RuleSet, Term};
use crate::frame::{KnowledgeBase, SlotLevel, UnitId, Value};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryOptions {
    pub deduce: bool,
    pub depth_limit: u32,
    pub inherit: bool,
}

impl Default for QueryOptions {
    fn default() -> Self {
        QueryOptions {
            deduce: false,
            depth_limit: 8,
            inherit: true,
        }
    }
}

/// One applied rule instance: the premises it consumed and the fact it
/// concluded. A trace is a replayable sequence of steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub source: String,
    pub premises: Vec<(UnitId, String, UnitId)>,
    pub conclusion: (UnitId, String, UnitId),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace(pub Vec<TraceStep>);

impl Trace {
    /// Intermediate units on the final step, for display.
    pub fn intermediates(&self) -> Vec<&UnitId> {
        match self.0.last() {
            Some(step) => step.premises.iter().map(|(_, _, o)| o).collect(),
            None => Vec::new(),
        }
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for step in &self.0 {
            let premises: Vec<String> = step
                .premises
                .iter()
                .map(|(s, r, o)| format!("|{s}| {r} |{o}|"))
                .collect();
            parts.push(format!("{}: {}", step.source, premises.join(" and ")));
        }
        parts.join("; ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Explicit,
    Inherited,
    Derived(Trace),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryHit {
    pub value: UnitId,
    pub provenance: Provenance,
}

/// Ask for the values of `relation` on `unit`. Results are deduplicated
/// with provenance preference explicit > inherited > derived; the scratch
/// context holding derived facts is dropped on return.
pub fn query_relation(
    kb: &KnowledgeBase,
    unit: &str,
    relation: &str,
    opts: QueryOptions,
    rules: &RuleSet,
) -> Result<Vec<QueryHit>, InferError> {
    kb.unit(unit)?;
    if !kb.has_slot(relation) {
        return Err(InferError::UnknownRelation(relation.to_string()));
    }
    if opts.depth_limit == 0 {
        return Err(InferError::BadDepthLimit);
    }

    let mut hits: Vec<QueryHit> = Vec::new();
    let push = |value: UnitId, provenance: Provenance, hits: &mut Vec<QueryHit>| {
        if !hits.iter().any(|h| h.value == value) {
            hits.push(QueryHit { value, provenance });
        }
    };

    for sv in kb.local_values(unit, relation)? {
        if let Value::Unit(v) = sv.value {
            push(v, Provenance::Explicit, &mut hits);
        }
    }
    if opts.inherit {
        for sv in kb.inherited_values(unit, relation)? {
            if let Value::Unit(v) = sv.value {
                push(v, Provenance::Inherited, &mut hits);
            }
        }
    }
    if opts.deduce {
        let mut scratch = Scratch::new(kb, rules, opts);
        scratch.solve(UnitId::from(unit), relation.to_string())?;
        let root = (UnitId::from(unit), relation.to_string());
        if let Some(entry) = scratch.memo.get(&root) {
            for (value, trace) in &entry.answers {
                push(value.clone(), Provenance::Derived(trace.clone()), &mut hits);
            }
        }
        // scratch context dropped here; nothing persists in the base
    }
    Ok(hits)
}

type Goal = (UnitId, String);

struct GoalEntry {
    answers: IndexMap<UnitId, Trace>,
    depth: u32,
}

/// The per-query temporary context: tabled goals, their derived answers,
/// and cached base facts. Discarded when the query completes.
struct Scratch<'a> {
    kb: &'a KnowledgeBase,
    rules: &'a RuleSet,
    opts: QueryOptions,
    memo: BTreeMap<Goal, GoalEntry>,
    base_cache: BTreeMap<Goal, Vec<UnitId>>,
    rule_cache: BTreeMap<String, Vec<CompositionRule>>,
    /// Set when a goal is discovered or moves closer to the root; either
    /// warrants another round even if no answer was added yet.
    dirty: bool,
}

impl<'a> Scratch<'a> {
    fn new(kb: &'a KnowledgeBase, rules: &'a RuleSet, opts: QueryOptions) -> Self {
        Scratch {
            kb,
            rules,
            opts,
            memo: BTreeMap::new(),
            base_cache: BTreeMap::new(),
            rule_cache: BTreeMap::new(),
            dirty: false,
        }
    }

    fn solve(&mut self, unit: UnitId, relation: String) -> Result<(), InferError> {
        self.register((unit, relation), 0);
        loop {
            self.dirty = false;
            let goals: Vec<Goal> = self.memo.keys().cloned().collect();
            let mut changed = false;
            for goal in goals {
                changed |= self.expand(&goal)?;
            }
            if !changed && !self.dirty {
                break;
            }
        }
        Ok(())
    }

    fn register(&mut self, goal: Goal, depth: u32) {
        match self.memo.get_mut(&goal) {
            Some(entry) => {
                if depth < entry.depth {
                    entry.depth = depth;
                    self.dirty = true;
                }
            }
            None => {
                self.memo.insert(
                    goal,
                    GoalEntry {
                        answers: IndexMap::new(),
                        depth,
                    },
                );
                self.dirty = true;
            }
        }
    }

    /// Known values of (unit, relation) outside the scratch context:
    /// explicit, and inherited when the query inherits.
    fn base(&mut self, unit: &UnitId, relation: &str) -> Result<&[UnitId], InferError> {
        let key = (unit.clone(), relation.to_string());
        if !self.base_cache.contains_key(&key) {
            let mut values = Vec::new();
            if self.kb.contains(unit.as_str()) {
                let stored = if self.opts.inherit {
                    self.kb.inherited_values(unit.as_str(), relation)?
                } else {
                    self.kb.local_values(unit.as_str(), relation)?
                };
                for sv in stored {
                    if let Value::Unit(v) = sv.value {
                        if !values.contains(&v) {
                            values.push(v);
                        }
                    }
                }
            }
            self.base_cache.insert(key.clone(), values);
        }
        Ok(self.base_cache.get(&key).unwrap())
    }

    /// Rules whose head derives `relation`: triples stored on the slot
    /// definition, extra triples from the rule set, then explicit rules.
    fn rules_for(&mut self, relation: &str) -> Vec<CompositionRule> {
        if let Some(cached) = self.rule_cache.get(relation) {
            return cached.clone();
        }
        let mut out = Vec::new();
        if let Ok(def) = self.kb.slot_definition(relation) {
            for (r1, r2) in &def.composition_triples {
                out.push(CompositionRule::from_triple(
                    &super::CompositionTriple::new(r1, r2, relation),
                ));
            }
        }
        for t in &self.rules.triples {
            if t.r3 == relation {
                let rule = CompositionRule::from_triple(t);
                if !out.contains(&rule) {
                    out.push(rule);
                }
            }
        }
        for rule in &self.rules.rules {
            if rule.head.relation == relation {
                out.push(rule.clone());
            }
        }
        self.rule_cache.insert(relation.to_string(), out.clone());
        out
    }

    fn expand(&mut self, goal: &Goal) -> Result<bool, InferError> {
        let depth = self.memo.get(goal).map(|e| e.depth).unwrap_or(0);
        if depth >= self.opts.depth_limit {
            return Ok(false);
        }
        let mut changed = false;
        for rule in self.rules_for(&goal.1) {
            changed |= self.apply_rule(goal, depth, &rule)?;
        }
        Ok(changed)
    }

    fn apply_rule(
        &mut self,
        goal: &Goal,
        depth: u32,
        rule: &CompositionRule,
    ) -> Result<bool, InferError> {
        // seed the binding with the head subject
        let mut seed: BTreeMap<String, UnitId> = BTreeMap::new();
        match &rule.head.subject {
            Term::Var(v) => {
                seed.insert(v.clone(), goal.0.clone());
            }
            Term::Const(c) => {
                if *c != goal.0 {
                    return Ok(false);
                }
            }
        }

        struct Path {
            bindings: BTreeMap<String, UnitId>,
            premises: Vec<(UnitId, String, UnitId)>,
            trace: Trace,
        }
        let mut paths = vec![Path {
            bindings: seed,
            premises: Vec::new(),
            trace: Trace::default(),
        }];

        for atom in &rule.body {
            let mut next: Vec<Path> = Vec::new();
            for path in &paths {
                let subject = match &atom.subject {
                    Term::Var(v) => match path.bindings.get(v) {
                        Some(u) => u.clone(),
                        None => return Err(InferError::NotWellModed(rule.name.clone(), v.clone())),
                    },
                    Term::Const(c) => c.clone(),
                };
                for (value, trace) in self.atom_values(&subject, &atom.relation, depth + 1)? {
                    let mut bindings = path.bindings.clone();
                    match &atom.object {
                        Term::Const(c) => {
                            if *c != value {
                                continue;
                            }
                        }
                        Term::Var(v) => match bindings.get(v) {
                            Some(bound) => {
                                if *bound != value {
                                    continue;
                                }
                            }
                            None => {
                                bindings.insert(v.clone(), value.clone());
                            }
                        },
                    }
                    let mut premises = path.premises.clone();
                    premises.push((subject.clone(), atom.relation.clone(), value.clone()));
                    let mut combined = path.trace.clone();
                    if let Some(t) = trace {
                        combined.0.extend(t.0);
                    }
                    next.push(Path {
                        bindings,
                        premises,
                        trace: combined,
                    });
                }
            }
            paths = next;
            if paths.is_empty() {
                return Ok(false);
            }
        }

        let mut changed = false;
        for path in paths {
            let conclusion_value = match &rule.head.object {
                Term::Var(v) => match path.bindings.get(v) {
                    Some(u) => u.clone(),
                    None => {
                        return Err(InferError::UnboundHeadVariable(
                            rule.name.clone(),
                            v.clone(),
                        ))
                    }
                },
                Term::Const(c) => c.clone(),
            };
            let entry = self.memo.get_mut(goal).expect("goal registered");
            if entry.answers.contains_key(&conclusion_value) {
                continue;
            }
            let mut trace = path.trace;
            trace.0.push(TraceStep {
                source: rule.name.clone(),
                premises: path.premises,
                conclusion: (goal.0.clone(), goal.1.clone(), conclusion_value.clone()),
            });
            entry.answers.insert(conclusion_value, trace);
            changed = true;
        }
        Ok(changed)
    }

    /// Values an atom can take: base facts plus the subgoal's answers so
    /// far. Registers the subgoal so later rounds expand it.
    fn atom_values(
        &mut self,
        unit: &UnitId,
        relation: &str,
        depth: u32,
    ) -> Result<Vec<(UnitId, Option<Trace>)>, InferError> {
        let mut out: Vec<(UnitId, Option<Trace>)> = self
            .base(unit, relation)?
            .to_vec()
            .into_iter()
            .map(|v| (v, None))
            .collect();
        let goal = (unit.clone(), relation.to_string());
        self.register(goal.clone(), depth);
        if let Some(entry) = self.memo.get(&goal) {
            for (value, trace) in &entry.answers {
                if !out.iter().any(|(v, _)| v == value) {
                    out.push((value.clone(), Some(trace.clone())));
                }
            }
        }
        Ok(out)
    }
}

/// Replay a trace against the base: every step's premises must be explicit,
/// inherited, or previously replayed conclusions, and the last step must
/// conclude the claimed fact. The soundness checker for derived values.
pub fn replay_trace(
    kb: &KnowledgeBase,
    trace: &Trace,
    fact: &(UnitId, String, UnitId),
    inherit: bool,
) -> bool {
    let mut derived: Vec<(UnitId, String, UnitId)> = Vec::new();
    let holds =
        |kb: &KnowledgeBase, derived: &[(UnitId, String, UnitId)], f: &(UnitId, String, UnitId)| {
            if derived.contains(f) {
                return true;
            }
            let stored = if inherit {
                kb.inherited_values(f.0.as_str(), &f.1)
            } else {
                kb.local_values(f.0.as_str(), &f.1)
            };
            stored
                .map(|values| values.iter().any(|sv| sv.value == Value::Unit(f.2.clone())))
                .unwrap_or(false)
        };
    for step in &trace.0 {
        if !step.premises.iter().all(|p| holds(kb, &derived, p)) {
            return false;
        }
        derived.push(step.conclusion.clone());
    }
    derived.last() == Some(fact) || holds(kb, &derived, fact)
}

/// Relations a query may ask about: every relational-level slot.
pub fn relational_slots(kb: &KnowledgeBase) -> Vec<String> {
    kb.slot_definitions()
        .filter(|d| d.level == SlotLevel::Relational)
        .map(|d| d.name.clone())
        .collect()
}
