//! Match certificates and the checker every solver answer goes through.
//!
//! A [`MatchWitness`] records the walk, the position-to-slot mapping and the
//! substitutions applied on either side. [`verify_witness`] replays those
//! substitutions and confirms the edited labels spell the edited query.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{LabelSlot, LabeledGraph, ModelError, QueryString, Symbol, Walk};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EditTarget {
    Label(LabelSlot),
    /// 1-based query position.
    Query(usize),
}

/// A single substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EditOp {
    pub target: EditTarget,
    pub new_symbol: Symbol,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchWitness {
    pub walk: Walk,
    /// `mapping[i - 1]` is the slot query position `i` is mapped in.
    pub mapping: Vec<LabelSlot>,
    pub graph_edits: Vec<EditOp>,
    pub query_edits: Vec<EditOp>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("invalid walk: {0}")]
    InvalidWalk(#[from] ModelError),
    #[error("walk spells {spelled} symbols but the query has {query}")]
    LengthMismatch { spelled: usize, query: usize },
    #[error("position {0} is not mapped to its canonical slot")]
    MappingMismatch(usize),
    #[error("edit of kind {0:?} listed on the wrong side")]
    MisplacedEdit(EditTarget),
    #[error("edit target {0:?} out of range")]
    EditOutOfRange(EditTarget),
    #[error("edit on {0:?} substitutes a symbol with itself")]
    NoOpEdit(EditTarget),
    #[error("edit on {0:?} uses a symbol outside the alphabet")]
    ForeignSymbol(EditTarget),
    #[error("conflicting edits for {0:?}")]
    ConflictingEdits(EditTarget),
    #[error("slot (vertex {}, offset {}) must spell two different symbols", .0.vertex, .0.offset)]
    ConflictingDemand(LabelSlot),
    #[error("position {0} still mismatches after applying all edits")]
    ResidualMismatch(usize),
}

impl MatchWitness {
    fn base(graph: &LabeledGraph, query: &QueryString, walk: &Walk) -> Result<Vec<LabelSlot>, WitnessError> {
        walk.check(graph)?;
        let mapping = walk.slots(graph);
        if mapping.len() != query.len() {
            return Err(WitnessError::LengthMismatch {
                spelled: mapping.len(),
                query: query.len(),
            });
        }
        Ok(mapping)
    }

    /// Witness with no edits at all; only meaningful when σ(p) = s.
    pub fn unedited(graph: &LabeledGraph, query: &QueryString, walk: Walk) -> Result<Self, WitnessError> {
        let mapping = Self::base(graph, query, &walk)?;
        Ok(MatchWitness {
            walk,
            mapping,
            graph_edits: Vec::new(),
            query_edits: Vec::new(),
        })
    }

    /// Repairs every mismatch on the query side.
    pub fn with_query_edits(graph: &LabeledGraph, query: &QueryString, walk: Walk) -> Result<Self, WitnessError> {
        let mapping = Self::base(graph, query, &walk)?;
        let query_edits = mapping
            .iter()
            .enumerate()
            .filter_map(|(i, slot)| {
                let have = slot_symbol(graph, *slot);
                (have != query.symbols()[i]).then_some(EditOp {
                    target: EditTarget::Query(i + 1),
                    new_symbol: have,
                })
            })
            .collect();
        Ok(MatchWitness {
            walk,
            mapping,
            graph_edits: Vec::new(),
            query_edits,
        })
    }

    /// Repairs every mismatch on the label side. Fails when a revisited slot
    /// would have to spell two different symbols.
    pub fn with_label_edits(graph: &LabeledGraph, query: &QueryString, walk: Walk) -> Result<Self, WitnessError> {
        let mapping = Self::base(graph, query, &walk)?;
        let mut demand: BTreeMap<LabelSlot, Symbol> = BTreeMap::new();
        for (i, slot) in mapping.iter().enumerate() {
            let want = query.symbols()[i];
            match demand.insert(*slot, want) {
                Some(prev) if prev != want => return Err(WitnessError::ConflictingDemand(*slot)),
                _ => {}
            }
        }
        let graph_edits = demand
            .into_iter()
            .filter(|&(slot, want)| slot_symbol(graph, slot) != want)
            .map(|(slot, want)| EditOp {
                target: EditTarget::Label(slot),
                new_symbol: want,
            })
            .collect();
        Ok(MatchWitness {
            walk,
            mapping,
            graph_edits,
            query_edits: Vec::new(),
        })
    }

    /// Cheapest mix of label and query edits for this particular walk.
    ///
    /// Each slot independently picks the symbol σ' minimising
    /// `[σ' ≠ original] + #{mapped positions i : s[i] ≠ σ'}`; ties keep the
    /// original symbol, then the smallest symbol.
    pub fn cheapest(graph: &LabeledGraph, query: &QueryString, walk: Walk) -> Result<Self, WitnessError> {
        let mapping = Self::base(graph, query, &walk)?;
        let mut groups: BTreeMap<LabelSlot, Vec<usize>> = BTreeMap::new();
        for (i, slot) in mapping.iter().enumerate() {
            groups.entry(*slot).or_default().push(i + 1);
        }
        let mut graph_edits = Vec::new();
        let mut query_edits = Vec::new();
        for (slot, positions) in groups {
            let original = slot_symbol(graph, slot);
            let cost_of = |cand: Symbol| {
                usize::from(cand != original) + positions.iter().filter(|&&p| query.at(p) != cand).count()
            };
            let mut best = (cost_of(original), original);
            for cand in graph.alphabet().symbols() {
                let c = cost_of(cand);
                if c < best.0 {
                    best = (c, cand);
                }
            }
            let chosen = best.1;
            if chosen != original {
                graph_edits.push(EditOp {
                    target: EditTarget::Label(slot),
                    new_symbol: chosen,
                });
            }
            for p in positions {
                if query.at(p) != chosen {
                    query_edits.push(EditOp {
                        target: EditTarget::Query(p),
                        new_symbol: chosen,
                    });
                }
            }
        }
        query_edits.sort();
        Ok(MatchWitness {
            walk,
            mapping,
            graph_edits,
            query_edits,
        })
    }

    /// k = k₁ + k₂ as listed; [`verify_witness`] is what makes it trustworthy.
    pub fn cost(&self) -> usize {
        self.graph_edits.len() + self.query_edits.len()
    }

    pub fn to_document(&self, graph: &LabeledGraph, query: &QueryString) -> WitnessDocument {
        let alpha = graph.alphabet();
        let tok = |s: Symbol| alpha.token(s).to_string();
        WitnessDocument {
            walk: self.walk.vertices().to_vec(),
            query: query.symbols().iter().map(|&s| tok(s)).collect(),
            spelled: self.mapping.iter().map(|&slot| tok(slot_symbol(graph, slot))).collect(),
            mapping: self
                .mapping
                .iter()
                .enumerate()
                .map(|(i, slot)| MappingEntry {
                    position: i + 1,
                    vertex: slot.vertex,
                    offset: slot.offset,
                })
                .collect(),
            graph_edits: self
                .graph_edits
                .iter()
                .filter_map(|e| match e.target {
                    EditTarget::Label(slot) => Some(LabelEditEntry {
                        vertex: slot.vertex,
                        offset: slot.offset,
                        from: tok(slot_symbol(graph, slot)),
                        to: tok(e.new_symbol),
                    }),
                    EditTarget::Query(_) => None,
                })
                .collect(),
            query_edits: self
                .query_edits
                .iter()
                .filter_map(|e| match e.target {
                    EditTarget::Query(p) => Some(QueryEditEntry {
                        position: p,
                        from: tok(query.at(p)),
                        to: tok(e.new_symbol),
                    }),
                    EditTarget::Label(_) => None,
                })
                .collect(),
            cost: self.cost(),
        }
    }

    pub fn to_json(&self, graph: &LabeledGraph, query: &QueryString) -> String {
        serde_json::to_string_pretty(&self.to_document(graph, query)).expect("witness document serializes")
    }
}

fn slot_symbol(graph: &LabeledGraph, slot: LabelSlot) -> Symbol {
    graph.label(slot.vertex)[slot.offset - 1]
}

/// Checks every witness invariant and returns its cost k = k₁ + k₂.
pub fn verify_witness(
    graph: &LabeledGraph,
    query: &QueryString,
    witness: &MatchWitness,
) -> Result<usize, WitnessError> {
    let expected = MatchWitness::base(graph, query, &witness.walk)?;
    if witness.mapping.len() != expected.len() {
        return Err(WitnessError::LengthMismatch {
            spelled: witness.mapping.len(),
            query: query.len(),
        });
    }
    if let Some(i) = expected.iter().zip(&witness.mapping).position(|(a, b)| a != b) {
        return Err(WitnessError::MappingMismatch(i + 1));
    }

    let mut label_edits: HashMap<LabelSlot, Symbol> = HashMap::new();
    for edit in &witness.graph_edits {
        let EditTarget::Label(slot) = edit.target else {
            return Err(WitnessError::MisplacedEdit(edit.target));
        };
        if slot.vertex >= graph.vertex_count() || slot.offset == 0 || slot.offset > graph.label(slot.vertex).len() {
            return Err(WitnessError::EditOutOfRange(edit.target));
        }
        if !graph.alphabet().contains(edit.new_symbol) {
            return Err(WitnessError::ForeignSymbol(edit.target));
        }
        if slot_symbol(graph, slot) == edit.new_symbol {
            return Err(WitnessError::NoOpEdit(edit.target));
        }
        if label_edits.insert(slot, edit.new_symbol).is_some() {
            return Err(WitnessError::ConflictingEdits(edit.target));
        }
    }

    let mut edited_query = query.symbols().to_vec();
    let mut touched = vec![false; query.len()];
    for edit in &witness.query_edits {
        let EditTarget::Query(p) = edit.target else {
            return Err(WitnessError::MisplacedEdit(edit.target));
        };
        if p == 0 || p > query.len() {
            return Err(WitnessError::EditOutOfRange(edit.target));
        }
        if !graph.alphabet().contains(edit.new_symbol) {
            return Err(WitnessError::ForeignSymbol(edit.target));
        }
        if query.at(p) == edit.new_symbol {
            return Err(WitnessError::NoOpEdit(edit.target));
        }
        if std::mem::replace(&mut touched[p - 1], true) {
            return Err(WitnessError::ConflictingEdits(edit.target));
        }
        edited_query[p - 1] = edit.new_symbol;
    }

    for (i, slot) in witness.mapping.iter().enumerate() {
        let spelled = label_edits.get(slot).copied().unwrap_or_else(|| slot_symbol(graph, *slot));
        if spelled != edited_query[i] {
            return Err(WitnessError::ResidualMismatch(i + 1));
        }
    }
    Ok(witness.cost())
}

/// Serialized form of a witness. Field order and naming are stable; all
/// positions and offsets are 1-based, vertices 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub walk: Vec<usize>,
    pub query: Vec<String>,
    pub spelled: Vec<String>,
    pub mapping: Vec<MappingEntry>,
    pub graph_edits: Vec<LabelEditEntry>,
    pub query_edits: Vec<QueryEditEntry>,
    pub cost: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingEntry {
    pub position: usize,
    pub vertex: usize,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelEditEntry {
    pub vertex: usize,
    pub offset: usize,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryEditEntry {
    pub position: usize,
    pub from: String,
    pub to: String,
}

impl WitnessDocument {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Rebuilds a [`MatchWitness`] against `graph`. Only structure is
    /// resolved here; run [`verify_witness`] on the result.
    pub fn into_witness(self, graph: &LabeledGraph) -> Result<MatchWitness, ModelError> {
        let alpha = graph.alphabet();
        let walk = Walk::new(self.walk)?;
        let mapping = self
            .mapping
            .iter()
            .map(|m| LabelSlot {
                vertex: m.vertex,
                offset: m.offset,
            })
            .collect();
        let graph_edits = self
            .graph_edits
            .iter()
            .map(|e| {
                Ok(EditOp {
                    target: EditTarget::Label(LabelSlot {
                        vertex: e.vertex,
                        offset: e.offset,
                    }),
                    new_symbol: alpha.resolve(&e.to)?,
                })
            })
            .collect::<Result<_, ModelError>>()?;
        let query_edits = self
            .query_edits
            .iter()
            .map(|e| {
                Ok(EditOp {
                    target: EditTarget::Query(e.position),
                    new_symbol: alpha.resolve(&e.to)?,
                })
            })
            .collect::<Result<_, ModelError>>()?;
        Ok(MatchWitness {
            walk,
            mapping,
            graph_edits,
            query_edits,
        })
    }
}
