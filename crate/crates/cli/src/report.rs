//! JSON shapes printed with `--format json`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use swaptwist::swap::{Snapshot, SwapNmatrix};
use swaptwist::twist::{TwistMatrix, TwistPair};

/// A truth value: its display label and its coordinates, each an element
/// of the underlying algebra given as sorted atom indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Value {
    pub label: String,
    pub coords: Vec<Vec<usize>>,
    pub designated: bool,
}

impl Value {
    pub fn swap(m: &SwapNmatrix, s: &Snapshot) -> Value {
        let label = match m.index_of(s) {
            Some(i) => m.label(i),
            None => s.to_string(),
        };
        Value {
            label,
            coords: vec![s.z1().atom_indices(), s.z2().atom_indices(), s.z3().atom_indices()],
            designated: s.is_designated(),
        }
    }

    pub fn twist(m: &TwistMatrix, p: &TwistPair) -> Value {
        Value {
            label: m.label(p),
            coords: vec![p.z1().atom_indices(), p.z2().atom_indices()],
            designated: p.is_designated(),
        }
    }

    fn coords_text(&self) -> String {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        format!("({})", parts.join(","))
    }

    /// The label, followed by the coordinates when the label is a name.
    pub fn text(&self) -> String {
        if self.label.starts_with('(') {
            self.label.clone()
        } else {
            format!("{} {}", self.label, self.coords_text())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub formula: String,
    pub value: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountermodelKind {
    /// A legal valuation of the subformula closure.
    Valuation,
    /// A map from atoms to values of a deterministic matrix.
    AtomMap,
    /// An assignment under which the goal is undesignated.
    Assignment,
    /// A legal valuation of the ground closure; it is a witness at closure
    /// level only.
    ClosureValuation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Countermodel {
    pub kind: CountermodelKind,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub assignment: BTreeMap<String, String>,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<Countermodel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseReport {
    pub formula: String,
    pub free_vars: Vec<String>,
    pub propositional: bool,
    pub constants: Vec<String>,
    pub functions: BTreeMap<String, usize>,
    pub predicates: BTreeMap<String, usize>,
    pub equality: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTable {
    pub op: String,
    /// `cells[i][j]` lists the possible outputs; unary tables have one column.
    pub cells: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TablesReport {
    pub matrix: String,
    pub values: Vec<Value>,
    pub tables: Vec<OpTable>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub sentence: String,
    /// One value for twist models; every value the sentence can take in a
    /// legal valuation for swap models.
    pub values: Vec<Value>,
    pub designated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReport {
    pub logic: String,
    pub valid: bool,
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<String>,
    /// 1-based.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_step: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaEntry {
    pub id: String,
    pub schema: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomsReport {
    pub logic: String,
    pub schemas: Vec<SchemaEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub holds: bool,
    pub models_checked: usize,
    /// The falsifying structure, in model-file format.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<Countermodel>,
}
