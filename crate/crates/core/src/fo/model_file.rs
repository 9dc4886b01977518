//! JSON model files.
//!
//! ```json
//! {"semantics": "twist", "algebra": {"type": "powerset", "atoms": 1},
//!  "domain": ["a", "b"], "constants": {"c": "a"},
//!  "functions": {"f": {"a": "b", "b": "a"}},
//!  "predicates": {"P": {"a": "1", "b": [[0], [0]]}, "R": {"a,b": "0", ...}},
//!  "equality": "standard-classical"}
//! ```
//!
//! Table keys are comma-separated argument tuples (`""` for nullary
//! predicates); arity is read off the keys. A value is a list of algebra
//! elements, one per coordinate, each a list of atom indices, or a value
//! name when the matrix has names (`M5` and the 3-valued twist matrix).
//! `equality` is `"standard-classical"`, `"standard-mid"` or an explicit
//! table.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::algebra::{AlgebraSpec, BAElement, FiniteBooleanAlgebra};
use crate::swap::{full_swap, m5, Snapshot};
use crate::twist::{lfi1_matrix, twist_matrix, TwistPair};

use super::structure::{
    tuples, EqualityKind, FOStructure, Structure, SwapStructure, Table, TruthValue, TwistStructure,
};
use super::FoError;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("cannot read model file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed model JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Bad(String),
    #[error(transparent)]
    Fo(#[from] FoError),
}

fn bad<T>(msg: impl Into<String>) -> Result<T, ModelFileError> {
    Err(ModelFileError::Bad(msg.into()))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    semantics: String,
    #[serde(default = "default_algebra")]
    algebra: AlgebraSpec,
    domain: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    constants: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    functions: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    predicates: BTreeMap<String, BTreeMap<String, Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    equality: Option<Value>,
}

fn default_algebra() -> AlgebraSpec {
    AlgebraSpec::Powerset { atoms: 1 }
}

pub fn load_model(path: &Path) -> Result<FOStructure, ModelFileError> {
    model_from_json(&std::fs::read_to_string(path)?)
}

struct Ctx<'a> {
    domain: &'a [String],
}

impl Ctx<'_> {
    fn element(&self, name: &str) -> Result<usize, ModelFileError> {
        match self.domain.iter().position(|d| d == name) {
            Some(i) => Ok(i),
            None => bad(format!("`{name}` is not a domain element")),
        }
    }

    fn key(&self, key: &str) -> Result<Vec<usize>, ModelFileError> {
        if key.is_empty() {
            return Ok(Vec::new());
        }
        key.split(',').map(|k| self.element(k.trim())).collect()
    }

    /// Builds a total table from `key → value` entries.
    fn table<V: Copy, T>(
        &self,
        what: &str,
        entries: &BTreeMap<String, T>,
        mut value: impl FnMut(&T) -> Result<V, ModelFileError>,
    ) -> Result<Table<V>, ModelFileError> {
        let n = self.domain.len();
        let mut cells: BTreeMap<Vec<usize>, V> = BTreeMap::new();
        let mut arity = None;
        for (k, v) in entries {
            let args = self.key(k)?;
            if *arity.get_or_insert(args.len()) != args.len() {
                return bad(format!("`{what}` mixes argument counts"));
            }
            if cells.insert(args, value(v)?).is_some() {
                return bad(format!("`{what}` lists the tuple `{k}` twice"));
            }
        }
        let Some(arity) = arity else { return bad(format!("`{what}` has an empty table")) };
        let mut values = Vec::new();
        for t in tuples(arity, n) {
            match cells.get(&t) {
                Some(v) => values.push(*v),
                None => {
                    let shown: Vec<&str> = t.iter().map(|&i| self.domain[i].as_str()).collect();
                    return bad(format!("`{what}` is undefined at ({})", shown.join(",")));
                }
            }
        }
        Ok(Table::new(arity, n, values)?)
    }
}

fn element(a: &FiniteBooleanAlgebra, v: &Value) -> Result<BAElement, ModelFileError> {
    match v {
        Value::Array(items) => {
            let mut idx = Vec::new();
            for i in items {
                match i.as_u64() {
                    Some(k) => idx.push(k as usize),
                    None => return bad(format!("atom index expected, found {i}")),
                }
            }
            a.from_atoms(&idx).map_err(|e| ModelFileError::Bad(e.to_string()))
        }
        _ => bad(format!("algebra element expected as a list of atom indices, found {v}")),
    }
}

fn coords(a: &FiniteBooleanAlgebra, v: &Value, k: usize) -> Result<Vec<BAElement>, ModelFileError> {
    match v {
        Value::Array(items) if items.len() == k => items.iter().map(|x| element(a, x)).collect(),
        _ => bad(format!("expected {k} coordinates, found {v}")),
    }
}

fn encode(x: BAElement) -> Value {
    Value::from(x.atom_indices())
}

pub fn model_from_json(text: &str) -> Result<FOStructure, ModelFileError> {
    let file: ModelFile = serde_json::from_str(text)?;
    let a = file.algebra.build().map_err(|e| ModelFileError::Bad(e.to_string()))?;
    for d in &file.domain {
        if d.is_empty() || d.contains(',') {
            return bad(format!("domain element `{d}` must be non-empty and comma-free"));
        }
    }
    let ctx = Ctx { domain: &file.domain };
    let mut constants = BTreeMap::new();
    for (c, d) in &file.constants {
        constants.insert(c.clone(), ctx.element(d)?);
    }
    let mut functions = BTreeMap::new();
    for (f, t) in &file.functions {
        functions.insert(f.clone(), ctx.table(f, t, |d| ctx.element(d))?);
    }
    let kind = match file.equality.as_ref().and_then(Value::as_str) {
        Some("standard-classical") => Some(EqualityKind::Classical),
        Some("standard-mid") => Some(EqualityKind::Mid),
        Some(other) => return bad(format!("unknown equality `{other}`")),
        None => None,
    };
    let explicit = match &file.equality {
        Some(Value::Object(o)) => Some(o.iter().map(|(k, v)| (k.clone(), v.clone())).collect::<BTreeMap<_, _>>()),
        Some(Value::String(_)) | None => None,
        Some(other) => return bad(format!("unsupported equality value {other}")),
    };
    let n = file.domain.len();
    match file.semantics.as_str() {
        "swap" => {
            let matrix = if a.atom_count() == 1 { m5() } else { full_swap(&a).map_err(|e| ModelFileError::Bad(e.to_string()))? };
            let value = |v: &Value| -> Result<Snapshot, ModelFileError> {
                if let Some(name) = v.as_str() {
                    return match matrix.by_name(name) {
                        Some(i) => Ok(matrix.snapshot(i)),
                        None => bad(format!("unknown value name `{name}`")),
                    };
                }
                let c = coords(&a, v, 3)?;
                Snapshot::new(c[0], c[1], c[2]).map_err(|e| ModelFileError::Bad(e.to_string()))
            };
            let mut predicates = BTreeMap::new();
            for (p, t) in &file.predicates {
                predicates.insert(p.clone(), ctx.table(p, t, value)?);
            }
            let equality = match (kind, explicit) {
                (Some(k), _) => Some(SwapStructure::default_equality(&matrix, n, k)),
                (None, Some(t)) => Some(ctx.table("=", &t, value)?),
                (None, None) => None,
            };
            let base = Structure { domain: file.domain.clone(), constants, functions, predicates, equality };
            Ok(FOStructure::Swap(SwapStructure::new(matrix, base)?))
        }
        "twist" => {
            let matrix = if a.atom_count() == 1 { lfi1_matrix() } else { twist_matrix(&a).map_err(|e| ModelFileError::Bad(e.to_string()))? };
            let value = |v: &Value| -> Result<TwistPair, ModelFileError> {
                if let Some(name) = v.as_str() {
                    return match matrix.by_name(name) {
                        Some(p) => Ok(p),
                        None => bad(format!("unknown value name `{name}`")),
                    };
                }
                let c = coords(&a, v, 2)?;
                TwistPair::new(c[0], c[1]).map_err(|e| ModelFileError::Bad(e.to_string()))
            };
            let mut predicates = BTreeMap::new();
            for (p, t) in &file.predicates {
                predicates.insert(p.clone(), ctx.table(p, t, value)?);
            }
            let equality = match (kind, explicit) {
                (Some(k), _) => Some(TwistStructure::default_equality(&matrix, n, k)),
                (None, Some(t)) => Some(ctx.table("=", &t, value)?),
                (None, None) => None,
            };
            let base = Structure { domain: file.domain.clone(), constants, functions, predicates, equality };
            Ok(FOStructure::Twist(TwistStructure::new(matrix, base)?))
        }
        other => bad(format!("semantics must be `swap` or `twist`, not `{other}`")),
    }
}

fn key_of(domain: &[String], t: &[usize]) -> String {
    t.iter().map(|&i| domain[i].as_str()).collect::<Vec<_>>().join(",")
}

fn table_json<V: Copy>(domain: &[String], t: &Table<V>, enc: impl Fn(V) -> Value) -> BTreeMap<String, Value> {
    t.entries().map(|(args, v)| (key_of(domain, &args), enc(v))).collect()
}

fn base_file<V: TruthValue>(
    semantics: &str,
    algebra: FiniteBooleanAlgebra,
    b: &Structure<V>,
    enc: impl Fn(V) -> Value,
    equality: Option<Value>,
) -> ModelFile {
    let d = &b.domain;
    ModelFile {
        semantics: semantics.into(),
        algebra: algebra.into(),
        domain: d.clone(),
        constants: b.constants.iter().map(|(c, &i)| (c.clone(), d[i].clone())).collect(),
        functions: b
            .functions
            .iter()
            .map(|(f, t)| (f.clone(), t.entries().map(|(args, v)| (key_of(d, &args), d[v].clone())).collect()))
            .collect(),
        predicates: b.predicates.iter().map(|(p, t)| (p.clone(), table_json(d, t, &enc))).collect(),
        equality,
    }
}

pub fn model_to_json(s: &FOStructure) -> String {
    let file = match s {
        FOStructure::Swap(s) => {
            let m = &s.matrix;
            let enc = |v: Snapshot| match m.names() {
                Some(_) => Value::from(m.label(m.index_of(&v).expect("value in matrix"))),
                None => Value::from(vec![encode(v.z1()), encode(v.z2()), encode(v.z3())]),
            };
            let n = s.base.size();
            let eq = s.base.equality.as_ref().map(|t| {
                if *t == SwapStructure::default_equality(m, n, EqualityKind::Classical) {
                    Value::from("standard-classical")
                } else if *t == SwapStructure::default_equality(m, n, EqualityKind::Mid) {
                    Value::from("standard-mid")
                } else {
                    Value::Object(table_json(&s.base.domain, t, enc).into_iter().collect())
                }
            });
            base_file("swap", m.algebra(), &s.base, enc, eq)
        }
        FOStructure::Twist(s) => {
            let m = &s.matrix;
            let enc = |v: TwistPair| {
                if m.has_names() {
                    Value::from(m.label(&v))
                } else {
                    Value::from(vec![encode(v.z1()), encode(v.z2())])
                }
            };
            let n = s.base.size();
            let eq = s.base.equality.as_ref().map(|t| {
                if *t == TwistStructure::default_equality(m, n, EqualityKind::Classical) {
                    Value::from("standard-classical")
                } else if *t == TwistStructure::default_equality(m, n, EqualityKind::Mid) {
                    Value::from("standard-mid")
                } else {
                    Value::Object(table_json(&s.base.domain, t, enc).into_iter().collect())
                }
            });
            base_file("twist", m.algebra(), &s.base, enc, eq)
        }
    };
    serde_json::to_string_pretty(&file).expect("model serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWIST: &str = r#"{
        "semantics": "twist",
        "algebra": {"type": "powerset", "atoms": 1},
        "domain": ["a", "b"],
        "constants": {"c": "a"},
        "functions": {"f": {"a": "b", "b": "a"}},
        "predicates": {"P": {"a": [[0], []], "b": "1/2"}, "Q": {"": "0"}},
        "equality": "standard-mid"
    }"#;

    #[test]
    fn parses_twist_models() {
        let FOStructure::Twist(s) = model_from_json(TWIST).unwrap() else { panic!() };
        assert_eq!(s.base.size(), 2);
        assert_eq!(s.matrix.label(&s.base.predicates["P"].get(&[1])), "½");
        assert_eq!(s.matrix.label(&s.base.predicates["P"].get(&[0])), "1");
        assert_eq!(s.base.predicates["Q"].arity(), 0);
        assert_eq!(s.base.functions["f"].get(&[0]), 1);
    }

    #[test]
    fn round_trip() {
        let m = model_from_json(TWIST).unwrap();
        let again = model_from_json(&model_to_json(&m)).unwrap();
        let (FOStructure::Twist(x), FOStructure::Twist(y)) = (m, again) else { panic!() };
        assert_eq!(x.base, y.base);
    }

    #[test]
    fn swap_models_and_errors() {
        let text = r#"{"semantics":"swap","domain":["a"],"predicates":{"P":{"a":"t"}},
            "equality":{"a,a":[[0],[],[0]]}}"#;
        let FOStructure::Swap(s) = model_from_json(text).unwrap() else { panic!() };
        assert_eq!(s.matrix.label(s.matrix.index_of(&s.base.predicates["P"].get(&[0])).unwrap()), "t");
        let again = model_from_json(&model_to_json(&FOStructure::Swap(s.clone()))).unwrap();
        let FOStructure::Swap(t) = again else { panic!() };
        assert_eq!(s.base, t.base);

        let missing = r#"{"semantics":"swap","domain":["a","b"],"predicates":{"P":{"a":"t"}}}"#;
        assert!(model_from_json(missing).is_err());
        let nonstandard = r#"{"semantics":"twist","domain":["a"],"predicates":{"P":{"a":"1"}},"equality":{"a,a":"0"}}"#;
        assert!(matches!(model_from_json(nonstandard), Err(ModelFileError::Fo(FoError::NonStandardEquality))));
        let bad_value = r#"{"semantics":"swap","domain":["a"],"predicates":{"P":{"a":[[0],[0],[0]]}}}"#;
        assert!(model_from_json(bad_value).is_err());
    }
}
