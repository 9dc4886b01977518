//! Proof scripts: a JSON list of `{"formula": ..., "by": ...}` with
//! justifications `premise`, `axiom:ID`, `mp:i,j`, `exists-in:i` and
//! `forall-in:i` (1-based step numbers).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{parse_formula_extending, Formula, ParseError, Signature};

use super::{Derivation, Justification, Logic, SchemaId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptStep {
    pub formula: String,
    pub by: String,
}

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("malformed proof script: {0}")]
    Json(#[from] serde_json::Error),
    #[error("step {step}: cannot parse `{text}`: {error}")]
    Formula { step: usize, text: String, error: ParseError },
    #[error("premise {line}: cannot parse `{text}`: {error}")]
    Premise { line: usize, text: String, error: ParseError },
    #[error("step {step}: bad justification `{by}`: {why}")]
    Justification { step: usize, by: String, why: String },
}

fn index(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("`{s}` is not a step number")),
        Ok(n) => Ok(n - 1),
    }
}

pub fn parse_justification(by: &str) -> Result<Justification, String> {
    let by = by.trim();
    let (head, rest) = by.split_once(':').map_or((by, ""), |(h, r)| (h.trim(), r.trim()));
    match head.to_lowercase().as_str() {
        "premise" if rest.is_empty() => Ok(Justification::Premise),
        "axiom" => Ok(Justification::Axiom(rest.parse::<SchemaId>()?)),
        "mp" => {
            let (i, j) = rest.split_once(',').ok_or("mp needs two step numbers")?;
            Ok(Justification::Mp(index(i)?, index(j)?))
        }
        "exists-in" => Ok(Justification::ExistsIn(index(rest)?)),
        "forall-in" => Ok(Justification::ForallIn(index(rest)?)),
        _ => Err("expected premise, axiom:ID, mp:i,j, exists-in:i or forall-in:i".into()),
    }
}

/// One formula per line; blank lines and lines starting with `#` are
/// skipped. Symbols are added to `sig` as they are met.
pub fn parse_premises(text: &str, sig: &mut Signature) -> Result<Vec<Formula>, ScriptError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let f = parse_formula_extending(t, sig)
            .map_err(|error| ScriptError::Premise { line: n + 1, text: t.to_string(), error })?;
        out.push(f);
    }
    Ok(out)
}

/// Builds a derivation from premises and a JSON script.
pub fn parse_proof_script(
    logic: Logic,
    premises: Vec<Formula>,
    json: &str,
    sig: &mut Signature,
) -> Result<Derivation, ScriptError> {
    let steps: Vec<ScriptStep> = serde_json::from_str(json)?;
    let mut d = Derivation::new(logic, premises);
    for (k, s) in steps.iter().enumerate() {
        let f = parse_formula_extending(&s.formula, sig)
            .map_err(|error| ScriptError::Formula { step: k + 1, text: s.formula.clone(), error })?;
        let by = parse_justification(&s.by)
            .map_err(|why| ScriptError::Justification { step: k + 1, by: s.by.clone(), why })?;
        d.push(f, by);
    }
    Ok(d)
}

impl Derivation {
    /// The steps as a proof script.
    pub fn to_script(&self) -> Vec<ScriptStep> {
        self.steps.iter().map(|s| ScriptStep { formula: s.formula.to_string(), by: s.by.to_string() }).collect()
    }
}
