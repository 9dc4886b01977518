//! Derivation checking for the Hilbert calculi mbC, QmbC, LFI1o, QLFI1o and
//! QmbC with equality.
//!
//! Steps carry their justification; the checker verifies it and never
//! searches for a proof.

mod random;
mod schema;
mod script;

use std::fmt;

use thiserror::Error;

use crate::syntax::{occurs_free, Formula};

pub use random::random_derivation;
pub use schema::{match_axiom, match_schema, Logic, SchemaId, SchemaMatch};
pub use script::{parse_premises, parse_proof_script, ScriptError, ScriptStep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Justification {
    Premise,
    Axiom(SchemaId),
    /// `MP(i, j)`: step `j` is `step_i → step_k`.
    Mp(usize, usize),
    ExistsIn(usize),
    ForallIn(usize),
}

impl fmt::Display for Justification {
    /// Uses the 1-based step numbers of proof scripts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Premise => write!(f, "premise"),
            Justification::Axiom(s) => write!(f, "axiom:{s}"),
            Justification::Mp(i, j) => write!(f, "mp:{},{}", i + 1, j + 1),
            Justification::ExistsIn(i) => write!(f, "exists-in:{}", i + 1),
            Justification::ForallIn(i) => write!(f, "forall-in:{}", i + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub by: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub logic: Logic,
    pub premises: Vec<Formula>,
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn new(logic: Logic, premises: Vec<Formula>) -> Derivation {
        Derivation { logic, premises, steps: Vec::new() }
    }

    /// Appends a step and returns its index.
    pub fn push(&mut self, formula: Formula, by: Justification) -> usize {
        self.steps.push(Step { formula, by });
        self.steps.len() - 1
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }
}

/// Step indices in errors are 1-based, as in proof scripts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("reference to step {reference} is not to an earlier step")]
    BadReference { reference: usize },
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not one of the premises")]
    NotAPremise,
    #[error("axiom {schema} is not part of {logic}")]
    SchemaNotInLogic { schema: SchemaId, logic: Logic },
    #[error("not an instance of axiom {schema}")]
    AxiomMismatch { schema: SchemaId },
    #[error("{logic} has no quantifier rules")]
    RuleNotInLogic { logic: Logic },
    #[error("{logic} is propositional; `{formula}` is not")]
    NotInLanguage { logic: Logic, formula: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivationVerdict {
    Valid(Formula),
    /// `step` is 0-based.
    Invalid { step: usize, error: StepError },
    Empty,
}

impl DerivationVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, DerivationVerdict::Valid(_))
    }
}

impl fmt::Display for DerivationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivationVerdict::Valid(c) => write!(f, "valid derivation of {c}"),
            DerivationVerdict::Invalid { step, error } => write!(f, "step {}: {error}", step + 1),
            DerivationVerdict::Empty => write!(f, "empty derivation"),
        }
    }
}

fn earlier(d: &Derivation, k: usize, i: usize) -> Result<&Formula, StepError> {
    if i < k {
        Ok(&d.steps[i].formula)
    } else {
        Err(StepError::BadReference { reference: i + 1 })
    }
}

fn as_imp(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Imp(a, b) => Some((a, b)),
        _ => None,
    }
}

/// Checks step `k` (0-based) against the steps before it.
pub fn check_step(d: &Derivation, k: usize) -> Result<(), StepError> {
    let step = &d.steps[k];
    let phi = &step.formula;
    if !d.logic.is_first_order() && !phi.is_propositional() {
        return Err(StepError::NotInLanguage { logic: d.logic, formula: phi.to_string() });
    }
    match step.by {
        Justification::Premise => {
            if d.premises.contains(phi) {
                Ok(())
            } else {
                Err(StepError::NotAPremise)
            }
        }
        Justification::Axiom(s) => {
            if !d.logic.has_schema(s) {
                return Err(StepError::SchemaNotInLogic { schema: s, logic: d.logic });
            }
            match match_schema(s, phi) {
                SchemaMatch::Matches => Ok(()),
                SchemaMatch::SideCondition(why) => Err(StepError::SideConditionViolated(why)),
                SchemaMatch::NoMatch => Err(StepError::AxiomMismatch { schema: s }),
            }
        }
        Justification::Mp(i, j) => {
            let minor = earlier(d, k, i)?;
            let major = earlier(d, k, j)?;
            match as_imp(major) {
                Some((a, b)) if a == minor && b == phi => Ok(()),
                _ => Err(StepError::ShapeMismatch(format!(
                    "step {} is not `{minor} -> {phi}`",
                    j + 1
                ))),
            }
        }
        Justification::ExistsIn(i) | Justification::ForallIn(i) => {
            if !d.logic.is_first_order() {
                return Err(StepError::RuleNotInLogic { logic: d.logic });
            }
            let prem = earlier(d, k, i)?;
            let Some((a, b)) = as_imp(prem) else {
                return Err(StepError::ShapeMismatch(format!("step {} is not an implication", i + 1)));
            };
            let Some((l, r)) = as_imp(phi) else {
                return Err(StepError::ShapeMismatch("the conclusion is not an implication".into()));
            };
            if let Justification::ExistsIn(_) = step.by {
                match l {
                    Formula::Exists(x, body) if **body == *a && r == b => {
                        if occurs_free(x, b) {
                            Err(StepError::SideConditionViolated(format!("`{x}` occurs free in `{b}`")))
                        } else {
                            Ok(())
                        }
                    }
                    _ => Err(StepError::ShapeMismatch(format!("expected `(exists x. {a}) -> {b}`"))),
                }
            } else {
                match r {
                    Formula::Forall(x, body) if **body == *b && l == a => {
                        if occurs_free(x, a) {
                            Err(StepError::SideConditionViolated(format!("`{x}` occurs free in `{a}`")))
                        } else {
                            Ok(())
                        }
                    }
                    _ => Err(StepError::ShapeMismatch(format!("expected `{a} -> forall x. {b}`"))),
                }
            }
        }
    }
}

/// Checks every step; reports the first failure.
pub fn check_derivation(d: &Derivation) -> DerivationVerdict {
    for k in 0..d.steps.len() {
        if let Err(error) = check_step(d, k) {
            return DerivationVerdict::Invalid { step: k, error };
        }
    }
    match d.conclusion() {
        Some(c) => DerivationVerdict::Valid(c.clone()),
        None => DerivationVerdict::Empty,
    }
}
