//! Bivaluations for mbC: 0/1 assignments that are not truth-functional on
//! `¬` and `∘`, constrained by five clauses.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use thiserror::Error;

use super::{closure, PropError, PropValuation};
use crate::algebra::two;
use crate::swap::{m5, Snapshot};
use crate::syntax::{BinOp, Formula, UnOp};
use crate::Verdict;

/// A partial bivaluation, defined on the formulas it lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bivaluation {
    pub values: BTreeMap<Formula, bool>,
}

impl Bivaluation {
    pub fn new() -> Bivaluation {
        Bivaluation::default()
    }

    pub fn set(&mut self, f: Formula, v: bool) {
        self.values.insert(f, v);
    }

    pub fn get(&self, f: &Formula) -> Option<bool> {
        self.values.get(f).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BivalError {
    #[error("bivaluation violates {clause} at `{formula}`")]
    IllegalBivaluation { clause: &'static str, formula: String },
    #[error(transparent)]
    Prop(#[from] PropError),
}

/// The first clause violated at `f`, looking only at clauses whose formulas
/// are all in the domain of `rho`.
fn violated_at(f: &Formula, rho: &dyn Fn(&Formula) -> Option<bool>) -> Option<&'static str> {
    let v = rho(f)?;
    if let Some((op, a, b)) = f.as_binary() {
        let (Some(x), Some(y)) = (rho(a), rho(b)) else { return None };
        let (want, name) = match op {
            BinOp::And => (x && y, "vAnd"),
            BinOp::Or => (x || y, "vOr"),
            BinOp::Imp => (!x || y, "vImp"),
        };
        return (v != want).then_some(name);
    }
    match f.as_unary() {
        Some((UnOp::Neg, a)) => match rho(a) {
            Some(x) if !v && !x => Some("vNeg"),
            _ => None,
        },
        Some((UnOp::Cons, a)) => match (rho(a), rho(&Formula::neg(a.clone()))) {
            (Some(true), Some(true)) if v => Some("vCon"),
            _ => None,
        },
        None => None,
    }
}

fn first_violation(rho: &Bivaluation) -> Option<(&'static str, Formula)> {
    let look = |g: &Formula| rho.get(g);
    for f in rho.values.keys() {
        if let Some(clause) = violated_at(f, &look) {
            return Some((clause, f.clone()));
        }
    }
    None
}

/// Checks the five clauses wherever all the formulas they mention are in
/// the domain of `rho`.
pub fn check_bivaluation(rho: &Bivaluation) -> bool {
    first_violation(rho).is_none()
}

/// `v(α) = (ρ(α), ρ(¬α), ρ(∘α))` for each `α` whose `¬α` and `∘α` are also
/// in the domain of `rho`, listed in closure order.
pub fn bival_to_valuation(rho: &Bivaluation) -> Result<PropValuation, BivalError> {
    if let Some((clause, f)) = first_violation(rho) {
        return Err(BivalError::IllegalBivaluation { clause, formula: f.to_string() });
    }
    let domain: Vec<Formula> = rho.values.keys().cloned().collect();
    let order = closure(&domain)?;
    let a2 = two();
    let bit = |b: bool| a2.element(b as u64);
    let mut entries = Vec::new();
    for f in order {
        let (Some(x), Some(n), Some(c)) =
            (rho.get(&f), rho.get(&Formula::neg(f.clone())), rho.get(&Formula::cons(f.clone())))
        else {
            continue;
        };
        let s = Snapshot::new(bit(x), bit(n), bit(c))
            .map_err(|_| BivalError::IllegalBivaluation { clause: "snapshot", formula: f.to_string() })?;
        entries.push((f, s));
    }
    let v = PropValuation { entries };
    v.check(&m5()).map_err(|_| BivalError::IllegalBivaluation { clause: "M5", formula: String::new() })?;
    Ok(v)
}

/// The closure `C` of the inputs followed by `¬α`, `∘α` for each `α ∈ C`
/// not already present.
pub(crate) fn extended_closure(formulas: &[Formula]) -> Result<Vec<Formula>, PropError> {
    let base = closure(formulas)?;
    let mut out = base.clone();
    let mut seen: std::collections::HashSet<Formula> = base.iter().cloned().collect();
    for a in &base {
        for g in [Formula::neg(a.clone()), Formula::cons(a.clone())] {
            if seen.insert(g.clone()) {
                out.push(g);
            }
        }
    }
    Ok(out)
}

/// Positions and clause checks for assigning a formula list in order.
struct Plan {
    members: Vec<Formula>,
    // Formulas whose clause can first be checked once position k is set.
    checks: Vec<Vec<usize>>,
    pos: HashMap<Formula, usize>,
}

impl Plan {
    fn new(members: Vec<Formula>) -> Plan {
        let pos: HashMap<Formula, usize> = members.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let mut checks = vec![Vec::new(); members.len()];
        for (i, f) in members.iter().enumerate() {
            let mut parts = vec![i];
            if let Some((_, a, b)) = f.as_binary() {
                parts.extend([pos[a], pos[b]]);
            } else if let Some((op, a)) = f.as_unary() {
                parts.push(pos[a]);
                if op == UnOp::Cons {
                    if let Some(&n) = pos.get(&Formula::neg(a.clone())) {
                        parts.push(n);
                    }
                }
            }
            checks[*parts.iter().max().unwrap()].push(i);
        }
        Plan { members, checks, pos }
    }

    fn ok_at(&self, k: usize, vals: &[Option<bool>]) -> bool {
        let look = |g: &Formula| self.pos.get(g).and_then(|&i| vals[i]);
        self.checks[k].iter().all(|&i| violated_at(&self.members[i], &look).is_none())
    }

    fn into_bivaluation(self, vals: &[Option<bool>]) -> Bivaluation {
        let values = self.members.into_iter().zip(vals).map(|(f, v)| (f, v.unwrap_or(false))).collect();
        Bivaluation { values }
    }
}

/// Does every bivaluation making `gamma` true make `phi` true? Decided over
/// the closure of the inputs extended by `¬α`, `∘α` for each member.
pub fn bival_consequence(gamma: &[Formula], phi: &Formula) -> Result<Verdict<Bivaluation>, PropError> {
    let mut all = gamma.to_vec();
    all.push(phi.clone());
    let plan = Plan::new(extended_closure(&all)?);
    let n = plan.members.len();
    let premise: Vec<bool> = plan.members.iter().map(|f| gamma.contains(f)).collect();
    let goal: Vec<bool> = plan.members.iter().map(|f| f == phi).collect();

    fn go(k: usize, vals: &mut Vec<Option<bool>>, plan: &Plan, premise: &[bool], goal: &[bool]) -> bool {
        if k == vals.len() {
            return true;
        }
        for v in [false, true] {
            if (premise[k] && !v) || (goal[k] && v) {
                continue;
            }
            vals[k] = Some(v);
            if plan.ok_at(k, vals) && go(k + 1, vals, plan, premise, goal) {
                return true;
            }
        }
        vals[k] = None;
        false
    }

    let mut vals = vec![None; n];
    if go(0, &mut vals, &plan, &premise, &goal) {
        Ok(Verdict::Countermodel(plan.into_bivaluation(&vals)))
    } else {
        Ok(Verdict::Holds)
    }
}

/// A random bivaluation on the extended closure of `formulas` satisfying
/// all five clauses: each member in turn gets a uniformly chosen value among
/// those that keep the clauses checkable so far satisfied.
pub fn random_bivaluation<R: Rng>(formulas: &[Formula], rng: &mut R) -> Result<Bivaluation, PropError> {
    let plan = Plan::new(extended_closure(formulas)?);
    let mut vals = vec![None; plan.members.len()];
    for k in 0..vals.len() {
        let mut allowed = Vec::new();
        for v in [false, true] {
            vals[k] = Some(v);
            if plan.ok_at(k, &vals) {
                allowed.push(v);
            }
        }
        // Every clause leaves the newest formula at least one value.
        vals[k] = Some(allowed[rng.gen_range(0..allowed.len())]);
    }
    Ok(plan.into_bivaluation(&vals))
}
