//! Propositional consequence over swap Nmatrices, decided on the subformula
//! closure of the premises and goal.
//!
//! A legal assignment of snapshots to a subformula-closed set extends to a
//! valuation on all formulas, so a countermodel on the closure is a
//! countermodel outright, and an exhausted search means the consequence holds.

mod bival;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::swap::{Snapshot, SwapNmatrix};
use crate::syntax::{BinOp, Formula, UnOp};
use crate::Verdict;

pub use bival::{
    bival_consequence, bival_to_valuation, check_bivaluation, random_bivaluation, BivalError, Bivaluation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropError {
    #[error("`{0}` is not propositional")]
    NotPropositional(String),
}

/// All subformulas of `formulas`, children before parents, each listed once
/// at its first completed occurrence in a left-to-right post-order walk.
pub fn closure(formulas: &[Formula]) -> Result<Vec<Formula>, PropError> {
    let mut out = Vec::new();
    let mut seen = HashMap::new();
    for f in formulas {
        if !f.is_propositional() {
            return Err(PropError::NotPropositional(f.to_string()));
        }
        post_order(f, &mut out, &mut seen);
    }
    Ok(out)
}

fn post_order(f: &Formula, out: &mut Vec<Formula>, seen: &mut HashMap<Formula, usize>) {
    if seen.contains_key(f) {
        return;
    }
    if let Some((_, a)) = f.as_unary() {
        post_order(a, out, seen);
    } else if let Some((_, a, b)) = f.as_binary() {
        post_order(a, out, seen);
        post_order(b, out, seen);
    }
    seen.insert(f.clone(), out.len());
    out.push(f.clone());
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Shape {
    Atom,
    Un(UnOp, usize),
    Bin(BinOp, usize, usize),
}

/// Closure members with their children resolved to positions.
pub(crate) fn shapes(members: &[Formula]) -> Vec<Shape> {
    let pos: HashMap<&Formula, usize> = members.iter().enumerate().map(|(i, f)| (f, i)).collect();
    members
        .iter()
        .map(|f| {
            if let Some((op, a)) = f.as_unary() {
                Shape::Un(op, pos[a])
            } else if let Some((op, a, b)) = f.as_binary() {
                Shape::Bin(op, pos[a], pos[b])
            } else {
                Shape::Atom
            }
        })
        .collect()
}

/// An assignment of snapshots to a subformula-closed list of formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropValuation {
    pub entries: Vec<(Formula, Snapshot)>,
}

impl PropValuation {
    pub fn get(&self, f: &Formula) -> Option<Snapshot> {
        self.entries.iter().find(|(g, _)| g == f).map(|(_, s)| *s)
    }

    /// Checks every entry against the multioperations of `m`. Entries whose
    /// children are not listed are only checked for domain membership.
    pub fn check(&self, m: &SwapNmatrix) -> Result<(), String> {
        let index = |s: &Snapshot| m.index_of(s).ok_or_else(|| format!("{s} is not a value of the matrix"));
        for (f, s) in &self.entries {
            let v = index(s)?;
            let allowed = if let Some((op, a)) = f.as_unary() {
                match self.get(a) {
                    Some(sa) => Some(m.unary(op, index(&sa)?)),
                    None => None,
                }
            } else if let Some((op, a, b)) = f.as_binary() {
                match (self.get(a), self.get(b)) {
                    (Some(sa), Some(sb)) => Some(m.binary(op, index(&sa)?, index(&sb)?)),
                    _ => None,
                }
            } else {
                None
            };
            if let Some(outs) = allowed {
                if !outs.contains(&v) {
                    return Err(format!("value {} of `{f}` is not allowed by the multioperation", m.label(v)));
                }
            }
        }
        Ok(())
    }

    pub fn render(&self, m: &SwapNmatrix) -> String {
        let mut out = String::new();
        for (f, s) in &self.entries {
            let label = match m.index_of(s) {
                Some(i) if m.names().is_some() => format!("{} {s}", m.label(i)),
                _ => s.to_string(),
            };
            out.push_str(&format!("{f} -> {label}\n"));
        }
        out
    }
}

impl fmt::Display for PropValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, s) in &self.entries {
            writeln!(f, "{g} -> {s}")?;
        }
        Ok(())
    }
}

// Which snapshot coordinates of a node its parents and the designation test
// can observe. Candidates agreeing on these are interchangeable.
const NEED_Z1: u8 = 1;
const NEED_Z2: u8 = 2;
const NEED_Z3: u8 = 4;

pub(crate) fn projection_key(s: &Snapshot, need: u8) -> (u64, u64, u64) {
    let pick = |bit: u8, k: usize| if need & bit != 0 { s.coord(k).bits() } else { 0 };
    (pick(NEED_Z1, 1), pick(NEED_Z2, 2), pick(NEED_Z3, 3))
}

struct Search<'a> {
    m: &'a SwapNmatrix,
    shapes: Vec<Shape>,
    premise: Vec<bool>,
    goal: Vec<bool>,
    need: Vec<u8>,
    values: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, k: usize) -> bool {
        if k == self.shapes.len() {
            return true;
        }
        let candidates: Vec<usize> = match self.shapes[k] {
            Shape::Atom => (0..self.m.len()).collect(),
            Shape::Un(op, a) => self.m.unary(op, self.values[a]).to_vec(),
            Shape::Bin(op, a, b) => self.m.binary(op, self.values[a], self.values[b]).to_vec(),
        };
        let mut tried: Vec<(u64, u64, u64)> = Vec::new();
        for c in candidates {
            let d = self.m.is_designated(c);
            if (self.premise[k] && !d) || (self.goal[k] && d) {
                continue;
            }
            let key = projection_key(&self.m.snapshot(c), self.need[k]);
            if tried.contains(&key) {
                continue;
            }
            tried.push(key);
            self.values[k] = c;
            if self.run(k + 1) {
                return true;
            }
        }
        false
    }
}

/// Does `gamma` entail `phi` in `m`? The countermodel, if any, is the first
/// one met when closure members are assigned in closure order and values
/// are tried in the matrix's canonical order.
pub fn prop_consequence(
    gamma: &[Formula],
    phi: &Formula,
    m: &SwapNmatrix,
) -> Result<Verdict<PropValuation>, PropError> {
    let mut all: Vec<Formula> = gamma.to_vec();
    all.push(phi.clone());
    let members = closure(&all)?;
    let shapes = shapes(&members);
    let n = members.len();
    let mut premise = vec![false; n];
    let mut goal = vec![false; n];
    let mut need = vec![0u8; n];
    for (i, f) in members.iter().enumerate() {
        premise[i] = gamma.contains(f);
        goal[i] = f == phi;
        if premise[i] || goal[i] {
            need[i] |= NEED_Z1;
        }
    }
    for s in &shapes {
        match *s {
            Shape::Atom => {}
            Shape::Un(UnOp::Neg, a) => need[a] |= NEED_Z2,
            Shape::Un(UnOp::Cons, a) => need[a] |= NEED_Z3,
            Shape::Bin(_, a, b) => {
                need[a] |= NEED_Z1;
                need[b] |= NEED_Z1;
            }
        }
    }
    let mut search = Search { m, shapes, premise, goal, need, values: vec![0; n] };
    if search.run(0) {
        let entries = members.into_iter().zip(search.values.iter().map(|&i| m.snapshot(i))).collect();
        Ok(Verdict::Countermodel(PropValuation { entries }))
    } else {
        Ok(Verdict::Holds)
    }
}

pub fn is_valid(phi: &Formula, m: &SwapNmatrix) -> Result<bool, PropError> {
    Ok(prop_consequence(&[], phi, m)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::powerset_algebra;
    use crate::swap::{full_swap, m5};
    use crate::syntax::{parse_formula_extending, Signature};

    fn f(s: &str) -> Formula {
        parse_formula_extending(s, &mut Signature::new()).unwrap()
    }

    #[test]
    fn closure_order() {
        assert_eq!(closure(&[f("p -> q")]).unwrap(), vec![f("p"), f("q"), f("p -> q")]);
        assert_eq!(closure(&[f("*p")]).unwrap(), vec![f("p"), f("*p")]);
        assert_eq!(closure(&[f("p"), f("p")]).unwrap(), vec![f("p")]);
        assert!(closure(&[f("P(x)")]).is_err());
    }

    #[test]
    fn lfi_laws() {
        let m = m5();
        let v = prop_consequence(&[f("p"), f("~p")], &f("q"), &m).unwrap();
        let Verdict::Countermodel(cm) = v else { panic!("expected a countermodel") };
        cm.check(&m).unwrap();
        assert!(cm.get(&f("p")).unwrap().is_designated());
        assert!(cm.get(&f("~p")).unwrap().is_designated());
        assert!(!cm.get(&f("q")).unwrap().is_designated());

        assert!(prop_consequence(&[f("*p"), f("p"), f("~p")], &f("q"), &m).unwrap().holds());
        assert!(is_valid(&f("p | ~p"), &m).unwrap());
        assert!(!is_valid(&f("~~p -> p"), &m).unwrap());
        assert!(!is_valid(&f("~(p & ~p) -> *p"), &m).unwrap());
        assert!(is_valid(&f("p -> p"), &m).unwrap());
    }

    #[test]
    fn first_countermodel_is_canonical() {
        // Values are tried f0 < F < t0 < T < t; atoms come first in the closure.
        let m = m5();
        let Verdict::Countermodel(cm) = prop_consequence(&[f("p"), f("~p")], &f("q"), &m).unwrap() else {
            panic!()
        };
        let label = |g: &str| m.label(m.index_of(&cm.get(&f(g)).unwrap()).unwrap());
        assert_eq!(label("p"), "t");
        assert_eq!(label("q"), "f0");
        assert_eq!(label("~p"), "t0");
    }

    #[test]
    fn projection_pruning_matches_plain_search() {
        // Plain enumeration of every legal closure assignment, no pruning.
        fn plain(gamma: &[Formula], phi: &Formula, m: &SwapNmatrix) -> Option<Vec<usize>> {
            let mut all = gamma.to_vec();
            all.push(phi.clone());
            let members = closure(&all).unwrap();
            let sh = shapes(&members);
            fn go(
                k: usize,
                vals: &mut Vec<usize>,
                sh: &[Shape],
                members: &[Formula],
                gamma: &[Formula],
                phi: &Formula,
                m: &SwapNmatrix,
            ) -> bool {
                if k == sh.len() {
                    return true;
                }
                let cands: Vec<usize> = match sh[k] {
                    Shape::Atom => (0..m.len()).collect(),
                    Shape::Un(op, a) => m.unary(op, vals[a]).to_vec(),
                    Shape::Bin(op, a, b) => m.binary(op, vals[a], vals[b]).to_vec(),
                };
                for c in cands {
                    let d = m.is_designated(c);
                    if (gamma.contains(&members[k]) && !d) || (&members[k] == phi && d) {
                        continue;
                    }
                    vals[k] = c;
                    if go(k + 1, vals, sh, members, gamma, phi, m) {
                        return true;
                    }
                }
                false
            }
            let mut vals = vec![0; members.len()];
            go(0, &mut vals, &sh, &members, gamma, phi, m).then_some(vals)
        }
        let m2 = full_swap(&powerset_algebra(2).unwrap()).unwrap();
        let cases = [
            (vec![], "~~p -> p"),
            (vec!["p", "~p"], "q"),
            (vec!["*p", "p"], "~~p"),
            (vec!["p | q", "~p"], "q & *q"),
            (vec![], "~(p & ~p) -> *p"),
            (vec!["*p", "p", "~p"], "q"),
        ];
        for m in [m5(), m2] {
            for (gamma, phi) in &cases {
                let gamma: Vec<Formula> = gamma.iter().map(|s| f(s)).collect();
                let phi = f(phi);
                let expected = plain(&gamma, &phi, &m);
                let got = match prop_consequence(&gamma, &phi, &m).unwrap() {
                    Verdict::Holds => None,
                    Verdict::Countermodel(cm) => {
                        cm.check(&m).unwrap();
                        Some(cm.entries.iter().map(|(_, s)| m.index_of(s).unwrap()).collect())
                    }
                };
                assert_eq!(got, expected, "{phi}");
            }
        }
    }
}
