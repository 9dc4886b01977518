//! Valuation search over the ground closure of a set of sentences in a
//! structure over a full swap Nmatrix.
//!
//! Values are assigned per variant class (formulas equal up to void
//! quantifiers and bound-variable renaming share a value). Classes are
//! visited by increasing normal-form size, which puts every class after the
//! classes of its members' immediate subformulas and instances.

use std::collections::HashMap;
use std::fmt;

use crate::algebra::BAElement;
use crate::prop::projection_key;
use crate::swap::{Snapshot, SwapNmatrix};
use crate::syntax::{universal_closure, variant_normal_form, Assignment, BinOp, Formula, Term, UnOp};
use crate::Verdict;

use super::ground::{canonicalize, ground_closure, instance, GroundSentence};
use super::structure::SwapStructure;
use super::FoError;

const NEED_Z1: u8 = 1;
const NEED_Z2: u8 = 2;
const NEED_Z3: u8 = 4;
const NEED_ALL: u8 = 7;

/// A legal assignment of snapshots to a ground closure. As a countermodel it
/// is a closure countermodel: it satisfies every valuation clause among the
/// sentences it lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FOValuation {
    pub entries: Vec<(GroundSentence, Snapshot)>,
}

impl FOValuation {
    pub fn get(&self, g: &GroundSentence) -> Option<Snapshot> {
        self.entries.iter().find(|(h, _)| h == g).map(|(_, s)| *s)
    }

    pub fn render(&self, m: &SwapNmatrix) -> String {
        let mut out = String::new();
        for (g, s) in &self.entries {
            let label = m.index_of(s).map(|i| m.label(i)).unwrap_or_else(|| s.to_string());
            out.push_str(&format!("{g} -> {label}\n"));
        }
        out
    }
}

impl fmt::Display for FOValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, s) in &self.entries {
            writeln!(f, "{g} -> {s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum Constraint {
    Fixed(usize, usize),
    Un(UnOp, usize, usize),
    Bin(BinOp, usize, usize, usize),
    Quant { universal: bool, parent: usize, children: Vec<usize> },
    // e1 ∧ v(from)1 ≤ v(to)1
    Eq { e1: BAElement, from: usize, to: usize },
}

impl Constraint {
    fn classes(&self) -> Vec<usize> {
        match self {
            Constraint::Fixed(p, _) => vec![*p],
            Constraint::Un(_, p, a) => vec![*p, *a],
            Constraint::Bin(_, p, a, b) => vec![*p, *a, *b],
            Constraint::Quant { parent, children, .. } => {
                let mut v = vec![*parent];
                v.extend(children);
                v
            }
            Constraint::Eq { from, to, .. } => vec![*from, *to],
        }
    }

    fn holds(&self, m: &SwapNmatrix, v: &[usize]) -> bool {
        match self {
            Constraint::Fixed(p, x) => v[*p] == *x,
            Constraint::Un(op, p, a) => m.unary(*op, v[*a]).contains(&v[*p]),
            Constraint::Bin(op, p, a, b) => m.binary(*op, v[*a], v[*b]).contains(&v[*p]),
            Constraint::Quant { universal, parent, children } => {
                m.snapshot(v[*parent]).z1() == quant_first(m, *universal, children.iter().map(|&c| v[c]))
            }
            Constraint::Eq { e1, from, to } => (*e1 & m.snapshot(v[*from]).z1()).le(&m.snapshot(v[*to]).z1()),
        }
    }

    /// The values allowed at the parent once the other classes are set.
    fn generate<'m>(&self, m: &'m SwapNmatrix, v: &[usize]) -> Option<std::borrow::Cow<'m, [usize]>> {
        use std::borrow::Cow;
        match self {
            Constraint::Fixed(_, x) => Some(Cow::Owned(vec![*x])),
            Constraint::Un(op, _, a) => Some(Cow::Borrowed(m.unary(*op, v[*a]))),
            Constraint::Bin(op, _, a, b) => Some(Cow::Borrowed(m.binary(*op, v[*a], v[*b]))),
            Constraint::Quant { universal, children, .. } => {
                Some(Cow::Borrowed(m.with_first(quant_first(m, *universal, children.iter().map(|&c| v[c])))))
            }
            Constraint::Eq { .. } => None,
        }
    }
}

fn quant_first(m: &SwapNmatrix, universal: bool, values: impl Iterator<Item = usize>) -> BAElement {
    let a = m.algebra();
    let firsts = values.map(|i| m.snapshot(i).z1());
    if universal {
        firsts.fold(a.top(), |acc, z| acc & z)
    } else {
        firsts.fold(a.bottom(), |acc, z| acc | z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Req {
    Designated,
    Undesignated,
    Exactly(usize),
}

impl Req {
    fn allows(self, m: &SwapNmatrix, x: usize) -> bool {
        match self {
            Req::Designated => m.is_designated(x),
            Req::Undesignated => !m.is_designated(x),
            Req::Exactly(y) => x == y,
        }
    }
}

/// The closure of some sentences, split into variant classes, with the
/// constraints among the classes.
struct Problem<'a> {
    m: &'a SwapNmatrix,
    closure: Vec<GroundSentence>,
    class_of: Vec<usize>,
    classes: usize,
    constraints: Vec<Constraint>,
    // Constraints whose classes are all set once position k is.
    checks: Vec<Vec<usize>>,
    // A constraint that has k as its parent and can list k's candidates.
    generator: Vec<Option<usize>>,
    need: Vec<u8>,
    reqs: Vec<Vec<Req>>,
}

impl<'a> Problem<'a> {
    fn build(s: &'a SwapStructure, roots: &[GroundSentence], cap: usize, equality: bool) -> Result<Problem<'a>, FoError> {
        let m = &s.matrix;
        let closure = ground_closure(&s.base, roots, cap)?;
        let pos: HashMap<&GroundSentence, usize> = closure.iter().enumerate().map(|(i, g)| (g, i)).collect();

        // Variant classes, ordered by normal-form size then first appearance.
        let mut keys: HashMap<Formula, usize> = HashMap::new();
        let mut reps: Vec<(usize, usize)> = Vec::new();
        let mut raw_class = Vec::with_capacity(closure.len());
        for (i, g) in closure.iter().enumerate() {
            let nf = variant_normal_form(g.formula());
            let next = keys.len();
            let size = nf.size();
            let c = *keys.entry(nf).or_insert_with(|| {
                reps.push((size, i));
                next
            });
            raw_class.push(c);
        }
        let mut order: Vec<usize> = (0..reps.len()).collect();
        order.sort_by_key(|&c| reps[c]);
        let mut rank = vec![0; reps.len()];
        for (r, &c) in order.iter().enumerate() {
            rank[c] = r;
        }
        let class_of: Vec<usize> = raw_class.iter().map(|&c| rank[c]).collect();
        let classes = reps.len();

        let mut constraints = Vec::new();
        let value_index = |v: &Snapshot| m.index_of(v).expect("structure values lie in the matrix");
        for (i, g) in closure.iter().enumerate() {
            let p = class_of[i];
            let child = |f: &Formula| class_of[pos[&GroundSentence::from_formula(f.clone())]];
            match g.formula() {
                Formula::Atom(name, args) => {
                    let idx = domain_args(args);
                    constraints.push(Constraint::Fixed(p, value_index(&s.base.predicates[name].get(&idx))));
                }
                Formula::Eq(l, r) => {
                    let table = s.base.equality.as_ref().ok_or(FoError::NoEquality)?;
                    let idx = domain_args(&[l.clone(), r.clone()]);
                    constraints.push(Constraint::Fixed(p, value_index(&table.get(&idx))));
                }
                Formula::Neg(a) => constraints.push(Constraint::Un(UnOp::Neg, p, child(a))),
                Formula::Cons(a) => constraints.push(Constraint::Un(UnOp::Cons, p, child(a))),
                Formula::And(a, b) => constraints.push(Constraint::Bin(BinOp::And, p, child(a), child(b))),
                Formula::Or(a, b) => constraints.push(Constraint::Bin(BinOp::Or, p, child(a), child(b))),
                Formula::Imp(a, b) => constraints.push(Constraint::Bin(BinOp::Imp, p, child(a), child(b))),
                Formula::Forall(x, body) | Formula::Exists(x, body) => {
                    let children: Vec<usize> =
                        (0..s.base.size()).map(|a| class_of[pos[&instance(&s.base, x, body, a)]]).collect();
                    // A void quantifier shares its class with its instance; the
                    // clause then says v1 = v1.
                    if children.iter().all(|&c| c == p) {
                        continue;
                    }
                    let universal = matches!(g.formula(), Formula::Forall(..));
                    constraints.push(Constraint::Quant { universal, parent: p, children });
                }
            }
        }
        if equality {
            if let Some(table) = &s.base.equality {
                equality_constraints(&closure, &class_of, |a, b| table.get(&[a, b]).z1(), &mut constraints);
            }
        }

        let mut checks = vec![Vec::new(); classes];
        let mut generator = vec![None; classes];
        let mut need = vec![0u8; classes];
        for (k, c) in constraints.iter().enumerate() {
            let cls = c.classes();
            let last = *cls.iter().max().unwrap();
            checks[last].push(k);
            let parent = cls[0];
            if !matches!(c, Constraint::Eq { .. }) && parent == last && generator[parent].is_none() {
                generator[parent] = Some(k);
            }
            match c {
                Constraint::Fixed(p, _) => need[*p] |= NEED_ALL,
                Constraint::Un(op, p, a) => {
                    need[*p] |= NEED_Z1;
                    need[*a] |= if *op == UnOp::Neg { NEED_Z2 } else { NEED_Z3 };
                }
                _ => {
                    for x in cls {
                        need[x] |= NEED_Z1;
                    }
                }
            }
        }
        Ok(Problem { m, closure, class_of, classes, constraints, checks, generator, need, reqs: vec![Vec::new(); classes] })
    }

    fn require(&mut self, g: &GroundSentence, r: Req) {
        let i = self.closure.iter().position(|h| h == g).expect("root sentences are in the closure");
        let c = self.class_of[i];
        self.reqs[c].push(r);
        self.need[c] |= NEED_Z1;
        if matches!(r, Req::Exactly(_)) {
            self.need[c] |= NEED_ALL;
        }
    }

    fn candidates(&self, k: usize, values: &[usize]) -> Vec<usize> {
        let base: Vec<usize> = match self.generator[k].and_then(|g| self.constraints[g].generate(self.m, values)) {
            Some(list) => list.into_owned(),
            None => (0..self.m.len()).collect(),
        };
        base.into_iter().filter(|&x| self.reqs[k].iter().all(|r| r.allows(self.m, x))).collect()
    }

    /// Depth-first search; `visit` returns `true` to stop.
    fn search(&self, prune: bool, visit: &mut dyn FnMut(&[usize]) -> bool) {
        let mut values = vec![0usize; self.classes];
        self.go(0, &mut values, prune, visit);
    }

    fn go(&self, k: usize, values: &mut Vec<usize>, prune: bool, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if k == self.classes {
            return visit(values);
        }
        let mut tried: Vec<(u64, u64, u64)> = Vec::new();
        for x in self.candidates(k, values) {
            values[k] = x;
            if !self.checks[k].iter().all(|&c| self.constraints[c].holds(self.m, values)) {
                continue;
            }
            if prune {
                let key = projection_key(&self.m.snapshot(x), self.need[k]);
                if tried.contains(&key) {
                    continue;
                }
                tried.push(key);
            }
            if self.go(k + 1, values, prune, visit) {
                return true;
            }
        }
        false
    }

    fn valuation(&self, values: &[usize]) -> FOValuation {
        let entries = self
            .closure
            .iter()
            .zip(&self.class_of)
            .map(|(g, &c)| (g.clone(), self.m.snapshot(values[c])))
            .collect();
        FOValuation { entries }
    }
}

fn domain_args(args: &[Term]) -> Vec<usize> {
    args.iter()
        .map(|t| match t {
            Term::Domain(k) => *k,
            _ => unreachable!("closure members are canonical sentences"),
        })
        .collect()
}

/// The formula with every domain constant replaced by `@0`: sentences
/// related by replacing domain constants share this key.
fn skeleton(f: &Formula) -> Formula {
    fn t(x: &Term) -> Term {
        match x {
            Term::Domain(_) => Term::Domain(0),
            Term::App(g, args) => Term::App(g.clone(), args.iter().map(t).collect()),
            other => other.clone(),
        }
    }
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(t).collect()),
        Formula::Eq(a, b) => Formula::Eq(t(a), t(b)),
        Formula::Neg(a) => Formula::neg(skeleton(a)),
        Formula::Cons(a) => Formula::cons(skeleton(a)),
        Formula::And(a, b) => Formula::and(skeleton(a), skeleton(b)),
        Formula::Or(a, b) => Formula::or(skeleton(a), skeleton(b)),
        Formula::Imp(a, b) => Formula::imp(skeleton(a), skeleton(b)),
        Formula::Forall(x, a) => Formula::forall(x, skeleton(a)),
        Formula::Exists(x, a) => Formula::exists(x, skeleton(a)),
    }
}

/// If `to` arises from `from` by replacing some occurrences of one domain
/// constant `@a` by another `@b`, returns `(a, b)`.
fn replacement(from: &Formula, to: &Formula) -> Option<(usize, usize)> {
    let mut pair: Option<(usize, usize)> = None;
    fn terms(x: &Term, y: &Term, pair: &mut Option<(usize, usize)>) -> bool {
        match (x, y) {
            (Term::Domain(a), Term::Domain(b)) if a != b => match pair {
                Some(p) => *p == (*a, *b),
                None => {
                    *pair = Some((*a, *b));
                    true
                }
            },
            (Term::App(f, xs), Term::App(g, ys)) => f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(u, v)| terms(u, v, pair)),
            _ => x == y,
        }
    }
    fn walk(x: &Formula, y: &Formula, pair: &mut Option<(usize, usize)>) -> bool {
        match (x, y) {
            (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
                p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(u, v)| terms(u, v, pair))
            }
            (Formula::Eq(a, b), Formula::Eq(c, d)) => terms(a, c, pair) && terms(b, d, pair),
            (Formula::Neg(a), Formula::Neg(b)) | (Formula::Cons(a), Formula::Cons(b)) => walk(a, b, pair),
            (Formula::And(a, b), Formula::And(c, d))
            | (Formula::Or(a, b), Formula::Or(c, d))
            | (Formula::Imp(a, b), Formula::Imp(c, d)) => walk(a, c, pair) && walk(b, d, pair),
            (Formula::Forall(x1, a), Formula::Forall(x2, b)) | (Formula::Exists(x1, a), Formula::Exists(x2, b)) => {
                x1 == x2 && walk(a, b, pair)
            }
            _ => false,
        }
    }
    if walk(from, to, &mut pair) {
        pair
    } else {
        None
    }
}

/// Ground instances of `(x≈y) → (φ → φ[x≀y])` among closure members, as
/// constraints between their classes. Instances whose equality value has a
/// bottom first coordinate are trivially designated and skipped.
fn equality_constraints(
    closure: &[GroundSentence],
    class_of: &[usize],
    e1: impl Fn(usize, usize) -> BAElement,
    out: &mut Vec<Constraint>,
) {
    let mut groups: HashMap<Formula, Vec<usize>> = HashMap::new();
    for (i, g) in closure.iter().enumerate() {
        groups.entry(skeleton(g.formula())).or_default().push(i);
    }
    let mut seen = std::collections::HashSet::new();
    let mut keys: Vec<&Formula> = groups.keys().collect();
    keys.sort();
    for key in keys {
        let members = &groups[key];
        for &i in members {
            for &j in members {
                let (from, to) = (class_of[i], class_of[j]);
                if from == to {
                    continue;
                }
                let Some((a, b)) = replacement(closure[i].formula(), closure[j].formula()) else { continue };
                let e = e1(a, b);
                if e.is_bottom() || !seen.insert((e, from, to)) {
                    continue;
                }
                out.push(Constraint::Eq { e1: e, from, to });
            }
        }
    }
}

fn close_and_ground(s: &SwapStructure, f: &Formula) -> Result<GroundSentence, FoError> {
    canonicalize(&s.base, &universal_closure(f), &Assignment::new())
}

/// `gamma ⊨ phi` in the structure `s`, after taking universal closures.
/// The countermodel is a closure countermodel: a legal valuation of the
/// ground closure designating every premise and not the goal.
pub fn qmbc_consequence(
    gamma: &[Formula],
    phi: &Formula,
    s: &SwapStructure,
    cap: usize,
) -> Result<Verdict<FOValuation>, FoError> {
    let premises = gamma.iter().map(|g| close_and_ground(s, g)).collect::<Result<Vec<_>, _>>()?;
    let goal = close_and_ground(s, phi)?;
    let mut roots = premises.clone();
    roots.push(goal.clone());
    let mut problem = Problem::build(s, &roots, cap, true)?;
    for p in &premises {
        problem.require(p, Req::Designated);
    }
    problem.require(&goal, Req::Undesignated);
    let mut found = None;
    problem.search(true, &mut |v| {
        found = Some(problem.valuation(v));
        true
    });
    Ok(match found {
        Some(v) => Verdict::Countermodel(v),
        None => Verdict::Holds,
    })
}

/// Legal valuations of the ground closure of `sentences`, in search order,
/// at most `limit` of them. With `equality` false the equality clause is
/// not imposed.
pub fn qmbc_valuations(
    s: &SwapStructure,
    sentences: &[Formula],
    cap: usize,
    limit: usize,
    equality: bool,
) -> Result<Vec<FOValuation>, FoError> {
    let roots = sentences.iter().map(|g| close_and_ground(s, g)).collect::<Result<Vec<_>, _>>()?;
    let problem = Problem::build(s, &roots, cap, equality)?;
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    problem.search(false, &mut |v| {
        out.push(problem.valuation(v));
        out.len() >= limit
    });
    Ok(out)
}

/// The values a sentence takes across legal valuations of its closure, in
/// canonical order.
pub fn qmbc_possible_values(s: &SwapStructure, sentence: &Formula, cap: usize) -> Result<Vec<Snapshot>, FoError> {
    if !crate::syntax::free_vars(sentence).is_empty() {
        return Err(FoError::NotASentence(sentence.to_string()));
    }
    let root = canonicalize(&s.base, sentence, &Assignment::new())?;
    let mut out = Vec::new();
    for x in 0..s.matrix.len() {
        let mut problem = Problem::build(s, std::slice::from_ref(&root), cap, true)?;
        problem.require(&root, Req::Exactly(x));
        let mut hit = false;
        problem.search(true, &mut |_| {
            hit = true;
            true
        });
        if hit {
            out.push(s.matrix.snapshot(x));
        }
    }
    Ok(out)
}

/// Drops the valuations violating an instance of the equality clause among
/// the sentences they list.
pub fn qmbc_eq_filter(valuations: Vec<FOValuation>, s: &SwapStructure) -> Vec<FOValuation> {
    let Some(table) = &s.base.equality else { return valuations };
    valuations.into_iter().filter(|v| equality_violation(v, |a, b| table.get(&[a, b]).z1()).is_none()).collect()
}

fn equality_violation(v: &FOValuation, e1: impl Fn(usize, usize) -> BAElement) -> Option<String> {
    for (g, x) in &v.entries {
        for (h, y) in &v.entries {
            if let Some((a, b)) = replacement(g.formula(), h.formula()) {
                if !(e1(a, b) & x.z1()).le(&y.z1()) {
                    return Some(format!("equality clause fails from `{g}` to `{h}`"));
                }
            }
        }
    }
    None
}

/// Re-checks every valuation clause on the sentences `v` lists: atoms,
/// connectives, quantifiers, variants and, if the structure has one, the
/// equality clause. Members whose parts are missing from `v` are reported.
pub fn check_fo_valuation(v: &FOValuation, s: &SwapStructure) -> Result<(), String> {
    let m = &s.matrix;
    let map: HashMap<&GroundSentence, Snapshot> = v.entries.iter().map(|(g, x)| (g, *x)).collect();
    let get = |f: &Formula| -> Result<Snapshot, String> {
        map.get(&GroundSentence::from_formula(f.clone())).copied().ok_or_else(|| format!("`{f}` is missing"))
    };
    let idx = |x: &Snapshot| m.index_of(x).ok_or_else(|| format!("{x} is not in the matrix"));
    let mut by_nf: HashMap<Formula, Snapshot> = HashMap::new();
    for (g, x) in &v.entries {
        let f = g.formula();
        let ok = match f {
            Formula::Atom(p, args) => {
                let t = s.base.predicates.get(p).ok_or_else(|| format!("unknown predicate {p}"))?;
                t.get(&domain_args(args)) == *x
            }
            Formula::Eq(l, r) => {
                let t = s.base.equality.as_ref().ok_or("no equality")?;
                t.get(&domain_args(&[l.clone(), r.clone()])) == *x
            }
            Formula::Neg(a) => m.unary(UnOp::Neg, idx(&get(a)?)?).contains(&idx(x)?),
            Formula::Cons(a) => m.unary(UnOp::Cons, idx(&get(a)?)?).contains(&idx(x)?),
            Formula::And(a, b) => m.binary(BinOp::And, idx(&get(a)?)?, idx(&get(b)?)?).contains(&idx(x)?),
            Formula::Or(a, b) => m.binary(BinOp::Or, idx(&get(a)?)?, idx(&get(b)?)?).contains(&idx(x)?),
            Formula::Imp(a, b) => m.binary(BinOp::Imp, idx(&get(a)?)?, idx(&get(b)?)?).contains(&idx(x)?),
            Formula::Forall(y, body) | Formula::Exists(y, body) => {
                let universal = matches!(f, Formula::Forall(..));
                let mut vals = Vec::new();
                for a in 0..s.base.size() {
                    vals.push(idx(&get(instance(&s.base, y, body, a).formula())?)?);
                }
                x.z1() == quant_first(m, universal, vals.into_iter())
            }
        };
        if !ok {
            return Err(format!("clause fails at `{g}`"));
        }
        let nf = variant_normal_form(f);
        if let Some(y) = by_nf.insert(nf, *x) {
            if y != *x {
                return Err(format!("variants of `{g}` take different values"));
            }
        }
    }
    if let Some(t) = &s.base.equality {
        if let Some(e) = equality_violation(v, |a, b| t.get(&[a, b]).z1()) {
            return Err(e);
        }
    }
    Ok(())
}
