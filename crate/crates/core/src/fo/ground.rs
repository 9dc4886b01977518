use std::collections::HashSet;
use std::fmt;

use crate::syntax::{Assignment, Formula, Term};

use super::structure::{Structure, TruthValue};
use super::FoError;

/// Default bound on the size of a ground closure.
pub const DEFAULT_CLOSURE_CAP: usize = 20_000;

/// A sentence of the diagram language in which every closed term has been
/// replaced by the domain constant `@k` naming its denotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSentence(Formula);

impl GroundSentence {
    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }

    pub(crate) fn from_formula(f: Formula) -> GroundSentence {
        GroundSentence(f)
    }
}

impl fmt::Display for GroundSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn eval_term<V: TruthValue>(s: &Structure<V>, mu: &Assignment, t: &Term) -> Result<usize, FoError> {
    match t {
        Term::Var(x) => mu.get(x).copied().ok_or_else(|| FoError::UnmappedVariable(x.clone())),
        Term::Const(c) => s.constants.get(c).copied().ok_or_else(|| FoError::UnknownSymbol(c.clone())),
        Term::Domain(k) => {
            if *k < s.size() {
                Ok(*k)
            } else {
                Err(FoError::DomainOutOfRange(*k))
            }
        }
        Term::App(f, args) => {
            let table = s.functions.get(f).ok_or_else(|| FoError::UnknownSymbol(f.clone()))?;
            if table.arity() != args.len() {
                return Err(FoError::UnknownSymbol(format!("{f}/{}", args.len())));
            }
            let vals = args.iter().map(|a| eval_term(s, mu, a)).collect::<Result<Vec<_>, _>>()?;
            Ok(table.get(&vals))
        }
    }
}

fn canon_term<V: TruthValue>(
    s: &Structure<V>,
    t: &Term,
    bound: &[String],
    mu: &Assignment,
) -> Result<Term, FoError> {
    match t {
        Term::Var(x) if bound.contains(x) => Ok(t.clone()),
        Term::Var(_) | Term::Const(_) | Term::Domain(_) => Ok(Term::Domain(eval_term(s, mu, t)?)),
        Term::App(f, args) => {
            let args = args.iter().map(|a| canon_term(s, a, bound, mu)).collect::<Result<Vec<_>, _>>()?;
            if args.iter().all(|a| matches!(a, Term::Domain(_))) {
                Ok(Term::Domain(eval_term(s, mu, &Term::App(f.clone(), args))?))
            } else {
                let table = s.functions.get(f).ok_or_else(|| FoError::UnknownSymbol(f.clone()))?;
                if table.arity() != args.len() {
                    return Err(FoError::UnknownSymbol(format!("{f}/{}", args.len())));
                }
                Ok(Term::App(f.clone(), args))
            }
        }
    }
}

fn canon<V: TruthValue>(
    s: &Structure<V>,
    f: &Formula,
    bound: &mut Vec<String>,
    mu: &Assignment,
) -> Result<Formula, FoError> {
    Ok(match f {
        Formula::Atom(p, args) => {
            let table = s.predicates.get(p).ok_or_else(|| FoError::UnknownSymbol(p.clone()))?;
            if table.arity() != args.len() {
                return Err(FoError::UnknownSymbol(format!("{p}/{}", args.len())));
            }
            let args = args.iter().map(|a| canon_term(s, a, bound, mu)).collect::<Result<Vec<_>, _>>()?;
            Formula::Atom(p.clone(), args)
        }
        Formula::Eq(a, b) => {
            if s.equality.is_none() {
                return Err(FoError::NoEquality);
            }
            Formula::Eq(canon_term(s, a, bound, mu)?, canon_term(s, b, bound, mu)?)
        }
        Formula::Neg(a) => Formula::neg(canon(s, a, bound, mu)?),
        Formula::Cons(a) => Formula::cons(canon(s, a, bound, mu)?),
        Formula::And(a, b) => Formula::and(canon(s, a, bound, mu)?, canon(s, b, bound, mu)?),
        Formula::Or(a, b) => Formula::or(canon(s, a, bound, mu)?, canon(s, b, bound, mu)?),
        Formula::Imp(a, b) => Formula::imp(canon(s, a, bound, mu)?, canon(s, b, bound, mu)?),
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            bound.push(x.clone());
            let body = canon(s, a, bound, mu);
            bound.pop();
            let body = Box::new(body?);
            match f {
                Formula::Forall(..) => Formula::Forall(x.clone(), body),
                _ => Formula::Exists(x.clone(), body),
            }
        }
    })
}

/// Replaces the free variables of `phi` by the constants `@μ(x)` and then
/// every closed term by the constant of its denotation, innermost first.
/// Also checks every symbol against the structure.
pub fn canonicalize<V: TruthValue>(
    s: &Structure<V>,
    phi: &Formula,
    mu: &Assignment,
) -> Result<GroundSentence, FoError> {
    Ok(GroundSentence(canon(s, phi, &mut Vec::new(), mu)?))
}

/// `body[x/@a]`, canonicalized, for a quantified ground sentence `Qx.body`.
pub(crate) fn instance<V: TruthValue>(s: &Structure<V>, x: &str, body: &Formula, a: usize) -> GroundSentence {
    let mu = Assignment::from([(x.to_string(), a)]);
    // The body's only free variable is x and its symbols were already checked.
    GroundSentence(canon(s, body, &mut Vec::new(), &mu).expect("instance of a ground sentence"))
}

/// The sentences together with all their subformulas and quantifier
/// instances, children before parents, without repetition.
pub fn ground_closure<V: TruthValue>(
    s: &Structure<V>,
    sentences: &[GroundSentence],
    cap: usize,
) -> Result<Vec<GroundSentence>, FoError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for g in sentences {
        walk(s, &g.0, &mut out, &mut seen, cap)?;
    }
    Ok(out)
}

fn walk<V: TruthValue>(
    s: &Structure<V>,
    f: &Formula,
    out: &mut Vec<GroundSentence>,
    seen: &mut HashSet<Formula>,
    cap: usize,
) -> Result<(), FoError> {
    if seen.contains(f) {
        return Ok(());
    }
    match f {
        Formula::Atom(..) | Formula::Eq(..) => {}
        Formula::Neg(a) | Formula::Cons(a) => walk(s, a, out, seen, cap)?,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            walk(s, a, out, seen, cap)?;
            walk(s, b, out, seen, cap)?;
        }
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            for a in 0..s.size() {
                let inst = instance(s, x, body, a);
                walk(s, &inst.0, out, seen, cap)?;
            }
        }
    }
    if out.len() >= cap {
        return Err(FoError::ClosureTooLarge(cap));
    }
    seen.insert(f.clone());
    out.push(GroundSentence(f.clone()));
    Ok(())
}
