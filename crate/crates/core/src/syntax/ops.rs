use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("term `{term}` is not free for `{var}` in `{formula}`")]
pub struct CaptureError {
    pub term: String,
    pub var: String,
    pub formula: String,
}

pub fn term_vars(t: &Term) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_term_vars(t, &mut out);
    out
}

fn collect_term_vars(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Const(_) | Term::Domain(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| collect_term_vars(a, out)),
    }
}

fn term_mentions(t: &Term, x: &str) -> bool {
    match t {
        Term::Var(y) => y == x,
        Term::Const(_) | Term::Domain(_) => false,
        Term::App(_, args) => args.iter().any(|a| term_mentions(a, x)),
    }
}

pub fn free_vars(f: &Formula) -> BTreeSet<String> {
    free_vars_ordered(f).into_iter().collect()
}

/// Free variables in order of first (leftmost) free occurrence.
pub fn free_vars_ordered(f: &Formula) -> Vec<String> {
    let mut out = Vec::new();
    let mut bound = Vec::new();
    collect_free(f, &mut bound, &mut out);
    out
}

fn push_term_free(t: &Term, bound: &[String], out: &mut Vec<String>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(x) && !out.contains(x) {
                out.push(x.clone());
            }
        }
        Term::Const(_) | Term::Domain(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| push_term_free(a, bound, out)),
    }
}

fn collect_free(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
    match f {
        Formula::Atom(_, args) => args.iter().for_each(|t| push_term_free(t, bound, out)),
        Formula::Eq(a, b) => {
            push_term_free(a, bound, out);
            push_term_free(b, bound, out);
        }
        Formula::Neg(a) | Formula::Cons(a) => collect_free(a, bound, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            bound.push(x.clone());
            collect_free(a, bound, out);
            bound.pop();
        }
    }
}

/// Does `x` occur free in `f`?
pub(crate) fn occurs_free(x: &str, f: &Formula) -> bool {
    match f {
        Formula::Atom(_, args) => args.iter().any(|t| term_mentions(t, x)),
        Formula::Eq(a, b) => term_mentions(a, x) || term_mentions(b, x),
        Formula::Neg(a) | Formula::Cons(a) => occurs_free(x, a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            occurs_free(x, a) || occurs_free(x, b)
        }
        Formula::Forall(y, a) | Formula::Exists(y, a) => y != x && occurs_free(x, a),
    }
}

/// True iff no free occurrence of `x` in `f` lies in the scope of a
/// quantifier binding a variable of `t`.
pub fn is_free_for(t: &Term, x: &str, f: &Formula) -> bool {
    if matches!(t, Term::Var(y) if y == x) {
        return true;
    }
    let tv = term_vars(t);
    free_for(&tv, x, f, &mut Vec::new())
}

fn free_for(tv: &BTreeSet<String>, x: &str, f: &Formula, bound: &mut Vec<String>) -> bool {
    match f {
        Formula::Atom(..) | Formula::Eq(..) => {
            let here = atom_terms_any(f, x);
            !here || !bound.iter().any(|b| tv.contains(b))
        }
        Formula::Neg(a) | Formula::Cons(a) => free_for(tv, x, a, bound),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            free_for(tv, x, a, bound) && free_for(tv, x, b, bound)
        }
        Formula::Forall(y, a) | Formula::Exists(y, a) => {
            if y == x {
                return true;
            }
            bound.push(y.clone());
            let ok = free_for(tv, x, a, bound);
            bound.pop();
            ok
        }
    }
}

fn atom_terms_any(f: &Formula, x: &str) -> bool {
    match f {
        Formula::Atom(_, args) => args.iter().any(|t| term_mentions(t, x)),
        Formula::Eq(a, b) => term_mentions(a, x) || term_mentions(b, x),
        _ => false,
    }
}

pub(crate) fn substitute_term(t: &Term, x: &str, s: &Term) -> Term {
    match t {
        Term::Var(y) if y == x => s.clone(),
        Term::Var(_) | Term::Const(_) | Term::Domain(_) => t.clone(),
        Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| substitute_term(a, x, s)).collect()),
    }
}

/// `f[x/t]` without the capture check. Callers must know `t` is free for `x`.
pub(crate) fn substitute_unchecked(f: &Formula, x: &str, t: &Term) -> Formula {
    match f {
        Formula::Atom(p, args) => {
            Formula::Atom(p.clone(), args.iter().map(|a| substitute_term(a, x, t)).collect())
        }
        Formula::Eq(a, b) => Formula::Eq(substitute_term(a, x, t), substitute_term(b, x, t)),
        Formula::Neg(a) => Formula::neg(substitute_unchecked(a, x, t)),
        Formula::Cons(a) => Formula::cons(substitute_unchecked(a, x, t)),
        Formula::And(a, b) => Formula::and(substitute_unchecked(a, x, t), substitute_unchecked(b, x, t)),
        Formula::Or(a, b) => Formula::or(substitute_unchecked(a, x, t), substitute_unchecked(b, x, t)),
        Formula::Imp(a, b) => Formula::imp(substitute_unchecked(a, x, t), substitute_unchecked(b, x, t)),
        Formula::Forall(y, _) | Formula::Exists(y, _) if y == x => f.clone(),
        Formula::Forall(y, a) => Formula::Forall(y.clone(), Box::new(substitute_unchecked(a, x, t))),
        Formula::Exists(y, a) => Formula::Exists(y.clone(), Box::new(substitute_unchecked(a, x, t))),
    }
}

/// `f[x/t]`: replaces every free occurrence of `x` by `t`.
pub fn substitute(f: &Formula, x: &str, t: &Term) -> Result<Formula, CaptureError> {
    if !is_free_for(t, x, f) {
        return Err(CaptureError { term: t.to_string(), var: x.to_string(), formula: f.to_string() });
    }
    Ok(substitute_unchecked(f, x, t))
}

/// Deletes void quantifiers and renames bound variables by binder depth
/// (`%0`, `%1`, ...). Two formulas are variants iff their normal forms agree.
pub fn variant_normal_form(f: &Formula) -> Formula {
    rename_bound(&drop_void(f), &mut BTreeMap::new(), 0)
}

fn drop_void(f: &Formula) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Eq(..) => f.clone(),
        Formula::Neg(a) => Formula::neg(drop_void(a)),
        Formula::Cons(a) => Formula::cons(drop_void(a)),
        Formula::And(a, b) => Formula::and(drop_void(a), drop_void(b)),
        Formula::Or(a, b) => Formula::or(drop_void(a), drop_void(b)),
        Formula::Imp(a, b) => Formula::imp(drop_void(a), drop_void(b)),
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            let body = drop_void(a);
            if !occurs_free(x, &body) {
                return body;
            }
            match f {
                Formula::Forall(..) => Formula::Forall(x.clone(), Box::new(body)),
                _ => Formula::Exists(x.clone(), Box::new(body)),
            }
        }
    }
}

fn rename_term(t: &Term, env: &BTreeMap<String, String>) -> Term {
    match t {
        Term::Var(x) => Term::Var(env.get(x).cloned().unwrap_or_else(|| x.clone())),
        Term::Const(_) | Term::Domain(_) => t.clone(),
        Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| rename_term(a, env)).collect()),
    }
}

fn rename_bound(f: &Formula, env: &mut BTreeMap<String, String>, depth: usize) -> Formula {
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| rename_term(t, env)).collect()),
        Formula::Eq(a, b) => Formula::Eq(rename_term(a, env), rename_term(b, env)),
        Formula::Neg(a) => Formula::neg(rename_bound(a, env, depth)),
        Formula::Cons(a) => Formula::cons(rename_bound(a, env, depth)),
        Formula::And(a, b) => Formula::and(rename_bound(a, env, depth), rename_bound(b, env, depth)),
        Formula::Or(a, b) => Formula::or(rename_bound(a, env, depth), rename_bound(b, env, depth)),
        Formula::Imp(a, b) => Formula::imp(rename_bound(a, env, depth), rename_bound(b, env, depth)),
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            let fresh = format!("%{depth}");
            let saved = env.insert(x.clone(), fresh.clone());
            let body = rename_bound(a, env, depth + 1);
            match saved {
                Some(s) => env.insert(x.clone(), s),
                None => env.remove(x),
            };
            match f {
                Formula::Forall(..) => Formula::Forall(fresh, Box::new(body)),
                _ => Formula::Exists(fresh, Box::new(body)),
            }
        }
    }
}

pub fn is_variant(a: &Formula, b: &Formula) -> bool {
    variant_normal_form(a) == variant_normal_form(b)
}

/// `(∀x1)...(∀xn)f` over the free variables in first-occurrence order.
pub fn universal_closure(f: &Formula) -> Formula {
    free_vars_ordered(f)
        .iter()
        .rev()
        .fold(f.clone(), |acc, x| Formula::forall(x, acc))
}

/// `β ∧ (¬β ∧ ∘β)`
pub fn derived_bottom(beta: &Formula) -> Formula {
    Formula::and(beta.clone(), Formula::and(Formula::neg(beta.clone()), Formula::cons(beta.clone())))
}

/// `α → ⊥_β`
pub fn derived_strong_neg(alpha: &Formula, beta: &Formula) -> Formula {
    Formula::imp(alpha.clone(), derived_bottom(beta))
}

pub fn iff(a: &Formula, b: &Formula) -> Formula {
    Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b.clone(), a.clone()))
}

/// Is `target` some `f[x≀y]`, i.e. `f` with some (possibly none, possibly
/// all) free occurrences of `x` replaced by `y`? A replacement is only
/// allowed where `y` would not be captured.
pub fn partial_replace_ok(f: &Formula, target: &Formula, x: &str, y: &str) -> bool {
    replace_walk(f, target, x, y, &mut Vec::new())
}

fn replace_term_ok(s: &Term, t: &Term, x: &str, y: &str, bound: &[String]) -> bool {
    match (s, t) {
        (Term::Var(a), Term::Var(b)) if a == x && !bound.iter().any(|v| v == x) => {
            b == x || (b == y && !bound.iter().any(|v| v == y))
        }
        (Term::App(g, xs), Term::App(h, ys)) => {
            g == h && xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| replace_term_ok(a, b, x, y, bound))
        }
        _ => s == t,
    }
}

fn replace_walk(f: &Formula, g: &Formula, x: &str, y: &str, bound: &mut Vec<String>) -> bool {
    match (f, g) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| replace_term_ok(a, b, x, y, bound))
        }
        (Formula::Eq(a1, b1), Formula::Eq(a2, b2)) => {
            replace_term_ok(a1, a2, x, y, bound) && replace_term_ok(b1, b2, x, y, bound)
        }
        (Formula::Neg(a), Formula::Neg(b)) | (Formula::Cons(a), Formula::Cons(b)) => {
            replace_walk(a, b, x, y, bound)
        }
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Imp(a1, b1), Formula::Imp(a2, b2)) => {
            replace_walk(a1, a2, x, y, bound) && replace_walk(b1, b2, x, y, bound)
        }
        (Formula::Forall(v, a), Formula::Forall(w, b)) | (Formula::Exists(v, a), Formula::Exists(w, b)) => {
            if v != w {
                return false;
            }
            bound.push(v.clone());
            let ok = replace_walk(a, b, x, y, bound);
            bound.pop();
            ok
        }
        _ => false,
    }
}
