use std::collections::BTreeMap;

use crate::syntax::{free_vars, Assignment, Formula, Term};
use crate::twist::TwistPair;
use crate::Verdict;

use super::ground::{canonicalize, GroundSentence};
use super::structure::{tuples, TwistStructure};
use super::FoError;

/// A falsifying assignment and the goal's value under it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistCountermodel {
    pub assignment: Assignment,
    pub value: TwistPair,
}

fn term(s: &TwistStructure, env: &BTreeMap<String, usize>, t: &Term) -> Result<usize, FoError> {
    super::ground::eval_term(&s.base, env, t)
}

fn eval(s: &TwistStructure, env: &mut BTreeMap<String, usize>, f: &Formula) -> Result<TwistPair, FoError> {
    let b = &s.base;
    Ok(match f {
        Formula::Atom(p, args) => {
            let table = b.predicates.get(p).ok_or_else(|| FoError::UnknownSymbol(p.clone()))?;
            if table.arity() != args.len() {
                return Err(FoError::UnknownSymbol(format!("{p}/{}", args.len())));
            }
            let vals = args.iter().map(|t| term(s, env, t)).collect::<Result<Vec<_>, _>>()?;
            table.get(&vals)
        }
        Formula::Eq(l, r) => {
            let table = b.equality.as_ref().ok_or(FoError::NoEquality)?;
            table.get(&[term(s, env, l)?, term(s, env, r)?])
        }
        Formula::Neg(a) => eval(s, env, a)?.neg(),
        Formula::Cons(a) => eval(s, env, a)?.cons(),
        Formula::And(l, r) => eval(s, env, l)?.and(eval(s, env, r)?),
        Formula::Or(l, r) => eval(s, env, l)?.or(eval(s, env, r)?),
        Formula::Imp(l, r) => eval(s, env, l)?.imp(eval(s, env, r)?),
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let saved = env.remove(x);
            let mut acc: Option<TwistPair> = None;
            let mut result = Ok(());
            for a in 0..b.size() {
                env.insert(x.clone(), a);
                match eval(s, env, body) {
                    Ok(v) => {
                        acc = Some(match acc {
                            None => v,
                            Some(w) if universal => quant_step(w, v, true),
                            Some(w) => quant_step(w, v, false),
                        });
                    }
                    Err(e) => {
                        result = Err(e);
                        break;
                    }
                }
            }
            env.remove(x);
            if let Some(v) = saved {
                env.insert(x.clone(), v);
            }
            result?;
            acc.ok_or(FoError::EmptyDomain)?
        }
    })
}

// ∀ takes (⋀ z1, ⋁ z2); ∃ takes (⋁ z1, ⋀ z2). Both preserve z1 ∨ z2 = 1.
fn quant_step(w: TwistPair, v: TwistPair, universal: bool) -> TwistPair {
    let (z1, z2) = if universal { (w.z1() & v.z1(), w.z2() | v.z2()) } else { (w.z1() | v.z1(), w.z2() & v.z2()) };
    TwistPair::new(z1, z2).expect("quantifier values stay in the twist domain")
}

/// The value of a ground sentence in a twist structure.
pub fn qlfi1_interpret(s: &TwistStructure, sigma: &GroundSentence) -> Result<TwistPair, FoError> {
    eval(s, &mut BTreeMap::new(), sigma.formula())
}

/// The value of `phi` under `mu`, i.e. of its canonical ground form.
pub fn qlfi1_value(s: &TwistStructure, phi: &Formula, mu: &Assignment) -> Result<TwistPair, FoError> {
    qlfi1_interpret(s, &canonicalize(&s.base, phi, mu)?)
}

fn assignments(vars: &[String], size: usize) -> impl Iterator<Item = Assignment> + '_ {
    tuples(vars.len(), size).map(move |t| vars.iter().cloned().zip(t).collect())
}

/// `gamma ⊨ phi` in the single structure `s`: if every premise is designated
/// under every assignment, the goal must be designated under every
/// assignment. The countermodel is the first falsifying assignment, with
/// variables sorted by name and the last one varying fastest.
pub fn qlfi1_consequence(
    gamma: &[Formula],
    phi: &Formula,
    s: &TwistStructure,
) -> Result<Verdict<TwistCountermodel>, FoError> {
    let n = s.base.size();
    for g in gamma {
        let vars: Vec<String> = free_vars(g).into_iter().collect();
        for mu in assignments(&vars, n) {
            if !qlfi1_value(s, g, &mu)?.is_designated() {
                return Ok(Verdict::Holds);
            }
        }
    }
    let vars: Vec<String> = free_vars(phi).into_iter().collect();
    for mu in assignments(&vars, n) {
        let value = qlfi1_value(s, phi, &mu)?;
        if !value.is_designated() {
            return Ok(Verdict::Countermodel(TwistCountermodel { assignment: mu, value }));
        }
    }
    Ok(Verdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo::structure::{EqualityKind, Structure, Table};
    use crate::syntax::{parse_formula, universal_closure};
    use crate::twist::lfi1_matrix;
    use std::collections::BTreeMap;

    fn model(pa: &str, pb: &str, eq: Option<EqualityKind>) -> TwistStructure {
        let m = lfi1_matrix();
        let (va, vb) = (m.by_name(pa).unwrap(), m.by_name(pb).unwrap());
        let base = Structure {
            domain: vec!["a".into(), "b".into()],
            constants: BTreeMap::from([("c".into(), 0)]),
            functions: BTreeMap::new(),
            predicates: BTreeMap::from([("P".into(), Table::from_fn(1, 2, |x| if x[0] == 0 { va } else { vb }))]),
            equality: eq.map(|k| TwistStructure::default_equality(&m, 2, k)),
        };
        TwistStructure::new(m, base).unwrap()
    }

    fn value(s: &TwistStructure, text: &str) -> String {
        let f = parse_formula(text, &s.base.signature()).unwrap();
        s.matrix.label(&qlfi1_value(s, &f, &Assignment::new()).unwrap())
    }

    #[test]
    fn quantifier_values() {
        let s = model("1", "½", None);
        assert_eq!(value(&s, "forall x. P(x)"), "½");
        assert_eq!(value(&s, "~forall x. P(x)"), "½");
        assert_eq!(value(&s, "exists x. ~P(x)"), "½");
        assert_eq!(value(&s, "exists x. P(x)"), "1");
        assert_eq!(value(&model("1", "1", None), "forall x. P(x)"), "1");
        assert_eq!(value(&model("0", "½", None), "exists x. P(x)"), "½");
        assert_eq!(value(&model("0", "½", None), "forall x. P(x)"), "0");
    }

    #[test]
    fn consequence() {
        let s = model("1", "0", None);
        let sig = s.base.signature();
        let f = |t: &str| parse_formula(t, &sig).unwrap();
        assert!(qlfi1_consequence(&[], &f("(forall x. P(x)) -> P(c)"), &s).unwrap().holds());
        assert!(qlfi1_consequence(&[f("P(x)")], &f("forall x. P(x)"), &s).unwrap().holds());
        let v = qlfi1_consequence(&[], &f("P(x)"), &s).unwrap();
        let cm = v.countermodel().unwrap();
        assert_eq!(cm.assignment, Assignment::from([("x".to_string(), 1)]));
        assert_eq!(s.matrix.label(&cm.value), "0");
        assert!(!qlfi1_consequence(&[], &universal_closure(&f("P(x)")), &s).unwrap().holds());
    }

    #[test]
    fn mid_equality_breaks_consistency() {
        let s = model("1", "1", Some(EqualityKind::Mid));
        assert!(crate::fo::check_standard_equality(s.base.equality.as_ref().unwrap()));
        let f = parse_formula("*(c = c)", &s.base.signature()).unwrap();
        let v = qlfi1_consequence(&[], &f, &s).unwrap();
        assert_eq!(s.matrix.label(&v.countermodel().unwrap().value), "0");
        let s = model("1", "1", Some(EqualityKind::Classical));
        assert!(qlfi1_consequence(&[], &f, &s).unwrap().holds());
    }
}
