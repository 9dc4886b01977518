//! Axiom schemas and their matchers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::syntax::{
    is_free_for, is_variant, parse_formula_extending, partial_replace_ok, substitute_unchecked, Formula, Signature,
    Term,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Logic {
    MbC,
    QmbC,
    Lfi1o,
    Qlfi1o,
    QmbCEq,
}

impl Logic {
    pub const ALL: [Logic; 5] = [Logic::MbC, Logic::QmbC, Logic::Lfi1o, Logic::Qlfi1o, Logic::QmbCEq];

    pub fn id(self) -> &'static str {
        match self {
            Logic::MbC => "mbC",
            Logic::QmbC => "QmbC",
            Logic::Lfi1o => "LFI1o",
            Logic::Qlfi1o => "QLFI1o",
            Logic::QmbCEq => "QmbCeq",
        }
    }

    pub fn is_first_order(self) -> bool {
        !matches!(self, Logic::MbC | Logic::Lfi1o)
    }

    /// The axiom schemas of the calculus, in catalog order.
    pub fn schemas(self) -> Vec<SchemaId> {
        use SchemaId::*;
        let mut out = vec![A1, A2, A3, A4, A5, A6, A7, A8, A9, A10, A11];
        match self {
            Logic::MbC => {}
            Logic::QmbC => out.extend([Ax12, Ax13, Ax14]),
            Logic::Lfi1o => out.extend([Ci, Dneg, NegOr, NegAnd, NegImp]),
            Logic::Qlfi1o => out.extend([Ci, Dneg, NegOr, NegAnd, NegImp, Ax12, Ax13, AxNegExists, AxNegForall]),
            Logic::QmbCEq => out.extend([Ax12, Ax13, Ax14, AxEq1, AxEq2]),
        }
        out
    }

    pub fn has_schema(self, s: SchemaId) -> bool {
        self.schemas().contains(&s)
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Logic {
    type Err = String;

    fn from_str(s: &str) -> Result<Logic, String> {
        let key: String = s.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase();
        Ok(match key.as_str() {
            "mbc" => Logic::MbC,
            "qmbc" => Logic::QmbC,
            "lfi1o" | "lfi1" => Logic::Lfi1o,
            "qlfi1o" | "qlfi1" => Logic::Qlfi1o,
            "qmbceq" => Logic::QmbCEq,
            _ => return Err(format!("unknown logic `{s}` (expected mbC, QmbC, LFI1o, QLFI1o or QmbCeq)")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemaId {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    A10,
    A11,
    Ci,
    Dneg,
    NegOr,
    NegAnd,
    NegImp,
    Ax12,
    Ax13,
    Ax14,
    AxNegExists,
    AxNegForall,
    AxEq1,
    AxEq2,
}

impl SchemaId {
    pub const ALL: [SchemaId; 23] = [
        SchemaId::A1,
        SchemaId::A2,
        SchemaId::A3,
        SchemaId::A4,
        SchemaId::A5,
        SchemaId::A6,
        SchemaId::A7,
        SchemaId::A8,
        SchemaId::A9,
        SchemaId::A10,
        SchemaId::A11,
        SchemaId::Ci,
        SchemaId::Dneg,
        SchemaId::NegOr,
        SchemaId::NegAnd,
        SchemaId::NegImp,
        SchemaId::Ax12,
        SchemaId::Ax13,
        SchemaId::Ax14,
        SchemaId::AxNegExists,
        SchemaId::AxNegForall,
        SchemaId::AxEq1,
        SchemaId::AxEq2,
    ];

    pub fn id(self) -> &'static str {
        use SchemaId::*;
        match self {
            A1 => "A1",
            A2 => "A2",
            A3 => "A3",
            A4 => "A4",
            A5 => "A5",
            A6 => "A6",
            A7 => "A7",
            A8 => "A8",
            A9 => "A9",
            A10 => "A10",
            A11 => "A11",
            Ci => "ci",
            Dneg => "dneg",
            NegOr => "neg-or",
            NegAnd => "neg-and",
            NegImp => "neg-imp",
            Ax12 => "Ax12",
            Ax13 => "Ax13",
            Ax14 => "Ax14",
            AxNegExists => "Ax-neg-exists",
            AxNegForall => "Ax-neg-forall",
            AxEq1 => "AxEq1",
            AxEq2 => "AxEq2",
        }
    }

    /// Human-readable form of the schema.
    pub fn display(self) -> &'static str {
        use SchemaId::*;
        match self {
            A1 => "α → (β → α)",
            A2 => "(α → (β → γ)) → ((α → β) → (α → γ))",
            A3 => "α → (β → (α ∧ β))",
            A4 => "(α ∧ β) → α",
            A5 => "(α ∧ β) → β",
            A6 => "α → (α ∨ β)",
            A7 => "β → (α ∨ β)",
            A8 => "(α → γ) → ((β → γ) → ((α ∨ β) → γ))",
            A9 => "α ∨ (α → β)",
            A10 => "α ∨ ¬α",
            A11 => "∘α → (α → (¬α → β))",
            Ci => "¬∘α → (α ∧ ¬α)",
            Dneg => "¬¬α ↔ α",
            NegOr => "¬(α ∨ β) ↔ (¬α ∧ ¬β)",
            NegAnd => "¬(α ∧ β) ↔ (¬α ∨ ¬β)",
            NegImp => "¬(α → β) ↔ (α ∧ ¬β)",
            Ax12 => "φ[x/t] → ∃xφ, t free for x in φ",
            Ax13 => "∀xφ → φ[x/t], t free for x in φ",
            Ax14 => "α → β, α a variant of β",
            AxNegExists => "¬∃xφ ↔ ∀x¬φ",
            AxNegForall => "¬∀xφ ↔ ∃x¬φ",
            AxEq1 => "∀x(x ≈ x)",
            AxEq2 => "(x ≈ y) → (φ → φ[x≀y]), y free for x in φ",
        }
    }

    /// The pattern of a propositional schema over the metavariables `a`,
    /// `b`, `c`; `↔` is spelled out as a conjunction of implications.
    fn pattern_text(self) -> Option<&'static str> {
        use SchemaId::*;
        Some(match self {
            A1 => "a -> (b -> a)",
            A2 => "(a -> (b -> c)) -> ((a -> b) -> (a -> c))",
            A3 => "a -> (b -> (a & b))",
            A4 => "(a & b) -> a",
            A5 => "(a & b) -> b",
            A6 => "a -> (a | b)",
            A7 => "b -> (a | b)",
            A8 => "(a -> c) -> ((b -> c) -> ((a | b) -> c))",
            A9 => "a | (a -> b)",
            A10 => "a | ~a",
            A11 => "*a -> (a -> (~a -> b))",
            Ci => "~*a -> (a & ~a)",
            Dneg => "(~~a -> a) & (a -> ~~a)",
            NegOr => "(~(a | b) -> (~a & ~b)) & ((~a & ~b) -> ~(a | b))",
            NegAnd => "(~(a & b) -> (~a | ~b)) & ((~a | ~b) -> ~(a & b))",
            NegImp => "(~(a -> b) -> (a & ~b)) & ((a & ~b) -> ~(a -> b))",
            _ => return None,
        })
    }

    /// The parsed pattern of a propositional schema.
    pub fn pattern(self) -> Option<&'static Formula> {
        static PATTERNS: OnceLock<BTreeMap<SchemaId, Formula>> = OnceLock::new();
        let table = PATTERNS.get_or_init(|| {
            SchemaId::ALL
                .iter()
                .filter_map(|&s| {
                    let text = s.pattern_text()?;
                    let f = parse_formula_extending(text, &mut Signature::new()).expect("schema patterns parse");
                    Some((s, f))
                })
                .collect()
        });
        table.get(&self)
    }

    /// Metavariables of a propositional schema, in `a, b, c` order.
    pub fn metavariables(self) -> Vec<&'static str> {
        match self.pattern() {
            Some(p) => ["a", "b", "c"].into_iter().filter(|m| p.prop_atoms().contains(*m)).collect(),
            None => Vec::new(),
        }
    }

    /// Instantiates a propositional schema, binding its metavariables in
    /// order to `args`.
    pub fn instantiate(self, args: &[Formula]) -> Option<Formula> {
        let pat = self.pattern()?;
        let metas = self.metavariables();
        if args.len() < metas.len() {
            return None;
        }
        let binds: BTreeMap<&str, &Formula> = metas.into_iter().zip(args).collect();
        Some(fill(pat, &binds))
    }

    /// A canonical instance of the schema over fresh symbols.
    pub fn sample_instance(self) -> Formula {
        use SchemaId::*;
        let p = |name: &str| Formula::prop(name);
        let px = |x: &str| Formula::atom("P", vec![Term::var(x)]);
        let pc = Formula::atom("P", vec![Term::constant("c")]);
        let iff = crate::syntax::iff;
        match self {
            Ax12 => Formula::imp(pc, Formula::exists("x", px("x"))),
            Ax13 => Formula::imp(Formula::forall("x", px("x")), pc),
            Ax14 => Formula::imp(Formula::forall("x", px("x")), Formula::forall("y", px("y"))),
            AxNegExists => iff(
                &Formula::neg(Formula::exists("x", px("x"))),
                &Formula::forall("x", Formula::neg(px("x"))),
            ),
            AxNegForall => iff(
                &Formula::neg(Formula::forall("x", px("x"))),
                &Formula::exists("x", Formula::neg(px("x"))),
            ),
            AxEq1 => Formula::forall("x", Formula::eq(Term::var("x"), Term::var("x"))),
            AxEq2 => Formula::imp(Formula::eq(Term::var("x"), Term::var("y")), Formula::imp(px("x"), px("y"))),
            _ => self.instantiate(&[p("p"), p("q"), p("r")]).expect("propositional schema"),
        }
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for SchemaId {
    type Err = String;

    fn from_str(s: &str) -> Result<SchemaId, String> {
        let norm = |t: &str| t.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase();
        let key = norm(s);
        SchemaId::ALL
            .iter()
            .copied()
            .find(|x| norm(x.id()) == key)
            .ok_or_else(|| format!("unknown axiom schema `{s}`"))
    }
}

fn fill(pat: &Formula, binds: &BTreeMap<&str, &Formula>) -> Formula {
    match pat {
        Formula::Atom(m, args) if args.is_empty() => (*binds[m.as_str()]).clone(),
        Formula::Neg(a) => Formula::neg(fill(a, binds)),
        Formula::Cons(a) => Formula::cons(fill(a, binds)),
        Formula::And(a, b) => Formula::and(fill(a, binds), fill(b, binds)),
        Formula::Or(a, b) => Formula::or(fill(a, binds), fill(b, binds)),
        Formula::Imp(a, b) => Formula::imp(fill(a, binds), fill(b, binds)),
        _ => unreachable!("schema patterns are propositional"),
    }
}

fn unify<'f>(pat: &Formula, f: &'f Formula, binds: &mut BTreeMap<String, &'f Formula>) -> bool {
    match (pat, f) {
        (Formula::Atom(m, args), _) if args.is_empty() => match binds.get(m) {
            Some(b) => *b == f,
            None => {
                binds.insert(m.clone(), f);
                true
            }
        },
        (Formula::Neg(p), Formula::Neg(a)) | (Formula::Cons(p), Formula::Cons(a)) => unify(p, a, binds),
        (Formula::And(p, q), Formula::And(a, b))
        | (Formula::Or(p, q), Formula::Or(a, b))
        | (Formula::Imp(p, q), Formula::Imp(a, b)) => unify(p, a, binds) && unify(q, b, binds),
        _ => false,
    }
}

/// The term `t` with `target = phi[x/t]`, if there is one. When `x` is not
/// free in `phi` any term works and `x` itself is returned.
fn instance_term(phi: &Formula, x: &str, target: &Formula) -> Option<Term> {
    let mut found: Option<Term> = None;
    fn terms(s: &Term, t: &Term, x: &str, bound: &[String], found: &mut Option<Term>) -> bool {
        match s {
            Term::Var(v) if v == x && !bound.iter().any(|b| b == x) => match found {
                Some(u) => u == t,
                None => {
                    *found = Some(t.clone());
                    true
                }
            },
            Term::App(g, xs) => match t {
                Term::App(h, ys) if g == h && xs.len() == ys.len() => {
                    xs.iter().zip(ys).all(|(a, b)| terms(a, b, x, bound, found))
                }
                _ => false,
            },
            _ => s == t,
        }
    }
    fn walk(f: &Formula, g: &Formula, x: &str, bound: &mut Vec<String>, found: &mut Option<Term>) -> bool {
        match (f, g) {
            (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
                p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| terms(a, b, x, bound, found))
            }
            (Formula::Eq(a, b), Formula::Eq(c, d)) => terms(a, c, x, bound, found) && terms(b, d, x, bound, found),
            (Formula::Neg(a), Formula::Neg(b)) | (Formula::Cons(a), Formula::Cons(b)) => walk(a, b, x, bound, found),
            (Formula::And(a, b), Formula::And(c, d))
            | (Formula::Or(a, b), Formula::Or(c, d))
            | (Formula::Imp(a, b), Formula::Imp(c, d)) => {
                walk(a, c, x, bound, found) && walk(b, d, x, bound, found)
            }
            (Formula::Forall(v, a), Formula::Forall(w, b)) | (Formula::Exists(v, a), Formula::Exists(w, b)) => {
                if v != w {
                    return false;
                }
                bound.push(v.clone());
                let ok = walk(a, b, x, bound, found);
                bound.pop();
                ok
            }
            _ => false,
        }
    }
    if walk(phi, target, x, &mut Vec::new(), &mut found) {
        Some(found.unwrap_or_else(|| Term::var(x)))
    } else {
        None
    }
}

/// Outcome of matching a formula against a schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaMatch {
    Matches,
    /// The shape fits but a side condition fails.
    SideCondition(String),
    NoMatch,
}

fn split_iff(f: &Formula) -> Option<(&Formula, &Formula)> {
    let Formula::And(l, r) = f else { return None };
    let (Formula::Imp(a, b), Formula::Imp(c, d)) = (&**l, &**r) else { return None };
    (a == d && b == c).then_some((&**a, &**b))
}

/// Matches `f` against the schema, checking its side conditions.
pub fn match_schema(schema: SchemaId, f: &Formula) -> SchemaMatch {
    use SchemaId::*;
    let yes = |b: bool| if b { SchemaMatch::Matches } else { SchemaMatch::NoMatch };
    if let Some(p) = schema.pattern() {
        return yes(unify(p, f, &mut BTreeMap::new()));
    }
    match schema {
        Ax12 | Ax13 => {
            let Formula::Imp(l, r) = f else { return SchemaMatch::NoMatch };
            let (quantified, inst) = if schema == Ax12 { (&**r, &**l) } else { (&**l, &**r) };
            let (x, phi) = match (schema, quantified) {
                (Ax12, Formula::Exists(x, phi)) | (Ax13, Formula::Forall(x, phi)) => (x, phi),
                _ => return SchemaMatch::NoMatch,
            };
            let Some(t) = instance_term(phi, x, inst) else { return SchemaMatch::NoMatch };
            if !is_free_for(&t, x, phi) {
                return SchemaMatch::SideCondition(format!("`{t}` is not free for `{x}` in `{phi}`"));
            }
            yes(substitute_unchecked(phi, x, &t) == *inst)
        }
        Ax14 => {
            let Formula::Imp(a, b) = f else { return SchemaMatch::NoMatch };
            if is_variant(a, b) {
                SchemaMatch::Matches
            } else {
                SchemaMatch::SideCondition(format!("`{a}` is not a variant of `{b}`"))
            }
        }
        AxNegExists | AxNegForall => {
            let Some((l, r)) = split_iff(f) else { return SchemaMatch::NoMatch };
            let ok = match (schema, l, r) {
                (AxNegExists, Formula::Neg(q), Formula::Forall(y, nb)) => {
                    matches!((&**q, &**nb), (Formula::Exists(x, a), Formula::Neg(b)) if x == y && a == b)
                }
                (AxNegForall, Formula::Neg(q), Formula::Exists(y, nb)) => {
                    matches!((&**q, &**nb), (Formula::Forall(x, a), Formula::Neg(b)) if x == y && a == b)
                }
                _ => false,
            };
            yes(ok)
        }
        AxEq1 => yes(matches!(f, Formula::Forall(x, body)
            if matches!(&**body, Formula::Eq(Term::Var(a), Term::Var(b)) if a == x && b == x))),
        AxEq2 => {
            let Formula::Imp(e, rest) = f else { return SchemaMatch::NoMatch };
            let (Formula::Eq(Term::Var(x), Term::Var(y)), Formula::Imp(phi, target)) = (&**e, &**rest) else {
                return SchemaMatch::NoMatch;
            };
            if !partial_replace_ok(phi, target, x, y) {
                return SchemaMatch::NoMatch;
            }
            if !is_free_for(&Term::var(y), x, phi) {
                return SchemaMatch::SideCondition(format!("`{y}` is not free for `{x}` in `{phi}`"));
            }
            SchemaMatch::Matches
        }
        _ => unreachable!("propositional schemas have patterns"),
    }
}

/// True iff `f` is an instance of the schema with its side conditions met.
pub fn match_axiom(schema: SchemaId, f: &Formula) -> bool {
    match_schema(schema, f) == SchemaMatch::Matches
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula_extending;

    fn f(s: &str) -> Formula {
        parse_formula_extending(s, &mut Signature::new().with_constant("c")).unwrap()
    }

    #[test]
    fn catalogs() {
        assert_eq!(Logic::MbC.schemas().len(), 11);
        assert_eq!(Logic::QmbC.schemas().len(), 14);
        assert!(!Logic::Qlfi1o.has_schema(SchemaId::Ax14));
        assert!(Logic::Qlfi1o.has_schema(SchemaId::AxNegForall));
        assert!(Logic::QmbCEq.has_schema(SchemaId::AxEq2));
        assert_eq!("qlfi1o".parse::<Logic>().unwrap(), Logic::Qlfi1o);
        assert_eq!("ax-neg-forall".parse::<SchemaId>().unwrap(), SchemaId::AxNegForall);
        assert_eq!("NEG-IMP".parse::<SchemaId>().unwrap(), SchemaId::NegImp);
    }

    #[test]
    fn propositional_matching() {
        assert!(match_axiom(SchemaId::A10, &f("P(c) | ~P(c)")));
        assert!(!match_axiom(SchemaId::A10, &f("P(c) | ~Q(c)")));
        assert!(match_axiom(SchemaId::A11, &f("*p -> (p -> (~p -> q))")));
        assert!(match_axiom(SchemaId::A1, &f("(p & q) -> (r -> (p & q))")));
        assert!(!match_axiom(SchemaId::A1, &f("p -> (q -> q)")));
        assert!(match_axiom(SchemaId::Dneg, &f("(~~p -> p) & (p -> ~~p)")));
    }

    #[test]
    fn quantifier_schemas() {
        assert!(match_axiom(SchemaId::Ax12, &f("P(c) -> exists x. P(x)")));
        assert!(match_axiom(SchemaId::Ax12, &f("Q -> exists x. Q")));
        assert!(match_axiom(SchemaId::Ax13, &f("(forall x. P(x)) -> P(f(y))")));
        let capture = f("(forall x. exists y. P(x,y)) -> exists y. P(y,y)");
        assert!(matches!(match_schema(SchemaId::Ax13, &capture), SchemaMatch::SideCondition(_)));
        assert!(match_axiom(SchemaId::Ax14, &f("(forall x. P(x)) -> forall y. forall z. P(y)")));
        assert!(!match_axiom(SchemaId::Ax14, &f("(forall x. P(x)) -> forall y. Q(y)")));
        assert!(match_axiom(SchemaId::AxNegForall, &f("((~forall x. P(x)) -> exists x. ~P(x)) & ((exists x. ~P(x)) -> ~forall x. P(x))")));
        assert!(match_axiom(SchemaId::AxEq1, &f("forall x. x = x")));
        assert!(match_axiom(SchemaId::AxEq2, &f("x = y -> (R(x,x) -> R(x,y))")));
        assert!(!match_axiom(SchemaId::AxEq2, &f("x = y -> (R(x,x) -> R(y,z))")));
        let captured = f("x = y -> ((forall y. P(x)) -> forall y. P(x))");
        assert!(matches!(match_schema(SchemaId::AxEq2, &captured), SchemaMatch::SideCondition(_)));
    }

    #[test]
    fn sample_instances_match() {
        for s in SchemaId::ALL {
            assert!(match_axiom(s, &s.sample_instance()), "{s}");
        }
    }
}
