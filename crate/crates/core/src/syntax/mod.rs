//! First-order syntax over the connectives `∧ ∨ → ¬ ∘` and the quantifiers.
//!
//! Propositional formulas are the special case where every atom is a nullary
//! predicate (`p`, `q`, ...). Domain constants `@k`, naming the `k`-th element
//! of a structure's domain, live in their own lexical namespace and can never
//! collide with user-declared constants.

mod ops;
mod parser;
mod printer;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use ops::{
    derived_bottom, CaptureError, derived_strong_neg, free_vars, free_vars_ordered, iff, is_free_for,
    is_variant, partial_replace_ok, substitute, term_vars, universal_closure,
    variant_normal_form,
};
pub use parser::{parse_formula, parse_formula_extending, parse_term, ParseError, ParseErrorKind};
pub(crate) use ops::{occurs_free, substitute_unchecked};

/// Variable assignment: variable name to domain-element index.
pub type Assignment = BTreeMap<String, usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    And,
    Or,
    Imp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnOp {
    Neg,
    Cons,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    /// `@k`: the constant naming domain element `k`.
    Domain(usize),
    App(String, Vec<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Neg(Box<Formula>),
    Cons(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(name.to_string(), args)
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) | Term::Domain(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_closed),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        }
    }
}

impl Formula {
    /// Nullary atom, i.e. a propositional letter.
    pub fn prop(name: &str) -> Formula {
        Formula::Atom(name.to_string(), Vec::new())
    }

    pub fn atom(name: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(name.to_string(), args)
    }

    pub fn eq(left: Term, right: Term) -> Formula {
        Formula::Eq(left, right)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn cons(f: Formula) -> Formula {
        Formula::Cons(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn forall(x: &str, f: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(f))
    }

    pub fn exists(x: &str, f: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(f))
    }

    pub fn binary(op: BinOp, a: Formula, b: Formula) -> Formula {
        match op {
            BinOp::And => Formula::and(a, b),
            BinOp::Or => Formula::or(a, b),
            BinOp::Imp => Formula::imp(a, b),
        }
    }

    pub fn unary(op: UnOp, a: Formula) -> Formula {
        match op {
            UnOp::Neg => Formula::neg(a),
            UnOp::Cons => Formula::cons(a),
        }
    }

    pub fn quantified(q: Quantifier, x: &str, body: Formula) -> Formula {
        match q {
            Quantifier::Forall => Formula::forall(x, body),
            Quantifier::Exists => Formula::exists(x, body),
        }
    }

    pub fn as_binary(&self) -> Option<(BinOp, &Formula, &Formula)> {
        match self {
            Formula::And(a, b) => Some((BinOp::And, a, b)),
            Formula::Or(a, b) => Some((BinOp::Or, a, b)),
            Formula::Imp(a, b) => Some((BinOp::Imp, a, b)),
            _ => None,
        }
    }

    pub fn as_unary(&self) -> Option<(UnOp, &Formula)> {
        match self {
            Formula::Neg(a) => Some((UnOp::Neg, a)),
            Formula::Cons(a) => Some((UnOp::Cons, a)),
            _ => None,
        }
    }

    pub fn as_quantified(&self) -> Option<(Quantifier, &str, &Formula)> {
        match self {
            Formula::Forall(x, b) => Some((Quantifier::Forall, x, b)),
            Formula::Exists(x, b) => Some((Quantifier::Exists, x, b)),
            _ => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(..) | Formula::Eq(..))
    }

    /// Propositional: no quantifiers, no equality, only nullary atoms.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Atom(_, args) => args.is_empty(),
            Formula::Eq(..) | Formula::Forall(..) | Formula::Exists(..) => false,
            Formula::Neg(a) | Formula::Cons(a) => a.is_propositional(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
        }
    }

    /// Node count of the formula tree (terms count as part of their atom).
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::Eq(..) => 1,
            Formula::Neg(a) | Formula::Cons(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
        }
    }

    /// Nullary atoms occurring in the formula, sorted by name.
    pub fn prop_atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_prop_atoms(&mut out);
        out
    }

    fn collect_prop_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p, args) if args.is_empty() => {
                out.insert(p.clone());
            }
            Formula::Atom(..) | Formula::Eq(..) => {}
            Formula::Neg(a) | Formula::Cons(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => {
                a.collect_prop_atoms(out)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_prop_atoms(out);
                b.collect_prop_atoms(out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{0}` is declared more than once")]
    Duplicate(String),
    #[error("function `{0}` must have arity at least 1")]
    NullaryFunction(String),
    #[error("signature has no predicate symbols")]
    NoPredicates,
    #[error("`{0}` is not a valid symbol name")]
    BadName(String),
}

/// A first-order signature. Predicates of arity 0 are propositional letters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub constants: BTreeSet<String>,
    pub functions: BTreeMap<String, usize>,
    pub predicates: BTreeMap<String, usize>,
    pub has_equality: bool,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn with_constant(mut self, name: &str) -> Signature {
        self.constants.insert(name.to_string());
        self
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Signature {
        self.functions.insert(name.to_string(), arity);
        self
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Signature {
        self.predicates.insert(name.to_string(), arity);
        self
    }

    pub fn with_equality(mut self) -> Signature {
        self.has_equality = true;
        self
    }

    /// Checks disjointness of the name sets, function arities, and that at
    /// least one predicate (or equality) is present.
    pub fn validate(&self) -> Result<(), SignatureError> {
        let mut seen = BTreeSet::new();
        let names = self
            .constants
            .iter()
            .chain(self.functions.keys())
            .chain(self.predicates.keys());
        for n in names {
            if !parser::is_identifier(n) {
                return Err(SignatureError::BadName(n.clone()));
            }
            if !seen.insert(n) {
                return Err(SignatureError::Duplicate(n.clone()));
            }
        }
        if let Some((f, _)) = self.functions.iter().find(|(_, &a)| a == 0) {
            return Err(SignatureError::NullaryFunction(f.clone()));
        }
        if self.predicates.is_empty() && !self.has_equality {
            return Err(SignatureError::NoPredicates);
        }
        Ok(())
    }
}
