use std::collections::BTreeMap;
use std::fmt;

use crate::swap::{Snapshot, SwapNmatrix};
use crate::syntax::Signature;
use crate::twist::{TwistMatrix, TwistPair};

use super::FoError;

/// Values a predicate can take: snapshots or twist pairs.
pub trait TruthValue: Copy + Eq + fmt::Debug + fmt::Display {
    fn is_designated(&self) -> bool;
}

impl TruthValue for Snapshot {
    fn is_designated(&self) -> bool {
        Snapshot::is_designated(self)
    }
}

impl TruthValue for TwistPair {
    fn is_designated(&self) -> bool {
        TwistPair::is_designated(self)
    }
}

/// A total table `U^arity → V`, indexed with the first argument most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table<V> {
    arity: usize,
    size: usize,
    values: Vec<V>,
}

impl<V: Copy> Table<V> {
    pub fn new(arity: usize, size: usize, values: Vec<V>) -> Result<Table<V>, FoError> {
        let expected = size.checked_pow(arity as u32).ok_or(FoError::TableSize { expected: usize::MAX, found: values.len() })?;
        if values.len() != expected {
            return Err(FoError::TableSize { expected, found: values.len() });
        }
        Ok(Table { arity, size, values })
    }

    pub fn from_fn(arity: usize, size: usize, mut f: impl FnMut(&[usize]) -> V) -> Table<V> {
        let values = tuples(arity, size).map(|t| f(&t)).collect();
        Table { arity, size, values }
    }

    pub fn constant(arity: usize, size: usize, v: V) -> Table<V> {
        Table::from_fn(arity, size, |_| v)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    fn offset(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        args.iter().fold(0, |acc, &a| acc * self.size + a)
    }

    pub fn get(&self, args: &[usize]) -> V {
        self.values[self.offset(args)]
    }

    pub fn set(&mut self, args: &[usize], v: V) {
        let i = self.offset(args);
        self.values[i] = v;
    }

    /// Entries in index order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, V)> + '_ {
        tuples(self.arity, self.size).zip(self.values.iter().copied())
    }
}

/// All tuples of length `arity` over `0..size`, last position fastest.
pub fn tuples(arity: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if size == 0 && arity > 0 { 0 } else { size.pow(arity as u32) };
    (0..total).map(move |mut code| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = code % size;
            code /= size;
        }
        t
    })
}

/// A first-order structure with predicates valued in `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure<V> {
    pub domain: Vec<String>,
    pub constants: BTreeMap<String, usize>,
    pub functions: BTreeMap<String, Table<usize>>,
    pub predicates: BTreeMap<String, Table<V>>,
    pub equality: Option<Table<V>>,
}

impl<V: TruthValue> Structure<V> {
    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn signature(&self) -> Signature {
        Signature {
            constants: self.constants.keys().cloned().collect(),
            functions: self.functions.iter().map(|(f, t)| (f.clone(), t.arity())).collect(),
            predicates: self.predicates.iter().map(|(p, t)| (p.clone(), t.arity())).collect(),
            has_equality: self.equality.is_some(),
        }
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.domain.iter().position(|d| d == name)
    }

    fn validate(&self, value_ok: impl Fn(&V) -> bool) -> Result<(), FoError> {
        let n = self.size();
        if n == 0 {
            return Err(FoError::EmptyDomain);
        }
        for (i, d) in self.domain.iter().enumerate() {
            if self.domain[..i].contains(d) {
                return Err(FoError::Invalid(format!("domain element `{d}` listed twice")));
            }
        }
        for (c, &a) in &self.constants {
            if a >= n {
                return Err(FoError::Invalid(format!("constant `{c}` denotes element {a}, outside the domain")));
            }
        }
        for (f, t) in &self.functions {
            if t.arity == 0 || t.size != n || t.values.iter().any(|&v| v >= n) {
                return Err(FoError::Invalid(format!("function `{f}` is not a total map into the domain")));
            }
        }
        for (p, t) in self.predicates.iter().map(|(p, t)| (p.as_str(), t)).chain(self.equality.iter().map(|t| ("=", t))) {
            if t.size != n {
                return Err(FoError::Invalid(format!("table for `{p}` has the wrong size")));
            }
            if let Some(v) = t.values.iter().find(|v| !value_ok(v)) {
                return Err(FoError::Invalid(format!("value {v} of `{p}` is not in the matrix")));
            }
        }
        if let Some(eq) = &self.equality {
            if eq.arity != 2 {
                return Err(FoError::Invalid("equality must be binary".into()));
            }
            if !check_standard_equality(eq) {
                return Err(FoError::NonStandardEquality);
            }
        }
        let sig = self.signature();
        sig.validate().map_err(|e| FoError::Invalid(e.to_string()))?;
        Ok(())
    }
}

/// `eq(a,b)` is designated exactly when `a = b`.
pub fn check_standard_equality<V: TruthValue>(eq: &Table<V>) -> bool {
    eq.arity == 2 && eq.entries().all(|(ab, v)| v.is_designated() == (ab[0] == ab[1]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualityKind {
    /// Equal pairs are `(1,0[,1])`, others `(0,1[,1])`.
    Classical,
    /// Equal pairs are `(1,1[,0])`: designated yet inconsistent.
    Mid,
}

/// A structure over a full swap Nmatrix.
#[derive(Debug, Clone)]
pub struct SwapStructure {
    pub matrix: SwapNmatrix,
    pub base: Structure<Snapshot>,
}

impl SwapStructure {
    pub fn new(matrix: SwapNmatrix, base: Structure<Snapshot>) -> Result<SwapStructure, FoError> {
        if !matrix.is_full() {
            return Err(FoError::RestrictedMatrix);
        }
        base.validate(|s| matrix.index_of(s).is_some())?;
        Ok(SwapStructure { matrix, base })
    }

    pub fn default_equality(matrix: &SwapNmatrix, size: usize, kind: EqualityKind) -> Table<Snapshot> {
        let a = matrix.algebra();
        let (top, bot) = (a.top(), a.bottom());
        let equal = match kind {
            EqualityKind::Classical => Snapshot::new(top, bot, top),
            EqualityKind::Mid => Snapshot::new(top, top, bot),
        }
        .expect("valid snapshot");
        let unequal = Snapshot::new(bot, top, top).expect("valid snapshot");
        Table::from_fn(2, size, |ab| if ab[0] == ab[1] { equal } else { unequal })
    }
}

/// A structure over a twist matrix.
#[derive(Debug, Clone)]
pub struct TwistStructure {
    pub matrix: TwistMatrix,
    pub base: Structure<TwistPair>,
}

impl TwistStructure {
    pub fn new(matrix: TwistMatrix, base: Structure<TwistPair>) -> Result<TwistStructure, FoError> {
        let alg = matrix.algebra();
        base.validate(|p| p.algebra() == alg)?;
        Ok(TwistStructure { matrix, base })
    }

    pub fn default_equality(matrix: &TwistMatrix, size: usize, kind: EqualityKind) -> Table<TwistPair> {
        let a = matrix.algebra();
        let (top, bot) = (a.top(), a.bottom());
        let equal = match kind {
            EqualityKind::Classical => TwistPair::new(top, bot),
            EqualityKind::Mid => TwistPair::new(top, top),
        }
        .expect("valid pair");
        let unequal = TwistPair::new(bot, top).expect("valid pair");
        Table::from_fn(2, size, |ab| if ab[0] == ab[1] { equal } else { unequal })
    }
}

#[derive(Debug, Clone)]
pub enum FOStructure {
    Swap(SwapStructure),
    Twist(TwistStructure),
}

impl FOStructure {
    pub fn signature(&self) -> Signature {
        match self {
            FOStructure::Swap(s) => s.base.signature(),
            FOStructure::Twist(s) => s.base.signature(),
        }
    }

    pub fn domain(&self) -> &[String] {
        match self {
            FOStructure::Swap(s) => &s.base.domain,
            FOStructure::Twist(s) => &s.base.domain,
        }
    }
}
