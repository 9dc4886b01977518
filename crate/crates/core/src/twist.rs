//! Twist structures for LFI1∘: pairs `(z1, z2)` with `z1 ∨ z2 = 1` and
//! single-valued operations. Over the two-element algebra this is the
//! 3-valued matrix with values `1 = (1,0)`, `½ = (1,1)`, `0 = (0,1)`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{two, BAElement, FiniteBooleanAlgebra};
use crate::grid;
use crate::swap::SwapOp;
use crate::syntax::{BinOp, Formula, UnOp};
use crate::Verdict;

/// Largest atom count for which the domain (3^n pairs) is materialized.
pub const TWIST_ATOM_LIMIT: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("({0}) is not a twist pair: needs z1 | z2 = 1 over one algebra")]
    InvalidPair(String),
    #[error("twist structures over {atoms} atoms are too large (limit {limit})")]
    TooLarge { atoms: u32, limit: u32 },
    #[error("atom `{0}` has no value")]
    UnmappedAtom(String),
    #[error("`{0}` is not propositional")]
    NotPropositional(String),
    #[error("value belongs to a different algebra")]
    WrongAlgebra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistPair {
    z1: BAElement,
    z2: BAElement,
}

impl TwistPair {
    pub fn new(z1: BAElement, z2: BAElement) -> Result<TwistPair, TwistError> {
        if z1.algebra() == z2.algebra() && (z1 | z2).is_top() {
            Ok(TwistPair { z1, z2 })
        } else {
            Err(TwistError::InvalidPair(format!("{z1},{z2}")))
        }
    }

    pub fn z1(&self) -> BAElement {
        self.z1
    }

    pub fn z2(&self) -> BAElement {
        self.z2
    }

    pub fn algebra(&self) -> FiniteBooleanAlgebra {
        self.z1.algebra()
    }

    pub fn is_designated(&self) -> bool {
        self.z1.is_top()
    }

    pub fn and(self, w: TwistPair) -> TwistPair {
        TwistPair { z1: self.z1 & w.z1, z2: self.z2 | w.z2 }
    }

    pub fn or(self, w: TwistPair) -> TwistPair {
        TwistPair { z1: self.z1 | w.z1, z2: self.z2 & w.z2 }
    }

    pub fn imp(self, w: TwistPair) -> TwistPair {
        TwistPair { z1: !self.z1 | w.z1, z2: self.z1 & w.z2 }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> TwistPair {
        TwistPair { z1: self.z2, z2: self.z1 }
    }

    pub fn cons(self) -> TwistPair {
        let both = self.z1 & self.z2;
        TwistPair { z1: !both, z2: both }
    }

    pub fn binary(self, op: BinOp, w: TwistPair) -> TwistPair {
        match op {
            BinOp::And => self.and(w),
            BinOp::Or => self.or(w),
            BinOp::Imp => self.imp(w),
        }
    }

    pub fn unary(self, op: UnOp) -> TwistPair {
        match op {
            UnOp::Neg => self.neg(),
            UnOp::Cons => self.cons(),
        }
    }
}

impl fmt::Display for TwistPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.z1, self.z2)
    }
}

/// Every pair over `a`, in canonical (lexicographic) order.
pub fn twist_domain(a: &FiniteBooleanAlgebra) -> Result<Vec<TwistPair>, TwistError> {
    let n = a.atom_count();
    if n > TWIST_ATOM_LIMIT {
        return Err(TwistError::TooLarge { atoms: n, limit: TWIST_ATOM_LIMIT });
    }
    const PATTERNS: [(u64, u64); 3] = [(1, 0), (1, 1), (0, 1)];
    let total = 3usize.pow(n);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let (mut b1, mut b2) = (0u64, 0u64);
        for i in 0..n {
            let (p1, p2) = PATTERNS[code % 3];
            code /= 3;
            b1 |= p1 << i;
            b2 |= p2 << i;
        }
        out.push(TwistPair { z1: a.element(b1), z2: a.element(b2) });
    }
    out.sort();
    Ok(out)
}

/// The twist algebra over a Boolean algebra with designated set `{(1, z2)}`.
#[derive(Debug, Clone)]
pub struct TwistMatrix {
    algebra: FiniteBooleanAlgebra,
    domain: Vec<TwistPair>,
    names: Option<Vec<String>>,
}

pub fn twist_matrix(a: &FiniteBooleanAlgebra) -> Result<TwistMatrix, TwistError> {
    Ok(TwistMatrix { algebra: *a, domain: twist_domain(a)?, names: None })
}

/// The 3-valued matrix: `twist_matrix(two())` with values named `1`, `½`, `0`.
pub fn lfi1_matrix() -> TwistMatrix {
    let mut m = twist_matrix(&two()).expect("A2 is within limits");
    let names = m
        .domain
        .iter()
        .map(|p| {
            match (p.z1.bits(), p.z2.bits()) {
                (1, 0) => "1",
                (1, 1) => "½",
                _ => "0",
            }
            .to_string()
        })
        .collect();
    m.names = Some(names);
    m
}

impl TwistMatrix {
    pub fn algebra(&self) -> FiniteBooleanAlgebra {
        self.algebra
    }

    pub fn domain(&self) -> &[TwistPair] {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn pair(&self, z1: BAElement, z2: BAElement) -> Result<TwistPair, TwistError> {
        if z1.algebra() != self.algebra {
            return Err(TwistError::WrongAlgebra);
        }
        TwistPair::new(z1, z2)
    }

    pub fn label(&self, p: &TwistPair) -> String {
        match &self.names {
            Some(ns) => match self.domain.iter().position(|q| q == p) {
                Some(i) => ns[i].clone(),
                None => p.to_string(),
            },
            None => p.to_string(),
        }
    }

    /// Looks a value up by name; `1/2` is accepted for `½`.
    pub fn by_name(&self, name: &str) -> Option<TwistPair> {
        let name = if name == "1/2" { "½" } else { name };
        let i = self.names.as_ref()?.iter().position(|n| n == name)?;
        Some(self.domain[i])
    }

    pub fn has_names(&self) -> bool {
        self.names.is_some()
    }

    /// `1, ½, 0` for the named matrix, designated values first otherwise.
    pub fn display_order(&self) -> Vec<TwistPair> {
        if self.names.is_some() {
            return ["1", "½", "0"].iter().filter_map(|n| self.by_name(n)).collect();
        }
        let mut order: Vec<TwistPair> = self.domain.iter().filter(|p| p.is_designated()).copied().collect();
        order.extend(self.domain.iter().filter(|p| !p.is_designated()));
        order
    }

    pub fn render_table(&self, op: SwapOp) -> String {
        let order = self.display_order();
        let labels: Vec<String> = order.iter().map(|p| self.label(p)).collect();
        let (columns, rows) = match op {
            SwapOp::Bin(b) => (
                labels,
                order
                    .iter()
                    .map(|x| (self.label(x), order.iter().map(|y| self.label(&x.binary(b, *y))).collect()))
                    .collect::<Vec<_>>(),
            ),
            SwapOp::Un(u) => (
                vec![format!("{}x", op.symbol())],
                order.iter().map(|x| (self.label(x), vec![self.label(&x.unary(u))])).collect(),
            ),
        };
        let corner = if matches!(op, SwapOp::Un(_)) { "x" } else { op.symbol() };
        grid::render(corner, &columns, &rows)
    }

    pub fn render_tables(&self) -> String {
        SwapOp::ALL.iter().map(|&op| self.render_table(op)).collect::<Vec<_>>().join("\n")
    }
}

/// The homomorphic extension of `atoms` to `phi`.
pub fn eval_twist(
    phi: &Formula,
    atoms: &BTreeMap<String, TwistPair>,
    m: &TwistMatrix,
) -> Result<TwistPair, TwistError> {
    match phi {
        Formula::Atom(p, args) if args.is_empty() => {
            let v = atoms.get(p).ok_or_else(|| TwistError::UnmappedAtom(p.clone()))?;
            if v.algebra() != m.algebra {
                return Err(TwistError::WrongAlgebra);
            }
            Ok(*v)
        }
        Formula::Neg(a) => Ok(eval_twist(a, atoms, m)?.neg()),
        Formula::Cons(a) => Ok(eval_twist(a, atoms, m)?.cons()),
        Formula::And(a, b) => Ok(eval_twist(a, atoms, m)?.and(eval_twist(b, atoms, m)?)),
        Formula::Or(a, b) => Ok(eval_twist(a, atoms, m)?.or(eval_twist(b, atoms, m)?)),
        Formula::Imp(a, b) => Ok(eval_twist(a, atoms, m)?.imp(eval_twist(b, atoms, m)?)),
        _ => Err(TwistError::NotPropositional(phi.to_string())),
    }
}

/// Exhaustive check over all maps from the atoms of `gamma ∪ {phi}` into
/// the domain of `m`. Maps are enumerated in lexicographic order, atoms
/// sorted by name and values in canonical order; the first falsifying map
/// is returned.
pub fn lfi1_consequence(
    gamma: &[Formula],
    phi: &Formula,
    m: &TwistMatrix,
) -> Result<Verdict<BTreeMap<String, TwistPair>>, TwistError> {
    let mut atoms = phi.prop_atoms();
    for g in gamma.iter().chain(std::iter::once(phi)) {
        if !g.is_propositional() {
            return Err(TwistError::NotPropositional(g.to_string()));
        }
        atoms.extend(g.prop_atoms());
    }
    let atoms: Vec<String> = atoms.into_iter().collect();
    let k = atoms.len();
    let mut digits = vec![0usize; k];
    loop {
        let map: BTreeMap<String, TwistPair> =
            atoms.iter().cloned().zip(digits.iter().map(|&d| m.domain[d])).collect();
        let mut premises_hold = true;
        for g in gamma {
            if !eval_twist(g, &map, m)?.is_designated() {
                premises_hold = false;
                break;
            }
        }
        if premises_hold && !eval_twist(phi, &map, m)?.is_designated() {
            return Ok(Verdict::Countermodel(map));
        }
        // Odometer, last atom fastest.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(Verdict::Holds);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < m.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::powerset_algebra;
    use crate::syntax::{iff, parse_formula_extending, Signature};
    use proptest::prelude::*;

    fn f(s: &str) -> Formula {
        parse_formula_extending(s, &mut Signature::new()).unwrap()
    }

    fn lfi(name: &str) -> TwistPair {
        lfi1_matrix().by_name(name).unwrap()
    }

    #[test]
    fn named_values() {
        let m = lfi1_matrix();
        let a = two();
        assert_eq!(m.label(&m.pair(a.top(), a.bottom()).unwrap()), "1");
        assert_eq!(m.label(&m.pair(a.top(), a.top()).unwrap()), "½");
        assert_eq!(m.label(&m.pair(a.bottom(), a.top()).unwrap()), "0");
        assert_eq!(m.by_name("1/2"), Some(lfi("½")));
        assert!(m.pair(a.bottom(), a.bottom()).is_err());
    }

    #[test]
    fn sample_entries() {
        assert_eq!(lfi("½").cons(), lfi("0"));
        assert_eq!(lfi("1").neg(), lfi("0"));
        assert_eq!(lfi("½").imp(lfi("0")), lfi("0"));
        assert_eq!(lfi("½").and(lfi("½")), lfi("½"));
        assert_eq!(lfi("0").or(lfi("½")), lfi("½"));
        assert_eq!(lfi("1").cons(), lfi("1"));
    }

    #[test]
    fn evaluation() {
        let m = lfi1_matrix();
        let at = |v: &str| BTreeMap::from([("p".to_string(), lfi(v))]);
        assert_eq!(eval_twist(&f("~~p"), &at("½"), &m).unwrap(), lfi("½"));
        assert_eq!(eval_twist(&f("~*p"), &at("½"), &m).unwrap(), lfi("1"));
        let p = f("p");
        let cons_def = iff(&f("*p"), &crate::syntax::derived_strong_neg(&f("p & ~p"), &p));
        for v in ["1", "½", "0"] {
            assert!(eval_twist(&cons_def, &at(v), &m).unwrap().is_designated());
        }
        assert!(matches!(eval_twist(&f("q"), &at("1"), &m), Err(TwistError::UnmappedAtom(_))));
    }

    #[test]
    fn consequence() {
        let m = lfi1_matrix();
        assert!(lfi1_consequence(&[], &f("~*p -> p & ~p"), &m).unwrap().holds());
        assert!(lfi1_consequence(&[], &iff(&f("~~p"), &f("p")), &m).unwrap().holds());
        let v = lfi1_consequence(&[f("p"), f("~p")], &f("q"), &m).unwrap();
        let cm = v.countermodel().unwrap();
        assert_eq!(m.label(&cm["p"]), "½");
        assert_eq!(m.label(&cm["q"]), "0");
    }

    #[test]
    fn domain_sizes() {
        for n in 0..=6 {
            let a = powerset_algebra(n).unwrap();
            assert_eq!(twist_domain(&a).unwrap().len(), 3usize.pow(n));
        }
    }

    fn pair_strategy(n: u32) -> impl Strategy<Value = TwistPair> {
        let a = powerset_algebra(n).unwrap();
        let dom = twist_domain(&a).unwrap();
        (0..dom.len()).prop_map(move |i| dom[i])
    }

    proptest! {
        #[test]
        fn operations_close(x in pair_strategy(3), y in pair_strategy(3)) {
            for op in [BinOp::And, BinOp::Or, BinOp::Imp] {
                let z = x.binary(op, y);
                prop_assert!(TwistPair::new(z.z1(), z.z2()).is_ok());
            }
            for op in [UnOp::Neg, UnOp::Cons] {
                let z = x.unary(op);
                prop_assert!(TwistPair::new(z.z1(), z.z2()).is_ok());
            }
            prop_assert_eq!(x.neg().neg(), x);
        }
    }
}
