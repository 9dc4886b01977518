//! Finite Boolean algebras, represented as powerset algebras over `n` atoms.
//!
//! Every finite Boolean algebra is isomorphic to the powerset of its atoms, so
//! this is the only construction offered. Finiteness makes every algebra
//! complete: arbitrary infima and suprema exist and are computed by
//! [`FiniteBooleanAlgebra::big_meet`] and [`FiniteBooleanAlgebra::big_join`].
//!
//! Elements are bit masks over the atom indices. Each element remembers the
//! atom count of its parent algebra; combining elements from different
//! algebras is an error rather than a silent coercion.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on the number of atoms accepted by [`powerset_algebra`].
pub const DEFAULT_ATOM_CAP: u32 = 16;

/// Hard limit imposed by the `u64` element encoding.
pub const MAX_ATOMS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("powerset algebra over {requested} atoms exceeds the cap of {cap}")]
    CapExceeded { requested: u32, cap: u32 },
    #[error("elements belong to different algebras ({left} vs {right} atoms)")]
    MixedAlgebras { left: u32, right: u32 },
    #[error("atom index {index} out of range for an algebra with {atoms} atoms")]
    AtomOutOfRange { index: usize, atoms: u32 },
}

/// The powerset algebra over `atoms` atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteBooleanAlgebra {
    atoms: u32,
}

/// An element of a [`FiniteBooleanAlgebra`]: a subset of its atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BAElement {
    // field order gives the derived Ord: algebra first, then subset encoding
    atoms: u32,
    bits: u64,
}

/// Builds the powerset algebra over `n` atoms, subject to [`DEFAULT_ATOM_CAP`].
pub fn powerset_algebra(n: u32) -> Result<FiniteBooleanAlgebra, AlgebraError> {
    powerset_algebra_capped(n, DEFAULT_ATOM_CAP)
}

/// Like [`powerset_algebra`] with an explicit cap (itself bounded by [`MAX_ATOMS`]).
pub fn powerset_algebra_capped(n: u32, cap: u32) -> Result<FiniteBooleanAlgebra, AlgebraError> {
    let cap = cap.min(MAX_ATOMS);
    if n > cap {
        return Err(AlgebraError::CapExceeded { requested: n, cap });
    }
    Ok(FiniteBooleanAlgebra { atoms: n })
}

/// The two-element algebra `{0, 1}`.
pub fn two() -> FiniteBooleanAlgebra {
    FiniteBooleanAlgebra { atoms: 1 }
}

impl FiniteBooleanAlgebra {
    pub fn atom_count(&self) -> u32 {
        self.atoms
    }

    /// Number of elements, `2^n`.
    pub fn size(&self) -> u128 {
        1u128 << self.atoms
    }

    fn full_mask(&self) -> u64 {
        if self.atoms == 64 {
            u64::MAX
        } else {
            (1u64 << self.atoms) - 1
        }
    }

    pub fn bottom(&self) -> BAElement {
        BAElement { atoms: self.atoms, bits: 0 }
    }

    pub fn top(&self) -> BAElement {
        BAElement { atoms: self.atoms, bits: self.full_mask() }
    }

    /// The element whose atom set is given by the low bits of `bits`.
    /// Bits beyond the atom count are discarded.
    pub fn element(&self, bits: u64) -> BAElement {
        BAElement { atoms: self.atoms, bits: bits & self.full_mask() }
    }

    /// The element containing exactly the listed atoms.
    pub fn from_atoms(&self, indices: &[usize]) -> Result<BAElement, AlgebraError> {
        let mut bits = 0u64;
        for &i in indices {
            if i >= self.atoms as usize {
                return Err(AlgebraError::AtomOutOfRange { index: i, atoms: self.atoms });
            }
            bits |= 1u64 << i;
        }
        Ok(self.element(bits))
    }

    /// All elements in increasing order of their bit encoding.
    ///
    /// Panics if the algebra is too large to enumerate (more than 2^32 elements).
    pub fn elements(&self) -> impl Iterator<Item = BAElement> + '_ {
        assert!(self.atoms <= 32, "refusing to enumerate 2^{} elements", self.atoms);
        (0..(1u64 << self.atoms)).map(move |bits| self.element(bits))
    }

    pub fn contains(&self, x: &BAElement) -> bool {
        x.atoms == self.atoms
    }

    fn check(&self, x: &BAElement) -> Result<(), AlgebraError> {
        if x.atoms == self.atoms {
            Ok(())
        } else {
            Err(AlgebraError::MixedAlgebras { left: self.atoms, right: x.atoms })
        }
    }

    pub fn meet(&self, x: BAElement, y: BAElement) -> Result<BAElement, AlgebraError> {
        self.check(&x)?;
        x.try_meet(y)
    }

    pub fn join(&self, x: BAElement, y: BAElement) -> Result<BAElement, AlgebraError> {
        self.check(&x)?;
        x.try_join(y)
    }

    pub fn compl(&self, x: BAElement) -> Result<BAElement, AlgebraError> {
        self.check(&x)?;
        Ok(x.complement())
    }

    pub fn imp(&self, x: BAElement, y: BAElement) -> Result<BAElement, AlgebraError> {
        self.check(&x)?;
        x.try_imp(y)
    }

    /// Infimum of an arbitrary (finite) family; the empty family yields top.
    pub fn big_meet<I>(&self, xs: I) -> Result<BAElement, AlgebraError>
    where
        I: IntoIterator<Item = BAElement>,
    {
        let mut acc = self.top();
        for x in xs {
            self.check(&x)?;
            acc.bits &= x.bits;
        }
        Ok(acc)
    }

    /// Supremum of an arbitrary (finite) family; the empty family yields bottom.
    pub fn big_join<I>(&self, xs: I) -> Result<BAElement, AlgebraError>
    where
        I: IntoIterator<Item = BAElement>,
    {
        let mut acc = self.bottom();
        for x in xs {
            self.check(&x)?;
            acc.bits |= x.bits;
        }
        Ok(acc)
    }
}

impl BAElement {
    pub fn algebra(&self) -> FiniteBooleanAlgebra {
        FiniteBooleanAlgebra { atoms: self.atoms }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_top(&self) -> bool {
        self.bits == self.algebra().full_mask()
    }

    pub fn is_bottom(&self) -> bool {
        self.bits == 0
    }

    /// Sorted atom indices, the JSON encoding of an element.
    pub fn atom_indices(&self) -> Vec<usize> {
        (0..self.atoms as usize).filter(|&i| self.bits >> i & 1 == 1).collect()
    }

    /// `self ≤ other` in the lattice order (subset inclusion).
    pub fn le(&self, other: &BAElement) -> bool {
        self.bits & !other.bits == 0
    }

    fn same(&self, other: &BAElement) -> Result<(), AlgebraError> {
        if self.atoms == other.atoms {
            Ok(())
        } else {
            Err(AlgebraError::MixedAlgebras { left: self.atoms, right: other.atoms })
        }
    }

    pub fn try_meet(self, other: BAElement) -> Result<BAElement, AlgebraError> {
        self.same(&other)?;
        Ok(BAElement { atoms: self.atoms, bits: self.bits & other.bits })
    }

    pub fn try_join(self, other: BAElement) -> Result<BAElement, AlgebraError> {
        self.same(&other)?;
        Ok(BAElement { atoms: self.atoms, bits: self.bits | other.bits })
    }

    /// Boolean implication `¬x ∨ y`.
    pub fn try_imp(self, other: BAElement) -> Result<BAElement, AlgebraError> {
        self.same(&other)?;
        Ok(BAElement { atoms: self.atoms, bits: (!self.bits | other.bits) & self.algebra().full_mask() })
    }

    pub fn complement(self) -> BAElement {
        BAElement { atoms: self.atoms, bits: !self.bits & self.algebra().full_mask() }
    }
}

// Operator forms for internal use where both operands are known to come from
// one algebra. They panic on mixed algebras.

impl std::ops::BitAnd for BAElement {
    type Output = BAElement;
    fn bitand(self, rhs: BAElement) -> BAElement {
        self.try_meet(rhs).expect("meet of elements from different algebras")
    }
}

impl std::ops::BitOr for BAElement {
    type Output = BAElement;
    fn bitor(self, rhs: BAElement) -> BAElement {
        self.try_join(rhs).expect("join of elements from different algebras")
    }
}

impl std::ops::Not for BAElement {
    type Output = BAElement;
    fn not(self) -> BAElement {
        self.complement()
    }
}

impl fmt::Display for BAElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms == 1 {
            return write!(f, "{}", self.bits);
        }
        write!(f, "{{")?;
        for (k, i) in self.atom_indices().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "a{i}")?;
        }
        write!(f, "}}")
    }
}

/// JSON description of an algebra: `{"type":"powerset","atoms":n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum AlgebraSpec {
    Powerset { atoms: u32 },
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<FiniteBooleanAlgebra, AlgebraError> {
        match *self {
            AlgebraSpec::Powerset { atoms } => powerset_algebra(atoms),
        }
    }
}

impl From<FiniteBooleanAlgebra> for AlgebraSpec {
    fn from(a: FiniteBooleanAlgebra) -> Self {
        AlgebraSpec::Powerset { atoms: a.atoms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sizes() {
        assert_eq!(two().size(), 2);
        let a0 = powerset_algebra(0).unwrap();
        assert_eq!(a0.size(), 1);
        assert_eq!(a0.top(), a0.bottom());
        assert_eq!(powerset_algebra(3).unwrap().elements().count(), 8);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            powerset_algebra(17),
            Err(AlgebraError::CapExceeded { requested: 17, cap: 16 })
        );
        assert!(powerset_algebra_capped(20, 24).is_ok());
        assert!(powerset_algebra_capped(65, 100).is_err());
    }

    #[test]
    fn binary_ops() {
        let a2 = two();
        assert_eq!(a2.imp(a2.top(), a2.bottom()).unwrap(), a2.bottom());
        let p2 = powerset_algebra(2).unwrap();
        let x = p2.from_atoms(&[0]).unwrap();
        let y = p2.from_atoms(&[1]).unwrap();
        assert_eq!(p2.meet(x, y).unwrap(), p2.bottom());
        assert_eq!(p2.compl(p2.top()).unwrap(), p2.bottom());
    }

    #[test]
    fn mixed_algebras_are_rejected() {
        let p2 = powerset_algebra(2).unwrap();
        let p3 = powerset_algebra(3).unwrap();
        let err = p2.meet(p2.top(), p3.top()).unwrap_err();
        assert_eq!(err, AlgebraError::MixedAlgebras { left: 2, right: 3 });
        assert!(p2.big_meet([p3.top()]).is_err());
        assert!(p2.compl(p3.top()).is_err());
    }

    #[test]
    fn big_ops() {
        let p2 = powerset_algebra(2).unwrap();
        assert_eq!(p2.big_meet([]).unwrap(), p2.top());
        assert_eq!(p2.big_join([]).unwrap(), p2.bottom());
        let a0 = p2.from_atoms(&[0]).unwrap();
        let a01 = p2.from_atoms(&[0, 1]).unwrap();
        assert_eq!(p2.big_meet([a0, a01]).unwrap(), a0);
        assert_eq!(p2.big_join([p2.bottom(), p2.top()]).unwrap(), p2.top());
    }

    #[test]
    fn atom_indices_round_trip() {
        let p3 = powerset_algebra(3).unwrap();
        let x = p3.from_atoms(&[2, 0]).unwrap();
        assert_eq!(x.atom_indices(), vec![0, 2]);
        assert!(p3.from_atoms(&[3]).is_err());
        let spec: AlgebraSpec = serde_json::from_str(r#"{"type":"powerset","atoms":3}"#).unwrap();
        assert_eq!(spec.build().unwrap(), p3);
    }

    fn triple() -> impl Strategy<Value = (u32, u64, u64, u64)> {
        (0u32..6).prop_flat_map(|n| {
            let m = 1u64 << n;
            (Just(n), 0..m, 0..m, 0..m)
        })
    }

    proptest! {
        #[test]
        fn boolean_algebra_laws((n, a, b, c) in triple()) {
            let alg = powerset_algebra(n).unwrap();
            let (x, y, z) = (alg.element(a), alg.element(b), alg.element(c));
            prop_assert_eq!(x & (y | z), (x & y) | (x & z));
            prop_assert_eq!(x | (y & z), (x | y) & (x | z));
            prop_assert_eq!(!(x & y), !x | !y);
            prop_assert_eq!(!(x | y), !x & !y);
            prop_assert_eq!(x & !x, alg.bottom());
            prop_assert_eq!(x | !x, alg.top());
            prop_assert_eq!(!!x, x);
        }

        #[test]
        fn imp_is_top_iff_le((n, a, b, _c) in triple()) {
            let alg = powerset_algebra(n).unwrap();
            let (x, y) = (alg.element(a), alg.element(b));
            prop_assert_eq!(alg.imp(x, y).unwrap().is_top(), x.le(&y));
        }

        #[test]
        fn big_ops_agree_with_binary(n in 0u32..6, raw in proptest::collection::vec(any::<u64>(), 1..6)) {
            let alg = powerset_algebra(n).unwrap();
            let xs: Vec<_> = raw.iter().map(|&b| alg.element(b)).collect();
            let folded_meet = xs.iter().copied().reduce(|p, q| p & q).unwrap();
            let folded_join = xs.iter().copied().reduce(|p, q| p | q).unwrap();
            prop_assert_eq!(alg.big_meet(xs.clone()).unwrap(), folded_meet);
            prop_assert_eq!(alg.big_join(xs).unwrap(), folded_join);
        }
    }
}
