//! Exhaustive generation of small structures for a fixed signature.

use std::collections::BTreeMap;

use crate::swap::{Snapshot, SwapNmatrix};
use crate::twist::{TwistMatrix, TwistPair};

use super::structure::{EqualityKind, Structure, SwapStructure, Table, TruthValue, TwistStructure};
use super::FoError;

/// The signature and domain size of the structures to generate.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelShape {
    pub size: usize,
    pub constants: Vec<String>,
    pub functions: Vec<(String, usize)>,
    pub predicates: Vec<(String, usize)>,
    pub equality: Option<EqualityKind>,
}

impl ModelShape {
    fn radices(&self, values: usize) -> Option<Vec<usize>> {
        let n = self.size;
        let mut r = Vec::new();
        r.extend(self.constants.iter().map(|_| n));
        for (_, k) in &self.functions {
            let cells = n.checked_pow(*k as u32)?;
            r.extend(std::iter::repeat_n(n, cells));
        }
        for (_, k) in &self.predicates {
            let cells = n.checked_pow(*k as u32)?;
            r.extend(std::iter::repeat_n(values, cells));
        }
        Some(r)
    }

    fn count(&self, values: usize) -> Option<usize> {
        self.radices(values)?.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r))
    }

    fn build<V: TruthValue>(&self, digits: &[usize], values: &[V], equality: Option<Table<V>>) -> Structure<V> {
        let n = self.size;
        let mut it = digits.iter().copied();
        let constants = self.constants.iter().map(|c| (c.clone(), it.next().unwrap())).collect();
        let mut functions = BTreeMap::new();
        for (f, k) in &self.functions {
            functions.insert(f.clone(), Table::from_fn(*k, n, |_| it.next().unwrap()));
        }
        let mut predicates = BTreeMap::new();
        for (p, k) in &self.predicates {
            predicates.insert(p.clone(), Table::from_fn(*k, n, |_| values[it.next().unwrap()]));
        }
        Structure { domain: (0..n).map(|i| format!("d{i}")).collect(), constants, functions, predicates, equality }
    }
}

fn odometer(radices: &[usize], mut visit: impl FnMut(&[usize])) {
    if radices.contains(&0) {
        return;
    }
    let mut d = vec![0; radices.len()];
    loop {
        visit(&d);
        let mut i = d.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            d[i] += 1;
            if d[i] < radices[i] {
                break;
            }
            d[i] = 0;
        }
    }
}

fn too_many(shape: &ModelShape, values: usize, limit: usize) -> Result<(), FoError> {
    match shape.count(values) {
        Some(c) if c <= limit => Ok(()),
        _ => Err(FoError::Invalid(format!("more than {limit} structures of this shape"))),
    }
}

/// Every twist structure of the given shape, in lexicographic order of the
/// interpretations (constants, then functions, then predicates, each table
/// with its last argument fastest).
pub fn enumerate_twist_models(
    matrix: &TwistMatrix,
    shape: &ModelShape,
    limit: usize,
) -> Result<Vec<TwistStructure>, FoError> {
    if shape.size == 0 {
        return Err(FoError::EmptyDomain);
    }
    let values: Vec<TwistPair> = matrix.domain().to_vec();
    too_many(shape, values.len(), limit)?;
    let eq = shape.equality.map(|k| TwistStructure::default_equality(matrix, shape.size, k));
    let mut out = Vec::new();
    let mut err = None;
    odometer(&shape.radices(values.len()).unwrap(), |d| {
        if err.is_some() {
            return;
        }
        match TwistStructure::new(matrix.clone(), shape.build(d, &values, eq.clone())) {
            Ok(s) => out.push(s),
            Err(e) => err = Some(e),
        }
    });
    err.map_or(Ok(out), Err)
}

/// Every structure of the given shape over a full swap Nmatrix, ordered as
/// for [`enumerate_twist_models`].
pub fn enumerate_swap_models(
    matrix: &SwapNmatrix,
    shape: &ModelShape,
    limit: usize,
) -> Result<Vec<SwapStructure>, FoError> {
    if shape.size == 0 {
        return Err(FoError::EmptyDomain);
    }
    let values: Vec<Snapshot> = matrix.domain().to_vec();
    too_many(shape, values.len(), limit)?;
    let eq = shape.equality.map(|k| SwapStructure::default_equality(matrix, shape.size, k));
    let mut out = Vec::new();
    let mut err = None;
    odometer(&shape.radices(values.len()).unwrap(), |d| {
        if err.is_some() {
            return;
        }
        match SwapStructure::new(matrix.clone(), shape.build(d, &values, eq.clone())) {
            Ok(s) => out.push(s),
            Err(e) => err = Some(e),
        }
    });
    err.map_or(Ok(out), Err)
}
