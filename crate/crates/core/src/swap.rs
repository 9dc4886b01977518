//! Swap structures: snapshots `(z1, z2, z3)` over a finite Boolean algebra,
//! the full swap structure `B_A`, its Nmatrix, and the 5-valued `M5`.
//!
//! Snapshots are kept in a canonical order (lexicographic on the bit
//! encodings of `z1`, `z2`, `z3`) and referred to by index into that order.
//! Multioperations of a full swap structure only constrain the first
//! coordinate of the output, so they are answered from a table grouping the
//! domain by `z1` rather than stored per argument pair.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{BAElement, FiniteBooleanAlgebra};
use crate::grid;
use crate::syntax::{BinOp, UnOp};

/// Largest atom count for which the domain (5^n snapshots) is materialized.
pub const SWAP_ATOM_LIMIT: u32 = 8;

/// Restricted structures keep explicit tables; this bounds their domain.
pub const RESTRICTED_DOMAIN_LIMIT: usize = 625;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SwapError {
    #[error("({0}) is not a snapshot: needs z1 | z2 = 1 and z1 & z2 & z3 = 0 over one algebra")]
    InvalidSnapshot(String),
    #[error("swap structures over {atoms} atoms are too large (limit {limit})")]
    TooLarge { atoms: u32, limit: u32 },
    #[error("{0} is not in the domain of this structure")]
    NotInDomain(String),
    #[error("empty output for {0}")]
    EmptyOutput(String),
    #[error("output {output} of {entry} violates the first-projection law")]
    FirstProjectionViolation { entry: String, output: String },
    #[error("{0} lies outside the full swap domain")]
    DomainEscape(String),
    #[error("the structure has no designated value")]
    NoDesignated,
}

/// A triple `(z1, z2, z3)` with `z1 ∨ z2 = 1` and `z1 ∧ z2 ∧ z3 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Snapshot {
    z1: BAElement,
    z2: BAElement,
    z3: BAElement,
}

fn triple_text(z1: &BAElement, z2: &BAElement, z3: &BAElement) -> String {
    format!("{z1},{z2},{z3}")
}

fn is_snapshot(z1: BAElement, z2: BAElement, z3: BAElement) -> bool {
    z1.algebra() == z2.algebra()
        && z2.algebra() == z3.algebra()
        && (z1 | z2).is_top()
        && (z1 & z2 & z3).is_bottom()
}

impl Snapshot {
    pub fn new(z1: BAElement, z2: BAElement, z3: BAElement) -> Result<Snapshot, SwapError> {
        if is_snapshot(z1, z2, z3) {
            Ok(Snapshot { z1, z2, z3 })
        } else {
            Err(SwapError::InvalidSnapshot(triple_text(&z1, &z2, &z3)))
        }
    }

    pub fn z1(&self) -> BAElement {
        self.z1
    }

    pub fn z2(&self) -> BAElement {
        self.z2
    }

    pub fn z3(&self) -> BAElement {
        self.z3
    }

    /// Coordinate `k` in 1..=3.
    pub fn coord(&self, k: usize) -> BAElement {
        match k {
            1 => self.z1,
            2 => self.z2,
            3 => self.z3,
            _ => panic!("snapshot coordinate {k} out of range"),
        }
    }

    pub fn algebra(&self) -> FiniteBooleanAlgebra {
        self.z1.algebra()
    }

    pub fn is_designated(&self) -> bool {
        self.z1.is_top()
    }
}

impl fmt::Display for Snapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", triple_text(&self.z1, &self.z2, &self.z3))
    }
}

/// Every snapshot over `a`, in canonical order.
pub fn swap_domain(a: &FiniteBooleanAlgebra) -> Result<Vec<Snapshot>, SwapError> {
    let n = a.atom_count();
    if n > SWAP_ATOM_LIMIT {
        return Err(SwapError::TooLarge { atoms: n, limit: SWAP_ATOM_LIMIT });
    }
    // Per atom, (z1,z2,z3) restricted to that atom is one of five bit patterns.
    const PATTERNS: [(u64, u64, u64); 5] = [(1, 0, 1), (1, 1, 0), (1, 0, 0), (0, 1, 1), (0, 1, 0)];
    let total = 5usize.pow(n);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let (mut b1, mut b2, mut b3) = (0u64, 0u64, 0u64);
        for i in 0..n {
            let (p1, p2, p3) = PATTERNS[code % 5];
            code /= 5;
            b1 |= p1 << i;
            b2 |= p2 << i;
            b3 |= p3 << i;
        }
        out.push(Snapshot { z1: a.element(b1), z2: a.element(b2), z3: a.element(b3) });
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SwapOp {
    Bin(BinOp),
    Un(UnOp),
}

impl SwapOp {
    pub const ALL: [SwapOp; 5] = [
        SwapOp::Bin(BinOp::And),
        SwapOp::Bin(BinOp::Or),
        SwapOp::Bin(BinOp::Imp),
        SwapOp::Un(UnOp::Neg),
        SwapOp::Un(UnOp::Cons),
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            SwapOp::Bin(BinOp::And) => "&",
            SwapOp::Bin(BinOp::Or) => "|",
            SwapOp::Bin(BinOp::Imp) => "->",
            SwapOp::Un(UnOp::Neg) => "~",
            SwapOp::Un(UnOp::Cons) => "*",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            SwapOp::Bin(_) => 2,
            SwapOp::Un(_) => 1,
        }
    }
}

#[derive(Debug, Clone)]
struct Tables {
    bin: [Vec<Vec<usize>>; 3],
    un: [Vec<Vec<usize>>; 2],
}

fn bin_slot(op: BinOp) -> usize {
    match op {
        BinOp::And => 0,
        BinOp::Or => 1,
        BinOp::Imp => 2,
    }
}

fn un_slot(op: UnOp) -> usize {
    match op {
        UnOp::Neg => 0,
        UnOp::Cons => 1,
    }
}

/// A swap structure together with its designated set, i.e. an Nmatrix.
#[derive(Debug, Clone)]
pub struct SwapNmatrix {
    algebra: FiniteBooleanAlgebra,
    domain: Vec<Snapshot>,
    index: HashMap<Snapshot, usize>,
    designated: Vec<bool>,
    /// Full structures: domain indices grouped by the bits of `z1`.
    by_first: Vec<Vec<usize>>,
    tables: Option<Box<Tables>>,
    names: Option<Vec<String>>,
}

pub fn full_swap(a: &FiniteBooleanAlgebra) -> Result<SwapNmatrix, SwapError> {
    let domain = swap_domain(a)?;
    let mut by_first = vec![Vec::new(); 1usize << a.atom_count()];
    for (i, s) in domain.iter().enumerate() {
        by_first[s.z1.bits() as usize].push(i);
    }
    Ok(SwapNmatrix::assemble(*a, domain, by_first, None))
}

/// `M5`: the full swap structure over the two-element algebra, with its
/// values named `T, t, t0, F, f0`.
pub fn m5() -> SwapNmatrix {
    let mut m = full_swap(&crate::algebra::two()).expect("A2 is within limits");
    let names = m
        .domain
        .iter()
        .map(|s| {
            match (s.z1.bits(), s.z2.bits(), s.z3.bits()) {
                (1, 0, 1) => "T",
                (1, 1, 0) => "t",
                (1, 0, 0) => "t0",
                (0, 1, 1) => "F",
                _ => "f0",
            }
            .to_string()
        })
        .collect();
    m.names = Some(names);
    m
}

/// Overrides one multioperation entry of a restricted structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Override {
    pub op: SwapOp,
    pub args: Vec<(BAElement, BAElement, BAElement)>,
    pub outputs: Vec<(BAElement, BAElement, BAElement)>,
}

/// A sub-domain (defaults to the full domain) and replacement entries.
/// Entries not overridden are the full structure's outputs cut down to the
/// sub-domain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SwapRestriction {
    pub domain: Option<Vec<(BAElement, BAElement, BAElement)>>,
    pub overrides: Vec<Override>,
}

pub fn sub_swap(full: &SwapNmatrix, restriction: &SwapRestriction) -> Result<SwapNmatrix, SwapError> {
    let lift = |&(z1, z2, z3): &(BAElement, BAElement, BAElement)| -> Result<Snapshot, SwapError> {
        if z1.algebra() != full.algebra || !is_snapshot(z1, z2, z3) {
            return Err(SwapError::DomainEscape(format!("({})", triple_text(&z1, &z2, &z3))));
        }
        Ok(Snapshot { z1, z2, z3 })
    };
    let mut domain = match &restriction.domain {
        Some(ds) => ds.iter().map(lift).collect::<Result<Vec<_>, _>>()?,
        None => full.domain.clone(),
    };
    domain.sort();
    domain.dedup();
    if domain.len() > RESTRICTED_DOMAIN_LIMIT {
        return Err(SwapError::TooLarge { atoms: full.algebra.atom_count(), limit: SWAP_ATOM_LIMIT });
    }
    let local: HashMap<Snapshot, usize> = domain.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let restrict = |outs: &[usize]| -> Vec<usize> {
        let mut v: Vec<usize> = outs.iter().filter_map(|&o| local.get(&full.domain[o]).copied()).collect();
        v.sort();
        v
    };
    let n = domain.len();
    let full_idx = |s: &Snapshot| full.index[s];
    let mut tables = Tables {
        bin: [vec![Vec::new(); n * n], vec![Vec::new(); n * n], vec![Vec::new(); n * n]],
        un: [vec![Vec::new(); n], vec![Vec::new(); n]],
    };
    for op in [BinOp::And, BinOp::Or, BinOp::Imp] {
        for (i, x) in domain.iter().enumerate() {
            for (j, y) in domain.iter().enumerate() {
                tables.bin[bin_slot(op)][i * n + j] = restrict(full.binary(op, full_idx(x), full_idx(y)));
            }
        }
    }
    for op in [UnOp::Neg, UnOp::Cons] {
        for (i, x) in domain.iter().enumerate() {
            tables.un[un_slot(op)][i] = restrict(full.unary(op, full_idx(x)));
        }
    }
    let names = full.names.as_ref().map(|ns| domain.iter().map(|s| ns[full_idx(s)].clone()).collect::<Vec<_>>());
    let show = |s: &Snapshot| match &names {
        Some(ns) => ns[local[s]].clone(),
        None => s.to_string(),
    };
    for ov in &restriction.overrides {
        if ov.args.len() != ov.op.arity() {
            return Err(SwapError::EmptyOutput(format!("{} with {} argument(s)", ov.op.symbol(), ov.args.len())));
        }
        let args = ov.args.iter().map(lift).collect::<Result<Vec<_>, _>>()?;
        for a in &args {
            if !local.contains_key(a) {
                return Err(SwapError::DomainEscape(a.to_string()));
            }
        }
        let entry = match ov.op {
            SwapOp::Bin(_) => format!("{} {} {}", show(&args[0]), ov.op.symbol(), show(&args[1])),
            SwapOp::Un(_) => format!("{}{}", ov.op.symbol(), show(&args[0])),
        };
        let allowed: Vec<usize> = match ov.op {
            SwapOp::Bin(op) => full.binary(op, full_idx(&args[0]), full_idx(&args[1])).to_vec(),
            SwapOp::Un(op) => full.unary(op, full_idx(&args[0])).to_vec(),
        };
        let mut outs = Vec::new();
        for o in &ov.outputs {
            let s = lift(o)?;
            let Some(&k) = local.get(&s) else {
                return Err(SwapError::DomainEscape(s.to_string()));
            };
            if !allowed.contains(&full_idx(&s)) {
                return Err(SwapError::FirstProjectionViolation { entry, output: show(&s) });
            }
            outs.push(k);
        }
        outs.sort();
        outs.dedup();
        if outs.is_empty() {
            return Err(SwapError::EmptyOutput(entry));
        }
        match ov.op {
            SwapOp::Bin(op) => tables.bin[bin_slot(op)][local[&args[0]] * n + local[&args[1]]] = outs,
            SwapOp::Un(op) => tables.un[un_slot(op)][local[&args[0]]] = outs,
        }
    }
    for op in [BinOp::And, BinOp::Or, BinOp::Imp] {
        for i in 0..n {
            for j in 0..n {
                if tables.bin[bin_slot(op)][i * n + j].is_empty() {
                    let sym = SwapOp::Bin(op).symbol();
                    return Err(SwapError::EmptyOutput(format!("{} {sym} {}", show(&domain[i]), show(&domain[j]))));
                }
            }
        }
    }
    for op in [UnOp::Neg, UnOp::Cons] {
        for (i, x) in domain.iter().enumerate() {
            if tables.un[un_slot(op)][i].is_empty() {
                let sym = SwapOp::Un(op).symbol();
                return Err(SwapError::EmptyOutput(format!("{sym}{}", show(x))));
            }
        }
    }
    if !domain.iter().any(Snapshot::is_designated) {
        return Err(SwapError::NoDesignated);
    }
    let mut m = SwapNmatrix::assemble(full.algebra, domain, Vec::new(), Some(Box::new(tables)));
    m.names = names;
    Ok(m)
}

impl SwapNmatrix {
    fn assemble(
        algebra: FiniteBooleanAlgebra,
        domain: Vec<Snapshot>,
        by_first: Vec<Vec<usize>>,
        tables: Option<Box<Tables>>,
    ) -> SwapNmatrix {
        let index = domain.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let designated = domain.iter().map(Snapshot::is_designated).collect();
        SwapNmatrix { algebra, domain, index, designated, by_first, tables, names: None }
    }

    pub fn algebra(&self) -> FiniteBooleanAlgebra {
        self.algebra
    }

    pub fn is_full(&self) -> bool {
        self.tables.is_none()
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn domain(&self) -> &[Snapshot] {
        &self.domain
    }

    pub fn snapshot(&self, i: usize) -> Snapshot {
        self.domain[i]
    }

    pub fn index_of(&self, s: &Snapshot) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn is_designated(&self, i: usize) -> bool {
        self.designated[i]
    }

    pub fn designated(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.designated[i]).collect()
    }

    pub fn undesignated(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.designated[i]).collect()
    }

    /// Full structures only: the snapshots with the given first coordinate.
    pub fn with_first(&self, z1: BAElement) -> &[usize] {
        &self.by_first[z1.bits() as usize]
    }

    pub fn binary(&self, op: BinOp, x: usize, y: usize) -> &[usize] {
        match &self.tables {
            Some(t) => &t.bin[bin_slot(op)][x * self.len() + y],
            None => {
                let (a, b) = (self.domain[x].z1, self.domain[y].z1);
                let z = match op {
                    BinOp::And => a & b,
                    BinOp::Or => a | b,
                    BinOp::Imp => !a | b,
                };
                self.with_first(z)
            }
        }
    }

    pub fn unary(&self, op: UnOp, x: usize) -> &[usize] {
        match &self.tables {
            Some(t) => &t.un[un_slot(op)][x],
            None => {
                let s = self.domain[x];
                self.with_first(match op {
                    UnOp::Neg => s.z2,
                    UnOp::Cons => s.z3,
                })
            }
        }
    }

    pub fn apply(&self, op: SwapOp, args: &[Snapshot]) -> Result<Vec<Snapshot>, SwapError> {
        let idx = args
            .iter()
            .map(|s| self.index_of(s).ok_or_else(|| SwapError::NotInDomain(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if idx.len() != op.arity() {
            return Err(SwapError::NotInDomain(format!("{} argument(s) to {}", idx.len(), op.symbol())));
        }
        let outs = match op {
            SwapOp::Bin(b) => self.binary(b, idx[0], idx[1]),
            SwapOp::Un(u) => self.unary(u, idx[0]),
        };
        Ok(outs.iter().map(|&i| self.domain[i]).collect())
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// The value's name if the structure has named values, else its encoding.
    pub fn label(&self, i: usize) -> String {
        match &self.names {
            Some(ns) => ns[i].clone(),
            None => self.domain[i].to_string(),
        }
    }

    pub fn by_name(&self, name: &str) -> Option<usize> {
        self.names.as_ref()?.iter().position(|n| n == name)
    }

    /// Row/column order for printed tables: `T, t, t0, F, f0` for `M5`,
    /// designated values first otherwise.
    pub fn display_order(&self) -> Vec<usize> {
        if self.names.is_some() {
            let wanted = ["T", "t", "t0", "F", "f0"];
            let order: Vec<usize> = wanted.iter().filter_map(|n| self.by_name(n)).collect();
            if order.len() == self.len() {
                return order;
            }
        }
        let mut order = self.designated();
        order.extend(self.undesignated());
        order
    }

    fn render_set(&self, outs: &[usize], condensed: bool) -> String {
        if condensed {
            let d = self.designated();
            let nd = self.undesignated();
            if outs == d.as_slice() {
                return "D".into();
            }
            if outs == nd.as_slice() {
                return "ND".into();
            }
        }
        let mut order = self.display_order();
        order.retain(|i| outs.contains(i));
        let labels: Vec<String> = order.iter().map(|&i| self.label(i)).collect();
        format!("{{{}}}", labels.join(","))
    }

    /// Renders one multioperation table; `condensed` prints outputs equal to
    /// `D` or `ND` by those names.
    pub fn render_table(&self, op: SwapOp, condensed: bool) -> String {
        let order = self.display_order();
        let labels: Vec<String> = order.iter().map(|&i| self.label(i)).collect();
        let rows: Vec<(String, Vec<String>)> = match op {
            SwapOp::Bin(b) => order
                .iter()
                .map(|&i| {
                    let cells = order.iter().map(|&j| self.render_set(self.binary(b, i, j), condensed)).collect();
                    (self.label(i), cells)
                })
                .collect(),
            SwapOp::Un(u) => order
                .iter()
                .map(|&i| (self.label(i), vec![self.render_set(self.unary(u, i), condensed)]))
                .collect(),
        };
        let columns = match op {
            SwapOp::Bin(_) => labels,
            SwapOp::Un(_) => vec![format!("{}x", op.symbol())],
        };
        let corner = if matches!(op, SwapOp::Un(_)) { "x" } else { op.symbol() };
        grid::render(corner, &columns, &rows)
    }

    pub fn render_tables(&self, condensed: bool) -> String {
        SwapOp::ALL.iter().map(|&op| self.render_table(op, condensed)).collect::<Vec<_>>().join("\n")
    }
}
