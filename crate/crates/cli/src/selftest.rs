//! Built-in checks: the printed tables of M5 and LFI1 as fixtures, and
//! agreement of M5 with bivaluation semantics on seeded instances.

use swaptwist::algebra::two;
use swaptwist::prop::{bival_consequence, prop_consequence};
use swaptwist::random::seeded_instances;
use swaptwist::swap::{full_swap, SwapNmatrix};
use swaptwist::syntax::{BinOp, UnOp};
use swaptwist::twist::lfi1_matrix;

use crate::report::Check;

// Rows and columns T, t, t0, F, f0; D or N(D) for the output set.
const M5_ORDER: [(&str, (u64, u64, u64)); 5] =
    [("T", (1, 0, 1)), ("t", (1, 1, 0)), ("t0", (1, 0, 0)), ("F", (0, 1, 1)), ("f0", (0, 1, 0))];
const M5_BINARY: [(BinOp, [&str; 5]); 3] = [
    (BinOp::And, ["DDDNN", "DDDNN", "DDDNN", "NNNNN", "NNNNN"]),
    (BinOp::Or, ["DDDDD", "DDDDD", "DDDDD", "DDDNN", "DDDNN"]),
    (BinOp::Imp, ["DDDNN", "DDDNN", "DDDNN", "DDDDD", "DDDDD"]),
];
const M5_UNARY: [(UnOp, &str); 2] = [(UnOp::Neg, "NDNDD"), (UnOp::Cons, "DNNDN")];

// Rows and columns 1, ½, 0.
const LFI1_ORDER: [&str; 3] = ["1", "½", "0"];
const LFI1_BINARY: [(BinOp, [[&str; 3]; 3]); 3] = [
    (BinOp::And, [["1", "½", "0"], ["½", "½", "0"], ["0", "0", "0"]]),
    (BinOp::Or, [["1", "1", "1"], ["1", "½", "½"], ["1", "½", "0"]]),
    (BinOp::Imp, [["1", "½", "0"], ["1", "½", "0"], ["1", "1", "1"]]),
];
const LFI1_UNARY: [(UnOp, [&str; 3]); 2] = [(UnOp::Neg, ["0", "½", "1"]), (UnOp::Cons, ["1", "0", "1"])];

fn m5_index(m: &SwapNmatrix, bits: (u64, u64, u64)) -> Option<usize> {
    (0..m.len()).find(|&i| {
        let s = m.snapshot(i);
        (s.z1().bits(), s.z2().bits(), s.z3().bits()) == bits
    })
}

/// The class an output set must equal: all of D, or all of ND.
fn class_ok(m: &SwapNmatrix, outs: &[usize], code: u8) -> bool {
    let want = if code == b'D' { m.designated() } else { m.undesignated() };
    let mut got = outs.to_vec();
    got.sort_unstable();
    let mut want = want;
    want.sort_unstable();
    got == want
}

fn m5_tables() -> Result<String, String> {
    let m = full_swap(&two()).map_err(|e| e.to_string())?;
    let mut idx = [0usize; 5];
    for (k, (name, bits)) in M5_ORDER.iter().enumerate() {
        idx[k] = m5_index(&m, *bits).ok_or_else(|| format!("no snapshot for {name}"))?;
    }
    let mut n = 0;
    for (op, rows) in M5_BINARY {
        for i in 0..5 {
            for j in 0..5 {
                if !class_ok(&m, m.binary(op, idx[i], idx[j]), rows[i].as_bytes()[j]) {
                    return Err(format!("{op:?}({}, {}) differs", M5_ORDER[i].0, M5_ORDER[j].0));
                }
                n += 1;
            }
        }
    }
    for (op, row) in M5_UNARY {
        for i in 0..5 {
            if !class_ok(&m, m.unary(op, idx[i]), row.as_bytes()[i]) {
                return Err(format!("{op:?}({}) differs", M5_ORDER[i].0));
            }
            n += 1;
        }
    }
    Ok(format!("{n} entries"))
}

fn lfi1_tables() -> Result<String, String> {
    let m = lfi1_matrix();
    let v = |n: &str| m.by_name(n).ok_or_else(|| format!("no value named {n}"));
    let mut n = 0;
    for (op, table) in LFI1_BINARY {
        for (i, x) in LFI1_ORDER.iter().enumerate() {
            for (j, y) in LFI1_ORDER.iter().enumerate() {
                let got = m.label(&v(x)?.binary(op, v(y)?));
                if got != table[i][j] {
                    return Err(format!("{op:?}({x}, {y}) = {got}, expected {}", table[i][j]));
                }
                n += 1;
            }
        }
    }
    for (op, row) in LFI1_UNARY {
        for (i, x) in LFI1_ORDER.iter().enumerate() {
            let got = m.label(&v(x)?.unary(op));
            if got != row[i] {
                return Err(format!("{op:?}({x}) = {got}, expected {}", row[i]));
            }
            n += 1;
        }
    }
    Ok(format!("{n} entries"))
}

fn oracle(seed: u64, count: usize) -> Result<String, String> {
    let m = full_swap(&two()).map_err(|e| e.to_string())?;
    let mut holds = 0;
    for (k, (gamma, phi)) in seeded_instances(seed, count).into_iter().enumerate() {
        let a = prop_consequence(&gamma, &phi, &m).map_err(|e| e.to_string())?.holds();
        let b = bival_consequence(&gamma, &phi).map_err(|e| e.to_string())?.holds();
        if a != b {
            let shown: Vec<String> = gamma.iter().map(|g| g.to_string()).collect();
            return Err(format!("instance {k} ({} |= {phi}): M5 says {a}, bivaluations say {b}", shown.join(", ")));
        }
        holds += a as usize;
    }
    Ok(format!("{count} instances agree, {holds} hold"))
}

pub fn run(seed: u64, count: usize) -> Vec<Check> {
    let checks: [(&str, Result<String, String>); 3] = [
        ("M5 tables", m5_tables()),
        ("LFI1 tables", lfi1_tables()),
        ("M5 agrees with bivaluations", oracle(seed, count)),
    ];
    checks
        .into_iter()
        .map(|(name, r)| match r {
            Ok(detail) => Check { name: name.into(), passed: true, detail },
            Err(detail) => Check { name: name.into(), passed: false, detail },
        })
        .collect()
}
