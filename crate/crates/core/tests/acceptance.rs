//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any of them fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use swaptwist::algebra::{powerset_algebra, two};
use swaptwist::fo::{
    check_standard_equality, enumerate_twist_models, qlfi1_consequence, qlfi1_value, EqualityKind, ModelShape,
    Structure, Table, TwistStructure,
};
use swaptwist::hilbert::{
    check_derivation, match_schema, parse_premises, parse_proof_script, random_derivation, DerivationVerdict, Logic,
    SchemaId, SchemaMatch, StepError,
};
use swaptwist::prop::{
    bival_consequence, bival_to_valuation, check_bivaluation, closure, is_valid, prop_consequence, random_bivaluation,
};
use swaptwist::random::{random_formula, random_instance};
use swaptwist::swap::{full_swap, m5, swap_domain};
use swaptwist::syntax::{parse_formula, parse_formula_extending, Assignment, BinOp, Formula, Signature, UnOp};
use swaptwist::twist::{lfi1_consequence, lfi1_matrix, twist_domain, twist_matrix, TwistMatrix};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn prop(s: &str) -> Formula {
    parse_formula_extending(s, &mut Signature::new()).unwrap()
}

// Golden M5 tables, rows and columns in the order T, t, t0, F, f0.
const NAMES: [&str; 5] = ["T", "t", "t0", "F", "f0"];
const AND: [&str; 5] = ["DDDNN", "DDDNN", "DDDNN", "NNNNN", "NNNNN"];
const OR: [&str; 5] = ["DDDDD", "DDDDD", "DDDDD", "DDDNN", "DDDNN"];
const IMP: [&str; 5] = ["DDDNN", "DDDNN", "DDDNN", "DDDDD", "DDDDD"];
const NEG: &str = "NDNDD";
const CONS: &str = "DNNDN";

fn expected(c: u8) -> BTreeSet<String> {
    let names: &[&str] = if c == b'D' { &["T", "t", "t0"] } else { &["F", "f0"] };
    names.iter().map(|s| s.to_string()).collect()
}

fn m5_tables() -> Outcome {
    let m = full_swap(&two()).map_err(|e| e.to_string())?;
    ensure(m.len() == 5, || format!("{} values", m.len()))?;
    // Values are located by their coordinates, not by any naming in the library.
    let coords = [("T", (1, 0, 1)), ("t", (1, 1, 0)), ("t0", (1, 0, 0)), ("F", (0, 1, 1)), ("f0", (0, 1, 0))];
    let name_of = |i: usize| {
        let s = m.snapshot(i);
        let bits = (s.z1().bits(), s.z2().bits(), s.z3().bits());
        coords.iter().find(|(_, c)| *c == bits).map(|(n, _)| n.to_string()).unwrap_or_else(|| s.to_string())
    };
    let idx = |n: &str| (0..m.len()).find(|&i| name_of(i) == n).ok_or_else(|| format!("no snapshot for {n}"));
    let class = |set: &[usize]| set.iter().map(|&i| name_of(i)).collect::<BTreeSet<String>>();
    let mut checked = 0;
    for (op, rows) in [(BinOp::And, AND), (BinOp::Or, OR), (BinOp::Imp, IMP)] {
        for (i, x) in NAMES.iter().enumerate() {
            for (j, y) in NAMES.iter().enumerate() {
                let got = class(m.binary(op, idx(x)?, idx(y)?));
                ensure(got == expected(rows[i].as_bytes()[j]), || format!("{op:?}({x},{y}) = {got:?}"))?;
                checked += 1;
            }
        }
    }
    for (op, row) in [(UnOp::Neg, NEG), (UnOp::Cons, CONS)] {
        for (i, x) in NAMES.iter().enumerate() {
            let got = class(m.unary(op, idx(x)?));
            ensure(got == expected(row.as_bytes()[i]), || format!("{op:?}({x}) = {got:?}"))?;
            checked += 1;
        }
    }
    ensure(checked == 85, || format!("{checked} entries checked"))
}

fn lfi1_tables() -> Outcome {
    let m = lfi1_matrix();
    let v = |n: &str| m.by_name(n).unwrap();
    let names = ["1", "½", "0"];
    let and = [["1", "½", "0"], ["½", "½", "0"], ["0", "0", "0"]];
    let or = [["1", "1", "1"], ["1", "½", "½"], ["1", "½", "0"]];
    let imp = [["1", "½", "0"], ["1", "½", "0"], ["1", "1", "1"]];
    let neg = ["0", "½", "1"];
    let cons = ["1", "0", "1"];
    for (op, table) in [(BinOp::And, and), (BinOp::Or, or), (BinOp::Imp, imp)] {
        for (i, x) in names.iter().enumerate() {
            for (j, y) in names.iter().enumerate() {
                let got = m.label(&v(x).binary(op, v(y)));
                ensure(got == table[i][j], || format!("{op:?}({x},{y}) = {got}"))?;
            }
        }
    }
    for (op, row) in [(UnOp::Neg, neg), (UnOp::Cons, cons)] {
        for (i, x) in names.iter().enumerate() {
            let got = m.label(&v(x).unary(op));
            ensure(got == row[i], || format!("{op:?}({x}) = {got}"))?;
        }
    }
    let coords = [("1", (1, 0)), ("½", (1, 1)), ("0", (0, 1))];
    for (n, c) in coords {
        ensure((v(n).z1().bits(), v(n).z2().bits()) == c, || format!("{n} has the wrong coordinates"))?;
    }
    let designated: Vec<&str> = names.iter().copied().filter(|n| v(n).is_designated()).collect();
    ensure(designated == ["1", "½"], || format!("designated {designated:?}"))
}

fn cardinalities() -> Outcome {
    for n in 0..=4u32 {
        let a = powerset_algebra(n).map_err(|e| e.to_string())?;
        let els: Vec<_> = a.elements().collect();
        let mut triples = 0usize;
        let mut pairs = 0usize;
        for &x in &els {
            for &y in &els {
                if x.complement().le(&y) {
                    pairs += 1;
                    for &z in &els {
                        if (x.bits() & y.bits() & z.bits()) == 0 {
                            triples += 1;
                        }
                    }
                }
            }
        }
        let swap = swap_domain(&a).map_err(|e| e.to_string())?.len();
        let twist = twist_domain(&a).map_err(|e| e.to_string())?.len();
        ensure(swap == 5usize.pow(n) && swap == triples, || format!("n={n}: {swap} snapshots, {triples} by brute force"))?;
        ensure(twist == 3usize.pow(n) && twist == pairs, || format!("n={n}: {twist} pairs, {pairs} by brute force"))?;
    }
    Ok(())
}

fn lfi_laws() -> Outcome {
    let m = m5();
    let conseq = |g: &[&str], p: &str| {
        let g: Vec<Formula> = g.iter().map(|s| prop(s)).collect();
        prop_consequence(&g, &prop(p), &m).unwrap()
    };
    let v = conseq(&["p", "~p"], "q");
    let cm = v.countermodel().ok_or("p, ~p entails q")?;
    cm.check(&m)?;
    ensure(cm.get(&prop("p")).unwrap().is_designated() && !cm.get(&prop("q")).unwrap().is_designated(), || {
        "countermodel does not falsify the goal".into()
    })?;
    ensure(conseq(&["*p", "p", "~p"], "q").holds(), || "*p, p, ~p does not entail q".into())?;
    ensure(is_valid(&prop("p | ~p"), &m).unwrap(), || "p | ~p is not valid".into())?;
    ensure(!is_valid(&prop("~~p -> p"), &m).unwrap(), || "~~p -> p is valid".into())?;
    ensure(!is_valid(&prop("~(p & ~p) -> *p"), &m).unwrap(), || "~(p & ~p) -> *p is valid".into())
}

fn lfi1_axioms() -> Outcome {
    let args = [prop("p"), prop("q")];
    let schemas = [SchemaId::Ci, SchemaId::Dneg, SchemaId::NegOr, SchemaId::NegAnd, SchemaId::NegImp];
    let mut matrices: Vec<(String, TwistMatrix)> = vec![("lfi1".into(), lfi1_matrix())];
    for n in 0..=2 {
        matrices.push((format!("twist:{n}"), twist_matrix(&powerset_algebra(n).unwrap()).unwrap()));
    }
    for s in schemas {
        let ax = s.instantiate(&args).ok_or_else(|| format!("{s} has no pattern"))?;
        for (name, m) in &matrices {
            let v = lfi1_consequence(&[], &ax, m).map_err(|e| e.to_string())?;
            ensure(v.holds(), || format!("{s} = {ax} fails over {name}"))?;
        }
    }
    Ok(())
}

fn oracle_agreement() -> Outcome {
    let m = m5();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut holds = 0;
    for k in 0..200 {
        let (gamma, phi) = random_instance(&mut rng);
        let a = prop_consequence(&gamma, &phi, &m).unwrap().holds();
        let b = bival_consequence(&gamma, &phi).unwrap().holds();
        let shown: Vec<String> = gamma.iter().map(|g| g.to_string()).collect();
        ensure(a == b, || format!("instance {k}: {shown:?} / {phi}: M5 {a}, bivaluations {b}"))?;
        holds += a as usize;
    }
    ensure(holds > 0 && holds < 200, || format!("degenerate sample: {holds} of 200 hold"))
}

fn bivaluation_translation() -> Outcome {
    let m = m5();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..100 {
        let fs: Vec<Formula> = (0..2).map(|_| random_formula(&mut rng, &["p", "q", "r"], 3)).collect();
        let rho = random_bivaluation(&fs, &mut rng).unwrap();
        ensure(check_bivaluation(&rho), || format!("bivaluation {k} is illegal"))?;
        let v = bival_to_valuation(&rho).map_err(|e| e.to_string())?;
        v.check(&m).map_err(|e| format!("bivaluation {k}: {e}"))?;
        for f in closure(&fs).unwrap() {
            let s = v.get(&f).ok_or_else(|| format!("bivaluation {k}: {f} missing"))?;
            ensure(rho.get(&f) == Some(s.is_designated()), || format!("bivaluation {k}: {f} disagrees"))?;
        }
    }
    Ok(())
}

// Bodies φ in x, with y as the other variable.
const BODIES: [&str; 7] =
    ["P(x)", "~P(x)", "*P(x)", "P(x) & ~P(y)", "P(y) -> ~P(x)", "forall y. P(y) | P(x)", "exists y. *P(y) -> P(x)"];

fn first_order_instances(sig: &Signature) -> Vec<(SchemaId, Formula)> {
    let mut out = Vec::new();
    for body in BODIES {
        for t in ["x", "y", "z"] {
            let inst = body.replace("P(x)", &format!("P({t})"));
            if t == "y" && body.contains("y.") {
                // y is bound in the body: not free for x.
                continue;
            }
            out.push((SchemaId::Ax12, format!("({inst}) -> exists x. {body}")));
            out.push((SchemaId::Ax13, format!("(forall x. {body}) -> {inst}")));
        }
        let neg_ex = format!("((~exists x. {body}) -> forall x. ~({body})) & ((forall x. ~({body})) -> ~exists x. {body})");
        let neg_all = format!("((~forall x. {body}) -> exists x. ~({body})) & ((exists x. ~({body})) -> ~forall x. {body})");
        out.push((SchemaId::AxNegExists, neg_ex));
        out.push((SchemaId::AxNegForall, neg_all));
    }
    out.push((SchemaId::AxEq1, "forall x. x = x".into()));
    out.push((SchemaId::AxEq1, "forall z. z = z".into()));
    out.into_iter().map(|(s, t)| (s, parse_formula(&t, sig).unwrap_or_else(|e| panic!("{t}: {e}")))).collect()
}

fn twist_first_order() -> Outcome {
    let shape = ModelShape {
        size: 2,
        predicates: vec![("P".into(), 1)],
        equality: Some(EqualityKind::Classical),
        ..Default::default()
    };
    let models = enumerate_twist_models(&lfi1_matrix(), &shape, 100).map_err(|e| e.to_string())?;
    ensure(models.len() == 9, || format!("{} models", models.len()))?;
    let instances = first_order_instances(&models[0].base.signature());
    for (s, f) in &instances {
        ensure(match_schema(*s, f) == SchemaMatch::Matches, || format!("{f} is not an instance of {s}"))?;
    }
    for (k, model) in models.iter().enumerate() {
        for (s, f) in &instances {
            let v = qlfi1_consequence(&[], f, model).map_err(|e| e.to_string())?;
            ensure(v.holds(), || format!("model {k}: {s} instance {f} undesignated"))?;
        }
        for body in BODIES {
            let sig = model.base.signature();
            let l = parse_formula(&format!("~forall x. {body}"), &sig).unwrap();
            let r = parse_formula(&format!("exists x. ~({body})"), &sig).unwrap();
            for y in 0..2 {
                let mu = Assignment::from([("y".to_string(), y)]);
                let (a, b) = (qlfi1_value(model, &l, &mu).unwrap(), qlfi1_value(model, &r, &mu).unwrap());
                ensure(a == b, || format!("model {k}: ~forall/exists~ differ on {body}"))?;
            }
        }
    }
    Ok(())
}

fn mid_equality() -> Outcome {
    let m = lfi1_matrix();
    let half = m.by_name("½").unwrap();
    let mut eq = TwistStructure::default_equality(&m, 2, EqualityKind::Classical);
    eq.set(&[0, 0], half);
    eq.set(&[1, 1], half);
    let one = m.by_name("1").unwrap();
    let base = Structure {
        domain: vec!["a".into(), "b".into()],
        constants: BTreeMap::from([("c".into(), 0)]),
        functions: BTreeMap::new(),
        predicates: BTreeMap::from([("P".into(), Table::constant(1, 2, one))]),
        equality: Some(eq),
    };
    ensure(check_standard_equality(base.equality.as_ref().unwrap()), || "mid equality rejected".into())?;
    let s = TwistStructure::new(m, base).map_err(|e| e.to_string())?;
    let f = parse_formula("*(c = c)", &s.base.signature()).unwrap();
    let v = qlfi1_value(&s, &f, &Assignment::new()).unwrap();
    ensure(!v.is_designated(), || format!("*(c = c) is {}", s.matrix.label(&v)))?;
    ensure(qlfi1_consequence(&[], &parse_formula("c = c", &s.base.signature()).unwrap(), &s).unwrap().holds(), || {
        "c = c is undesignated".into()
    })
}

fn script(logic: Logic, premises: &str, steps: &[(&str, &str)]) -> DerivationVerdict {
    let mut sig = Signature::new();
    let premises = parse_premises(premises, &mut sig).unwrap();
    let json: Vec<_> = steps.iter().map(|(f, by)| serde_json::json!({"formula": f, "by": by})).collect();
    let d = parse_proof_script(logic, premises, &serde_json::to_string(&json).unwrap(), &mut sig).unwrap();
    check_derivation(&d)
}

fn proof_checker() -> Outcome {
    let identity = script(
        Logic::MbC,
        "",
        &[
            ("p -> ((p -> p) -> p)", "axiom:A1"),
            ("(p -> ((p -> p) -> p)) -> ((p -> (p -> p)) -> (p -> p))", "axiom:A2"),
            ("(p -> (p -> p)) -> (p -> p)", "mp:1,2"),
            ("p -> (p -> p)", "axiom:A1"),
            ("p -> p", "mp:4,3"),
        ],
    );
    ensure(identity == DerivationVerdict::Valid(prop("p -> p")), || format!("identity: {identity}"))?;
    let explosion = script(
        Logic::MbC,
        "*p\np\n~p",
        &[
            ("*p -> (p -> (~p -> q))", "axiom:A11"),
            ("*p", "premise"),
            ("p -> (~p -> q)", "mp:2,1"),
            ("p", "premise"),
            ("~p -> q", "mp:4,3"),
            ("~p", "premise"),
            ("q", "mp:6,5"),
        ],
    );
    ensure(explosion == DerivationVerdict::Valid(prop("q")), || format!("explosion: {explosion}"))?;
    let forall_in = script(
        Logic::QmbC,
        "Q(c) -> P(x)",
        &[("Q(c) -> P(x)", "premise"), ("Q(c) -> forall x. P(x)", "forall-in:1")],
    );
    ensure(forall_in.is_valid(), || format!("forall-in: {forall_in}"))?;
    let bad = script(
        Logic::QmbC,
        "Q(x) -> P(x)",
        &[("Q(x) -> P(x)", "premise"), ("Q(x) -> forall x. P(x)", "forall-in:1")],
    );
    ensure(
        matches!(bad, DerivationVerdict::Invalid { step: 1, error: StepError::SideConditionViolated(_) }),
        || format!("bad forall-in: {bad}"),
    )?;
    let ax14 = script(Logic::Qlfi1o, "", &[("(forall x. P(x)) -> forall y. P(y)", "axiom:Ax14")]);
    ensure(
        matches!(ax14, DerivationVerdict::Invalid { step: 0, error: StepError::SchemaNotInLogic { .. } }),
        || format!("Ax14 under QLFI1o: {ax14}"),
    )
}

fn soundness_sampling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let swap = m5();
    let twist = lfi1_matrix();
    for logic in [Logic::MbC, Logic::Lfi1o] {
        for k in 0..50 {
            let d = random_derivation(logic, &["p", "q"], 10, &mut rng);
            let verdict = check_derivation(&d);
            let DerivationVerdict::Valid(c) = verdict else {
                return Err(format!("{logic} derivation {k} rejected: {verdict}"));
            };
            let ok = match logic {
                Logic::MbC => is_valid(&c, &swap).unwrap(),
                _ => lfi1_consequence(&[], &c, &twist).unwrap().holds(),
            };
            ensure(ok, || format!("{logic} derivation {k}: {c} is not valid"))?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("M5 golden tables", m5_tables, Some(1)),
        ("LFI1 golden tables", lfi1_tables, Some(1)),
        ("swap and twist cardinalities", cardinalities, Some(5)),
        ("LFI laws in M5", lfi_laws, Some(5)),
        ("LFI1o axioms over twist matrices", lfi1_axioms, Some(10)),
        ("M5 agrees with bivaluations", oracle_agreement, Some(60)),
        ("bivaluation translation", bivaluation_translation, None),
        ("first-order twist semantics", twist_first_order, Some(10)),
        ("non-classical equality", mid_equality, Some(1)),
        ("proof checker", proof_checker, Some(1)),
        ("soundness sampling", soundness_sampling, Some(60)),
    ];
    let mut failed = 0;
    for (n, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = result.and_then(|()| {
            match limit {
                Some(l) if elapsed > Duration::from_secs(*l) => Err(format!("took {elapsed:?}, limit {l} s")),
                _ => Ok(()),
            }
        });
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({:.3} s)", n + 1, elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({:.3} s): {why}", n + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
