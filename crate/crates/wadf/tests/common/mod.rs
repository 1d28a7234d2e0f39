// Shared generators for the integration test binaries.
#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wadf::oracle::{ClassicalAdf, ClassicalFormula};
use wadf::valuation::{BinaryConnDecl, CustomDecl};
use wadf::{Formula, Framework, Interpretation, PartialValue, TruthValue, ValuationStructure};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Six-value acceptance scale ordered by how committed a review verdict is.
pub fn review_structure() -> ValuationStructure {
    let decl = CustomDecl {
        values: ["no_tendency", "tendency_accept", "tendency_reject", "accept", "borderline", "reject"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        order: [
            ("no_tendency", "tendency_accept"),
            ("no_tendency", "tendency_reject"),
            ("tendency_accept", "accept"),
            ("tendency_accept", "borderline"),
            ("tendency_reject", "borderline"),
            ("tendency_reject", "reject"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect(),
        conj: Some(BinaryConnDecl::InfoMeet),
        disj: None,
        neg: None,
    };
    ValuationStructure::custom(decl).expect("review structure is well formed")
}

/// Peer-review framework: two fixed verdicts and their conjunction.
pub fn review_framework() -> Framework {
    let text = "\
structure custom
value no_tendency
value tendency_accept
value tendency_reject
value accept
value borderline
value reject
order no_tendency < tendency_accept
order no_tendency < tendency_reject
order tendency_accept < accept
order tendency_accept < borderline
order tendency_reject < borderline
order tendency_reject < reject
conj = info-meet
statement a: s & m
statement s: #accept
statement m: #borderline
";
    wadf::parse_framework(text).expect("review framework parses")
}

/// Random formula with at most `leaves` leaf nodes, drawing atoms from
/// `atoms` and constants from `constants`.
pub fn random_formula(
    r: &mut ChaCha8Rng,
    atoms: &[String],
    constants: &[TruthValue],
    leaves: usize,
) -> Formula {
    random_formula_conn(r, atoms, constants, leaves, true, true)
}

/// As `random_formula`, but only using the connectives the target
/// structure declares.
pub fn random_formula_conn(
    r: &mut ChaCha8Rng,
    atoms: &[String],
    constants: &[TruthValue],
    leaves: usize,
    disj: bool,
    neg: bool,
) -> Formula {
    if leaves <= 1 {
        return random_leaf(r, atoms, constants);
    }
    loop {
        match r.gen_range(0..4u32) {
            0 => return random_leaf(r, atoms, constants),
            1 if neg => {
                return Formula::neg(random_formula_conn(r, atoms, constants, leaves, disj, neg))
            }
            2 => {
                let left = r.gen_range(1..leaves);
                return Formula::conj(
                    random_formula_conn(r, atoms, constants, left, disj, neg),
                    random_formula_conn(r, atoms, constants, leaves - left, disj, neg),
                );
            }
            3 if disj => {
                let left = r.gen_range(1..leaves);
                return Formula::disj(
                    random_formula_conn(r, atoms, constants, left, disj, neg),
                    random_formula_conn(r, atoms, constants, leaves - left, disj, neg),
                );
            }
            _ => {}
        }
    }
}

fn random_leaf(r: &mut ChaCha8Rng, atoms: &[String], constants: &[TruthValue]) -> Formula {
    if !constants.is_empty() && r.gen_bool(0.25) {
        Formula::Const(constants[r.gen_range(0..constants.len())].clone())
    } else {
        Formula::atom(&atoms[r.gen_range(0..atoms.len())])
    }
}

/// Random framework over `st` with `n` statements named s0, s1, ...
pub fn random_framework(
    r: &mut ChaCha8Rng,
    st: ValuationStructure,
    n: usize,
    leaves: usize,
    constants: &[TruthValue],
) -> Framework {
    let ids: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let disj = st.has_disj();
    let neg = st.has_neg();
    let statements = ids
        .iter()
        .map(|id| (id.clone(), random_formula_conn(r, &ids, constants, leaves, disj, neg)))
        .collect();
    Framework::new(st, statements).expect("generated framework is valid")
}

/// Random interpretation; each coordinate is u with probability ~1/3,
/// otherwise drawn from `values`.
pub fn random_partial(
    r: &mut ChaCha8Rng,
    n: usize,
    values: &[TruthValue],
) -> Interpretation {
    let vals = (0..n)
        .map(|_| {
            if r.gen_bool(1.0 / 3.0) {
                PartialValue::Undefined
            } else {
                PartialValue::Defined(values[r.gen_range(0..values.len())].clone())
            }
        })
        .collect();
    Interpretation::from_values(vals)
}

/// Copy of `v` with a random subset of coordinates forgotten, so the
/// result is information-below `v`.
pub fn downgrade(r: &mut ChaCha8Rng, v: &Interpretation) -> Interpretation {
    let vals = v
        .values()
        .iter()
        .map(|pv| {
            if r.gen_bool(0.4) {
                PartialValue::Undefined
            } else {
                pv.clone()
            }
        })
        .collect();
    Interpretation::from_values(vals)
}

/// Random two-valued acceptance formula over variables 0..n.
pub fn random_classical_formula(
    r: &mut ChaCha8Rng,
    n: usize,
    leaves: usize,
    allow_consts: bool,
) -> ClassicalFormula {
    if leaves <= 1 {
        return if allow_consts && r.gen_bool(0.2) {
            if r.gen_bool(0.5) {
                ClassicalFormula::Top
            } else {
                ClassicalFormula::Bot
            }
        } else {
            ClassicalFormula::var(r.gen_range(0..n))
        };
    }
    match r.gen_range(0..4u32) {
        0 => random_classical_formula(r, n, 1, allow_consts),
        1 => ClassicalFormula::not(random_classical_formula(r, n, leaves, allow_consts)),
        2 => {
            let left = r.gen_range(1..leaves);
            ClassicalFormula::and(
                random_classical_formula(r, n, left, allow_consts),
                random_classical_formula(r, n, leaves - left, allow_consts),
            )
        }
        _ => {
            let left = r.gen_range(1..leaves);
            ClassicalFormula::or(
                random_classical_formula(r, n, left, allow_consts),
                random_classical_formula(r, n, leaves - left, allow_consts),
            )
        }
    }
}

pub fn random_classical_adf(
    r: &mut ChaCha8Rng,
    n: usize,
    leaves: usize,
    allow_consts: bool,
) -> ClassicalAdf {
    ClassicalAdf {
        names: (0..n).map(|i| format!("s{i}")).collect(),
        conditions: (0..n)
            .map(|_| random_classical_formula(r, n, leaves, allow_consts))
            .collect(),
    }
}
