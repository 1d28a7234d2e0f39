// End-to-end checks of the documented behavior, one test per criterion.
// Each test prints a single pass/fail line (visible with --nocapture).

mod common;

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};

use common::*;
use rand::Rng;
use wadf::oracle::{check_embedding, classical_gamma, classical_grounded, tri_to_unit, Tri};
use wadf::operator::completion_count;
use wadf::rational::{rat, Rat};
use wadf::semantics::{
    enumerate, grounded, is_admissible, is_complete, is_model, is_preferred, is_stable,
    parse_assumed_set, reduct,
};
use wadf::valuation::PartialValue::{Defined, Undefined};
use wadf::{
    gamma, parse_framework, EngineConfig, Framework, Interpretation, PartialValue, SemanticsName,
    StableVerdict, TruthValue, ValuationStructure,
};

fn criterion<F: FnOnce()>(name: &str, body: F) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("{name}: pass"),
        Err(e) => {
            println!("{name}: fail");
            resume_unwind(e);
        }
    }
}

fn cfg() -> EngineConfig {
    EngineConfig::default()
}

fn interp(fw: &Framework, vals: &[&str]) -> Interpretation {
    let st = fw.structure();
    Interpretation::from_values(
        vals.iter()
            .map(|s| st.parse_partial_value(s).unwrap_or_else(|e| panic!("value {s}: {e}")))
            .collect(),
    )
}

fn same_set(got: &[Interpretation], want: &[Interpretation]) -> bool {
    got.len() == want.len()
        && want.iter().all(|w| got.contains(w))
        && got.iter().all(|g| want.contains(g))
}

fn uv(n: i64, d: i64) -> PartialValue {
    Defined(TruthValue::unit(rat(n, d)))
}

/// Cartesian product of per-coordinate candidate pools.
fn pool_product(pools: &[Vec<PartialValue>]) -> Vec<Interpretation> {
    let mut out = Vec::new();
    let n = pools.len();
    let mut idx = vec![0usize; n];
    loop {
        out.push(Interpretation::from_values(
            (0..n).map(|i| pools[i][idx[i]].clone()).collect(),
        ));
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < pools[i].len() {
                break;
            }
            idx[i] = 0;
        }
        if idx.iter().all(|&k| k == 0) {
            return out;
        }
    }
}

const MUTUAL_ATTACK: &str = "\
structure classical
statement a: a | !b
statement b: !a
";

const UNIT_FLAT_NET: &str = "\
structure unit-flat
statement a: 0.8
statement b: !b
statement c: a & b
statement d: !b | 0.6
";

const UNIT_REFINED_NET: &str = "\
structure unit-refined
statement a: 0.8
statement b: !b
statement c: a & b
statement d: !b | 0.6
";

const TAUTOLOGY_PAIR: &str = "\
structure unit-flat
statement a: a
statement b: a | !a
";

#[test]
fn criterion_01_classical_mutual_attack_families() {
    criterion("criterion 01 (classical two-statement families)", || {
        let fw = parse_framework(MUTUAL_ATTACK).unwrap();
        let c = cfg();
        let v = |a: &str, b: &str| interp(&fw, &[a, b]);
        let v1 = v("u", "u");
        let v2 = v("t", "u");
        let v3 = v("t", "f");
        let v4 = v("f", "t");

        let adm = enumerate(&fw, SemanticsName::Admissible, None, &c).unwrap();
        assert!(same_set(&adm, &[v1.clone(), v2.clone(), v3.clone(), v4.clone()]), "adm = {{v1..v4}}");

        let com = enumerate(&fw, SemanticsName::Complete, None, &c).unwrap();
        assert!(same_set(&com, &[v1.clone(), v3.clone(), v4.clone()]), "com = {{v1,v3,v4}}");

        let prf = enumerate(&fw, SemanticsName::Preferred, None, &c).unwrap();
        assert!(same_set(&prf, &[v3.clone(), v4.clone()]), "prf = {{v3,v4}}");

        assert_eq!(gamma(&fw, &v2, &c).unwrap(), v3, "one application refines v2 to v3");
    });
}

#[test]
fn criterion_02_review_scale_unique_outcome() {
    criterion("criterion 02 (review-scale completion count and unique outcome)", || {
        let fw = review_framework();
        let c = cfg();
        let v = interp(&fw, &["tendency_accept", "accept", "borderline"]);

        assert_eq!(completion_count(&fw, &v).unwrap(), Some(3), "three completions of v");

        let com = enumerate(&fw, SemanticsName::Complete, None, &c).unwrap();
        assert_eq!(com, vec![v.clone()], "unique complete interpretation");
        let md = enumerate(&fw, SemanticsName::Model, None, &c).unwrap();
        assert_eq!(md, vec![v.clone()], "unique model");
        let prf = enumerate(&fw, SemanticsName::Preferred, None, &c).unwrap();
        assert_eq!(prf, vec![v.clone()], "unique preferred interpretation");
        let (g, _) = grounded(&fw, &c).unwrap();
        assert_eq!(g, v, "grounded equals the unique complete interpretation");
    });
}

#[test]
fn criterion_03_unit_flat_degree_network() {
    criterion("criterion 03 (unit-flat degree network)", || {
        let fw = parse_framework(UNIT_FLAT_NET).unwrap();
        let c = cfg();
        let v1 = Interpretation::from_values(vec![uv(4, 5), Undefined, Undefined, Undefined]);
        let v2 = Interpretation::from_values(vec![uv(4, 5), uv(1, 2), uv(1, 2), uv(3, 5)]);

        let (g, steps) = grounded(&fw, &c).unwrap();
        assert_eq!(g, v1, "grounded fixes a to 0.8 and leaves the rest open");
        assert_eq!(steps, 2);

        assert!(is_model(&fw, &v2, &c).unwrap(), "v2 is a model");

        let closed = parse_assumed_set("[0,0.5]", &fw).unwrap();
        let open = parse_assumed_set("[0,0.5[", &fw).unwrap();
        assert_eq!(is_stable(&fw, &v2, &closed, &c).unwrap(), StableVerdict::Stable);
        assert_eq!(
            is_stable(&fw, &v2, &open, &c).unwrap(),
            StableVerdict::NotStable { witness: "b".to_string() }
        );

        let red = reduct(&fw, &v2, &closed).unwrap();
        assert_eq!(red.ids(), ["a", "d"], "reduct keeps the statements above the assumed set");
        assert_eq!(red.acceptance(0).render(), "0.8");
        assert_eq!(red.acceptance(1).render(), "0.5 | 0.6");

        // Admissibility is characterized coordinatewise; check the
        // characterization on boundary values and a sampled grid.
        let pred = |v: &Interpretation| {
            let (a, b, cc, d) = (v.get(0), v.get(1), v.get(2), v.get(3));
            (*a == Undefined || *a == uv(4, 5))
                && (*b == Undefined || *b == uv(1, 2))
                && (*cc == Undefined
                    || (*cc == uv(1, 2) && *a == uv(4, 5) && *b == uv(1, 2)))
                && (*d == Undefined || (*d == uv(3, 5) && *b == uv(1, 2)))
        };

        let boundary: Vec<PartialValue> =
            vec![Undefined, uv(0, 1), uv(1, 2), uv(3, 5), uv(4, 5), uv(1, 1)];
        let pools = vec![boundary.clone(), boundary.clone(), boundary.clone(), boundary];
        let mut candidates = pool_product(&pools);
        let mut r = rng(301);
        while candidates.len() < 1296 + 200 {
            let vals = (0..4)
                .map(|_| {
                    if r.gen_bool(0.3) {
                        Undefined
                    } else {
                        uv(r.gen_range(0..=20), 20)
                    }
                })
                .collect();
            candidates.push(Interpretation::from_values(vals));
        }
        assert!(candidates.len() >= 1496);
        for v in &candidates {
            assert_eq!(
                is_admissible(&fw, v, &c).unwrap(),
                pred(v),
                "admissibility characterization at {v}"
            );
            assert_eq!(
                is_complete(&fw, v, &c).unwrap(),
                *v == v1 || *v == v2,
                "the only complete interpretations are v1 and v2 (at {v})"
            );
            if v.is_total() {
                assert_eq!(is_model(&fw, v, &c).unwrap(), *v == v2, "unique model (at {v})");
            }
        }
    });
}

#[test]
fn criterion_04_unit_refined_degree_network() {
    criterion("criterion 04 (unit-refined degree network)", || {
        let fw = parse_framework(UNIT_REFINED_NET).unwrap();
        let c = cfg();
        let vstar = Interpretation::from_values(vec![uv(4, 5), uv(1, 2), uv(1, 2), uv(3, 5)]);

        let (g, steps) = grounded(&fw, &c).unwrap();
        assert_eq!(g, vstar, "refined ordering grounds every statement");
        assert!(steps <= c.resolved_max_steps(&fw), "within the step guard");

        let closed = parse_assumed_set("[0,0.5]", &fw).unwrap();
        let open = parse_assumed_set("[0,0.5[", &fw).unwrap();
        assert_eq!(is_stable(&fw, &vstar, &closed, &c).unwrap(), StableVerdict::Stable);
        assert_eq!(is_stable(&fw, &vstar, &open, &c).unwrap(), StableVerdict::Stable);

        let half = rat(1, 2);
        let in_closed = |x: &PartialValue, lo: &Rat, hi: &Rat| match x {
            Defined(t) => {
                let q = t.numeric().unwrap();
                *lo <= q && q <= *hi
            }
            Undefined => false,
        };
        let pred = |v: &Interpretation| {
            let (a, b, cc, d) = (v.get(0), v.get(1), v.get(2), v.get(3));
            (*a == Undefined || in_closed(a, &half, &rat(4, 5)))
                && (*b == Undefined || *b == uv(1, 2))
                && (*cc == Undefined || *cc == uv(1, 2))
                && (*d == Undefined || in_closed(d, &half, &rat(3, 5)))
        };

        let pool: Vec<PartialValue> = vec![
            Undefined,
            uv(0, 1),
            uv(1, 4),
            uv(1, 2),
            uv(11, 20),
            uv(3, 5),
            uv(7, 10),
            uv(4, 5),
            uv(9, 10),
            uv(1, 1),
        ];
        let pools = vec![pool.clone(), pool.clone(), pool.clone(), pool];
        let candidates = pool_product(&pools);
        assert_eq!(candidates.len(), 10_000);
        for v in &candidates {
            assert_eq!(
                is_admissible(&fw, v, &c).unwrap(),
                pred(v),
                "admissible-set characterization at {v}"
            );
            assert_eq!(
                is_complete(&fw, v, &c).unwrap(),
                *v == vstar,
                "unique complete interpretation among candidates (at {v})"
            );
            if v.is_total() {
                assert_eq!(is_model(&fw, v, &c).unwrap(), *v == vstar, "unique model (at {v})");
            }
        }
    });
}

#[test]
fn criterion_05_tautology_gap() {
    criterion("criterion 05 (two-valued tautology is not a weighted one)", || {
        let fw = parse_framework(TAUTOLOGY_PAIR).unwrap();
        let c = cfg();
        let (g, _) = grounded(&fw, &c).unwrap();
        assert_eq!(
            g,
            Interpretation::from_values(vec![Undefined, Undefined]),
            "weighted grounded leaves b open"
        );

        let adf = wadf::oracle::ClassicalAdf {
            names: vec!["a".into(), "b".into()],
            conditions: vec![
                wadf::oracle::ClassicalFormula::var(0),
                wadf::oracle::ClassicalFormula::or(
                    wadf::oracle::ClassicalFormula::var(0),
                    wadf::oracle::ClassicalFormula::not(wadf::oracle::ClassicalFormula::var(0)),
                ),
            ],
        };
        assert_eq!(
            classical_grounded(&adf),
            vec![Tri::Unknown, Tri::True],
            "two-valued grounded accepts b"
        );

        // The engine agrees when run over the two-valued structure.
        let fw2 = parse_framework("structure classical\nstatement a: a\nstatement b: a | !a\n")
            .unwrap();
        let (g2, _) = grounded(&fw2, &c).unwrap();
        assert_eq!(g2, interp(&fw2, &["u", "t"]));
    });
}

#[test]
fn criterion_06_finite_structure_property_corpus() {
    criterion("criterion 06 (finite-structure property corpus)", || {
        let c = cfg();
        let mut r = rng(601);
        let specs: Vec<(ValuationStructure, usize, usize)> = vec![
            (ValuationStructure::classical(), 5, 3),
            (ValuationStructure::levels(3).unwrap(), 4, 3),
            (ValuationStructure::belnap(), 4, 2),
            (review_structure(), 3, 2),
            (ValuationStructure::interval_grid(3).unwrap(), 3, 2),
        ];
        let mut checked = 0usize;
        for _ in 0..100 {
            for (st, max_n, leaves) in &specs {
                let n = r.gen_range(1..=*max_n);
                let consts = st.enumerate_values().unwrap().to_vec();
                let fw = random_framework(&mut r, st.clone(), n, *leaves, &consts);

                // Monotonicity of the operator.
                let w = random_partial(&mut r, n, &consts);
                let v = downgrade(&mut r, &w);
                let gv = gamma(&fw, &v, &c).unwrap();
                let gw = gamma(&fw, &w, &c).unwrap();
                assert!(gv.leq(&gw, st).unwrap(), "monotone on {}", st.kind_name());

                let adm = enumerate(&fw, SemanticsName::Admissible, None, &c).unwrap();
                let com = enumerate(&fw, SemanticsName::Complete, None, &c).unwrap();
                let md = enumerate(&fw, SemanticsName::Model, None, &c).unwrap();
                let prf = enumerate(&fw, SemanticsName::Preferred, None, &c).unwrap();

                // Family inclusions.
                for x in &md {
                    assert!(com.contains(x), "models are complete");
                }
                for x in &prf {
                    assert!(com.contains(x), "preferred interpretations are complete");
                }
                for x in &com {
                    assert!(adm.contains(x), "complete interpretations are admissible");
                }
                if st.is_flat() {
                    for x in &md {
                        assert!(prf.contains(x), "models are preferred on flat structures");
                    }
                }

                // The grounded interpretation is the least complete one,
                // and complete interpretations admit pairwise meets.
                let (g, _) = grounded(&fw, &c).unwrap();
                assert!(com.contains(&g), "grounded is complete");
                for x in &com {
                    assert!(g.leq(x, st).unwrap(), "grounded is least");
                }
                let pairs: Vec<(usize, usize)> = if com.len() <= 12 {
                    (0..com.len())
                        .flat_map(|i| (i..com.len()).map(move |j| (i, j)))
                        .collect()
                } else {
                    (0..40)
                        .map(|_| (r.gen_range(0..com.len()), r.gen_range(0..com.len())))
                        .collect()
                };
                for (i, j) in pairs {
                    let lows: Vec<&Interpretation> = com
                        .iter()
                        .filter(|z| z.leq(&com[i], st).unwrap() && z.leq(&com[j], st).unwrap())
                        .collect();
                    // `lows` is nonempty: the grounded interpretation is below every pair.
                    let greatest = lows
                        .iter()
                        .any(|m| lows.iter().all(|z| z.leq(m, st).unwrap()));
                    assert!(greatest, "complete pair has a meet among complete interpretations");
                }

                // Acyclic frameworks have a single outcome.
                if fw.is_acyclic() {
                    assert_eq!(com, vec![g.clone()], "acyclic: unique complete interpretation");
                    assert_eq!(prf, com, "acyclic: preferred equals complete");
                }

                checked += 1;
            }
        }
        assert!(checked >= 500, "corpus size {checked}");
    });
}

#[test]
fn criterion_07_classical_oracle_embedding() {
    criterion("criterion 07 (two-valued oracle embedding)", || {
        let mut r = rng(701);
        for i in 0..500 {
            let n = r.gen_range(1..=6usize);
            let adf = random_classical_adf(&mut r, n, 4, true);
            let diffs = check_embedding(&adf).unwrap();
            assert!(diffs.is_empty(), "case {i}: {diffs:?}");
        }
    });
}

#[test]
fn criterion_08_unit_flat_definedness_vs_two_valued() {
    criterion("criterion 08 (unit-flat definedness agrees with the two-valued operator)", || {
        let c = cfg();
        let mut r = rng(801);
        for i in 0..200 {
            let n = r.gen_range(1..=4usize);
            let adf = random_classical_adf(&mut r, n, 3, true);
            let fw = adf.to_unit_framework().unwrap();
            let tri: Vec<Tri> = (0..n)
                .map(|_| match r.gen_range(0..3u32) {
                    0 => Tri::Unknown,
                    1 => Tri::False,
                    _ => Tri::True,
                })
                .collect();
            let cg = classical_gamma(&adf, &tri);
            let ug = gamma(&fw, &tri_to_unit(&tri), &c).unwrap();
            for s in 0..n {
                match ug.get(s) {
                    Defined(t) => {
                        let q = t.numeric().unwrap();
                        // A defined unit value forces the same two-valued verdict.
                        if q == rat(1, 1) {
                            assert_eq!(cg[s], Tri::True, "case {i} statement {s}");
                        } else if q == rat(0, 1) {
                            assert_eq!(cg[s], Tri::False, "case {i} statement {s}");
                        } else {
                            panic!("case {i}: defined value {q} outside {{0,1}}");
                        }
                    }
                    Undefined => {}
                }
                if cg[s] == Tri::Unknown {
                    assert!(
                        ug.get(s).is_undefined(),
                        "case {i} statement {s}: two-valued u forces unit u"
                    );
                }
            }
        }
    });
}

#[test]
fn criterion_09_eighth_grid_completion_oracle() {
    criterion("criterion 09 (eighth-grid completion oracle)", || {
        let c = cfg();
        let st = ValuationStructure::unit_flat();
        let consts: Vec<TruthValue> = (0..=8).map(|k| TruthValue::unit(rat(k, 8))).collect();
        let grid: Vec<TruthValue> = consts.clone();
        let mut r = rng(901);
        for i in 0..200 {
            let n = r.gen_range(1..=4usize);
            let fw = random_framework(&mut r, st.clone(), n, 4, &consts);
            let v = random_partial(&mut r, n, &grid);
            let g = gamma(&fw, &v, &c).unwrap();

            // Exhaustive grid completions of v.
            let pools: Vec<Vec<TruthValue>> = (0..n)
                .map(|s| match v.get(s) {
                    Defined(t) => vec![t.clone()],
                    Undefined => grid.clone(),
                })
                .collect();
            let mut idx = vec![0usize; n];
            let mut values: Vec<Vec<Rat>> = vec![Vec::new(); n];
            loop {
                let assign = |name: &str| {
                    fw.index_of(name).map(|k| pools[k][idx[k]].clone())
                };
                for s in 0..n {
                    let val = fw
                        .acceptance(s)
                        .evaluate(&st, &assign)
                        .unwrap()
                        .numeric()
                        .unwrap();
                    if !values[s].contains(&val) {
                        values[s].push(val);
                    }
                }
                let mut k = n;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < pools[k].len() {
                        break;
                    }
                    idx[k] = 0;
                }
                if idx.iter().all(|&x| x == 0) {
                    break;
                }
            }

            for s in 0..n {
                match g.get(s) {
                    Defined(t) => {
                        let q = t.numeric().unwrap();
                        assert_eq!(
                            values[s],
                            vec![q.clone()],
                            "case {i}: every grid completion confirms the defined value"
                        );
                    }
                    Undefined => {}
                }
                if values[s].len() > 1 {
                    assert!(
                        g.get(s).is_undefined(),
                        "case {i}: grid disagreement forces an undefined consensus"
                    );
                }
            }
        }
    });
}

#[test]
fn criterion_10_threshold_transfer() {
    criterion("criterion 10 (two-valued satisfaction transfers across 0.5)", || {
        let classical = ValuationStructure::classical();
        let unit = ValuationStructure::unit_flat();
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let half = rat(1, 2);
        let mut r = rng(1001);
        for i in 0..500 {
            let n = r.gen_range(1..=4usize);
            let atoms = names[..n].to_vec();
            let f = random_formula(&mut r, &atoms, &[], 6);
            let v: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
            let w: Vec<Rat> = v
                .iter()
                .map(|&b| {
                    if b {
                        rat(8 + r.gen_range(0..=8i64), 16)
                    } else {
                        rat(r.gen_range(0..=8i64), 16)
                    }
                })
                .collect();
            let pos = |name: &str| atoms.iter().position(|a| a == name);
            let cv = f
                .evaluate(&classical, &|name: &str| {
                    pos(name).map(|k| TruthValue::Classical(v[k]))
                })
                .unwrap();
            let uvl = f
                .evaluate(&unit, &|name: &str| {
                    pos(name).map(|k| TruthValue::unit(w[k].clone()))
                })
                .unwrap()
                .numeric()
                .unwrap();
            match cv {
                TruthValue::Classical(true) => {
                    assert!(uvl >= half, "case {i}: satisfied formulas stay at or above 0.5")
                }
                TruthValue::Classical(false) => {
                    assert!(uvl <= half, "case {i}: falsified formulas stay at or below 0.5")
                }
                other => panic!("case {i}: two-valued evaluation returned {other}"),
            }
        }
    });
}

#[test]
fn criterion_11_non_flat_model_not_preferred() {
    criterion("criterion 11 (non-flat model that is not preferred)", || {
        let st = review_structure();
        let fw = Framework::new(st, vec![("a".to_string(), wadf::Formula::atom("a"))]).unwrap();
        let c = cfg();
        let v = interp(&fw, &["tendency_accept"]);
        let w = interp(&fw, &["accept"]);
        assert!(is_model(&fw, &v, &c).unwrap(), "self-supporting value is a model");
        assert!(!is_preferred(&fw, &v, &c).unwrap(), "a strictly stronger model exists");
        assert!(is_model(&fw, &w, &c).unwrap());
        assert!(v.leq(&w, fw.structure()).unwrap() && v != w);
    });
}
