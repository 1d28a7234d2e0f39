//! Independent two-valued reference engine used to cross-check the main
//! implementation on classical frameworks.
//!
//! Everything here is deliberately reimplemented from scratch: a separate
//! formula type, a three-valued interpretation type, the operator by
//! enumeration of full two-valued completions, brute-force semantics, and
//! the stable check via the false-value reduct. The only shared code is
//! the boundary conversion into a [`Framework`], which is what
//! [`check_embedding`] exercises.

use crate::formula::Formula;
use crate::framework::Framework;
use crate::operator::{EngineConfig, Interpretation};
use crate::semantics::{enumerate, parse_assumed_set, SemanticsError, SemanticsName};
use crate::valuation::{PartialValue, TruthValue, ValuationStructure};

/// Two-valued acceptance condition over statement indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassicalFormula {
    Top,
    Bot,
    Var(usize),
    And(Box<ClassicalFormula>, Box<ClassicalFormula>),
    Or(Box<ClassicalFormula>, Box<ClassicalFormula>),
    Not(Box<ClassicalFormula>),
}

impl ClassicalFormula {
    pub fn var(i: usize) -> Self {
        ClassicalFormula::Var(i)
    }

    pub fn and(l: Self, r: Self) -> Self {
        ClassicalFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Self, r: Self) -> Self {
        ClassicalFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn not(f: Self) -> Self {
        ClassicalFormula::Not(Box::new(f))
    }

    fn eval(&self, assign: &[bool]) -> bool {
        match self {
            ClassicalFormula::Top => true,
            ClassicalFormula::Bot => false,
            ClassicalFormula::Var(i) => assign[*i],
            ClassicalFormula::And(l, r) => l.eval(assign) && r.eval(assign),
            ClassicalFormula::Or(l, r) => l.eval(assign) || r.eval(assign),
            ClassicalFormula::Not(f) => !f.eval(assign),
        }
    }

    fn substitute_false(&self, removed: &[bool], remap: &[usize]) -> ClassicalFormula {
        match self {
            ClassicalFormula::Top => ClassicalFormula::Top,
            ClassicalFormula::Bot => ClassicalFormula::Bot,
            ClassicalFormula::Var(i) => {
                if removed[*i] {
                    ClassicalFormula::Bot
                } else {
                    ClassicalFormula::Var(remap[*i])
                }
            }
            ClassicalFormula::And(l, r) => ClassicalFormula::and(
                l.substitute_false(removed, remap),
                r.substitute_false(removed, remap),
            ),
            ClassicalFormula::Or(l, r) => ClassicalFormula::or(
                l.substitute_false(removed, remap),
                r.substitute_false(removed, remap),
            ),
            ClassicalFormula::Not(f) => {
                ClassicalFormula::not(f.substitute_false(removed, remap))
            }
        }
    }
}

/// A three-valued truth assignment in the reference engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    Unknown,
    False,
    True,
}

impl Tri {
    pub fn render(self) -> &'static str {
        match self {
            Tri::Unknown => "u",
            Tri::False => "f",
            Tri::True => "t",
        }
    }
}

fn leq_tri(x: Tri, y: Tri) -> bool {
    x == Tri::Unknown || x == y
}

/// A classical framework in the reference engine's own representation.
#[derive(Debug, Clone)]
pub struct ClassicalAdf {
    pub names: Vec<String>,
    pub conditions: Vec<ClassicalFormula>,
}

impl ClassicalAdf {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// The reference operator: each statement maps to the consensus of its
/// condition over every two-valued completion of the whole assignment.
pub fn classical_gamma(adf: &ClassicalAdf, v: &[Tri]) -> Vec<Tri> {
    let n = adf.len();
    let unknown: Vec<usize> =
        (0..n).filter(|&i| v[i] == Tri::Unknown).collect();
    let mut out = vec![Tri::Unknown; n];
    for s in 0..n {
        let mut any_true = false;
        let mut any_false = false;
        let mut assign: Vec<bool> = v.iter().map(|&t| t == Tri::True).collect();
        for mask in 0u64..(1u64 << unknown.len()) {
            for (k, &i) in unknown.iter().enumerate() {
                assign[i] = mask & (1 << k) != 0;
            }
            if adf.conditions[s].eval(&assign) {
                any_true = true;
            } else {
                any_false = true;
            }
            if any_true && any_false {
                break;
            }
        }
        out[s] = match (any_true, any_false) {
            (true, false) => Tri::True,
            (false, true) => Tri::False,
            _ => Tri::Unknown,
        };
    }
    out
}

/// Least fixpoint of the reference operator, from all-unknown.
pub fn classical_grounded(adf: &ClassicalAdf) -> Vec<Tri> {
    let mut v = vec![Tri::Unknown; adf.len()];
    for _ in 0..=adf.len() {
        let w = classical_gamma(adf, &v);
        if w == v {
            return v;
        }
        v = w;
    }
    unreachable!("the operator ascends and must reach its fixpoint");
}

fn classical_is_stable(adf: &ClassicalAdf, v: &[Tri]) -> bool {
    if v.iter().any(|&t| t == Tri::Unknown) {
        return false;
    }
    if classical_gamma(adf, v) != v {
        return false;
    }
    // Reduct over the true statements; false statements become constants.
    let removed: Vec<bool> = v.iter().map(|&t| t == Tri::False).collect();
    let mut remap = vec![usize::MAX; adf.len()];
    let mut names = Vec::new();
    let mut kept = Vec::new();
    for i in 0..adf.len() {
        if !removed[i] {
            remap[i] = names.len();
            names.push(adf.names[i].clone());
            kept.push(i);
        }
    }
    let conditions: Vec<ClassicalFormula> = kept
        .iter()
        .map(|&i| adf.conditions[i].substitute_false(&removed, &remap))
        .collect();
    let reduct = ClassicalAdf { names, conditions };
    classical_grounded(&reduct).iter().all(|&t| t == Tri::True)
}

/// All interpretation families of a classical framework, by brute force
/// over every three-valued assignment.
#[derive(Debug, Clone)]
pub struct OracleSemantics {
    pub admissible: Vec<Vec<Tri>>,
    pub complete: Vec<Vec<Tri>>,
    pub models: Vec<Vec<Tri>>,
    pub preferred: Vec<Vec<Tri>>,
    pub stable: Vec<Vec<Tri>>,
    pub grounded: Vec<Tri>,
}

pub fn classical_semantics(adf: &ClassicalAdf) -> OracleSemantics {
    let n = adf.len();
    let mut admissible = Vec::new();
    let mut complete = Vec::new();
    let mut models = Vec::new();
    let mut stable = Vec::new();
    let mut v = vec![Tri::Unknown; n];
    loop {
        let g = classical_gamma(adf, &v);
        let adm = v.iter().zip(&g).all(|(&x, &y)| leq_tri(x, y));
        if adm {
            admissible.push(v.clone());
        }
        if g == v {
            complete.push(v.clone());
            if v.iter().all(|&t| t != Tri::Unknown) {
                models.push(v.clone());
            }
        }
        if classical_is_stable(adf, &v) {
            stable.push(v.clone());
        }
        // Odometer over u < f < t per statement.
        let mut i = n;
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            v[i] = match v[i] {
                Tri::Unknown => Tri::False,
                Tri::False => Tri::True,
                Tri::True => {
                    v[i] = Tri::Unknown;
                    continue;
                }
            };
            break false;
        };
        if done {
            break;
        }
    }
    let preferred = admissible
        .iter()
        .filter(|v| {
            !admissible.iter().any(|w| {
                *v != w && v.iter().zip(w.iter()).all(|(&x, &y)| leq_tri(x, y))
            })
        })
        .cloned()
        .collect();
    OracleSemantics {
        admissible,
        complete,
        models,
        preferred,
        stable,
        grounded: classical_grounded(adf),
    }
}

fn to_formula(f: &ClassicalFormula, names: &[String], constants: &(Formula, Formula)) -> Formula {
    match f {
        ClassicalFormula::Top => constants.0.clone(),
        ClassicalFormula::Bot => constants.1.clone(),
        ClassicalFormula::Var(i) => Formula::Atom(names[*i].clone()),
        ClassicalFormula::And(l, r) => Formula::conj(
            to_formula(l, names, constants),
            to_formula(r, names, constants),
        ),
        ClassicalFormula::Or(l, r) => Formula::disj(
            to_formula(l, names, constants),
            to_formula(r, names, constants),
        ),
        ClassicalFormula::Not(f) => Formula::neg(to_formula(f, names, constants)),
    }
}

impl ClassicalAdf {
    /// The same framework over the two-valued structure of the main
    /// engine.
    pub fn to_classical_framework(&self) -> Result<Framework, SemanticsError> {
        let constants = (
            Formula::Const(TruthValue::Classical(true)),
            Formula::Const(TruthValue::Classical(false)),
        );
        let statements = self
            .names
            .iter()
            .zip(&self.conditions)
            .map(|(n, c)| (n.clone(), to_formula(c, &self.names, &constants)))
            .collect();
        Ok(Framework::new(ValuationStructure::classical(), statements)?)
    }

    /// The same framework over the flat unit structure, with 0/1
    /// constants.
    pub fn to_unit_framework(&self) -> Result<Framework, SemanticsError> {
        let constants = (
            Formula::Const(TruthValue::UnitReal(crate::rational::rat_one())),
            Formula::Const(TruthValue::UnitReal(crate::rational::rat_zero())),
        );
        let statements = self
            .names
            .iter()
            .zip(&self.conditions)
            .map(|(n, c)| (n.clone(), to_formula(c, &self.names, &constants)))
            .collect();
        Ok(Framework::new(ValuationStructure::unit_flat(), statements)?)
    }
}

/// A reference assignment as a main-engine interpretation over the
/// two-valued structure.
pub fn tri_to_classical(v: &[Tri]) -> Interpretation {
    Interpretation::from_values(
        v.iter()
            .map(|&t| match t {
                Tri::Unknown => PartialValue::Undefined,
                Tri::False => PartialValue::Defined(TruthValue::Classical(false)),
                Tri::True => PartialValue::Defined(TruthValue::Classical(true)),
            })
            .collect(),
    )
}

/// A reference assignment as a flat unit interpretation with degrees 0
/// and 1.
pub fn tri_to_unit(v: &[Tri]) -> Interpretation {
    Interpretation::from_values(
        v.iter()
            .map(|&t| match t {
                Tri::Unknown => PartialValue::Undefined,
                Tri::False => PartialValue::Defined(TruthValue::UnitReal(crate::rational::rat_zero())),
                Tri::True => PartialValue::Defined(TruthValue::UnitReal(crate::rational::rat_one())),
            })
            .collect(),
    )
}

fn render_rows(rows: &[Vec<Tri>]) -> Vec<String> {
    let mut out: Vec<String> = rows
        .iter()
        .map(|v| {
            v.iter().map(|t| t.render().to_string()).collect::<Vec<_>>().join(",")
        })
        .collect();
    out.sort();
    out
}

fn render_interps(rows: &[Interpretation]) -> Vec<String> {
    let mut out: Vec<String> = rows
        .iter()
        .map(|v| {
            v.values().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
        })
        .collect();
    out.sort();
    out
}

/// Runs all six semantics through the main engine and the reference
/// engine; returns one message per disagreement.
pub fn check_embedding(adf: &ClassicalAdf) -> Result<Vec<String>, SemanticsError> {
    let fw = adf.to_classical_framework()?;
    let cfg = EngineConfig::default();
    let oracle = classical_semantics(adf);
    let assumed = parse_assumed_set("{f}", &fw)?;
    let mut mismatches = Vec::new();
    let pairs: [(SemanticsName, &[Vec<Tri>]); 5] = [
        (SemanticsName::Admissible, &oracle.admissible),
        (SemanticsName::Complete, &oracle.complete),
        (SemanticsName::Model, &oracle.models),
        (SemanticsName::Preferred, &oracle.preferred),
        (SemanticsName::Stable, &oracle.stable),
    ];
    for (sem, expected) in pairs {
        let assumed = (sem == SemanticsName::Stable).then_some(&assumed);
        let got = enumerate(&fw, sem, assumed, &cfg)?;
        let got = render_interps(&got);
        let want = render_rows(expected);
        if got != want {
            mismatches.push(format!("{sem}: engine {got:?}, reference {want:?}"));
        }
    }
    let got = render_interps(&enumerate(&fw, SemanticsName::Grounded, None, &cfg)?);
    let want = render_rows(std::slice::from_ref(&oracle.grounded));
    if got != want {
        mismatches.push(format!("grd: engine {got:?}, reference {want:?}"));
    }
    Ok(mismatches)
}
