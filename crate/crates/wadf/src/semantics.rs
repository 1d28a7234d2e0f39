//! Semantics of frameworks: admissible, complete, model, grounded,
//! preferred, and stable interpretations, plus enumeration and
//! credulous/skeptical queries.
//!
//! Checks against a single interpretation work on any structure the
//! operator supports. Enumeration and the preferred semantics need a
//! finite value universe; the grounded semantics is computed by fixpoint
//! iteration everywhere.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::Formula;
use crate::framework::{Framework, FrameworkError};
use crate::operator::{
    gamma, kleene_iterate, EngineConfig, Interpretation, IterationOutcome, OperatorError,
};
use crate::rational::{in_unit, parse_rat, render_rat, Rat};
use crate::valuation::{PartialValue, TruthValue, ValueError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemanticsName {
    Admissible,
    Complete,
    Model,
    Grounded,
    Preferred,
    Stable,
}

impl SemanticsName {
    pub const ALL: [SemanticsName; 6] = [
        SemanticsName::Admissible,
        SemanticsName::Complete,
        SemanticsName::Model,
        SemanticsName::Grounded,
        SemanticsName::Preferred,
        SemanticsName::Stable,
    ];

    pub fn short(&self) -> &'static str {
        match self {
            SemanticsName::Admissible => "adm",
            SemanticsName::Complete => "com",
            SemanticsName::Model => "mod",
            SemanticsName::Grounded => "grd",
            SemanticsName::Preferred => "prf",
            SemanticsName::Stable => "stb",
        }
    }
}

impl fmt::Display for SemanticsName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

impl FromStr for SemanticsName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "adm" | "admissible" => Ok(SemanticsName::Admissible),
            "com" | "complete" => Ok(SemanticsName::Complete),
            "mod" | "model" => Ok(SemanticsName::Model),
            "grd" | "grounded" => Ok(SemanticsName::Grounded),
            "prf" | "preferred" => Ok(SemanticsName::Preferred),
            "stb" | "stable" => Ok(SemanticsName::Stable),
            other => Err(format!("unknown semantics {other:?}")),
        }
    }
}

#[derive(Debug, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("{operation} is not supported on the {structure} structure")]
    Unsupported { operation: String, structure: String },
    #[error("operator iteration did not converge within {limit} steps")]
    NonConvergence { limit: u64 },
    #[error("interpretation leaves statement {statement} undefined, but a total one is required")]
    NotTotal { statement: String },
    #[error("unknown statement {0}")]
    UnknownStatement(String),
    #[error("the stable semantics needs an assumed value set")]
    MissingAssumedSet,
    #[error("cannot parse assumed value set: {0}")]
    BadAssumedSet(String),
    #[error("cannot parse predicate {0:?}; expected eq:<value>, ge:<degree>, or le:<degree>")]
    BadPredicate(String),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error(transparent)]
    Value(#[from] ValueError),
}

/// An interval of assumed degrees with individually open or closed ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeInterval {
    pub lo: Rat,
    pub lo_closed: bool,
    pub hi: Rat,
    pub hi_closed: bool,
}

impl DegreeInterval {
    pub fn contains(&self, r: &Rat) -> bool {
        let above = *r > self.lo || (self.lo_closed && *r == self.lo);
        let below = *r < self.hi || (self.hi_closed && *r == self.hi);
        above && below
    }
}

impl fmt::Display for DegreeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            render_rat(&self.lo),
            render_rat(&self.hi),
            if self.hi_closed { ']' } else { ')' },
        )
    }
}

/// The set of truth values treated as "assumed" when building a reduct:
/// either an explicit list or a union of degree intervals on the unit
/// structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssumedValueSet {
    Explicit(Vec<TruthValue>),
    Intervals(Vec<DegreeInterval>),
}

impl AssumedValueSet {
    pub fn contains(&self, v: &TruthValue) -> bool {
        match self {
            AssumedValueSet::Explicit(vs) => vs.contains(v),
            AssumedValueSet::Intervals(is) => match v {
                TruthValue::UnitReal(r) => is.iter().any(|i| i.contains(r)),
                _ => false,
            },
        }
    }
}

impl fmt::Display for AssumedValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssumedValueSet::Explicit(vs) => {
                write!(f, "{{")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "}}")
            }
            AssumedValueSet::Intervals(is) => {
                for (i, iv) in is.iter().enumerate() {
                    if i > 0 {
                        write!(f, " u ")?;
                    }
                    write!(f, "{iv}")?;
                }
                Ok(())
            }
        }
    }
}

fn parse_degree_interval(part: &str) -> Result<DegreeInterval, SemanticsError> {
    let bad = || SemanticsError::BadAssumedSet(format!("malformed interval {part:?}"));
    let part = part.trim();
    let mut chars = part.chars();
    // A leading ']' or trailing '[' marks an open end, as in ]0,0.5] and
    // [0,0.5[.
    let lo_closed = match chars.next() {
        Some('[') => true,
        Some('(') | Some(']') => false,
        _ => return Err(bad()),
    };
    let hi_closed = match chars.next_back() {
        Some(']') => true,
        Some(')') | Some('[') => false,
        _ => return Err(bad()),
    };
    let inner = chars.as_str();
    let (lo, hi) = inner.split_once(',').ok_or_else(bad)?;
    let lo = parse_rat(lo).ok_or_else(bad)?;
    let hi = parse_rat(hi).ok_or_else(bad)?;
    if !in_unit(&lo) || !in_unit(&hi) || lo > hi {
        return Err(SemanticsError::BadAssumedSet(format!(
            "interval {part:?} does not describe degrees between 0 and 1"
        )));
    }
    Ok(DegreeInterval { lo, lo_closed, hi, hi_closed })
}

/// Parses an assumed value set: `{v1, v2}` lists values of the structure;
/// interval unions such as `[0,0.5] u (0.7,1]` describe degrees and are
/// available on the unit structures only.
pub fn parse_assumed_set(
    text: &str,
    fw: &Framework,
) -> Result<AssumedValueSet, SemanticsError> {
    let text = text.trim();
    if let Some(inner) = text.strip_prefix('{') {
        let inner = inner
            .strip_suffix('}')
            .ok_or_else(|| SemanticsError::BadAssumedSet("missing closing '}'".to_string()))?;
        let mut values = Vec::new();
        for part in inner.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(SemanticsError::BadAssumedSet("empty value in list".to_string()));
            }
            values.push(fw.structure().parse_value(part)?);
        }
        return Ok(AssumedValueSet::Explicit(values));
    }
    if !fw.structure().is_unit() {
        return Err(SemanticsError::Unsupported {
            operation: "interval assumed value sets".to_string(),
            structure: fw.structure().kind_name(),
        });
    }
    // 'u' is the only letter in interval syntax, so it splits the unions.
    let mut intervals = Vec::new();
    for part in text.split('u') {
        intervals.push(parse_degree_interval(part)?);
    }
    if intervals.is_empty() {
        return Err(SemanticsError::BadAssumedSet("empty assumed value set".to_string()));
    }
    Ok(AssumedValueSet::Intervals(intervals))
}

/// Verdict of a stable check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StableVerdict {
    Stable,
    /// The first statement in declaration order witnessing the failure.
    NotStable { witness: String },
    /// The reduct's fixpoint iteration hit its step guard.
    Unknown { reason: String },
}

pub fn is_admissible(
    fw: &Framework,
    v: &Interpretation,
    cfg: &EngineConfig,
) -> Result<bool, SemanticsError> {
    let w = gamma(fw, v, cfg)?;
    Ok(v.leq(&w, fw.structure())?)
}

pub fn is_complete(
    fw: &Framework,
    v: &Interpretation,
    cfg: &EngineConfig,
) -> Result<bool, SemanticsError> {
    Ok(gamma(fw, v, cfg)? == *v)
}

pub fn is_model(
    fw: &Framework,
    v: &Interpretation,
    cfg: &EngineConfig,
) -> Result<bool, SemanticsError> {
    Ok(v.is_total() && is_complete(fw, v, cfg)?)
}

/// `Some(answer)` when the fixpoint iteration converges, `None` when the
/// step guard fires first and the answer is indeterminate.
pub fn is_grounded(
    fw: &Framework,
    v: &Interpretation,
    cfg: &EngineConfig,
) -> Result<Option<bool>, SemanticsError> {
    match kleene_iterate(fw, cfg)? {
        IterationOutcome::Grounded { interpretation, .. } => Ok(Some(interpretation == *v)),
        IterationOutcome::NotConverged { .. } => Ok(None),
    }
}

/// The grounded interpretation, by fixpoint iteration.
pub fn grounded(
    fw: &Framework,
    cfg: &EngineConfig,
) -> Result<(Interpretation, u64), SemanticsError> {
    match kleene_iterate(fw, cfg)? {
        IterationOutcome::Grounded { interpretation, steps } => Ok((interpretation, steps)),
        IterationOutcome::NotConverged { limit, .. } => {
            Err(SemanticsError::NonConvergence { limit })
        }
    }
}

fn require_finite(fw: &Framework, operation: &str) -> Result<Vec<TruthValue>, SemanticsError> {
    match fw.structure().enumerate_values() {
        Some(values) => Ok(values.to_vec()),
        None => Err(SemanticsError::Unsupported {
            operation: operation.to_string(),
            structure: fw.structure().kind_name(),
        }),
    }
}

/// All interpretations of a finite structure, in lexicographic order by
/// statement with `u` before the canonical value order.
fn all_interpretations(
    fw: &Framework,
    operation: &str,
    cfg: &EngineConfig,
) -> Result<Vec<Interpretation>, SemanticsError> {
    let values = require_finite(fw, operation)?;
    let per_slot = values.len() as u64 + 1;
    let required = (0..fw.len()).try_fold(1u64, |acc, _| acc.checked_mul(per_slot));
    let budget = cfg.resolved_budget();
    match required {
        Some(r) if r <= budget => {}
        _ => {
            return Err(OperatorError::BudgetExceeded {
                budget,
                required: required.unwrap_or(u64::MAX),
            }
            .into())
        }
    }
    let mut out = Vec::new();
    let mut odometer = vec![0usize; fw.len()];
    loop {
        let vals = odometer
            .iter()
            .map(|&k| {
                if k == 0 {
                    PartialValue::Undefined
                } else {
                    PartialValue::Defined(values[k - 1].clone())
                }
            })
            .collect();
        out.push(Interpretation::from_values(vals));
        // Rightmost statement advances fastest, keeping lexicographic order.
        let mut i = fw.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            odometer[i] += 1;
            if odometer[i] < per_slot as usize {
                break;
            }
            odometer[i] = 0;
            if i == 0 {
                return Ok(out);
            }
        }
    }
}

fn maximal_elements(
    fw: &Framework,
    mut items: Vec<Interpretation>,
) -> Result<Vec<Interpretation>, SemanticsError> {
    let st = fw.structure();
    let mut keep = vec![true; items.len()];
    for i in 0..items.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..items.len() {
            if i == j || items[i] == items[j] {
                continue;
            }
            if items[i].leq(&items[j], st)? {
                keep[i] = false;
                break;
            }
        }
    }
    let mut idx = 0;
    items.retain(|_| {
        let k = keep[idx];
        idx += 1;
        k
    });
    Ok(items)
}

/// Enumerates all interpretations satisfying the semantics, in the
/// canonical order. The stable semantics needs its assumed value set.
pub fn enumerate(
    fw: &Framework,
    sem: SemanticsName,
    assumed: Option<&AssumedValueSet>,
    cfg: &EngineConfig,
) -> Result<Vec<Interpretation>, SemanticsError> {
    if sem == SemanticsName::Grounded {
        let (g, _) = grounded(fw, cfg)?;
        return Ok(vec![g]);
    }
    let operation = format!("enumerating the {sem} semantics");
    let candidates = all_interpretations(fw, &operation, cfg)?;
    let mut out = Vec::new();
    for v in candidates {
        let keep = match sem {
            SemanticsName::Admissible | SemanticsName::Preferred => is_admissible(fw, &v, cfg)?,
            SemanticsName::Complete => is_complete(fw, &v, cfg)?,
            SemanticsName::Model => is_model(fw, &v, cfg)?,
            SemanticsName::Stable => {
                let w = assumed.ok_or(SemanticsError::MissingAssumedSet)?;
                is_stable(fw, &v, w, cfg)? == StableVerdict::Stable
            }
            SemanticsName::Grounded => unreachable!("handled above"),
        };
        if keep {
            out.push(v);
        }
    }
    if sem == SemanticsName::Preferred {
        return maximal_elements(fw, out);
    }
    Ok(out)
}

/// Whether `v` is a maximal admissible interpretation. Needs a finite
/// structure.
pub fn is_preferred(
    fw: &Framework,
    v: &Interpretation,
    cfg: &EngineConfig,
) -> Result<bool, SemanticsError> {
    require_finite(fw, "the preferred semantics")?;
    if !is_admissible(fw, v, cfg)? {
        return Ok(false);
    }
    let st = fw.structure();
    for w in enumerate(fw, SemanticsName::Admissible, None, cfg)? {
        if w != *v && v.leq(&w, st)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The reduct of a framework under a total interpretation: statements
/// whose value lies in the assumed set are removed, and their occurrences
/// are replaced by their value.
pub fn reduct(
    fw: &Framework,
    v: &Interpretation,
    assumed: &AssumedValueSet,
) -> Result<Framework, SemanticsError> {
    if let Some(i) = v.values().iter().position(PartialValue::is_undefined) {
        return Err(SemanticsError::NotTotal { statement: fw.id(i).to_string() });
    }
    let removed = |i: usize| {
        let value = v.get(i).as_defined().expect("checked total");
        assumed.contains(value)
    };
    let mut statements: Vec<(String, Formula)> = Vec::new();
    for s in 0..fw.len() {
        if removed(s) {
            continue;
        }
        let substituted = fw.acceptance(s).substitute(&|atom| {
            let i = fw.index_of(atom).expect("validated framework");
            if removed(i) {
                Some(v.get(i).as_defined().expect("checked total").clone())
            } else {
                None
            }
        });
        statements.push((fw.id(s).to_string(), substituted.fold_neg_constants(fw.structure())));
    }
    Ok(Framework::new(fw.structure().clone(), statements)?)
}

/// Checks the stable condition: `v` is a model whose reduct's grounded
/// interpretation agrees with `v` on the surviving statements.
pub fn is_stable(
    fw: &Framework,
    v: &Interpretation,
    assumed: &AssumedValueSet,
    cfg: &EngineConfig,
) -> Result<StableVerdict, SemanticsError> {
    if let Some(i) = v.values().iter().position(PartialValue::is_undefined) {
        return Ok(StableVerdict::NotStable { witness: fw.id(i).to_string() });
    }
    let w = gamma(fw, v, cfg)?;
    for i in 0..fw.len() {
        if w.get(i) != v.get(i) {
            return Ok(StableVerdict::NotStable { witness: fw.id(i).to_string() });
        }
    }
    let red = reduct(fw, v, assumed)?;
    match kleene_iterate(&red, cfg)? {
        IterationOutcome::Grounded { interpretation, .. } => {
            for (j, id) in red.ids().iter().enumerate() {
                let i = fw.index_of(id).expect("reduct keeps ids");
                if interpretation.get(j) != v.get(i) {
                    return Ok(StableVerdict::NotStable { witness: id.clone() });
                }
            }
            Ok(StableVerdict::Stable)
        }
        IterationOutcome::NotConverged { limit, .. } => Ok(StableVerdict::Unknown {
            reason: format!(
                "operator iteration on the reduct did not converge within {limit} steps"
            ),
        }),
    }
}

/// A decision predicate on a statement's value. `u` satisfies none of
/// them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    Equals(TruthValue),
    AtLeast(Rat),
    AtMost(Rat),
}

impl Predicate {
    pub fn satisfied(&self, v: &PartialValue) -> bool {
        let Some(value) = v.as_defined() else {
            return false;
        };
        match self {
            Predicate::Equals(w) => value == w,
            Predicate::AtLeast(r) => value.numeric().is_some_and(|d| d >= *r),
            Predicate::AtMost(r) => value.numeric().is_some_and(|d| d <= *r),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Equals(v) => write!(f, "eq:{v}"),
            Predicate::AtLeast(r) => write!(f, "ge:{}", render_rat(r)),
            Predicate::AtMost(r) => write!(f, "le:{}", render_rat(r)),
        }
    }
}

/// Parses `eq:<value>`, `ge:<degree>`, or `le:<degree>`. The order forms
/// need a structure whose values carry degrees.
pub fn parse_predicate(text: &str, fw: &Framework) -> Result<Predicate, SemanticsError> {
    let bad = || SemanticsError::BadPredicate(text.to_string());
    let (op, rest) = text.split_once(':').ok_or_else(bad)?;
    match op {
        "eq" => Ok(Predicate::Equals(fw.structure().parse_value(rest)?)),
        "ge" | "le" => {
            if !fw.structure().is_numeric() {
                return Err(SemanticsError::Unsupported {
                    operation: format!("the {op} predicate"),
                    structure: fw.structure().kind_name(),
                });
            }
            let r = parse_rat(rest).ok_or_else(bad)?;
            if !in_unit(&r) {
                return Err(bad());
            }
            Ok(if op == "ge" { Predicate::AtLeast(r) } else { Predicate::AtMost(r) })
        }
        _ => Err(bad()),
    }
}

/// Outcome of a credulous or skeptical query. `evidence` holds a witness
/// for a positive credulous answer or a counterexample for a negative
/// skeptical one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryAnswer {
    pub holds: bool,
    pub evidence: Option<Interpretation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryMode {
    Credulous,
    Skeptical,
}

/// Decides whether some (credulous) or every (skeptical) interpretation
/// under the semantics satisfies the predicate on the statement.
pub fn query(
    fw: &Framework,
    mode: QueryMode,
    sem: SemanticsName,
    assumed: Option<&AssumedValueSet>,
    statement: &str,
    pred: &Predicate,
    cfg: &EngineConfig,
) -> Result<QueryAnswer, SemanticsError> {
    let i = fw
        .index_of(statement)
        .ok_or_else(|| SemanticsError::UnknownStatement(statement.to_string()))?;
    let interps = enumerate(fw, sem, assumed, cfg)?;
    match mode {
        QueryMode::Credulous => {
            for v in interps {
                if pred.satisfied(v.get(i)) {
                    return Ok(QueryAnswer { holds: true, evidence: Some(v) });
                }
            }
            Ok(QueryAnswer { holds: false, evidence: None })
        }
        QueryMode::Skeptical => {
            for v in interps {
                if !pred.satisfied(v.get(i)) {
                    return Ok(QueryAnswer { holds: false, evidence: Some(v) });
                }
            }
            Ok(QueryAnswer { holds: true, evidence: None })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::{parse_framework, serialize_framework};

    fn interp(fw: &Framework, vals: &[&str]) -> Interpretation {
        Interpretation::from_values(
            vals.iter().map(|s| fw.structure().parse_partial_value(s).unwrap()).collect(),
        )
    }

    fn mutual_attack() -> Framework {
        parse_framework("structure classical\nstatement a: a | !b\nstatement b: !a\n").unwrap()
    }

    fn weighted_example() -> Framework {
        parse_framework(
            "structure unit-flat\n\
             statement a: 0.8\n\
             statement b: !b\n\
             statement c: a & b\n\
             statement d: !b | 0.6\n",
        )
        .unwrap()
    }

    #[test]
    fn classical_semantics_families() {
        let fw = mutual_attack();
        let cfg = EngineConfig::default();
        let adm = enumerate(&fw, SemanticsName::Admissible, None, &cfg).unwrap();
        let expect: Vec<Interpretation> = [
            ["u", "u"],
            ["t", "u"],
            ["t", "f"],
            ["f", "t"],
        ]
        .iter()
        .map(|s| interp(&fw, s))
        .collect();
        assert_eq!(adm.len(), 4);
        for v in &expect {
            assert!(adm.contains(v), "missing {v}");
        }

        let com = enumerate(&fw, SemanticsName::Complete, None, &cfg).unwrap();
        assert_eq!(com.len(), 3);
        assert!(!com.contains(&interp(&fw, &["t", "u"])));

        let models = enumerate(&fw, SemanticsName::Model, None, &cfg).unwrap();
        assert_eq!(models, vec![interp(&fw, &["f", "t"]), interp(&fw, &["t", "f"])]);

        let prf = enumerate(&fw, SemanticsName::Preferred, None, &cfg).unwrap();
        assert_eq!(prf, models);
        assert!(is_preferred(&fw, &interp(&fw, &["t", "f"]), &cfg).unwrap());
        assert!(!is_preferred(&fw, &interp(&fw, &["t", "u"]), &cfg).unwrap());

        let grd = enumerate(&fw, SemanticsName::Grounded, None, &cfg).unwrap();
        assert_eq!(grd, vec![interp(&fw, &["u", "u"])]);
    }

    #[test]
    fn weighted_admissibility_checks() {
        let fw = weighted_example();
        let cfg = EngineConfig::default();
        assert!(is_admissible(&fw, &interp(&fw, &["0.8", "u", "u", "u"]), &cfg).unwrap());
        assert!(is_admissible(&fw, &interp(&fw, &["u", "0.5", "u", "u"]), &cfg).unwrap());
        assert!(!is_admissible(&fw, &interp(&fw, &["0.7", "u", "u", "u"]), &cfg).unwrap());
        assert!(is_complete(&fw, &interp(&fw, &["0.8", "u", "u", "u"]), &cfg).unwrap());
        let model = interp(&fw, &["0.8", "0.5", "0.5", "0.6"]);
        assert!(is_model(&fw, &model, &cfg).unwrap());
        assert_eq!(is_grounded(&fw, &model, &cfg).unwrap(), Some(false));
        assert_eq!(
            is_grounded(&fw, &interp(&fw, &["0.8", "u", "u", "u"]), &cfg).unwrap(),
            Some(true)
        );
    }

    #[test]
    fn enumeration_unsupported_on_unit() {
        let fw = weighted_example();
        let cfg = EngineConfig::default();
        assert!(matches!(
            enumerate(&fw, SemanticsName::Admissible, None, &cfg),
            Err(SemanticsError::Unsupported { .. })
        ));
        assert!(matches!(
            is_preferred(&fw, &interp(&fw, &["0.8", "u", "u", "u"]), &cfg),
            Err(SemanticsError::Unsupported { .. })
        ));
        // Grounded enumeration still works by iteration.
        let grd = enumerate(&fw, SemanticsName::Grounded, None, &cfg).unwrap();
        assert_eq!(grd, vec![interp(&fw, &["0.8", "u", "u", "u"])]);
    }

    #[test]
    fn assumed_set_parsing() {
        let fw = mutual_attack();
        let w = parse_assumed_set("{f}", &fw).unwrap();
        assert!(w.contains(&TruthValue::Classical(false)));
        assert!(!w.contains(&TruthValue::Classical(true)));
        assert!(matches!(
            parse_assumed_set("[0,0.5]", &fw),
            Err(SemanticsError::Unsupported { .. })
        ));

        let fw = weighted_example();
        let unit = |s: &str| TruthValue::UnitReal(parse_rat(s).unwrap());
        let w = parse_assumed_set("[0,0.5]", &fw).unwrap();
        assert!(w.contains(&unit("0.5")));
        assert!(!w.contains(&unit("0.6")));
        let w = parse_assumed_set("[0,0.5[ u ]0.5,1]", &fw).unwrap();
        assert!(!w.contains(&unit("0.5")));
        assert!(w.contains(&unit("0.4")));
        assert!(w.contains(&unit("0.7")));
        let w = parse_assumed_set("(0.2,0.4)", &fw).unwrap();
        assert!(w.contains(&unit("0.3")));
        assert!(!w.contains(&unit("0.4")));
        assert!(parse_assumed_set("[0.5,0.2]", &fw).is_err());
        assert!(parse_assumed_set("{0.2", &fw).is_err());
    }

    #[test]
    fn weighted_stability() {
        let fw = weighted_example();
        let cfg = EngineConfig::default();
        let model = interp(&fw, &["0.8", "0.5", "0.5", "0.6"]);
        let w_closed = parse_assumed_set("[0,0.5]", &fw).unwrap();
        assert_eq!(is_stable(&fw, &model, &w_closed, &cfg).unwrap(), StableVerdict::Stable);
        let w_open = parse_assumed_set("[0,0.5[", &fw).unwrap();
        assert_eq!(
            is_stable(&fw, &model, &w_open, &cfg).unwrap(),
            StableVerdict::NotStable { witness: "b".to_string() }
        );
        // Non-models are rejected with the first offending statement.
        assert_eq!(
            is_stable(&fw, &interp(&fw, &["0.8", "u", "u", "u"]), &w_closed, &cfg).unwrap(),
            StableVerdict::NotStable { witness: "b".to_string() }
        );
        assert_eq!(
            is_stable(&fw, &interp(&fw, &["0.7", "0.5", "0.5", "0.6"]), &w_closed, &cfg)
                .unwrap(),
            StableVerdict::NotStable { witness: "a".to_string() }
        );
    }

    #[test]
    fn reduct_substitutes_and_folds() {
        let fw = weighted_example();
        let model = interp(&fw, &["0.8", "0.5", "0.5", "0.6"]);
        let w = parse_assumed_set("[0,0.5]", &fw).unwrap();
        let red = reduct(&fw, &model, &w).unwrap();
        assert_eq!(red.ids(), ["a", "d"]);
        assert_eq!(
            serialize_framework(&red),
            "structure unit-flat\nstatement a: 0.8\nstatement d: 0.5 | 0.6\n"
        );
        let e = reduct(&fw, &interp(&fw, &["0.8", "u", "u", "u"]), &w);
        assert!(matches!(e, Err(SemanticsError::NotTotal { .. })));
    }

    #[test]
    fn stable_guard_yields_unknown() {
        let fw = weighted_example();
        let cfg = EngineConfig { max_steps: Some(0), ..EngineConfig::default() };
        let model = interp(&fw, &["0.8", "0.5", "0.5", "0.6"]);
        let w = parse_assumed_set("[0,0.5]", &fw).unwrap();
        assert!(matches!(
            is_stable(&fw, &model, &w, &cfg).unwrap(),
            StableVerdict::Unknown { .. }
        ));
        assert_eq!(is_grounded(&fw, &model, &cfg).unwrap(), None);
    }

    #[test]
    fn queries_over_classical_semantics() {
        let fw = mutual_attack();
        let cfg = EngineConfig::default();
        let t = Predicate::Equals(TruthValue::Classical(true));
        let ans = query(
            &fw,
            QueryMode::Credulous,
            SemanticsName::Model,
            None,
            "a",
            &t,
            &cfg,
        )
        .unwrap();
        assert!(ans.holds);
        assert_eq!(ans.evidence, Some(interp(&fw, &["t", "f"])));
        let ans = query(
            &fw,
            QueryMode::Skeptical,
            SemanticsName::Model,
            None,
            "a",
            &t,
            &cfg,
        )
        .unwrap();
        assert!(!ans.holds);
        assert_eq!(ans.evidence, Some(interp(&fw, &["f", "t"])));
        // u satisfies no predicate: skeptical over complete fails on (u,u).
        let ans = query(
            &fw,
            QueryMode::Skeptical,
            SemanticsName::Complete,
            None,
            "a",
            &t,
            &cfg,
        )
        .unwrap();
        assert!(!ans.holds);
        assert_eq!(ans.evidence, Some(interp(&fw, &["u", "u"])));
        assert!(matches!(
            query(&fw, QueryMode::Credulous, SemanticsName::Model, None, "z", &t, &cfg),
            Err(SemanticsError::UnknownStatement(_))
        ));
    }

    #[test]
    fn predicate_parsing_and_satisfaction() {
        let fw = weighted_example();
        let p = parse_predicate("ge:0.5", &fw).unwrap();
        assert!(p.satisfied(&fw.structure().parse_partial_value("0.6").unwrap()));
        assert!(!p.satisfied(&fw.structure().parse_partial_value("0.4").unwrap()));
        assert!(!p.satisfied(&PartialValue::Undefined));
        let p = parse_predicate("le:1/3", &fw).unwrap();
        assert!(p.satisfied(&fw.structure().parse_partial_value("0.25").unwrap()));
        let p = parse_predicate("eq:0.8", &fw).unwrap();
        assert!(p.satisfied(&fw.structure().parse_partial_value("0.8").unwrap()));

        let fw = mutual_attack();
        assert!(matches!(
            parse_predicate("ge:0.5", &fw),
            Err(SemanticsError::Unsupported { .. })
        ));
        assert!(parse_predicate("gt:0.5", &fw).is_err());
        assert!(parse_predicate("eq", &fw).is_err());
    }

    #[test]
    fn stable_enumeration_on_classical() {
        let fw = mutual_attack();
        let cfg = EngineConfig::default();
        let w = parse_assumed_set("{f}", &fw).unwrap();
        let stb = enumerate(&fw, SemanticsName::Stable, Some(&w), &cfg).unwrap();
        // (t,f): reduct keeps a with !f -> folded; grounded matches.
        // (f,t): reduct keeps b: !a with a:=f, grounded b=t, matches.
        assert_eq!(stb.len(), 2);
        assert!(matches!(
            enumerate(&fw, SemanticsName::Stable, None, &cfg),
            Err(SemanticsError::MissingAssumedSet)
        ));
    }
}
