//! Truth-value structures: value universes, information orderings forming
//! complete partial orders with least element `u`, greatest lower bounds,
//! and the evaluation of connectives.
//!
//! A structure owns its values. Values from different structures must never
//! be mixed; every operation checks membership and reports a [`ValueError`]
//! on foreign values.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::ValueRange;
use crate::rational::{complement, in_unit, parse_rat, rat, rat_half, render_rat, Rat};

/// One of Belnap's four truth degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BelnapValue {
    /// `N` = no information.
    Neither,
    /// `F` = told false only.
    False,
    /// `T` = told true only.
    True,
    /// `B` = told both.
    Both,
}

impl BelnapValue {
    /// Encoding as (told-true, told-false) flags; both orderings are
    /// componentwise on this encoding.
    fn flags(self) -> (bool, bool) {
        match self {
            BelnapValue::Neither => (false, false),
            BelnapValue::True => (true, false),
            BelnapValue::False => (false, true),
            BelnapValue::Both => (true, true),
        }
    }

    fn from_flags(told_true: bool, told_false: bool) -> Self {
        match (told_true, told_false) {
            (false, false) => BelnapValue::Neither,
            (true, false) => BelnapValue::True,
            (false, true) => BelnapValue::False,
            (true, true) => BelnapValue::Both,
        }
    }

    pub fn letter(self) -> char {
        match self {
            BelnapValue::Neither => 'N',
            BelnapValue::False => 'F',
            BelnapValue::True => 'T',
            BelnapValue::Both => 'B',
        }
    }
}

/// A truth value of some valuation structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TruthValue {
    /// `t` or `f` of the two-valued structure.
    Classical(bool),
    /// An exact rational in `[0,1]`.
    UnitReal(Rat),
    /// Step `k` of the `m`-level grid, denoting `k/(m-1)`.
    Level { step: u32, levels: u32 },
    /// A Belnap degree.
    Belnap(BelnapValue),
    /// A subinterval of the unit interval with exact endpoints.
    Interval { lo: Rat, hi: Rat },
    /// A symbol of a user-declared structure.
    Custom(String),
}

impl TruthValue {
    pub fn unit(r: Rat) -> Self {
        TruthValue::UnitReal(r)
    }

    /// The numeric degree of a value, where one exists (unit and level
    /// values). Used by order predicates in queries.
    pub fn numeric(&self) -> Option<Rat> {
        match self {
            TruthValue::UnitReal(r) => Some(r.clone()),
            TruthValue::Level { step, levels } => Some(rat(*step as i64, (*levels - 1) as i64)),
            _ => None,
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruthValue::Classical(true) => write!(f, "t"),
            TruthValue::Classical(false) => write!(f, "f"),
            TruthValue::UnitReal(r) => write!(f, "{}", render_rat(r)),
            TruthValue::Level { step, levels } => {
                write!(f, "{}", render_rat(&rat(*step as i64, (*levels - 1) as i64)))
            }
            TruthValue::Belnap(b) => write!(f, "{}", b.letter()),
            TruthValue::Interval { lo, hi } => {
                write!(f, "[{},{}]", render_rat(lo), render_rat(hi))
            }
            TruthValue::Custom(sym) => write!(f, "{sym}"),
        }
    }
}

/// A truth value or the undefined bottom `u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartialValue {
    Undefined,
    Defined(TruthValue),
}

impl PartialValue {
    pub fn is_undefined(&self) -> bool {
        matches!(self, PartialValue::Undefined)
    }

    pub fn as_defined(&self) -> Option<&TruthValue> {
        match self {
            PartialValue::Undefined => None,
            PartialValue::Defined(v) => Some(v),
        }
    }
}

impl From<TruthValue> for PartialValue {
    fn from(v: TruthValue) -> Self {
        PartialValue::Defined(v)
    }
}

impl fmt::Display for PartialValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartialValue::Undefined => write!(f, "u"),
            PartialValue::Defined(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ValueError {
    #[error("value {value} is not a member of structure {structure}")]
    NotAMember { value: String, structure: String },
    #[error("greatest lower bound of an empty set")]
    EmptyGlb,
    #[error("values {x} and {y} have no greatest lower bound")]
    NoGlb { x: String, y: String },
    #[error("connective {connective} is undefined at ({x}, {y})")]
    UndefinedConnective { connective: String, x: String, y: String },
    #[error("cannot parse {text:?} as a value of structure {structure}")]
    UnparsableValue { text: String, structure: String },
}

/// A condition violated by a structure declaration, with the witnessing
/// values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationIssue {
    /// `a ≤i b ≤i a` for distinct declared values.
    OrderCycle { a: String, b: String },
    /// The pair has two or more incomparable maximal lower bounds.
    MissingGlb { x: String, y: String },
    /// A declared connective table has no entry for this operand pair.
    IncompleteTable { connective: String, x: String, y: String },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::OrderCycle { a, b } => {
                write!(f, "information order has a cycle through {a} and {b}")
            }
            ValidationIssue::MissingGlb { x, y } => {
                write!(f, "pair ({x}, {y}) has no greatest lower bound")
            }
            ValidationIssue::IncompleteTable { connective, x, y } => {
                write!(f, "{connective} table has no entry for ({x}, {y})")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum StructureDeclError {
    #[error("a level structure needs at least 2 levels, got {0}")]
    TooFewLevels(u32),
    #[error("custom structure declares no values")]
    NoValues,
    #[error("duplicate value symbol {0}")]
    DuplicateValue(String),
    #[error("value symbol \"u\" is reserved for the undefined bottom")]
    ReservedSymbol,
    #[error("unknown value symbol {0}")]
    UnknownSymbol(String),
    #[error("order edge relates {0} to itself")]
    SelfEdge(String),
    #[error("duplicate {connective} table entry for ({x}, {y})")]
    DuplicateTableEntry { connective: String, x: String, y: String },
}

/// Declared semantics of a binary connective in a custom structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BinaryConnDecl {
    /// Meet in the information ordering, restricted to defined values.
    InfoMeet,
    /// Explicit table of `(left, right, result)` symbol triples.
    Table(Vec<(String, String, String)>),
}

/// Declaration of a custom valuation structure: value symbols, Hasse edges
/// of the information order (with `u` implicitly adjoined as bottom), and
/// optional connective definitions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CustomDecl {
    pub values: Vec<String>,
    /// `(lower, upper)` covering pairs.
    pub order: Vec<(String, String)>,
    pub conj: Option<BinaryConnDecl>,
    pub disj: Option<BinaryConnDecl>,
    /// Explicit `(operand, result)` pairs.
    pub neg: Option<Vec<(String, String)>>,
}

/// Greatest lower bound of a pair of declared values, within `V ∪ {u}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PairMeet {
    Value(usize),
    Bottom,
    Missing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum BinaryConn {
    Undeclared,
    InfoMeet,
    Table(Vec<Option<usize>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CustomStructure {
    symbols: Vec<String>,
    /// Reflexive-transitive closure of the declared covering edges.
    leq: Vec<bool>,
    meet: Vec<PairMeet>,
    conj: BinaryConn,
    disj: BinaryConn,
    neg: Option<Vec<Option<usize>>>,
}

impl CustomStructure {
    fn n(&self) -> usize {
        self.symbols.len()
    }

    fn leq_at(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n() + b]
    }

    fn index_of(&self, sym: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == sym)
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Covering edges of the declared order (transitive reduction), as
    /// `(lower, upper)` index pairs in canonical order.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq_at(a, b) {
                    continue;
                }
                let covered = (0..n)
                    .any(|c| c != a && c != b && self.leq_at(a, c) && self.leq_at(c, b));
                if !covered {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    pub fn conj_decl(&self) -> Option<BinaryConnDecl> {
        self.conn_decl(&self.conj)
    }

    pub fn disj_decl(&self) -> Option<BinaryConnDecl> {
        self.conn_decl(&self.disj)
    }

    pub fn neg_decl(&self) -> Option<Vec<(String, String)>> {
        self.neg.as_ref().map(|table| {
            let mut entries = Vec::new();
            for (i, result) in table.iter().enumerate() {
                if let Some(r) = result {
                    entries.push((self.symbols[i].clone(), self.symbols[*r].clone()));
                }
            }
            entries
        })
    }

    fn conn_decl(&self, conn: &BinaryConn) -> Option<BinaryConnDecl> {
        match conn {
            BinaryConn::Undeclared => None,
            BinaryConn::InfoMeet => Some(BinaryConnDecl::InfoMeet),
            BinaryConn::Table(table) => {
                let n = self.n();
                let mut entries = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        if let Some(r) = table[i * n + j] {
                            entries.push((
                                self.symbols[i].clone(),
                                self.symbols[j].clone(),
                                self.symbols[r].clone(),
                            ));
                        }
                    }
                }
                Some(BinaryConnDecl::Table(entries))
            }
        }
    }
}

/// The family a structure belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureKind {
    Classical,
    UnitFlat,
    UnitRefined,
    /// `W_m`: the values `k/(m-1)` under the flat ordering.
    Levels(u32),
    Belnap,
    /// Intervals with endpoints on the `m`-level grid, ordered by reverse
    /// inclusion.
    IntervalGrid(u32),
    Custom(CustomStructure),
}

/// A value universe with its information ordering and connectives.
///
/// Immutable after construction; all operations are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationStructure {
    kind: StructureKind,
    /// Canonical value enumeration for finite kinds.
    values: Option<Vec<TruthValue>>,
}

impl ValuationStructure {
    pub fn classical() -> Self {
        ValuationStructure {
            kind: StructureKind::Classical,
            values: Some(vec![TruthValue::Classical(false), TruthValue::Classical(true)]),
        }
    }

    pub fn unit_flat() -> Self {
        ValuationStructure { kind: StructureKind::UnitFlat, values: None }
    }

    pub fn unit_refined() -> Self {
        ValuationStructure { kind: StructureKind::UnitRefined, values: None }
    }

    /// `W_m` with `m >= 2` levels.
    pub fn levels(m: u32) -> Result<Self, StructureDeclError> {
        if m < 2 {
            return Err(StructureDeclError::TooFewLevels(m));
        }
        let values = (0..m).map(|k| TruthValue::Level { step: k, levels: m }).collect();
        Ok(ValuationStructure { kind: StructureKind::Levels(m), values: Some(values) })
    }

    pub fn belnap() -> Self {
        ValuationStructure {
            kind: StructureKind::Belnap,
            values: Some(vec![
                TruthValue::Belnap(BelnapValue::Neither),
                TruthValue::Belnap(BelnapValue::False),
                TruthValue::Belnap(BelnapValue::True),
                TruthValue::Belnap(BelnapValue::Both),
            ]),
        }
    }

    /// Intervals with endpoints on the `m`-level grid, `m >= 2`.
    pub fn interval_grid(m: u32) -> Result<Self, StructureDeclError> {
        if m < 2 {
            return Err(StructureDeclError::TooFewLevels(m));
        }
        let step = |k: u32| rat(k as i64, (m - 1) as i64);
        let mut values = Vec::new();
        for i in 0..m {
            for j in i..m {
                values.push(TruthValue::Interval { lo: step(i), hi: step(j) });
            }
        }
        Ok(ValuationStructure { kind: StructureKind::IntervalGrid(m), values: Some(values) })
    }

    pub fn custom(decl: CustomDecl) -> Result<Self, StructureDeclError> {
        let symbols = decl.values;
        if symbols.is_empty() {
            return Err(StructureDeclError::NoValues);
        }
        let mut seen = BTreeSet::new();
        for sym in &symbols {
            if sym == "u" {
                return Err(StructureDeclError::ReservedSymbol);
            }
            if !seen.insert(sym.clone()) {
                return Err(StructureDeclError::DuplicateValue(sym.clone()));
            }
        }
        let n = symbols.len();
        let index = |sym: &str| -> Result<usize, StructureDeclError> {
            symbols
                .iter()
                .position(|s| s == sym)
                .ok_or_else(|| StructureDeclError::UnknownSymbol(sym.to_string()))
        };

        // Reflexive-transitive closure of the covering edges.
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (lo, hi) in &decl.order {
            if lo == hi {
                return Err(StructureDeclError::SelfEdge(lo.clone()));
            }
            leq[index(lo)? * n + index(hi)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }

        // Pairwise meets within V ∪ {u}.
        let mut meet = vec![PairMeet::Missing; n * n];
        for x in 0..n {
            for y in 0..n {
                let lower: Vec<usize> =
                    (0..n).filter(|&c| leq[c * n + x] && leq[c * n + y]).collect();
                meet[x * n + y] = if lower.is_empty() {
                    PairMeet::Bottom
                } else {
                    match lower.iter().find(|&&g| lower.iter().all(|&c| leq[c * n + g])) {
                        Some(&g) => PairMeet::Value(g),
                        None => PairMeet::Missing,
                    }
                };
            }
        }

        let binary = |conn: Option<BinaryConnDecl>,
                      name: &str|
         -> Result<BinaryConn, StructureDeclError> {
            match conn {
                None => Ok(BinaryConn::Undeclared),
                Some(BinaryConnDecl::InfoMeet) => Ok(BinaryConn::InfoMeet),
                Some(BinaryConnDecl::Table(entries)) => {
                    let mut table = vec![None; n * n];
                    for (x, y, r) in &entries {
                        let slot = &mut table[index(x)? * n + index(y)?];
                        if slot.is_some() {
                            return Err(StructureDeclError::DuplicateTableEntry {
                                connective: name.to_string(),
                                x: x.clone(),
                                y: y.clone(),
                            });
                        }
                        *slot = Some(index(r)?);
                    }
                    Ok(BinaryConn::Table(table))
                }
            }
        };
        let conj = binary(decl.conj, "conj")?;
        let disj = binary(decl.disj, "disj")?;
        let neg = match decl.neg {
            None => None,
            Some(entries) => {
                let mut table = vec![None; n];
                for (x, r) in &entries {
                    let slot = &mut table[index(x)?];
                    if slot.is_some() {
                        return Err(StructureDeclError::DuplicateTableEntry {
                            connective: "neg".to_string(),
                            x: x.clone(),
                            y: String::new(),
                        });
                    }
                    *slot = Some(index(r)?);
                }
                Some(table)
            }
        };

        let custom = CustomStructure { symbols, leq, meet, conj, disj, neg };
        let values = custom.symbols.iter().map(|s| TruthValue::Custom(s.clone())).collect();
        Ok(ValuationStructure { kind: StructureKind::Custom(custom), values: Some(values) })
    }

    pub fn kind(&self) -> &StructureKind {
        &self.kind
    }

    /// The structure's name as used in framework files, e.g. `unit-flat`
    /// or `w 3`.
    pub fn kind_name(&self) -> String {
        match &self.kind {
            StructureKind::Classical => "classical".to_string(),
            StructureKind::UnitFlat => "unit-flat".to_string(),
            StructureKind::UnitRefined => "unit-refined".to_string(),
            StructureKind::Levels(m) => format!("w {m}"),
            StructureKind::Belnap => "belnap".to_string(),
            StructureKind::IntervalGrid(m) => format!("interval-grid {m}"),
            StructureKind::Custom(_) => "custom".to_string(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.is_some()
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.kind, StructureKind::UnitFlat | StructureKind::UnitRefined)
    }

    /// Whether the information ordering is flat (all defined values pairwise
    /// incomparable).
    pub fn is_flat(&self) -> bool {
        match &self.kind {
            StructureKind::Classical | StructureKind::UnitFlat | StructureKind::Levels(_) => true,
            StructureKind::UnitRefined | StructureKind::Belnap | StructureKind::IntervalGrid(_) => {
                false
            }
            StructureKind::Custom(c) => {
                let n = c.n();
                (0..n).all(|a| (0..n).all(|b| a == b || !c.leq_at(a, b)))
            }
        }
    }

    /// Whether defined values carry a numeric order usable by `ge`/`le`
    /// query predicates.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self.kind,
            StructureKind::UnitFlat | StructureKind::UnitRefined | StructureKind::Levels(_)
        )
    }

    /// Canonical enumeration of the value universe, or `None` for the
    /// infinite unit kinds.
    pub fn enumerate_values(&self) -> Option<&[TruthValue]> {
        self.values.as_deref()
    }

    /// `|V|` for finite kinds, `None` for infinite ones.
    pub fn cardinality(&self) -> Option<usize> {
        self.values.as_ref().map(Vec::len)
    }

    /// Position of a value in the canonical enumeration.
    pub fn value_index(&self, v: &TruthValue) -> Option<usize> {
        self.values.as_ref()?.iter().position(|w| w == v)
    }

    /// Sort key placing `u` first, then canonical value order (numeric
    /// order on the unit kinds).
    pub fn partial_value_rank(&self, v: &PartialValue) -> (usize, Option<Rat>) {
        match v {
            PartialValue::Undefined => (0, None),
            PartialValue::Defined(t) => match self.value_index(t) {
                Some(i) => (i + 1, None),
                None => (1, t.numeric()),
            },
        }
    }

    pub fn contains(&self, v: &TruthValue) -> bool {
        match (&self.kind, v) {
            (StructureKind::Classical, TruthValue::Classical(_)) => true,
            (StructureKind::UnitFlat | StructureKind::UnitRefined, TruthValue::UnitReal(r)) => {
                in_unit(r)
            }
            (StructureKind::Levels(m), TruthValue::Level { step, levels }) => {
                levels == m && step < m
            }
            (StructureKind::Belnap, TruthValue::Belnap(_)) => true,
            (StructureKind::IntervalGrid(m), TruthValue::Interval { lo, hi }) => {
                let on_grid = |x: &Rat| {
                    in_unit(x) && (x * rat((*m - 1) as i64, 1)).is_integer()
                };
                lo <= hi && on_grid(lo) && on_grid(hi)
            }
            (StructureKind::Custom(c), TruthValue::Custom(sym)) => c.index_of(sym).is_some(),
            _ => false,
        }
    }

    fn check_member(&self, v: &TruthValue) -> Result<(), ValueError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(ValueError::NotAMember {
                value: v.to_string(),
                structure: self.kind_name(),
            })
        }
    }

    fn check_partial(&self, v: &PartialValue) -> Result<(), ValueError> {
        match v {
            PartialValue::Undefined => Ok(()),
            PartialValue::Defined(t) => self.check_member(t),
        }
    }

    /// The information ordering `x ≤i y` on `V ∪ {u}`.
    pub fn leq_info(&self, x: &PartialValue, y: &PartialValue) -> Result<bool, ValueError> {
        self.check_partial(x)?;
        self.check_partial(y)?;
        let (x, y) = match (x, y) {
            (PartialValue::Undefined, _) => return Ok(true),
            (_, PartialValue::Undefined) => return Ok(false),
            (PartialValue::Defined(x), PartialValue::Defined(y)) => (x, y),
        };
        Ok(match (&self.kind, x, y) {
            (
                StructureKind::Classical | StructureKind::UnitFlat | StructureKind::Levels(_),
                _,
                _,
            ) => x == y,
            (StructureKind::UnitRefined, TruthValue::UnitReal(a), TruthValue::UnitReal(b)) => {
                let half = rat_half();
                a == b || (*b < *a && *a <= half) || (half <= *a && *a < *b)
            }
            (StructureKind::Belnap, TruthValue::Belnap(a), TruthValue::Belnap(b)) => {
                let (at, af) = a.flags();
                let (bt, bf) = b.flags();
                at <= bt && af <= bf
            }
            (
                StructureKind::IntervalGrid(_),
                TruthValue::Interval { lo: a, hi: b },
                TruthValue::Interval { lo: c, hi: d },
            ) => a <= c && d <= b,
            (StructureKind::Custom(cs), TruthValue::Custom(sx), TruthValue::Custom(sy)) => {
                cs.leq_at(cs.index_of(sx).unwrap(), cs.index_of(sy).unwrap())
            }
            _ => unreachable!("membership checked above"),
        })
    }

    /// Binary meet in `(V ∪ {u}, ≤i)`.
    fn meet2(&self, x: &PartialValue, y: &PartialValue) -> Result<PartialValue, ValueError> {
        let (x, y) = match (x, y) {
            (PartialValue::Undefined, _) | (_, PartialValue::Undefined) => {
                return Ok(PartialValue::Undefined)
            }
            (PartialValue::Defined(x), PartialValue::Defined(y)) => (x, y),
        };
        Ok(match (&self.kind, x, y) {
            (
                StructureKind::Classical | StructureKind::UnitFlat | StructureKind::Levels(_),
                _,
                _,
            ) => {
                if x == y {
                    PartialValue::Defined(x.clone())
                } else {
                    PartialValue::Undefined
                }
            }
            (StructureKind::UnitRefined, TruthValue::UnitReal(a), TruthValue::UnitReal(b)) => {
                let half = rat_half();
                let v = if *a >= half && *b >= half {
                    a.min(b).clone()
                } else if *a <= half && *b <= half {
                    a.max(b).clone()
                } else {
                    half
                };
                PartialValue::Defined(TruthValue::UnitReal(v))
            }
            (StructureKind::Belnap, TruthValue::Belnap(a), TruthValue::Belnap(b)) => {
                let (at, af) = a.flags();
                let (bt, bf) = b.flags();
                PartialValue::Defined(TruthValue::Belnap(BelnapValue::from_flags(
                    at && bt,
                    af && bf,
                )))
            }
            (
                StructureKind::IntervalGrid(_),
                TruthValue::Interval { lo: a, hi: b },
                TruthValue::Interval { lo: c, hi: d },
            ) => PartialValue::Defined(TruthValue::Interval {
                lo: a.min(c).clone(),
                hi: b.max(d).clone(),
            }),
            (StructureKind::Custom(cs), TruthValue::Custom(sx), TruthValue::Custom(sy)) => {
                let (i, j) = (cs.index_of(sx).unwrap(), cs.index_of(sy).unwrap());
                match cs.meet[i * cs.n() + j] {
                    PairMeet::Value(g) => {
                        PartialValue::Defined(TruthValue::Custom(cs.symbols[g].clone()))
                    }
                    PairMeet::Bottom => PartialValue::Undefined,
                    PairMeet::Missing => {
                        return Err(ValueError::NoGlb { x: sx.clone(), y: sy.clone() })
                    }
                }
            }
            _ => unreachable!("membership checked by caller"),
        })
    }

    /// Greatest lower bound of a nonempty finite set. The running meet
    /// stops early once it reaches `u`, which is absorbing.
    pub fn glb<'a, I>(&self, xs: I) -> Result<PartialValue, ValueError>
    where
        I: IntoIterator<Item = &'a PartialValue>,
    {
        let mut iter = xs.into_iter();
        let first = iter.next().ok_or(ValueError::EmptyGlb)?;
        self.check_partial(first)?;
        let mut acc = first.clone();
        for x in iter {
            if acc.is_undefined() {
                return Ok(acc);
            }
            self.check_partial(x)?;
            acc = self.meet2(&acc, x)?;
        }
        Ok(acc)
    }

    /// Greatest lower bound of the full value interval `[lo, hi]` of a unit
    /// structure, used by the range-propagation engine on exact formula
    /// images.
    pub fn glb_of_unit_interval(&self, lo: &Rat, hi: &Rat) -> Result<PartialValue, ValueError> {
        match &self.kind {
            StructureKind::UnitFlat => Ok(if lo == hi {
                PartialValue::Defined(TruthValue::UnitReal(lo.clone()))
            } else {
                PartialValue::Undefined
            }),
            StructureKind::UnitRefined => {
                let half = rat_half();
                let v = if *lo >= half {
                    lo.clone()
                } else if *hi <= half {
                    hi.clone()
                } else {
                    half
                };
                Ok(PartialValue::Defined(TruthValue::UnitReal(v)))
            }
            _ => Err(ValueError::NotAMember {
                value: format!("[{},{}]", render_rat(lo), render_rat(hi)),
                structure: self.kind_name(),
            }),
        }
    }

    pub fn eval_conj(&self, x: &TruthValue, y: &TruthValue) -> Result<TruthValue, ValueError> {
        self.check_member(x)?;
        self.check_member(y)?;
        Ok(match (&self.kind, x, y) {
            (StructureKind::Classical, TruthValue::Classical(a), TruthValue::Classical(b)) => {
                TruthValue::Classical(*a && *b)
            }
            (
                StructureKind::UnitFlat | StructureKind::UnitRefined,
                TruthValue::UnitReal(a),
                TruthValue::UnitReal(b),
            ) => TruthValue::UnitReal(a.min(b).clone()),
            (
                StructureKind::Levels(m),
                TruthValue::Level { step: a, .. },
                TruthValue::Level { step: b, .. },
            ) => TruthValue::Level { step: (*a).min(*b), levels: *m },
            (StructureKind::Belnap, TruthValue::Belnap(a), TruthValue::Belnap(b)) => {
                // Infimum under the truth ordering on (told-true, told-false)
                // flags: true-part meets, false-part joins.
                let (at, af) = a.flags();
                let (bt, bf) = b.flags();
                TruthValue::Belnap(BelnapValue::from_flags(at && bt, af || bf))
            }
            (
                StructureKind::IntervalGrid(_),
                TruthValue::Interval { lo: a, hi: b },
                TruthValue::Interval { lo: c, hi: d },
            ) => TruthValue::Interval { lo: a.min(c).clone(), hi: b.min(d).clone() },
            (StructureKind::Custom(cs), TruthValue::Custom(sx), TruthValue::Custom(sy)) => {
                self.custom_binary(cs, &cs.conj, "conj", sx, sy)?
            }
            _ => unreachable!("membership checked above"),
        })
    }

    pub fn eval_disj(&self, x: &TruthValue, y: &TruthValue) -> Result<TruthValue, ValueError> {
        self.check_member(x)?;
        self.check_member(y)?;
        Ok(match (&self.kind, x, y) {
            (StructureKind::Classical, TruthValue::Classical(a), TruthValue::Classical(b)) => {
                TruthValue::Classical(*a || *b)
            }
            (
                StructureKind::UnitFlat | StructureKind::UnitRefined,
                TruthValue::UnitReal(a),
                TruthValue::UnitReal(b),
            ) => TruthValue::UnitReal(a.max(b).clone()),
            (
                StructureKind::Levels(m),
                TruthValue::Level { step: a, .. },
                TruthValue::Level { step: b, .. },
            ) => TruthValue::Level { step: (*a).max(*b), levels: *m },
            (StructureKind::Belnap, TruthValue::Belnap(a), TruthValue::Belnap(b)) => {
                let (at, af) = a.flags();
                let (bt, bf) = b.flags();
                TruthValue::Belnap(BelnapValue::from_flags(at || bt, af && bf))
            }
            (
                StructureKind::IntervalGrid(_),
                TruthValue::Interval { lo: a, hi: b },
                TruthValue::Interval { lo: c, hi: d },
            ) => TruthValue::Interval { lo: a.max(c).clone(), hi: b.max(d).clone() },
            (StructureKind::Custom(cs), TruthValue::Custom(sx), TruthValue::Custom(sy)) => {
                self.custom_binary(cs, &cs.disj, "disj", sx, sy)?
            }
            _ => unreachable!("membership checked above"),
        })
    }

    pub fn eval_neg(&self, x: &TruthValue) -> Result<TruthValue, ValueError> {
        self.check_member(x)?;
        Ok(match (&self.kind, x) {
            (StructureKind::Classical, TruthValue::Classical(a)) => TruthValue::Classical(!a),
            (
                StructureKind::UnitFlat | StructureKind::UnitRefined,
                TruthValue::UnitReal(a),
            ) => TruthValue::UnitReal(complement(a)),
            (StructureKind::Levels(m), TruthValue::Level { step, .. }) => {
                TruthValue::Level { step: m - 1 - step, levels: *m }
            }
            (StructureKind::Belnap, TruthValue::Belnap(a)) => {
                let (t, f) = a.flags();
                TruthValue::Belnap(BelnapValue::from_flags(f, t))
            }
            (StructureKind::IntervalGrid(_), TruthValue::Interval { lo, hi }) => {
                TruthValue::Interval { lo: complement(hi), hi: complement(lo) }
            }
            (StructureKind::Custom(cs), TruthValue::Custom(sym)) => {
                let i = cs.index_of(sym).unwrap();
                match &cs.neg {
                    Some(table) => match table[i] {
                        Some(r) => TruthValue::Custom(cs.symbols[r].clone()),
                        None => {
                            return Err(ValueError::UndefinedConnective {
                                connective: "neg".to_string(),
                                x: sym.clone(),
                                y: String::new(),
                            })
                        }
                    },
                    None => {
                        return Err(ValueError::UndefinedConnective {
                            connective: "neg".to_string(),
                            x: sym.clone(),
                            y: String::new(),
                        })
                    }
                }
            }
            _ => unreachable!("membership checked above"),
        })
    }

    fn custom_binary(
        &self,
        cs: &CustomStructure,
        conn: &BinaryConn,
        name: &str,
        sx: &str,
        sy: &str,
    ) -> Result<TruthValue, ValueError> {
        let undefined = || ValueError::UndefinedConnective {
            connective: name.to_string(),
            x: sx.to_string(),
            y: sy.to_string(),
        };
        let (i, j) = (cs.index_of(sx).unwrap(), cs.index_of(sy).unwrap());
        match conn {
            BinaryConn::Undeclared => Err(undefined()),
            BinaryConn::InfoMeet => match cs.meet[i * cs.n() + j] {
                // The meet connective must land on a defined value.
                PairMeet::Value(g) => Ok(TruthValue::Custom(cs.symbols[g].clone())),
                PairMeet::Bottom | PairMeet::Missing => Err(undefined()),
            },
            BinaryConn::Table(table) => match table[i * cs.n() + j] {
                Some(r) => Ok(TruthValue::Custom(cs.symbols[r].clone())),
                None => Err(undefined()),
            },
        }
    }

    /// Which connectives the structure supports. Builtins support all three.
    pub fn has_conj(&self) -> bool {
        match &self.kind {
            StructureKind::Custom(c) => c.conj != BinaryConn::Undeclared,
            _ => true,
        }
    }

    pub fn has_disj(&self) -> bool {
        match &self.kind {
            StructureKind::Custom(c) => c.disj != BinaryConn::Undeclared,
            _ => true,
        }
    }

    pub fn has_neg(&self) -> bool {
        match &self.kind {
            StructureKind::Custom(c) => c.neg.is_some(),
            _ => true,
        }
    }

    /// Checks the complete-partial-order proviso and connective-table
    /// totality. Builtin structures always pass; custom structures are
    /// checked against their declared order and tables.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        if let StructureKind::Custom(c) = &self.kind {
            let n = c.n();
            for a in 0..n {
                for b in (a + 1)..n {
                    if c.leq_at(a, b) && c.leq_at(b, a) {
                        issues.push(ValidationIssue::OrderCycle {
                            a: c.symbols[a].clone(),
                            b: c.symbols[b].clone(),
                        });
                    }
                }
            }
            // Pairwise glbs suffice for all finite nonempty subsets.
            for x in 0..n {
                for y in x..n {
                    if c.meet[x * n + y] == PairMeet::Missing {
                        issues.push(ValidationIssue::MissingGlb {
                            x: c.symbols[x].clone(),
                            y: c.symbols[y].clone(),
                        });
                    }
                }
            }
            for (conn, name) in [(&c.conj, "conj"), (&c.disj, "disj")] {
                if let BinaryConn::Table(table) = conn {
                    for i in 0..n {
                        for j in 0..n {
                            if table[i * n + j].is_none() {
                                issues.push(ValidationIssue::IncompleteTable {
                                    connective: name.to_string(),
                                    x: c.symbols[i].clone(),
                                    y: c.symbols[j].clone(),
                                });
                            }
                        }
                    }
                }
            }
            if let Some(table) = &c.neg {
                for (i, entry) in table.iter().enumerate() {
                    if entry.is_none() {
                        issues.push(ValidationIssue::IncompleteTable {
                            connective: "neg".to_string(),
                            x: c.symbols[i].clone(),
                            y: String::new(),
                        });
                    }
                }
            }
        }
        ValidationReport { issues }
    }

    /// The set `{y ∈ V | x ≤i y}` of defined values above `x`: the values a
    /// completion may assign where the input has `x`.
    pub fn upward_set(&self, x: &PartialValue) -> Result<ValueRange, ValueError> {
        self.check_partial(x)?;
        match &self.kind {
            StructureKind::UnitFlat => Ok(match x {
                PartialValue::Undefined => ValueRange::interval(rat(0, 1), rat(1, 1)),
                PartialValue::Defined(TruthValue::UnitReal(r)) => {
                    ValueRange::interval(r.clone(), r.clone())
                }
                _ => unreachable!("membership checked above"),
            }),
            StructureKind::UnitRefined => Ok(match x {
                PartialValue::Undefined => ValueRange::interval(rat(0, 1), rat(1, 1)),
                PartialValue::Defined(TruthValue::UnitReal(r)) => {
                    let half = rat_half();
                    if *r == half {
                        ValueRange::interval(rat(0, 1), rat(1, 1))
                    } else if *r > half {
                        ValueRange::interval(r.clone(), rat(1, 1))
                    } else {
                        ValueRange::interval(rat(0, 1), r.clone())
                    }
                }
                _ => unreachable!("membership checked above"),
            }),
            _ => {
                let values = self.values.as_ref().expect("finite kinds are enumerated");
                let mut ups = Vec::new();
                for y in values {
                    if self.leq_info(x, &PartialValue::Defined(y.clone()))? {
                        ups.push(y.clone());
                    }
                }
                Ok(ValueRange::Explicit(ups))
            }
        }
    }

    /// Length in edges of the longest strict `≤i` chain in `V ∪ {u}`.
    /// `None` for infinite kinds.
    pub fn height(&self) -> Option<usize> {
        let values = self.values.as_ref()?;
        let n = values.len();
        // Longest path in the strict order DAG, plus one edge up from u.
        let mut memo = vec![usize::MAX; n];
        fn depth(
            st: &ValuationStructure,
            values: &[TruthValue],
            memo: &mut [usize],
            i: usize,
        ) -> usize {
            if memo[i] != usize::MAX {
                return memo[i];
            }
            let xi = PartialValue::Defined(values[i].clone());
            let mut best = 0;
            for (j, y) in values.iter().enumerate() {
                if j == i {
                    continue;
                }
                let yj = PartialValue::Defined(y.clone());
                if st.leq_info(&yj, &xi).unwrap_or(false) && !st.leq_info(&xi, &yj).unwrap_or(true)
                {
                    best = best.max(1 + depth(st, values, memo, j));
                }
            }
            memo[i] = best;
            best
        }
        let mut height = 0;
        for i in 0..n {
            height = height.max(1 + depth(self, values, &mut memo, i));
        }
        Some(height)
    }

    /// Parses a single value in the structure's canonical syntax:
    /// `t`/`f`, decimals or fractions, `N`/`F`/`T`/`B`, `[lo,hi]`, or bare
    /// custom symbols (a leading `#` is accepted and ignored).
    pub fn parse_value(&self, text: &str) -> Result<TruthValue, ValueError> {
        let text = text.trim();
        let fail = || ValueError::UnparsableValue {
            text: text.to_string(),
            structure: self.kind_name(),
        };
        let not_member = |v: &TruthValue| ValueError::NotAMember {
            value: v.to_string(),
            structure: self.kind_name(),
        };
        match &self.kind {
            StructureKind::Classical => match text {
                "t" => Ok(TruthValue::Classical(true)),
                "f" => Ok(TruthValue::Classical(false)),
                _ => Err(fail()),
            },
            StructureKind::UnitFlat | StructureKind::UnitRefined => {
                let r = parse_rat(text).ok_or_else(fail)?;
                let v = TruthValue::UnitReal(r);
                if self.contains(&v) {
                    Ok(v)
                } else {
                    Err(not_member(&v))
                }
            }
            StructureKind::Levels(m) => {
                let r = parse_rat(text).ok_or_else(fail)?;
                let scaled = &r * rat((*m - 1) as i64, 1);
                if in_unit(&r) && scaled.is_integer() {
                    let step: u32 = scaled.numer().try_into().map_err(|_| fail())?;
                    Ok(TruthValue::Level { step, levels: *m })
                } else {
                    Err(not_member(&TruthValue::UnitReal(r)))
                }
            }
            StructureKind::Belnap => match text {
                "N" => Ok(TruthValue::Belnap(BelnapValue::Neither)),
                "F" => Ok(TruthValue::Belnap(BelnapValue::False)),
                "T" => Ok(TruthValue::Belnap(BelnapValue::True)),
                "B" => Ok(TruthValue::Belnap(BelnapValue::Both)),
                _ => Err(fail()),
            },
            StructureKind::IntervalGrid(_) => {
                let inner = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(fail)?;
                let (lo, hi) = inner.split_once(',').ok_or_else(fail)?;
                let lo = parse_rat(lo).ok_or_else(fail)?;
                let hi = parse_rat(hi).ok_or_else(fail)?;
                let v = TruthValue::Interval { lo, hi };
                if self.contains(&v) {
                    Ok(v)
                } else {
                    Err(not_member(&v))
                }
            }
            StructureKind::Custom(_) => {
                let sym = text.strip_prefix('#').unwrap_or(text);
                let v = TruthValue::Custom(sym.to_string());
                if self.contains(&v) {
                    Ok(v)
                } else {
                    Err(not_member(&v))
                }
            }
        }
    }

    /// Like [`parse_value`](Self::parse_value) but accepting `u` for the
    /// undefined bottom.
    pub fn parse_partial_value(&self, text: &str) -> Result<PartialValue, ValueError> {
        if text.trim() == "u" {
            Ok(PartialValue::Undefined)
        } else {
            Ok(PartialValue::Defined(self.parse_value(text)?))
        }
    }
}

/// The six-value review structure used across the test suite:
/// accept/borderline/reject above the two tendencies above no_tendency,
/// with conjunction as the information meet.
#[cfg(test)]
pub(crate) fn review_structure() -> ValuationStructure {
    ValuationStructure::custom(CustomDecl {
        values: [
            "accept",
            "borderline",
            "reject",
            "tendency_accept",
            "tendency_reject",
            "no_tendency",
        ]
        .map(String::from)
        .to_vec(),
        order: [
            ("no_tendency", "tendency_accept"),
            ("no_tendency", "tendency_reject"),
            ("tendency_accept", "accept"),
            ("tendency_accept", "borderline"),
            ("tendency_reject", "borderline"),
            ("tendency_reject", "reject"),
        ]
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .to_vec(),
        conj: Some(BinaryConnDecl::InfoMeet),
        disj: None,
        neg: None,
    })
    .unwrap()
}
