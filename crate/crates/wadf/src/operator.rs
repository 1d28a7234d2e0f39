//! Interpretations and the characteristic operator.
//!
//! The operator revises an interpretation by mapping each statement to the
//! greatest lower bound of its acceptance condition over all completions
//! of the current parent values. Two engines compute this bound exactly:
//! finite structures enumerate completions with a budget guard, and the
//! unit structures propagate exact image intervals instead of enumerating.

use std::fmt;

use thiserror::Error;

use crate::formula::FormulaError;
use crate::framework::Framework;
use crate::rational::Rat;
use crate::valuation::{PartialValue, TruthValue, ValuationStructure, ValueError};

/// Evaluation budget per operator application when enumerating completions.
pub const DEFAULT_BUDGET: u64 = 1 << 22;

/// An assignment of a value or `u` to every statement, in declaration
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interpretation {
    values: Vec<PartialValue>,
}

impl Interpretation {
    pub fn all_undefined(len: usize) -> Self {
        Interpretation { values: vec![PartialValue::Undefined; len] }
    }

    pub fn from_values(values: Vec<PartialValue>) -> Self {
        Interpretation { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> &PartialValue {
        &self.values[i]
    }

    pub fn set(&mut self, i: usize, v: PartialValue) {
        self.values[i] = v;
    }

    pub fn values(&self) -> &[PartialValue] {
        &self.values
    }

    /// Whether every statement has a defined value.
    pub fn is_total(&self) -> bool {
        self.values.iter().all(|v| !v.is_undefined())
    }

    /// Pointwise information ordering.
    pub fn leq(
        &self,
        other: &Interpretation,
        st: &ValuationStructure,
    ) -> Result<bool, OperatorError> {
        if self.len() != other.len() {
            return Err(OperatorError::WrongArity { expected: self.len(), got: other.len() });
        }
        for (x, y) in self.values.iter().zip(&other.values) {
            if !st.leq_info(x, y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Compact `id=value` rendering in statement order, for messages and
    /// tests.
    pub fn render_pairs(&self, fw: &Framework) -> String {
        let parts: Vec<String> = fw
            .ids()
            .iter()
            .zip(&self.values)
            .map(|(id, v)| format!("{id}={v}"))
            .collect();
        parts.join(" ")
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("interpretation has {got} values, framework has {expected} statements")]
    WrongArity { expected: usize, got: usize },
    #[error(
        "evaluation budget exceeded: limit {budget}, the operator application needs up to {required} evaluations"
    )]
    BudgetExceeded { budget: u64, required: u64 },
    #[error("the {engine} engine does not support the {structure} structure")]
    UnsupportedEngine { engine: &'static str, structure: String },
}

/// Which operator engine to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EngineChoice {
    /// Range propagation on unit structures, enumeration elsewhere.
    #[default]
    Auto,
    Finite,
    Unit,
}

/// Engine selection and resource limits. `None` fields fall back to
/// defaults derived from the framework.
#[derive(Debug, Clone, Copy, Default)]
pub struct EngineConfig {
    pub engine: EngineChoice,
    pub max_steps: Option<u64>,
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Engine {
    Finite,
    Unit,
}

impl EngineConfig {
    pub fn resolved_budget(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_BUDGET)
    }

    /// Iteration guard: finite structures reach their fixpoint within
    /// `|S| * height + 1` applications; the unit structures have no such
    /// bound, so a generous default stands in.
    pub fn resolved_max_steps(&self, fw: &Framework) -> u64 {
        if let Some(s) = self.max_steps {
            return s;
        }
        let n = fw.len() as u64;
        match fw.structure().height() {
            Some(h) => n * h as u64 + 1,
            None => 2 * n + 8,
        }
    }

    fn resolved_engine(&self, fw: &Framework) -> Result<Engine, OperatorError> {
        let st = fw.structure();
        match self.engine {
            EngineChoice::Auto => {
                Ok(if st.is_unit() { Engine::Unit } else { Engine::Finite })
            }
            EngineChoice::Finite => {
                if st.is_finite() {
                    Ok(Engine::Finite)
                } else {
                    Err(OperatorError::UnsupportedEngine {
                        engine: "finite",
                        structure: st.kind_name(),
                    })
                }
            }
            EngineChoice::Unit => {
                if st.is_unit() {
                    Ok(Engine::Unit)
                } else {
                    Err(OperatorError::UnsupportedEngine {
                        engine: "unit",
                        structure: st.kind_name(),
                    })
                }
            }
        }
    }
}

fn check_arity(fw: &Framework, v: &Interpretation) -> Result<(), OperatorError> {
    if fw.len() == v.len() {
        Ok(())
    } else {
        Err(OperatorError::WrongArity { expected: fw.len(), got: v.len() })
    }
}

/// One application of the characteristic operator.
pub fn gamma(
    fw: &Framework,
    v: &Interpretation,
    config: &EngineConfig,
) -> Result<Interpretation, OperatorError> {
    check_arity(fw, v)?;
    match config.resolved_engine(fw)? {
        Engine::Finite => gamma_finite(fw, v, config.resolved_budget()),
        Engine::Unit => gamma_unit(fw, v),
    }
}

fn gamma_finite(
    fw: &Framework,
    v: &Interpretation,
    budget: u64,
) -> Result<Interpretation, OperatorError> {
    let st = fw.structure();
    // Upward set of each statement's current value: the values its
    // completions may take.
    let mut ups: Vec<Vec<TruthValue>> = Vec::with_capacity(fw.len());
    for i in 0..fw.len() {
        let range = st.upward_set(v.get(i))?;
        ups.push(range.as_explicit().expect("finite structure").to_vec());
    }
    // Worst-case evaluation count, assuming no early exit.
    let mut required: u64 = 0;
    for s in 0..fw.len() {
        let prod = fw
            .parents(s)
            .iter()
            .fold(1u64, |acc, &p| acc.saturating_mul(ups[p].len() as u64));
        required = required.saturating_add(prod);
    }

    let mut used: u64 = 0;
    let mut out = Vec::with_capacity(fw.len());
    for s in 0..fw.len() {
        let parents = fw.parents(s);
        let formula = fw.acceptance(s);
        // Streamed meet over all parent completions, stopping once the
        // running bound hits u.
        let mut assignment: Vec<Option<TruthValue>> = vec![None; fw.len()];
        let mut odometer = vec![0usize; parents.len()];
        let mut acc: Option<PartialValue> = None;
        'completions: loop {
            for (k, &p) in parents.iter().enumerate() {
                assignment[p] = Some(ups[p][odometer[k]].clone());
            }
            used += 1;
            if used > budget {
                return Err(OperatorError::BudgetExceeded { budget, required });
            }
            let value = formula.evaluate(st, &|atom| {
                fw.index_of(atom).and_then(|i| assignment[i].clone())
            })?;
            let next = match &acc {
                None => PartialValue::Defined(value),
                Some(prev) => st.glb([prev, &PartialValue::Defined(value)])?,
            };
            let done = next.is_undefined();
            acc = Some(next);
            if done {
                break;
            }
            // Advance to the next completion.
            let mut k = 0;
            loop {
                if k == parents.len() {
                    break 'completions;
                }
                odometer[k] += 1;
                if odometer[k] < ups[parents[k]].len() {
                    break;
                }
                odometer[k] = 0;
                k += 1;
            }
        }
        out.push(acc.expect("at least one completion exists"));
    }
    Ok(Interpretation::from_values(out))
}

fn gamma_unit(fw: &Framework, v: &Interpretation) -> Result<Interpretation, OperatorError> {
    let st = fw.structure();
    let mut boxes: Vec<(Rat, Rat)> = Vec::with_capacity(fw.len());
    for i in 0..fw.len() {
        let range = st.upward_set(v.get(i))?;
        let (lo, hi) = range.as_interval().expect("unit upward sets are intervals");
        boxes.push((lo.clone(), hi.clone()));
    }
    let mut out = Vec::with_capacity(fw.len());
    for s in 0..fw.len() {
        let (lo, hi) = fw.acceptance(s).range_evaluate(st, &|atom| {
            fw.index_of(atom).map(|i| boxes[i].clone())
        })?;
        out.push(st.glb_of_unit_interval(&lo, &hi)?);
    }
    Ok(Interpretation::from_values(out))
}

/// Number of completions of an interpretation: total interpretations
/// extending it pointwise. `None` when infinite.
pub fn completion_count(fw: &Framework, v: &Interpretation) -> Result<Option<u64>, OperatorError> {
    check_arity(fw, v)?;
    let st = fw.structure();
    let mut count: u64 = 1;
    for i in 0..fw.len() {
        let range = st.upward_set(v.get(i))?;
        match (range.as_explicit(), range.as_interval()) {
            (Some(vs), _) => count = count.saturating_mul(vs.len() as u64),
            (None, Some((lo, hi))) => {
                if lo != hi {
                    return Ok(None);
                }
            }
            (None, None) => unreachable!("ranges are explicit or interval"),
        }
    }
    Ok(Some(count))
}

/// Result of iterating the operator from the least interpretation.
#[derive(Debug, Clone)]
pub enum IterationOutcome {
    /// The least fixpoint, with the number of operator applications
    /// performed (the last one confirms the fixpoint).
    Grounded { interpretation: Interpretation, steps: u64 },
    /// The step guard ran out before a fixpoint appeared.
    NotConverged { last: Interpretation, limit: u64 },
}

/// Iterates the operator from the all-undefined interpretation until the
/// first exact fixpoint or the step guard.
pub fn kleene_iterate(
    fw: &Framework,
    config: &EngineConfig,
) -> Result<IterationOutcome, OperatorError> {
    let limit = config.resolved_max_steps(fw);
    let mut v = Interpretation::all_undefined(fw.len());
    let mut steps = 0u64;
    loop {
        if steps >= limit {
            return Ok(IterationOutcome::NotConverged { last: v, limit });
        }
        let w = gamma(fw, &v, config)?;
        steps += 1;
        if w == v {
            return Ok(IterationOutcome::Grounded { interpretation: v, steps });
        }
        v = w;
    }
}

#[derive(Debug, Error)]
pub enum InterpretationError {
    #[error("interpretation must be a JSON object")]
    NotAnObject,
    #[error("interpretation names unknown statement {0}")]
    UnknownStatement(String),
    #[error("interpretation is missing statement {0}")]
    MissingStatement(String),
    #[error("statement {0}: value must be a JSON string")]
    NotAString(String),
    #[error("statement {id}: {source}")]
    BadValue { id: String, source: ValueError },
}

/// Renders an interpretation as a JSON object in statement order, values
/// in canonical syntax with `u` for undefined.
pub fn interpretation_to_json(fw: &Framework, v: &Interpretation) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for (i, id) in fw.ids().iter().enumerate() {
        map.insert(id.clone(), serde_json::Value::String(v.get(i).to_string()));
    }
    serde_json::Value::Object(map)
}

/// Reads an interpretation from a JSON object; every statement must be
/// present.
pub fn interpretation_from_json(
    fw: &Framework,
    json: &serde_json::Value,
) -> Result<Interpretation, InterpretationError> {
    let obj = json.as_object().ok_or(InterpretationError::NotAnObject)?;
    for key in obj.keys() {
        if fw.index_of(key).is_none() {
            return Err(InterpretationError::UnknownStatement(key.clone()));
        }
    }
    let mut values = Vec::with_capacity(fw.len());
    for id in fw.ids() {
        let value = obj
            .get(id)
            .ok_or_else(|| InterpretationError::MissingStatement(id.clone()))?;
        let text = value
            .as_str()
            .ok_or_else(|| InterpretationError::NotAString(id.clone()))?;
        let parsed = fw
            .structure()
            .parse_partial_value(text)
            .map_err(|source| InterpretationError::BadValue { id: id.clone(), source })?;
        values.push(parsed);
    }
    Ok(Interpretation::from_values(values))
}
