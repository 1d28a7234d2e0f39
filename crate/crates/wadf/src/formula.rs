//! Acceptance-condition formulas: abstract syntax, a structure-aware
//! parser, canonical rendering, evaluation, and exact range propagation
//! over the unit interval.

use std::fmt;

use thiserror::Error;

use crate::rational::{complement, rat_half, Rat};
use crate::valuation::{StructureKind, TruthValue, ValuationStructure, ValueError};

/// A set of truth values a statement may take, either listed explicitly or
/// described as a subinterval of the unit interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueRange {
    Explicit(Vec<TruthValue>),
    Interval { lo: Rat, hi: Rat },
}

impl ValueRange {
    pub fn interval(lo: Rat, hi: Rat) -> Self {
        ValueRange::Interval { lo, hi }
    }

    pub fn as_interval(&self) -> Option<(&Rat, &Rat)> {
        match self {
            ValueRange::Interval { lo, hi } => Some((lo, hi)),
            ValueRange::Explicit(_) => None,
        }
    }

    pub fn as_explicit(&self) -> Option<&[TruthValue]> {
        match self {
            ValueRange::Explicit(vs) => Some(vs),
            ValueRange::Interval { .. } => None,
        }
    }
}

/// A propositional formula over atoms, value constants, conjunction,
/// disjunction, and negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom(String),
    Const(TruthValue),
    Conj(Box<Formula>, Box<Formula>),
    Disj(Box<Formula>, Box<Formula>),
    Neg(Box<Formula>),
}

#[derive(Debug, Error)]
pub enum FormulaError {
    #[error("atom {atom} has no assigned value")]
    UnboundAtom { atom: String },
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error("range propagation requires a unit structure, not {structure}")]
    NotUnit { structure: String },
}

/// A syntax error with the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at offset {offset}: {message}")]
pub struct FormulaParseError {
    pub offset: usize,
    pub message: String,
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn conj(l: Formula, r: Formula) -> Formula {
        Formula::Conj(Box::new(l), Box::new(r))
    }

    pub fn disj(l: Formula, r: Formula) -> Formula {
        Formula::Disj(Box::new(l), Box::new(r))
    }

    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    /// Atoms in first-occurrence order, deduplicated.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            Formula::Atom(a) => {
                if !out.iter().any(|x| x == a) {
                    out.push(a.clone());
                }
            }
            Formula::Const(_) => {}
            Formula::Conj(l, r) | Formula::Disj(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
            Formula::Neg(f) => f.collect_atoms(out),
        }
    }

    /// All constant leaves, in syntactic order.
    pub fn constants(&self) -> Vec<&TruthValue> {
        let mut out = Vec::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants<'a>(&'a self, out: &mut Vec<&'a TruthValue>) {
        match self {
            Formula::Atom(_) => {}
            Formula::Const(c) => out.push(c),
            Formula::Conj(l, r) | Formula::Disj(l, r) => {
                l.collect_constants(out);
                r.collect_constants(out);
            }
            Formula::Neg(f) => f.collect_constants(out),
        }
    }

    /// Evaluates under a total assignment of the formula's atoms.
    pub fn evaluate<F>(&self, st: &ValuationStructure, assign: &F) -> Result<TruthValue, FormulaError>
    where
        F: Fn(&str) -> Option<TruthValue>,
    {
        match self {
            Formula::Atom(a) => {
                assign(a).ok_or_else(|| FormulaError::UnboundAtom { atom: a.clone() })
            }
            Formula::Const(c) => Ok(c.clone()),
            Formula::Conj(l, r) => {
                Ok(st.eval_conj(&l.evaluate(st, assign)?, &r.evaluate(st, assign)?)?)
            }
            Formula::Disj(l, r) => {
                Ok(st.eval_disj(&l.evaluate(st, assign)?, &r.evaluate(st, assign)?)?)
            }
            Formula::Neg(f) => Ok(st.eval_neg(&f.evaluate(st, assign)?)?),
        }
    }

    /// Replaces atoms for which `map` yields a value by the constant.
    pub fn substitute<F>(&self, map: &F) -> Formula
    where
        F: Fn(&str) -> Option<TruthValue>,
    {
        match self {
            Formula::Atom(a) => match map(a) {
                Some(v) => Formula::Const(v),
                None => self.clone(),
            },
            Formula::Const(_) => self.clone(),
            Formula::Conj(l, r) => Formula::conj(l.substitute(map), r.substitute(map)),
            Formula::Disj(l, r) => Formula::disj(l.substitute(map), r.substitute(map)),
            Formula::Neg(f) => Formula::neg(f.substitute(map)),
        }
    }

    /// Folds negations applied to constants, so substituted formulas render
    /// with plain values. Binary connectives are left intact.
    pub fn fold_neg_constants(&self, st: &ValuationStructure) -> Formula {
        match self {
            Formula::Atom(_) | Formula::Const(_) => self.clone(),
            Formula::Conj(l, r) => {
                Formula::conj(l.fold_neg_constants(st), r.fold_neg_constants(st))
            }
            Formula::Disj(l, r) => {
                Formula::disj(l.fold_neg_constants(st), r.fold_neg_constants(st))
            }
            Formula::Neg(f) => {
                let inner = f.fold_neg_constants(st);
                if let Formula::Const(c) = &inner {
                    if let Ok(v) = st.eval_neg(c) {
                        return Formula::Const(v);
                    }
                }
                Formula::neg(inner)
            }
        }
    }

    /// Exact image interval of the formula when every atom ranges over its
    /// box, for the unit structures.
    ///
    /// Interval arithmetic over min/max/complement is exact as long as every
    /// atom occurs at most once. Atoms with several occurrences are pinned
    /// to candidate points (box endpoints, 1/2, and constant breakpoints),
    /// and the slices are combined. Every formula is piecewise linear in
    /// each atom with slopes in {-1, 0, 1}, so each one-variable extremum is
    /// attained at one of those candidates; this keeps the combined interval
    /// exact.
    pub fn range_evaluate<F>(
        &self,
        st: &ValuationStructure,
        boxes: &F,
    ) -> Result<(Rat, Rat), FormulaError>
    where
        F: Fn(&str) -> Option<(Rat, Rat)>,
    {
        if !st.is_unit() {
            return Err(FormulaError::NotUnit { structure: st.kind_name() });
        }
        let atoms = self.atoms();
        let mut counts = vec![0usize; atoms.len()];
        self.count_occurrences(&atoms, &mut counts);
        let mut base: Vec<(Rat, Rat)> = Vec::with_capacity(atoms.len());
        for a in &atoms {
            base.push(boxes(a).ok_or_else(|| FormulaError::UnboundAtom { atom: a.clone() })?);
        }

        let mut breakpoints = vec![rat_half()];
        for c in self.constants() {
            if let TruthValue::UnitReal(r) = c {
                breakpoints.push(r.clone());
                breakpoints.push(complement(r));
            }
        }

        // Pin each repeated non-degenerate atom to its candidate points.
        let mut pinned: Vec<(usize, Vec<Rat>)> = Vec::new();
        for (i, (lo, hi)) in base.iter().enumerate() {
            if counts[i] < 2 || lo == hi {
                continue;
            }
            let mut cands = vec![lo.clone(), hi.clone()];
            for b in &breakpoints {
                if lo < b && b < hi {
                    cands.push(b.clone());
                }
            }
            cands.sort();
            cands.dedup();
            pinned.push((i, cands));
        }

        let mut env = base.clone();
        let mut result: Option<(Rat, Rat)> = None;
        let mut odometer = vec![0usize; pinned.len()];
        loop {
            for (k, (i, cands)) in pinned.iter().enumerate() {
                let v = cands[odometer[k]].clone();
                env[*i] = (v.clone(), v);
            }
            let (lo, hi) = self.interval_pass(&atoms, &env)?;
            result = Some(match result {
                None => (lo, hi),
                Some((rlo, rhi)) => (rlo.min(lo), rhi.max(hi)),
            });
            // Advance the odometer; stop after the last combination.
            let mut k = 0;
            loop {
                if k == pinned.len() {
                    return Ok(result.expect("at least one pass runs"));
                }
                odometer[k] += 1;
                if odometer[k] < pinned[k].1.len() {
                    break;
                }
                odometer[k] = 0;
                k += 1;
            }
        }
    }

    fn count_occurrences(&self, atoms: &[String], counts: &mut [usize]) {
        match self {
            Formula::Atom(a) => {
                if let Some(i) = atoms.iter().position(|x| x == a) {
                    counts[i] += 1;
                }
            }
            Formula::Const(_) => {}
            Formula::Conj(l, r) | Formula::Disj(l, r) => {
                l.count_occurrences(atoms, counts);
                r.count_occurrences(atoms, counts);
            }
            Formula::Neg(f) => f.count_occurrences(atoms, counts),
        }
    }

    /// One pass of plain interval arithmetic; exact when every atom bound
    /// to a non-degenerate interval occurs at most once.
    fn interval_pass(
        &self,
        atoms: &[String],
        env: &[(Rat, Rat)],
    ) -> Result<(Rat, Rat), FormulaError> {
        Ok(match self {
            Formula::Atom(a) => {
                let i = atoms.iter().position(|x| x == a).expect("atom listed");
                env[i].clone()
            }
            Formula::Const(c) => match c {
                TruthValue::UnitReal(r) => (r.clone(), r.clone()),
                other => {
                    return Err(FormulaError::Value(ValueError::NotAMember {
                        value: other.to_string(),
                        structure: "unit".to_string(),
                    }))
                }
            },
            Formula::Conj(l, r) => {
                let (a, b) = l.interval_pass(atoms, env)?;
                let (c, d) = r.interval_pass(atoms, env)?;
                (a.min(c), b.min(d))
            }
            Formula::Disj(l, r) => {
                let (a, b) = l.interval_pass(atoms, env)?;
                let (c, d) = r.interval_pass(atoms, env)?;
                (a.max(c), b.max(d))
            }
            Formula::Neg(f) => {
                let (a, b) = f.interval_pass(atoms, env)?;
                (complement(&b), complement(&a))
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Disj(..) => 0,
            Formula::Conj(..) => 1,
            Formula::Neg(..) => 2,
            Formula::Atom(_) | Formula::Const(_) => 3,
        }
    }

    /// Canonical rendering with minimal parentheses; binary connectives
    /// associate to the left.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, min_prec: u8) {
        let prec = self.precedence();
        let parens = prec < min_prec;
        if parens {
            out.push('(');
        }
        match self {
            Formula::Atom(a) => out.push_str(a),
            Formula::Const(c) => match c {
                TruthValue::Custom(sym) => {
                    out.push('#');
                    out.push_str(sym);
                }
                other => out.push_str(&other.to_string()),
            },
            Formula::Conj(l, r) => {
                l.render_into(out, 1);
                out.push_str(" & ");
                r.render_into(out, 2);
            }
            Formula::Disj(l, r) => {
                l.render_into(out, 0);
                out.push_str(" | ");
                r.render_into(out, 1);
            }
            Formula::Neg(f) => {
                out.push('!');
                f.render_into(out, 2);
            }
        }
        if parens {
            out.push(')');
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Number(String),
    Interval(String, String),
    HashIdent(String),
    And,
    Or,
    Not,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, FormulaParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    let err = |offset: usize, message: String| FormulaParseError { offset, message };
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        match c {
            '&' => {
                tokens.push((start, Token::And));
                i += 1;
            }
            '|' => {
                tokens.push((start, Token::Or));
                i += 1;
            }
            '!' => {
                tokens.push((start, Token::Not));
                i += 1;
            }
            '(' => {
                tokens.push((start, Token::LParen));
                i += 1;
            }
            ')' => {
                tokens.push((start, Token::RParen));
                i += 1;
            }
            '#' => {
                i += 1;
                let ident_start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                if i == ident_start {
                    return Err(err(start, "expected a value symbol after '#'".to_string()));
                }
                tokens.push((start, Token::HashIdent(text[ident_start..i].to_string())));
            }
            '[' => {
                let number = |i: &mut usize| -> Result<String, FormulaParseError> {
                    let s = *i;
                    while *i < bytes.len()
                        && ((bytes[*i] as char).is_ascii_digit()
                            || bytes[*i] == b'.'
                            || bytes[*i] == b'/')
                    {
                        *i += 1;
                    }
                    if *i == s {
                        Err(err(s, "expected a number".to_string()))
                    } else {
                        Ok(text[s..*i].to_string())
                    }
                };
                i += 1;
                let lo = number(&mut i)?;
                if i >= bytes.len() || bytes[i] != b',' {
                    return Err(err(i, "expected ',' in interval constant".to_string()));
                }
                i += 1;
                let hi = number(&mut i)?;
                if i >= bytes.len() || bytes[i] != b']' {
                    return Err(err(i, "expected ']' closing interval constant".to_string()));
                }
                i += 1;
                tokens.push((start, Token::Interval(lo, hi)));
            }
            _ if c.is_ascii_digit() || c == '.' => {
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_digit()
                        || bytes[i] == b'.'
                        || bytes[i] == b'/')
                {
                    i += 1;
                }
                tokens.push((start, Token::Number(text[start..i].to_string())));
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push((start, Token::Ident(text[start..i].to_string())));
            }
            _ => return Err(err(start, format!("unexpected character {c:?}"))),
        }
    }
    Ok(tokens)
}

/// Identifier tokens that denote constants rather than atoms in the given
/// structure.
pub fn constant_idents(st: &ValuationStructure) -> &'static [&'static str] {
    match st.kind() {
        StructureKind::Classical => &["t", "f"],
        StructureKind::Belnap => &["N", "F", "T", "B"],
        _ => &[],
    }
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    st: &'a ValuationStructure,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(usize, Token)> {
        self.tokens.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |(o, _)| *o)
    }

    fn error(&self, message: String) -> FormulaParseError {
        FormulaParseError { offset: self.offset(), message }
    }

    fn eat(&mut self, want: &Token, what: &str) -> Result<(), FormulaParseError> {
        match self.peek() {
            Some((_, t)) if t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn disj(&mut self) -> Result<Formula, FormulaParseError> {
        let mut f = self.conj()?;
        while matches!(self.peek(), Some((_, Token::Or))) {
            self.pos += 1;
            f = Formula::disj(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula, FormulaParseError> {
        let mut f = self.unary()?;
        while matches!(self.peek(), Some((_, Token::And))) {
            self.pos += 1;
            f = Formula::conj(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, FormulaParseError> {
        if matches!(self.peek(), Some((_, Token::Not))) {
            self.pos += 1;
            return Ok(Formula::neg(self.unary()?));
        }
        self.primary()
    }

    fn constant(&self, offset: usize, text: &str) -> Result<Formula, FormulaParseError> {
        match self.st.parse_value(text) {
            Ok(v) => Ok(Formula::Const(v)),
            Err(e) => Err(FormulaParseError { offset, message: e.to_string() }),
        }
    }

    fn primary(&mut self) -> Result<Formula, FormulaParseError> {
        let (offset, token) = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.error("expected a formula".to_string())),
        };
        self.pos += 1;
        match token {
            Token::LParen => {
                let f = self.disj()?;
                self.eat(&Token::RParen, "')'")?;
                Ok(f)
            }
            Token::Ident(name) => {
                if constant_idents(self.st).contains(&name.as_str()) {
                    self.constant(offset, &name)
                } else {
                    Ok(Formula::Atom(name))
                }
            }
            Token::Number(text) => self.constant(offset, &text),
            Token::Interval(lo, hi) => self.constant(offset, &format!("[{lo},{hi}]")),
            Token::HashIdent(sym) => self.constant(offset, &format!("#{sym}")),
            Token::And | Token::Or | Token::Not | Token::RParen => {
                self.pos -= 1;
                Err(self.error("expected a formula".to_string()))
            }
        }
    }
}

/// Parses a formula in the concrete syntax (`&`, `|`, `!`, parentheses,
/// structure constants). Constant tokens are classified by the structure.
pub fn parse_formula(
    text: &str,
    st: &ValuationStructure,
) -> Result<Formula, FormulaParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0, st, end: text.len() };
    let f = parser.disj()?;
    if parser.peek().is_some() {
        return Err(parser.error("unexpected trailing input".to_string()));
    }
    Ok(f)
}
