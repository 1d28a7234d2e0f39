//! Frameworks: statements with acceptance conditions over a valuation
//! structure, their dependency graph, and the framework file format.
//!
//! A framework file is line oriented. Lines whose first non-blank
//! character is `#` are comments. The first significant line declares the
//! structure; a `custom` structure is followed by its `value`, `order`,
//! and connective lines; the remaining lines declare statements:
//!
//! ```text
//! structure unit-flat
//! statement a: 0.8
//! statement b: !b
//! ```

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{constant_idents, parse_formula, Formula};
use crate::valuation::{BinaryConnDecl, CustomDecl, StructureKind, ValuationStructure};

#[derive(Debug, Error)]
pub enum FrameworkError {
    #[error("invalid valuation structure: {0}")]
    InvalidStructure(String),
    #[error("duplicate statement id {id}")]
    DuplicateStatement { id: String },
    #[error("statement id {id} collides with a constant of the {structure} structure")]
    ReservedStatementId { id: String, structure: String },
    #[error("statement {statement}: atom {atom} is not a declared statement")]
    UndeclaredAtom { statement: String, atom: String },
    #[error("statement {statement}: constant {value} is not a value of the {structure} structure")]
    ForeignConstant { statement: String, value: String, structure: String },
    #[error("statement {statement} uses {connective}, which the structure does not define")]
    MissingConnective { statement: String, connective: String },
}

/// A file syntax or validation error located by line number (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FileParseError {
    pub line: usize,
    pub message: String,
}

/// A framework: a valuation structure and an ordered list of statements,
/// each with its acceptance condition. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Framework {
    structure: ValuationStructure,
    ids: Vec<String>,
    acceptance: Vec<Formula>,
    /// Indices of the statements each acceptance condition mentions,
    /// sorted ascending.
    parents: Vec<Vec<usize>>,
}

impl Framework {
    pub fn new(
        structure: ValuationStructure,
        statements: Vec<(String, Formula)>,
    ) -> Result<Framework, FrameworkError> {
        let report = structure.validate();
        if !report.is_valid() {
            let joined: Vec<String> = report.issues.iter().map(|i| i.to_string()).collect();
            return Err(FrameworkError::InvalidStructure(joined.join("; ")));
        }

        let mut ids = Vec::with_capacity(statements.len());
        let mut acceptance = Vec::with_capacity(statements.len());
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        for (id, formula) in statements {
            if constant_idents(&structure).contains(&id.as_str()) {
                return Err(FrameworkError::ReservedStatementId {
                    id,
                    structure: structure.kind_name(),
                });
            }
            if index.insert(id.clone(), ids.len()).is_some() {
                return Err(FrameworkError::DuplicateStatement { id });
            }
            ids.push(id);
            acceptance.push(formula);
        }

        let mut parents = Vec::with_capacity(ids.len());
        for (i, formula) in acceptance.iter().enumerate() {
            for atom in formula.atoms() {
                if !index.contains_key(&atom) {
                    return Err(FrameworkError::UndeclaredAtom {
                        statement: ids[i].clone(),
                        atom,
                    });
                }
            }
            for value in formula.constants() {
                if !structure.contains(value) {
                    return Err(FrameworkError::ForeignConstant {
                        statement: ids[i].clone(),
                        value: value.to_string(),
                        structure: structure.kind_name(),
                    });
                }
            }
            if let Some(conn) = missing_connective(formula, &structure) {
                return Err(FrameworkError::MissingConnective {
                    statement: ids[i].clone(),
                    connective: conn.to_string(),
                });
            }
            let mut par: Vec<usize> = formula.atoms().iter().map(|a| index[a]).collect();
            par.sort_unstable();
            parents.push(par);
        }

        Ok(Framework { structure, ids, acceptance, parents })
    }

    pub fn structure(&self) -> &ValuationStructure {
        &self.structure
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Statement ids in declaration order.
    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn acceptance(&self, i: usize) -> &Formula {
        &self.acceptance[i]
    }

    /// Indices of the statements the acceptance condition of `i` mentions.
    pub fn parents(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    /// Dependency edges `(parent, child)`, sorted.
    pub fn links(&self) -> Vec<(usize, usize)> {
        let mut links = Vec::new();
        for (child, pars) in self.parents.iter().enumerate() {
            for &p in pars {
                links.push((p, child));
            }
        }
        links.sort_unstable();
        links
    }

    /// Whether the dependency graph has no cycle; a statement mentioning
    /// itself counts as a cycle.
    pub fn is_acyclic(&self) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            White,
            Grey,
            Black,
        }
        let mut marks = vec![Mark::White; self.len()];
        // Iterative DFS along child -> parent edges.
        for start in 0..self.len() {
            if marks[start] != Mark::White {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            marks[start] = Mark::Grey;
            while let Some(&mut (node, ref mut next)) = stack.last_mut() {
                if let Some(&p) = self.parents[node].get(*next) {
                    *next += 1;
                    match marks[p] {
                        Mark::Grey => return false,
                        Mark::White => {
                            marks[p] = Mark::Grey;
                            stack.push((p, 0));
                        }
                        Mark::Black => {}
                    }
                } else {
                    marks[node] = Mark::Black;
                    stack.pop();
                }
            }
        }
        true
    }
}

fn missing_connective(formula: &Formula, st: &ValuationStructure) -> Option<&'static str> {
    match formula {
        Formula::Atom(_) | Formula::Const(_) => None,
        Formula::Conj(l, r) => {
            if !st.has_conj() {
                return Some("conj");
            }
            missing_connective(l, st).or_else(|| missing_connective(r, st))
        }
        Formula::Disj(l, r) => {
            if !st.has_disj() {
                return Some("disj");
            }
            missing_connective(l, st).or_else(|| missing_connective(r, st))
        }
        Formula::Neg(f) => {
            if !st.has_neg() {
                return Some("neg");
            }
            missing_connective(f, st)
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Lines<'a> {
    /// `(line number, content)` for non-blank, non-comment lines.
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Lines { items, pos: 0 }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.items.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.peek();
        if item.is_some() {
            self.pos += 1;
        }
        item
    }
}

fn err(line: usize, message: impl Into<String>) -> FileParseError {
    FileParseError { line, message: message.into() }
}

fn parse_structure_head(
    line: usize,
    rest: &str,
) -> Result<Option<ValuationStructure>, FileParseError> {
    let mut words = rest.split_whitespace();
    let kind = words.next().ok_or_else(|| err(line, "expected a structure kind"))?;
    let arg = words.next();
    if words.next().is_some() {
        return Err(err(line, "unexpected trailing input after structure kind"));
    }
    let m = |arg: Option<&str>| -> Result<u32, FileParseError> {
        let text = arg.ok_or_else(|| err(line, format!("structure {kind} needs a level count")))?;
        text.parse::<u32>()
            .map_err(|_| err(line, format!("invalid level count {text:?}")))
    };
    let plain = |st: ValuationStructure| -> Result<Option<ValuationStructure>, FileParseError> {
        if arg.is_some() {
            Err(err(line, format!("structure {kind} takes no argument")))
        } else {
            Ok(Some(st))
        }
    };
    match kind {
        "classical" => plain(ValuationStructure::classical()),
        "unit-flat" => plain(ValuationStructure::unit_flat()),
        "unit-refined" => plain(ValuationStructure::unit_refined()),
        "belnap" => plain(ValuationStructure::belnap()),
        "w" => ValuationStructure::levels(m(arg)?)
            .map(Some)
            .map_err(|e| err(line, e.to_string())),
        "interval-grid" => ValuationStructure::interval_grid(m(arg)?)
            .map(Some)
            .map_err(|e| err(line, e.to_string())),
        "custom" => {
            if arg.is_some() {
                return Err(err(line, "structure custom takes no argument"));
            }
            Ok(None)
        }
        other => Err(err(line, format!("unknown structure kind {other:?}"))),
    }
}

fn parse_binary_table(line: usize, text: &str) -> Result<BinaryConnDecl, FileParseError> {
    let mut entries = Vec::new();
    for part in text.split(',') {
        let (operands, result) = part
            .split_once("->")
            .ok_or_else(|| err(line, "table entry needs '->'"))?;
        let ops: Vec<&str> = operands.split_whitespace().collect();
        let result = result.trim();
        if ops.len() != 2 || !is_identifier(result) {
            return Err(err(line, format!("malformed table entry {:?}", part.trim())));
        }
        entries.push((ops[0].to_string(), ops[1].to_string(), result.to_string()));
    }
    Ok(BinaryConnDecl::Table(entries))
}

fn parse_unary_table(line: usize, text: &str) -> Result<Vec<(String, String)>, FileParseError> {
    let mut entries = Vec::new();
    for part in text.split(',') {
        let (operand, result) = part
            .split_once("->")
            .ok_or_else(|| err(line, "table entry needs '->'"))?;
        let (operand, result) = (operand.trim(), result.trim());
        if !is_identifier(operand) || !is_identifier(result) {
            return Err(err(line, format!("malformed table entry {:?}", part.trim())));
        }
        entries.push((operand.to_string(), result.to_string()));
    }
    Ok(entries)
}

fn parse_custom_block(lines: &mut Lines) -> Result<ValuationStructure, FileParseError> {
    let mut decl = CustomDecl::default();
    let mut decl_line = 0;
    while let Some((line, content)) = lines.peek() {
        if content.starts_with("statement") {
            break;
        }
        lines.next();
        decl_line = line;
        if let Some(rest) = content.strip_prefix("value ") {
            let sym = rest.trim();
            if !is_identifier(sym) {
                return Err(err(line, format!("invalid value symbol {sym:?}")));
            }
            decl.values.push(sym.to_string());
        } else if let Some(rest) = content.strip_prefix("order ") {
            let (lo, hi) = rest
                .split_once('<')
                .ok_or_else(|| err(line, "order line needs the form 'order a < b'"))?;
            let (lo, hi) = (lo.trim(), hi.trim());
            if !is_identifier(lo) || !is_identifier(hi) {
                return Err(err(line, "order line needs the form 'order a < b'"));
            }
            decl.order.push((lo.to_string(), hi.to_string()));
        } else if let Some(rest) = content.strip_prefix("conj") {
            decl.conj = Some(parse_binary_decl(line, rest)?);
        } else if let Some(rest) = content.strip_prefix("disj") {
            decl.disj = Some(parse_binary_decl(line, rest)?);
        } else if let Some(rest) = content.strip_prefix("neg") {
            let body = connective_body(line, rest)?;
            let table = body
                .strip_prefix("table:")
                .ok_or_else(|| err(line, "neg must be declared as 'neg = table: ...'"))?;
            decl.neg = Some(parse_unary_table(line, table)?);
        } else {
            return Err(err(line, format!("unrecognized line {content:?}")));
        }
    }
    ValuationStructure::custom(decl).map_err(|e| err(decl_line, e.to_string()))
}

fn connective_body<'a>(line: usize, rest: &'a str) -> Result<&'a str, FileParseError> {
    rest.trim_start()
        .strip_prefix('=')
        .map(str::trim)
        .ok_or_else(|| err(line, "connective line needs '='"))
}

fn parse_binary_decl(line: usize, rest: &str) -> Result<BinaryConnDecl, FileParseError> {
    let body = connective_body(line, rest)?;
    if body == "info-meet" {
        Ok(BinaryConnDecl::InfoMeet)
    } else if let Some(table) = body.strip_prefix("table:") {
        parse_binary_table(line, table)
    } else {
        Err(err(line, "connective must be 'info-meet' or 'table: ...'"))
    }
}

/// Parses a framework file. Errors carry the 1-based line number.
pub fn parse_framework(text: &str) -> Result<Framework, FileParseError> {
    let mut lines = Lines::new(text);
    let (head_line, head) = lines
        .next()
        .ok_or_else(|| err(1, "empty framework file"))?;
    let rest = head
        .strip_prefix("structure")
        .ok_or_else(|| err(head_line, "framework file must start with a structure line"))?;
    let structure = match parse_structure_head(head_line, rest)? {
        Some(st) => st,
        None => parse_custom_block(&mut lines)?,
    };

    let mut statements = Vec::new();
    let mut id_lines: Vec<(String, usize)> = Vec::new();
    while let Some((line, content)) = lines.next() {
        let rest = content
            .strip_prefix("statement ")
            .ok_or_else(|| err(line, format!("expected a statement line, got {content:?}")))?;
        let (id, formula_text) = rest
            .split_once(':')
            .ok_or_else(|| err(line, "statement line needs the form 'statement id: formula'"))?;
        let id = id.trim();
        if !is_identifier(id) {
            return Err(err(line, format!("invalid statement id {id:?}")));
        }
        let formula = parse_formula(formula_text, &structure)
            .map_err(|e| err(line, format!("in acceptance condition: {e}")))?;
        statements.push((id.to_string(), formula));
        id_lines.push((id.to_string(), line));
    }

    Framework::new(structure, statements).map_err(|e| {
        // Statement-scoped errors point at the statement's own line. A
        // duplicate id resolves to its later occurrence.
        let by_id = |id: &str, last: bool| {
            let hits = id_lines.iter().filter(|(x, _)| x == id);
            let hit = if last { hits.last() } else { hits.clone().next() };
            hit.map_or(head_line, |(_, line)| *line)
        };
        let line = match &e {
            FrameworkError::DuplicateStatement { id } => by_id(id, true),
            FrameworkError::ReservedStatementId { id, .. } => by_id(id, false),
            FrameworkError::UndeclaredAtom { statement, .. }
            | FrameworkError::ForeignConstant { statement, .. }
            | FrameworkError::MissingConnective { statement, .. } => by_id(statement, false),
            FrameworkError::InvalidStructure(_) => head_line,
        };
        err(line, e.to_string())
    })
}

/// Canonical rendering of a framework: structure line, custom declarations
/// in canonical order, then statements in declaration order.
pub fn serialize_framework(fw: &Framework) -> String {
    let mut out = String::new();
    out.push_str("structure ");
    out.push_str(&fw.structure().kind_name());
    out.push('\n');
    if let StructureKind::Custom(c) = fw.structure().kind() {
        let symbols = c.symbols();
        for sym in symbols {
            out.push_str("value ");
            out.push_str(sym);
            out.push('\n');
        }
        for (lo, hi) in c.hasse_edges() {
            out.push_str(&format!("order {} < {}\n", symbols[lo], symbols[hi]));
        }
        for (decl, name) in [(c.conj_decl(), "conj"), (c.disj_decl(), "disj")] {
            match decl {
                None => {}
                Some(BinaryConnDecl::InfoMeet) => {
                    out.push_str(&format!("{name} = info-meet\n"));
                }
                Some(BinaryConnDecl::Table(entries)) => {
                    let rendered: Vec<String> = entries
                        .iter()
                        .map(|(x, y, r)| format!("{x} {y} -> {r}"))
                        .collect();
                    out.push_str(&format!("{name} = table: {}\n", rendered.join(", ")));
                }
            }
        }
        if let Some(entries) = c.neg_decl() {
            let rendered: Vec<String> =
                entries.iter().map(|(x, r)| format!("{x} -> {r}")).collect();
            out.push_str(&format!("neg = table: {}\n", rendered.join(", ")));
        }
    }
    for (i, id) in fw.ids().iter().enumerate() {
        out.push_str(&format!("statement {id}: {}\n", fw.acceptance(i).render()));
    }
    out
}
