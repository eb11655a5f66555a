//! Constraint generation.
//!
//! The visitor in [`visit`] walks a [`SourceProgram`] and records term
//! declarations and `hasType`/`sameType` assertions into a
//! [`ConstraintStore`]. Variables are flow-insensitive and monomorphic: a
//! path name denotes one term for the whole program, so a retyped variable
//! produces contradictory assertions rather than an updated environment.

mod visit;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::span::SourceSpan;
use crate::syntax::{LiteralKind, SourceProgram};

/// Prefix of every minted term id.
pub const TERM_ID_PREFIX: &str = "$$__term_id_";
/// Marker inserted into ids of terms reached through a computed key.
pub const DYNAMIC_PATH_MARKER: &str = "DYNAMIC_PATH_";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasicType {
    Int,
    Double,
    String,
    Bool,
}

impl BasicType {
    pub const ALL: [BasicType; 4] = [
        BasicType::Int,
        BasicType::Double,
        BasicType::String,
        BasicType::Bool,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BasicType::Int => "int",
            BasicType::Double => "double",
            BasicType::String => "string",
            BasicType::Bool => "bool",
        }
    }
}

impl From<LiteralKind> for BasicType {
    fn from(kind: LiteralKind) -> Self {
        match kind {
            LiteralKind::Int => BasicType::Int,
            LiteralKind::Double => BasicType::Double,
            LiteralKind::String => BasicType::String,
            LiteralKind::Bool => BasicType::Bool,
        }
    }
}

impl fmt::Display for BasicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermKind {
    Variable,
    Intermediate,
    DynamicPath,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermRef {
    pub id: String,
    pub origin_span: SourceSpan,
    pub kind: TermKind,
}

impl TermRef {
    /// Name suitable for human-facing messages.
    pub fn display_name(&self) -> String {
        match self.kind {
            TermKind::Variable => format!("`{}`", self.id),
            TermKind::Intermediate => "expression".to_string(),
            TermKind::DynamicPath => {
                let prefix = self.id.split(DYNAMIC_PATH_MARKER).next().unwrap_or("");
                format!("`{prefix}(..)`")
            }
        }
    }
}

/// The typing rule responsible for a constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Assign,
    IfThenElse,
    While,
    Literal,
    Path,
    DynamicPath,
    Compare,
    Equality,
    Arith,
    Logic,
    Not,
    Neg,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Assign => "T-Assign",
            Rule::IfThenElse => "T-If-Then-Else",
            Rule::While => "T-While",
            Rule::Literal => "T-Literal",
            Rule::Path => "T-Path",
            Rule::DynamicPath => "T-Dynamic-Path",
            Rule::Compare => "T-Compare",
            Rule::Equality => "T-Equality",
            Rule::Arith => "T-Arith",
            Rule::Logic => "T-Logic",
            Rule::Not => "T-Not",
            Rule::Neg => "T-Neg",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub rule: Rule,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    DeclareTerm(TermRef),
    HasType(TermRef, BasicType),
    SameType(TermRef, TermRef),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub provenance: Provenance,
}

impl Constraint {
    pub fn is_assertion(&self) -> bool {
        !matches!(self.kind, ConstraintKind::DeclareTerm(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("{span}: malformed variable path: {message}")]
    MalformedPath { span: SourceSpan, message: String },
}

/// Ordered declarations and assertions produced for one program.
#[derive(Clone, Debug, Default)]
pub struct ConstraintStore {
    items: Vec<Constraint>,
    /// Indices of items that open a new statement group.
    group_starts: Vec<usize>,
    pending_group: bool,
    next_term_id: u64,
    declared: HashSet<String>,
    term_stack: Vec<(TermRef, Option<BasicType>)>,
}

impl ConstraintStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn items(&self) -> &[Constraint] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.declared.len()
    }

    pub fn is_declared(&self, id: &str) -> bool {
        self.declared.contains(id)
    }

    pub fn next_term_id(&self) -> u64 {
        self.next_term_id
    }

    pub fn term_stack_depth(&self) -> usize {
        self.term_stack.len()
    }

    /// Whether item `index` begins a statement group (rendered after a blank line).
    pub fn starts_group(&self, index: usize) -> bool {
        self.group_starts.binary_search(&index).is_ok()
    }

    /// Store made of the given items only, in the given order.
    ///
    /// Used for re-checking subsets; group markers and counters are not kept.
    pub fn from_constraints(items: impl IntoIterator<Item = Constraint>) -> Self {
        let items: Vec<Constraint> = items.into_iter().collect();
        let declared = items
            .iter()
            .filter_map(|c| match &c.kind {
                ConstraintKind::DeclareTerm(t) => Some(t.id.clone()),
                _ => None,
            })
            .collect();
        ConstraintStore {
            items,
            declared,
            ..Self::default()
        }
    }

    fn begin_group(&mut self) {
        self.pending_group = true;
    }

    fn push(&mut self, kind: ConstraintKind, rule: Rule, span: &SourceSpan) {
        if self.pending_group {
            self.group_starts.push(self.items.len());
            self.pending_group = false;
        }
        self.items.push(Constraint {
            kind,
            provenance: Provenance {
                rule,
                span: span.clone(),
            },
        });
    }

    fn mint_id(&mut self) -> u64 {
        let n = self.next_term_id;
        self.next_term_id += 1;
        n
    }

    /// Declares a fresh `$$__term_id_<n>` term.
    fn fresh_intermediate(&mut self, rule: Rule, span: &SourceSpan) -> TermRef {
        let n = self.mint_id();
        let term = TermRef {
            id: format!("{TERM_ID_PREFIX}{n}"),
            origin_span: span.clone(),
            kind: TermKind::Intermediate,
        };
        self.declare(&term, rule);
        term
    }

    /// Declares `term` unless a term with the same id already exists.
    fn declare(&mut self, term: &TermRef, rule: Rule) {
        if self.declared.insert(term.id.clone()) {
            let span = term.origin_span.clone();
            self.push(ConstraintKind::DeclareTerm(term.clone()), rule, &span);
        }
    }

    fn has_type(&mut self, term: &TermRef, ty: BasicType, rule: Rule, span: &SourceSpan) {
        self.push(ConstraintKind::HasType(term.clone(), ty), rule, span);
    }

    fn same_type(&mut self, a: &TermRef, b: &TermRef, rule: Rule, span: &SourceSpan) {
        self.push(ConstraintKind::SameType(a.clone(), b.clone()), rule, span);
    }

    fn push_term(&mut self, term: TermRef, ty: Option<BasicType>) {
        self.term_stack.push((term, ty));
    }

    fn pop_term(&mut self) -> (TermRef, Option<BasicType>) {
        self.term_stack
            .pop()
            .expect("term stack underflow: expression visit left no term")
    }
}

/// Generates the constraint store for a whole program.
pub fn check_program(program: &SourceProgram) -> Result<ConstraintStore, GenError> {
    let mut store = ConstraintStore::new();
    store.visit_behaviour(&program.main)?;
    Ok(store)
}

/// Rewrites every `$$__term_id_<n>` so that ids are numbered 0, 1, 2, ...
/// in order of first occurrence.
pub fn normalize_term_ids(text: &str) -> String {
    let mut mapping: Vec<(String, usize)> = Vec::new();
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(pos) = rest.find(TERM_ID_PREFIX) {
        out.push_str(&rest[..pos + TERM_ID_PREFIX.len()]);
        rest = &rest[pos + TERM_ID_PREFIX.len()..];
        let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
        rest = &rest[digits.len()..];
        if digits.is_empty() {
            continue;
        }
        let canonical = match mapping.iter().find(|(d, _)| *d == digits) {
            Some((_, n)) => *n,
            None => {
                let n = mapping.len();
                mapping.push((digits, n));
                n
            }
        };
        out.push_str(&canonical.to_string());
    }
    out.push_str(rest);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_renumbers_in_first_occurrence_order() {
        let text = "$$__term_id_14 a.DYNAMIC_PATH_$$__term_id_4 $$__term_id_14 $$__term_id_19";
        assert_eq!(
            normalize_term_ids(text),
            "$$__term_id_0 a.DYNAMIC_PATH_$$__term_id_1 $$__term_id_0 $$__term_id_2"
        );
        assert_eq!(normalize_term_ids("no ids"), "no ids");
    }

    #[test]
    fn basic_types_distinct() {
        let names: HashSet<_> = BasicType::ALL.iter().map(|t| t.name()).collect();
        assert_eq!(names.len(), 4);
    }
}
