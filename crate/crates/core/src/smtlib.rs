//! SMT-LIB2 rendering of a [`ConstraintStore`].
//!
//! `hasType` and `sameType` are defined over a single total function
//! `typeOf : Term -> Type`, so every term has exactly one type and
//! `sameType` is an equivalence. The whole script stays in QF_UF.

use std::path::Path;

use crate::typing::{BasicType, ConstraintKind, ConstraintStore};

pub const CHECK_SAT: &str = "(check-sat)\n";

/// Names the preamble declares; program terms must not shadow them.
const PREAMBLE_SYMBOLS: &[&str] = &[
    "Term", "Type", "typeOf", "hasType", "sameType", "int", "double", "string", "bool",
];

/// SMT-LIB2 reserved words and predefined symbols of the core theory.
const RESERVED: &[&str] = &[
    "_",
    "!",
    "as",
    "let",
    "exists",
    "forall",
    "match",
    "par",
    "BINARY",
    "DECIMAL",
    "HEXADECIMAL",
    "NUMERAL",
    "STRING",
    "Bool",
    "true",
    "false",
    "not",
    "and",
    "or",
    "xor",
    "ite",
    "distinct",
    "assert",
    "check-sat",
    "declare-const",
    "declare-fun",
    "declare-sort",
    "define-fun",
    "set-logic",
    "exit",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmtScript {
    pub preamble: String,
    pub body: String,
    pub check_command: String,
}

impl SmtScript {
    /// `preamble + body + check_command`.
    pub fn text(&self) -> String {
        [
            self.preamble.as_str(),
            self.body.as_str(),
            self.check_command.as_str(),
        ]
        .concat()
    }
}

pub fn render_preamble() -> String {
    let types: Vec<&str> = BasicType::ALL.iter().map(|t| t.name()).collect();
    let mut out = String::new();
    out.push_str("(set-logic QF_UF)\n");
    out.push_str("(declare-sort Term 0)\n");
    out.push_str("(declare-sort Type 0)\n");
    for name in &types {
        out.push_str(&format!("(declare-const {name} Type)\n"));
    }
    out.push_str(&format!("(assert (distinct {}))\n", types.join(" ")));
    out.push_str("(declare-fun typeOf (Term) Type)\n");
    out.push_str("(define-fun hasType ((t Term) (ty Type)) Bool (= (typeOf t) ty))\n");
    out.push_str("(define-fun sameType ((a Term) (b Term)) Bool (= (typeOf a) (typeOf b)))\n");
    out.push('\n');
    out
}

fn is_simple_symbol(s: &str) -> bool {
    const EXTRA: &str = "~!@$%^&*_-+=<>.?/";
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || (EXTRA.contains(c) && c != '@' && c != '.') => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || EXTRA.contains(c))
}

/// Solver-facing symbol for a term id.
///
/// Legal simple symbols are printed bare. Ids that collide with a
/// preamble name or a reserved word are mangled with a `#` prefix, which
/// no program identifier can contain; anything else is quoted.
pub fn render_symbol(id: &str) -> String {
    if PREAMBLE_SYMBOLS.contains(&id) || RESERVED.contains(&id) {
        format!("|#{id}|")
    } else if is_simple_symbol(id) {
        id.to_string()
    } else {
        format!("|{}|", id.replace(['|', '\\'], "_"))
    }
}

pub fn render_body(store: &ConstraintStore) -> String {
    let mut body = String::new();
    for (i, c) in store.items().iter().enumerate() {
        if i > 0 && store.starts_group(i) {
            body.push('\n');
        }
        let line = match &c.kind {
            ConstraintKind::DeclareTerm(t) => {
                format!("(declare-const {} Term)", render_symbol(&t.id))
            }
            ConstraintKind::HasType(t, ty) => {
                format!("(assert (hasType {} {}))", render_symbol(&t.id), ty.name())
            }
            ConstraintKind::SameType(a, b) => format!(
                "(assert (sameType {} {}))",
                render_symbol(&a.id),
                render_symbol(&b.id)
            ),
        };
        body.push_str(&line);
        body.push('\n');
    }
    body
}

pub fn render(store: &ConstraintStore) -> SmtScript {
    SmtScript {
        preamble: render_preamble(),
        body: render_body(store),
        check_command: CHECK_SAT.to_string(),
    }
}

pub fn write_script(script: &SmtScript, path: impl AsRef<Path>) -> std::io::Result<()> {
    std::fs::write(path, script.text())
}
