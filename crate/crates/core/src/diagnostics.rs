//! Type-error reports built from unsat cores.
//!
//! One [`TypeErrorReport`] is produced per conflicting term class. The
//! class holding the verdict's core reports exactly that core; any other
//! conflicting class gets its own deletion-minimised core.

use serde::{Deserialize, Serialize};

use crate::solver::{conflicting_classes, shrink_indices, Verdict};
use crate::span::SourceSpan;
use crate::syntax::SourceProgram;
use crate::typing::{BasicType, Constraint, ConstraintKind, ConstraintStore};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeErrorReport {
    pub message: String,
    pub primary_span: SourceSpan,
    pub related: Vec<(SourceSpan, String)>,
    pub conflicting_types: (BasicType, BasicType),
    /// Store indices this error was built from.
    pub core: Vec<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub constraint_count: usize,
    pub term_count: usize,
    pub solve_millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub errors: Vec<TypeErrorReport>,
    pub file: String,
    pub stats: Stats,
}

fn describe(c: &Constraint) -> String {
    let rule = c.provenance.rule.name();
    match &c.kind {
        ConstraintKind::HasType(t, ty) => format!("{rule}: {} has type {ty}", t.display_name()),
        ConstraintKind::SameType(a, b) => format!(
            "{rule}: {} and {} have the same type",
            a.display_name(),
            b.display_name()
        ),
        ConstraintKind::DeclareTerm(t) => format!("{rule}: {} declared", t.display_name()),
    }
}

fn error_from_core(store: &ConstraintStore, core: &[usize]) -> TypeErrorReport {
    let items = store.items();
    let mut types = core.iter().filter_map(|&i| match &items[i].kind {
        ConstraintKind::HasType(_, ty) => Some(*ty),
        _ => None,
    });
    let first = types.next().expect("a conflict core asserts a type");
    let second = types.find(|t| *t != first).unwrap_or(first);

    let mut ordered: Vec<usize> = core.to_vec();
    ordered.sort_by_key(|&i| {
        (
            items[i].provenance.span.start(),
            items[i].provenance.span.end(),
            i,
        )
    });
    let primary = ordered.pop().expect("core is non-empty");
    TypeErrorReport {
        message: format!("type mismatch: {first} vs {second}"),
        primary_span: items[primary].provenance.span.clone(),
        related: ordered
            .iter()
            .map(|&i| (items[i].provenance.span.clone(), describe(&items[i])))
            .collect(),
        conflicting_types: (first, second),
        core: core.to_vec(),
    }
}

pub fn report(store: &ConstraintStore, verdict: &Verdict, program: &SourceProgram) -> CheckReport {
    let mut errors = Vec::new();
    if let Verdict::Unsat { core } = verdict {
        for members in conflicting_classes(store) {
            let class_core = if core.iter().all(|i| members.contains(i)) {
                core.clone()
            } else {
                match shrink_indices(store, &members) {
                    Ok(c) => c,
                    Err(_) => continue,
                }
            };
            errors.push(error_from_core(store, &class_core));
        }
        if errors.is_empty() && !core.is_empty() {
            // verdict core not found among classes: report it as-is
            errors.push(error_from_core(store, core));
        }
        errors.sort_by(|a, b| {
            (a.primary_span.start(), a.primary_span.end())
                .cmp(&(b.primary_span.start(), b.primary_span.end()))
        });
    }
    CheckReport {
        verdict: verdict.clone(),
        errors,
        file: program.file.clone(),
        stats: Stats {
            constraint_count: store.len(),
            term_count: store.term_count(),
            solve_millis: 0,
        },
    }
}

pub fn format_text(report: &CheckReport) -> String {
    match &report.verdict {
        Verdict::Sat => return format!("{}: ok\n", report.file),
        Verdict::Unknown(reason) => return format!("{}: unknown: {reason}\n", report.file),
        Verdict::Unsat { .. } => {}
    }
    let mut out = String::new();
    for e in &report.errors {
        out.push_str(&format!(
            "{}:{}:{}: error: {}\n",
            report.file, e.primary_span.start_line, e.primary_span.start_col, e.message
        ));
        for (span, note) in &e.related {
            out.push_str(&format!(
                "    {}:{}:{}: note: {note}\n",
                report.file, span.start_line, span.start_col
            ));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonSpan {
    pub line: u32,
    pub col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl From<&SourceSpan> for JsonSpan {
    fn from(s: &SourceSpan) -> Self {
        JsonSpan {
            line: s.start_line,
            col: s.start_col,
            end_line: s.end_line,
            end_col: s.end_col,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonRelated {
    pub span: JsonSpan,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonError {
    pub message: String,
    pub span: JsonSpan,
    pub related: Vec<JsonRelated>,
    pub types: [BasicType; 2],
}

/// Wire form of a [`CheckReport`]; field order is the serialised key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonReport {
    pub file: String,
    pub verdict: String,
    pub errors: Vec<JsonError>,
    pub stats: Stats,
}

impl From<&CheckReport> for JsonReport {
    fn from(r: &CheckReport) -> Self {
        JsonReport {
            file: r.file.clone(),
            verdict: r.verdict.name().to_string(),
            errors: r
                .errors
                .iter()
                .map(|e| JsonError {
                    message: e.message.clone(),
                    span: (&e.primary_span).into(),
                    related: e
                        .related
                        .iter()
                        .map(|(s, m)| JsonRelated {
                            span: s.into(),
                            message: m.clone(),
                        })
                        .collect(),
                    types: [e.conflicting_types.0, e.conflicting_types.1],
                })
                .collect(),
            stats: r.stats,
        }
    }
}

pub fn format_json(report: &CheckReport) -> String {
    serde_json::to_string(&JsonReport::from(report)).expect("report serialises")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve_builtin;
    use crate::syntax::parse_str;
    use crate::typing::check_program;

    fn check(src: &str) -> CheckReport {
        let program = parse_str(src, "t.ol").unwrap();
        let store = check_program(&program).unwrap();
        let verdict = solve_builtin(&store);
        report(&store, &verdict, &program)
    }

    #[test]
    fn sat_has_no_errors() {
        let r = check("main { a = 1; b = a + 2 }");
        assert!(r.errors.is_empty());
        assert_eq!(format_text(&r), "t.ol: ok\n");
        assert!(format_json(&r).contains("\"verdict\":\"sat\",\"errors\":[]"));
    }

    #[test]
    fn reassignment_reports_once() {
        let r = check("main {\n  myInt = 15;\n  myInt = \"fifteen\"\n}");
        assert_eq!(r.errors.len(), 1);
        let e = &r.errors[0];
        assert_eq!(e.conflicting_types, (BasicType::Int, BasicType::String));
        assert_eq!(e.primary_span.start(), (3, 3));
        assert_eq!(e.related.len(), 1);
        assert_eq!(e.related[0].0.start(), (2, 3));
        let text = format_text(&r);
        assert!(
            text.starts_with("t.ol:3:3: error: type mismatch: int vs string\n"),
            "{text}"
        );
        assert!(
            text.contains("    t.ol:2:3: note: T-Assign: `myInt` has type int"),
            "{text}"
        );
    }

    #[test]
    fn two_conflicts_in_span_order() {
        let r = check("main {\n  y = true;\n  x = 1;\n  x = \"s\";\n  y = 2\n}");
        assert_eq!(r.errors.len(), 2);
        assert_eq!(r.errors[0].primary_span.start_line, 4);
        assert_eq!(r.errors[1].primary_span.start_line, 5);
        let text = format_text(&r);
        let first = text.find("int vs string").unwrap();
        let second = text.find("bool vs int").unwrap();
        assert!(first < second, "{text}");
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let r = check("main { x = 1; x = \"s\" }");
        let json = format_json(&r);
        let parsed: JsonReport = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string(&parsed).unwrap(), json);
        assert!(
            json.starts_with("{\"file\":\"t.ol\",\"verdict\":\"unsat\",\"errors\":[{\"message\":")
        );
        assert_eq!(parsed.errors.len(), 1);
        assert_eq!(parsed.errors[0].types, [BasicType::Int, BasicType::String]);
    }

    #[test]
    fn unknown_verdict_text() {
        let program = parse_str("main { nullProcess }", "t.ol").unwrap();
        let store = check_program(&program).unwrap();
        let r = report(&store, &Verdict::Unknown("timeout".into()), &program);
        assert!(r.errors.is_empty());
        assert_eq!(format_text(&r), "t.ol: unknown: timeout\n");
        assert!(format_json(&r).contains("\"verdict\":\"unknown\""));
    }
}
