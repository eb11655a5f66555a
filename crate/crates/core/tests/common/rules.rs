#![allow(dead_code)]

//! Checks for the typing-rule invariants, shared by the property suite and
//! the acceptance suite. Each returns `Err(description)` on violation.

use std::collections::HashSet;
use std::sync::Arc;

use jstc::span::SourceSpan;
use jstc::syntax::{
    parse_str, Behaviour, BehaviourKind, Expr, ExprKind, PathSegment, SourceProgram, VarPath,
};
use jstc::typing::{
    check_program, BasicType, ConstraintKind, ConstraintStore, Rule, TermKind, TERM_ID_PREFIX,
};

pub fn parse(src: &str) -> SourceProgram {
    parse_str(src, "gen.ol")
        .unwrap_or_else(|e| panic!("generated program failed to parse: {e}\n{src}"))
}

fn run(b: &Behaviour) -> ConstraintStore {
    let mut store = ConstraintStore::new();
    store.visit_behaviour(b).unwrap();
    store
}

fn seq(first: Behaviour, second: Behaviour) -> Behaviour {
    let span = first.span.to(&second.span);
    Behaviour {
        kind: BehaviourKind::Seq {
            first: Box::new(first),
            second: Box::new(second),
        },
        span,
    }
}

fn nil() -> Behaviour {
    Behaviour {
        kind: BehaviourKind::Nil,
        span: SourceSpan::new(Arc::from("gen.ol"), (1, 1), (1, 1)),
    }
}

fn same(a: &ConstraintStore, b: &ConstraintStore, what: &str) -> Result<(), String> {
    if a.items() != b.items() {
        return Err(format!("{what}: constraint sequences differ"));
    }
    if jstc::smtlib::render_body(a) != jstc::smtlib::render_body(b) {
        return Err(format!("{what}: renderings differ"));
    }
    Ok(())
}

/// T-Nil: adding `nullProcess` before or after a program changes nothing.
pub fn nil_identity(src: &str) -> Result<(), String> {
    let main = parse(src).main;
    let base = run(&main);
    same(&run(&seq(nil(), main.clone())), &base, "Nil; P")?;
    same(&run(&seq(main.clone(), nil())), &base, "P; Nil")?;
    // visiting Nil on a populated store leaves it unchanged
    let mut store = base.clone();
    store.visit_nil();
    same(&store, &base, "visit_nil")
}

/// T-Seq: `Seq(a, b)` equals visiting `a` then `b`, and emission is
/// associative.
pub fn seq_composition(src_a: &str, src_b: &str, src_c: &str) -> Result<(), String> {
    let (a, b, c) = (parse(src_a).main, parse(src_b).main, parse(src_c).main);
    let mut threaded = ConstraintStore::new();
    threaded.visit_behaviour(&a).unwrap();
    threaded.visit_behaviour(&b).unwrap();
    same(
        &run(&seq(a.clone(), b.clone())),
        &threaded,
        "Seq(a,b) vs a then b",
    )?;
    let left = run(&seq(seq(a.clone(), b.clone()), c.clone()));
    let right = run(&seq(a, seq(b, c)));
    same(&left, &right, "Seq associativity")
}

fn count_nodes(b: &Behaviour) -> (usize, usize) {
    let (mut ifs, mut whiles) = (0, 0);
    b.walk(&mut |n| match n.kind {
        BehaviourKind::If { .. } => ifs += 1,
        BehaviourKind::While { .. } => whiles += 1,
        _ => {}
    });
    (ifs, whiles)
}

/// T-If / T-While: one `hasType c bool` per conditional and loop, on the
/// term of its condition.
pub fn condition_constraints(src: &str) -> Result<(), String> {
    let program = parse(src);
    let store = check_program(&program).unwrap();
    let (ifs, whiles) = count_nodes(&program.main);
    let count = |rule: Rule| {
        store
            .items()
            .iter()
            .filter(|c| c.provenance.rule == rule)
            .filter(|c| matches!(c.kind, ConstraintKind::HasType(_, BasicType::Bool)))
            .count()
    };
    let (got_if, got_while) = (count(Rule::IfThenElse), count(Rule::While));
    if got_if != ifs || got_while != whiles {
        return Err(format!(
            "expected {ifs} if / {whiles} while bool assertions, found {got_if} / {got_while}"
        ));
    }
    if store.items().iter().any(|c| {
        matches!(c.provenance.rule, Rule::IfThenElse | Rule::While)
            && !matches!(c.kind, ConstraintKind::HasType(_, BasicType::Bool))
    }) {
        return Err("conditional rule emitted something other than hasType bool".into());
    }
    Ok(())
}

fn dynamic_in_expr(e: &Expr) -> usize {
    match &e.kind {
        ExprKind::Literal(_) => 0,
        ExprKind::PathRead(p) => dynamic_in_path(p),
        ExprKind::Binary { lhs, rhs, .. } => dynamic_in_expr(lhs) + dynamic_in_expr(rhs),
        ExprKind::Unary { operand, .. } => dynamic_in_expr(operand),
    }
}

fn dynamic_in_path(p: &VarPath) -> usize {
    let keys: usize = p
        .segments
        .iter()
        .map(|s| match s {
            PathSegment::Dynamic(e) => dynamic_in_expr(e),
            PathSegment::Static { .. } => 0,
        })
        .sum();
    keys + usize::from(!p.is_static())
}

pub fn dynamic_occurrences(b: &Behaviour) -> usize {
    let mut n = 0;
    b.walk(&mut |node| match &node.kind {
        BehaviourKind::Assign { target, value } => {
            n += dynamic_in_path(target) + dynamic_in_expr(value)
        }
        BehaviourKind::If { cond, .. } | BehaviourKind::While { cond, .. } => {
            n += dynamic_in_expr(cond)
        }
        BehaviourKind::Println { arg } => n += dynamic_in_expr(arg),
        BehaviourKind::Nil | BehaviourKind::Seq { .. } => {}
    });
    n
}

/// n occurrences of computed-key paths yield n distinct dynamic terms.
pub fn dynamic_freshness(src: &str) -> Result<(), String> {
    let program = parse(src);
    let store = check_program(&program).unwrap();
    let ids: Vec<&str> = store
        .items()
        .iter()
        .filter_map(|c| match &c.kind {
            ConstraintKind::DeclareTerm(t) if t.kind == TermKind::DynamicPath => {
                Some(t.id.as_str())
            }
            _ => None,
        })
        .collect();
    let distinct: HashSet<&str> = ids.iter().copied().collect();
    let expected = dynamic_occurrences(&program.main);
    if ids.len() != expected || distinct.len() != expected {
        return Err(format!(
            "{expected} dynamic occurrences but {} declarations ({} distinct)",
            ids.len(),
            distinct.len()
        ));
    }
    Ok(())
}

/// Declaration-before-use, empty stack, increasing ids and determinism.
pub fn store_discipline(src: &str) -> Result<(), String> {
    let program = parse(src);
    let store = check_program(&program).unwrap();
    if store.term_stack_depth() != 0 {
        return Err("term stack not empty".into());
    }
    let mut declared = HashSet::new();
    let mut last_id: Option<u64> = None;
    for c in store.items() {
        let used: Vec<&str> = match &c.kind {
            ConstraintKind::DeclareTerm(t) => {
                if !declared.insert(t.id.clone()) {
                    return Err(format!("duplicate declaration of {}", t.id));
                }
                if t.kind != TermKind::Variable {
                    let n: u64 = t.id.rsplit(TERM_ID_PREFIX).next().unwrap().parse().unwrap();
                    if last_id.is_some_and(|prev| prev >= n) {
                        return Err(format!("id {n} not increasing"));
                    }
                    last_id = Some(n);
                }
                vec![]
            }
            ConstraintKind::HasType(t, _) => vec![&t.id],
            ConstraintKind::SameType(a, b) => vec![&a.id, &b.id],
        };
        if let Some(id) = used.iter().find(|id| !declared.contains(**id)) {
            return Err(format!("{id} used before declaration"));
        }
    }
    let again = check_program(&program).unwrap();
    same(&store, &again, "determinism")
}
