#![allow(dead_code)]

//! Shared generators and oracles for integration tests.

pub mod rules;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use jstc::span::SourceSpan;
use jstc::typing::{
    BasicType, Constraint, ConstraintKind, ConstraintStore, Provenance, Rule, TermKind, TermRef,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

/// `(path, expect_sat)` for every corpus manifest entry.
pub fn corpus() -> Vec<(PathBuf, bool)> {
    let manifest = fixture("corpus.tsv");
    let text = std::fs::read_to_string(&manifest).unwrap();
    jstc::cli::parse_manifest(&text, manifest.parent().unwrap())
        .unwrap()
        .into_iter()
        .map(|e| (e.path, e.expect_sat))
        .collect()
}

/// Solver command to use for differential runs, if one is reachable.
pub fn external_solver() -> Option<String> {
    let cmd = std::env::var("JSTC_SOLVER_CMD").unwrap_or_else(|_| "z3".to_string());
    let program = cmd.split_whitespace().next()?.to_string();
    let ok = std::process::Command::new(&program)
        .arg("-version")
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .status()
        .is_ok();
    ok.then_some(cmd)
}

// Random programs.

const VARS: &[&str] = &["a", "b", "c", "p.q", "p.r", "p.(a)", "p.(\"k\")"];

pub struct ProgramGen {
    rng: ChaCha8Rng,
}

impl ProgramGen {
    pub fn new(seed: u64) -> Self {
        ProgramGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn literal(&mut self) -> String {
        match self.rng.gen_range(0..4) {
            0 => self.rng.gen_range(0..100).to_string(),
            1 => format!(
                "{}.{}",
                self.rng.gen_range(0..10),
                self.rng.gen_range(0..10)
            ),
            2 => ["\"x\"", "\"a\\\"b\"", "\"\""]
                .choose(&mut self.rng)
                .unwrap()
                .to_string(),
            _ => ["true", "false"].choose(&mut self.rng).unwrap().to_string(),
        }
    }

    fn var(&mut self) -> String {
        VARS.choose(&mut self.rng).unwrap().to_string()
    }

    pub fn expr(&mut self, depth: u32) -> String {
        if depth == 0 || self.rng.gen_bool(0.35) {
            return if self.rng.gen_bool(0.5) {
                self.literal()
            } else {
                self.var()
            };
        }
        const OPS: &[&str] = &[
            "+", "-", "*", "/", "<", ">", "<=", ">=", "==", "!=", "&&", "||",
        ];
        match self.rng.gen_range(0..6) {
            0 => format!("!{}", self.expr(depth - 1)),
            1 => format!("-({})", self.expr(depth - 1)),
            _ => {
                let op = OPS.choose(&mut self.rng).unwrap();
                format!("({} {op} {})", self.expr(depth - 1), self.expr(depth - 1))
            }
        }
    }

    pub fn statement(&mut self, depth: u32) -> String {
        let pick = if depth == 0 {
            self.rng.gen_range(0..3)
        } else {
            self.rng.gen_range(0..7)
        };
        match pick {
            0 => "nullProcess".to_string(),
            1 => format!("{} = {}", self.var(), self.expr(depth.min(3))),
            2 => format!("println@Console( {} )()", self.expr(depth.min(2))),
            3 | 4 => {
                let cond = self.expr(depth.min(2));
                let then = self.behaviour(depth - 1);
                if self.rng.gen_bool(0.5) {
                    format!(
                        "if ( {cond} ) {{ {then} }} else {{ {} }}",
                        self.behaviour(depth - 1)
                    )
                } else {
                    format!("if ( {cond} ) {{ {then} }}")
                }
            }
            5 => format!(
                "while ( {} ) {{ {} }}",
                self.expr(depth.min(2)),
                self.behaviour(depth - 1)
            ),
            _ => self.behaviour(depth - 1),
        }
    }

    pub fn behaviour(&mut self, depth: u32) -> String {
        let n = self.rng.gen_range(1..=3);
        (0..n)
            .map(|_| self.statement(depth))
            .collect::<Vec<_>>()
            .join(";\n")
    }

    /// A whole program with statement nesting depth at most `depth`.
    pub fn program(&mut self, depth: u32) -> String {
        format!("main {{\n{}\n}}\n", self.behaviour(depth))
    }
}

// Random stores.

fn span() -> SourceSpan {
    SourceSpan::new(Arc::from("gen"), (1, 1), (1, 1))
}

pub fn term(id: &str) -> TermRef {
    TermRef {
        id: id.to_string(),
        origin_span: span(),
        kind: TermKind::Variable,
    }
}

pub fn constraint(kind: ConstraintKind) -> Constraint {
    Constraint {
        kind,
        provenance: Provenance {
            rule: Rule::Assign,
            span: span(),
        },
    }
}

/// Random assertions over at most `max_terms` terms.
pub fn random_store(rng: &mut impl Rng, max_terms: usize) -> ConstraintStore {
    let n = rng.gen_range(1..=max_terms);
    let ids: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let m = rng.gen_range(0..=14);
    let mut items: Vec<Constraint> = ids
        .iter()
        .map(|id| constraint(ConstraintKind::DeclareTerm(term(id))))
        .collect();
    for _ in 0..m {
        let a = ids.choose(rng).unwrap();
        let kind = if rng.gen_bool(0.45) {
            let ty = *BasicType::ALL.choose(rng).unwrap();
            ConstraintKind::HasType(term(a), ty)
        } else {
            let b = ids.choose(rng).unwrap();
            ConstraintKind::SameType(term(a), term(b))
        };
        items.push(constraint(kind));
    }
    ConstraintStore::from_constraints(items)
}

/// Exhaustive search over every assignment of the four basic types to the
/// store's terms. Returns `None` when there are more than `max_terms` terms.
pub fn brute_force_sat<'a>(
    constraints: impl IntoIterator<Item = &'a Constraint> + Clone,
    max_terms: usize,
) -> Option<bool> {
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    let mut checks: Vec<(usize, Result<BasicType, usize>)> = Vec::new();
    for c in constraints.clone() {
        let mut id = |t: &'a TermRef| {
            let next = index.len();
            *index.entry(t.id.as_str()).or_insert(next)
        };
        match &c.kind {
            ConstraintKind::DeclareTerm(t) => {
                id(t);
            }
            ConstraintKind::HasType(t, ty) => {
                let i = id(t);
                checks.push((i, Ok(*ty)));
            }
            ConstraintKind::SameType(a, b) => {
                let (i, j) = (id(a), id(b));
                checks.push((i, Err(j)));
            }
        }
    }
    let n = index.len();
    if n > max_terms {
        return None;
    }
    let mut assignment = vec![0usize; n];
    let total = 4usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for slot in assignment.iter_mut() {
            *slot = c % 4;
            c /= 4;
        }
        let holds = checks.iter().all(|(i, rhs)| match rhs {
            Ok(ty) => BasicType::ALL[assignment[*i]] == *ty,
            Err(j) => assignment[*i] == assignment[*j],
        });
        if holds {
            return Some(true);
        }
    }
    Some(false)
}
