//! Satisfiability of constraint stores.
//!
//! Two backends decide the same question. The builtin one runs union-find
//! over term ids; the external one hands the rendered SMT-LIB script to a
//! solver process. Unsat cores always come from deletion over the builtin
//! checker so that indices map straight back to store provenance.

mod external;
mod union_find;

use std::time::Duration;

pub use external::{solve_external, ExternalCommand};
pub use union_find::{consistent, TypeClasses};

use crate::smtlib;
use crate::typing::{ConstraintKind, ConstraintStore};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    /// Indices into the store's items.
    Unsat {
        core: Vec<usize>,
    },
    Unknown(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Sat => "sat",
            Verdict::Unsat { .. } => "unsat",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat)
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Backend {
    #[default]
    Builtin,
    External,
    Both,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub backend: Backend,
    pub external_cmd: Option<ExternalCommand>,
    pub timeout: Duration,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            backend: Backend::Builtin,
            external_cmd: None,
            timeout: DEFAULT_TIMEOUT,
        }
    }
}

impl SolverConfig {
    pub fn builtin() -> Self {
        Self::default()
    }

    pub fn external(cmd: ExternalCommand) -> Self {
        SolverConfig {
            backend: Backend::External,
            external_cmd: Some(cmd),
            timeout: DEFAULT_TIMEOUT,
        }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("no external solver command configured")]
    MissingCommand,
    #[error("failed to run solver `{command}`: {source}")]
    Spawn {
        command: String,
        #[source]
        source: std::io::Error,
    },
    #[error("solver did not answer within {0:?}")]
    Timeout(Duration),
    #[error("unexpected solver output: {0:?}")]
    MalformedOutput(String),
    #[error("backends disagree: builtin says {builtin}, external says {external}")]
    BackendMismatch {
        builtin: &'static str,
        external: &'static str,
    },
    #[error("core requested for a satisfiable store")]
    NotUnsat,
    #[error("i/o error while preparing solver input: {0}")]
    Io(#[from] std::io::Error),
}

/// Union-find decision procedure; total, never `Unknown`.
pub fn solve_builtin(store: &ConstraintStore) -> Verdict {
    if consistent(store.items()) {
        Verdict::Sat
    } else {
        let core = shrink_core(store).expect("inconsistent store has a core");
        Verdict::Unsat { core }
    }
}

/// Deletion-based 1-minimal unsat core over the whole store.
pub fn shrink_core(store: &ConstraintStore) -> Result<Vec<usize>, SolverError> {
    let all: Vec<usize> = (0..store.len()).collect();
    shrink_indices(store, &all)
}

/// Deletion-based minimisation restricted to `candidates`.
///
/// Each candidate is dropped in turn and kept only if dropping it makes
/// the remaining set consistent.
pub fn shrink_indices(
    store: &ConstraintStore,
    candidates: &[usize],
) -> Result<Vec<usize>, SolverError> {
    let items = store.items();
    let check = |set: &[usize]| consistent(set.iter().map(|&i| &items[i]));
    // Declarations never affect consistency.
    let mut core: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&i| items[i].is_assertion())
        .collect();
    if check(&core) {
        return Err(SolverError::NotUnsat);
    }
    let mut i = 0;
    while i < core.len() {
        let removed = core.remove(i);
        if check(&core) {
            core.insert(i, removed);
            i += 1;
        }
    }
    Ok(core)
}

/// Assertion indices grouped by the term class they constrain, for each
/// class of the full store that carries two distinct types. Classes are
/// ordered by their smallest constraint index.
pub fn conflicting_classes(store: &ConstraintStore) -> Vec<Vec<usize>> {
    let mut classes = TypeClasses::new();
    for (i, c) in store.items().iter().enumerate() {
        classes.add(c, i);
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, c) in store.items().iter().enumerate() {
        let id = match &c.kind {
            ConstraintKind::DeclareTerm(_) => continue,
            ConstraintKind::HasType(t, _) | ConstraintKind::SameType(t, _) => &t.id,
        };
        let node = classes
            .lookup(id)
            .expect("every constrained term has a node");
        if !classes.is_conflicting(node) {
            continue;
        }
        let root = classes.find(node);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, members)) => members.push(i),
            None => groups.push((root, vec![i])),
        }
    }
    groups.into_iter().map(|(_, members)| members).collect()
}

/// Dispatches on `config.backend`. With [`Backend::Both`] the verdicts must
/// agree (an `Unknown` from either side is not a disagreement); the builtin
/// verdict is returned.
pub fn solve(store: &ConstraintStore, config: &SolverConfig) -> Result<Verdict, SolverError> {
    match config.backend {
        Backend::Builtin => Ok(solve_builtin(store)),
        Backend::External => {
            let script = smtlib::render(store);
            solve_external(store, &script, config)
        }
        Backend::Both => {
            let builtin = solve_builtin(store);
            let script = smtlib::render(store);
            let external = solve_external(store, &script, config)?;
            let unknown = matches!(external, Verdict::Unknown(_));
            if !unknown && builtin.name() != external.name() {
                return Err(SolverError::BackendMismatch {
                    builtin: builtin.name(),
                    external: external.name(),
                });
            }
            Ok(builtin)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_str;
    use crate::typing::{check_program, BasicType};

    fn store_of(src: &str) -> ConstraintStore {
        check_program(&parse_str(src, "t.ol").unwrap()).unwrap()
    }

    #[test]
    fn empty_store_is_sat() {
        assert_eq!(solve_builtin(&ConstraintStore::new()), Verdict::Sat);
        assert!(matches!(
            shrink_core(&ConstraintStore::new()),
            Err(SolverError::NotUnsat)
        ));
    }

    #[test]
    fn reassignment_core_is_the_two_assign_types() {
        let store = store_of("main { myInt = 15; myInt = \"fifteen\" }");
        let Verdict::Unsat { core } = solve_builtin(&store) else {
            panic!("expected unsat");
        };
        let types: Vec<_> = core
            .iter()
            .map(|&i| match &store.items()[i].kind {
                ConstraintKind::HasType(t, ty) => (t.id.as_str(), *ty),
                other => panic!("unexpected core member {other:?}"),
            })
            .collect();
        assert_eq!(
            types,
            vec![("myInt", BasicType::Int), ("myInt", BasicType::String)]
        );
    }

    #[test]
    fn literal_condition_core() {
        let store = store_of("main { if (5) { nullProcess } }");
        let Verdict::Unsat { core } = solve_builtin(&store) else {
            panic!("expected unsat");
        };
        assert_eq!(core.len(), 2);
        let tys: Vec<_> = core
            .iter()
            .map(|&i| match &store.items()[i].kind {
                ConstraintKind::HasType(_, ty) => *ty,
                other => panic!("{other:?}"),
            })
            .collect();
        assert_eq!(tys, vec![BasicType::Int, BasicType::Bool]);
    }

    #[test]
    fn two_assertion_store_is_already_minimal() {
        let store = store_of("main { x = 1; x = true }");
        let core = shrink_core(&store).unwrap();
        let again = shrink_indices(&store, &core).unwrap();
        assert_eq!(core, again);
    }

    #[test]
    fn independent_conflicts_form_separate_classes() {
        let store = store_of("main { x = 1; y = true; x = \"s\"; y = 2.0 }");
        let classes = conflicting_classes(&store);
        assert_eq!(classes.len(), 2);
        for members in &classes {
            assert!(shrink_indices(&store, members).is_ok());
        }
    }

    #[test]
    fn builtin_backend_never_unknown() {
        for src in [
            "main { nullProcess }",
            "main { a = b }",
            "main { while (\"x\") { nullProcess } }",
        ] {
            let v = solve(&store_of(src), &SolverConfig::builtin()).unwrap();
            assert!(!matches!(v, Verdict::Unknown(_)));
        }
    }

    #[test]
    fn external_without_command_errors() {
        let config = SolverConfig::builtin().with_backend(Backend::External);
        assert!(matches!(
            solve(&ConstraintStore::new(), &config),
            Err(SolverError::MissingCommand)
        ));
    }
}
