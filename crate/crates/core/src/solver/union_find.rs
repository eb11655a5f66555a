use std::collections::HashMap;

use crate::typing::{BasicType, Constraint, ConstraintKind};

/// Disjoint sets over term ids, each class optionally labelled with the
/// first type asserted for it.
#[derive(Debug, Default)]
pub struct TypeClasses {
    index: HashMap<String, usize>,
    parent: Vec<usize>,
    rank: Vec<u8>,
    /// Label of a root: type and the index of the constraint that set it.
    label: Vec<Option<(BasicType, usize)>>,
    /// Roots whose class received two distinct labels.
    conflict: Vec<bool>,
}

impl TypeClasses {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, id: &str) -> usize {
        if let Some(&n) = self.index.get(id) {
            return n;
        }
        let n = self.parent.len();
        self.index.insert(id.to_string(), n);
        self.parent.push(n);
        self.rank.push(0);
        self.label.push(None);
        self.conflict.push(false);
        n
    }

    pub fn lookup(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn find(&mut self, mut n: usize) -> usize {
        let mut root = n;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[n] != root {
            let next = self.parent[n];
            self.parent[n] = root;
            n = next;
        }
        root
    }

    fn merge_label(&mut self, root: usize, incoming: Option<(BasicType, usize)>, conflict: bool) {
        self.conflict[root] |= conflict;
        match (self.label[root], incoming) {
            (None, l) => self.label[root] = l,
            (Some((a, _)), Some((b, _))) if a != b => self.conflict[root] = true,
            _ => {}
        }
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (keep, gone) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        if self.rank[keep] == self.rank[gone] {
            self.rank[keep] += 1;
        }
        self.parent[gone] = keep;
        let (label, conflict) = (self.label[gone], self.conflict[gone]);
        self.merge_label(keep, label, conflict);
    }

    pub fn assert_type(&mut self, n: usize, ty: BasicType, at: usize) {
        let root = self.find(n);
        self.merge_label(root, Some((ty, at)), false);
    }

    /// Applies one constraint; `at` is its index in the originating store.
    pub fn add(&mut self, c: &Constraint, at: usize) {
        match &c.kind {
            ConstraintKind::DeclareTerm(t) => {
                self.node(&t.id);
            }
            ConstraintKind::HasType(t, ty) => {
                let n = self.node(&t.id);
                self.assert_type(n, *ty, at);
            }
            ConstraintKind::SameType(a, b) => {
                let (na, nb) = (self.node(&a.id), self.node(&b.id));
                self.union(na, nb);
            }
        }
    }

    pub fn has_conflict(&self) -> bool {
        self.conflict
            .iter()
            .enumerate()
            .any(|(n, &c)| c && self.parent[n] == n)
    }

    pub fn is_conflicting(&mut self, n: usize) -> bool {
        let root = self.find(n);
        self.conflict[root]
    }

    pub fn class_type(&mut self, n: usize) -> Option<BasicType> {
        let root = self.find(n);
        self.label[root].map(|(t, _)| t)
    }
}

/// Whether the given constraints admit a typing.
pub fn consistent<'a>(constraints: impl IntoIterator<Item = &'a Constraint>) -> bool {
    let mut classes = TypeClasses::new();
    for (i, c) in constraints.into_iter().enumerate() {
        classes.add(c, i);
    }
    !classes.has_conflict()
}
