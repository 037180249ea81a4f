use std::fmt;
use std::sync::Arc;

/// Ordered variable names shared by every polynomial built over them.
#[derive(Clone)]
pub struct VarTable(Arc<Vec<String>>);

impl VarTable {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        VarTable(Arc::new(names.into_iter().map(Into::into).collect()))
    }

    /// `prefix1 .. prefix{count}`, e.g. the real coordinates `f1..f6`.
    pub fn indexed(prefix: &str, count: usize) -> Self {
        Self::new((1..=count).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// True when every name of `self` appears in `other`.
    pub fn is_subset_of(&self, other: &VarTable) -> bool {
        self.0.iter().all(|n| other.index_of(n).is_some())
    }
}

impl PartialEq for VarTable {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for VarTable {}

impl fmt::Debug for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}
