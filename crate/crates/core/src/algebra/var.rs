use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered list of variable names shared by every polynomial and series
/// built over it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSpace {
    names: Vec<String>,
}

impl VarSpace {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Invalid(format!("duplicate variable {n}")));
            }
        }
        Ok(Arc::new(VarSpace { names }))
    }

    /// `prefix0, prefix1, ..., prefix{n-1}`.
    pub fn indexed(prefix: &str, n: usize) -> Arc<Self> {
        Arc::new(VarSpace {
            names: (0..n).map(|i| format!("{prefix}{i}")).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub(crate) fn check(a: &Arc<Self>, b: &Arc<Self>) -> Result<()> {
        if Arc::ptr_eq(a, b) || a == b {
            Ok(())
        } else {
            Err(Error::VarSpaceMismatch(format!("{a} vs {b}")))
        }
    }
}

impl fmt::Display for VarSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.names.join(", "))
    }
}
