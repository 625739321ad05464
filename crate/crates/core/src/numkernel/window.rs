use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index set of a representation: `Z⁺` (unilateral) or `Z` (bilateral).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexSet {
    Unilateral,
    Bilateral,
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSet::Unilateral => f.write_str("unilateral"),
            IndexSet::Bilateral => f.write_str("bilateral"),
        }
    }
}

/// Finite index range `0..=N` or `-N..=N` with an interior margin.
///
/// Interior indices are those at distance at least `padding` from both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationWindow {
    kind: IndexSet,
    n: usize,
    padding: usize,
}

impl TruncationWindow {
    pub fn new(kind: IndexSet, n: usize, padding: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidWindow("N must be positive".into()));
        }
        if padding >= n {
            return Err(Error::InvalidWindow(format!("padding {padding} must be < N = {n}")));
        }
        Ok(Self { kind, n, padding })
    }

    pub fn unilateral(n: usize, padding: usize) -> Result<Self> {
        Self::new(IndexSet::Unilateral, n, padding)
    }

    pub fn bilateral(n: usize, padding: usize) -> Result<Self> {
        Self::new(IndexSet::Bilateral, n, padding)
    }

    pub fn with_padding(&self, padding: usize) -> Result<Self> {
        Self::new(self.kind, self.n, padding)
    }

    pub fn kind(&self) -> IndexSet {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn padding(&self) -> usize {
        self.padding
    }

    /// Number of basis indices covered.
    pub fn size(&self) -> usize {
        match self.kind {
            IndexSet::Unilateral => self.n + 1,
            IndexSet::Bilateral => 2 * self.n + 1,
        }
    }

    pub fn first(&self) -> i64 {
        match self.kind {
            IndexSet::Unilateral => 0,
            IndexSet::Bilateral => -(self.n as i64),
        }
    }

    pub fn last(&self) -> i64 {
        self.n as i64
    }

    pub fn index_at(&self, pos: usize) -> i64 {
        debug_assert!(pos < self.size());
        self.first() + pos as i64
    }

    pub fn position(&self, index: i64) -> Option<usize> {
        if index < self.first() || index > self.last() {
            None
        } else {
            Some((index - self.first()) as usize)
        }
    }

    pub fn contains(&self, index: i64) -> bool {
        self.position(index).is_some()
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> + Clone {
        self.first()..=self.last()
    }

    pub fn is_interior(&self, index: i64) -> bool {
        let p = self.padding as i64;
        index - self.first() >= p && self.last() - index >= p
    }

    /// Matrix positions of the interior indices (possibly empty).
    pub fn interior_positions(&self) -> Range<usize> {
        let size = self.size();
        let lo = self.padding;
        let hi = size.saturating_sub(self.padding);
        if lo >= hi {
            lo..lo
        } else {
            lo..hi
        }
    }

    pub fn interior_indices(&self) -> impl Iterator<Item = i64> + Clone + '_ {
        self.interior_positions().map(move |p| self.index_at(p))
    }

    /// Same kind and N; padding is ignored.
    pub fn same_extent(&self, other: &TruncationWindow) -> bool {
        self.kind == other.kind && self.n == other.n
    }
}

impl fmt::Display for TruncationWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} N={} pad={}", self.kind, self.n, self.padding)
    }
}
