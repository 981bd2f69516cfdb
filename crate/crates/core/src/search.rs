//! Node budgets and the parallel/sequential switch shared by the exact searches.

use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::graph::GraphError;

/// Default node budget when neither the caller nor `EPOSA_NODE_BUDGET` sets one.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    /// The search was cut off before it could decide the question.
    #[error("search budget of {budget} nodes exhausted")]
    ResourceLimit { budget: u64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub node_budget: u64,
    /// Ignored unless the crate is built with the `parallel` feature.
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

impl SearchConfig {
    pub fn with_budget(node_budget: u64) -> Self {
        SearchConfig {
            node_budget,
            ..Default::default()
        }
    }

    pub fn sequential(self) -> Self {
        SearchConfig {
            parallel: false,
            ..self
        }
    }

    pub fn budget(&self) -> Budget {
        Budget::new(self.node_budget)
    }
}

/// A node counter shared across worker threads.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    #[inline]
    pub fn tick(&self) -> Result<(), VerifyError> {
        let used = self.used.fetch_add(1, Ordering::Relaxed);
        if used >= self.limit {
            Err(VerifyError::ResourceLimit { budget: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed).min(self.limit)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

/// First item (in slice order) for which `f` yields `Some`, or the first error.
///
/// The parallel path uses `find_map_first`, so the chosen witness does not
/// depend on thread scheduling.
pub(crate) fn find_first<T, R, E, F>(items: &[T], parallel: bool, f: F) -> Result<Option<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<Option<R>, E> + Sync + Send,
{
    let pick = |x: &T| match f(x) {
        Ok(None) => None,
        Ok(Some(r)) => Some(Ok(r)),
        Err(e) => Some(Err(e)),
    };
    #[cfg(feature = "parallel")]
    let found = if parallel {
        use rayon::prelude::*;
        items.par_iter().find_map_first(pick)
    } else {
        items.iter().find_map(pick)
    };
    #[cfg(not(feature = "parallel"))]
    let found = {
        let _ = parallel;
        items.iter().find_map(pick)
    };
    found.transpose()
}

/// Maps every item, preserving order.
pub(crate) fn map_all<T, R, F>(items: &[T], parallel: bool, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

/// Lexicographic enumeration of all `k`-subsets of `0..n`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(5, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(2, 3).len(), 0);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(4, 1), vec![vec![0], vec![1], vec![2], vec![3]]);
        let c = combinations(6, 3);
        assert_eq!(c.len(), 20);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn budget_trips() {
        let b = Budget::new(2);
        assert!(b.tick().is_ok());
        assert!(b.tick().is_ok());
        assert_eq!(b.tick(), Err(VerifyError::ResourceLimit { budget: 2 }));
        assert_eq!(b.used(), 2);
    }

    #[test]
    fn find_first_is_ordered() {
        let items: Vec<u32> = (0..1000).collect();
        for parallel in [false, true] {
            let r: Result<Option<u32>, ()> =
                find_first(&items, parallel, |&x| Ok((x % 97 == 96).then_some(x)));
            assert_eq!(r, Ok(Some(96)));
        }
    }
}
