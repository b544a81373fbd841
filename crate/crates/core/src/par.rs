//! Data-parallel helpers.
//!
//! Seed sweeps and exhaustive enumerations fan out over rayon when the
//! `parallel` feature is enabled. [`Execution::Sequential`] is always
//! available so the two paths can be benchmarked against each other and so
//! results can be checked to be identical.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Execution::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Maps `f` over `range`, preserving order.
    pub fn map_range<T, F>(self, range: Range<u64>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => range.map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                range.into_par_iter().map(f).collect()
            }
        }
    }

    /// Maps `f` over a slice, preserving order.
    pub fn map_slice<'a, S, T, F>(self, items: &'a [S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&'a S) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
        }
    }

    /// Returns the first `Some` produced by `f` in slice order, if any.
    pub fn find_first<'a, S, T, F>(self, items: &'a [S], f: F) -> Option<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&'a S) -> Option<T> + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().find_map(f),
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items
                    .par_iter()
                    .map(f)
                    .find_first(|r| r.is_some())
                    .flatten()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_default_agree() {
        let f = |s: u64| s * s + 1;
        let a = Execution::Sequential.map_range(0..100, f);
        let b = Execution::default().map_range(0..100, f);
        assert_eq!(a, b);
        let items: Vec<u64> = (0..50).collect();
        assert_eq!(
            Execution::default().find_first(&items, |&x| (x > 20 && x % 7 == 0).then_some(x)),
            Some(21)
        );
    }
}
