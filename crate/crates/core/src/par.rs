//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] fans
//! work out over rayon's global pool; without it, both modes run on the
//! calling thread. Reductions are integer sums or order-preserving collects,
//! so results are identical either way.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Sums `(a, b)` pairs produced for each index.
pub fn map_sum<F>(range: Range<u64>, exec: Execution, f: F) -> (u64, u64)
where
    F: Fn(u64) -> (u64, u64) + Sync,
{
    let add = |x: (u64, u64), y: (u64, u64)| (x.0 + y.0, x.1 + y.1);
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => range.into_par_iter().map(&f).reduce(|| (0, 0), add),
        _ => range.map(f).fold((0, 0), add),
    }
}

/// Element-wise sum of `len`-long count vectors, each index updating an
/// accumulator through `f`.
pub fn map_reduce_vec<F>(range: Range<u64>, len: usize, exec: Execution, f: F) -> Vec<u64>
where
    F: Fn(u64, &mut Vec<u64>) + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => range
            .into_par_iter()
            .fold(
                || vec![0u64; len],
                |mut acc, i| {
                    f(i, &mut acc);
                    acc
                },
            )
            .reduce(
                || vec![0u64; len],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            ),
        _ => {
            let mut acc = vec![0u64; len];
            range.for_each(|i| f(i, &mut acc));
            acc
        }
    }
}

/// Maps `items` in order.
pub fn map_collect<T, U, F>(items: Vec<T>, exec: Execution, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.into_par_iter().map(f).collect(),
        _ => items.into_iter().map(f).collect(),
    }
}
