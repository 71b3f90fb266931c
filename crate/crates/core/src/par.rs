//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) work is spread with rayon unless the
//! caller asks for [`ExecMode::Sequential`]; without the feature every mode
//! runs sequentially. Results never depend on the mode: reductions are sums
//! or ordered collections.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// True when this mode actually fans out to a thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// Order-preserving map over a slice.
pub fn map_collect<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Maps `0..n` and folds the results with an associative, commutative `add`.
pub fn sum_range<R, F, A>(mode: ExecMode, n: u64, zero: R, f: F, add: A) -> R
where
    R: Send + Sync + Clone,
    F: Fn(u64) -> R + Sync + Send,
    A: Fn(R, R) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return (0..n).into_par_iter().map(f).reduce(|| zero.clone(), &add);
    }
    let _ = mode;
    (0..n).map(f).fold(zero, add)
}
