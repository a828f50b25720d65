//! Maps over index ranges, in parallel when the `parallel` feature is on.

use crate::error::Result;

#[cfg(feature = "parallel")]
pub(crate) fn try_map<I, T, F>(items: Vec<I>, f: F) -> Result<Vec<T>>
where
    I: Send,
    T: Send,
    F: Fn(I) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn try_map<I, T, F>(items: Vec<I>, f: F) -> Result<Vec<T>>
where
    F: Fn(I) -> Result<T>,
{
    items.into_iter().map(f).collect()
}
