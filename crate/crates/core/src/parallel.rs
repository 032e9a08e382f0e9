//! Data-parallel loops that fall back to plain iteration without the
//! `parallel` feature.

use alloc::vec::Vec;

use crate::Result;

/// Run `f(index, chunk)` over disjoint `chunk_len` slices of `data`.
pub(crate) fn try_for_each_chunk<F>(data: &mut [f64], chunk_len: usize, f: F) -> Result<()>
where
    F: Fn(usize, &mut [f64]) -> Result<()> + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        data.par_chunks_mut(chunk_len)
            .enumerate()
            .try_for_each(|(i, c)| f(i, c))
    }
    #[cfg(not(feature = "parallel"))]
    {
        data.chunks_mut(chunk_len)
            .enumerate()
            .try_for_each(|(i, c)| f(i, c))
    }
}

/// `(0..n).map(f).collect()`, in parallel when enabled.
pub(crate) fn map_indices<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
