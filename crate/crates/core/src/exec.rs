//! Sequential or data-parallel evaluation of independent work items.
//!
//! Every parallel path produces results identical to the sequential one:
//! items are evaluated independently and assembled by index. Without the
//! `parallel` feature, [`Execution::Parallel`] runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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

impl Execution {
    /// Whether work will actually be spread across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// `(0..n).map(f)` collected in index order.
    pub fn map_indexed<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Applies `f(index, item)` to every element.
    pub fn for_each_mut<T, F>(self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            items.par_iter_mut().enumerate().for_each(|(i, x)| f(i, x));
            return;
        }
        items.iter_mut().enumerate().for_each(|(i, x)| f(i, x));
    }

    /// Applies `f(chunk_index, chunk)` to consecutive chunks of `size`.
    pub fn for_each_chunk_mut<T, F>(self, items: &mut [T], size: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            items.par_chunks_mut(size).enumerate().for_each(|(i, c)| f(i, c));
            return;
        }
        items.chunks_mut(size).enumerate().for_each(|(i, c)| f(i, c));
    }
}

impl Execution {
    /// Visits every index pair `(i, i + stride)` where bit `stride` of `i` is
    /// clear, passing `i` and both elements. `stride` must be a power of two
    /// and `items.len()` a multiple of `2 * stride`.
    pub fn for_each_pair<T, F>(self, items: &mut [T], stride: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut T, &mut T) + Sync + Send,
    {
        debug_assert!(stride.is_power_of_two() && items.len().is_multiple_of(2 * stride));
        let block = 2 * stride;
        let blocks = items.len() / block;
        #[cfg(feature = "parallel")]
        if self.is_parallel() && items.len() >= PARALLEL_MIN_LEN {
            if blocks >= PARALLEL_MIN_BLOCKS {
                items.par_chunks_mut(block).enumerate().for_each(|(b, chunk)| {
                    let (lo, hi) = chunk.split_at_mut(stride);
                    let base = b * block;
                    for (k, (x, y)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                        f(base + k, x, y);
                    }
                });
            } else {
                for (b, chunk) in items.chunks_mut(block).enumerate() {
                    let (lo, hi) = chunk.split_at_mut(stride);
                    let base = b * block;
                    lo.par_iter_mut()
                        .zip(hi.par_iter_mut())
                        .enumerate()
                        .for_each(|(k, (x, y))| f(base + k, x, y));
                }
            }
            return;
        }
        let _ = blocks;
        for (b, chunk) in items.chunks_mut(block).enumerate() {
            let (lo, hi) = chunk.split_at_mut(stride);
            let base = b * block;
            for (k, (x, y)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                f(base + k, x, y);
            }
        }
    }

    /// Like [`Execution::for_each_mut`] but stays sequential for short slices,
    /// where thread dispatch costs more than the work.
    pub fn for_each_mut_large<T, F>(self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send,
    {
        if items.len() >= PARALLEL_MIN_LEN {
            self.for_each_mut(items, f)
        } else {
            Execution::Sequential.for_each_mut(items, f)
        }
    }
}

/// Slices shorter than this are processed sequentially by the kernels above.
pub const PARALLEL_MIN_LEN: usize = 1 << 14;
#[cfg(feature = "parallel")]
const PARALLEL_MIN_BLOCKS: usize = 64;
