//! Data-parallel helpers with a sequential fallback.
//!
//! All hot loops in the crate route through [`map_slice`] / [`map_indexed`].
//! With the default `parallel` feature these fan out over rayon; without it
//! they degrade to plain iterator maps, which keeps the whole crate usable
//! on single-threaded targets. Outputs are collected in input order either
//! way, so results are bit-identical across both modes and across thread
//! counts. Reductions over floats are always performed sequentially by the
//! callers for the same reason.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over a slice, in parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn map_slice<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    items.par_iter().map(f).collect()
}

/// Map over a slice, in parallel when the `parallel` feature is enabled.
#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, U, F: Fn(&T) -> U + Sync>(items: &[T], f: F) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Map over `0..n`, in parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn map_indexed<U: Send, F: Fn(usize) -> U + Sync + Send>(n: usize, f: F) -> Vec<U> {
    (0..n).into_par_iter().map(f).collect()
}

/// Map over `0..n`, in parallel when the `parallel` feature is enabled.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U, F: Fn(usize) -> U + Sync>(n: usize, f: F) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Always-sequential variant of [`map_slice`], kept available so benches can
/// compare the two paths inside a single binary.
pub fn map_slice_seq<T, U, F: Fn(&T) -> U>(items: &[T], f: F) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Always-sequential variant of [`map_indexed`].
pub fn map_indexed_seq<U, F: Fn(usize) -> U>(n: usize, f: F) -> Vec<U> {
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64 * 0.1).collect();
        let a = map_slice(&xs, |x| x.sin() * x.cos());
        let b = map_slice_seq(&xs, |x| x.sin() * x.cos());
        assert_eq!(a, b);
        let c = map_indexed(100, |i| (i * i) as u64);
        let d = map_indexed_seq(100, |i| (i * i) as u64);
        assert_eq!(c, d);
    }
}
