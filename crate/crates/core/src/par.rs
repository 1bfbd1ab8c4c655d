//! Order-preserving data-parallel map. With the `parallel` feature and more
//! than one worker the work runs on a dedicated rayon pool; otherwise it is
//! a plain sequential loop. Both paths return results in input order.

use std::ops::Range;

/// Runs `f` over `0..workers` threads if possible. Output order always
/// follows `range`.
pub fn map_range<T, F>(range: Range<u64>, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if workers <= 1 {
        return range.map(f).collect();
    }
    parallel_map(range, workers, f)
}

#[cfg(feature = "parallel")]
fn parallel_map<T, F>(range: Range<u64>, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    pool(workers).install(|| range.into_par_iter().map(f).collect())
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, F>(range: Range<u64>, _workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    range.map(f).collect()
}

#[cfg(feature = "parallel")]
fn pool(workers: usize) -> std::sync::Arc<rayon::ThreadPool> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<rayon::ThreadPool>>>> = OnceLock::new();
    let mut pools = POOLS.get_or_init(Default::default).lock().expect("pool cache poisoned");
    pools
        .entry(workers)
        .or_insert_with(|| {
            Arc::new(rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool"))
        })
        .clone()
}

/// Whether this build can actually run work on several threads.
pub const fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let seq = map_range(0..1000, 1, |i| i * i);
        for w in [2, 4, 8] {
            assert_eq!(map_range(0..1000, w, |i| i * i), seq);
        }
        assert!(map_range(5..5, 4, |i| i).is_empty());
    }
}
