//! Data-parallel execution helpers.
//!
//! Exhaustive checks in this crate scan an index range `0..count` (a
//! configuration space, a candidate space, a pattern space) and either look
//! for the first violation or materialize a table of results. Both shapes are
//! embarrassingly parallel, and both must stay deterministic: the parallel
//! variants return the same first match and the same table as the sequential
//! ones.
//!
//! The sequential variants are always compiled so benchmarks can compare the
//! two; the crate-internal entry points dispatch on the `parallel` feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Work below this size is not worth a rayon dispatch.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: u64 = 1 << 10;

/// First `Some` produced by `f` over `0..count`, in index order.
pub fn find_map_first_seq<V, F>(count: u64, f: F) -> Option<V>
where
    F: Fn(u64) -> Option<V>,
{
    (0..count).find_map(f)
}

/// Parallel version of [`find_map_first_seq`]; same result, same order.
#[cfg(feature = "parallel")]
pub fn find_map_first_par<V, F>(count: u64, f: F) -> Option<V>
where
    V: Send,
    F: Fn(u64) -> Option<V> + Sync + Send,
{
    (0..count).into_par_iter().find_map_first(f)
}

pub(crate) fn find_map_first<V, F>(count: u64, f: F) -> Option<V>
where
    V: Send,
    F: Fn(u64) -> Option<V> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if count >= PAR_THRESHOLD {
        return find_map_first_par(count, f);
    }
    find_map_first_seq(count, f)
}

/// Evaluate `f` over `0..count` and collect the results in index order.
pub fn map_collect_seq<V, F>(count: u64, f: F) -> Vec<V>
where
    F: Fn(u64) -> V,
{
    (0..count).map(f).collect()
}

/// Parallel version of [`map_collect_seq`]; identical output vector.
#[cfg(feature = "parallel")]
pub fn map_collect_par<V, F>(count: u64, f: F) -> Vec<V>
where
    V: Send,
    F: Fn(u64) -> V + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

pub(crate) fn map_collect<V, F>(count: u64, f: F) -> Vec<V>
where
    V: Send,
    F: Fn(u64) -> V + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if count >= PAR_THRESHOLD {
        return map_collect_par(count, f);
    }
    map_collect_seq(count, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_on_first_match() {
        let f = |i: u64| {
            if i % 7 == 3 && i > 2000 {
                Some(i)
            } else {
                None
            }
        };
        let seq = find_map_first_seq(1 << 14, f);
        assert_eq!(seq, Some(2005));
        #[cfg(feature = "parallel")]
        assert_eq!(find_map_first_par(1 << 14, f), seq);
    }

    #[test]
    fn map_collect_is_ordered() {
        let v = map_collect(5000, |i| i * 2);
        assert!(v.iter().enumerate().all(|(i, &x)| x == 2 * i as u64));
    }
}
