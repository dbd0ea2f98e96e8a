//! Sequential or data-parallel evaluation of independent work items.
//!
//! Every parallel reduction in the crate goes through [`Exec`]. The reductions
//! used here (max, min, sum of exact integers, ordered collects) give the same
//! answer in either mode, so results never depend on the thread count.
//!
//! With the `parallel` feature disabled, [`Exec::Parallel`] silently runs the
//! sequential path.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this mode actually runs on the rayon pool in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Maps `f` over `0..len`, keeping index order.
    pub fn map<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }

    /// Maps `f` over a slice, keeping order.
    pub fn map_slice<I, T, F>(self, items: &[I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Fallible ordered map; the first error in index order is returned.
    pub fn try_map<T, E, F>(self, len: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        self.map(len, f).into_iter().collect()
    }

    /// Maximum of `f` over `0..len`, `f64::NEG_INFINITY` for an empty range.
    /// NaN values propagate.
    pub fn max_f64<F>(self, len: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..len)
                .into_par_iter()
                .map(f)
                .reduce(|| f64::NEG_INFINITY, nan_max);
        }
        (0..len).map(f).fold(f64::NEG_INFINITY, nan_max)
    }

    /// Elementwise maximum of fixed-length vectors produced by `f`.
    pub fn max_vec<F>(self, len: usize, width: usize, f: F) -> Vec<f64>
    where
        F: Fn(usize) -> Vec<f64> + Sync + Send,
    {
        let merge = |mut a: Vec<f64>, b: Vec<f64>| {
            for (x, y) in a.iter_mut().zip(b) {
                *x = nan_max(*x, y);
            }
            a
        };
        let init = || vec![f64::NEG_INFINITY; width];
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..len).into_par_iter().map(f).reduce(init, merge);
        }
        (0..len).map(f).fold(init(), merge)
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_on_max() {
        let f = |i: usize| ((i as f64) * 0.37).sin();
        let a = Exec::Sequential.max_f64(10_000, f);
        let b = Exec::Parallel.max_f64(10_000, f);
        assert_eq!(a, b);
        assert_eq!(Exec::Parallel.max_f64(0, f), f64::NEG_INFINITY);
    }

    #[test]
    fn nan_is_not_swallowed() {
        let v = Exec::Parallel.max_f64(100, |i| if i == 57 { f64::NAN } else { 1.0 });
        assert!(v.is_nan());
    }

    #[test]
    fn ordered_map() {
        let v = Exec::Parallel.map(1000, |i| i * 2);
        assert!(v.iter().enumerate().all(|(i, &x)| x == 2 * i));
        let m = Exec::Parallel.max_vec(50, 3, |i| vec![i as f64, -(i as f64), 1.0]);
        assert_eq!(m, vec![49.0, 0.0, 1.0]);
    }
}
