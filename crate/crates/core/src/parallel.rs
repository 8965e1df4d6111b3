//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the helpers dispatch to rayon; without it they
//! run the same closures in order. Results are always collected in index order
//! so output does not depend on scheduling.

use crate::ComplexPoint;

/// Thread cap requested through `MAYER_ZETA_THREADS`, if set to a positive integer.
pub fn thread_cap_from_env() -> Option<usize> {
    std::env::var("MAYER_ZETA_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0)
}

/// Installs a global rayon pool honouring `MAYER_ZETA_THREADS`.
///
/// Safe to call more than once; later calls are ignored.
pub fn init_thread_pool() {
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = thread_cap_from_env() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(feature = "parallel")]
thread_local! {
    static SEQUENTIAL: std::cell::Cell<bool> = const { std::cell::Cell::new(false) };
}

/// Runs `f` with every helper in this module taking its sequential path on the
/// calling thread. Used by the benches to compare both paths in one build.
pub fn run_sequential<R>(f: impl FnOnce() -> R) -> R {
    #[cfg(feature = "parallel")]
    {
        let prev = SEQUENTIAL.with(|c| c.replace(true));
        let out = f();
        SEQUENTIAL.with(|c| c.set(prev));
        out
    }
    #[cfg(not(feature = "parallel"))]
    {
        f()
    }
}

#[cfg(feature = "parallel")]
fn forced_sequential() -> bool {
    SEQUENTIAL.with(|c| c.get())
}

/// `(0..n).map(f).collect()`, in parallel when enabled.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if forced_sequential() {
            return (0..n).map(f).collect();
        }
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Maps over a slice, preserving order.
pub fn map_slice<A, T, F>(items: &[A], f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if forced_sequential() {
            return items.iter().map(f).collect();
        }
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sums `f(i)` for `i < n` with compensated summation of the per-index results.
///
/// The reduction is done sequentially over the collected chunk results, so the
/// value is identical with and without the `parallel` feature.
pub fn sum_indexed<F>(n: usize, f: F) -> ComplexPoint
where
    F: Fn(usize) -> ComplexPoint + Sync + Send,
{
    let parts = map_indexed(n, f);
    let mut acc = KahanSum::default();
    for p in parts {
        acc.add(p);
    }
    acc.value()
}

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: ComplexPoint,
    comp: ComplexPoint,
}

impl KahanSum {
    pub fn add(&mut self, x: ComplexPoint) {
        self.sum.re = neumaier(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = neumaier(self.sum.im, x.im, &mut self.comp.im);
    }

    pub fn value(&self) -> ComplexPoint {
        self.sum + self.comp
    }
}

fn neumaier(sum: f64, x: f64, comp: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *comp += (sum - t) + x;
    } else {
        *comp += (x - t) + sum;
    }
    t
}
