//! Data-parallel helpers.
//!
//! With the `parallel` feature (default) the inner loops of depth batches,
//! grid oracles and candidate-direction scans run on rayon. Without it the
//! same code paths run on plain iterators. Every reduction used through
//! these helpers is order-independent, so both builds produce identical
//! results.

/// Iterate a collection in parallel when the `parallel` feature is enabled.
///
/// Call sites import [`prelude`] so the adapter methods resolve in both builds.
#[cfg(feature = "parallel")]
macro_rules! maybe_par_iter {
    ($e:expr) => {
        ($e).into_par_iter()
    };
}

#[cfg(not(feature = "parallel"))]
macro_rules! maybe_par_iter {
    ($e:expr) => {
        ($e).into_iter()
    };
}

pub(crate) use maybe_par_iter;

/// Traits needed by [`maybe_par_iter`] call sites.
pub(crate) mod prelude {
    #[cfg(feature = "parallel")]
    pub use rayon::prelude::*;
}

/// Run `f` with all internal loops forced onto a single thread.
///
/// Used by the benchmark suite to compare the parallel and sequential paths
/// inside one binary. Without the `parallel` feature this is a plain call.
pub fn sequential<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("single-thread pool");
        pool.install(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        f()
    }
}

/// Whether the crate was built with the rayon backend.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
