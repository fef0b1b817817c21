//! Order-preserving data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature off every mode runs sequentially, so results
//! never depend on the build.

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

static DEFAULT_MODE: AtomicU8 = AtomicU8::new(1);

/// Process-wide default used by APIs that do not take an explicit mode.
pub fn set_default_mode(mode: ExecMode) {
    DEFAULT_MODE.store(matches!(mode, ExecMode::Parallel) as u8, Ordering::Relaxed);
}

pub fn default_mode() -> ExecMode {
    if DEFAULT_MODE.load(Ordering::Relaxed) == 1 {
        ExecMode::Parallel
    } else {
        ExecMode::Sequential
    }
}

/// `items.iter().map(f).collect()`, possibly in parallel. Output order
/// always matches input order.
pub fn map<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Like [`map`] over `0..n`.
pub fn map_range<R, F>(mode: ExecMode, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}
