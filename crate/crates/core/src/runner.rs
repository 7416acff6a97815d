//! Trial scheduling.
//!
//! Drivers hand a per-trial closure to a [`TrialRunner`]; results come back
//! in trial order whatever the runner does internally.

use alloc::vec::Vec;

pub trait TrialRunner {
    fn run<T, F>(&self, trials: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send;
}

/// Runs trials one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Serial;

impl TrialRunner for Serial {
    fn run<T, F>(&self, trials: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        (0..trials).map(f).collect()
    }
}
