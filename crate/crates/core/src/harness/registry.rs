use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Holds quantum payloads while they are "in flight" on the channel.
///
/// Each deposit yields a fresh opaque reference; each reference must be
/// resolved exactly once.
#[derive(Debug)]
pub struct QuantumRegistry<T> {
    next: u64,
    live: BTreeMap<u64, T>,
}

impl<T> Default for QuantumRegistry<T> {
    fn default() -> Self {
        QuantumRegistry { next: 1, live: BTreeMap::new() }
    }
}

impl<T> QuantumRegistry<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn deposit(&mut self, item: T) -> u64 {
        let r = self.next;
        self.next += 1;
        self.live.insert(r, item);
        r
    }

    pub fn resolve(&mut self, reference: u64) -> Result<T> {
        self.live.remove(&reference).ok_or_else(|| {
            if reference < self.next && reference > 0 {
                Error::Registry(format!("reference {reference} already resolved"))
            } else {
                Error::Registry(format!("unknown reference {reference}"))
            }
        })
    }

    pub fn outstanding(&self) -> usize {
        self.live.len()
    }

    /// Ends the session; unreceived payloads are an error.
    pub fn close(self) -> Result<()> {
        match self.live.keys().next() {
            None => Ok(()),
            Some(r) => Err(Error::Registry(format!("{} payloads never received (first: {r})", self.live.len()))),
        }
    }
}
