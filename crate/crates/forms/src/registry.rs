//! Noise-symbol identities and allocation.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

/// Identifier of a shared noise symbol `εᵢ ∈ [−1, 1]`.
///
/// Symbols compare by allocation order, which keeps form layouts (and
/// therefore output) deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NoiseSym(u64);

impl NoiseSym {
    /// A symbol with an explicit id. Intended for the textual form syntax
    /// and tests; analysis code should allocate via [`NoiseRegistry`].
    pub fn from_id(id: u64) -> Self {
        NoiseSym(id)
    }

    pub fn id(self) -> u64 {
        self.0
    }
}

impl fmt::Display for NoiseSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Allocator of fresh noise symbols, shared by all forms of one analysis.
///
/// Ids start at 1 so printed symbols read `e1, e2, …`.
#[derive(Debug)]
pub struct NoiseRegistry {
    next: AtomicU64,
}

impl NoiseRegistry {
    pub fn new() -> Self {
        NoiseRegistry {
            next: AtomicU64::new(1),
        }
    }

    /// Allocates a symbol never returned before by this registry.
    pub fn fresh(&self) -> NoiseSym {
        NoiseSym(self.next.fetch_add(1, Ordering::Relaxed))
    }
}

impl Default for NoiseRegistry {
    fn default() -> Self {
        Self::new()
    }
}
