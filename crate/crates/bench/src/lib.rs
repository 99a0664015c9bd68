//! Shared fixtures for the benchmarks in `benches/`.

use lelek_core::{NeverConnect, PrimeBound, SlopePair};

/// The never-connect pair `(1/2, 3)` used throughout the benches.
pub fn half_three() -> NeverConnect {
    NeverConnect::new(
        SlopePair::parse("1/2", "3").expect("valid"),
        PrimeBound::DEFAULT,
    )
    .expect("never-connect")
}
