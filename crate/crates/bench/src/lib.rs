//! Shared inputs for the benchmarks.

use linext::{generate, Poset, PosetKind};

/// The posets every benchmark group runs over, with display names.
pub fn workloads() -> Vec<(&'static str, Poset)> {
    let thin = |levels, seed| PosetKind::Thin {
        levels,
        width: 4,
        lower_covers: 2,
        seed,
    };
    vec![
        ("thin-10x4", generate(&thin(10, 1)).unwrap()),
        ("thin-20x4", generate(&thin(20, 1)).unwrap()),
        ("boolean-4", generate(&PosetKind::BooleanTrimmed(4)).unwrap()),
        ("boolean-5", generate(&PosetKind::BooleanTrimmed(5)).unwrap()),
    ]
}
