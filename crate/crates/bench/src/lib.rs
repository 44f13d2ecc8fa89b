//! Shared fixtures for the benchmark suite.

use nurikabe_core::SquareTiledSurface;

/// Surfaces exercised by the enumeration benchmarks, smallest first.
pub fn bench_surfaces() -> Vec<SquareTiledSurface> {
    vec![
        SquareTiledSurface::rectangle(2, 8).unwrap(),
        SquareTiledSurface::klein(16).unwrap(),
        SquareTiledSurface::mobius(20).unwrap(),
    ]
}
