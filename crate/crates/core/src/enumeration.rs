//! Exhaustive enumeration of valid colorings: the ground-truth oracle that
//! every closed form is checked against.
//!
//! Colorings are iterated as integers with water = set bits. Interior orbits
//! are pre-compiled to bitmasks so a whirlpool test is `(water & m) == m`;
//! connectivity uses disjoint-set union over the adjacency edges restricted
//! to water squares. Parallel runs partition the integer range into
//! contiguous chunks, several per worker, and reduce in chunk order with
//! exact checked sums, so counts and listings are identical for any worker
//! count and schedule.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use thiserror::Error;

use crate::rules::{edge_list, mask_connected, Coloring, Rule, RulesError};
use crate::surface::SquareTiledSurface;

/// Square-level restrictions: some squares forced water, some forced land.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Constraint {
    forced_water: Vec<usize>,
    forced_land: Vec<usize>,
}

impl Constraint {
    pub fn none() -> Self {
        Constraint::default()
    }

    pub fn new(forced_water: &[usize], forced_land: &[usize]) -> Result<Self, EnumerationError> {
        let mut water = forced_water.to_vec();
        let mut land = forced_land.to_vec();
        water.sort_unstable();
        water.dedup();
        land.sort_unstable();
        land.dedup();
        if let Some(&sq) = water.iter().find(|sq| land.binary_search(sq).is_ok()) {
            return Err(EnumerationError::ContradictoryConstraint(sq));
        }
        if water.first() == Some(&0) || land.first() == Some(&0) {
            return Err(EnumerationError::ConstraintOutOfRange { square: 0 });
        }
        Ok(Constraint {
            forced_water: water,
            forced_land: land,
        })
    }

    pub fn water(squares: &[usize]) -> Result<Self, EnumerationError> {
        Constraint::new(squares, &[])
    }

    pub fn land(squares: &[usize]) -> Result<Self, EnumerationError> {
        Constraint::new(&[], squares)
    }

    pub fn forced_water(&self) -> &[usize] {
        &self.forced_water
    }

    pub fn forced_land(&self) -> &[usize] {
        &self.forced_land
    }

    pub fn is_empty(&self) -> bool {
        self.forced_water.is_empty() && self.forced_land.is_empty()
    }

    fn masks(&self, n_squares: usize) -> Result<(u64, u64), EnumerationError> {
        let to_mask = |squares: &[usize]| -> Result<u64, EnumerationError> {
            let mut m = 0u64;
            for &sq in squares {
                if sq == 0 || sq > n_squares {
                    return Err(EnumerationError::ConstraintOutOfRange { square: sq });
                }
                m |= 1 << (sq - 1);
            }
            Ok(m)
        };
        Ok((to_mask(&self.forced_water)?, to_mask(&self.forced_land)?))
    }
}

/// Caps and worker configuration for enumeration runs.
#[derive(Debug, Clone)]
pub struct EnumerationOptions {
    /// Largest surface enumerated without `allow_over_cap`.
    pub square_cap: usize,
    /// Largest number of colorings `enumerate_valid` will materialize.
    pub listing_cap: u64,
    /// Worker threads; 0 means use available parallelism.
    pub workers: usize,
    /// Raise `square_cap` and `listing_cap` limits on explicit request.
    pub allow_over_cap: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            square_cap: DEFAULT_SQUARE_CAP,
            listing_cap: DEFAULT_LISTING_CAP,
            workers: 0,
            allow_over_cap: false,
        }
    }
}

/// Default surface-size cap: 2^26 colorings stay under a minute on desktop
/// hardware.
pub const DEFAULT_SQUARE_CAP: usize = 26;
/// Default cap on materialized coloring lists.
pub const DEFAULT_LISTING_CAP: u64 = 1 << 20;

/// Result of a counting or listing run.
#[derive(Debug, Clone)]
pub struct EnumerationResult {
    /// Exact number of valid colorings satisfying the constraint.
    pub count: u64,
    /// Present for listing runs: valid colorings in strictly ascending
    /// bitmask order.
    pub colorings: Option<Vec<Coloring>>,
    /// Label of the enumerated surface.
    pub surface: String,
    pub rule: Rule,
    pub constraint: Constraint,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerationError {
    #[error(
        "surface has {n_squares} squares, over the cap of {cap}; pass the override to enumerate anyway"
    )]
    OverCap { n_squares: usize, cap: usize },
    #[error("surface has {0} squares; enumeration supports at most 63")]
    TooLarge(usize),
    #[error("listing exceeds the cap of {cap} colorings")]
    ListingCapExceeded { cap: u64 },
    #[error("square {square} in constraint out of range")]
    ConstraintOutOfRange { square: usize },
    #[error("square {0} forced both water and land")]
    ContradictoryConstraint(usize),
    #[error("count overflow")]
    CountOverflow,
    #[error(transparent)]
    Rules(#[from] RulesError),
}

/// Count the colorings satisfying `constraint` that are valid under `rule`.
pub fn count_valid(
    surface: &SquareTiledSurface,
    rule: Rule,
    constraint: &Constraint,
    opts: &EnumerationOptions,
) -> Result<EnumerationResult, EnumerationError> {
    run(surface, rule, constraint, opts, false)
}

/// Like [`count_valid`] but materializes the full ascending list.
pub fn enumerate_valid(
    surface: &SquareTiledSurface,
    rule: Rule,
    constraint: &Constraint,
    opts: &EnumerationOptions,
) -> Result<EnumerationResult, EnumerationError> {
    run(surface, rule, constraint, opts, true)
}

/// Exact validity density `count / 2^n` as a reduced rational.
pub fn validity_density(
    surface: &SquareTiledSurface,
    rule: Rule,
    opts: &EnumerationOptions,
) -> Result<Density, EnumerationError> {
    let result = count_valid(surface, rule, &Constraint::none(), opts)?;
    Ok(Density::new(result.count, surface.n_squares() as u32))
}

/// An exact dyadic rational `count / 2^log2_total`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Density {
    count: u64,
    log2_total: u32,
}

impl Density {
    pub fn new(count: u64, log2_total: u32) -> Self {
        Density { count, log2_total }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn total(&self) -> u128 {
        1u128 << self.log2_total
    }

    /// `(numerator, denominator)` in lowest terms.
    pub fn reduced(&self) -> (u64, u128) {
        if self.count == 0 {
            return (0, 1);
        }
        let shift = self.count.trailing_zeros().min(self.log2_total);
        (self.count >> shift, 1u128 << (self.log2_total - shift))
    }

    pub fn approx(&self) -> f64 {
        self.count as f64 / self.total() as f64
    }
}

impl std::fmt::Display for Density {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (num, den) = self.reduced();
        if den == 1 {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/{den}")
        }
    }
}

/// Refined counts on the `2 x k` rectangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinedRectangleCounts {
    pub k: usize,
    /// Unconstrained count of valid rectangles.
    pub total: u64,
    /// Indexed by the number of water squares in the last column.
    pub last_col: [u64; 3],
    /// Same split with the first column additionally forced fully water.
    /// For `k = 1` the two columns coincide and the contradictory entries
    /// are 0 by convention.
    pub first_full: [u64; 3],
}

/// Count valid `2 x k` rectangles split by the water population of the last
/// column, and the same split with the first column forced fully water. The
/// splits are computed by constrained enumeration; either rule gives the
/// same values on rectangles.
pub fn refined_rectangle_counts(
    k: usize,
    opts: &EnumerationOptions,
) -> Result<RefinedRectangleCounts, EnumerationError> {
    let surface = SquareTiledSurface::rectangle(2, k)
        .map_err(|_| EnumerationError::ConstraintOutOfRange { square: 0 })?;
    let top = k;
    let bottom = 2 * k;
    let first_col = [1, k + 1];

    let count_with = |water: Vec<usize>, land: Vec<usize>| -> Result<u64, EnumerationError> {
        if water.iter().any(|sq| land.contains(sq)) {
            return Ok(0);
        }
        let constraint = Constraint::new(&water, &land)?;
        Ok(count_valid(&surface, Rule::Square, &constraint, opts)?.count)
    };
    let split = |extra_water: &[usize]| -> Result<[u64; 3], EnumerationError> {
        let with_extra = |mut w: Vec<usize>, l: Vec<usize>| {
            w.extend_from_slice(extra_water);
            count_with(w, l)
        };
        Ok([
            with_extra(vec![], vec![top, bottom])?,
            with_extra(vec![top], vec![bottom])?
                .checked_add(with_extra(vec![bottom], vec![top])?)
                .ok_or(EnumerationError::CountOverflow)?,
            with_extra(vec![top, bottom], vec![])?,
        ])
    };

    let total = count_valid(&surface, Rule::Square, &Constraint::none(), opts)?.count;
    let last_col = split(&[])?;
    let first_full = split(&first_col)?;
    debug_assert_eq!(total, last_col.iter().sum::<u64>());
    Ok(RefinedRectangleCounts {
        k,
        total,
        last_col,
        first_full,
    })
}

struct Compiled {
    whirlpool_masks: Vec<u64>,
    edges: Vec<(u8, u8)>,
}

fn compile(surface: &SquareTiledSurface, rule: Rule) -> Compiled {
    let mut whirlpool_masks: Vec<u64> = surface
        .vertex_orbits()
        .iter()
        .filter(|o| rule.applies_to(o))
        .map(|o| o.incident_mask())
        .collect();
    whirlpool_masks.sort_unstable();
    whirlpool_masks.dedup();
    Compiled {
        whirlpool_masks,
        edges: edge_list(surface),
    }
}

impl Compiled {
    #[inline]
    fn is_valid(&self, water: u64) -> bool {
        for &m in &self.whirlpool_masks {
            if water & m == m {
                return false;
            }
        }
        mask_connected(&self.edges, water)
    }
}

fn run(
    surface: &SquareTiledSurface,
    rule: Rule,
    constraint: &Constraint,
    opts: &EnumerationOptions,
    collect: bool,
) -> Result<EnumerationResult, EnumerationError> {
    let n = surface.n_squares();
    if n > opts.square_cap && !opts.allow_over_cap {
        return Err(EnumerationError::OverCap {
            n_squares: n,
            cap: opts.square_cap,
        });
    }
    if n > 63 {
        return Err(EnumerationError::TooLarge(n));
    }
    let (water_mask, land_mask) = constraint.masks(n)?;
    let free_positions: Vec<u32> = (0..n as u32)
        .filter(|&b| (water_mask | land_mask) >> b & 1 == 0)
        .collect();
    let total: u64 = 1u64 << free_positions.len();

    let compiled = compile(surface, rule);
    let workers = effective_workers(opts, total);
    // Contiguous chunks, several per worker, handed out through an atomic
    // cursor: load stays balanced while the chunk-ordered reduction keeps
    // results identical for any worker count and schedule.
    let chunks = (workers * 8).min(total.max(1) as usize);
    let bounds: Vec<u64> = (0..=chunks as u64)
        .map(|c| (total as u128 * c as u128 / chunks as u128) as u64)
        .collect();

    let listing_cap = if opts.allow_over_cap {
        u64::MAX
    } else {
        opts.listing_cap
    };
    let over_cap = AtomicBool::new(false);
    let cursor = AtomicUsize::new(0);

    let expand = |x: u64| -> u64 {
        let mut m = water_mask;
        for (i, &pos) in free_positions.iter().enumerate() {
            m |= (x >> i & 1) << pos;
        }
        m
    };

    let batches: Vec<Vec<(usize, u64, Vec<u64>)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                let compiled = &compiled;
                let expand = &expand;
                let over_cap = &over_cap;
                let cursor = &cursor;
                let bounds = &bounds;
                scope.spawn(move || {
                    let mut mine: Vec<(usize, u64, Vec<u64>)> = Vec::new();
                    loop {
                        let chunk = cursor.fetch_add(1, Ordering::Relaxed);
                        if chunk >= chunks {
                            return mine;
                        }
                        let mut count: u64 = 0;
                        let mut found: Vec<u64> = Vec::new();
                        for x in bounds[chunk]..bounds[chunk + 1] {
                            let water = expand(x);
                            if compiled.is_valid(water) {
                                count += 1;
                                if collect {
                                    // one chunk over the cap proves the whole
                                    // listing is over it
                                    if count > listing_cap {
                                        over_cap.store(true, Ordering::Relaxed);
                                        break;
                                    }
                                    found.push(water);
                                }
                            }
                        }
                        mine.push((chunk, count, found));
                        if collect && over_cap.load(Ordering::Relaxed) {
                            return mine;
                        }
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let mut chunk_results: Vec<(u64, Vec<u64>)> = vec![(0, Vec::new()); chunks];
    for batch in batches {
        for (chunk, count, found) in batch {
            chunk_results[chunk] = (count, found);
        }
    }

    let mut count: u64 = 0;
    for &(c, _) in &chunk_results {
        count = count
            .checked_add(c)
            .ok_or(EnumerationError::CountOverflow)?;
    }

    let colorings = if collect {
        if over_cap.load(Ordering::Relaxed) || count > listing_cap {
            return Err(EnumerationError::ListingCapExceeded { cap: listing_cap });
        }
        let mut list = Vec::with_capacity(count as usize);
        for (_, chunk) in chunk_results {
            for water in chunk {
                list.push(Coloring::from_mask(n, water)?);
            }
        }
        debug_assert!(list.windows(2).all(|w| w[0] < w[1]));
        Some(list)
    } else {
        None
    };

    Ok(EnumerationResult {
        count,
        colorings,
        surface: surface.name().to_string(),
        rule,
        constraint: constraint.clone(),
    })
}

fn effective_workers(opts: &EnumerationOptions, total: u64) -> usize {
    let requested = if opts.workers == 0 {
        std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1)
    } else {
        opts.workers
    };
    requested.clamp(1, total.clamp(1, 256) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::Rule;
    use crate::surface::SquareTiledSurface;

    fn opts() -> EnumerationOptions {
        EnumerationOptions::default()
    }

    fn count(surface: &SquareTiledSurface, rule: Rule) -> u64 {
        count_valid(surface, rule, &Constraint::none(), &opts())
            .unwrap()
            .count
    }

    #[test]
    fn mobius_4_loop_count() {
        let s = SquareTiledSurface::mobius(4).unwrap();
        assert_eq!(count(&s, Rule::Loop), 10);
    }

    #[test]
    fn klein_4_loop_count() {
        let s = SquareTiledSurface::klein(4).unwrap();
        assert_eq!(count(&s, Rule::Loop), 7);
    }

    #[test]
    fn rectangle_2x2_square_count() {
        // 16 colorings minus the full whirlpool minus the two diagonals
        let s = SquareTiledSurface::rectangle(2, 2).unwrap();
        assert_eq!(count(&s, Rule::Square), 13);
    }

    #[test]
    fn mobius_7_both_ends_water() {
        let s = SquareTiledSurface::mobius(7).unwrap();
        let c = Constraint::water(&[1, 7]).unwrap();
        assert_eq!(count_valid(&s, Rule::Loop, &c, &opts()).unwrap().count, 9);
    }

    #[test]
    fn enumerate_mobius_2_loop() {
        let s = SquareTiledSurface::mobius(2).unwrap();
        let result = enumerate_valid(&s, Rule::Loop, &Constraint::none(), &opts()).unwrap();
        let masks: Vec<u64> = result.colorings.unwrap().iter().map(|c| c.mask()).collect();
        assert_eq!(masks, vec![0b00, 0b01, 0b10]);
        assert_eq!(result.count, 3);
    }

    #[test]
    fn enumerate_mobius_3_square_all_colorings() {
        let s = SquareTiledSurface::mobius(3).unwrap();
        let result = enumerate_valid(&s, Rule::Square, &Constraint::none(), &opts()).unwrap();
        assert_eq!(result.count, 8);
        let masks: Vec<u64> = result.colorings.unwrap().iter().map(|c| c.mask()).collect();
        assert_eq!(masks, (0..8).collect::<Vec<u64>>());
    }

    #[test]
    fn enumerate_single_square() {
        let s = SquareTiledSurface::rectangle(1, 1).unwrap();
        let result = enumerate_valid(&s, Rule::Loop, &Constraint::none(), &opts()).unwrap();
        let masks: Vec<u64> = result.colorings.unwrap().iter().map(|c| c.mask()).collect();
        assert_eq!(masks, vec![0, 1]);
    }

    #[test]
    fn refined_counts_small() {
        let r2 = refined_rectangle_counts(2, &opts()).unwrap();
        assert_eq!(r2.last_col[1], 6);
        assert_eq!(r2.first_full[1], 2);
        assert_eq!(r2.total, 13);
        assert_eq!(r2.last_col.iter().sum::<u64>(), 13);

        let r3 = refined_rectangle_counts(3, &opts()).unwrap();
        assert_eq!(r3.last_col[1], 14);
        assert_eq!(r3.first_full[1], 2);

        let r4 = refined_rectangle_counts(4, &opts()).unwrap();
        assert_eq!(r4.first_full[2], 2);
    }

    #[test]
    fn density_values() {
        let rect = SquareTiledSurface::rectangle(2, 2).unwrap();
        let d = validity_density(&rect, Rule::Square, &opts()).unwrap();
        assert_eq!(d.reduced(), (13, 16));
        assert_eq!(d.to_string(), "13/16");

        let unit = SquareTiledSurface::rectangle(1, 1).unwrap();
        let d = validity_density(&unit, Rule::Loop, &opts()).unwrap();
        assert_eq!(d.reduced(), (1, 1));
        assert_eq!(d.to_string(), "1");

        let mobius = SquareTiledSurface::mobius(4).unwrap();
        let d = validity_density(&mobius, Rule::Loop, &opts()).unwrap();
        assert_eq!(d.count(), 10);
        assert_eq!(d.reduced(), (5, 8));
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let s = SquareTiledSurface::klein(10).unwrap();
        let baseline = count_valid(
            &s,
            Rule::Loop,
            &Constraint::none(),
            &EnumerationOptions {
                workers: 1,
                ..opts()
            },
        )
        .unwrap()
        .count;
        for workers in [2, 3, 4, 7] {
            let options = EnumerationOptions { workers, ..opts() };
            assert_eq!(
                count_valid(&s, Rule::Loop, &Constraint::none(), &options)
                    .unwrap()
                    .count,
                baseline
            );
            let listed = enumerate_valid(&s, Rule::Loop, &Constraint::none(), &options).unwrap();
            assert_eq!(listed.count, baseline);
            let masks: Vec<u64> = listed.colorings.unwrap().iter().map(|c| c.mask()).collect();
            assert!(masks.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn constraint_complementation() {
        let s = SquareTiledSurface::mobius(6).unwrap();
        for rule in Rule::BOTH {
            let all = count(&s, rule);
            for sq in 1..=6 {
                let water = Constraint::water(&[sq]).unwrap();
                let land = Constraint::land(&[sq]).unwrap();
                let a = count_valid(&s, rule, &water, &opts()).unwrap().count;
                let b = count_valid(&s, rule, &land, &opts()).unwrap().count;
                assert_eq!(a + b, all, "square {sq}");
            }
        }
    }

    #[test]
    fn over_cap_needs_override() {
        let s = SquareTiledSurface::mobius(12).unwrap();
        let tight = EnumerationOptions {
            square_cap: 10,
            ..opts()
        };
        assert_eq!(
            count_valid(&s, Rule::Loop, &Constraint::none(), &tight).unwrap_err(),
            EnumerationError::OverCap {
                n_squares: 12,
                cap: 10
            }
        );
        let overridden = EnumerationOptions {
            square_cap: 10,
            allow_over_cap: true,
            ..opts()
        };
        assert!(count_valid(&s, Rule::Loop, &Constraint::none(), &overridden).is_ok());
    }

    #[test]
    fn listing_cap_enforced() {
        let s = SquareTiledSurface::mobius(10).unwrap();
        let tiny = EnumerationOptions {
            listing_cap: 5,
            ..opts()
        };
        assert_eq!(
            enumerate_valid(&s, Rule::Square, &Constraint::none(), &tiny).unwrap_err(),
            EnumerationError::ListingCapExceeded { cap: 5 }
        );
    }

    #[test]
    fn contradictory_constraint_rejected() {
        assert_eq!(
            Constraint::new(&[1, 2], &[2]).unwrap_err(),
            EnumerationError::ContradictoryConstraint(2)
        );
    }

    #[test]
    fn constrained_listing_is_ascending_and_filtered() {
        let s = SquareTiledSurface::mobius(5).unwrap();
        let c = Constraint::new(&[2], &[4]).unwrap();
        let listed = enumerate_valid(&s, Rule::Loop, &c, &opts()).unwrap();
        let list = listed.colorings.unwrap();
        assert!(!list.is_empty());
        for coloring in &list {
            assert!(coloring.is_water(2));
            assert!(!coloring.is_water(4));
        }
        assert!(list.windows(2).all(|w| w[0].mask() < w[1].mask()));
    }
}
