//! Clue-puzzle solver: exhaustive backtracking with pruning.
//!
//! Squares are decided in index order. Clue squares are forced land; a water
//! assignment that completes a whirlpool mask is pruned; decided land
//! components are pruned when they hold two clues, outgrow their clue, or
//! close without a matching clue. Leaves are validated with the rules
//! module, and [`solve_by_filter`] provides the oracle-backed reference the
//! solver is tested against.

use thiserror::Error;

use nurikabe_core::enumeration::{
    enumerate_valid, Constraint, EnumerationError, EnumerationOptions,
};
use nurikabe_core::rules::{self, Clue, Coloring, Rule, RulesError};
use nurikabe_core::surface::SquareTiledSurface;

/// A puzzle: a surface, a clue list, and the whirlpool rule in force.
#[derive(Debug, Clone)]
pub struct PuzzleSpec {
    pub surface: SquareTiledSurface,
    pub clues: Vec<Clue>,
    pub rule: Rule,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Rules(#[from] RulesError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

/// All colorings satisfying the rules and the clue constraints, in ascending
/// bitmask order.
pub fn solve(puzzle: &PuzzleSpec, opts: &EnumerationOptions) -> Result<Vec<Coloring>, SolveError> {
    let n = puzzle.surface.n_squares();
    if n > opts.square_cap && !opts.allow_over_cap {
        return Err(EnumerationError::OverCap {
            n_squares: n,
            cap: opts.square_cap,
        }
        .into());
    }
    rules::validate_clues(n, &puzzle.clues)?;
    let land_budget: usize = puzzle.clues.iter().map(|c| c.size).sum();
    if land_budget > n {
        return Ok(Vec::new());
    }

    let mut clue_mask = 0u64;
    let mut clue_size = vec![0usize; n + 1];
    for clue in &puzzle.clues {
        clue_mask |= 1 << (clue.square - 1);
        clue_size[clue.square] = clue.size;
    }
    let mut whirlpool_masks: Vec<u64> = puzzle
        .surface
        .vertex_orbits()
        .iter()
        .filter(|o| puzzle.rule.applies_to(o))
        .map(|o| o.incident_mask())
        .collect();
    whirlpool_masks.sort_unstable();
    whirlpool_masks.dedup();
    let neighbor_masks: Vec<u64> = (1..=n)
        .map(|sq| puzzle.surface.adjacency().neighbor_mask(sq))
        .collect();

    let mut search = Search {
        puzzle,
        n,
        clue_mask,
        clue_size,
        whirlpool_masks,
        neighbor_masks,
        land_budget,
        water_budget: n - land_budget,
        water: 0,
        decided: 0,
        solutions: Vec::new(),
    };
    search.descend(0);
    let mut masks = search.solutions;
    masks.sort_unstable();
    masks
        .into_iter()
        .map(|m| Coloring::from_mask(n, m).map_err(SolveError::from))
        .collect()
}

struct Search<'a> {
    puzzle: &'a PuzzleSpec,
    n: usize,
    clue_mask: u64,
    clue_size: Vec<usize>,
    whirlpool_masks: Vec<u64>,
    neighbor_masks: Vec<u64>,
    land_budget: usize,
    water_budget: usize,
    water: u64,
    decided: u64,
    solutions: Vec<u64>,
}

impl Search<'_> {
    fn descend(&mut self, index: usize) {
        if index == self.n {
            self.check_leaf();
            return;
        }
        let bit = 1u64 << index;

        // land branch
        let land_count = (self.decided & !self.water).count_ones() as usize;
        if land_count < self.land_budget {
            self.decided |= bit;
            if self.land_components_ok() {
                self.descend(index + 1);
            }
            self.decided &= !bit;
        }

        // water branch
        if self.clue_mask & bit == 0 && (self.water.count_ones() as usize) < self.water_budget {
            self.water |= bit;
            self.decided |= bit;
            if !self.completes_whirlpool() && self.land_components_ok() {
                self.descend(index + 1);
            }
            self.water &= !bit;
            self.decided &= !bit;
        }
    }

    fn completes_whirlpool(&self) -> bool {
        self.whirlpool_masks
            .iter()
            .any(|&m| self.water | m == self.water)
    }

    /// Prune on the decided land components: two clues in one component, a
    /// component larger than its clue, or a closed component that cannot
    /// match any clue.
    fn land_components_ok(&self) -> bool {
        let land = self.decided & !self.water;
        if land == 0 {
            return true;
        }
        let mut seen = 0u64;
        let mut rest = land;
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            if seen & start == 0 {
                // flood the component within decided land
                let mut component = start;
                loop {
                    let mut grown = component;
                    let mut bits = component;
                    while bits != 0 {
                        let sq = bits.trailing_zeros() as usize;
                        grown |= self.neighbor_masks[sq] & land;
                        bits &= bits - 1;
                    }
                    if grown == component {
                        break;
                    }
                    component = grown;
                }
                seen |= component;
                if !self.component_ok(component) {
                    return false;
                }
            }
            rest &= rest - 1;
        }
        true
    }

    fn component_ok(&self, component: u64) -> bool {
        let size = component.count_ones() as usize;
        let mut clue_count = 0usize;
        let mut clue_total = 0usize;
        let mut reach = 0u64;
        let mut bits = component;
        while bits != 0 {
            let idx = bits.trailing_zeros() as usize;
            reach |= self.neighbor_masks[idx];
            if self.clue_mask >> idx & 1 == 1 {
                clue_count += 1;
                clue_total += self.clue_size[idx + 1];
            }
            bits &= bits - 1;
        }
        if clue_count >= 2 {
            return false;
        }
        if clue_count == 1 && size > clue_total {
            return false;
        }
        let closed = reach & !self.decided == 0;
        if closed && (clue_count == 0 || size != clue_total) {
            return false;
        }
        true
    }

    fn check_leaf(&mut self) {
        let coloring = Coloring::from_mask(self.n, self.water).expect("mask within range");
        let connected =
            rules::water_connected(&self.puzzle.surface, &coloring).expect("lengths match");
        if !connected {
            return;
        }
        // whirlpools were excluded incrementally; only the clue structure is left
        let clues_ok = rules::check_clues(&self.puzzle.surface, &coloring, &self.puzzle.clues)
            .expect("clue squares are land by construction");
        if clues_ok {
            self.solutions.push(self.water);
        }
    }
}

/// Reference implementation: filter the full valid-coloring list by the clue
/// constraints. Used to check solver soundness and completeness.
pub fn solve_by_filter(
    puzzle: &PuzzleSpec,
    opts: &EnumerationOptions,
) -> Result<Vec<Coloring>, SolveError> {
    rules::validate_clues(puzzle.surface.n_squares(), &puzzle.clues)?;
    let all = enumerate_valid(&puzzle.surface, puzzle.rule, &Constraint::none(), opts)?;
    let list = all.colorings.expect("listing requested");
    let mut out = Vec::new();
    for coloring in list {
        if puzzle.clues.iter().any(|c| coloring.is_water(c.square)) {
            continue;
        }
        if rules::check_clues(&puzzle.surface, &coloring, &puzzle.clues)? {
            out.push(coloring);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn puzzle(surface: SquareTiledSurface, clues: &[(usize, usize)], rule: Rule) -> PuzzleSpec {
        PuzzleSpec {
            surface,
            clues: clues
                .iter()
                .map(|&(square, size)| Clue { square, size })
                .collect(),
            rule,
        }
    }

    fn opts() -> EnumerationOptions {
        EnumerationOptions::default()
    }

    #[test]
    fn clue_equal_to_square_count_forces_all_land() {
        for rule in Rule::BOTH {
            let p = puzzle(
                SquareTiledSurface::rectangle(2, 3).unwrap(),
                &[(1, 6)],
                rule,
            );
            let solutions = solve(&p, &opts()).unwrap();
            assert_eq!(solutions.len(), 1);
            assert_eq!(solutions[0].mask(), 0);
        }
    }

    #[test]
    fn mobius_4_single_clue() {
        let p = puzzle(
            SquareTiledSurface::mobius(4).unwrap(),
            &[(1, 1)],
            Rule::Square,
        );
        let solutions = solve(&p, &opts()).unwrap();
        assert_eq!(solutions.len(), 1);
        assert_eq!(solutions[0].water_squares(), vec![2, 3, 4]);

        let p = puzzle(
            SquareTiledSurface::mobius(4).unwrap(),
            &[(1, 1)],
            Rule::Loop,
        );
        assert!(solve(&p, &opts()).unwrap().is_empty());
    }

    #[test]
    fn rectangle_2x2_corner_clue() {
        for rule in Rule::BOTH {
            let p = puzzle(
                SquareTiledSurface::rectangle(2, 2).unwrap(),
                &[(1, 1)],
                rule,
            );
            let solutions = solve(&p, &opts()).unwrap();
            assert_eq!(solutions.len(), 1);
            assert_eq!(solutions[0].water_squares(), vec![2, 3, 4]);
        }
    }

    #[test]
    fn no_clues_means_all_water_or_nothing() {
        // without clues the only admissible coloring is all-water, and only
        // when it is itself valid
        let p = puzzle(
            SquareTiledSurface::rectangle(1, 3).unwrap(),
            &[],
            Rule::Loop,
        );
        let solutions = solve(&p, &opts()).unwrap();
        assert_eq!(solutions.len(), 1);
        assert_eq!(solutions[0].water_count(), 3);

        let p = puzzle(
            SquareTiledSurface::rectangle(2, 2).unwrap(),
            &[],
            Rule::Loop,
        );
        assert!(solve(&p, &opts()).unwrap().is_empty());
    }

    #[test]
    fn matches_filter_reference_on_examples() {
        let cases: Vec<PuzzleSpec> = vec![
            puzzle(
                SquareTiledSurface::klein(6).unwrap(),
                &[(2, 2), (5, 1)],
                Rule::Loop,
            ),
            puzzle(
                SquareTiledSurface::rectangle(3, 3).unwrap(),
                &[(1, 2), (9, 3)],
                Rule::Square,
            ),
            puzzle(
                SquareTiledSurface::staircase(3).unwrap(),
                &[(1, 1), (4, 2)],
                Rule::Loop,
            ),
            puzzle(
                SquareTiledSurface::torus(2, 4).unwrap(),
                &[(3, 4)],
                Rule::Loop,
            ),
        ];
        for p in &cases {
            let fast = solve(p, &opts()).unwrap();
            let reference = solve_by_filter(p, &opts()).unwrap();
            assert_eq!(fast, reference, "{}", p.surface.name());
        }
    }

    #[test]
    fn solutions_ascend_and_recheck() {
        let p = puzzle(
            SquareTiledSurface::mobius(6).unwrap(),
            &[(2, 2)],
            Rule::Loop,
        );
        let solutions = solve(&p, &opts()).unwrap();
        assert!(!solutions.is_empty());
        assert!(solutions.windows(2).all(|w| w[0].mask() < w[1].mask()));
        for s in &solutions {
            assert!(rules::is_valid(&p.surface, s, p.rule).unwrap().valid);
            assert!(rules::check_clues(&p.surface, s, &p.clues).unwrap());
        }
    }

    #[test]
    fn invalid_clues_rejected() {
        let p = puzzle(
            SquareTiledSurface::mobius(4).unwrap(),
            &[(9, 1)],
            Rule::Loop,
        );
        assert!(matches!(
            solve(&p, &opts()),
            Err(SolveError::Rules(RulesError::SquareOutOfRange { .. }))
        ));
    }
}
