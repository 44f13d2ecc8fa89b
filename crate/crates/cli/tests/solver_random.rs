//! Solver soundness and completeness against the oracle-backed filter on
//! randomized surfaces and clue sets.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use nurikabe_cli::{solve, solve_by_filter, PuzzleSpec};
use nurikabe_core::rules::{self, Clue, Coloring, Rule};
use nurikabe_core::surface::SquareTiledSurface;
use nurikabe_core::EnumerationOptions;

fn random_surface(rng: &mut StdRng) -> SquareTiledSurface {
    match rng.random_range(0..8) {
        0 => SquareTiledSurface::rectangle(2, rng.random_range(1..=8)),
        1 => SquareTiledSurface::rectangle(rng.random_range(3..=4), rng.random_range(1..=4)),
        2 => SquareTiledSurface::annulus(rng.random_range(1..=8)),
        3 => SquareTiledSurface::torus(2, rng.random_range(1..=8)),
        4 => SquareTiledSurface::mobius(rng.random_range(1..=16)),
        5 => SquareTiledSurface::klein(rng.random_range(1..=16)),
        6 => SquareTiledSurface::projective(rng.random_range(1..=16)),
        _ => SquareTiledSurface::staircase(rng.random_range(1..=8)),
    }
    .expect("sizes within bounds")
}

fn random_clues(rng: &mut StdRng, surface: &SquareTiledSurface) -> Vec<Clue> {
    let n = surface.n_squares();
    if rng.random_bool(0.7) {
        // clues read off the islands of a random coloring: frequently solvable
        let mask = rng.random_range(0..1u64 << n);
        let coloring = Coloring::from_mask(n, mask).unwrap();
        rules::islands(surface, &coloring)
            .unwrap()
            .into_iter()
            .map(|island| {
                let pick = island[rng.random_range(0..island.len())];
                Clue {
                    square: pick,
                    size: island.len(),
                }
            })
            .collect()
    } else {
        // arbitrary clues: often unsatisfiable, which the solver must report
        // as an empty solution list
        let count = rng.random_range(0..=3.min(n));
        let mut squares: Vec<usize> = (1..=n).collect();
        for i in (1..squares.len()).rev() {
            let j = rng.random_range(0..=i);
            squares.swap(i, j);
        }
        squares[..count]
            .iter()
            .map(|&square| Clue {
                square,
                size: rng.random_range(1..=n),
            })
            .collect()
    }
}

#[test]
fn solver_matches_filter_on_100_random_cases() {
    let mut rng = StdRng::seed_from_u64(20_240_817);
    let opts = EnumerationOptions::default();
    let mut solvable = 0usize;
    for case in 0..100 {
        let surface = random_surface(&mut rng);
        let clues = random_clues(&mut rng, &surface);
        let rule = if rng.random_bool(0.5) {
            Rule::Loop
        } else {
            Rule::Square
        };
        let puzzle = PuzzleSpec {
            surface,
            clues,
            rule,
        };
        let fast = solve(&puzzle, &opts).expect("solver runs");
        let reference = solve_by_filter(&puzzle, &opts).expect("filter runs");
        assert_eq!(
            fast,
            reference,
            "case {case}: {} rule={} clues={:?}",
            puzzle.surface.name(),
            puzzle.rule,
            puzzle.clues
        );
        if !fast.is_empty() {
            solvable += 1;
        }
        for solution in &fast {
            assert!(
                rules::is_valid(&puzzle.surface, solution, rule)
                    .unwrap()
                    .valid
            );
            assert!(rules::check_clues(&puzzle.surface, solution, &puzzle.clues).unwrap());
        }
    }
    // the island-derived strategy should make a healthy share solvable
    assert!(solvable >= 30, "only {solvable} of 100 cases had solutions");
}
