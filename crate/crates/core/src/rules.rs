//! Validity rules for colorings: water connectivity, whirlpool detection
//! under the square and loop rules, island decomposition, and clue checking.
//!
//! All operations are pure functions of `(surface, coloring)` and safe to
//! call concurrently against a shared surface.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::surface::{SquareTiledSurface, VertexOrbit};

/// Which whirlpool rule applies.
///
/// * `Square`: no interior vertex of square-degree 4 may be entirely
///   surrounded by water (equivalently, no 2x2 block of four distinct water
///   squares).
/// * `Loop`: no interior vertex of any square-degree may be entirely
///   surrounded by water.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Square,
    Loop,
}

impl Rule {
    pub const BOTH: [Rule; 2] = [Rule::Square, Rule::Loop];

    /// True when `orbit` counts as a whirlpool site under this rule.
    pub fn applies_to(self, orbit: &VertexOrbit) -> bool {
        orbit.interior
            && match self {
                Rule::Square => orbit.square_degree == 4,
                Rule::Loop => true,
            }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Square => write!(f, "square"),
            Rule::Loop => write!(f, "loop"),
        }
    }
}

impl FromStr for Rule {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "square" => Ok(Rule::Square),
            "loop" => Ok(Rule::Loop),
            _ => Err(()),
        }
    }
}

/// Land or water state of one square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Land,
    Water,
}

/// A water/land assignment over the squares of a surface, stored as a
/// bitmask with square `i` at bit `i - 1` (set = water).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring {
    n_squares: usize,
    water: u64,
}

impl Coloring {
    pub fn all_land(n_squares: usize) -> Self {
        Coloring {
            n_squares,
            water: 0,
        }
    }

    pub fn from_mask(n_squares: usize, water: u64) -> Result<Self, RulesError> {
        if n_squares > 64 || (n_squares < 64 && water >> n_squares != 0) {
            return Err(RulesError::MaskOutOfRange { n_squares, water });
        }
        Ok(Coloring { n_squares, water })
    }

    pub fn from_water_squares(n_squares: usize, squares: &[usize]) -> Result<Self, RulesError> {
        let mut water = 0u64;
        for &sq in squares {
            if sq == 0 || sq > n_squares {
                return Err(RulesError::SquareOutOfRange {
                    square: sq,
                    n_squares,
                });
            }
            water |= 1 << (sq - 1);
        }
        Ok(Coloring { n_squares, water })
    }

    pub fn n_squares(&self) -> usize {
        self.n_squares
    }

    pub fn mask(&self) -> u64 {
        self.water
    }

    pub fn is_water(&self, square: usize) -> bool {
        self.water >> (square - 1) & 1 == 1
    }

    pub fn cell(&self, square: usize) -> Cell {
        if self.is_water(square) {
            Cell::Water
        } else {
            Cell::Land
        }
    }

    pub fn water_count(&self) -> usize {
        self.water.count_ones() as usize
    }

    pub fn water_squares(&self) -> Vec<usize> {
        (1..=self.n_squares)
            .filter(|&sq| self.is_water(sq))
            .collect()
    }

    pub fn land_squares(&self) -> Vec<usize> {
        (1..=self.n_squares)
            .filter(|&sq| !self.is_water(sq))
            .collect()
    }
}

impl fmt::Display for Coloring {
    /// One character per square: `#` water, `.` land.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for sq in 1..=self.n_squares {
            write!(f, "{}", if self.is_water(sq) { '#' } else { '.' })?;
        }
        Ok(())
    }
}

/// A numbered land square: the island containing it must have exactly this
/// many squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Clue {
    pub square: usize,
    pub size: usize,
}

/// Outcome of a full validity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    /// Water squares induce a connected subgraph (vacuously true when empty).
    pub connected: bool,
    /// Interior orbits fully surrounded by water, restricted by the rule.
    pub violating_orbits: Vec<VertexOrbit>,
    /// Connected components of the land squares, each sorted, ordered by
    /// smallest member.
    pub islands: Vec<Vec<usize>>,
    /// `connected` and no violating orbits.
    pub valid: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RulesError {
    #[error("coloring has {coloring} squares but surface has {surface}")]
    LengthMismatch { coloring: usize, surface: usize },
    #[error("square {square} out of range 1..={n_squares}")]
    SquareOutOfRange { square: usize, n_squares: usize },
    #[error("water mask {water:#x} has bits beyond {n_squares} squares")]
    MaskOutOfRange { n_squares: usize, water: u64 },
    #[error("clue on square {0} but that square is water")]
    ClueOnWater(usize),
    #[error("clue size must be positive (square {0})")]
    ZeroClueSize(usize),
    #[error("more than one clue on square {0}")]
    DuplicateClue(usize),
}

fn check_lengths(surface: &SquareTiledSurface, coloring: &Coloring) -> Result<(), RulesError> {
    if surface.n_squares() != coloring.n_squares() {
        return Err(RulesError::LengthMismatch {
            coloring: coloring.n_squares(),
            surface: surface.n_squares(),
        });
    }
    Ok(())
}

/// True iff the water squares induce a connected subgraph of the adjacency
/// graph. The empty water set counts as connected.
pub fn water_connected(
    surface: &SquareTiledSurface,
    coloring: &Coloring,
) -> Result<bool, RulesError> {
    check_lengths(surface, coloring)?;
    let edges = edge_list(surface);
    Ok(mask_connected(&edges, coloring.mask()))
}

/// Interior orbits whose incident squares are all water, filtered by rule:
/// the loop rule reports every such orbit, the square rule only those of
/// square-degree 4.
pub fn whirlpool_orbits(
    surface: &SquareTiledSurface,
    coloring: &Coloring,
    rule: Rule,
) -> Result<Vec<VertexOrbit>, RulesError> {
    check_lengths(surface, coloring)?;
    let water = coloring.mask();
    Ok(surface
        .vertex_orbits()
        .iter()
        .filter(|o| rule.applies_to(o))
        .filter(|o| {
            let m = o.incident_mask();
            water & m == m
        })
        .cloned()
        .collect())
}

/// Full validity check: connectivity, whirlpool violations, island
/// decomposition.
pub fn is_valid(
    surface: &SquareTiledSurface,
    coloring: &Coloring,
    rule: Rule,
) -> Result<ValidityReport, RulesError> {
    check_lengths(surface, coloring)?;
    let connected = water_connected(surface, coloring)?;
    let violating_orbits = whirlpool_orbits(surface, coloring, rule)?;
    let islands = islands(surface, coloring)?;
    let valid = connected && violating_orbits.is_empty();
    Ok(ValidityReport {
        connected,
        violating_orbits,
        islands,
        valid,
    })
}

/// Connected components of the land squares.
pub fn islands(
    surface: &SquareTiledSurface,
    coloring: &Coloring,
) -> Result<Vec<Vec<usize>>, RulesError> {
    check_lengths(surface, coloring)?;
    let n = surface.n_squares();
    let land: u64 = !coloring.mask() & mask_all(n);
    let mut uf = SmallUnionFind::new(n);
    for &(a, b) in surface.adjacency().edges() {
        if land >> (a - 1) & 1 == 1 && land >> (b - 1) & 1 == 1 {
            uf.union(a - 1, b - 1);
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for sq in 1..=n {
        if land >> (sq - 1) & 1 == 1 {
            groups[uf.find(sq - 1)].push(sq);
        }
    }
    Ok(groups.into_iter().filter(|g| !g.is_empty()).collect())
}

/// True iff every island contains exactly one clue whose value equals the
/// island size. Clue squares must be land; clues must be distinct and
/// positive.
pub fn check_clues(
    surface: &SquareTiledSurface,
    coloring: &Coloring,
    clues: &[Clue],
) -> Result<bool, RulesError> {
    check_lengths(surface, coloring)?;
    validate_clues(surface.n_squares(), clues)?;
    for clue in clues {
        if coloring.is_water(clue.square) {
            return Err(RulesError::ClueOnWater(clue.square));
        }
    }
    let islands = islands(surface, coloring)?;
    let mut matched = 0usize;
    for island in &islands {
        let inside: Vec<&Clue> = clues
            .iter()
            .filter(|c| island.binary_search(&c.square).is_ok())
            .collect();
        if inside.len() != 1 || inside[0].size != island.len() {
            return Ok(false);
        }
        matched += 1;
    }
    Ok(matched == clues.len())
}

/// Structural validation of a clue list against a square count.
pub fn validate_clues(n_squares: usize, clues: &[Clue]) -> Result<(), RulesError> {
    let mut seen = vec![false; n_squares + 1];
    for clue in clues {
        if clue.square == 0 || clue.square > n_squares {
            return Err(RulesError::SquareOutOfRange {
                square: clue.square,
                n_squares,
            });
        }
        if clue.size == 0 {
            return Err(RulesError::ZeroClueSize(clue.square));
        }
        if seen[clue.square] {
            return Err(RulesError::DuplicateClue(clue.square));
        }
        seen[clue.square] = true;
    }
    Ok(())
}

pub(crate) fn mask_all(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn edge_list(surface: &SquareTiledSurface) -> Vec<(u8, u8)> {
    surface
        .adjacency()
        .edges()
        .iter()
        .map(|&(a, b)| ((a - 1) as u8, (b - 1) as u8))
        .collect()
}

/// Connectivity of the set bits of `mask` under the given 0-based edge list,
/// by disjoint-set union over the edges restricted to set squares.
pub(crate) fn mask_connected(edges: &[(u8, u8)], mask: u64) -> bool {
    if mask == 0 {
        return true;
    }
    let mut parent = [0u8; 64];
    for (i, p) in parent.iter_mut().enumerate() {
        *p = i as u8;
    }
    #[inline]
    fn find(parent: &mut [u8; 64], mut x: u8) -> u8 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    for &(a, b) in edges {
        if mask >> a & 1 == 1 && mask >> b & 1 == 1 {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                parent[ra.max(rb) as usize] = ra.min(rb);
            }
        }
    }
    let root = find(&mut parent, mask.trailing_zeros() as u8);
    let mut rest = mask & (mask - 1);
    while rest != 0 {
        let sq = rest.trailing_zeros() as u8;
        if find(&mut parent, sq) != root {
            return false;
        }
        rest &= rest - 1;
    }
    true
}

struct SmallUnionFind {
    parent: Vec<usize>,
}

impl SmallUnionFind {
    fn new(n: usize) -> Self {
        SmallUnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
