//! Square-tiled surfaces given by a fundamental domain of unit squares and an
//! edge-gluing involution.
//!
//! A surface is a set of `1..=n` squares together with gluings between side
//! slots. Internal adjacencies of the fundamental domain are stored as
//! ordinary (non-reversed) gluings, so a single corner-identification pass
//! computes vertex orbits, adjacency, and the Euler characteristic for every
//! surface uniformly. All derived data is computed eagerly at construction;
//! surfaces are immutable afterwards and safe to share across threads.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Hard upper bound on the number of squares. Colorings are `u64` bitmasks.
pub const MAX_SQUARES: usize = 64;

/// One of the four sides of a square, named in the drawing frame of the
/// fundamental domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    North,
    East,
    South,
    West,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::North, Side::East, Side::South, Side::West];

    fn index(self) -> usize {
        match self {
            Side::North => 0,
            Side::East => 1,
            Side::South => 2,
            Side::West => 3,
        }
    }

    /// Endpoint corners of this side in convention order: N and S run
    /// left-to-right, W and E run top-to-bottom.
    fn endpoints(self) -> (Corner, Corner) {
        match self {
            Side::North => (Corner::NorthWest, Corner::NorthEast),
            Side::South => (Corner::SouthWest, Corner::SouthEast),
            Side::West => (Corner::NorthWest, Corner::SouthWest),
            Side::East => (Corner::NorthEast, Corner::SouthEast),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Side::North => 'N',
            Side::East => 'E',
            Side::South => 'S',
            Side::West => 'W',
        };
        write!(f, "{c}")
    }
}

impl FromStr for Side {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "N" => Ok(Side::North),
            "E" => Ok(Side::East),
            "S" => Ok(Side::South),
            "W" => Ok(Side::West),
            _ => Err(()),
        }
    }
}

/// One of the four corners of a square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Corner {
    NorthWest,
    NorthEast,
    SouthEast,
    SouthWest,
}

impl Corner {
    pub const ALL: [Corner; 4] = [
        Corner::NorthWest,
        Corner::NorthEast,
        Corner::SouthEast,
        Corner::SouthWest,
    ];

    fn index(self) -> usize {
        match self {
            Corner::NorthWest => 0,
            Corner::NorthEast => 1,
            Corner::SouthEast => 2,
            Corner::SouthWest => 3,
        }
    }

    fn from_index(i: usize) -> Corner {
        Corner::ALL[i]
    }

    /// The two side slots meeting at this corner.
    fn touching_sides(self) -> [Side; 2] {
        match self {
            Corner::NorthWest => [Side::North, Side::West],
            Corner::NorthEast => [Side::North, Side::East],
            Corner::SouthEast => [Side::South, Side::East],
            Corner::SouthWest => [Side::South, Side::West],
        }
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Corner::NorthWest => "NW",
            Corner::NorthEast => "NE",
            Corner::SouthEast => "SE",
            Corner::SouthWest => "SW",
        };
        write!(f, "{s}")
    }
}

/// A side slot: one side of one square. Squares are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideRef {
    pub square: usize,
    pub side: Side,
}

impl SideRef {
    pub fn new(square: usize, side: Side) -> Self {
        SideRef { square, side }
    }
}

impl fmt::Display for SideRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.square, self.side)
    }
}

impl FromStr for SideRef {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (sq, side) = s.split_once('.').ok_or(())?;
        let square: usize = sq.parse().map_err(|_| ())?;
        let side: Side = side.parse()?;
        Ok(SideRef { square, side })
    }
}

/// An identification of two side slots. With `reversed = false` the endpoint
/// corners are matched in convention order (first-first, second-second);
/// `reversed = true` swaps the matching, producing an orientation-reversing
/// gluing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub a: SideRef,
    pub b: SideRef,
    pub reversed: bool,
}

impl Gluing {
    pub fn new(a: SideRef, b: SideRef, reversed: bool) -> Self {
        Gluing { a, b, reversed }
    }

    /// Same gluing with `a <= b`; matching is symmetric so swapping the slots
    /// does not change the identification.
    fn normalized(self) -> Self {
        if self.a <= self.b {
            self
        } else {
            Gluing {
                a: self.b,
                b: self.a,
                reversed: self.reversed,
            }
        }
    }
}

/// A corner slot: one corner of one square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CornerRef {
    pub square: usize,
    pub corner: Corner,
}

impl fmt::Display for CornerRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.square, self.corner)
    }
}

/// An equivalence class of square corners under the gluing identifications.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrbit {
    /// Member corner slots, sorted. A square may appear several times.
    pub corners: Vec<CornerRef>,
    /// True when every side slot touching a member corner is glued.
    pub interior: bool,
    /// Number of distinct incident squares, not counting multiplicity.
    pub square_degree: usize,
    /// Sorted distinct squares incident to this orbit.
    pub incident_squares: Vec<usize>,
}

impl VertexOrbit {
    /// Bitmask of incident squares (square `i` maps to bit `i - 1`).
    pub fn incident_mask(&self) -> u64 {
        self.incident_squares
            .iter()
            .fold(0u64, |m, &sq| m | (1u64 << (sq - 1)))
    }
}

/// Squares as vertices, with an edge whenever two distinct squares share at
/// least one glued edge. No self-loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyGraph {
    n_squares: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl AdjacencyGraph {
    fn build(n_squares: usize, gluings: &[Gluing]) -> Self {
        let mut edges: Vec<(usize, usize)> = gluings
            .iter()
            .filter(|g| g.a.square != g.b.square)
            .map(|g| {
                let (x, y) = (g.a.square, g.b.square);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let mut neighbors = vec![Vec::new(); n_squares + 1];
        for &(a, b) in &edges {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        AdjacencyGraph {
            n_squares,
            edges,
            neighbors,
        }
    }

    pub fn n_squares(&self) -> usize {
        self.n_squares
    }

    /// Sorted list of unordered edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, square: usize) -> &[usize] {
        &self.neighbors[square]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Neighbor bitmask of a square (square `i` maps to bit `i - 1`).
    pub fn neighbor_mask(&self, square: usize) -> u64 {
        self.neighbors[square]
            .iter()
            .fold(0u64, |m, &sq| m | (1u64 << (sq - 1)))
    }

    /// True when every square is reachable from square 1.
    pub fn is_connected(&self) -> bool {
        if self.n_squares == 0 {
            return true;
        }
        let mut seen = vec![false; self.n_squares + 1];
        let mut stack = vec![1];
        seen[1] = true;
        let mut count = 1;
        while let Some(sq) = stack.pop() {
            for &next in self.neighbors(sq) {
                if !seen[next] {
                    seen[next] = true;
                    count += 1;
                    stack.push(next);
                }
            }
        }
        count == self.n_squares
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("surface must have at least one square")]
    ZeroSquares,
    #[error("surface has {0} squares; at most {MAX_SQUARES} are supported")]
    TooManySquares(usize),
    #[error("square {square} out of range 1..={n_squares}")]
    SquareOutOfRange { square: usize, n_squares: usize },
    #[error("side {0} cannot be glued to itself")]
    SelfGluing(SideRef),
    #[error("side {0} appears in more than one gluing")]
    DuplicateGluing(SideRef),
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing `squares <n>` directive")]
    MissingSquares,
    #[error("`squares` declared more than once")]
    SquaresRedeclared,
    #[error("`glue` before `squares` directive")]
    GlueBeforeSquares,
    #[error("invalid square count `{0}`")]
    BadSquareCount(String),
    #[error("invalid side reference `{0}` (expected `<square>.<N|E|S|W>`)")]
    BadSideRef(String),
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("expected `glue <a> <b> [rev]`, found `{0}`")]
    MalformedGlue(String),
    #[error("square {square} out of range 1..={n_squares}")]
    SquareOutOfRange { square: usize, n_squares: usize },
    #[error("side {0} cannot be glued to itself")]
    SelfGluing(SideRef),
    #[error("side {0} appears in more than one gluing")]
    DuplicateSlot(SideRef),
}

/// A square-tiled fundamental domain with edge gluings and all derived
/// topological data.
#[derive(Debug, Clone)]
pub struct SquareTiledSurface {
    name: String,
    n_squares: usize,
    gluings: Vec<Gluing>,
    glued: Vec<[bool; 4]>,
    orbits: Vec<VertexOrbit>,
    adjacency: AdjacencyGraph,
    euler_characteristic: i64,
    layout: Vec<(usize, usize)>,
}

impl SquareTiledSurface {
    /// General constructor: validates the gluing set (each slot glued at most
    /// once, no slot glued to itself) and computes the derived data.
    ///
    /// `layout` assigns each square a `(row, col)` drawing position; when
    /// absent the squares are laid out as a single row.
    pub fn from_gluings(
        name: impl Into<String>,
        n_squares: usize,
        gluings: Vec<Gluing>,
        layout: Option<Vec<(usize, usize)>>,
    ) -> Result<Self, SurfaceError> {
        if n_squares == 0 {
            return Err(SurfaceError::ZeroSquares);
        }
        if n_squares > MAX_SQUARES {
            return Err(SurfaceError::TooManySquares(n_squares));
        }
        let mut glued = vec![[false; 4]; n_squares + 1];
        let mut normalized = Vec::with_capacity(gluings.len());
        for g in gluings {
            for slot in [g.a, g.b] {
                if slot.square == 0 || slot.square > n_squares {
                    return Err(SurfaceError::SquareOutOfRange {
                        square: slot.square,
                        n_squares,
                    });
                }
            }
            if g.a == g.b {
                return Err(SurfaceError::SelfGluing(g.a));
            }
            for slot in [g.a, g.b] {
                let used = &mut glued[slot.square][slot.side.index()];
                if *used {
                    return Err(SurfaceError::DuplicateGluing(slot));
                }
                *used = true;
            }
            normalized.push(g.normalized());
        }
        normalized.sort_unstable_by_key(|g| (g.a, g.b));

        let layout = layout.unwrap_or_else(|| (0..n_squares).map(|i| (0, i)).collect());
        debug_assert_eq!(layout.len(), n_squares);

        let orbits = compute_orbits(n_squares, &normalized, &glued);
        let adjacency = AdjacencyGraph::build(n_squares, &normalized);
        let unglued: usize = (1..=n_squares)
            .map(|sq| (0..4).filter(|&s| !glued[sq][s]).count())
            .sum();
        let euler_characteristic =
            orbits.len() as i64 - (normalized.len() + unglued) as i64 + n_squares as i64;

        Ok(SquareTiledSurface {
            name: name.into(),
            n_squares,
            gluings: normalized,
            glued,
            orbits,
            adjacency,
            euler_characteristic,
            layout,
        })
    }

    /// An `rows x cols` rectangular grid: internal shared edges glued, outer
    /// boundary left open. Square `(r, c)` has index `(r-1)*cols + c`.
    pub fn rectangle(rows: usize, cols: usize) -> Result<Self, SurfaceError> {
        let gluings = rectangle_gluings(rows, cols)?;
        let layout = grid_layout(rows, cols);
        Self::from_gluings(
            format!("rectangle:{rows}x{cols}"),
            rows * cols,
            gluings,
            Some(layout),
        )
    }

    /// A `2 x cols` rectangle with the horizontal edges identified: the top
    /// edge of row 1 glued column-wise to the bottom edge of row 2, without
    /// reversal. The left and right ends stay open.
    pub fn annulus(cols: usize) -> Result<Self, SurfaceError> {
        if cols == 0 {
            return Err(SurfaceError::ZeroSquares);
        }
        let mut gluings = rectangle_gluings(2, cols)?;
        for c in 1..=cols {
            gluings.push(Gluing::new(
                SideRef::new(c, Side::North),
                SideRef::new(cols + c, Side::South),
                false,
            ));
        }
        Self::from_gluings(
            format!("annulus:{cols}"),
            2 * cols,
            gluings,
            Some(grid_layout(2, cols)),
        )
    }

    /// An `rows x cols` torus: the rectangle with both pairs of opposite
    /// edges identified by translation.
    pub fn torus(rows: usize, cols: usize) -> Result<Self, SurfaceError> {
        let mut gluings = rectangle_gluings(rows, cols)?;
        let idx = |r: usize, c: usize| (r - 1) * cols + c;
        for c in 1..=cols {
            gluings.push(Gluing::new(
                SideRef::new(idx(1, c), Side::North),
                SideRef::new(idx(rows, c), Side::South),
                false,
            ));
        }
        for r in 1..=rows {
            gluings.push(Gluing::new(
                SideRef::new(idx(r, cols), Side::East),
                SideRef::new(idx(r, 1), Side::West),
                false,
            ));
        }
        Self::from_gluings(
            format!("torus:{rows}x{cols}"),
            rows * cols,
            gluings,
            Some(grid_layout(rows, cols)),
        )
    }

    /// A `1 x n` Möbius strip: the top edge of square `j` glued, reversed, to
    /// the bottom edge of square `n + 1 - j`. The two vertical ends stay
    /// open. For odd `n` the central square is glued to itself vertically.
    pub fn mobius(n: usize) -> Result<Self, SurfaceError> {
        let gluings = mobius_gluings(n)?;
        Self::from_gluings(format!("mobius:{n}"), n, gluings, Some(grid_layout(1, n)))
    }

    /// A `1 x n` Klein bottle: the Möbius gluing plus the two vertical ends
    /// identified without reversal.
    pub fn klein(n: usize) -> Result<Self, SurfaceError> {
        let mut gluings = mobius_gluings(n)?;
        gluings.push(Gluing::new(
            SideRef::new(1, Side::West),
            SideRef::new(n, Side::East),
            false,
        ));
        Self::from_gluings(format!("klein:{n}"), n, gluings, Some(grid_layout(1, n)))
    }

    /// A `1 x n` projective plane: the Möbius gluing plus the two vertical
    /// ends identified with reversal.
    pub fn projective(n: usize) -> Result<Self, SurfaceError> {
        let mut gluings = mobius_gluings(n)?;
        gluings.push(Gluing::new(
            SideRef::new(1, Side::West),
            SideRef::new(n, Side::East),
            true,
        ));
        Self::from_gluings(
            format!("projective:{n}"),
            n,
            gluings,
            Some(grid_layout(1, n)),
        )
    }

    /// A closed orientable staircase surface with `2*steps - 1` squares in an
    /// alternating right/up chain, opposite boundary edges of each row and
    /// column identified by translation. All corners belong to a single
    /// vertex orbit; `steps = 1` is the square torus.
    pub fn staircase(steps: usize) -> Result<Self, SurfaceError> {
        if steps == 0 {
            return Err(SurfaceError::ZeroSquares);
        }
        let n = 2 * steps - 1;
        if n > MAX_SQUARES {
            return Err(SurfaceError::TooManySquares(n));
        }
        // Odd square 2t-1 sits at (x, y) = (t-1, t-1), even square 2t at (t, t-1).
        let mut gluings = Vec::new();
        for t in 1..steps {
            gluings.push(Gluing::new(
                SideRef::new(2 * t - 1, Side::East),
                SideRef::new(2 * t, Side::West),
                false,
            ));
            gluings.push(Gluing::new(
                SideRef::new(2 * t, Side::North),
                SideRef::new(2 * t + 1, Side::South),
                false,
            ));
        }
        // Column x: top boundary edge to bottom boundary edge.
        gluings.push(Gluing::new(
            SideRef::new(1, Side::North),
            SideRef::new(1, Side::South),
            false,
        ));
        for x in 1..steps {
            gluings.push(Gluing::new(
                SideRef::new(2 * x + 1, Side::North),
                SideRef::new(2 * x, Side::South),
                false,
            ));
        }
        // Row y: rightmost boundary edge to leftmost boundary edge.
        for y in 0..steps.saturating_sub(1) {
            gluings.push(Gluing::new(
                SideRef::new(2 * y + 2, Side::East),
                SideRef::new(2 * y + 1, Side::West),
                false,
            ));
        }
        gluings.push(Gluing::new(
            SideRef::new(n, Side::East),
            SideRef::new(n, Side::West),
            false,
        ));

        let mut layout = Vec::with_capacity(n);
        for i in 1..=n {
            let (x, y) = if i % 2 == 1 {
                ((i - 1) / 2, (i - 1) / 2)
            } else {
                (i / 2, i / 2 - 1)
            };
            layout.push((steps - 1 - y, x));
        }
        Self::from_gluings(format!("staircase:{steps}"), n, gluings, Some(layout))
    }

    /// Parse the surface-spec text format: one directive per line, `#`
    /// comments, `squares <n>` followed by `glue <i>.<SIDE> <j>.<SIDE> [rev]`
    /// lines. Errors carry the 1-based line number.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self, SurfaceError> {
        let mut n_squares: Option<usize> = None;
        let mut gluings: Vec<Gluing> = Vec::new();
        let mut used: Vec<[bool; 4]> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let fail = |kind| Err(SurfaceError::Parse { line, kind });
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut tokens = content.split_whitespace();
            match tokens.next() {
                Some("squares") => {
                    if n_squares.is_some() {
                        return fail(ParseErrorKind::SquaresRedeclared);
                    }
                    let word = tokens.next().unwrap_or("");
                    let n: usize = match word.parse() {
                        Ok(n) if (1..=MAX_SQUARES).contains(&n) => n,
                        _ => return fail(ParseErrorKind::BadSquareCount(word.to_string())),
                    };
                    n_squares = Some(n);
                    used = vec![[false; 4]; n + 1];
                }
                Some("glue") => {
                    let n = match n_squares {
                        Some(n) => n,
                        None => return fail(ParseErrorKind::GlueBeforeSquares),
                    };
                    let side_ref = |tok: Option<&str>| -> Result<SideRef, SurfaceError> {
                        let word = tok.ok_or(SurfaceError::Parse {
                            line,
                            kind: ParseErrorKind::MalformedGlue(content.to_string()),
                        })?;
                        let slot: SideRef = word.parse().map_err(|_| SurfaceError::Parse {
                            line,
                            kind: ParseErrorKind::BadSideRef(word.to_string()),
                        })?;
                        if slot.square == 0 || slot.square > n {
                            return Err(SurfaceError::Parse {
                                line,
                                kind: ParseErrorKind::SquareOutOfRange {
                                    square: slot.square,
                                    n_squares: n,
                                },
                            });
                        }
                        Ok(slot)
                    };
                    let a = side_ref(tokens.next())?;
                    let b = side_ref(tokens.next())?;
                    let reversed = match tokens.next() {
                        None => false,
                        Some("rev") => true,
                        Some(_) => return fail(ParseErrorKind::MalformedGlue(content.to_string())),
                    };
                    if tokens.next().is_some() {
                        return fail(ParseErrorKind::MalformedGlue(content.to_string()));
                    }
                    if a == b {
                        return fail(ParseErrorKind::SelfGluing(a));
                    }
                    for slot in [a, b] {
                        let seen = &mut used[slot.square][slot.side.index()];
                        if *seen {
                            return fail(ParseErrorKind::DuplicateSlot(slot));
                        }
                        *seen = true;
                    }
                    gluings.push(Gluing::new(a, b, reversed));
                }
                Some(other) => return fail(ParseErrorKind::UnknownDirective(other.to_string())),
                None => unreachable!(),
            }
        }
        let n = n_squares.ok_or(SurfaceError::Parse {
            line: text.lines().count().max(1),
            kind: ParseErrorKind::MissingSquares,
        })?;
        Self::from_gluings(name, n, gluings, None)
    }

    /// Canonical surface-spec serialization: `squares` line, then gluings
    /// ordered by `(min slot, max slot)`. `parse(serialize(s))` reproduces
    /// the gluing set exactly.
    pub fn serialize(&self) -> String {
        let mut out = format!("squares {}\n", self.n_squares);
        for g in &self.gluings {
            if g.reversed {
                out.push_str(&format!("glue {} {} rev\n", g.a, g.b));
            } else {
                out.push_str(&format!("glue {} {}\n", g.a, g.b));
            }
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_squares(&self) -> usize {
        self.n_squares
    }

    /// Gluings in canonical order.
    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    pub fn is_glued(&self, slot: SideRef) -> bool {
        self.glued[slot.square][slot.side.index()]
    }

    /// Side slots not glued to anything (the boundary of the surface).
    pub fn unglued_slots(&self) -> Vec<SideRef> {
        let mut out = Vec::new();
        for sq in 1..=self.n_squares {
            for side in Side::ALL {
                if !self.glued[sq][side.index()] {
                    out.push(SideRef::new(sq, side));
                }
            }
        }
        out
    }

    /// Vertex orbits in deterministic order (by smallest member corner).
    pub fn vertex_orbits(&self) -> &[VertexOrbit] {
        &self.orbits
    }

    pub fn interior_orbits(&self) -> impl Iterator<Item = &VertexOrbit> {
        self.orbits.iter().filter(|o| o.interior)
    }

    pub fn adjacency(&self) -> &AdjacencyGraph {
        &self.adjacency
    }

    /// `V - E + F`, counting each glued pair once and each unglued slot once.
    pub fn euler_characteristic(&self) -> i64 {
        self.euler_characteristic
    }

    /// Drawing position `(row, col)` of each square, 0-based, square `i` at
    /// index `i - 1`.
    pub fn layout(&self) -> &[(usize, usize)] {
        &self.layout
    }
}

fn grid_layout(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut layout = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            layout.push((r, c));
        }
    }
    layout
}

fn rectangle_gluings(rows: usize, cols: usize) -> Result<Vec<Gluing>, SurfaceError> {
    if rows == 0 || cols == 0 {
        return Err(SurfaceError::ZeroSquares);
    }
    if rows * cols > MAX_SQUARES {
        return Err(SurfaceError::TooManySquares(rows * cols));
    }
    let idx = |r: usize, c: usize| (r - 1) * cols + c;
    let mut gluings = Vec::new();
    for r in 1..=rows {
        for c in 1..cols {
            gluings.push(Gluing::new(
                SideRef::new(idx(r, c), Side::East),
                SideRef::new(idx(r, c + 1), Side::West),
                false,
            ));
        }
    }
    for r in 1..rows {
        for c in 1..=cols {
            gluings.push(Gluing::new(
                SideRef::new(idx(r, c), Side::South),
                SideRef::new(idx(r + 1, c), Side::North),
                false,
            ));
        }
    }
    Ok(gluings)
}

fn mobius_gluings(n: usize) -> Result<Vec<Gluing>, SurfaceError> {
    let mut gluings = rectangle_gluings(1, n)?;
    for j in 1..=n {
        gluings.push(Gluing::new(
            SideRef::new(j, Side::North),
            SideRef::new(n + 1 - j, Side::South),
            true,
        ));
    }
    Ok(gluings)
}

fn corner_id(square: usize, corner: Corner) -> usize {
    (square - 1) * 4 + corner.index()
}

fn compute_orbits(n_squares: usize, gluings: &[Gluing], glued: &[[bool; 4]]) -> Vec<VertexOrbit> {
    let mut uf = UnionFind::new(4 * n_squares);
    for g in gluings {
        let (a1, a2) = g.a.side.endpoints();
        let (b1, b2) = g.b.side.endpoints();
        let (b1, b2) = if g.reversed { (b2, b1) } else { (b1, b2) };
        uf.union(corner_id(g.a.square, a1), corner_id(g.b.square, b1));
        uf.union(corner_id(g.a.square, a2), corner_id(g.b.square, b2));
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); 4 * n_squares];
    for id in 0..4 * n_squares {
        groups[uf.find(id)].push(id);
    }
    let mut orbits = Vec::new();
    for group in groups.into_iter().filter(|g| !g.is_empty()) {
        let corners: Vec<CornerRef> = group
            .iter()
            .map(|&id| CornerRef {
                square: id / 4 + 1,
                corner: Corner::from_index(id % 4),
            })
            .collect();
        let mut incident_squares: Vec<usize> = corners.iter().map(|c| c.square).collect();
        incident_squares.sort_unstable();
        incident_squares.dedup();
        let interior = corners.iter().all(|c| {
            c.corner
                .touching_sides()
                .iter()
                .all(|s| glued[c.square][s.index()])
        });
        orbits.push(VertexOrbit {
            square_degree: incident_squares.len(),
            interior,
            incident_squares,
            corners,
        });
    }
    orbits.sort_unstable_by_key(|o| o.corners[0]);
    orbits
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
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
