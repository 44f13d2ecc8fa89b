//! Exact enumeration of Nurikabe colorings on square-tiled surfaces.
//!
//! The crate models fundamental domains of unit squares with edge gluings
//! (rectangles, annuli, tori, Möbius strips, Klein bottles, projective
//! planes, staircases, and custom gluings), decides coloring validity under
//! the square and loop whirlpool rules, enumerates valid colorings
//! exhaustively and in parallel, evaluates the catalog of closed forms and
//! recursions for these counts, and machine-checks the cutting bijections
//! between strips and rectangles.

pub mod bijections;
pub mod enumeration;
pub mod rules;
pub mod sequences;
pub mod surface;

pub use bijections::{
    check_bijection, contraction, contraction_inverse, rectangular_reduction,
    rectangular_reduction_inverse, BijectionCheck, BijectionError, BijectionReport,
};
pub use enumeration::{
    count_valid, enumerate_valid, refined_rectangle_counts, validity_density, Constraint, Density,
    EnumerationError, EnumerationOptions, EnumerationResult, RefinedRectangleCounts,
    DEFAULT_LISTING_CAP, DEFAULT_SQUARE_CAP,
};
pub use rules::{
    check_clues, is_valid, islands, water_connected, whirlpool_orbits, Cell, Clue, Coloring, Rule,
    RulesError, ValidityReport,
};
pub use sequences::{
    bfile, eval, loop_klein_lemma_chain, verify, BfileSource, CountReport, FormulaComparison,
    FormulaId, SequencesError, VerifyFamily, VerifyRow,
};
pub use surface::{
    AdjacencyGraph, Corner, CornerRef, Gluing, ParseErrorKind, Side, SideRef, SquareTiledSurface,
    SurfaceError, VertexOrbit, MAX_SQUARES,
};
