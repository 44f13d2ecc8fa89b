//! Solver and rendering for the `nurikabe` command-line tool.

pub mod render;
pub mod solve;

pub use render::{render_svg, render_text, RenderError};
pub use solve::{solve, solve_by_filter, PuzzleSpec, SolveError};
