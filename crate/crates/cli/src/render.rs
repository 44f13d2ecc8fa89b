//! Text and SVG rendering of fundamental domains.
//!
//! The text renderer draws the layout grid (`#` water, `.` land, clue
//! digits) with edge-identification labels in the margins: paired slots
//! share a letter, uppercase for orientation-reversing gluings, and a legend
//! spells out each pair. The SVG renderer draws the same domain with
//! identification arrows and optional vertex-orbit markers. Output is
//! byte-deterministic for fixed input.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use nurikabe_core::rules::{self, Clue, Coloring, RulesError};
use nurikabe_core::surface::{Corner, Gluing, Side, SquareTiledSurface};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error(transparent)]
    Rules(#[from] RulesError),
}

fn validate(
    surface: &SquareTiledSurface,
    coloring: Option<&Coloring>,
    clues: &[Clue],
) -> Result<(), RenderError> {
    if let Some(c) = coloring {
        if c.n_squares() != surface.n_squares() {
            return Err(RulesError::LengthMismatch {
                coloring: c.n_squares(),
                surface: surface.n_squares(),
            }
            .into());
        }
    }
    rules::validate_clues(surface.n_squares(), clues)?;
    Ok(())
}

/// Gluings that are not drawn as shared edges of the layout, each with its
/// margin label. Labels follow canonical gluing order; reversed gluings get
/// uppercase letters.
fn labeled_gluings(surface: &SquareTiledSurface) -> Vec<(Gluing, String)> {
    let layout = surface.layout();
    let drawn_internal = |g: &Gluing| -> bool {
        if g.reversed {
            return false;
        }
        let pa = layout[g.a.square - 1];
        let pb = layout[g.b.square - 1];
        match (g.a.side, g.b.side) {
            (Side::East, Side::West) => pb == (pa.0, pa.1 + 1),
            (Side::West, Side::East) => pa == (pb.0, pb.1 + 1),
            (Side::South, Side::North) => pb == (pa.0 + 1, pa.1),
            (Side::North, Side::South) => pa == (pb.0 + 1, pb.1),
            _ => false,
        }
    };
    let mut labeled = Vec::new();
    let mut index = 0usize;
    for g in surface.gluings() {
        if drawn_internal(g) {
            continue;
        }
        let mut label = letter_label(index);
        if g.reversed {
            label = label.to_uppercase();
        }
        labeled.push((*g, label));
        index += 1;
    }
    labeled
}

fn letter_label(index: usize) -> String {
    let alphabet = b'z' - b'a' + 1;
    let mut label = String::new();
    let mut i = index;
    loop {
        label.insert(0, (b'a' + (i % alphabet as usize) as u8) as char);
        if i < alphabet as usize {
            break;
        }
        i = i / alphabet as usize - 1;
    }
    label
}

/// ASCII rendering: margin labels, the grid, an edge legend, and optionally
/// the vertex-orbit table.
pub fn render_text(
    surface: &SquareTiledSurface,
    coloring: Option<&Coloring>,
    clues: &[Clue],
    show_orbits: bool,
) -> Result<String, RenderError> {
    validate(surface, coloring, clues)?;
    let layout = surface.layout();
    let rows = layout.iter().map(|p| p.0).max().unwrap_or(0) + 1;
    let cols = layout.iter().map(|p| p.1).max().unwrap_or(0) + 1;

    let mut clue_at: BTreeMap<usize, usize> = BTreeMap::new();
    for clue in clues {
        clue_at.insert(clue.square, clue.size);
    }

    // canvas of (rows + 2) x (cols + 2) string cells; square (r, c) maps to
    // canvas (r + 1, c + 1) so margins can hold identification labels
    let mut canvas: Vec<Vec<String>> = vec![vec![String::new(); cols + 2]; rows + 2];
    let mut occupied = vec![vec![false; cols + 2]; rows + 2];
    for sq in 1..=surface.n_squares() {
        let (r, c) = layout[sq - 1];
        occupied[r + 1][c + 1] = true;
        let water = coloring.map(|col| col.is_water(sq)).unwrap_or(false);
        canvas[r + 1][c + 1] = if water {
            "#".to_string()
        } else if let Some(size) = clue_at.get(&sq) {
            size.to_string()
        } else {
            ".".to_string()
        };
    }

    let labeled = labeled_gluings(surface);
    for (g, label) in &labeled {
        for slot in [g.a, g.b] {
            let (r, c) = layout[slot.square - 1];
            let (mr, mc) = match slot.side {
                Side::North => (r, c + 1),
                Side::South => (r + 2, c + 1),
                Side::West => (r + 1, c),
                Side::East => (r + 1, c + 2),
            };
            if !occupied[mr][mc] {
                canvas[mr][mc].push_str(label);
            }
        }
    }

    let widths: Vec<usize> = (0..cols + 2)
        .map(|c| {
            (0..rows + 2)
                .map(|r| canvas[r][c].len())
                .max()
                .unwrap_or(0)
                .max(usize::from(c > 0 && c < cols + 1))
        })
        .collect();
    let mut out = String::new();
    for (r, row) in canvas.iter().enumerate() {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            let pad = widths[c].saturating_sub(cell.len());
            line.push_str(cell);
            line.push_str(&" ".repeat(pad));
        }
        let trimmed = line.trim_end();
        if trimmed.is_empty() && (r == 0 || r == rows + 1) && labeled.is_empty() {
            continue;
        }
        out.push_str(trimmed);
        out.push('\n');
    }

    if !labeled.is_empty() {
        out.push_str("edges:\n");
        for (g, label) in &labeled {
            let rev = if g.reversed { " rev" } else { "" };
            writeln!(out, "  {label}: {} ~ {}{rev}", g.a, g.b).unwrap();
        }
    }

    if show_orbits {
        out.push_str("orbits:\n");
        for (i, orbit) in surface.vertex_orbits().iter().enumerate() {
            let squares = orbit
                .incident_squares
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let kind = if orbit.interior {
                "interior"
            } else {
                "boundary"
            };
            writeln!(
                out,
                "  {i}: {kind} square-degree={} squares={{{squares}}}",
                orbit.square_degree
            )
            .unwrap();
        }
    }
    Ok(out)
}

const CELL: f64 = 48.0;
const MARGIN: f64 = 42.0;
const ORBIT_PALETTE: [&str; 6] = [
    "#c62828", "#1565c0", "#2e7d32", "#ef6c00", "#6a1b9a", "#00838f",
];

/// SVG rendering of the fundamental domain: filled squares, clue digits,
/// identification arrows with labels, and optional interior-orbit markers.
pub fn render_svg(
    surface: &SquareTiledSurface,
    coloring: Option<&Coloring>,
    clues: &[Clue],
    show_orbits: bool,
) -> Result<String, RenderError> {
    validate(surface, coloring, clues)?;
    let layout = surface.layout();
    let rows = layout.iter().map(|p| p.0).max().unwrap_or(0) + 1;
    let cols = layout.iter().map(|p| p.1).max().unwrap_or(0) + 1;
    let width = cols as f64 * CELL + 2.0 * MARGIN;
    let height = rows as f64 * CELL + 2.0 * MARGIN;
    let origin = |r: usize, c: usize| (MARGIN + c as f64 * CELL, MARGIN + r as f64 * CELL);

    let mut clue_at: BTreeMap<usize, usize> = BTreeMap::new();
    for clue in clues {
        clue_at.insert(clue.square, clue.size);
    }

    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">"
    )
    .unwrap();
    svg.push_str(
        "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" \
         orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"#333333\"/></marker></defs>\n",
    );
    writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>"
    )
    .unwrap();

    for sq in 1..=surface.n_squares() {
        let (r, c) = layout[sq - 1];
        let (x, y) = origin(r, c);
        let water = coloring.map(|col| col.is_water(sq)).unwrap_or(false);
        let fill = if water { "#3b6b9b" } else { "#ffffff" };
        writeln!(
            svg,
            "<rect x=\"{x}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{fill}\" \
             stroke=\"#1a1a1a\" stroke-width=\"1.5\"/>"
        )
        .unwrap();
        if let Some(size) = clue_at.get(&sq) {
            let color = if water { "#ffffff" } else { "#111111" };
            writeln!(
                svg,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"20\" font-family=\"sans-serif\" \
                 fill=\"{color}\" text-anchor=\"middle\" dominant-baseline=\"central\">{size}</text>",
                x + CELL / 2.0,
                y + CELL / 2.0
            )
            .unwrap();
        }
    }

    for (g, label) in &labeled_gluings(surface) {
        for (slot, flip) in [(g.a, false), (g.b, g.reversed)] {
            let (r, c) = layout[slot.square - 1];
            let (x, y) = origin(r, c);
            let ((x1, y1), (x2, y2), (ox, oy)) = match slot.side {
                Side::North => ((x, y), (x + CELL, y), (0.0, -10.0)),
                Side::South => ((x, y + CELL), (x + CELL, y + CELL), (0.0, 10.0)),
                Side::West => ((x, y), (x, y + CELL), (-10.0, 0.0)),
                Side::East => ((x + CELL, y), (x + CELL, y + CELL), (10.0, 0.0)),
            };
            let ((x1, y1), (x2, y2)) = if flip {
                ((x2, y2), (x1, y1))
            } else {
                ((x1, y1), (x2, y2))
            };
            writeln!(
                svg,
                "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#333333\" \
                 stroke-width=\"2\" marker-end=\"url(#arrow)\"/>",
                x1 + (x2 - x1) * 0.2 + ox,
                y1 + (y2 - y1) * 0.2 + oy,
                x1 + (x2 - x1) * 0.8 + ox,
                y1 + (y2 - y1) * 0.8 + oy
            )
            .unwrap();
            writeln!(
                svg,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" font-family=\"sans-serif\" \
                 fill=\"#333333\" text-anchor=\"middle\" dominant-baseline=\"central\">{label}</text>",
                (x1 + x2) / 2.0 + ox * 2.2,
                (y1 + y2) / 2.0 + oy * 2.2
            )
            .unwrap();
        }
    }

    if show_orbits {
        let corner_point = |sq: usize, corner: Corner| {
            let (r, c) = layout[sq - 1];
            let (x, y) = origin(r, c);
            match corner {
                Corner::NorthWest => (x, y),
                Corner::NorthEast => (x + CELL, y),
                Corner::SouthEast => (x + CELL, y + CELL),
                Corner::SouthWest => (x, y + CELL),
            }
        };
        let interior: Vec<_> = surface
            .vertex_orbits()
            .iter()
            .filter(|o| o.interior)
            .collect();
        for (i, orbit) in interior.iter().enumerate() {
            let color = ORBIT_PALETTE[i % ORBIT_PALETTE.len()];
            for corner in &orbit.corners {
                let (x, y) = corner_point(corner.square, corner.corner);
                writeln!(
                    svg,
                    "<circle cx=\"{x}\" cy=\"{y}\" r=\"5.5\" fill=\"{color}\" \
                     fill-opacity=\"0.9\"><title>orbit {i}: square-degree {}</title></circle>",
                    orbit.square_degree
                )
                .unwrap();
            }
        }
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}
