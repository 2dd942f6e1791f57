//! ASCII and SVG drawings of compiled layouts.
//!
//! Sites carry the logical combination their qubit represents; squares
//! are drawn blue, triangles red, edge couplers green, ancillas grey.

use std::fmt::Write as _;

use crate::artifact::qubit_label;
use crate::cnot::ProjectorTree;
use crate::code::ParityCode;
use crate::layout::{Layout, PlaquetteKind};
use crate::projector::AncillaRecord;

/// Text drawing: one label per site, a marker per plaquette cell
/// (`#` square, `^` triangle, `=` edge).
pub fn ascii(layout: &Layout, code: &ParityCode, ancillas: &[AncillaRecord]) -> String {
    let (h, w) = layout.grid_bounds;
    let mut labels = vec![vec![String::new(); w]; h];
    for (q, pos) in layout.positions.iter().enumerate() {
        if let Some((r, c)) = *pos {
            labels[r][c] = format!("({})", qubit_label(code, ancillas, q));
        }
    }
    let cell_width = labels
        .iter()
        .flatten()
        .map(|s| s.len())
        .max()
        .unwrap_or(1)
        .max(3);
    let mut marks = vec![vec![' '; w.saturating_sub(1)]; h.saturating_sub(1)];
    for p in &layout.plaquettes {
        let mark = match p.kind {
            PlaquetteKind::Square => '#',
            PlaquetteKind::Triangle => '^',
            PlaquetteKind::Edge => '=',
        };
        marks[p.cell.0][p.cell.1] = mark;
    }
    let mut out = String::new();
    for r in 0..h {
        for c in 0..w {
            let label = &labels[r][c];
            let _ = write!(out, "{label:<cell_width$}");
            if c + 1 < w {
                out.push_str("  ");
            }
        }
        out.push('\n');
        if r + 1 < h {
            for c in 0..w.saturating_sub(1) {
                let pad = cell_width / 2;
                let _ = write!(out, "{:pad$}", "");
                let _ = write!(out, "{:<width$}", marks[r][c], width = cell_width - pad + 2);
            }
            out.push('\n');
        }
    }
    if !layout.fixed.is_empty() {
        let pinned: Vec<String> = layout
            .fixed
            .iter()
            .map(|&q| format!("({})", qubit_label(code, ancillas, q)))
            .collect();
        let _ = writeln!(out, "pinned to +1: {}", pinned.join(" "));
    }
    out
}

const SVG_CELL: f64 = 60.0;
const SVG_MARGIN: f64 = 40.0;

fn site_xy(r: usize, c: usize) -> (f64, f64) {
    (
        SVG_MARGIN + c as f64 * SVG_CELL,
        SVG_MARGIN + r as f64 * SVG_CELL,
    )
}

/// SVG drawing of a plaquette layout.
pub fn svg(layout: &Layout, code: &ParityCode, ancillas: &[AncillaRecord]) -> String {
    let (h, w) = layout.grid_bounds;
    let width = 2.0 * SVG_MARGIN + (w.saturating_sub(1)) as f64 * SVG_CELL;
    let height = 2.0 * SVG_MARGIN + (h.saturating_sub(1)) as f64 * SVG_CELL;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    // grid lines
    for r in 0..h {
        let (x0, y) = site_xy(r, 0);
        let (x1, _) = site_xy(r, w - 1);
        let _ = writeln!(
            out,
            r##"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="#ddd"/>"##
        );
    }
    for c in 0..w {
        let (x, y0) = site_xy(0, c);
        let (_, y1) = site_xy(h - 1, c);
        let _ = writeln!(
            out,
            r##"<line x1="{x}" y1="{y0}" x2="{x}" y2="{y1}" stroke="#ddd"/>"##
        );
    }
    // plaquettes under the qubits
    for p in &layout.plaquettes {
        match p.kind {
            PlaquetteKind::Square => {
                let (x, y) = site_xy(p.cell.0, p.cell.1);
                let _ = writeln!(
                    out,
                    r##"<rect x="{x}" y="{y}" width="{SVG_CELL}" height="{SVG_CELL}" fill="#4477cc" fill-opacity="0.45"/>"##
                );
            }
            PlaquetteKind::Triangle => {
                let points: Vec<String> = p
                    .qubits
                    .iter()
                    .map(|&q| {
                        let (r, c) = layout.positions[q].expect("plaquette member placed");
                        let (x, y) = site_xy(r, c);
                        format!("{x},{y}")
                    })
                    .collect();
                let _ = writeln!(
                    out,
                    r##"<polygon points="{}" fill="#cc4444" fill-opacity="0.5"/>"##,
                    points.join(" ")
                );
            }
            PlaquetteKind::Edge => {
                let (r0, c0) = layout.positions[p.qubits[0]].expect("edge member placed");
                let (r1, c1) = layout.positions[p.qubits[1]].expect("edge member placed");
                let (x0, y0) = site_xy(r0, c0);
                let (x1, y1) = site_xy(r1, c1);
                let _ = writeln!(
                    out,
                    r##"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="#44aa55" stroke-width="10" stroke-opacity="0.6"/>"##
                );
            }
        }
    }
    draw_qubits(&mut out, layout, code, ancillas);
    out.push_str("</svg>\n");
    out
}

/// SVG drawing of a CNOT layout: projector trees as colored paths.
pub fn svg_cnot(
    layout_positions: &[Option<(usize, usize)>],
    grid_bounds: (usize, usize),
    trees: &[ProjectorTree],
    code: &ParityCode,
    ancillas: &[AncillaRecord],
) -> String {
    let (h, w) = grid_bounds;
    let width = 2.0 * SVG_MARGIN + (w.saturating_sub(1)) as f64 * SVG_CELL;
    let height = 2.0 * SVG_MARGIN + (h.saturating_sub(1)) as f64 * SVG_CELL;
    let palette = ["#4477cc", "#cc4444", "#44aa55", "#bb8800", "#8844bb", "#118899"];
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    for (i, tree) in trees.iter().enumerate() {
        let color = palette[i % palette.len()];
        for &(a, b) in &tree.edges {
            let (ra, ca) = layout_positions[a].expect("tree member placed");
            let (rb, cb) = layout_positions[b].expect("tree member placed");
            let (x0, y0) = site_xy(ra, ca);
            let (x1, y1) = site_xy(rb, cb);
            let _ = writeln!(
                out,
                r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="{color}" stroke-width="8" stroke-opacity="0.7"/>"#
            );
        }
    }
    let layout = Layout {
        positions: layout_positions.to_vec(),
        plaquettes: vec![],
        grid_bounds,
        dynamical_ancillas: vec![],
        fixed: vec![],
        num_physical: layout_positions.len(),
    };
    draw_qubits(&mut out, &layout, code, ancillas);
    out.push_str("</svg>\n");
    out
}

fn draw_qubits(out: &mut String, layout: &Layout, code: &ParityCode, ancillas: &[AncillaRecord]) {
    for (q, pos) in layout.positions.iter().enumerate() {
        if let Some((r, c)) = *pos {
            let (x, y) = site_xy(r, c);
            let fill = if q >= code.num_parity() { "#bbbbbb" } else { "#ffffff" };
            let _ = writeln!(
                out,
                r#"<circle cx="{x}" cy="{y}" r="16" fill="{fill}" stroke="black"/>"#
            );
            let label = qubit_label(code, ancillas, q);
            let _ = writeln!(
                out,
                r#"<text x="{x}" y="{}" text-anchor="middle" font-size="10" font-family="monospace">{label}</text>"#,
                y + 3.0
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{lay_out, LayoutOptions};
    use crate::problem::five_qubit_example;
    use crate::projector::{build_projector_set, ProjectorMode};

    fn compiled() -> (ParityCode, crate::projector::ProjectorSet, Layout) {
        let code = ParityCode::from_problem(&five_qubit_example()).unwrap();
        let set = build_projector_set(code.check(), ProjectorMode::Plaquette);
        let layout = lay_out(&set, &LayoutOptions::default()).unwrap();
        (code, set, layout)
    }

    #[test]
    fn ascii_shows_all_labels_and_markers() {
        let (code, set, layout) = compiled();
        let text = ascii(&layout, &code, &set.ancillas);
        for labels in code.term_labels() {
            let expect: Vec<String> = labels.iter().map(|q| (q + 1).to_string()).collect();
            assert!(text.contains(&format!("({})", expect.join(","))), "{text}");
        }
        assert_eq!(text.matches('#').count(), 2, "two square markers:\n{text}");
    }

    #[test]
    fn svg_draws_two_squares() {
        let (code, set, layout) = compiled();
        let drawing = svg(&layout, &code, &set.ancillas);
        assert_eq!(drawing.matches("<rect").count(), 3, "background plus two cells");
        assert_eq!(drawing.matches("<circle").count(), 6);
        assert!(drawing.starts_with("<svg"));
    }

    #[test]
    fn svg_triangle_marker() {
        let set = crate::projector::ProjectorSet {
            projectors: vec![vec![0, 1, 2]],
            ancillas: vec![],
            fixed: vec![],
            check_cols: 3,
            num_physical: 3,
        };
        let problem = crate::problem::LogicalProblem::new(
            3,
            vec![
                crate::problem::Term { support: vec![0, 1], coefficient: 1.0 },
                crate::problem::Term { support: vec![1, 2], coefficient: 1.0 },
                crate::problem::Term { support: vec![0, 2], coefficient: 1.0 },
            ],
            vec![],
        )
        .unwrap();
        let code = ParityCode::from_problem(&problem).unwrap();
        let layout = lay_out(&set, &LayoutOptions::default()).unwrap();
        let drawing = svg(&layout, &code, &set.ancillas);
        assert!(drawing.contains("<polygon"), "triangles render as polygons");
    }

    #[test]
    fn empty_layout_renders_empty_grid() {
        let problem = crate::problem::LogicalProblem {
            num_qubits: 1,
            terms: vec![],
            constraints: vec![],
        };
        let code = ParityCode::from_problem(&problem).unwrap();
        let layout = Layout {
            positions: vec![],
            plaquettes: vec![],
            grid_bounds: (2, 2),
            dynamical_ancillas: vec![],
            fixed: vec![],
            num_physical: 0,
        };
        let text = ascii(&layout, &code, &[]);
        assert!(!text.contains('('));
        let drawing = svg(&layout, &code, &[]);
        assert!(!drawing.contains("<circle"));
    }
}
