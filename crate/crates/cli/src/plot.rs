//! Decision-boundary grids and their SVG rendering.

use std::fmt::Write as _;

use gqht::classifiers::{predict_all, BinaryClassifier};
use gqht::datasets::LabeledPoint;
use gqht::EstimatorConfig;

#[derive(Clone, Debug, PartialEq)]
pub struct GridCell {
    pub x: f64,
    pub y: f64,
    pub label: u8,
    pub score: f64,
}

/// Cell coordinates of a `g x g` grid over `[-1, 1]^2`, rows of constant `y`
/// from bottom to top.
pub fn grid_points(g: usize) -> Vec<Vec<f64>> {
    let coord = |i: usize| -1.0 + 2.0 * i as f64 / (g - 1) as f64;
    (0..g).flat_map(|iy| (0..g).map(move |ix| vec![coord(ix), coord(iy)])).collect()
}

pub fn evaluate_grid<C: BinaryClassifier + ?Sized>(
    clf: &C,
    g: usize,
    cfg: &EstimatorConfig,
) -> gqht::Result<Vec<GridCell>> {
    let pts = grid_points(g);
    let preds = predict_all(clf, &pts, cfg)?;
    Ok(pts.iter().zip(preds).map(|(p, (label, score))| GridCell { x: p[0], y: p[1], label, score }).collect())
}

pub fn grid_csv(cells: &[GridCell]) -> String {
    let mut out = String::from("x,y,label,score\n");
    for c in cells {
        let _ = writeln!(out, "{:.6},{:.6},{},{:.6}", c.x, c.y, c.label, c.score);
    }
    out
}

const SIZE: f64 = 480.0;
const REGION: [&str; 2] = ["#f6c6c0", "#c3d7f2"];
const POINT: [&str; 2] = ["#c0392b", "#1f5fa8"];

/// Two-colour label regions with the points drawn on top.
pub fn grid_svg(cells: &[GridCell], g: usize, points: &[LabeledPoint]) -> String {
    let to_px = |v: f64| (v + 1.0) / 2.0 * SIZE;
    let cell = SIZE / g as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    for (k, c) in cells.iter().enumerate() {
        let (ix, iy) = (k % g, k / g);
        let _ = writeln!(
            out,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
            ix as f64 * cell,
            SIZE - (iy + 1) as f64 * cell,
            cell,
            cell,
            REGION[c.label.min(1) as usize]
        );
    }
    for p in points {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="{}" stroke="black" stroke-width="0.8"/>"#,
            to_px(p.features[0]),
            SIZE - to_px(p.features[1]),
            POINT[p.label.min(1) as usize]
        );
    }
    out.push_str("</svg>\n");
    out
}
