use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

use super::{membership_t1, xy_quadratic, ParamPoint, Score};

/// Grid over the `(p1111, p1011)` plane.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatmapConfig {
    /// `p1111` range, the horizontal axis.
    pub x_range: (f64, f64),
    /// `p1011` range, the vertical axis.
    pub y_range: (f64, f64),
    pub resolution: usize,
}

impl Default for HeatmapConfig {
    fn default() -> HeatmapConfig {
        HeatmapConfig { x_range: (0.0, 0.5), y_range: (0.0, 0.05), resolution: 100 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CellStatus {
    Invalid,
    Neg,
    Pos,
}

impl fmt::Display for CellStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellStatus::Invalid => "INVALID",
            CellStatus::Neg => "NEG",
            CellStatus::Pos => "POS",
        })
    }
}

/// One grid cell, evaluated at its center.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeatCell {
    pub p1111: f64,
    pub p1011: f64,
    pub status: CellStatus,
    pub score: Option<f64>,
}

/// Float version of the branch choice: the root of the constraint landing in
/// `T₁`, the smaller one if both do.
fn float_branch(r: f64, t: f64) -> Option<f64> {
    let (a, b, c) = xy_quadratic(&r, &t);
    if a.abs() < 1e-14 {
        return None;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let mut roots = [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)];
    roots.sort_by(f64::total_cmp);
    roots.into_iter().find(|s| membership_t1(&ParamPoint::new(*s, r, t)))
}

fn evaluate(p1111: f64, p1011: f64) -> HeatCell {
    let score = float_branch(p1011, p1111).and_then(|s| Score::Rho2.of_point(&ParamPoint::new(s, p1011, p1111)));
    let status = match score {
        None => CellStatus::Invalid,
        Some(v) if v > 0.0 => CellStatus::Pos,
        Some(_) => CellStatus::Neg,
    };
    HeatCell { p1111, p1011, status, score }
}

/// Classifies `resolution²` cells by the sign of `ρ₂` on the model `𝓛`.
/// Cells are ordered row by row, `p1011` outer and `p1111` inner.
pub fn heatmap(cfg: &HeatmapConfig) -> Result<Vec<HeatCell>> {
    let n = cfg.resolution;
    if n < 2 {
        return Err(Error::Parse(format!("resolution must be at least 2, got {n}")));
    }
    let (x0, x1) = cfg.x_range;
    let (y0, y1) = cfg.y_range;
    if !(x0 < x1 && y0 < y1) {
        return Err(Error::Parse("empty heatmap range".into()));
    }
    let center = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
    Ok((0..n * n).into_par_iter().map(|k| evaluate(center(x0, x1, k % n), center(y0, y1, k / n))).collect())
}

pub fn heatmap_csv(cells: &[HeatCell]) -> String {
    let mut out = String::from("p1111,p1011,status,score\n");
    for c in cells {
        let score = c.score.map_or(String::new(), |v| format!("{v:.9e}"));
        out.push_str(&format!("{:.9},{:.9},{},{}\n", c.p1111, c.p1011, c.status, score));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape_and_header() {
        let cfg = HeatmapConfig { resolution: 7, ..HeatmapConfig::default() };
        let cells = heatmap(&cfg).unwrap();
        assert_eq!(cells.len(), 49);
        let csv = heatmap_csv(&cells);
        assert!(csv.starts_with("p1111,p1011,status,score\n"));
        assert_eq!(csv.lines().count(), 50);
        assert!(heatmap(&HeatmapConfig { resolution: 1, ..cfg }).is_err());
    }

    #[test]
    fn reference_point_cell_is_positive() {
        let (x, y) = (2.0 / 11.0, 2.0 / 99.0);
        let cfg = HeatmapConfig { x_range: (x - 0.001, x + 0.001), y_range: (y - 0.0001, y + 0.0001), resolution: 2 };
        let cells = heatmap(&cfg).unwrap();
        assert!(cells.iter().all(|c| c.status == CellStatus::Pos), "{cells:?}");
        assert_eq!(evaluate(x, y).status, CellStatus::Pos);
        let s = float_branch(y, x).unwrap();
        assert!((s - 10.0 / 693.0).abs() < 1e-12);
    }

    #[test]
    fn no_real_root_is_invalid() {
        let (a, b, c) = xy_quadratic(&0.1, &0.3);
        assert!(b * b - 4.0 * a * c < 0.0);
        assert_eq!(evaluate(0.3, 0.1).status, CellStatus::Invalid);
        assert_eq!(evaluate(0.0, 0.5).status, CellStatus::Invalid);
    }
}
