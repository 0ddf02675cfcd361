//! Arranging scattered control points into a row/column grid.
//!
//! Points are clustered into rows by vertical gaps, each row is aligned to
//! a common set of column positions, and cells with no matching point are
//! marked invalid. Invalid cells can later be filled by interpolating their
//! valid neighbors so a complete control net is available for fitting.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::Point2;

/// A new row starts when the vertical gap between consecutive y-sorted
/// points exceeds this factor times the median nearest-neighbor distance.
pub const DEFAULT_ROW_GAP_FACTOR: f64 = 0.5;

/// Cost of dropping a point or leaving a column empty during row alignment,
/// as a fraction of the column pitch. Matching beats dropping whenever the
/// point sits closer than this to its column center.
const ALIGN_PENALTY_FACTOR: f64 = 0.75;

/// Rectangular grid of control points with a per-cell validity flag.
///
/// Points are stored row-major. Within each row, x is strictly increasing
/// over valid cells; row mean-y (over valid cells) is strictly increasing
/// down the grid. Invalid cells hold a placeholder point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlGrid {
    rows: usize,
    cols: usize,
    points: Vec<Point2>,
    valid: Vec<bool>,
}

impl ControlGrid {
    /// Builds a grid after checking the ordering invariants.
    pub fn new(rows: usize, cols: usize, points: Vec<Point2>, valid: Vec<bool>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter(
                "grid must have at least one row and one column".into(),
            ));
        }
        if points.len() != rows * cols || valid.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "expected {} cells, got {} points and {} flags",
                rows * cols,
                points.len(),
                valid.len()
            )));
        }
        check_ordering(rows, cols, &points, &valid)?;
        Ok(Self { rows, cols, points, valid })
    }

    /// Builds a fully valid grid from row-major points.
    pub fn from_complete(rows: usize, cols: usize, points: Vec<Point2>) -> Result<Self> {
        let valid = vec![true; rows * cols];
        Self::new(rows, cols, points, valid)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn idx(&self, row: usize, col: usize) -> usize {
        assert!(row < self.rows && col < self.cols, "cell index out of range");
        row * self.cols + col
    }

    /// Stored point at a cell, placeholder included for invalid cells.
    pub fn point(&self, row: usize, col: usize) -> Point2 {
        self.points[self.idx(row, col)]
    }

    pub fn is_valid(&self, row: usize, col: usize) -> bool {
        self.valid[self.idx(row, col)]
    }

    /// Point at a cell if the cell is valid.
    pub fn get(&self, row: usize, col: usize) -> Option<Point2> {
        if self.is_valid(row, col) {
            Some(self.point(row, col))
        } else {
            None
        }
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    pub fn all_valid(&self) -> bool {
        self.valid.iter().all(|v| *v)
    }

    /// Valid points in row-major order.
    pub fn valid_points(&self) -> Vec<Point2> {
        self.points
            .iter()
            .zip(&self.valid)
            .filter(|(_, v)| **v)
            .map(|(p, _)| *p)
            .collect()
    }

    /// Replaces every invalid cell with an estimate interpolated from valid
    /// neighbors along its row and column (linear in the cell index on each
    /// axis, averaged when both axes provide an estimate; one-sided
    /// extrapolation from the nearest two cells when a side is missing).
    ///
    /// Fails with `IncompleteGrid` when some cell has no usable neighbors,
    /// leaving the grid untouched.
    pub fn fill_invalid(&mut self) -> Result<()> {
        if self.all_valid() {
            return Ok(());
        }
        let mut filled = self.points.clone();
        for row in 0..self.rows {
            for col in 0..self.cols {
                if self.is_valid(row, col) {
                    continue;
                }
                let row_cells: Vec<(usize, Point2)> = (0..self.cols)
                    .filter(|c| self.is_valid(row, *c))
                    .map(|c| (c, self.point(row, c)))
                    .collect();
                let col_cells: Vec<(usize, Point2)> = (0..self.rows)
                    .filter(|r| self.is_valid(*r, col))
                    .map(|r| (r, self.point(r, col)))
                    .collect();
                let along_row = axis_estimate(&row_cells, col);
                let along_col = axis_estimate(&col_cells, row);
                let estimate = match (along_row, along_col) {
                    (Some(a), Some(b)) => Point2::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => return Err(Error::IncompleteGrid),
                };
                filled[row * self.cols + col] = estimate;
            }
        }
        let valid = vec![true; self.rows * self.cols];
        check_ordering(self.rows, self.cols, &filled, &valid)?;
        self.points = filled;
        self.valid = valid;
        Ok(())
    }

    /// Writes `row,col,x,y,valid` lines, one per cell, row-major.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "row,col,x,y,valid")?;
        for row in 0..self.rows {
            for col in 0..self.cols {
                let p = self.point(row, col);
                let flag = if self.is_valid(row, col) { 1 } else { 0 };
                writeln!(w, "{},{},{},{},{}", row, col, p.x, p.y, flag)?;
            }
        }
        Ok(())
    }

    /// Reads a grid written by [`write_csv`](Self::write_csv). Every cell
    /// must appear exactly once; dimensions are taken from the largest
    /// row/col indices.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty grid CSV".into()))??;
        if header.trim() != "row,col,x,y,valid" {
            return Err(Error::Parse(format!("unexpected grid CSV header: {header:?}")));
        }
        let mut records: Vec<(usize, usize, Point2, bool)> = Vec::new();
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::Parse(format!("expected 5 fields, got {line:?}")));
            }
            let row: usize = parse_field(fields[0], "row")?;
            let col: usize = parse_field(fields[1], "col")?;
            let x: f64 = parse_field(fields[2], "x")?;
            let y: f64 = parse_field(fields[3], "y")?;
            let valid = match fields[4] {
                "1" | "true" => true,
                "0" | "false" => false,
                other => return Err(Error::Parse(format!("bad valid flag {other:?}"))),
            };
            records.push((row, col, Point2::new(x, y), valid));
        }
        if records.is_empty() {
            return Err(Error::Parse("grid CSV has no cells".into()));
        }
        let rows = records.iter().map(|r| r.0).max().unwrap() + 1;
        let cols = records.iter().map(|r| r.1).max().unwrap() + 1;
        let mut points = vec![Point2::default(); rows * cols];
        let mut valid = vec![false; rows * cols];
        let mut seen = vec![false; rows * cols];
        for (row, col, p, v) in records {
            let i = row * cols + col;
            if seen[i] {
                return Err(Error::Parse(format!("duplicate cell ({row}, {col})")));
            }
            seen[i] = true;
            points[i] = p;
            valid[i] = v;
        }
        if !seen.iter().all(|s| *s) {
            return Err(Error::Parse("grid CSV is missing cells".into()));
        }
        Self::new(rows, cols, points, valid)
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, name: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {name} value {s:?}")))
}

/// Ordering invariants: within each row x strictly increases over valid
/// cells, and the mean y of rows with any valid cell strictly increases.
fn check_ordering(rows: usize, cols: usize, points: &[Point2], valid: &[bool]) -> Result<()> {
    let mut prev_mean_y: Option<f64> = None;
    for row in 0..rows {
        let mut prev_x: Option<f64> = None;
        let mut sum_y = 0.0;
        let mut count = 0usize;
        for col in 0..cols {
            let i = row * cols + col;
            if !valid[i] {
                continue;
            }
            let p = points[i];
            if let Some(px) = prev_x {
                if p.x <= px {
                    return Err(Error::GridDegenerate(format!(
                        "x not increasing in row {row} at col {col}"
                    )));
                }
            }
            prev_x = Some(p.x);
            sum_y += p.y;
            count += 1;
        }
        if count == 0 {
            continue;
        }
        let mean_y = sum_y / count as f64;
        if let Some(py) = prev_mean_y {
            if mean_y <= py {
                return Err(Error::GridDegenerate(format!(
                    "row mean y not increasing at row {row}"
                )));
            }
        }
        prev_mean_y = Some(mean_y);
    }
    Ok(())
}

/// Linear index-based estimate for `target` from valid cells along one
/// axis: interpolate between the bracketing cells, otherwise extrapolate
/// from the two nearest cells on the populated side.
fn axis_estimate(cells: &[(usize, Point2)], target: usize) -> Option<Point2> {
    let before: Vec<(usize, Point2)> =
        cells.iter().copied().filter(|(i, _)| *i < target).collect();
    let after: Vec<(usize, Point2)> =
        cells.iter().copied().filter(|(i, _)| *i > target).collect();
    let (i0, p0, i1, p1) = match (before.last(), after.first()) {
        (Some(&(ib, pb)), Some(&(ia, pa))) => (ib, pb, ia, pa),
        (Some(_), None) if before.len() >= 2 => {
            let (ib, pb) = before[before.len() - 2];
            let (ia, pa) = before[before.len() - 1];
            (ib, pb, ia, pa)
        }
        (None, Some(_)) if after.len() >= 2 => {
            let (ib, pb) = after[0];
            let (ia, pa) = after[1];
            (ib, pb, ia, pa)
        }
        _ => return None,
    };
    let t = (target as f64 - i0 as f64) / (i1 as f64 - i0 as f64);
    Some(Point2::new(p0.x + (p1.x - p0.x) * t, p0.y + (p1.y - p0.y) * t))
}

/// Sorts scattered points into a [`ControlGrid`].
///
/// Rows are formed by clustering the y-sorted points wherever the vertical
/// gap exceeds `row_gap_factor` × the median nearest-neighbor distance.
/// The column count is `expected_cols` when given, otherwise the modal row
/// length (ties favor the larger count). Each row is then aligned to the
/// mean column positions of the complete rows, so a missing point becomes
/// an invalid cell at its own column rather than shifting its neighbors.
pub fn sort_into_grid(
    points: &[Point2],
    expected_cols: Option<usize>,
    row_gap_factor: f64,
) -> Result<ControlGrid> {
    if points.len() < 4 {
        return Err(Error::NotEnoughPoints { needed: 4, got: points.len() });
    }
    if !(row_gap_factor > 0.0) {
        return Err(Error::InvalidParameter("row_gap_factor must be positive".into()));
    }
    let gap = row_gap_factor * median_nearest_neighbor(points);

    let mut sorted: Vec<Point2> = points.to_vec();
    sorted.sort_by(|a, b| (a.y, a.x).partial_cmp(&(b.y, b.x)).expect("finite coordinates"));
    let mut rows: Vec<Vec<Point2>> = Vec::new();
    let mut last_y = f64::NEG_INFINITY;
    for p in sorted {
        if rows.is_empty() || p.y - last_y > gap {
            rows.push(Vec::new());
        }
        rows.last_mut().unwrap().push(p);
        last_y = p.y;
    }
    if rows.len() < 2 {
        return Err(Error::GridDegenerate("all points fall in a single row".into()));
    }
    for row in &mut rows {
        row.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).expect("finite coordinates"));
    }

    let cols = match expected_cols {
        Some(0) => return Err(Error::InvalidParameter("expected_cols must be nonzero".into())),
        Some(c) => c,
        None => modal_length(&rows),
    };
    if cols < 2 {
        return Err(Error::GridDegenerate("all points fall in a single column".into()));
    }

    // Column x positions averaged over the rows that have a full complement
    // of points; rows with gaps are aligned against these centers.
    let full: Vec<&Vec<Point2>> = rows.iter().filter(|r| r.len() == cols).collect();
    if full.is_empty() {
        return Err(Error::GridDegenerate(format!("no row has the expected {cols} columns")));
    }
    let centers: Vec<f64> = (0..cols)
        .map(|c| full.iter().map(|r| r[c].x).sum::<f64>() / full.len() as f64)
        .collect();
    let pitch = (centers[cols - 1] - centers[0]) / (cols - 1) as f64;
    if !(pitch > 0.0) {
        return Err(Error::GridDegenerate("column centers do not spread out".into()));
    }

    let penalty = ALIGN_PENALTY_FACTOR * pitch;
    let mut grid_points = Vec::with_capacity(rows.len() * cols);
    let mut grid_valid = Vec::with_capacity(rows.len() * cols);
    for row in &rows {
        for cell in align_row(row, &centers, penalty) {
            match cell {
                Some(p) => {
                    grid_points.push(p);
                    grid_valid.push(true);
                }
                None => {
                    grid_points.push(Point2::default());
                    grid_valid.push(false);
                }
            }
        }
    }
    ControlGrid::new(rows.len(), cols, grid_points, grid_valid)
}

/// Median of each point's distance to its nearest neighbor.
fn median_nearest_neighbor(points: &[Point2]) -> f64 {
    let mut dists: Vec<f64> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            points
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, q)| p.distance(q))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    dists.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    dists[dists.len() / 2]
}

/// Most common row length; ties go to the larger length.
fn modal_length(rows: &[Vec<Point2>]) -> usize {
    let mut counts: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for row in rows {
        *counts.entry(row.len()).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .max_by_key(|(len, count)| (*count, *len))
        .map(|(len, _)| len)
        .expect("at least one row")
}

/// Assigns an x-sorted row of points to x-sorted column centers by edit
/// distance: matching costs the x offset, dropping a point or leaving a
/// column empty costs `penalty`. Returns one slot per column.
fn align_row(row: &[Point2], centers: &[f64], penalty: f64) -> Vec<Option<Point2>> {
    let n = row.len();
    let m = centers.len();
    let mut cost = vec![vec![0.0f64; m + 1]; n + 1];
    // 0 = match point i-1 to column j-1, 1 = leave column j-1 empty,
    // 2 = drop point i-1.
    let mut moves = vec![vec![0u8; m + 1]; n + 1];
    for j in 1..=m {
        cost[0][j] = j as f64 * penalty;
        moves[0][j] = 1;
    }
    for i in 1..=n {
        cost[i][0] = i as f64 * penalty;
        moves[i][0] = 2;
    }
    for i in 1..=n {
        for j in 1..=m {
            let mut best = cost[i - 1][j - 1] + (row[i - 1].x - centers[j - 1]).abs();
            let mut mv = 0u8;
            let skip = cost[i][j - 1] + penalty;
            if skip < best {
                best = skip;
                mv = 1;
            }
            let drop = cost[i - 1][j] + penalty;
            if drop < best {
                best = drop;
                mv = 2;
            }
            cost[i][j] = best;
            moves[i][j] = mv;
        }
    }
    let mut cells = vec![None; m];
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        match moves[i][j] {
            0 => {
                cells[j - 1] = Some(row[i - 1]);
                i -= 1;
                j -= 1;
            }
            1 => j -= 1,
            _ => i -= 1,
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use std::io::Cursor;

    use proptest::prelude::*;

    use super::*;

    fn lattice(rows: usize, cols: usize, pitch: f64) -> Vec<Point2> {
        let mut pts = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                pts.push(Point2::new(c as f64 * pitch, r as f64 * pitch));
            }
        }
        pts
    }

    #[test]
    fn shuffled_two_by_two_sorts_into_rows() {
        let pts = [
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 0.0),
        ];
        let grid = sort_into_grid(&pts, None, DEFAULT_ROW_GAP_FACTOR).unwrap();
        assert_eq!((grid.rows(), grid.cols()), (2, 2));
        assert!(grid.all_valid());
        assert_eq!(grid.point(0, 0), Point2::new(0.0, 0.0));
        assert_eq!(grid.point(0, 1), Point2::new(1.0, 0.0));
        assert_eq!(grid.point(1, 0), Point2::new(0.0, 1.0));
        assert_eq!(grid.point(1, 1), Point2::new(1.0, 1.0));
    }

    #[test]
    fn jittered_lattice_matches_nearest_lattice_oracle() {
        // Deterministic sub-pixel jitter on a 3×3 lattice of pitch 10.
        let jitter = [
            (0.3, -0.2),
            (-0.5, 0.1),
            (0.2, 0.4),
            (-0.1, -0.3),
            (0.5, 0.2),
            (0.0, -0.5),
            (0.4, 0.3),
            (-0.3, 0.0),
            (0.1, 0.5),
        ];
        let pts: Vec<Point2> = lattice(3, 3, 10.0)
            .iter()
            .zip(jitter)
            .map(|(p, (dx, dy))| Point2::new(p.x + dx, p.y + dy))
            .collect();
        let grid = sort_into_grid(&pts, None, DEFAULT_ROW_GAP_FACTOR).unwrap();
        assert_eq!((grid.rows(), grid.cols()), (3, 3));
        for r in 0..3 {
            for c in 0..3 {
                // Oracle: the input point nearest to the ideal lattice node.
                let node = Point2::new(c as f64 * 10.0, r as f64 * 10.0);
                let nearest = pts
                    .iter()
                    .min_by(|a, b| {
                        a.distance(&node).partial_cmp(&b.distance(&node)).unwrap()
                    })
                    .unwrap();
                assert_eq!(grid.point(r, c), *nearest, "cell ({r}, {c})");
            }
        }
    }

    #[test]
    fn missing_interior_point_yields_invalid_cell_at_its_index() {
        let pts: Vec<Point2> = lattice(3, 3, 10.0)
            .into_iter()
            .filter(|p| *p != Point2::new(10.0, 10.0))
            .collect();
        let grid = sort_into_grid(&pts, None, DEFAULT_ROW_GAP_FACTOR).unwrap();
        assert_eq!((grid.rows(), grid.cols()), (3, 3));
        assert_eq!(grid.valid_count(), 8);
        assert!(!grid.is_valid(1, 1));
        assert_eq!(grid.get(1, 0), Some(Point2::new(0.0, 10.0)));
        assert_eq!(grid.get(1, 2), Some(Point2::new(20.0, 10.0)));
    }

    #[test]
    fn fill_invalid_restores_missing_lattice_point() {
        let pts: Vec<Point2> = lattice(3, 3, 10.0)
            .into_iter()
            .filter(|p| *p != Point2::new(10.0, 10.0))
            .collect();
        let mut grid = sort_into_grid(&pts, None, DEFAULT_ROW_GAP_FACTOR).unwrap();
        grid.fill_invalid().unwrap();
        assert!(grid.all_valid());
        let p = grid.point(1, 1);
        assert!((p.x - 10.0).abs() < 1e-9 && (p.y - 10.0).abs() < 1e-9);
    }

    #[test]
    fn fill_invalid_extrapolates_edge_cell() {
        let pts: Vec<Point2> = lattice(3, 3, 10.0)
            .into_iter()
            .filter(|p| *p != Point2::new(20.0, 0.0))
            .collect();
        let mut grid = sort_into_grid(&pts, None, DEFAULT_ROW_GAP_FACTOR).unwrap();
        assert!(!grid.is_valid(0, 2));
        grid.fill_invalid().unwrap();
        let p = grid.point(0, 2);
        assert!((p.x - 20.0).abs() < 1e-9 && (p.y - 0.0).abs() < 1e-9);
    }

    #[test]
    fn single_row_is_degenerate() {
        let pts: Vec<Point2> = (0..5).map(|i| Point2::new(i as f64 * 10.0, 0.0)).collect();
        assert!(matches!(
            sort_into_grid(&pts, None, DEFAULT_ROW_GAP_FACTOR),
            Err(Error::GridDegenerate(_))
        ));
    }

    #[test]
    fn single_column_is_degenerate() {
        let pts: Vec<Point2> = (0..5).map(|i| Point2::new(0.0, i as f64 * 10.0)).collect();
        assert!(matches!(
            sort_into_grid(&pts, None, DEFAULT_ROW_GAP_FACTOR),
            Err(Error::GridDegenerate(_))
        ));
    }

    #[test]
    fn too_few_points_is_an_error() {
        let pts = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)];
        assert!(matches!(
            sort_into_grid(&pts, None, DEFAULT_ROW_GAP_FACTOR),
            Err(Error::NotEnoughPoints { needed: 4, got: 3 })
        ));
    }

    #[test]
    fn expected_cols_overrides_modal_length() {
        let pts: Vec<Point2> = lattice(3, 3, 10.0)
            .into_iter()
            .filter(|p| *p != Point2::new(10.0, 10.0))
            .collect();
        let auto = sort_into_grid(&pts, None, DEFAULT_ROW_GAP_FACTOR).unwrap();
        let forced = sort_into_grid(&pts, Some(3), DEFAULT_ROW_GAP_FACTOR).unwrap();
        assert_eq!(auto, forced);
    }

    #[test]
    fn regridding_valid_points_reproduces_the_grid() {
        let pts: Vec<Point2> = lattice(3, 3, 10.0)
            .into_iter()
            .filter(|p| *p != Point2::new(10.0, 10.0))
            .collect();
        let grid = sort_into_grid(&pts, None, DEFAULT_ROW_GAP_FACTOR).unwrap();
        let again =
            sort_into_grid(&grid.valid_points(), None, DEFAULT_ROW_GAP_FACTOR).unwrap();
        assert_eq!(grid, again);
    }

    #[test]
    fn csv_round_trip_preserves_grid() {
        let pts: Vec<Point2> = lattice(3, 3, 10.0)
            .into_iter()
            .filter(|p| *p != Point2::new(10.0, 10.0))
            .map(|p| Point2::new(p.x + 0.125, p.y - 0.25))
            .collect();
        let grid = sort_into_grid(&pts, None, DEFAULT_ROW_GAP_FACTOR).unwrap();
        let mut buf = Vec::new();
        grid.write_csv(&mut buf).unwrap();
        let back = ControlGrid::read_csv(Cursor::new(buf)).unwrap();
        assert_eq!(grid, back);
    }

    #[test]
    fn json_round_trip_preserves_grid() {
        let grid = sort_into_grid(&lattice(2, 3, 10.0), None, DEFAULT_ROW_GAP_FACTOR).unwrap();
        let json = serde_json::to_string(&grid).unwrap();
        let back: ControlGrid = serde_json::from_str(&json).unwrap();
        assert_eq!(grid, back);
    }

    #[test]
    fn new_rejects_non_monotonic_rows() {
        let pts = vec![
            Point2::new(5.0, 0.0),
            Point2::new(3.0, 0.0),
            Point2::new(0.0, 10.0),
            Point2::new(10.0, 10.0),
        ];
        assert!(matches!(
            ControlGrid::new(2, 2, pts, vec![true; 4]),
            Err(Error::GridDegenerate(_))
        ));
    }

    #[test]
    fn fill_without_neighbors_reports_incomplete() {
        let pts = vec![
            Point2::new(0.0, 0.0),
            Point2::new(10.0, 0.0),
            Point2::new(0.0, 10.0),
            Point2::new(10.0, 10.0),
        ];
        let valid = vec![true, false, false, false];
        let mut grid = ControlGrid::new(2, 2, pts, valid).unwrap();
        assert!(matches!(grid.fill_invalid(), Err(Error::IncompleteGrid)));
    }

    fn staggered_lattice_pairs() -> Vec<(f64, f64)> {
        let mut pts = Vec::new();
        for r in 0..3 {
            for c in 0..4 {
                pts.push((c as f64 * 10.0 + 0.25 * r as f64, r as f64 * 10.0));
            }
        }
        pts
    }

    proptest! {
        #[test]
        fn permutation_invariant(perm in Just(staggered_lattice_pairs()).prop_shuffle()) {
            let pts: Vec<Point2> = perm.iter().map(|(x, y)| Point2::new(*x, *y)).collect();
            let baseline: Vec<Point2> = staggered_lattice_pairs()
                .iter()
                .map(|(x, y)| Point2::new(*x, *y))
                .collect();
            let a = sort_into_grid(&pts, None, DEFAULT_ROW_GAP_FACTOR).unwrap();
            let b = sort_into_grid(&baseline, None, DEFAULT_ROW_GAP_FACTOR).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
