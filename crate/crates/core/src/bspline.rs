//! Tensor-product B-spline surfaces over a control-point grid.
//!
//! Surfaces are evaluated with the Cox–de Boor recursion. Two evaluators
//! exist on purpose: [`basis`] follows the recursion directly and serves as
//! the reference, while [`BSplineSurface::eval`] uses the usual span search
//! plus triangular table, which touches only the (p+1)(q+1) active basis
//! products. Tests hold the two to 1e-12 of each other.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ControlGrid;
use crate::types::Point3;

/// Clamped nondecreasing knot vector with values in [0, 1].
///
/// For degree p the first and last p+1 knots coincide and the first and
/// last spans are nonempty, so evaluation at the domain ends is defined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotVector {
    knots: Vec<f64>,
}

impl KnotVector {
    /// Validates clamping and ordering for the given degree.
    pub fn new(knots: Vec<f64>, degree: usize) -> Result<Self> {
        let p = degree;
        if knots.len() < 2 * (p + 1) {
            return Err(Error::InvalidKnots(format!(
                "need at least {} knots for degree {p}, got {}",
                2 * (p + 1),
                knots.len()
            )));
        }
        if knots.iter().any(|k| !k.is_finite() || *k < 0.0 || *k > 1.0) {
            return Err(Error::InvalidKnots("knots must lie in [0, 1]".into()));
        }
        if knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidKnots("knots must be nondecreasing".into()));
        }
        let n = knots.len() - p - 2; // index of the last basis function
        if knots[..=p].iter().any(|k| *k != knots[0])
            || knots[n + 1..].iter().any(|k| *k != knots[knots.len() - 1])
        {
            return Err(Error::InvalidKnots(format!(
                "first and last {} knots must repeat for degree {p}",
                p + 1
            )));
        }
        if knots[p] >= knots[p + 1] || knots[n] >= knots[n + 1] {
            return Err(Error::InvalidKnots(
                "first and last spans must be nonempty".into(),
            ));
        }
        Ok(Self { knots })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.knots[0]
    }

    pub fn last(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    /// Number of degree-`p` basis functions this vector supports.
    pub fn num_basis(&self, p: usize) -> usize {
        self.knots.len() - p - 1
    }

    /// Index of the knot span containing `u`: largest `i` with
    /// knots[i] ≤ u < knots[i+1], except u = last maps to the final
    /// nonempty span. Assumes `u` lies inside the domain.
    pub fn find_span(&self, p: usize, u: f64) -> usize {
        let n = self.knots.len() - p - 2;
        if u >= self.knots[n + 1] {
            return n;
        }
        let (mut lo, mut hi) = (p, n + 1);
        let mut mid = (lo + hi) / 2;
        while u < self.knots[mid] || u >= self.knots[mid + 1] {
            if u < self.knots[mid] {
                hi = mid;
            } else {
                lo = mid;
            }
            mid = (lo + hi) / 2;
        }
        mid
    }

    /// Values of the p+1 basis functions active on `span` at `u`, computed
    /// with the triangular recurrence; entry r is N_{span-p+r, p}(u).
    pub fn basis_funs(&self, span: usize, u: f64, p: usize) -> Vec<f64> {
        let k = &self.knots;
        let mut funs = vec![0.0; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        funs[0] = 1.0;
        for j in 1..=p {
            left[j] = u - k[span + 1 - j];
            right[j] = k[span + j] - u;
            let mut saved = 0.0;
            for r in 0..j {
                let temp = funs[r] / (right[r + 1] + left[j - r]);
                funs[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            funs[j] = saved;
        }
        funs
    }
}

/// Clamped uniform knot vector: p+1 zeros, evenly spaced interior knots,
/// p+1 ones; length num_ctrl + p + 1.
pub fn make_clamped_knots(num_ctrl: usize, p: usize) -> Result<KnotVector> {
    if num_ctrl <= p {
        return Err(Error::InvalidKnots(format!(
            "need at least {} control points for degree {p}, got {num_ctrl}",
            p + 1
        )));
    }
    let spans = num_ctrl - p;
    let mut knots = vec![0.0; p + 1];
    for i in 1..spans {
        knots.push(i as f64 / spans as f64);
    }
    knots.extend(std::iter::repeat(1.0).take(p + 1));
    KnotVector::new(knots, p)
}

/// N_{i,p}(u) by the Cox–de Boor recursion, 0/0 terms taken as 0.
///
/// The degree-0 indicator is half-open except at the right end of the
/// domain, where the last nonempty span is treated as closed so that the
/// final basis function reaches 1 at u = last.
pub fn basis(i: usize, p: usize, u: f64, knots: &KnotVector) -> Result<f64> {
    let count = knots.num_basis(p);
    if i >= count {
        return Err(Error::IndexOutOfRange { index: i, count });
    }
    let (lo, hi) = (knots.first(), knots.last());
    if !(lo..=hi).contains(&u) {
        return Err(Error::OutsideDomain { value: u, lo, hi });
    }
    Ok(basis_rec(i, p, u, knots.knots(), hi))
}

fn basis_rec(i: usize, p: usize, u: f64, k: &[f64], last: f64) -> f64 {
    if p == 0 {
        let closed_right = u == last && k[i + 1] == last && k[i] < k[i + 1];
        return if (k[i] <= u && u < k[i + 1]) || closed_right { 1.0 } else { 0.0 };
    }
    let mut value = 0.0;
    let left_den = k[i + p] - k[i];
    if left_den > 0.0 {
        value += (u - k[i]) / left_den * basis_rec(i, p - 1, u, k, last);
    }
    let right_den = k[i + p + 1] - k[i + 1];
    if right_den > 0.0 {
        value += (k[i + p + 1] - u) / right_den * basis_rec(i + 1, p - 1, u, k, last);
    }
    value
}

/// Tensor-product B-spline surface S(u, v) = Σ_i Σ_j N_i(u) M_j(v) P_{i,j}.
///
/// The u direction runs along grid rows (image y), v along columns
/// (image x). Control points are stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BSplineSurface {
    rows: usize,
    cols: usize,
    control: Vec<Point3>,
    degree_u: usize,
    degree_v: usize,
    knots_u: KnotVector,
    knots_v: KnotVector,
}

impl BSplineSurface {
    /// Surface over a fully valid control grid, lifted to z = 0, with
    /// clamped uniform knots.
    pub fn from_grid(grid: &ControlGrid, degree_u: usize, degree_v: usize) -> Result<Self> {
        if !grid.all_valid() {
            return Err(Error::IncompleteGrid);
        }
        let mut control = Vec::with_capacity(grid.rows() * grid.cols());
        for r in 0..grid.rows() {
            for c in 0..grid.cols() {
                control.push(Point3::from_planar(grid.point(r, c)));
            }
        }
        Self::from_points(grid.rows(), grid.cols(), control, degree_u, degree_v)
    }

    /// Surface over an arbitrary 3D control net with clamped uniform knots.
    pub fn from_points(
        rows: usize,
        cols: usize,
        control: Vec<Point3>,
        degree_u: usize,
        degree_v: usize,
    ) -> Result<Self> {
        if degree_u < 1 || degree_v < 1 {
            return Err(Error::InvalidParameter("surface degrees must be at least 1".into()));
        }
        if control.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "expected {} control points, got {}",
                rows * cols,
                control.len()
            )));
        }
        let knots_u = make_clamped_knots(rows, degree_u)?;
        let knots_v = make_clamped_knots(cols, degree_v)?;
        Ok(Self { rows, cols, control, degree_u, degree_v, knots_u, knots_v })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn degree_u(&self) -> usize {
        self.degree_u
    }

    pub fn degree_v(&self) -> usize {
        self.degree_v
    }

    pub fn control(&self) -> &[Point3] {
        &self.control
    }

    pub fn knots_u(&self) -> &KnotVector {
        &self.knots_u
    }

    pub fn knots_v(&self) -> &KnotVector {
        &self.knots_v
    }

    /// Evaluates the surface at (u, v) ∈ [0, 1]².
    pub fn eval(&self, u: f64, v: f64) -> Result<Point3> {
        for (value, knots) in [(u, &self.knots_u), (v, &self.knots_v)] {
            let (lo, hi) = (knots.first(), knots.last());
            if !(lo..=hi).contains(&value) {
                return Err(Error::OutsideDomain { value, lo, hi });
            }
        }
        let (p, q) = (self.degree_u, self.degree_v);
        let span_u = self.knots_u.find_span(p, u);
        let span_v = self.knots_v.find_span(q, v);
        let nu = self.knots_u.basis_funs(span_u, u, p);
        let nv = self.knots_v.basis_funs(span_v, v, q);
        let (mut x, mut y, mut z) = (0.0, 0.0, 0.0);
        for (a, wu) in nu.iter().enumerate() {
            let i = span_u - p + a;
            for (b, wv) in nv.iter().enumerate() {
                let j = span_v - q + b;
                let w = wu * wv;
                let pt = self.control[i * self.cols + j];
                x += w * pt.x;
                y += w * pt.y;
                z += w * pt.z;
            }
        }
        Ok(Point3::new(x, y, z))
    }

    /// Evaluates on the uniform lattice u_a = a/(K_u−1), v_b = b/(K_v−1),
    /// row-major with u as the outer index.
    pub fn sample(&self, k_u: usize, k_v: usize) -> Result<SampledSurface> {
        if k_u < 2 || k_v < 2 {
            return Err(Error::InvalidParameter(
                "sampling needs at least 2 points per axis".into(),
            ));
        }
        let mut params = Vec::with_capacity(k_u * k_v);
        let mut points = Vec::with_capacity(k_u * k_v);
        for a in 0..k_u {
            let u = a as f64 / (k_u - 1) as f64;
            for b in 0..k_v {
                let v = b as f64 / (k_v - 1) as f64;
                params.push((u, v));
                points.push(self.eval(u, v)?);
            }
        }
        Ok(SampledSurface { k_u, k_v, params, points })
    }
}

/// Surface evaluated on a uniform (u, v) lattice, row-major in u.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledSurface {
    k_u: usize,
    k_v: usize,
    params: Vec<(f64, f64)>,
    points: Vec<Point3>,
}

impl SampledSurface {
    pub fn k_u(&self) -> usize {
        self.k_u
    }

    pub fn k_v(&self) -> usize {
        self.k_v
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn params(&self) -> &[(f64, f64)] {
        &self.params
    }

    pub fn point(&self, a: usize, b: usize) -> Point3 {
        assert!(a < self.k_u && b < self.k_v, "lattice index out of range");
        self.points[a * self.k_v + b]
    }

    /// True when `other` was sampled on the identical parameter lattice.
    pub fn same_lattice(&self, other: &SampledSurface) -> bool {
        self.k_u == other.k_u && self.k_v == other.k_v && self.params == other.params
    }

    /// Writes `u,v,x,y,z` lines in sampling order.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "u,v,x,y,z")?;
        for ((u, v), p) in self.params.iter().zip(&self.points) {
            writeln!(w, "{},{},{},{},{}", u, v, p.x, p.y, p.z)?;
        }
        Ok(())
    }

    /// Reads a surface written by [`write_csv`](Self::write_csv). Lattice
    /// dimensions are recovered from the leading run of constant u.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty surface CSV".into()))??;
        if header.trim() != "u,v,x,y,z" {
            return Err(Error::Parse(format!("unexpected surface CSV header: {header:?}")));
        }
        let mut params: Vec<(f64, f64)> = Vec::new();
        let mut points: Vec<Point3> = Vec::new();
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
            let nums: Vec<f64> = fields
                .iter()
                .map(|f| {
                    f.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad number {f:?}")))
                })
                .collect::<Result<_>>()?;
            params.push((nums[0], nums[1]));
            points.push(Point3::new(nums[2], nums[3], nums[4]));
        }
        if params.len() < 4 {
            return Err(Error::Parse("surface CSV has fewer than 4 samples".into()));
        }
        let first_u = params[0].0;
        let k_v = params.iter().take_while(|(u, _)| *u == first_u).count();
        if k_v < 2 || params.len() % k_v != 0 {
            return Err(Error::Parse("surface CSV rows do not form a lattice".into()));
        }
        let k_u = params.len() / k_v;
        if k_u < 2 {
            return Err(Error::Parse("surface CSV has fewer than 2 u rows".into()));
        }
        for (i, (u, v)) in params.iter().enumerate() {
            let (a, b) = (i / k_v, i % k_v);
            if *u != a as f64 / (k_u - 1) as f64 || *v != b as f64 / (k_v - 1) as f64 {
                return Err(Error::Parse("surface CSV lattice is not uniform".into()));
            }
        }
        Ok(Self { k_u, k_v, params, points })
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn knots(values: &[f64], p: usize) -> KnotVector {
        KnotVector::new(values.to_vec(), p).unwrap()
    }

    #[test]
    fn clamped_knots_match_hand_constructions() {
        assert_eq!(make_clamped_knots(2, 1).unwrap().knots(), &[0.0, 0.0, 1.0, 1.0]);
        assert_eq!(
            make_clamped_knots(4, 1).unwrap().knots(),
            &[0.0, 0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0, 1.0]
        );
        assert_eq!(
            make_clamped_knots(4, 3).unwrap().knots(),
            &[0.0; 4].iter().chain(&[1.0; 4]).copied().collect::<Vec<_>>()[..]
        );
        assert!(make_clamped_knots(3, 3).is_err());
    }

    #[test]
    fn degree_zero_basis_is_the_span_indicator() {
        let k = knots(&[0.0, 1.0], 0);
        assert_eq!(basis(0, 0, 0.5, &k).unwrap(), 1.0);
        assert_eq!(basis(0, 0, 0.0, &k).unwrap(), 1.0);
        // Right end closes so the domain endpoint is covered.
        assert_eq!(basis(0, 0, 1.0, &k).unwrap(), 1.0);
        assert!(matches!(basis(0, 0, 1.5, &k), Err(Error::OutsideDomain { .. })));
        assert!(matches!(basis(1, 0, 0.5, &k), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn degree_one_basis_gives_hat_functions() {
        let k = knots(&[0.0, 0.0, 1.0, 1.0], 1);
        assert!((basis(0, 1, 0.25, &k).unwrap() - 0.75).abs() < 1e-15);
        assert!((basis(1, 1, 0.25, &k).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn quadratic_basis_sums_to_one() {
        let k = knots(&[0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0], 2);
        for u in [0.0, 0.3, 0.5, 0.9, 1.0] {
            let sum: f64 = (0..k.num_basis(2)).map(|i| basis(i, 2, u, &k).unwrap()).sum();
            assert!((sum - 1.0).abs() < 1e-9, "sum at u={u} was {sum}");
        }
    }

    #[test]
    fn span_basis_table_matches_recursive_reference() {
        for (num_ctrl, p) in [(2usize, 1usize), (4, 1), (5, 2), (6, 3), (8, 2)] {
            let k = make_clamped_knots(num_ctrl, p).unwrap();
            for step in 0..=20 {
                let u = step as f64 / 20.0;
                let span = k.find_span(p, u);
                let funs = k.basis_funs(span, u, p);
                for i in 0..num_ctrl {
                    let reference = basis(i, p, u, &k).unwrap();
                    let fast = if i + p >= span && i <= span {
                        funs[i + p - span]
                    } else {
                        0.0
                    };
                    assert!(
                        (reference - fast).abs() < 1e-12,
                        "N_{i},{p} at u={u}: recursive {reference} vs table {fast}"
                    );
                }
            }
        }
    }

    fn bilinear_corner_surface() -> BSplineSurface {
        // P00=(0,0,0) P01=(1,0,0) P10=(0,1,0) P11=(1,1,1): x varies along v
        // (columns), y along u (rows).
        BSplineSurface::from_points(
            2,
            2,
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1.0, 0.0, 0.0),
                Point3::new(0.0, 1.0, 0.0),
                Point3::new(1.0, 1.0, 1.0),
            ],
            1,
            1,
        )
        .unwrap()
    }

    #[test]
    fn bilinear_surface_interpolates_center() {
        let s = bilinear_corner_surface();
        let p = s.eval(0.5, 0.5).unwrap();
        assert!((p.x - 0.5).abs() < 1e-15);
        assert!((p.y - 0.5).abs() < 1e-15);
        assert!((p.z - 0.25).abs() < 1e-15);
    }

    #[test]
    fn clamped_surface_interpolates_corner_control_points() {
        let control: Vec<Point3> = (0..12)
            .map(|i| Point3::new((i % 4) as f64 * 3.0, (i / 4) as f64 * 2.0, (i as f64).sin()))
            .collect();
        let s = BSplineSurface::from_points(3, 4, control.clone(), 2, 2).unwrap();
        let at = |u: f64, v: f64| s.eval(u, v).unwrap();
        for (got, want) in [
            (at(0.0, 0.0), control[0]),
            (at(0.0, 1.0), control[3]),
            (at(1.0, 0.0), control[8]),
            (at(1.0, 1.0), control[11]),
        ] {
            assert!(got.distance(&want) < 1e-12);
        }
    }

    #[test]
    fn degree_one_surface_interpolates_every_control_point() {
        let rows = 4;
        let cols = 5;
        let control: Vec<Point3> = (0..rows * cols)
            .map(|i| {
                let (r, c) = (i / cols, i % cols);
                Point3::new(c as f64 * 7.0 + 0.3, r as f64 * 5.0 - 0.1, (i as f64 * 0.37).cos())
            })
            .collect();
        let s = BSplineSurface::from_points(rows, cols, control.clone(), 1, 1).unwrap();
        for r in 0..rows {
            for c in 0..cols {
                let u = r as f64 / (rows - 1) as f64;
                let v = c as f64 / (cols - 1) as f64;
                let got = s.eval(u, v).unwrap();
                assert!(got.distance(&control[r * cols + c]) < 1e-12, "node ({r}, {c})");
            }
        }
    }

    #[test]
    fn sampling_two_by_two_returns_the_corners() {
        let s = bilinear_corner_surface();
        let sampled = s.sample(2, 2).unwrap();
        assert_eq!(sampled.len(), 4);
        assert_eq!(sampled.points(), s.control());
    }

    #[test]
    fn eval_outside_domain_is_an_error() {
        let s = bilinear_corner_surface();
        assert!(matches!(s.eval(1.2, 0.5), Err(Error::OutsideDomain { .. })));
        assert!(matches!(s.eval(0.5, -0.1), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn surface_from_incomplete_grid_is_rejected() {
        use crate::types::Point2;
        let points = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 0.0),
        ];
        let valid = vec![true, true, true, true, true, false];
        let grid = ControlGrid::new(2, 3, points, valid).unwrap();
        assert!(matches!(
            BSplineSurface::from_grid(&grid, 1, 1),
            Err(Error::IncompleteGrid)
        ));
        let mut filled = grid;
        filled.fill_invalid().unwrap();
        assert!(BSplineSurface::from_grid(&filled, 1, 1).is_ok());
    }

    #[test]
    fn sampled_points_stay_inside_control_bounding_box() {
        let control: Vec<Point3> = (0..25)
            .map(|i| {
                let (r, c) = (i / 5, i % 5);
                Point3::new(
                    c as f64 * 10.0 + ((i * 7) % 5) as f64,
                    r as f64 * 10.0 + ((i * 3) % 4) as f64,
                    ((i * 11) % 6) as f64 - 3.0,
                )
            })
            .collect();
        let s = BSplineSurface::from_points(5, 5, control.clone(), 2, 2).unwrap();
        let lo = |f: fn(&Point3) -> f64| control.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = |f: fn(&Point3) -> f64| control.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        let sampled = s.sample(13, 9).unwrap();
        for p in sampled.points() {
            assert!(p.x >= lo(|p| p.x) - 1e-9 && p.x <= hi(|p| p.x) + 1e-9);
            assert!(p.y >= lo(|p| p.y) - 1e-9 && p.y <= hi(|p| p.y) + 1e-9);
            assert!(p.z >= lo(|p| p.z) - 1e-9 && p.z <= hi(|p| p.z) + 1e-9);
        }
    }

    #[test]
    fn surface_csv_round_trip() {
        let s = bilinear_corner_surface().sample(3, 4).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let back = SampledSurface::read_csv(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(s, back);
        assert!(s.same_lattice(&back));
    }

    #[test]
    fn affine_invariance_under_translation_and_rotation() {
        let control: Vec<Point3> = (0..9)
            .map(|i| Point3::new((i % 3) as f64, (i / 3) as f64, (i as f64 * 0.21).sin()))
            .collect();
        let (sin, cos) = 0.7f64.sin_cos();
        let transform = |p: &Point3| {
            Point3::new(cos * p.x - sin * p.y + 4.0, sin * p.x + cos * p.y - 2.0, p.z + 1.5)
        };
        let s = BSplineSurface::from_points(3, 3, control.clone(), 2, 2).unwrap();
        let t = BSplineSurface::from_points(
            3,
            3,
            control.iter().map(transform).collect(),
            2,
            2,
        )
        .unwrap();
        for (u, v) in [(0.0, 0.0), (0.3, 0.8), (0.5, 0.5), (1.0, 0.2)] {
            let direct = t.eval(u, v).unwrap();
            let mapped = transform(&s.eval(u, v).unwrap());
            assert!(direct.distance(&mapped) < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn basis_partition_of_unity_and_support(
            p in 1usize..=3,
            extra in 0usize..=4,
            step in 0usize..=50,
        ) {
            let num_ctrl = p + 1 + extra;
            let k = make_clamped_knots(num_ctrl, p).unwrap();
            let u = step as f64 / 50.0;
            let mut sum = 0.0;
            for i in 0..num_ctrl {
                let n = basis(i, p, u, &k).unwrap();
                prop_assert!(n >= 0.0);
                // Local support: zero strictly outside [U_i, U_{i+p+1}].
                let lo = k.knots()[i];
                let hi = k.knots()[i + p + 1];
                if u < lo - 1e-12 || u > hi + 1e-12 {
                    prop_assert!(n == 0.0);
                }
                sum += n;
            }
            prop_assert!((sum - 1.0).abs() < 1e-9);
        }

        #[test]
        fn eval_matches_naive_double_sum(
            p in 1usize..=2,
            q in 1usize..=2,
            zs in proptest::collection::vec(-5.0f64..5.0, 16),
            ustep in 0usize..=10,
            vstep in 0usize..=10,
        ) {
            let control: Vec<Point3> = zs
                .iter()
                .enumerate()
                .map(|(i, z)| Point3::new((i % 4) as f64 * 3.0, (i / 4) as f64 * 3.0, *z))
                .collect();
            let s = BSplineSurface::from_points(4, 4, control.clone(), p, q).unwrap();
            let u = ustep as f64 / 10.0;
            let v = vstep as f64 / 10.0;
            let fast = s.eval(u, v).unwrap();
            // Reference: the full double sum over every basis product.
            let (mut x, mut y, mut z) = (0.0, 0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    let w = basis(i, p, u, s.knots_u()).unwrap()
                        * basis(j, q, v, s.knots_v()).unwrap();
                    let pt = control[i * 4 + j];
                    x += w * pt.x;
                    y += w * pt.y;
                    z += w * pt.z;
                }
            }
            let scale = 1.0f64.max(x.abs()).max(y.abs()).max(z.abs());
            prop_assert!((fast.x - x).abs() / scale < 1e-12);
            prop_assert!((fast.y - y).abs() / scale < 1e-12);
            prop_assert!((fast.z - z).abs() / scale < 1e-12);
        }
    }
}
