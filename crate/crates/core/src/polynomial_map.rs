//! Real polynomial maps of the unit square built from switching shape
//! functions: the 3-point affine map with its exact inverse, the 4-point
//! bilinear map with its quadratic-solve inverse, and the 8-point
//! serendipity map. The 8-point map has no closed-form inverse; fit one with
//! [`crate::approx_inverse`].

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{triangle_signed_area, BoundingBox, RealPoint2};
use crate::projection_map::Direction;

/// Tolerance on `(t₁, t₂) ∈ [0, 1]²` in the bilinear inverse.
pub const INVERSE_BOX_TOLERANCE: f64 = 1e-9;
/// `|A|` below this fraction of the squared quad diameter is treated as a
/// parallelogram (linear equation for `t₂`).
pub const PARALLELOGRAM_EPS: f64 = 1e-12;

/// Corners of the reference square in shape-function order.
pub const SQUARE_CORNERS: [RealPoint2; 4] =
    [RealPoint2::new(-1.0, -1.0), RealPoint2::new(1.0, -1.0), RealPoint2::new(1.0, 1.0), RealPoint2::new(-1.0, 1.0)];

/// Serendipity nodes, counterclockwise from `(-1, -1)`: corner, midside, …
pub const SERENDIPITY_NODES: [RealPoint2; 8] = [
    RealPoint2::new(-1.0, -1.0),
    RealPoint2::new(0.0, -1.0),
    RealPoint2::new(1.0, -1.0),
    RealPoint2::new(1.0, 0.0),
    RealPoint2::new(1.0, 1.0),
    RealPoint2::new(0.0, 1.0),
    RealPoint2::new(-1.0, 1.0),
    RealPoint2::new(-1.0, 0.0),
];

fn in_reference_square(p: RealPoint2) -> bool {
    p.u.abs() <= 1.0 + 1e-12 && p.v.abs() <= 1.0 + 1e-12
}

/// Affine map between two triangles, `f_i(a, b) = c_i1 + c_i2 a + c_i3 b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearTriangleMap {
    z_pts: [RealPoint2; 3],
    w_pts: [RealPoint2; 3],
    c_fwd: Matrix3<f64>,
    c_inv: Matrix3<f64>,
}

fn switching_matrix(pts: &[RealPoint2; 3], name: &str) -> Result<Matrix3<f64>> {
    let area = triangle_signed_area(pts[0], pts[1], pts[2]);
    let scale = BoundingBox::of(pts.iter().copied()).unwrap().diagonal();
    if !(area.abs() > 1e-12 * scale * scale) {
        return Err(Error::invalid(format!("{name} triangle is degenerate (collinear vertices)")));
    }
    let m = Matrix3::new(1.0, 1.0, 1.0, pts[0].u, pts[1].u, pts[2].u, pts[0].v, pts[1].v, pts[2].v);
    m.try_inverse().ok_or_else(|| Error::invalid(format!("{name} triangle matrix is singular")))
}

impl LinearTriangleMap {
    pub fn build(z_pts: [RealPoint2; 3], w_pts: [RealPoint2; 3]) -> Result<Self> {
        if z_pts.iter().chain(&w_pts).any(|p| !p.is_finite()) {
            return Err(Error::invalid("triangle vertices must be finite"));
        }
        Ok(Self { z_pts, w_pts, c_fwd: switching_matrix(&z_pts, "Z")?, c_inv: switching_matrix(&w_pts, "W")? })
    }

    pub fn z_pts(&self) -> &[RealPoint2; 3] {
        &self.z_pts
    }

    pub fn w_pts(&self) -> &[RealPoint2; 3] {
        &self.w_pts
    }

    /// Rows are the coefficients `(c_i1, c_i2, c_i3)` of `f_i`.
    pub fn forward_coeffs(&self) -> &Matrix3<f64> {
        &self.c_fwd
    }

    /// Rows are the coefficients of the inverse switching functions `p_i`.
    pub fn inverse_coeffs(&self) -> &Matrix3<f64> {
        &self.c_inv
    }

    fn switch(c: &Matrix3<f64>, p: RealPoint2) -> [f64; 3] {
        std::array::from_fn(|i| c[(i, 0)] + c[(i, 1)] * p.u + c[(i, 2)] * p.v)
    }

    pub fn apply(&self, pt: RealPoint2, direction: Direction) -> RealPoint2 {
        let (c, targets) = match direction {
            Direction::ZtoW => (&self.c_fwd, &self.w_pts),
            Direction::WtoZ => (&self.c_inv, &self.z_pts),
        };
        let f = Self::switch(c, pt);
        (0..3).fold(RealPoint2::ORIGIN, |acc, i| acc + targets[i] * f[i])
    }
}

/// Shape functions of the 4-node bilinear element.
pub fn bilinear_shape(a: f64, b: f64) -> [f64; 4] {
    [
        0.25 * (1.0 - a - b + a * b),
        0.25 * (1.0 + a - b - a * b),
        0.25 * (1.0 + a + b + a * b),
        0.25 * (1.0 - a + b - a * b),
    ]
}

/// Four-point bilinear map of the unit square onto a convex quadrilateral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BilinearQuadMap {
    w_pts: [RealPoint2; 4],
}

impl BilinearQuadMap {
    /// `w_pts[k]` is the image of corner `k` of `(-1,-1), (1,-1), (1,1), (-1,1)`.
    /// The quadrilateral must be convex and counterclockwise.
    pub fn new(w_pts: [RealPoint2; 4]) -> Result<Self> {
        if w_pts.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("quadrilateral corners must be finite"));
        }
        let scale = BoundingBox::of(w_pts).unwrap().diagonal();
        for i in 0..4 {
            let area = triangle_signed_area(w_pts[i], w_pts[(i + 1) % 4], w_pts[(i + 2) % 4]);
            if !(area > 1e-12 * scale * scale) {
                return Err(Error::invalid(format!(
                    "quadrilateral must be convex and counterclockwise (corner triple {i} has signed area {area:.3e})"
                )));
            }
        }
        Ok(Self { w_pts })
    }

    pub fn w_pts(&self) -> &[RealPoint2; 4] {
        &self.w_pts
    }

    pub fn apply(&self, pt: RealPoint2) -> RealPoint2 {
        let f = bilinear_shape(pt.u, pt.v);
        (0..4).fold(RealPoint2::ORIGIN, |acc, k| acc + self.w_pts[k] * f[k])
    }

    /// [`BilinearQuadMap::apply`], rejecting points outside `[-1, 1]²`.
    pub fn apply_checked(&self, pt: RealPoint2) -> Result<RealPoint2> {
        if !in_reference_square(pt) {
            return Err(Error::OutOfDomain(format!("({}, {}) is outside the reference square", pt.u, pt.v)));
        }
        Ok(self.apply(pt))
    }

    /// Exact inverse from the intersection of the two interpolating lines
    /// through `pt`, which reduces to `A t₂² + B t₂ + C = 0`.
    pub fn inverse(&self, pt: RealPoint2) -> Result<RealPoint2> {
        let [w1, w2, w3, w4] = self.w_pts;
        let c1 = w2 - w1;
        let c2 = w4 - w1;
        let c3 = w3 - w4 + w1 - w2;
        let c4 = pt - w1;
        let a = c3.u * c2.v - c2.u * c3.v;
        let b = c1.u * c2.v - c2.u * c1.v + c4.u * c3.v - c3.u * c4.v;
        let c = c4.u * c1.v - c1.u * c4.v;

        let t1_of = |t2: f64| -> f64 {
            let den_x = c1.u + c3.u * t2;
            let den_y = c1.v + c3.v * t2;
            if den_x.abs() >= den_y.abs() {
                (c4.u - c2.u * t2) / den_x
            } else {
                (c4.v - c2.v * t2) / den_y
            }
        };
        let in_box = |t: f64| (-INVERSE_BOX_TOLERANCE..=1.0 + INVERSE_BOX_TOLERANCE).contains(&t);
        let outside = || Error::OutOfDomain(format!("({}, {}) is outside the quadrilateral", pt.u, pt.v));

        let diam = BoundingBox::of(self.w_pts).unwrap().diagonal();
        let t2_candidates: Vec<f64> = if a.abs() < PARALLELOGRAM_EPS * diam * diam {
            if b == 0.0 {
                return Err(outside());
            }
            vec![-c / b]
        } else {
            let disc = b * b - 4.0 * a * c;
            if disc < 0.0 {
                return Err(outside());
            }
            let sq = disc.sqrt();
            // cancellation-free pair; the first entry is the "+" root (−B + √Δ)/2A
            let q = -0.5 * (b + b.signum() * sq);
            let (r1, r2) = (q / a, c / q);
            let plus = (-b + sq) / (2.0 * a);
            if (r1 - plus).abs() <= (r2 - plus).abs() {
                vec![r1, r2]
            } else {
                vec![r2, r1]
            }
        };
        for t2 in t2_candidates {
            if !t2.is_finite() || !in_box(t2) {
                continue;
            }
            let t1 = t1_of(t2);
            if t1.is_finite() && in_box(t1) {
                return Ok(RealPoint2::new(2.0 * t1 - 1.0, 2.0 * t2 - 1.0));
            }
        }
        Err(outside())
    }
}

/// Shape functions of the 8-node serendipity element, in
/// [`SERENDIPITY_NODES`] order.
pub fn serendipity_shape(a: f64, b: f64) -> [f64; 8] {
    [
        0.25 * (a - 1.0) * (1.0 - b) * (a + b + 1.0),
        0.5 * (1.0 - a * a) * (1.0 - b),
        0.25 * (a + 1.0) * (1.0 - b) * (a - b - 1.0),
        0.5 * (a + 1.0) * (1.0 - b * b),
        0.25 * (a + 1.0) * (b + 1.0) * (a + b - 1.0),
        0.5 * (1.0 - a * a) * (b + 1.0),
        0.25 * (a - 1.0) * (b + 1.0) * (a - b + 1.0),
        0.5 * (1.0 - a) * (1.0 - b * b),
    ]
}

/// One edge of the reference square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuadSide {
    /// `b = −1`, parameter `a`
    Bottom,
    /// `a = +1`, parameter `b`
    Right,
    /// `b = +1`, parameter `a`
    Top,
    /// `a = −1`, parameter `b`
    Left,
}

impl QuadSide {
    pub const ALL: [QuadSide; 4] = [QuadSide::Bottom, QuadSide::Right, QuadSide::Top, QuadSide::Left];

    /// Sides are numbered 1..=4 as bottom, right, top, left.
    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(QuadSide::Bottom),
            2 => Ok(QuadSide::Right),
            3 => Ok(QuadSide::Top),
            4 => Ok(QuadSide::Left),
            _ => Err(Error::invalid(format!("side index must be 1..=4, got {i}"))),
        }
    }

    /// Reference-square point at parameter `t ∈ [-1, 1]` along the side.
    pub fn point(self, t: f64) -> RealPoint2 {
        match self {
            QuadSide::Bottom => RealPoint2::new(t, -1.0),
            QuadSide::Right => RealPoint2::new(1.0, t),
            QuadSide::Top => RealPoint2::new(t, 1.0),
            QuadSide::Left => RealPoint2::new(-1.0, t),
        }
    }

    /// The coordinate that parametrises the side.
    pub fn parameter(self, p: RealPoint2) -> f64 {
        match self {
            QuadSide::Bottom | QuadSide::Top => p.u,
            QuadSide::Right | QuadSide::Left => p.v,
        }
    }

    /// Signed offset of `p` from the side, zero on it.
    pub fn indicator(self, p: RealPoint2) -> f64 {
        match self {
            QuadSide::Bottom => p.v + 1.0,
            QuadSide::Right => p.u - 1.0,
            QuadSide::Top => p.v - 1.0,
            QuadSide::Left => p.u + 1.0,
        }
    }

    /// Serendipity node indices at `t = −1, 0, +1`.
    fn serendipity_nodes(self) -> [usize; 3] {
        match self {
            QuadSide::Bottom => [0, 1, 2],
            QuadSide::Right => [2, 3, 4],
            QuadSide::Top => [6, 5, 4],
            QuadSide::Left => [0, 7, 6],
        }
    }
}

/// Eight-point serendipity map with curved (quadratic) edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SerendipityQuadMap {
    w_pts: [RealPoint2; 8],
}

impl SerendipityQuadMap {
    pub fn new(w_pts: [RealPoint2; 8]) -> Result<Self> {
        if w_pts.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("serendipity nodes must be finite"));
        }
        Ok(Self { w_pts })
    }

    pub fn w_pts(&self) -> &[RealPoint2; 8] {
        &self.w_pts
    }

    pub fn apply(&self, pt: RealPoint2) -> RealPoint2 {
        let f = serendipity_shape(pt.u, pt.v);
        (0..8).fold(RealPoint2::ORIGIN, |acc, k| acc + self.w_pts[k] * f[k])
    }

    /// Quadratic Lagrange curve through the three nodes of `side`.
    pub fn boundary(&self, side: QuadSide, t: f64) -> RealPoint2 {
        let [n0, n1, n2] = side.serendipity_nodes();
        self.w_pts[n0] * (0.5 * (t - 1.0) * t) + self.w_pts[n1] * (1.0 - t * t) + self.w_pts[n2] * (0.5 * (t + 1.0) * t)
    }
}
