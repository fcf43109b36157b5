//! Planar primitives shared by every mapping: points, polygons, bounding
//! boxes and the affine rescaling used ahead of polynomial fits.
//!
//! Real points and complex numbers are interchangeable through
//! `z = u + i v`; [`ComplexPoint`] is just [`num_complex::Complex64`].

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of Z or W written as a complex number.
pub type ComplexPoint = Complex64;

/// A point with real coordinates `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct RealPoint2 {
    pub u: f64,
    pub v: f64,
}

impl RealPoint2 {
    pub const ORIGIN: RealPoint2 = RealPoint2 { u: 0.0, v: 0.0 };

    #[inline]
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    #[inline]
    pub fn to_complex(self) -> ComplexPoint {
        Complex64::new(self.u, self.v)
    }

    #[inline]
    pub fn from_complex(z: ComplexPoint) -> Self {
        Self { u: z.re, v: z.im }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.u * other.u + self.v * other.v
    }

    /// z-component of the 3-D cross product.
    #[inline]
    pub fn cross(self, other: Self) -> f64 {
        self.u * other.v - self.v * other.u
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.u.hypot(self.v)
    }

    #[inline]
    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }

    /// Polar angle about the origin in `(-π, π]`.
    #[inline]
    pub fn angle(self) -> f64 {
        self.v.atan2(self.u)
    }

    #[inline]
    pub fn lerp(self, other: Self, t: f64) -> Self {
        self + (other - self) * t
    }
}

impl From<[f64; 2]> for RealPoint2 {
    fn from(a: [f64; 2]) -> Self {
        Self::new(a[0], a[1])
    }
}

impl From<RealPoint2> for [f64; 2] {
    fn from(p: RealPoint2) -> Self {
        [p.u, p.v]
    }
}

impl From<ComplexPoint> for RealPoint2 {
    fn from(z: ComplexPoint) -> Self {
        Self::from_complex(z)
    }
}

impl From<RealPoint2> for ComplexPoint {
    fn from(p: RealPoint2) -> Self {
        p.to_complex()
    }
}

impl Add for RealPoint2 {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.u + rhs.u, self.v + rhs.v)
    }
}

impl Sub for RealPoint2 {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.u - rhs.u, self.v - rhs.v)
    }
}

impl Mul<f64> for RealPoint2 {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.u * rhs, self.v * rhs)
    }
}

impl Neg for RealPoint2 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.u, -self.v)
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: RealPoint2,
    pub max: RealPoint2,
}

impl BoundingBox {
    /// Smallest box containing all `points`; `None` for an empty input.
    pub fn of<I: IntoIterator<Item = RealPoint2>>(points: I) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut bb = BoundingBox { min: first, max: first };
        for p in it {
            bb.min.u = bb.min.u.min(p.u);
            bb.min.v = bb.min.v.min(p.v);
            bb.max.u = bb.max.u.max(p.u);
            bb.max.v = bb.max.v.max(p.v);
        }
        Some(bb)
    }

    pub fn width(&self) -> f64 {
        self.max.u - self.min.u
    }

    pub fn height(&self) -> f64 {
        self.max.v - self.min.v
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> RealPoint2 {
        self.min.lerp(self.max, 0.5)
    }
}

/// A closed polygon stored open: the last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolygonBoundary {
    vertices: Vec<RealPoint2>,
}

impl PolygonBoundary {
    /// Validates and wraps an open vertex list.
    ///
    /// Needs at least three finite vertices with no two consecutive ones
    /// equal (including last→first).
    pub fn new(vertices: Vec<RealPoint2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::invalid(format!("polygon needs at least 3 vertices, got {}", vertices.len())));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("polygon vertex {i} is not finite")));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::invalid(format!("polygon vertices {i} and {} coincide", (i + 1) % n)));
            }
        }
        Ok(Self { vertices })
    }

    /// Like [`PolygonBoundary::new`] but accepts a closed list whose last
    /// vertex repeats the first.
    pub fn from_closed_or_open(mut vertices: Vec<RealPoint2>) -> Result<Self> {
        if vertices.len() > 3 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        Self::new(vertices)
    }

    /// The axis-aligned square `[-1, 1]²`, counterclockwise from `(-1, -1)`.
    pub fn unit_square() -> Self {
        Self {
            vertices: vec![
                RealPoint2::new(-1.0, -1.0),
                RealPoint2::new(1.0, -1.0),
                RealPoint2::new(1.0, 1.0),
                RealPoint2::new(-1.0, 1.0),
            ],
        }
    }

    pub fn vertices(&self) -> &[RealPoint2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex `i` modulo the vertex count.
    pub fn vertex(&self, i: usize) -> RealPoint2 {
        self.vertices[i % self.vertices.len()]
    }

    /// Edges `(v_i, v_{i+1})`, closing edge included.
    pub fn edges(&self) -> impl Iterator<Item = (RealPoint2, RealPoint2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace sum / 2; positive for counterclockwise order.
    pub fn signed_area(&self) -> f64 {
        self.edges().map(|(a, b)| a.cross(b)).sum::<f64>() * 0.5
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn bounding_box(&self) -> BoundingBox {
        BoundingBox::of(self.vertices.iter().copied()).expect("polygon is non-empty")
    }

    /// Distance from `p` to the nearest edge.
    pub fn distance_to_boundary(&self, p: RealPoint2) -> f64 {
        self.edges().map(|(a, b)| segment_distance(p, a, b)).fold(f64::INFINITY, f64::min)
    }

    /// Absolute tolerance used to decide that a point sits on an edge.
    pub fn edge_tolerance(&self) -> f64 {
        1e-12 * self.bounding_box().diagonal().max(1.0)
    }

    /// Even-odd containment; points on an edge count as inside.
    pub fn contains(&self, p: RealPoint2) -> bool {
        point_in_polygon(p, self)
    }

    /// Containment that excludes points on (or within tolerance of) an edge.
    pub fn contains_strictly(&self, p: RealPoint2) -> bool {
        self.distance_to_boundary(p) > self.edge_tolerance() && self.contains(p)
    }

    /// Returns the vertices with the first one appended at the end.
    pub fn closed_vertices(&self) -> Vec<RealPoint2> {
        let mut v = self.vertices.clone();
        v.push(self.vertices[0]);
        v
    }
}

impl<'de> Deserialize<'de> for PolygonBoundary {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let vertices = Vec::<RealPoint2>::deserialize(d)?;
        PolygonBoundary::from_closed_or_open(vertices).map_err(serde::de::Error::custom)
    }
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn segment_distance(p: RealPoint2, a: RealPoint2, b: RealPoint2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Even-odd (ray casting) point-in-polygon test.
///
/// A point within [`PolygonBoundary::edge_tolerance`] of an edge is
/// reported as inside.
pub fn point_in_polygon(p: RealPoint2, poly: &PolygonBoundary) -> bool {
    if poly.distance_to_boundary(p) <= poly.edge_tolerance() {
        return true;
    }
    let mut inside = false;
    for (a, b) in poly.edges() {
        if (a.v > p.v) != (b.v > p.v) {
            let x = a.u + (p.v - a.v) * (b.u - a.u) / (b.v - a.v);
            if p.u < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Area enclosed by the polygon (absolute shoelace value).
pub fn polygon_area(poly: &PolygonBoundary) -> f64 {
    poly.area()
}

/// Signed area of the triangle `(a, b, c)`; positive when counterclockwise.
#[inline]
pub fn triangle_signed_area(a: RealPoint2, b: RealPoint2, c: RealPoint2) -> f64 {
    0.5 * (b - a).cross(c - a)
}

/// Translation followed by uniform scaling: `z ↦ (z + shift) · scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineRescale {
    pub shift: ComplexPoint,
    pub scale: f64,
}

impl AffineRescale {
    pub const IDENTITY: AffineRescale = AffineRescale { shift: Complex64::new(0.0, 0.0), scale: 1.0 };

    pub fn new(shift: ComplexPoint, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::invalid(format!("rescale factor must be positive, got {scale}")));
        }
        if !(shift.re.is_finite() && shift.im.is_finite()) {
            return Err(Error::invalid("rescale shift must be finite"));
        }
        Ok(Self { shift, scale })
    }

    #[inline]
    pub fn apply(&self, z: ComplexPoint) -> ComplexPoint {
        (z + self.shift) * self.scale
    }

    #[inline]
    pub fn invert(&self, s: ComplexPoint) -> ComplexPoint {
        s / self.scale - self.shift
    }
}

/// Translates and uniformly scales `points` into `[-1, 1]²` so that at least
/// one coordinate reaches magnitude 1.
pub fn rescale_to_unit(points: &[ComplexPoint]) -> Result<(AffineRescale, Vec<ComplexPoint>)> {
    let bb = BoundingBox::of(points.iter().map(|&z| RealPoint2::from_complex(z)))
        .ok_or_else(|| Error::invalid("cannot rescale an empty point set"))?;
    if !(bb.min.is_finite() && bb.max.is_finite()) {
        return Err(Error::invalid("cannot rescale non-finite points"));
    }
    let half = 0.5 * bb.width().max(bb.height());
    if half == 0.0 {
        return Err(Error::invalid("cannot rescale: all points coincide (zero scale)"));
    }
    let rescale = AffineRescale::new(-bb.center().to_complex(), 1.0 / half)?;
    let scaled = points
        .iter()
        .map(|&z| {
            let s = rescale.apply(z);
            // clamp the last-ulp overshoot so the [-1, 1] contract is exact
            Complex64::new(s.re.clamp(-1.0, 1.0), s.im.clamp(-1.0, 1.0))
        })
        .collect();
    Ok((rescale, scaled))
}
