//! Projection mapping between star-shaped polygonal regions.
//!
//! A region pairs a projection point and a control polygon in each space.
//! Consecutive control points and the projection point bound a wedge; a
//! point is mapped by locating its wedge, rescaling its wedge-relative angle
//! linearly onto the matching wedge in the other space, and scaling its
//! distance by the ratio of boundary distances along the two rays. The same
//! procedure with the roles of the spaces swapped is the exact inverse.
//!
//! Ray/edge intersections are solved parametrically, so vertical rays and
//! edges need no special casing.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{point_in_polygon, triangle_signed_area, PolygonBoundary, RealPoint2};

/// Samples per projection-point-to-vertex segment in the star-shape check.
const VISIBILITY_SAMPLES: usize = 64;
const ANGLE_TOLERANCE: f64 = 1e-12;

/// Which way a point is carried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// Unit square to the physical domain.
    ZtoW,
    /// Physical domain to the unit square.
    WtoZ,
}

/// One star-shaped region: projection point and control polygon in `Z`
/// (`c`, `p`) and in `W` (`upsilon`, `q`), with `p[j] ↔ q[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionRegion {
    c: RealPoint2,
    upsilon: RealPoint2,
    p: PolygonBoundary,
    q: PolygonBoundary,
}

/// Serialized region: `{"c": [a,b], "upsilon": [x,y], "p": [...], "q": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionDoc {
    pub c: RealPoint2,
    pub upsilon: RealPoint2,
    pub p: Vec<RealPoint2>,
    pub q: Vec<RealPoint2>,
}

/// Borrowed view of one side of a region.
#[derive(Clone, Copy)]
struct Side<'a> {
    center: RealPoint2,
    poly: &'a PolygonBoundary,
}

impl ProjectionRegion {
    /// Validates vertex counts, wedge orientation and star-shapedness.
    pub fn new(c: RealPoint2, upsilon: RealPoint2, p: PolygonBoundary, q: PolygonBoundary) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::invalid(format!(
                "projection region needs matching control counts (Z has {}, W has {})",
                p.len(),
                q.len()
            )));
        }
        if !(c.is_finite() && upsilon.is_finite()) {
            return Err(Error::invalid("projection points must be finite"));
        }
        for (space, center, poly) in [("Z", c, &p), ("W", upsilon, &q)] {
            check_wedges(space, center, poly)?;
            check_star_shaped(space, center, poly)?;
        }
        Ok(Self { c, upsilon, p, q })
    }

    /// Builds a region from a document, accepting control lists that repeat
    /// the first vertex at the end.
    pub fn from_doc(doc: &RegionDoc) -> Result<Self> {
        Self::new(
            doc.c,
            doc.upsilon,
            PolygonBoundary::from_closed_or_open(doc.p.clone())?,
            PolygonBoundary::from_closed_or_open(doc.q.clone())?,
        )
    }

    pub fn to_doc(&self) -> RegionDoc {
        RegionDoc { c: self.c, upsilon: self.upsilon, p: self.p.vertices().to_vec(), q: self.q.vertices().to_vec() }
    }

    pub fn c(&self) -> RealPoint2 {
        self.c
    }

    pub fn upsilon(&self) -> RealPoint2 {
        self.upsilon
    }

    pub fn z_polygon(&self) -> &PolygonBoundary {
        &self.p
    }

    pub fn w_polygon(&self) -> &PolygonBoundary {
        &self.q
    }

    /// Source polygon for `direction`.
    pub fn source_polygon(&self, direction: Direction) -> &PolygonBoundary {
        match direction {
            Direction::ZtoW => &self.p,
            Direction::WtoZ => &self.q,
        }
    }

    fn sides(&self, direction: Direction) -> (Side<'_>, Side<'_>) {
        let z = Side { center: self.c, poly: &self.p };
        let w = Side { center: self.upsilon, poly: &self.q };
        match direction {
            Direction::ZtoW => (z, w),
            Direction::WtoZ => (w, z),
        }
    }

    /// Index of the wedge containing `pt` in the source space, or `None`
    /// when `pt` is the projection point itself.
    pub fn wedge_index(&self, pt: RealPoint2, direction: Direction) -> Result<Option<usize>> {
        let (src, _) = self.sides(direction);
        locate_wedge(src, pt)
    }

    /// Carries `pt` across the region in the requested direction.
    pub fn project(&self, pt: RealPoint2, direction: Direction) -> Result<RealPoint2> {
        let (src, dst) = self.sides(direction);
        if !pt.is_finite() {
            return Err(Error::invalid("cannot project a non-finite point"));
        }
        if !point_in_polygon(pt, src.poly) {
            return Err(Error::OutOfDomain(format!("({}, {}) is outside the source polygon", pt.u, pt.v)));
        }
        let Some(j) = locate_wedge(src, pt)? else {
            return Ok(dst.center);
        };
        let offset = pt - src.center;
        let r = offset.norm();
        let theta = offset.angle();

        let (s0, s1) = (src.poly.vertex(j), src.poly.vertex(j + 1));
        let theta_min = (s0 - src.center).angle();
        let d_theta = wedge_span(src.center, s0, s1);
        let r_b = ray_to_edge(src.center, theta, s0, s1).ok_or_else(|| wedge_diagnostic(j, pt, theta))?;
        if r > r_b * (1.0 + 1e-9) + src.poly.edge_tolerance() {
            return Err(Error::OutOfDomain(format!(
                "({}, {}) lies beyond the boundary of wedge {j} (r = {r}, r_b = {r_b})",
                pt.u, pt.v
            )));
        }

        let (t0, t1) = (dst.poly.vertex(j), dst.poly.vertex(j + 1));
        let phi_min = (t0 - dst.center).angle();
        let d_phi = wedge_span(dst.center, t0, t1);
        let rel = relative_angle(theta, theta_min, d_theta);
        let phi = rel * d_phi / d_theta + phi_min;
        let d_b = ray_to_edge(dst.center, phi, t0, t1).ok_or_else(|| wedge_diagnostic(j, pt, phi))?;
        let d = d_b * r / r_b;
        Ok(dst.center + RealPoint2::new(phi.cos(), phi.sin()) * d)
    }

    /// Signed areas of the wedge triangles in `Z` (`direction = ZtoW`) or in
    /// `W` (`WtoZ`).
    pub fn wedge_areas(&self, direction: Direction) -> Vec<f64> {
        let (src, _) = self.sides(direction);
        let n = src.poly.len();
        (0..n).map(|j| triangle_signed_area(src.center, src.poly.vertex(j), src.poly.vertex(j + 1))).collect()
    }
}

fn wedge_diagnostic(j: usize, pt: RealPoint2, angle: f64) -> Error {
    Error::OutOfDomain(format!("ray at angle {angle} from ({}, {}) misses the edge of wedge {j}", pt.u, pt.v))
}

/// Counterclockwise angle from `a` to `b` about `center`, in `[0, 2π)`.
fn wedge_span(center: RealPoint2, a: RealPoint2, b: RealPoint2) -> f64 {
    ((b - center).angle() - (a - center).angle()).rem_euclid(TAU)
}

/// `(θ − θ_min) mod 2π`, folding a tiny negative overshoot back to zero.
fn relative_angle(theta: f64, theta_min: f64, span: f64) -> f64 {
    let rel = (theta - theta_min).rem_euclid(TAU);
    if rel > span && rel > TAU - ANGLE_TOLERANCE {
        0.0
    } else {
        rel.min(span)
    }
}

fn locate_wedge(src: Side<'_>, pt: RealPoint2) -> Result<Option<usize>> {
    let offset = pt - src.center;
    if offset.norm() <= src.poly.edge_tolerance() {
        return Ok(None);
    }
    let theta = offset.angle();
    let n = src.poly.len();
    for j in 0..n {
        let s0 = src.poly.vertex(j);
        let theta_min = (s0 - src.center).angle();
        let span = wedge_span(src.center, s0, src.poly.vertex(j + 1));
        let rel = (theta - theta_min).rem_euclid(TAU);
        if rel <= span + ANGLE_TOLERANCE || rel >= TAU - ANGLE_TOLERANCE {
            return Ok(Some(j));
        }
    }
    Err(Error::OutOfDomain(format!(
        "angle {theta} of ({}, {}) falls in no wedge of the {n}-vertex polygon",
        pt.u, pt.v
    )))
}

/// Distance along the ray from `origin` at angle `angle` to the line
/// through the edge `a → b`; `None` when the ray is parallel to the edge
/// or points away from it.
fn ray_to_edge(origin: RealPoint2, angle: f64, a: RealPoint2, b: RealPoint2) -> Option<f64> {
    let dir = RealPoint2::new(angle.cos(), angle.sin());
    let edge = b - a;
    let denom = dir.cross(edge);
    if denom.abs() <= 1e-15 * edge.norm() {
        return None;
    }
    let r = (a - origin).cross(edge) / denom;
    (r > 0.0).then_some(r)
}

fn check_wedges(space: &str, center: RealPoint2, poly: &PolygonBoundary) -> Result<()> {
    let n = poly.len();
    let mut total = 0.0;
    for j in 0..n {
        let (a, b) = (poly.vertex(j) - center, poly.vertex(j + 1) - center);
        if a.cross(b) <= 0.0 {
            return Err(Error::invalid(format!(
                "{space} wedge {j} is not counterclockwise about the projection point \
                 (controls must be consecutive and the polygon must wind once around it)"
            )));
        }
        total += wedge_span(center, poly.vertex(j), poly.vertex(j + 1));
    }
    if (total - TAU).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "{space} control polygon winds {:.6} turns around the projection point, expected 1",
            total / TAU
        )));
    }
    Ok(())
}

fn check_star_shaped(space: &str, center: RealPoint2, poly: &PolygonBoundary) -> Result<()> {
    if !poly.contains_strictly(center) {
        return Err(Error::invalid(format!(
            "{space} projection point ({}, {}) is not inside its control polygon",
            center.u, center.v
        )));
    }
    for (j, &vertex) in poly.vertices().iter().enumerate() {
        for k in 1..VISIBILITY_SAMPLES {
            let t = k as f64 / VISIBILITY_SAMPLES as f64;
            if !poly.contains(center.lerp(vertex, t)) {
                return Err(Error::invalid(format!(
                    "{space} control point {j} is not visible from the projection point"
                )));
            }
        }
    }
    Ok(())
}

/// Several regions tiling the unit square (and their images tiling `W`).
#[derive(Debug, Clone, PartialEq)]
pub struct MultiRegionProjection {
    regions: Vec<ProjectionRegion>,
}

/// Serialized multi-region projection: `{"regions": [RegionDoc, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiRegionDoc {
    pub regions: Vec<RegionDoc>,
}

impl MultiRegionProjection {
    /// Validates that the `Z` polygons lie in the unit square, have
    /// disjoint interiors and cover it.
    pub fn new(regions: Vec<ProjectionRegion>) -> Result<Self> {
        if regions.is_empty() {
            return Err(Error::invalid("multi-region projection needs at least one region"));
        }
        let square = PolygonBoundary::unit_square();
        for (i, r) in regions.iter().enumerate() {
            if let Some(v) = r.p.vertices().iter().find(|v| !square.contains(**v)) {
                return Err(Error::invalid(format!(
                    "region {i} has Z control ({}, {}) outside the unit square",
                    v.u, v.v
                )));
            }
        }
        let total: f64 = regions.iter().map(|r| r.p.area()).sum();
        if (total - 4.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("Z regions cover area {total}, expected 4 (the unit square)")));
        }
        for (i, a) in regions.iter().enumerate() {
            for (k, b) in regions.iter().enumerate() {
                if i == k {
                    continue;
                }
                if a.p.vertices().iter().any(|v| b.p.contains_strictly(*v)) || b.p.contains_strictly(a.c) {
                    return Err(Error::invalid(format!("Z regions {i} and {k} overlap")));
                }
            }
        }
        Ok(Self { regions })
    }

    pub fn from_doc(doc: &MultiRegionDoc) -> Result<Self> {
        let regions = doc.regions.iter().map(ProjectionRegion::from_doc).collect::<Result<Vec<_>>>()?;
        Self::new(regions)
    }

    pub fn regions(&self) -> &[ProjectionRegion] {
        &self.regions
    }

    /// First region whose source polygon contains `pt` (boundary included).
    pub fn locate(&self, pt: RealPoint2, direction: Direction) -> Option<usize> {
        self.regions.iter().position(|r| point_in_polygon(pt, r.source_polygon(direction)))
    }

    pub fn project(&self, pt: RealPoint2, direction: Direction) -> Result<RealPoint2> {
        let i = self
            .locate(pt, direction)
            .ok_or_else(|| Error::OutOfDomain(format!("({}, {}) lies in no projection region", pt.u, pt.v)))?;
        self.regions[i].project(pt, direction)
    }
}

impl From<ProjectionRegion> for MultiRegionProjection {
    fn from(region: ProjectionRegion) -> Self {
        Self { regions: vec![region] }
    }
}

/// Control polygons produced by [`density_controls`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityLayout {
    /// Controls on the boundary of the unit square.
    pub z: PolygonBoundary,
    /// The input `W` controls, with a point inserted on an edge for every
    /// square corner that had to be added in `Z`.
    pub w: PolygonBoundary,
}

impl DensityLayout {
    pub fn into_region(self, c: RealPoint2, upsilon: RealPoint2) -> Result<ProjectionRegion> {
        ProjectionRegion::new(c, upsilon, self.z, self.w)
    }
}

/// Position on the square boundary: side `0..4` counterclockwise from the
/// bottom edge and the distance travelled along it (`0..2`).
#[derive(Debug, Clone, Copy)]
struct Perimeter {
    side: usize,
    along: f64,
}

const SQUARE_CORNERS: [RealPoint2; 4] =
    [RealPoint2::new(-1.0, -1.0), RealPoint2::new(1.0, -1.0), RealPoint2::new(1.0, 1.0), RealPoint2::new(-1.0, 1.0)];

impl Perimeter {
    fn point(self) -> RealPoint2 {
        let a = SQUARE_CORNERS[self.side];
        let b = SQUARE_CORNERS[(self.side + 1) % 4];
        a.lerp(b, self.along / 2.0)
    }

    fn normalize(mut self) -> Self {
        if self.along >= 2.0 - 1e-14 {
            self.side = (self.side + 1) % 4;
            self.along = 0.0;
        }
        self
    }

    /// Where the ray from `c` along `dir` leaves the square.
    fn from_ray(c: RealPoint2, dir: RealPoint2) -> Option<Self> {
        let mut best: Option<(f64, Perimeter)> = None;
        for side in 0..4 {
            let a = SQUARE_CORNERS[side];
            let e = SQUARE_CORNERS[(side + 1) % 4] - a;
            let denom = dir.cross(e);
            if denom.abs() < 1e-15 {
                continue;
            }
            let r = (a - c).cross(e) / denom;
            let t = (a - c).cross(dir) / denom;
            if r > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&t) && best.is_none_or(|(rb, _)| r < rb) {
                best = Some((r, Perimeter { side, along: 2.0 * t.clamp(0.0, 1.0) }));
            }
        }
        best.map(|(_, p)| p.normalize())
    }
}

/// Places controls on the unit-square boundary so that every wedge keeps
/// the area fraction of the matching `W` wedge, which preserves the density
/// of uniformly distributed points across the map.
///
/// The first `Z` control is where the ray from `c` parallel to
/// `q[0] − upsilon` meets the square. Square corners crossed inside a wedge
/// become extra controls; their `W` counterparts split the matching `W`
/// edge at the same area fraction.
pub fn density_controls(w_poly: &PolygonBoundary, upsilon: RealPoint2, c: RealPoint2) -> Result<DensityLayout> {
    let start = Perimeter::from_ray(c, w_poly.vertex(0) - upsilon)
        .filter(|_| PolygonBoundary::unit_square().contains_strictly(c))
        .ok_or_else(|| Error::invalid("Z projection point must lie strictly inside the unit square"))?;
    density_controls_from(w_poly, upsilon, c, start.point())
}

/// [`density_controls`] with an explicit first `Z` control on the square
/// boundary.
pub fn density_controls_from(
    w_poly: &PolygonBoundary,
    upsilon: RealPoint2,
    c: RealPoint2,
    first: RealPoint2,
) -> Result<DensityLayout> {
    let square = PolygonBoundary::unit_square();
    if !square.contains_strictly(c) {
        return Err(Error::invalid("Z projection point must lie strictly inside the unit square"));
    }
    let mut pos = perimeter_of(first).ok_or_else(|| {
        Error::invalid(format!("first Z control ({}, {}) is not on the square boundary", first.u, first.v))
    })?;
    check_star_shaped("W", upsilon, w_poly)?;

    let n = w_poly.len();
    let w_areas: Vec<f64> =
        (0..n).map(|j| triangle_signed_area(upsilon, w_poly.vertex(j), w_poly.vertex(j + 1))).collect();
    if let Some(j) = w_areas.iter().position(|&a| !(a > 0.0)) {
        return Err(Error::invalid(format!("W wedge {j} has zero (or negative) area")));
    }
    let total: f64 = w_areas.iter().sum();

    // distance from c to each side line; swept area along a side is linear
    let heights = [c.v + 1.0, 1.0 - c.u, 1.0 - c.v, c.u + 1.0];
    let mut z_out = vec![pos.point()];
    let mut w_out = vec![w_poly.vertex(0)];
    for j in 0..n {
        let target = 4.0 * w_areas[j] / total;
        let mut remaining = target;
        let (q0, q1) = (w_poly.vertex(j), w_poly.vertex(j + 1));
        loop {
            let h = heights[pos.side];
            let to_corner = 0.5 * (2.0 - pos.along) * h;
            if remaining > to_corner * (1.0 + 1e-12) + 1e-15 {
                remaining -= to_corner;
                pos = Perimeter { side: (pos.side + 1) % 4, along: 0.0 };
                let swept = (target - remaining) / target;
                z_out.push(pos.point());
                w_out.push(q0.lerp(q1, swept));
            } else {
                pos = Perimeter { side: pos.side, along: (pos.along + 2.0 * remaining / h).min(2.0) }.normalize();
                break;
            }
        }
        if j + 1 < n {
            z_out.push(pos.point());
            w_out.push(q1);
        }
    }
    Ok(DensityLayout { z: PolygonBoundary::new(z_out)?, w: PolygonBoundary::new(w_out)? })
}

fn perimeter_of(p: RealPoint2) -> Option<Perimeter> {
    const TOL: f64 = 1e-12;
    for side in 0..4 {
        let a = SQUARE_CORNERS[side];
        let b = SQUARE_CORNERS[(side + 1) % 4];
        if crate::geometry::segment_distance(p, a, b) <= TOL {
            let along = p.dist(a).min(2.0);
            return Some(Perimeter { side, along }.normalize());
        }
    }
    None
}
