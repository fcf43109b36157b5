//! Constrained surfaces on mapped domains.
//!
//! A [`DomainSpec`] pairs a forward map `f: [-1, 1]² → W` with an inverse
//! and Dirichlet data `v_i` on the four mapped edges. [`build_surface`]
//! samples the edges, fits corner-consistent boundary curves, blends them
//! with a Coons patch `S_c` in the reference square and returns
//!
//! ```text
//! S(w) = S_c(f⁻¹(w)) + g(w) · Π c_i(w)
//! ```
//!
//! where the indicators `c_i` vanish on edge `i`, so `g` never changes the
//! boundary values.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::approx_inverse::{ApproxInverseModel, InverseBasis};
use crate::boundary_tools::Segment;
use crate::chebyshev;
use crate::complex_map::{bijectivity_report, GridSpec, SwitchingMapping};
use crate::error::{Error, Result};
use crate::geometry::{PolygonBoundary, RealPoint2};
use crate::linalg;
use crate::polynomial_map::{BilinearQuadMap, QuadSide, SerendipityQuadMap};
use crate::projection_map::{Direction, MultiRegionProjection};

/// Scalar function of a point.
pub type Field = Arc<dyn Fn(RealPoint2) -> f64 + Send + Sync>;

/// Round-trip tolerance for exact inverses.
pub const EXACT_INVERSE_TOLERANCE: f64 = 1e-9;
/// Round-trip tolerance for fitted inverses.
pub const APPROX_INVERSE_TOLERANCE: f64 = 1e-3;
/// Largest corner mismatch a [`CoonsPatch`] accepts.
pub const CORNER_TOLERANCE: f64 = 1e-8;
/// Default number of boundary samples per edge.
pub const DEFAULT_EDGE_SAMPLES: usize = 64;
/// Default degree cap of the boundary fits.
pub const DEFAULT_FIT_DEGREE: usize = 32;

const VALIDATION_GRID: usize = 11;
const INDICATOR_SAMPLES: usize = 50;
const BIJECTIVITY_GRID: usize = 21;
const POLYGON_EDGE_SAMPLES: usize = 256;

/// Forward map from the reference square onto a physical domain.
#[derive(Debug, Clone)]
pub enum Mapping {
    Switching(SwitchingMapping),
    Projection(MultiRegionProjection),
    Bilinear(BilinearQuadMap),
    Serendipity(SerendipityQuadMap),
}

impl Mapping {
    /// Identity map of `[-1, 1]²`.
    pub fn identity() -> Self {
        Mapping::Bilinear(BilinearQuadMap::new(crate::polynomial_map::SQUARE_CORNERS).expect("square is convex"))
    }

    pub fn forward(&self, z: RealPoint2) -> Result<RealPoint2> {
        Ok(match self {
            Mapping::Switching(m) => RealPoint2::from_complex(m.apply(z.to_complex())),
            Mapping::Projection(m) => m.project(z, Direction::ZtoW)?,
            Mapping::Bilinear(m) => m.apply(z),
            Mapping::Serendipity(m) => m.apply(z),
        })
    }

    pub fn has_exact_inverse(&self) -> bool {
        matches!(self, Mapping::Projection(_) | Mapping::Bilinear(_))
    }

    /// Closed-form inverse, `None` when the map has none.
    pub fn exact_inverse(&self, w: RealPoint2) -> Option<Result<RealPoint2>> {
        match self {
            Mapping::Projection(m) => Some(m.project(w, Direction::WtoZ)),
            Mapping::Bilinear(m) => Some(m.inverse(w)),
            Mapping::Switching(_) | Mapping::Serendipity(_) => None,
        }
    }

    /// Image of the reference-square boundary as a polygon, traversed with
    /// the square's counter-clockwise order. Polygonal images are exact.
    pub fn boundary_polygon(&self) -> Result<PolygonBoundary> {
        let per_edge = match self {
            Mapping::Bilinear(_) => 1,
            Mapping::Projection(_) => 1,
            _ => POLYGON_EDGE_SAMPLES,
        };
        let mut extra: Vec<RealPoint2> = Vec::new();
        if let Mapping::Projection(m) = self {
            for r in m.regions() {
                extra.extend(r.z_polygon().vertices().iter().copied());
            }
        }
        let mut pts = Vec::new();
        for side in QuadSide::ALL {
            // Bottom and right run with increasing t, top and left backwards.
            let forward_t = matches!(side, QuadSide::Bottom | QuadSide::Right);
            let mut ts: Vec<f64> = (0..per_edge).map(|k| -1.0 + 2.0 * k as f64 / per_edge as f64).collect();
            for p in &extra {
                if side.indicator(*p).abs() < 1e-12 {
                    let t = side.parameter(*p);
                    if t > -1.0 && t < 1.0 {
                        ts.push(t);
                    }
                }
            }
            if !forward_t {
                ts = ts.into_iter().map(|t| if t == -1.0 { 1.0 } else { t }).collect();
            }
            ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            ts.dedup();
            if !forward_t {
                ts.reverse();
            }
            for t in ts {
                pts.push(self.forward(side.point(t))?);
            }
        }
        pts.dedup_by(|a, b| a.dist(*b) < 1e-14);
        PolygonBoundary::from_closed_or_open(pts)
    }

    /// Samples the map on an `n × n` reference lattice and fits an
    /// approximate inverse with `k` basis functions.
    pub fn fit_inverse(&self, n: usize, k: usize, basis: InverseBasis) -> Result<ApproxInverseModel> {
        ApproxInverseModel::fit_grid(|z| self.forward(RealPoint2::from_complex(z)).map(|w| w.to_complex()), n, k, basis)
    }

    /// Cell orientation and boundary self-intersection check on a
    /// `21 × 21` lattice.
    pub fn check_bijective(&self) -> Result<()> {
        let report = bijectivity_report(
            |z| {
                self.forward(RealPoint2::from_complex(z))
                    .map(|w| w.to_complex())
                    .unwrap_or(num_complex::Complex64::new(f64::NAN, f64::NAN))
            },
            GridSpec::square(BIJECTIVITY_GRID),
        )?;
        if report.bijective {
            Ok(())
        } else {
            Err(Error::NotBijective(format!(
                "{} folded cells, {} boundary crossings",
                report.fold_cells.len(),
                report.boundary_crossings
            )))
        }
    }
}

/// How `f⁻¹` is evaluated.
#[derive(Debug, Clone)]
pub enum InverseMap {
    Exact,
    Approximate(ApproxInverseModel),
}

/// Mapped domain with Dirichlet data on its four edges.
#[derive(Clone)]
pub struct DomainSpec {
    mapping: Mapping,
    inverse: InverseMap,
    boundary_values: [Field; 4],
    indicators: Option<[Field; 4]>,
}

impl fmt::Debug for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DomainSpec")
            .field("mapping", &self.mapping)
            .field("inverse", &self.inverse)
            .field("custom_indicators", &self.indicators.is_some())
            .finish()
    }
}

impl DomainSpec {
    /// Validates the inverse on a reference lattice and that the indicators
    /// vanish on their edges. `boundary_values` follow side order bottom,
    /// right, top, left. Without custom indicators the pullbacks
    /// `c_i(w) = side offset of f⁻¹(w)` are used.
    pub fn new(
        mapping: Mapping,
        inverse: InverseMap,
        boundary_values: [Field; 4],
        indicators: Option<[Field; 4]>,
    ) -> Result<Self> {
        if matches!(inverse, InverseMap::Exact) && !mapping.has_exact_inverse() {
            return Err(Error::invalid("mapping has no closed-form inverse; fit an approximate inverse model first"));
        }
        if !mapping.has_exact_inverse() {
            mapping.check_bijective()?;
        }
        let spec = Self { mapping, inverse, boundary_values, indicators };
        spec.validate()?;
        Ok(spec)
    }

    pub fn mapping(&self) -> &Mapping {
        &self.mapping
    }

    pub fn inverse_map(&self) -> &InverseMap {
        &self.inverse
    }

    pub fn tolerance(&self) -> f64 {
        match self.inverse {
            InverseMap::Exact => EXACT_INVERSE_TOLERANCE,
            InverseMap::Approximate(_) => APPROX_INVERSE_TOLERANCE,
        }
    }

    pub fn forward(&self, z: RealPoint2) -> Result<RealPoint2> {
        self.mapping.forward(z)
    }

    pub fn inverse(&self, w: RealPoint2) -> Result<RealPoint2> {
        match &self.inverse {
            InverseMap::Exact => self.mapping.exact_inverse(w).expect("checked at construction"),
            InverseMap::Approximate(m) => Ok(RealPoint2::from_complex(m.evaluate(w.to_complex()))),
        }
    }

    pub fn boundary_value(&self, side: QuadSide, w: RealPoint2) -> Result<f64> {
        let v = self.boundary_values[side_index(side)](w);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("boundary value on {side:?} at ({}, {})", w.u, w.v)))
        }
    }

    /// `c_i(w)`; `z` must be `f⁻¹(w)` (only used by the pullback).
    fn indicator_at(&self, side: QuadSide, w: RealPoint2, z: RealPoint2) -> f64 {
        match &self.indicators {
            Some(c) => c[side_index(side)](w),
            None => side.indicator(z),
        }
    }

    pub fn indicator(&self, side: QuadSide, w: RealPoint2) -> Result<f64> {
        let z = self.inverse(w)?;
        Ok(self.indicator_at(side, w, z))
    }

    /// `Π c_i(w)`.
    pub fn indicator_product(&self, w: RealPoint2) -> Result<f64> {
        let z = self.inverse(w)?;
        Ok(QuadSide::ALL.iter().map(|&s| self.indicator_at(s, w, z)).product())
    }

    fn validate(&self) -> Result<()> {
        let tol = self.tolerance();
        let step = 2.0 / (VALIDATION_GRID - 1) as f64;
        for j in 0..VALIDATION_GRID {
            for i in 0..VALIDATION_GRID {
                let z = RealPoint2::new(-1.0 + step * i as f64, -1.0 + step * j as f64);
                let back = self.inverse(self.forward(z)?)?;
                if back.dist(z) > tol {
                    return Err(Error::invalid(format!(
                        "inverse misses ({}, {}) by {:.3e} (tolerance {tol:.0e})",
                        z.u,
                        z.v,
                        back.dist(z)
                    )));
                }
            }
        }
        for side in QuadSide::ALL {
            for k in 0..INDICATOR_SAMPLES {
                let t = -1.0 + 2.0 * k as f64 / (INDICATOR_SAMPLES - 1) as f64;
                let w = self.forward(side.point(t))?;
                let c = self.indicator(side, w)?;
                if !(c.abs() <= tol) {
                    return Err(Error::invalid(format!("indicator of {side:?} is {c:.3e} on its own edge at t = {t}")));
                }
            }
        }
        Ok(())
    }
}

fn side_index(side: QuadSide) -> usize {
    match side {
        QuadSide::Bottom => 0,
        QuadSide::Right => 1,
        QuadSide::Top => 2,
        QuadSide::Left => 3,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointMode {
    /// Cell-centred uniform lattice over the bounding box.
    Grid,
    /// Chebyshev–Gauss–Lobatto abscissae per axis over the bounding box.
    Collocation,
}

/// Lattice points of the bounding box of the mapped domain that fall
/// strictly inside it.
pub fn interior_points(mapping: &Mapping, mode: PointMode, n_per_axis: usize) -> Result<Vec<RealPoint2>> {
    if n_per_axis < 2 {
        return Err(Error::invalid("need at least 2 points per axis"));
    }
    let poly = mapping.boundary_polygon()?;
    let bb = poly.bounding_box();
    let unit: Vec<f64> = match mode {
        PointMode::Grid => (0..n_per_axis).map(|k| (k as f64 + 0.5) / n_per_axis as f64).collect(),
        PointMode::Collocation => chebyshev::lobatto_nodes(n_per_axis).iter().map(|x| 0.5 * (x + 1.0)).collect(),
    };
    let xs: Vec<f64> = unit.iter().map(|s| bb.min.u + s * bb.width()).collect();
    let ys: Vec<f64> = unit.iter().map(|s| bb.min.v + s * bb.height()).collect();
    let pts: Vec<RealPoint2> = ys
        .iter()
        .flat_map(|&y| xs.iter().map(move |&x| RealPoint2::new(x, y)))
        .filter(|&p| poly.contains_strictly(p))
        .collect();
    if pts.is_empty() {
        return Err(Error::invalid(format!(
            "no lattice point falls inside the domain with n = {n_per_axis}; use a larger n"
        )));
    }
    Ok(pts)
}

/// Constrained expression `y(x) = g(x) + A x + B x²` satisfying
/// `y(−3) = y(π)` and `y'(1) = 1` for any `g`.
pub struct ConstrainedExpression1d {
    g: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    dg: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
    a: f64,
    b: f64,
}

/// Central finite-difference step used when `g'` is not supplied.
pub const FD_STEP: f64 = 1e-6;

impl ConstrainedExpression1d {
    pub fn new<G>(g: G) -> Self
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::build(Box::new(g), None)
    }

    pub fn with_derivative<G, D>(g: G, dg: D) -> Self
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::build(Box::new(g), Some(Box::new(dg)))
    }

    fn build(g: Box<dyn Fn(f64) -> f64 + Send + Sync>, dg: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>) -> Self {
        use std::f64::consts::PI;
        let mut out = Self { g, dg, a: 0.0, b: 0.0 };
        let d = 2.0 * PI - PI * PI + 15.0;
        let (gm3, gpi, e) = ((out.g)(-3.0), (out.g)(PI), 1.0 - out.g_prime(1.0));
        out.a = (2.0 * gm3 - 2.0 * gpi + (9.0 - PI * PI) * e) / d;
        out.b = (gpi - gm3 + (PI + 3.0) * e) / d;
        out
    }

    fn g_prime(&self, x: f64) -> f64 {
        match &self.dg {
            Some(dg) => dg(x),
            None => ((self.g)(x + FD_STEP) - (self.g)(x - FD_STEP)) / (2.0 * FD_STEP),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.g)(x) + self.a * x + self.b * x * x
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.g_prime(x) + self.a + 2.0 * self.b * x
    }

    /// Coefficients `(A, B)` of the correction `A x + B x²`.
    pub fn coefficients(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}

/// `y(x)` of [`ConstrainedExpression1d`] for a one-off evaluation.
pub fn constrained_expression_demo<G>(g: G, x: f64) -> f64
where
    G: Fn(f64) -> f64 + Send + Sync + 'static,
{
    ConstrainedExpression1d::new(g).value(x)
}

/// Chebyshev least-squares fit `ĝ` on `[-1, 1]` corrected so the end values
/// are exact: `y(t) = ĝ(t) + (1−t)/2 (v_l − ĝ(−1)) + (1+t)/2 (v_r − ĝ(1))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointFit {
    coeffs: Vec<f64>,
    left: f64,
    right: f64,
    left_shift: f64,
    right_shift: f64,
}

impl EndpointFit {
    pub fn eval(&self, t: f64) -> f64 {
        if t == -1.0 {
            return self.left;
        }
        if t == 1.0 {
            return self.right;
        }
        chebyshev::eval_series(&self.coeffs, t) + 0.5 * (1.0 - t) * self.left_shift + 0.5 * (1.0 + t) * self.right_shift
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

pub fn endpoint_constrained_fit(
    samples: &[(f64, f64)],
    v_left: f64,
    v_right: f64,
    max_degree: usize,
) -> Result<EndpointFit> {
    if samples.len() < 2 {
        return Err(Error::invalid("endpoint fit needs at least 2 samples"));
    }
    if !(v_left.is_finite() && v_right.is_finite()) {
        return Err(Error::invalid("end values must be finite"));
    }
    if samples.iter().any(|&(t, v)| !t.is_finite() || !v.is_finite() || t.abs() > 1.0 + 1e-9) {
        return Err(Error::invalid("samples must be finite with parameters in [-1, 1]"));
    }
    let mut ts: Vec<f64> = samples.iter().map(|s| s.0).collect();
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.dedup();
    if ts.len() < 2 {
        return Err(Error::invalid("endpoint fit needs at least 2 distinct parameters"));
    }
    let k = (ts.len() - 1).min(max_degree) + 1;
    let design = DMatrix::from_fn(samples.len(), k, |i, j| chebyshev::values(samples[i].0, k)[j]);
    let rhs = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let (c, _) = linalg::least_squares_real(&design, &rhs, 1e13, "boundary fit")?;
    let coeffs: Vec<f64> = c.iter().copied().collect();
    let g_l = chebyshev::eval_series(&coeffs, -1.0);
    let g_r = chebyshev::eval_series(&coeffs, 1.0);
    Ok(EndpointFit { coeffs, left: v_left, right: v_right, left_shift: v_left - g_l, right_shift: v_right - g_r })
}

/// Four boundary curves of `[-1, 1]²`: bottom `c₁(a)`, right `c₂(b)`,
/// top `c₃(a)`, left `c₄(b)`.
#[derive(Clone)]
pub struct CoonsPatch {
    curves: [Segment; 4],
    /// Corners `(−1,−1), (1,−1), (1,1), (−1,1)`.
    corners: [f64; 4],
}

impl fmt::Debug for CoonsPatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoonsPatch").field("corners", &self.corners).finish()
    }
}

impl CoonsPatch {
    pub fn new(curves: [Segment; 4]) -> Result<Self> {
        let [c1, c2, c3, c4] = &curves;
        let pairs = [(c1(-1.0), c4(-1.0)), (c1(1.0), c2(-1.0)), (c3(1.0), c2(1.0)), (c3(-1.0), c4(1.0))];
        let mut corners = [0.0; 4];
        for (k, &(x, y)) in pairs.iter().enumerate() {
            if !(x.is_finite() && y.is_finite()) {
                return Err(Error::NonFinite(format!("corner {k} of the Coons patch")));
            }
            if (x - y).abs() > CORNER_TOLERANCE {
                return Err(Error::invalid(format!("boundary curves disagree at corner {k}: {x} vs {y}")));
            }
            corners[k] = 0.5 * (x + y);
        }
        Ok(Self { curves, corners })
    }

    pub fn corners(&self) -> [f64; 4] {
        self.corners
    }

    pub fn eval(&self, a: f64, b: f64) -> f64 {
        let [c1, c2, c3, c4] = &self.curves;
        let [p00, p10, p11, p01] = self.corners;
        let (am, ap, bm, bp) = (0.5 * (1.0 - a), 0.5 * (1.0 + a), 0.5 * (1.0 - b), 0.5 * (1.0 + b));
        let ruled = bm * c1(a) + bp * c3(a) + am * c4(b) + ap * c2(b);
        let bilinear = am * bm * p00 + ap * bm * p10 + ap * bp * p11 + am * bp * p01;
        ruled - bilinear
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceOptions {
    pub samples_per_edge: usize,
    pub max_degree: usize,
}

impl Default for SurfaceOptions {
    fn default() -> Self {
        Self { samples_per_edge: DEFAULT_EDGE_SAMPLES, max_degree: DEFAULT_FIT_DEGREE }
    }
}

/// Constrained surface `S(w) = S_c(f⁻¹(w)) + g(w) Π c_i(w)`.
pub struct Surface<G> {
    spec: DomainSpec,
    coons: CoonsPatch,
    fits: [Arc<EndpointFit>; 4],
    g: G,
}

impl<G> Surface<G>
where
    G: Fn(RealPoint2) -> f64,
{
    pub fn eval(&self, w: RealPoint2) -> Result<f64> {
        let z = self.spec.inverse(w)?;
        let base = self.coons.eval(z.u, z.v);
        let product: f64 = QuadSide::ALL.iter().map(|&s| self.spec.indicator_at(s, w, z)).product();
        let gw = (self.g)(w);
        if !gw.is_finite() {
            return Err(Error::NonFinite(format!("free function at ({}, {})", w.u, w.v)));
        }
        Ok(base + gw * product)
    }

    /// `S_c` in reference coordinates.
    pub fn coons(&self) -> &CoonsPatch {
        &self.coons
    }

    pub fn edge_fit(&self, side: QuadSide) -> &EndpointFit {
        &self.fits[side_index(side)]
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }
}

/// Runs the boundary sampling, inversion, fitting and blending steps and
/// returns the surface for free function `g`.
pub fn build_surface<G>(spec: &DomainSpec, g: G, options: SurfaceOptions) -> Result<Surface<G>>
where
    G: Fn(RealPoint2) -> f64,
{
    if options.samples_per_edge < 2 {
        return Err(Error::invalid("need at least 2 boundary samples per edge"));
    }
    let corner_z = [
        RealPoint2::new(-1.0, -1.0),
        RealPoint2::new(1.0, -1.0),
        RealPoint2::new(1.0, 1.0),
        RealPoint2::new(-1.0, 1.0),
    ];
    // each corner is shared by two sides; use the mean of their data
    let corner_sides = [
        (QuadSide::Bottom, QuadSide::Left),
        (QuadSide::Bottom, QuadSide::Right),
        (QuadSide::Right, QuadSide::Top),
        (QuadSide::Top, QuadSide::Left),
    ];
    let mut corners = [0.0; 4];
    for k in 0..4 {
        let w = spec.forward(corner_z[k])?;
        let (s1, s2) = corner_sides[k];
        corners[k] = 0.5 * (spec.boundary_value(s1, w)? + spec.boundary_value(s2, w)?);
    }
    let ends = |side: QuadSide| match side {
        QuadSide::Bottom => (corners[0], corners[1]),
        QuadSide::Right => (corners[1], corners[2]),
        QuadSide::Top => (corners[3], corners[2]),
        QuadSide::Left => (corners[0], corners[3]),
    };
    let nodes = chebyshev::lobatto_nodes(options.samples_per_edge);
    let mut fits = Vec::with_capacity(4);
    for side in QuadSide::ALL {
        let mut samples = Vec::with_capacity(nodes.len());
        for &t in &nodes {
            let w_b = spec.forward(side.point(t))?;
            let z_b = spec.inverse(w_b)?;
            let s = side.parameter(z_b).clamp(-1.0, 1.0);
            samples.push((s, spec.boundary_value(side, w_b)?));
        }
        let (vl, vr) = ends(side);
        fits.push(Arc::new(endpoint_constrained_fit(&samples, vl, vr, options.max_degree)?));
    }
    let fits: [Arc<EndpointFit>; 4] = [fits[0].clone(), fits[1].clone(), fits[2].clone(), fits[3].clone()];
    let curves: [Segment; 4] = std::array::from_fn(|k| {
        let f = fits[k].clone();
        Arc::new(move |t: f64| f.eval(t)) as Segment
    });
    let coons = CoonsPatch::new(curves)?;
    Ok(Surface { spec: spec.clone(), coons, fits, g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn constant(v: f64) -> Segment {
        Arc::new(move |_| v)
    }

    #[test]
    fn unit_square_grid_points() {
        let pts = interior_points(&Mapping::identity(), PointMode::Grid, 4).unwrap();
        assert_eq!(pts.len(), 16);
        assert!(pts.iter().all(|p| p.u.abs() < 1.0 && p.v.abs() < 1.0));
        assert!(interior_points(&Mapping::identity(), PointMode::Grid, 1).is_err());
    }

    #[test]
    fn zero_g_expression() {
        let y = ConstrainedExpression1d::new(|_| 0.0);
        let d = 2.0 * PI - PI * PI + 15.0;
        let (a, b) = y.coefficients();
        assert!((a - (9.0 - PI * PI) / d).abs() < 1e-9);
        assert!((b - (PI + 3.0) / d).abs() < 1e-9);
        assert!((y.value(-3.0) - y.value(PI)).abs() < 1e-12);
    }

    #[test]
    fn cubic_expression_constraints() {
        let y = ConstrainedExpression1d::new(|x| x * x * x);
        assert!((y.value(-3.0) - y.value(PI)).abs() < 1e-9);
        let fd = (y.value(1.0 + 1e-6) - y.value(1.0 - 1e-6)) / 2e-6;
        assert!((fd - 1.0).abs() < 1e-6);
        let exact = ConstrainedExpression1d::with_derivative(|x| x * x * x, |x| 3.0 * x * x);
        assert!((exact.derivative(1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_fit() {
        let s: Vec<_> = (0..9).map(|k| (-1.0 + k as f64 * 0.25, 5.0)).collect();
        let f = endpoint_constrained_fit(&s, 5.0, 5.0, 16).unwrap();
        for i in 0..=20 {
            assert!((f.eval(-1.0 + 0.1 * i as f64) - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sine_fit_with_pinned_ends() {
        let s: Vec<_> = chebyshev::lobatto_nodes(33).into_iter().map(|t| (t, (PI * t).sin())).collect();
        let f = endpoint_constrained_fit(&s, 0.0, 0.0, 16).unwrap();
        assert_eq!(f.eval(-1.0), 0.0);
        assert_eq!(f.eval(1.0), 0.0);
        let worst =
            (0..=400).map(|i| -1.0 + i as f64 / 200.0).map(|t| (f.eval(t) - (PI * t).sin()).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn degenerate_fit_rejected() {
        assert!(endpoint_constrained_fit(&[(0.0, 1.0)], 0.0, 0.0, 16).is_err());
        assert!(endpoint_constrained_fit(&[(0.2, 1.0), (0.2, 2.0)], 0.0, 0.0, 16).is_err());
        assert!(endpoint_constrained_fit(&[(0.0, f64::NAN), (0.5, 1.0)], 0.0, 0.0, 16).is_err());
    }

    #[test]
    fn coons_constant_and_bilinear() {
        let p = CoonsPatch::new([constant(2.5), constant(2.5), constant(2.5), constant(2.5)]).unwrap();
        assert_eq!(p.eval(0.3, -0.7), 2.5);
        let h = |a: f64, b: f64| 1.0 + a + 2.0 * b + 3.0 * a * b;
        let curves: [Segment; 4] = [
            Arc::new(move |a| h(a, -1.0)),
            Arc::new(move |b| h(1.0, b)),
            Arc::new(move |a| h(a, 1.0)),
            Arc::new(move |b| h(-1.0, b)),
        ];
        let p = CoonsPatch::new(curves).unwrap();
        for i in 0..20 {
            for j in 0..20 {
                let (a, b) = (-1.0 + i as f64 * 2.0 / 19.0, -1.0 + j as f64 * 2.0 / 19.0);
                assert!((p.eval(a, b) - h(a, b)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn coons_rejects_corner_mismatch() {
        let r = CoonsPatch::new([constant(0.0), constant(0.0), constant(0.0), constant(1e-6)]);
        assert!(r.is_err());
    }

    #[test]
    fn exact_inverse_required_for_switching() {
        let z = vec![
            num_complex::Complex64::new(-1.0, -1.0),
            num_complex::Complex64::new(1.0, -1.0),
            num_complex::Complex64::new(1.0, 1.0),
            num_complex::Complex64::new(-1.0, 1.0),
        ];
        let m = SwitchingMapping::build(z.clone(), z).unwrap();
        let zero: Field = Arc::new(|_| 0.0);
        let r = DomainSpec::new(
            Mapping::Switching(m),
            InverseMap::Exact,
            [zero.clone(), zero.clone(), zero.clone(), zero],
            None,
        );
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }
}
