//! Complex (conformal) mappings from the unit square `Z` to a domain `W`.
//!
//! Three levels of generality live here:
//!
//! * closed-form elementary maps ([`ElementaryMap`]), including the
//!   linear fractional [`MobiusMap`], which is built from three point
//!   correspondences and has a closed-form inverse;
//! * the n-point switching map `w(z) = Σ w_i φ_i(z)` with complex monomial
//!   support, where `φ_i(z_j) = δ_ij` ([`SwitchingMapping`]);
//! * its free-function generalisation
//!   `w(z, g) = g(z) + Σ [w_i − g(z_i)] φ_i(z)` ([`SwitchingMapping::apply_tfc`]),
//!   which keeps every control point fixed whatever `g` is.
//!
//! None of the polynomial maps is guaranteed to be one-to-one, so
//! [`bijectivity_report`] checks a sampled map for folds.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ComplexPoint, RealPoint2};
use crate::linalg::{self, CMatrix, CVector};

/// Distance to a pole below which evaluation is refused.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Largest Vandermonde condition number accepted by [`SwitchingMapping::build`].
pub const MAX_VANDERMONDE_CONDITION: f64 = 1e12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Linear fractional map `w = (α z + β) / (γ z + δ)` with `αδ ≠ βγ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    pub alpha: ComplexPoint,
    pub beta: ComplexPoint,
    pub gamma: ComplexPoint,
    pub delta: ComplexPoint,
}

impl MobiusMap {
    pub const IDENTITY: MobiusMap = MobiusMap { alpha: ONE, beta: ZERO, gamma: ZERO, delta: ONE };

    pub fn new(alpha: ComplexPoint, beta: ComplexPoint, gamma: ComplexPoint, delta: ComplexPoint) -> Result<Self> {
        let m = Self { alpha, beta, gamma, delta };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let scale = [self.alpha, self.beta, self.gamma, self.delta].iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
        let det = self.determinant().norm();
        if !(det > 1e-12 * scale * scale) {
            return Err(Error::invalid(format!("Möbius coefficients are degenerate: |αδ − βγ| = {det:.3e}")));
        }
        Ok(())
    }

    pub fn determinant(&self) -> ComplexPoint {
        self.alpha * self.delta - self.beta * self.gamma
    }

    /// Finite pole `−δ/γ`, if any.
    pub fn pole(&self) -> Option<ComplexPoint> {
        (self.gamma != ZERO).then(|| -self.delta / self.gamma)
    }

    pub fn apply(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        if let Some(p) = self.pole() {
            if (z - p).norm() < POLE_TOLERANCE {
                return Err(Error::Pole(format!("Möbius map has a pole at {p}")));
            }
        }
        Ok((self.alpha * z + self.beta) / (self.gamma * z + self.delta))
    }

    /// `w ↦ (δ w − β) / (−γ w + α)`.
    pub fn inverse(&self) -> MobiusMap {
        MobiusMap { alpha: self.delta, beta: -self.beta, gamma: -self.gamma, delta: self.alpha }
    }

    /// Solves for the map sending `z[k] → w[k]`, normalised to `γ = 1`.
    ///
    /// Correspondences that need `γ = 0` (affine maps, e.g. the identity)
    /// make the `γ = 1` system singular; those are solved with `δ = 1`
    /// instead.
    pub fn from_points(z: [ComplexPoint; 3], w: [ComplexPoint; 3]) -> Result<MobiusMap> {
        for (name, pts) in [("z", &z), ("w", &w)] {
            for i in 0..3 {
                for j in (i + 1)..3 {
                    if (pts[i] - pts[j]).norm() < POLE_TOLERANCE {
                        return Err(Error::invalid(format!(
                            "Möbius correspondence needs distinct {name} points ({i} and {j} coincide)"
                        )));
                    }
                }
            }
        }
        // α z_k + β − δ w_k = γ z_k w_k, unknowns (α, β, δ) with γ = 1
        let a = CMatrix::from_fn(3, 3, |k, j| match j {
            0 => z[k],
            1 => ONE,
            _ => -w[k],
        });
        let b = CVector::from_fn(3, |k, _| z[k] * w[k]);
        if let Ok(x) = linalg::solve(&a, &b, 1e12, "Möbius correspondence (γ = 1)") {
            if let Ok(m) = MobiusMap::new(x[0], x[1], ONE, x[2]) {
                return Ok(m);
            }
        }
        // α z_k + β − γ z_k w_k = w_k, unknowns (α, β, γ) with δ = 1
        let a = CMatrix::from_fn(3, 3, |k, j| match j {
            0 => z[k],
            1 => ONE,
            _ => -z[k] * w[k],
        });
        let b = CVector::from_fn(3, |k, _| w[k]);
        let x = linalg::solve(&a, &b, 1e12, "Möbius correspondence (δ = 1)")?;
        MobiusMap::new(x[0], x[1], x[2], ONE)
    }
}

/// Elementary closed-form complex maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElementaryMap {
    /// `w = z + z_t`
    Translation {
        shift: ComplexPoint,
    },
    /// `w = ρ z`, `ρ ≠ 0`
    Scaling {
        rho: ComplexPoint,
    },
    /// `w = e^{iφ} z`
    Rotation {
        phi: f64,
    },
    /// `w = α z + β`
    Affine {
        alpha: ComplexPoint,
        beta: ComplexPoint,
    },
    /// `w = 1 / z`
    Inversion,
    /// `w = e^z`
    Exponential,
    /// `w = z²`
    Squaring,
    /// `w = (z − 1) / (z + 1)`
    Cayley,
    Mobius(MobiusMap),
}

impl ElementaryMap {
    /// Checks parameter invariants (non-zero scaling, non-degenerate Möbius).
    pub fn validate(&self) -> Result<()> {
        match self {
            ElementaryMap::Scaling { rho } if *rho == ZERO => Err(Error::invalid("scaling factor must be non-zero")),
            ElementaryMap::Affine { alpha, .. } if *alpha == ZERO => {
                Err(Error::invalid("affine factor must be non-zero"))
            }
            ElementaryMap::Mobius(m) => m.validate(),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        self.validate()?;
        Ok(match *self {
            ElementaryMap::Translation { shift } => z + shift,
            ElementaryMap::Scaling { rho } => rho * z,
            ElementaryMap::Rotation { phi } => Complex64::from_polar(1.0, phi) * z,
            ElementaryMap::Affine { alpha, beta } => alpha * z + beta,
            ElementaryMap::Inversion => {
                if z.norm() < POLE_TOLERANCE {
                    return Err(Error::Pole("inversion 1/z at z = 0".into()));
                }
                z.inv()
            }
            ElementaryMap::Exponential => z.exp(),
            ElementaryMap::Squaring => z * z,
            ElementaryMap::Cayley => {
                if (z + ONE).norm() < POLE_TOLERANCE {
                    return Err(Error::Pole("Cayley map at z = −1".into()));
                }
                (z - ONE) / (z + ONE)
            }
            ElementaryMap::Mobius(m) => return m.apply(z),
        })
    }
}

/// The n-point switching map `w(z) = Σ_i w_i φ_i(z)` with
/// `φ_i(z) = Σ_j c_ij z^{j−1}` and `φ_i(z_j) = δ_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingMapping {
    z_refs: Vec<ComplexPoint>,
    w_ctrls: Vec<ComplexPoint>,
    /// Row `i` holds the monomial coefficients of `φ_i`.
    coeffs: CMatrix,
    condition: f64,
}

impl SwitchingMapping {
    /// Builds the coefficient matrix as the inverse of the Vandermonde
    /// matrix whose column `j` is `(1, z_j, z_j², …)`.
    pub fn build(z_refs: Vec<ComplexPoint>, w_ctrls: Vec<ComplexPoint>) -> Result<Self> {
        let n = z_refs.len();
        if n < 2 {
            return Err(Error::invalid(format!("switching map needs n ≥ 2 reference points, got {n}")));
        }
        if w_ctrls.len() != n {
            return Err(Error::invalid(format!(
                "switching map needs one control point per reference point ({} vs {n})",
                w_ctrls.len()
            )));
        }
        if z_refs.iter().chain(&w_ctrls).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid("switching map points must be finite"));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if z_refs[i] == z_refs[j] {
                    return Err(Error::invalid(format!("reference points {i} and {j} coincide")));
                }
            }
        }
        let vandermonde = CMatrix::from_fn(n, n, |k, j| z_refs[j].powu(k as u32));
        let condition = linalg::condition_number(&vandermonde);
        let coeffs = linalg::invert(&vandermonde, MAX_VANDERMONDE_CONDITION, "switching Vandermonde matrix")?;
        Ok(Self { z_refs, w_ctrls, coeffs, condition })
    }

    pub fn n(&self) -> usize {
        self.z_refs.len()
    }

    pub fn z_refs(&self) -> &[ComplexPoint] {
        &self.z_refs
    }

    pub fn w_ctrls(&self) -> &[ComplexPoint] {
        &self.w_ctrls
    }

    pub fn coeffs(&self) -> &CMatrix {
        &self.coeffs
    }

    /// Condition number of the Vandermonde matrix that was inverted.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// `φ_i(z)` by Horner's rule.
    pub fn phi(&self, i: usize, z: ComplexPoint) -> ComplexPoint {
        let row = self.coeffs.row(i);
        row.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// All switching values `[φ_1(z), …, φ_n(z)]`.
    pub fn switching_values(&self, z: ComplexPoint) -> Vec<ComplexPoint> {
        (0..self.n()).map(|i| self.phi(i, z)).collect()
    }

    /// `w(z) = Σ w_i φ_i(z)`.
    pub fn apply(&self, z: ComplexPoint) -> ComplexPoint {
        self.w_ctrls.iter().enumerate().map(|(i, &w)| w * self.phi(i, z)).sum()
    }

    /// Derivative `w'(z)`.
    pub fn derivative(&self, z: ComplexPoint) -> ComplexPoint {
        let n = self.n();
        let mut total = ZERO;
        for (i, &w) in self.w_ctrls.iter().enumerate() {
            let row = self.coeffs.row(i);
            let mut d = ZERO;
            for k in (1..n).rev() {
                d = d * z + row[k] * k as f64;
            }
            total += w * d;
        }
        total
    }

    /// Free-function form `w(z, g) = g(z) + Σ [w_i − g(z_i)] φ_i(z)`.
    ///
    /// Every reference point still maps onto its control point, whatever
    /// `g` is.
    pub fn apply_tfc<G>(&self, g: G, z: ComplexPoint) -> Result<ComplexPoint>
    where
        G: Fn(ComplexPoint) -> ComplexPoint,
    {
        let gz = finite_free_value(&g, z)?;
        let mut w = gz;
        for (i, (&zi, &wi)) in self.z_refs.iter().zip(&self.w_ctrls).enumerate() {
            w += (wi - finite_free_value(&g, zi)?) * self.phi(i, z);
        }
        Ok(w)
    }
}

fn finite_free_value<G: Fn(ComplexPoint) -> ComplexPoint>(g: &G, z: ComplexPoint) -> Result<ComplexPoint> {
    let v = g(z);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!("free function g({z}) = {v}")))
    }
}

/// Uniform sampling lattice over `[-1, 1]²` with `n_a × n_b` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub n_a: usize,
    pub n_b: usize,
}

impl GridSpec {
    pub fn square(n: usize) -> Self {
        Self { n_a: n, n_b: n }
    }

    /// Reference-square node `(i, j)` (`i` along `a`, `j` along `b`).
    pub fn node(&self, i: usize, j: usize) -> ComplexPoint {
        let a = -1.0 + 2.0 * i as f64 / (self.n_a - 1) as f64;
        let b = -1.0 + 2.0 * j as f64 / (self.n_b - 1) as f64;
        Complex64::new(a, b)
    }
}

/// Result of [`bijectivity_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct BijectivityReport {
    pub bijective: bool,
    /// Sign shared by the majority of mapped cells (+1 orientation-preserving).
    pub orientation: f64,
    /// Cells `(i, j)` whose mapped signed area is zero, non-finite, or of the
    /// minority sign.
    pub fold_cells: Vec<(usize, usize)>,
    /// Proper self-intersections of the mapped boundary ring.
    pub boundary_crossings: usize,
    pub min_cell_area: f64,
    pub max_cell_area: f64,
}

/// Samples `map` on `grid` and looks for folds.
///
/// Each lattice cell is mapped and its signed area computed; a consistent,
/// non-zero sign rules out local folds. The image of the square's boundary
/// ring is also checked for self-intersections, which catch global
/// overlaps that keep a consistent local orientation.
pub fn bijectivity_report<F>(map: F, grid: GridSpec) -> Result<BijectivityReport>
where
    F: Fn(ComplexPoint) -> ComplexPoint,
{
    if grid.n_a < 3 || grid.n_b < 3 {
        return Err(Error::invalid("bijectivity grid must be at least 3×3"));
    }
    let (na, nb) = (grid.n_a, grid.n_b);
    let image: Vec<RealPoint2> = (0..nb)
        .flat_map(|j| (0..na).map(move |i| (i, j)))
        .map(|(i, j)| RealPoint2::from_complex(map(grid.node(i, j))))
        .collect();
    let at = |i: usize, j: usize| image[j * na + i];

    let mut areas = Vec::with_capacity((na - 1) * (nb - 1));
    for j in 0..nb - 1 {
        for i in 0..na - 1 {
            let quad = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            let area = 0.5 * (0..4).map(|k| quad[k].cross(quad[(k + 1) % 4])).sum::<f64>();
            areas.push(((i, j), area));
        }
    }
    let positive = areas.iter().filter(|(_, a)| *a > 0.0).count();
    let negative = areas.iter().filter(|(_, a)| *a < 0.0).count();
    let orientation = if positive >= negative { 1.0 } else { -1.0 };
    let fold_cells: Vec<_> =
        areas.iter().filter(|(_, a)| !(a.is_finite() && a * orientation > 0.0)).map(|(c, _)| *c).collect();
    let finite_areas = areas.iter().map(|(_, a)| *a).filter(|a| a.is_finite());
    let min_cell_area = finite_areas.clone().fold(f64::INFINITY, f64::min);
    let max_cell_area = finite_areas.fold(f64::NEG_INFINITY, f64::max);

    // boundary ring, counterclockwise from (-1, -1)
    let mut ring = Vec::with_capacity(2 * (na + nb));
    ring.extend((0..na - 1).map(|i| at(i, 0)));
    ring.extend((0..nb - 1).map(|j| at(na - 1, j)));
    ring.extend((1..na).rev().map(|i| at(i, nb - 1)));
    ring.extend((1..nb).rev().map(|j| at(0, j)));
    let boundary_crossings = count_self_intersections(&ring);

    Ok(BijectivityReport {
        bijective: fold_cells.is_empty() && boundary_crossings == 0,
        orientation,
        fold_cells,
        boundary_crossings,
        min_cell_area,
        max_cell_area,
    })
}

/// Proper crossings between non-adjacent edges of a closed polyline.
fn count_self_intersections(ring: &[RealPoint2]) -> usize {
    let m = ring.len();
    let mut count = 0;
    for i in 0..m {
        let (a, b) = (ring[i], ring[(i + 1) % m]);
        for j in (i + 2)..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            let (c, d) = (ring[j], ring[(j + 1) % m]);
            let d1 = (b - a).cross(c - a);
            let d2 = (b - a).cross(d - a);
            let d3 = (d - c).cross(a - c);
            let d4 = (d - c).cross(b - c);
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(ElementaryMap::Inversion.apply(c(2.0, 0.0)).unwrap(), c(0.5, 0.0));
        assert_eq!(ElementaryMap::Cayley.apply(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(ElementaryMap::Exponential.apply(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(ElementaryMap::Squaring.apply(c(1.0, 1.0)).unwrap(), c(0.0, 2.0));
        let rot = ElementaryMap::Rotation { phi: std::f64::consts::FRAC_PI_2 }.apply(c(1.0, 0.0)).unwrap();
        assert!((rot - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn poles_are_errors() {
        assert!(matches!(ElementaryMap::Inversion.apply(c(0.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(ElementaryMap::Cayley.apply(c(-1.0, 0.0)), Err(Error::Pole(_))));
        let m = MobiusMap::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!(matches!(m.apply(c(-2.0, 0.0)), Err(Error::Pole(_))));
        assert!(m.apply(c(-2.0 + 1e-9, 0.0)).is_ok());
    }

    #[test]
    fn degenerate_parameters_rejected() {
        assert!(ElementaryMap::Scaling { rho: c(0.0, 0.0) }.apply(c(1.0, 0.0)).is_err());
        assert!(MobiusMap::new(c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)).is_err());
    }

    #[test]
    fn mobius_identity_correspondence() {
        let z = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)];
        let m = MobiusMap::from_points(z, z).unwrap();
        for zk in z {
            assert!((m.apply(zk).unwrap() - zk).norm() < 1e-14);
        }
        let inv = MobiusMap::IDENTITY.inverse();
        assert_eq!(inv.apply(c(0.3, -0.7)).unwrap(), c(0.3, -0.7));
    }

    #[test]
    fn mobius_rejects_repeated_points() {
        let z = [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)];
        let w = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 1.0)];
        assert!(MobiusMap::from_points(z, w).is_err());
        assert!(MobiusMap::from_points(w, z).is_err());
    }

    #[test]
    fn two_point_switching_is_linear_interpolation() {
        let m = SwitchingMapping::build(vec![c(-1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        // hand-inverted 2×2 Vandermonde: φ1 = (1 − z)/2, φ2 = (1 + z)/2
        let want = [[0.5, -0.5], [0.5, 0.5]];
        for i in 0..2 {
            for k in 0..2 {
                assert!((m.coeffs()[(i, k)] - c(want[i][k], 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn switching_rejects_bad_input() {
        assert!(SwitchingMapping::build(vec![c(0.0, 0.0)], vec![c(0.0, 0.0)]).is_err());
        assert!(SwitchingMapping::build(vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(SwitchingMapping::build(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0)]).is_err());
        // 16 nearly coincident nodes make the Vandermonde hopeless
        let z: Vec<_> = (0..16).map(|k| c(1e-3 * k as f64, 0.0)).collect();
        let err = SwitchingMapping::build(z.clone(), z).unwrap_err();
        assert!(matches!(err, Error::IllConditioned { condition, .. } if condition > 1e12));
    }

    #[test]
    fn tfc_rejects_non_finite_free_function() {
        let m = SwitchingMapping::build(vec![c(-1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = m.apply_tfc(|_| c(f64::NAN, 0.0), c(0.0, 0.0));
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    #[test]
    fn identity_map_is_bijective() {
        let r = bijectivity_report(|z| z, GridSpec::square(5)).unwrap();
        assert!(r.bijective);
        assert_eq!(r.orientation, 1.0);
        assert!(bijectivity_report(|z| z, GridSpec::square(2)).is_err());
    }

    #[test]
    fn squaring_folds_the_square() {
        let r = bijectivity_report(|z| z * z, GridSpec::square(6)).unwrap();
        assert!(!r.bijective);
    }
}
