//! JSON mapping documents.
//!
//! Every document carries a `kind` tag:
//!
//! | kind | fields |
//! |------|--------|
//! | `switching` | `z_refs`, `w_ctrls` (`[re, im]` pairs), optional `free_function` |
//! | `projection` | `regions`: list of `{c, upsilon, p, q}` |
//! | `bilinear4` | `w_pts`: 4 corners counter-clockwise from `(−1,−1)` |
//! | `serendipity8` | `w_pts`: 8 nodes counter-clockwise from `(−1,−1)` |
//! | `triangle3` | `z_pts`, `w_pts`: 3 points each |
//! | `elementary` | `chain`: elementary maps applied in order |
//!
//! An optional top-level `note` string is ignored.
//!
//! Piecewise boundary documents are a list of
//! `{"expr": <coefficients or name>, "range": [lo, hi]}` pieces, where a
//! coefficient list `[c0, c1, …]` is the polynomial `Σ c_k x^k` and a name
//! is one of the built-in scalar functions.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::boundary_tools::{polynomial_segment, PiecewiseBoundary, Segment};
use crate::complex_map::{ElementaryMap, SwitchingMapping};
use crate::error::{Error, Result};
use crate::geometry::{ComplexPoint, RealPoint2};
use crate::polynomial_map::{BilinearQuadMap, LinearTriangleMap, SerendipityQuadMap};
use crate::projection_map::{Direction, MultiRegionDoc, MultiRegionProjection, RegionDoc};
use crate::registry::{self, ComplexFn};
use crate::tfc_pipeline::Mapping;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapConfig {
    Switching {
        z_refs: Vec<ComplexPoint>,
        w_ctrls: Vec<ComplexPoint>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        free_function: Option<String>,
    },
    Projection {
        regions: Vec<RegionDoc>,
    },
    #[serde(rename = "bilinear4")]
    Bilinear4 {
        w_pts: [RealPoint2; 4],
    },
    #[serde(rename = "serendipity8")]
    Serendipity8 {
        w_pts: [RealPoint2; 8],
    },
    #[serde(rename = "triangle3")]
    Triangle3 {
        z_pts: [RealPoint2; 3],
        w_pts: [RealPoint2; 3],
    },
    Elementary {
        chain: Vec<ElementaryMap>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigFile {
    #[serde(flatten)]
    pub map: MapConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("mapping document: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// Built point map, either defined on the reference square or a free
/// complex/affine map.
#[derive(Clone)]
pub enum PointMap {
    Square(Mapping),
    /// Switching map with a free function, `w = g + Σ (w_i − g(z_i)) φ_i`.
    SwitchingTfc {
        map: SwitchingMapping,
        g: ComplexFn,
    },
    Triangle(LinearTriangleMap),
    Elementary(Vec<ElementaryMap>),
}

impl std::fmt::Debug for PointMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointMap::Square(m) => f.debug_tuple("Square").field(m).finish(),
            PointMap::SwitchingTfc { map, .. } => f.debug_struct("SwitchingTfc").field("map", map).finish(),
            PointMap::Triangle(m) => f.debug_tuple("Triangle").field(m).finish(),
            PointMap::Elementary(c) => f.debug_tuple("Elementary").field(c).finish(),
        }
    }
}

impl MapConfig {
    pub fn build(&self) -> Result<PointMap> {
        Ok(match self {
            MapConfig::Switching { z_refs, w_ctrls, free_function } => {
                let map = SwitchingMapping::build(z_refs.clone(), w_ctrls.clone())?;
                match free_function.as_deref() {
                    None | Some("zero") => PointMap::Square(Mapping::Switching(map)),
                    Some(name) => PointMap::SwitchingTfc { map, g: registry::complex_fn(name)? },
                }
            }
            MapConfig::Projection { regions } => {
                PointMap::Square(Mapping::Projection(MultiRegionProjection::from_doc(&MultiRegionDoc {
                    regions: regions.clone(),
                })?))
            }
            MapConfig::Bilinear4 { w_pts } => PointMap::Square(Mapping::Bilinear(BilinearQuadMap::new(*w_pts)?)),
            MapConfig::Serendipity8 { w_pts } => {
                PointMap::Square(Mapping::Serendipity(SerendipityQuadMap::new(*w_pts)?))
            }
            MapConfig::Triangle3 { z_pts, w_pts } => PointMap::Triangle(LinearTriangleMap::build(*z_pts, *w_pts)?),
            MapConfig::Elementary { chain } => {
                for m in chain {
                    m.validate()?;
                }
                PointMap::Elementary(chain.clone())
            }
        })
    }

    /// The reference-square mapping, for operations that need one.
    pub fn build_square(&self) -> Result<Mapping> {
        match self.build()? {
            PointMap::Square(m) => Ok(m),
            PointMap::SwitchingTfc { .. } => {
                Err(Error::invalid("switching maps with a free function are not supported here; drop free_function"))
            }
            _ => Err(Error::invalid("this operation needs a mapping of the reference square")),
        }
    }
}

impl PointMap {
    pub fn forward(&self, p: RealPoint2) -> Result<RealPoint2> {
        match self {
            PointMap::Square(m) => m.forward(p),
            PointMap::SwitchingTfc { map, g } => map.apply_tfc(|z| g(z), p.to_complex()).map(RealPoint2::from_complex),
            PointMap::Triangle(m) => Ok(m.apply(p, Direction::ZtoW)),
            PointMap::Elementary(chain) => {
                let mut z = p.to_complex();
                for m in chain {
                    z = m.apply(z)?;
                }
                Ok(RealPoint2::from_complex(z))
            }
        }
    }

    /// Closed-form inverse where one exists.
    pub fn inverse(&self, w: RealPoint2) -> Option<Result<RealPoint2>> {
        match self {
            PointMap::Square(m) => m.exact_inverse(w),
            PointMap::Triangle(m) => Some(Ok(m.apply(w, Direction::WtoZ))),
            PointMap::Elementary(chain) => {
                let mut z = w.to_complex();
                for m in chain.iter().rev() {
                    z = match m {
                        ElementaryMap::Mobius(mb) => match mb.inverse().apply(z) {
                            Ok(v) => v,
                            Err(e) => return Some(Err(e)),
                        },
                        ElementaryMap::Translation { shift } => z - shift,
                        ElementaryMap::Rotation { phi } => z * ComplexPoint::from_polar(1.0, -phi),
                        ElementaryMap::Scaling { rho } => z / rho,
                        ElementaryMap::Affine { alpha, beta } => (z - beta) / alpha,
                        _ => return None,
                    };
                }
                Some(Ok(RealPoint2::from_complex(z)))
            }
            PointMap::SwitchingTfc { .. } => None,
        }
    }
}

/// Piece expression: ascending polynomial coefficients or a function name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PieceExpr {
    Polynomial(Vec<f64>),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPiece {
    pub expr: PieceExpr,
    pub range: [f64; 2],
}

/// Parses and builds a piecewise boundary document.
pub fn boundary_from_json(text: &str) -> Result<PiecewiseBoundary> {
    let pieces: Vec<BoundaryPiece> =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("boundary document: {e}")))?;
    build_boundary(&pieces)
}

pub fn build_boundary(pieces: &[BoundaryPiece]) -> Result<PiecewiseBoundary> {
    if pieces.is_empty() {
        return Err(Error::invalid("boundary document has no pieces"));
    }
    let parts = pieces
        .iter()
        .map(|p| {
            let seg: Segment = match &p.expr {
                PieceExpr::Polynomial(c) if c.is_empty() => {
                    return Err(Error::invalid("polynomial piece needs at least one coefficient"))
                }
                PieceExpr::Polynomial(c) => polynomial_segment(c.clone()),
                PieceExpr::Named(name) => registry::scalar_fn(name)?,
            };
            Ok((seg, p.range))
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseBoundary::from_ranges(parts)
}
