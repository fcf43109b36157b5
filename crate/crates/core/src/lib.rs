//! Mappings between the reference square `[-1, 1]²` and general planar
//! domains, for building functions that satisfy boundary constraints
//! exactly on those domains.
//!
//! * [`complex_map`]: elementary complex maps, Möbius maps and n-point
//!   switching (Vandermonde) maps with an optional free function.
//! * [`projection_map`]: ray-rescaling maps between star-shaped polygons,
//!   single or multi-region, with exact inverses.
//! * [`polynomial_map`]: 3-, 4- and 8-node isoparametric maps.
//! * [`approx_inverse`]: least-squares Chebyshev inverses and Monte Carlo
//!   accuracy statistics.
//! * [`boundary_tools`]: Heaviside merging of piecewise boundary data.
//! * [`tfc_pipeline`]: Coons-patch surfaces with embedded Dirichlet data.

pub mod approx_inverse;
pub mod boundary_tools;
pub mod chebyshev;
pub mod complex_map;
pub mod config;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod polynomial_map;
pub mod projection_map;
pub mod registry;
pub mod tfc_pipeline;

pub use error::{Error, Result};
pub use geometry::{BoundingBox, ComplexPoint, PolygonBoundary, RealPoint2};
