//! JSON document describing a constrained surface problem.

use serde::Deserialize;

use tfc_map::approx_inverse::InverseBasis;
use tfc_map::config::MapConfig;
use tfc_map::registry;
use tfc_map::tfc_pipeline::{DomainSpec, Field, InverseMap, SurfaceOptions, DEFAULT_EDGE_SAMPLES, DEFAULT_FIT_DEGREE};

use crate::commands::CliResult;
use crate::Failure;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum BoundaryDoc {
    /// Same field on all four edges.
    One(String),
    /// Bottom, right, top, left.
    Four([String; 4]),
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InverseDoc {
    Exact,
    Approximate {
        #[serde(default = "default_k")]
        k: usize,
        #[serde(default = "default_grid")]
        grid: usize,
        #[serde(default)]
        basis: InverseBasis,
    },
}

fn default_k() -> usize {
    20
}

fn default_grid() -> usize {
    21
}

fn default_samples() -> usize {
    DEFAULT_EDGE_SAMPLES
}

fn default_degree() -> usize {
    DEFAULT_FIT_DEGREE
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDoc {
    pub mapping: MapConfig,
    pub boundary: BoundaryDoc,
    /// Exact when the mapping has a closed-form inverse, fitted otherwise.
    #[serde(default)]
    pub inverse: Option<InverseDoc>,
    #[serde(default = "default_samples")]
    pub samples_per_edge: usize,
    #[serde(default = "default_degree")]
    pub max_degree: usize,
    #[serde(default, rename = "note")]
    _note: Option<String>,
}

impl SurfaceDoc {
    pub fn build(&self) -> CliResult<(DomainSpec, SurfaceOptions)> {
        let mapping = self.mapping.build_square()?;
        let inverse = match &self.inverse {
            Some(InverseDoc::Exact) => InverseMap::Exact,
            None if mapping.has_exact_inverse() => InverseMap::Exact,
            None => {
                InverseMap::Approximate(mapping.fit_inverse(default_grid(), default_k(), InverseBasis::default())?)
            }
            Some(InverseDoc::Approximate { k, grid, basis }) => {
                InverseMap::Approximate(mapping.fit_inverse(*grid, *k, *basis)?)
            }
        };
        let field = |name: &str| -> CliResult<Field> { Ok(registry::field_fn(name)?) };
        let boundary: [Field; 4] = match &self.boundary {
            BoundaryDoc::One(name) => {
                let f = field(name)?;
                [f.clone(), f.clone(), f.clone(), f]
            }
            BoundaryDoc::Four([b, r, t, l]) => [field(b)?, field(r)?, field(t)?, field(l)?],
        };
        if self.max_degree == 0 {
            return Err(Failure::Invalid("max_degree must be at least 1".into()));
        }
        let spec = DomainSpec::new(mapping, inverse, boundary, None)?;
        Ok((spec, SurfaceOptions { samples_per_edge: self.samples_per_edge, max_degree: self.max_degree }))
    }
}
