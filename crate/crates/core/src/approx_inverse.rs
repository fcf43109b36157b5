//! Least-squares approximate inverse `ẑ = Σ ξ_k ψ_k(w)` for forward maps
//! without a closed-form inverse, plus Monte Carlo accuracy statistics.
//!
//! Samples of the forward map are rescaled so that the `w` points fill
//! `[-1, 1]²`, then fitted with Chebyshev polynomials. Two bases are
//! available:
//!
//! * [`InverseBasis::ComplexChebyshev`]: `ψ_k(w) = T_k(s)` evaluated at the
//!   complex rescaled argument `s` (default);
//! * [`InverseBasis::TensorChebyshev`]: `ψ_k(w) = T_i(s_x) T_j(s_y)`
//!   ordered by total degree, which fits `a` and `b` independently.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebyshev;
use crate::error::{Error, Result};
use crate::geometry::{rescale_to_unit, AffineRescale, ComplexPoint};
use crate::linalg::{self, CMatrix, CVector};

/// Design matrices above this condition number count as rank deficient.
pub const MAX_DESIGN_CONDITION: f64 = 1e13;
/// Number of histogram bins in [`ErrorStats`].
pub const HISTOGRAM_BINS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseBasis {
    #[default]
    ComplexChebyshev,
    TensorChebyshev,
}

impl InverseBasis {
    /// Basis values `ψ_0..ψ_{k−1}` at a rescaled argument.
    pub fn values(self, s: ComplexPoint, k: usize) -> Vec<ComplexPoint> {
        match self {
            InverseBasis::ComplexChebyshev => chebyshev::values_complex(s, k),
            InverseBasis::TensorChebyshev => {
                let idx = tensor_indices(k);
                let deg = idx.iter().map(|&(i, j)| i.max(j)).max().unwrap_or(0) + 1;
                let tx = chebyshev::values(s.re, deg);
                let ty = chebyshev::values(s.im, deg);
                idx.iter().map(|&(i, j)| ComplexPoint::new(tx[i] * ty[j], 0.0)).collect()
            }
        }
    }
}

/// First `k` index pairs `(i, j)` of `T_i(x) T_j(y)` in graded order:
/// `(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), …`.
pub fn tensor_indices(k: usize) -> Vec<(usize, usize)> {
    (0..).flat_map(|d: usize| (0..=d).rev().map(move |i| (i, d - i))).take(k).collect()
}

/// Fitted approximate inverse map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxInverseModel {
    basis: InverseBasis,
    prescale: AffineRescale,
    xi: Vec<ComplexPoint>,
    n_samples: usize,
    residual_rms: f64,
    condition: f64,
}

impl ApproxInverseModel {
    /// Least-squares fit of `z ≈ Σ ξ_k ψ_k(prescale(w))` over paired samples
    /// of a bijective forward map.
    pub fn fit(z_samples: &[ComplexPoint], w_samples: &[ComplexPoint], k: usize, basis: InverseBasis) -> Result<Self> {
        let n = z_samples.len();
        if w_samples.len() != n {
            return Err(Error::invalid(format!("need paired samples ({n} z values vs {} w values)", w_samples.len())));
        }
        if k == 0 {
            return Err(Error::invalid("basis count K must be at least 1"));
        }
        if n < k {
            return Err(Error::invalid(format!("need N ≥ K samples (N = {n}, K = {k})")));
        }
        if z_samples.iter().chain(w_samples).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid("samples must be finite"));
        }
        let (prescale, scaled) = rescale_to_unit(w_samples)?;
        let rows: Vec<Vec<ComplexPoint>> = scaled.iter().map(|&s| basis.values(s, k)).collect();
        let design = CMatrix::from_fn(n, k, |i, j| rows[i][j]);
        let rhs = CVector::from_column_slice(z_samples);
        let (xi, condition) =
            linalg::least_squares(&design, &rhs, MAX_DESIGN_CONDITION, "approximate inverse design matrix")?;
        let mut model =
            Self { basis, prescale, xi: xi.iter().copied().collect(), n_samples: n, residual_rms: 0.0, condition };
        model.residual_rms = model.rms_residual(z_samples, w_samples);
        Ok(model)
    }

    /// Samples `forward` on an `n × n` lattice of `[-1, 1]²` and fits.
    pub fn fit_grid<F>(forward: F, n: usize, k: usize, basis: InverseBasis) -> Result<Self>
    where
        F: Fn(ComplexPoint) -> Result<ComplexPoint>,
    {
        if n < 2 {
            return Err(Error::invalid("fit grid needs at least 2 points per axis"));
        }
        let step = 2.0 / (n - 1) as f64;
        let z: Vec<ComplexPoint> = (0..n)
            .flat_map(|j| (0..n).map(move |i| ComplexPoint::new(-1.0 + step * i as f64, -1.0 + step * j as f64)))
            .collect();
        let w = z.iter().map(|&zi| forward(zi)).collect::<Result<Vec<_>>>()?;
        Self::fit(&z, &w, k, basis)
    }

    /// `ẑ(w) = Σ ξ_k ψ_k(prescale(w))`.
    pub fn evaluate(&self, w: ComplexPoint) -> ComplexPoint {
        let s = self.prescale.apply(w);
        self.basis.values(s, self.xi.len()).iter().zip(&self.xi).map(|(p, x)| p * x).sum()
    }

    /// Root-mean-square of `|ẑ(w_i) − z_i|` over the given samples.
    pub fn rms_residual(&self, z_samples: &[ComplexPoint], w_samples: &[ComplexPoint]) -> f64 {
        let sum: f64 = z_samples.iter().zip(w_samples).map(|(&z, &w)| (self.evaluate(w) - z).norm_sqr()).sum();
        (sum / z_samples.len().max(1) as f64).sqrt()
    }

    pub fn k(&self) -> usize {
        self.xi.len()
    }

    pub fn basis(&self) -> InverseBasis {
        self.basis
    }

    pub fn prescale(&self) -> AffineRescale {
        self.prescale
    }

    pub fn xi(&self) -> &[ComplexPoint] {
        &self.xi
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    /// RMS residual over the fit samples, recorded at fit time.
    pub fn residual_rms(&self) -> f64 {
        self.residual_rms
    }

    /// Condition number of the design matrix.
    pub fn condition(&self) -> f64 {
        self.condition
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    /// Left edge of the bin.
    pub bin_edge: f64,
    pub count: u64,
}

/// Summary of inverse-map errors `|z − ẑ(f(z))|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    pub n_samples: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub sigma: f64,
    pub three_sigma: f64,
    pub max: f64,
    pub histogram: Vec<HistogramBin>,
}

impl ErrorStats {
    pub fn from_errors(errors: &[f64]) -> Self {
        let n = errors.len();
        let mean = if n == 0 { 0.0 } else { errors.iter().sum::<f64>() / n as f64 };
        let var = if n == 0 { 0.0 } else { errors.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / n as f64 };
        let sigma = var.sqrt();
        let max = errors.iter().cloned().fold(0.0_f64, f64::max);
        let width = max / HISTOGRAM_BINS as f64;
        let mut counts = vec![0_u64; HISTOGRAM_BINS];
        for &e in errors {
            let bin = if width > 0.0 { ((e / width) as usize).min(HISTOGRAM_BINS - 1) } else { 0 };
            counts[bin] += 1;
        }
        let histogram = counts
            .into_iter()
            .enumerate()
            .map(|(i, count)| HistogramBin { bin_edge: i as f64 * width, count })
            .collect();
        Self { n_samples: n, mean, sigma, three_sigma: 3.0 * sigma, max, histogram }
    }
}

/// Words of ChaCha output consumed per Monte Carlo sample (two `f64`).
const WORDS_PER_SAMPLE: u128 = 4;

/// Sample `index` of the uniform `[-1, 1]²` stream for `seed`.
///
/// Each sample reads its own slice of the keystream, so results do not
/// depend on evaluation order or thread count.
pub fn reference_sample(seed: u64, index: u64) -> ComplexPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(index as u128 * WORDS_PER_SAMPLE);
    let a = rng.gen_range(-1.0..1.0);
    let b = rng.gen_range(-1.0..1.0);
    ComplexPoint::new(a, b)
}

/// Draws `n` uniform points of `[-1, 1]²`, pushes them through `forward`
/// and the model, and summarises `|z − ẑ(forward(z))|`.
pub fn monte_carlo<F>(model: &ApproxInverseModel, forward: F, n: usize, seed: u64) -> Result<ErrorStats>
where
    F: Fn(ComplexPoint) -> Result<ComplexPoint> + Sync,
{
    if n == 0 {
        return Err(Error::invalid("Monte Carlo needs at least one sample"));
    }
    let errors = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let z = reference_sample(seed, i);
            forward(z).map(|w| (z - model.evaluate(w)).norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ErrorStats::from_errors(&errors))
}
