//! Heaviside merging of piecewise boundary data into one function, and the
//! one-boundary constrained functional on `[-1, 1]²`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::RealPoint2;

/// Shared scalar segment function.
pub type Segment = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Step function with `H(0) = 1`, so a breakpoint belongs to the segment on
/// its right.
pub fn heaviside(x: f64) -> f64 {
    if x < 0.0 {
        0.0
    } else {
        1.0
    }
}

/// Polynomial segment `Σ c_k x^k` (ascending coefficients).
pub fn polynomial_segment(coeffs: Vec<f64>) -> Segment {
    Arc::new(move |x| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c))
}

/// `n` contiguous segments on `x_1 < … < x_{n+1}`.
#[derive(Clone)]
pub struct PiecewiseBoundary {
    breakpoints: Vec<f64>,
    segments: Vec<Segment>,
}

impl fmt::Debug for PiecewiseBoundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiecewiseBoundary")
            .field("breakpoints", &self.breakpoints)
            .field("segments", &self.segments.len())
            .finish()
    }
}

impl PiecewiseBoundary {
    pub fn new(breakpoints: Vec<f64>, segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::invalid("piecewise boundary needs at least one segment"));
        }
        if breakpoints.len() != segments.len() + 1 {
            return Err(Error::invalid(format!(
                "{} segments need {} breakpoints, got {}",
                segments.len(),
                segments.len() + 1,
                breakpoints.len()
            )));
        }
        if breakpoints.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("breakpoints must be finite"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("breakpoints must be strictly increasing"));
        }
        Ok(Self { breakpoints, segments })
    }

    /// Builds from `(segment, [lo, hi])` pairs that must tile an interval.
    pub fn from_ranges(parts: Vec<(Segment, [f64; 2])>) -> Result<Self> {
        let mut breakpoints = Vec::with_capacity(parts.len() + 1);
        let mut segments = Vec::with_capacity(parts.len());
        for (k, (seg, [lo, hi])) in parts.into_iter().enumerate() {
            match breakpoints.last() {
                None => breakpoints.push(lo),
                Some(&prev) if prev != lo => {
                    return Err(Error::invalid(format!(
                        "segment {k} starts at {lo} but the previous one ends at {prev}"
                    )))
                }
                _ => {}
            }
            breakpoints.push(hi);
            segments.push(seg);
        }
        Self::new(breakpoints, segments)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn domain(&self) -> [f64; 2] {
        [self.breakpoints[0], *self.breakpoints.last().unwrap()]
    }

    pub fn segment(&self, k: usize) -> &Segment {
        &self.segments[k]
    }

    /// Index of the segment owning `x` (right ownership at breakpoints, the
    /// final end point belongs to the last segment).
    pub fn active_segment(&self, x: f64) -> Option<usize> {
        let [lo, hi] = self.domain();
        if !(lo..=hi).contains(&x) {
            return None;
        }
        let k = self.breakpoints[1..].partition_point(|&b| b <= x);
        Some(k.min(self.len() - 1))
    }
}

/// Four-segment example on `[-1, 1]` with a jump at `x = 0`:
/// `−1 − 2x`, `1 + 4(1 + x)x`, `sin(5πx)`, `4(1 − x)x`.
pub fn four_segment_example() -> PiecewiseBoundary {
    use std::f64::consts::PI;
    let segments: Vec<Segment> = vec![
        Arc::new(|x| -1.0 - 2.0 * x),
        Arc::new(|x| 1.0 + 4.0 * (1.0 + x) * x),
        Arc::new(|x| (5.0 * PI * x).sin()),
        Arc::new(|x| 4.0 * (1.0 - x) * x),
    ];
    PiecewiseBoundary::new(vec![-1.0, -0.5, 0.0, 0.5, 1.0], segments).expect("valid example")
}

/// Single function `f(x) = f_1 + Σ_k H(x − x_k)(f_k − f_{k−1})`.
#[derive(Debug, Clone)]
pub struct MergedBoundary {
    pieces: PiecewiseBoundary,
}

/// Merges a piecewise boundary into one callable.
pub fn merge(pieces: &PiecewiseBoundary) -> MergedBoundary {
    MergedBoundary { pieces: pieces.clone() }
}

impl MergedBoundary {
    pub fn pieces(&self) -> &PiecewiseBoundary {
        &self.pieces
    }

    pub fn domain(&self) -> [f64; 2] {
        self.pieces.domain()
    }

    /// Evaluates the Heaviside sum. Every segment is evaluated at `x`; each
    /// step is applied as `(1 − H)·acc + H·f_k`, which equals adding
    /// `H·(f_k − f_{k−1})` but leaves the active segment's value untouched.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let [lo, hi] = self.domain();
        if !x.is_finite() || x < lo || x > hi {
            return Err(Error::OutOfDomain(format!("x = {x} outside [{lo}, {hi}]")));
        }
        let mut acc = 0.0;
        for (k, seg) in self.pieces.segments.iter().enumerate() {
            let fk = seg(x);
            if !fk.is_finite() {
                return Err(Error::NonFinite(format!("segment {k} is not finite at x = {x}")));
            }
            let h = if k == 0 { 1.0 } else { heaviside(x - self.pieces.breakpoints[k]) };
            if h == 1.0 {
                acc = fk;
            }
        }
        Ok(acc)
    }

    /// `(x, f(x))` on `n` evenly spaced points of the domain.
    pub fn sample(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        if n < 2 {
            return Err(Error::invalid("need at least 2 sample points"));
        }
        let [lo, hi] = self.domain();
        (0..n)
            .map(|i| {
                let x = if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
                self.eval(x).map(|f| (x, f))
            })
            .collect()
    }
}

/// `g(x, y) + (1 − y)/2 · (f(x) − g(x, −1))`: equals `f` on `y = −1` for any `g`.
pub fn tfc_one_boundary<G>(f: &MergedBoundary, g: G, pt: RealPoint2) -> Result<f64>
where
    G: Fn(f64, f64) -> f64,
{
    let (x, y) = (pt.u, pt.v);
    let fx = f.eval(x)?;
    let g_xy = g(x, y);
    let g_edge = g(x, -1.0);
    if !g_xy.is_finite() || !g_edge.is_finite() {
        return Err(Error::NonFinite(format!("free function not finite near ({x}, {y})")));
    }
    Ok(g_xy + 0.5 * (1.0 - y) * (fx - g_edge))
}
