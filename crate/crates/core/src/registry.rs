//! Named built-in functions selectable from configuration files.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::boundary_tools::Segment;
use crate::error::{Error, Result};
use crate::geometry::{ComplexPoint, RealPoint2};
use crate::tfc_pipeline::Field;

/// Shared complex function.
pub type ComplexFn = Arc<dyn Fn(ComplexPoint) -> ComplexPoint + Send + Sync>;

/// Complex free functions: `zero`, `sin3z2cos` = `sin(3z/2) + cos(3z/2)`,
/// `sinz2exp` = `sin(z²) e^{−z²}`.
pub const COMPLEX_NAMES: [&str; 3] = ["zero", "sin3z2cos", "sinz2exp"];

/// Bivariate real functions: `zero`, `sin5x_exp` = `sin(5x) e^{x cos 5x}`,
/// `sinx_cosy` = `sin x cos y`, `one`, `xy` = `x·y`.
pub const FIELD_NAMES: [&str; 5] = ["zero", "sin5x_exp", "sinx_cosy", "one", "xy"];

/// Univariate real functions: `zero`, `sin5pix` = `sin(5πx)`, `sin5x_exp`,
/// `sin`, `cos`, `exp`.
pub const SCALAR_NAMES: [&str; 6] = ["zero", "sin5pix", "sin5x_exp", "sin", "cos", "exp"];

fn unknown(kind: &str, name: &str, known: &[&str]) -> Error {
    Error::InvalidInput(format!("unknown {kind} function '{name}' (known: {})", known.join(", ")))
}

pub fn complex_fn(name: &str) -> Result<ComplexFn> {
    Ok(match name {
        "zero" => Arc::new(|_| ComplexPoint::new(0.0, 0.0)),
        "sin3z2cos" => Arc::new(|z: ComplexPoint| (1.5 * z).sin() + (1.5 * z).cos()),
        "sinz2exp" => Arc::new(|z: ComplexPoint| {
            let z2 = z * z;
            z2.sin() * (-z2).exp()
        }),
        _ => return Err(unknown("complex", name, &COMPLEX_NAMES)),
    })
}

pub fn field_fn(name: &str) -> Result<Field> {
    Ok(match name {
        "zero" => Arc::new(|_| 0.0),
        "one" => Arc::new(|_| 1.0),
        "sin5x_exp" => Arc::new(|p: RealPoint2| sin5x_exp(p.u)),
        "sinx_cosy" => Arc::new(|p: RealPoint2| p.u.sin() * p.v.cos()),
        "xy" => Arc::new(|p: RealPoint2| p.u * p.v),
        _ => return Err(unknown("bivariate", name, &FIELD_NAMES)),
    })
}

pub fn scalar_fn(name: &str) -> Result<Segment> {
    Ok(match name {
        "zero" => Arc::new(|_| 0.0),
        "sin5pix" => Arc::new(|x: f64| (5.0 * PI * x).sin()),
        "sin5x_exp" => Arc::new(sin5x_exp),
        "sin" => Arc::new(f64::sin),
        "cos" => Arc::new(f64::cos),
        "exp" => Arc::new(f64::exp),
        _ => return Err(unknown("scalar", name, &SCALAR_NAMES)),
    })
}

fn sin5x_exp(x: f64) -> f64 {
    (5.0 * x).sin() * (x * (5.0 * x).cos()).exp()
}
