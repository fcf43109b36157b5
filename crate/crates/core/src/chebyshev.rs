//! Chebyshev polynomials of the first kind by three-term recurrence.

use num_complex::Complex64;

/// `[T_0(s), …, T_{k−1}(s)]` at a complex argument.
pub fn values_complex(s: Complex64, k: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(k);
    if k == 0 {
        return out;
    }
    out.push(Complex64::new(1.0, 0.0));
    if k > 1 {
        out.push(s);
    }
    for n in 2..k {
        let next = 2.0 * s * out[n - 1] - out[n - 2];
        out.push(next);
    }
    out
}

/// `[T_0(x), …, T_{k−1}(x)]` at a real argument.
pub fn values(x: f64, k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k);
    if k == 0 {
        return out;
    }
    out.push(1.0);
    if k > 1 {
        out.push(x);
    }
    for n in 2..k {
        let next = 2.0 * x * out[n - 1] - out[n - 2];
        out.push(next);
    }
    out
}

/// `Σ c_k T_k(x)` by Clenshaw's recurrence.
pub fn eval_series(coeffs: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    coeffs.first().copied().unwrap_or(0.0) + x * b1 - b2
}

/// Chebyshev–Gauss–Lobatto abscissae `cos(kπ/(n−1))`, ascending, endpoints
/// included.
pub fn lobatto_nodes(n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|k| -(std::f64::consts::PI * k as f64 / (n - 1) as f64).cos()).collect(),
    }
}
