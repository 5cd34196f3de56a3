//! Small dense helpers shared by the verifiers.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

/// Largest entry modulus; 0 for an empty matrix.
pub fn max_abs_complex(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn max_abs2(m: &Matrix2<f64>) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// The rotation `r_phi`.
pub fn rotation(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// The plane symmetry `s_phi = [[cos, sin], [sin, -cos]]`.
pub fn reflection(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    reflection_from(c, s)
}

/// `s_phi` from precomputed `(cos phi, sin phi)`.
pub fn reflection_from(cos: f64, sin: f64) -> Matrix2<f64> {
    Matrix2::new(cos, sin, sin, -cos)
}
