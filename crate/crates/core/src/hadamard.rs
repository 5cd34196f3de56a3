//! Complex Hadamard matrices of order 2n by doubling a symmetric
//! conference matrix of order n:
//!
//! ```text
//! H = [ C + I    C* - I ]
//!     [ C - I   -C* - I ]
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::conference::{verify_conference_numeric, ConferenceMatrix};
use crate::error::{Error, Result};
use crate::linalg::max_abs_complex;

/// Largest conference residual [`double`] accepts.
pub const CONFERENCE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct HadamardMatrix {
    values: DMatrix<Complex64>,
}

impl HadamardMatrix {
    /// Wraps an arbitrary square matrix for verification.
    pub fn from_values(values: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = values.shape();
        if rows != cols {
            return Err(Error::InvalidShape { rows, cols });
        }
        Ok(Self { values })
    }

    pub fn order(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &DMatrix<Complex64> {
        &self.values
    }
}

pub fn double(c: &ConferenceMatrix) -> Result<HadamardMatrix> {
    let residual = verify_conference_numeric(c);
    if residual > CONFERENCE_TOL || !c.is_symmetric() {
        return Err(Error::NotConference(residual));
    }
    let n = c.order();
    let one = Complex64::new(1.0, 0.0);
    let id = DMatrix::<Complex64>::identity(n, n);
    let cv = c.values();
    let cs = c.adjoint();

    let mut h = DMatrix::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&(cv + &id));
    h.view_mut((0, n), (n, n)).copy_from(&(&cs - &id));
    h.view_mut((n, 0), (n, n)).copy_from(&(cv - &id));
    h.view_mut((n, n), (n, n)).copy_from(&(-&cs - &id));
    debug_assert!(h.diagonal().iter().take(n).all(|z| *z == one));
    Ok(HadamardMatrix { values: h })
}

/// Max of the worst `| |h_ij| - 1 |` and `max |H H^* - 2n I|`.
pub fn verify_hadamard(h: &HadamardMatrix) -> f64 {
    let n = h.order();
    let unimodular = h.values.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    let target = DMatrix::<Complex64>::identity(n, n) * Complex64::new(n as f64, 0.0);
    let gram = &h.values * h.values.adjoint();
    unimodular.max(max_abs_complex(&(gram - target)))
}
