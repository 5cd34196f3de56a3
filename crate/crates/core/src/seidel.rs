//! Seidel block matrices of plane symmetries.
//!
//! `S` has q x q blocks of size 2: zero on the diagonal and the reflection
//! `s_{theta chi(a - b)}` at (a, b). With `cos 2 theta = (2 - k)/(k - 1)`
//! it squares to `(2k - 2) I`, so its spectrum is `±sqrt(2k - 2)` with
//! equal multiplicities.

use nalgebra::{DMatrix, Matrix2};

use crate::conference::{check_permutation, critical_theta, ConferenceMatrix};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};
use crate::linalg::{max_abs2, max_abs_real, reflection_from, rotation};

/// Largest `S^2` residual accepted by [`eigen_structure`].
pub const INVOLUTION_TOL: f64 = 1e-10;
/// Largest distance of a projector trace from an integer.
pub const TRACE_TOL: f64 = 1e-8;

/// A plane rotation `r_angle`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation2 {
    pub angle: f64,
}

impl Rotation2 {
    pub fn new(angle: f64) -> Self {
        Self { angle }
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        rotation(self.angle)
    }

    pub fn inverse(&self) -> Self {
        Self { angle: -self.angle }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeidelMatrix {
    q: usize,
    k: usize,
    theta: f64,
    /// Row-major q x q.
    blocks: Vec<Matrix2<f64>>,
    dense: DMatrix<f64>,
}

impl SeidelMatrix {
    /// Assembles a matrix from `q * q` row-major blocks.
    pub fn from_blocks(q: usize, theta: f64, blocks: Vec<Matrix2<f64>>) -> Result<Self> {
        if blocks.len() != q * q || q.is_multiple_of(2) {
            return Err(Error::InvalidShape {
                rows: 2 * q,
                cols: blocks.len() / q.max(1) * 2,
            });
        }
        let dense = DMatrix::from_fn(2 * q, 2 * q, |i, j| blocks[(i / 2) * q + j / 2][(i % 2, j % 2)]);
        Ok(Self {
            q,
            k: q.div_ceil(2),
            theta,
            blocks,
            dense,
        })
    }

    /// Splits a dense `2q x 2q` matrix into blocks.
    pub fn from_dense(dense: DMatrix<f64>, theta: f64) -> Result<Self> {
        let (rows, cols) = dense.shape();
        if rows != cols || rows % 2 != 0 || (rows / 2) % 2 == 0 {
            return Err(Error::InvalidShape { rows, cols });
        }
        let q = rows / 2;
        let blocks = (0..q * q)
            .map(|n| {
                let (a, b) = (n / q, n % q);
                dense.fixed_view::<2, 2>(2 * a, 2 * b).into_owned()
            })
            .collect();
        Self::from_blocks(q, theta, blocks)
    }

    /// Number of blocks per row.
    pub fn order(&self) -> usize {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn block(&self, a: usize, b: usize) -> &Matrix2<f64> {
        &self.blocks[a * self.q + b]
    }

    pub fn dense(&self) -> &DMatrix<f64> {
        &self.dense
    }

    pub fn trace(&self) -> f64 {
        self.dense.trace()
    }

    pub fn is_symmetric(&self) -> bool {
        self.dense == self.dense.transpose()
    }

    /// Largest deviation from the Seidel shape: zero diagonal blocks and
    /// orthogonal off-diagonal blocks.
    pub fn structure_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.q {
            for b in 0..self.q {
                let m = self.block(a, b);
                let d = if a == b {
                    max_abs2(m)
                } else {
                    max_abs2(&(m.transpose() * m - Matrix2::identity()))
                };
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Moves block (a, b) to (sigma[a], sigma[b]).
    pub fn permute_blocks(&self, sigma: &[usize]) -> Result<Self> {
        check_permutation(sigma, self.q)?;
        let mut blocks = vec![Matrix2::zeros(); self.q * self.q];
        for a in 0..self.q {
            for b in 0..self.q {
                blocks[sigma[a] * self.q + sigma[b]] = *self.block(a, b);
            }
        }
        Self::from_blocks(self.q, self.theta, blocks)
    }

    fn map_blocks(&self, f: impl Fn(usize, usize, &Matrix2<f64>) -> Matrix2<f64>) -> Self {
        let blocks = (0..self.q * self.q)
            .map(|n| {
                let (a, b) = (n / self.q, n % self.q);
                f(a, b, self.block(a, b))
            })
            .collect();
        Self::from_blocks(self.q, self.theta, blocks).expect("shape is unchanged")
    }
}

/// Builds `S` over `ctx`, which must have order `2k - 1`, `k >= 3`, and be 1 mod 4.
pub fn build_seidel(ctx: &FieldCtx, k: usize) -> Result<SeidelMatrix> {
    let q = ctx.order();
    let theta = critical_theta(k as i64)?;
    if q != 2 * k - 1 {
        return Err(Error::OrderMismatch { q, k });
    }
    if q % 4 != 1 {
        return Err(Error::NotSymmetrizable(q));
    }
    let chi = ctx.chi_table();
    let (sin, cos) = theta.sin_cos();
    let blocks = (0..q * q)
        .map(|n| match chi[ctx.sub_index(n / q, n % q)] {
            0 => Matrix2::zeros(),
            c => reflection_from(cos, f64::from(c) * sin),
        })
        .collect();
    SeidelMatrix::from_blocks(q, theta, blocks)
}

/// `max |S S - (2k - 2) I|`.
pub fn verify_seidel_square(s: &SeidelMatrix) -> f64 {
    let n = 2 * s.q;
    let target = DMatrix::<f64>::identity(n, n) * (2.0 * s.k as f64 - 2.0);
    max_abs_real(&(&s.dense * &s.dense - target))
}

/// `sum over a != 0, -b of r_{theta (chi(a) - chi(a + b))}`.
///
/// For any theta this equals `(k - 2 + (k - 1) cos 2 theta) I`; see
/// [`rotation_sum_expected`].
pub fn rotation_sum_check(ctx: &FieldCtx, theta: f64, b: &FieldElement) -> Result<Matrix2<f64>> {
    if b.is_zero() {
        return Err(Error::InvalidShift);
    }
    let zero = ctx.zero();
    let minus_b = ctx.neg(b);
    Ok(ctx
        .elements()
        .iter()
        .filter(|a| **a != zero && **a != minus_b)
        .map(|a| {
            let e = ctx.legendre_chi(a) - ctx.legendre_chi(&ctx.add(a, b));
            rotation(theta * f64::from(e))
        })
        .sum())
}

/// The scalar `k - 2 + (k - 1) cos 2 theta`.
pub fn rotation_sum_expected(k: usize, theta: f64) -> f64 {
    let k = k as f64;
    k - 2.0 + (k - 1.0) * (2.0 * theta).cos()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenStructure {
    /// `(eigenvalue, multiplicity)`, positive first.
    pub pairs: [(f64, usize); 2],
    /// Raw projector traces before rounding.
    pub traces: [f64; 2],
}

/// Eigenvalues and multiplicities of an `S` with `S^2 = (2k - 2) I`.
///
/// Multiplicities are the traces of `P± = (I ± S / sqrt(2k - 2)) / 2`.
pub fn eigen_structure(s: &SeidelMatrix) -> Result<EigenStructure> {
    let residual = verify_seidel_square(s);
    if residual > INVOLUTION_TOL {
        return Err(Error::NotInvolutory(residual));
    }
    let n = 2 * s.q;
    let mu = (2.0 * s.k as f64 - 2.0).sqrt();
    let id = DMatrix::<f64>::identity(n, n);
    let scaled = &s.dense / mu;
    let plus = (&id + &scaled) * 0.5;
    let minus = (&id - &scaled) * 0.5;
    let traces = [plus.trace(), minus.trace()];
    let mut mult = [0usize; 2];
    for (m, t) in mult.iter_mut().zip(traces) {
        let r = t.round();
        if (t - r).abs() > TRACE_TOL || r < 0.0 {
            return Err(Error::NotInvolutory(t - r));
        }
        *m = r as usize;
    }
    Ok(EigenStructure {
        pairs: [(mu, mult[0]), (-mu, mult[1])],
        traces,
    })
}

/// Conjugates block row/column j by `S_{j1}` so the first block row and
/// column become identities. Orthogonal blocks stay orthogonal; the
/// off-diagonal ones away from the first row turn into rotations.
pub fn normalize_seidel(s: &SeidelMatrix) -> SeidelMatrix {
    let gauge: Vec<Matrix2<f64>> = (0..s.q)
        .map(|j| if j == 0 { Matrix2::identity() } else { *s.block(j, 0) })
        .collect();
    s.map_blocks(|a, b, m| gauge[a].transpose() * m * gauge[b])
}

/// Seidel-side image of scaling row and column `index` of the conference
/// matrix by `e^{i eta}`: block row `index` is multiplied on the left by
/// `r_eta`, block column `index` on the right by `r_{-eta}`.
pub fn transport_scaling(s: &SeidelMatrix, index: usize, eta: f64) -> Result<SeidelMatrix> {
    if index >= s.q {
        return Err(Error::InvalidIndex { index, order: s.q });
    }
    let left = rotation(eta);
    let right = rotation(-eta);
    Ok(s.map_blocks(|a, b, m| {
        let mut out = *m;
        if a == index {
            out = left * out;
        }
        if b == index {
            out *= right;
        }
        out
    }))
}

/// `r_{eta/2} m r_{-eta/2}`. On a reflection `s_theta` this gives `s_{theta + eta}`.
pub fn conjugate_half_angle(m: &Matrix2<f64>, eta: f64) -> Matrix2<f64> {
    rotation(eta / 2.0) * m * rotation(-eta / 2.0)
}

/// Tolerance on `| |z| - 1 |` for off-diagonal entries.
pub const UNIMODULAR_TOL: f64 = 1e-10;

/// Replaces each off-diagonal `e^{i phi}` by `s_phi` and each diagonal zero
/// by the 2 x 2 zero block.
pub fn seidel_from_conference(c: &ConferenceMatrix) -> Result<SeidelMatrix> {
    let q = c.order();
    let v = c.values();
    let mut blocks = Vec::with_capacity(q * q);
    for a in 0..q {
        for b in 0..q {
            let z = v[(a, b)];
            if a == b {
                if z.norm() != 0.0 {
                    return Err(Error::NonZeroDiagonal(a));
                }
                blocks.push(Matrix2::zeros());
            } else {
                if (z.norm() - 1.0).abs() > UNIMODULAR_TOL {
                    return Err(Error::NotUnimodular { row: a, col: b });
                }
                blocks.push(reflection_from(z.re, z.im));
            }
        }
    }
    SeidelMatrix::from_blocks(q, c.omega().arg(), blocks)
}
