//! Equi-isoclinic plane tuples recovered from a Seidel matrix.
//!
//! `A = I + sqrt(lambda) S` is the Gram matrix of the stacked plane bases.
//! When `S^2 = (2k - 2) I` and `lambda = 1/(2k - 2)`, `A` is twice the
//! projector onto the positive eigenspace, so its spectrum is {0, 2} and
//! its rank is `2k - 1`. Factoring `A = X^T X` gives the planes.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::gf::FieldCtx;
use crate::linalg::{max_abs2, max_abs_real};
use crate::seidel::{build_seidel, verify_seidel_square, SeidelMatrix, INVOLUTION_TOL};

pub type Rational = Ratio<i64>;

/// Largest accepted `max |X^T X - A|`.
pub const GRAM_TOL: f64 = 1e-9;
/// Eigenvalues of `A` above this are kept; it sits in the gap between 0 and 2.
pub const RANK_THRESHOLD: f64 = 1.0;

/// `lambda = 1/(2k - 2)`.
pub fn plane_parameter(k: usize) -> Rational {
    Rational::new(1, 2 * k as i64 - 2)
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `A = I + S / sqrt(2k - 2)`.
pub fn build_gram(s: &SeidelMatrix) -> DMatrix<f64> {
    let n = s.dense().nrows();
    let scale = 1.0 / (2.0 * s.k() as f64 - 2.0).sqrt();
    DMatrix::identity(n, n) + s.dense() * scale
}

/// `n` planes in `R^r`; columns `2i, 2i + 1` of `basis` span plane `i`.
#[derive(Clone, Debug)]
pub struct PlaneTuple {
    pub r: usize,
    pub n: usize,
    pub lambda: Rational,
    pub basis: DMatrix<f64>,
    pub gram: DMatrix<f64>,
}

impl PlaneTuple {
    /// Columns spanning plane `i`.
    pub fn plane(&self, i: usize) -> nalgebra::DMatrixView<'_, f64> {
        self.basis.columns(2 * i, 2)
    }

    pub fn lambda_f64(&self) -> f64 {
        to_f64(self.lambda)
    }

    /// `max |X^T X - A|`.
    pub fn gram_residual(&self) -> f64 {
        max_abs_real(&(self.basis.transpose() * &self.basis - &self.gram))
    }

    /// Largest deviation of any plane's basis from orthonormal.
    pub fn orthonormality_deviation(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let p = self.plane(i);
                let g: Matrix2<f64> = (p.transpose() * p).fixed_view::<2, 2>(0, 0).into_owned();
                max_abs2(&(g - Matrix2::identity()))
            })
            .fold(0.0, f64::max)
    }
}

/// Factors `gram = X^T X` with `X` of shape `r x 2n`.
///
/// Uses the eigenpairs of `gram` above [`RANK_THRESHOLD`], ordered by
/// descending eigenvalue, each eigenvector signed so its first entry that
/// is not negligible is positive: `X = diag(sqrt(eig)) V^T`.
pub fn extract_bases(gram: &DMatrix<f64>, r: usize, lambda: Rational) -> Result<PlaneTuple> {
    let (rows, cols) = gram.shape();
    if rows != cols || rows % 2 != 0 {
        return Err(Error::InvalidShape { rows, cols });
    }
    let eig = SymmetricEigen::new(gram.clone());
    let mut kept: Vec<usize> = (0..rows).filter(|&i| eig.eigenvalues[i] > RANK_THRESHOLD).collect();
    if kept.len() != r {
        return Err(Error::RankMismatch {
            expected: r,
            found: kept.len(),
        });
    }
    kept.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));

    let mut basis = DMatrix::zeros(r, rows);
    for (row, &i) in kept.iter().enumerate() {
        let v = eig.eigenvectors.column(i);
        let sign = v.iter().find(|x| x.abs() > 1e-9).map_or(1.0, |x| x.signum());
        let scale = sign * eig.eigenvalues[i].sqrt();
        for j in 0..rows {
            basis[(row, j)] = scale * v[j];
        }
    }

    let tuple = PlaneTuple {
        r,
        n: rows / 2,
        lambda,
        basis,
        gram: gram.clone(),
    };
    let residual = tuple.gram_residual();
    if residual > GRAM_TOL {
        return Err(Error::GramMismatch(residual));
    }
    Ok(tuple)
}

/// For each pair of distinct planes, `B = P_i^T P_j`; returns the largest
/// `max |B^T B - lambda I|`. Zero means every pair is isoclinic with
/// angle `arccos sqrt(lambda)`.
pub fn verify_isoclinic(pt: &PlaneTuple) -> f64 {
    let lambda = pt.lambda_f64();
    let mut worst: f64 = 0.0;
    for i in 0..pt.n {
        for j in 0..pt.n {
            if i == j {
                continue;
            }
            let b = pt.plane(i).transpose() * pt.plane(j);
            let btb = b.transpose() * &b;
            let dev = btb
                .iter()
                .enumerate()
                .map(|(n, x)| {
                    let id = if n == 0 || n == 3 { lambda } else { 0.0 };
                    (x - id).abs()
                })
                .fold(0.0, f64::max);
            worst = worst.max(dev);
        }
    }
    worst
}

/// How cleanly the spectrum of a Gram matrix splits into {0, 2}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumCertificate {
    /// Eigenvalues above [`RANK_THRESHOLD`].
    pub rank: usize,
    /// Largest distance of any eigenvalue from {0, 2}.
    pub cluster_distance: f64,
}

pub fn spectrum_certificate(gram: &DMatrix<f64>) -> SpectrumCertificate {
    let eig = SymmetricEigen::new(gram.clone());
    let rank = eig.eigenvalues.iter().filter(|&&e| e > RANK_THRESHOLD).count();
    let cluster_distance = eig
        .eigenvalues
        .iter()
        .map(|&e| e.abs().min((e - 2.0).abs()))
        .fold(0.0, f64::max);
    SpectrumCertificate { rank, cluster_distance }
}

/// The bound `(2 - r lambda) v <= r (1 - lambda)` on `n`-tuples of
/// equi-isoclinic planes in `R^r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LsBound {
    /// `r (1 - lambda) / (2 - r lambda)`, or `+inf` when `2 - r lambda <= 0`.
    pub bound: f64,
    /// The same value as an exact rational, when finite.
    pub exact: Option<Rational>,
    /// `v` attains the bound with equality.
    pub tight: bool,
}

pub fn check_ls_bound(r: i64, lambda: Rational, v: i64) -> LsBound {
    let r_q = Rational::from_integer(r);
    let one = Rational::from_integer(1);
    let denom = Rational::from_integer(2) - r_q * lambda;
    let numer = r_q * (one - lambda);
    if denom <= Rational::from_integer(0) {
        return LsBound {
            bound: f64::INFINITY,
            exact: None,
            tight: false,
        };
    }
    let exact = numer / denom;
    let tight = exact.floor() == Rational::from_integer(v) && Rational::from_integer(v) * denom == numer;
    LsBound {
        bound: to_f64(exact),
        exact: Some(exact),
        tight,
    }
}

/// The full chain for an admissible field: Seidel matrix, Gram matrix,
/// factorization into `2k - 1` planes in `R^(2k - 1)`.
pub fn equi_isoclinic_planes(ctx: &FieldCtx, k: usize) -> Result<PlaneTuple> {
    let s = build_seidel(ctx, k)?;
    let residual = verify_seidel_square(&s);
    if residual > INVOLUTION_TOL {
        return Err(Error::NotInvolutory(residual));
    }
    extract_bases(&build_gram(&s), 2 * k - 1, plane_parameter(k))
}
