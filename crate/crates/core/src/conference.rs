//! Complex symmetric conference matrices `C(omega)` of odd order q = 2k - 1.
//!
//! Entry (a, b) is `omega^chi(a - b)` off the diagonal and zero on it, where
//! `chi` is the quadratic character of GF(q). Every canonically built matrix
//! carries two layers: the integer exponent pattern, which is all the
//! counting argument behind `C C^* = (2k - 2 - c) I + c J` needs, and the
//! complex values used for numerical cross-checks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};
use crate::linalg::max_abs_complex;

/// Tolerance on `|z|^2 - 1` accepted by [`UnitComplex::new`].
pub const UNIT_TOL: f64 = 1e-12;

/// A complex number of modulus one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitComplex(Complex64);

impl UnitComplex {
    pub const ONE: UnitComplex = UnitComplex(Complex64::new(1.0, 0.0));
    pub const I: UnitComplex = UnitComplex(Complex64::new(0.0, 1.0));

    pub fn new(re: f64, im: f64) -> Result<Self> {
        let dev = re * re + im * im - 1.0;
        if dev.abs() > UNIT_TOL || !dev.is_finite() {
            return Err(Error::NotUnit(dev));
        }
        Ok(Self(Complex64::new(re, im)))
    }

    pub fn from_angle(theta: f64) -> Self {
        Self(Complex64::new(theta.cos(), theta.sin()))
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn arg(self) -> f64 {
        self.0.arg()
    }

    /// The inverse, which for a unit number is the conjugate.
    pub fn inv(self) -> Self {
        Self(self.0.conj())
    }

    /// `self^e`; negative powers go through the conjugate so that
    /// `omega^-1` is bit-exactly `conj(omega)`.
    pub fn powi(self, e: i32) -> Complex64 {
        let base = if e < 0 { self.0.conj() } else { self.0 };
        (0..e.unsigned_abs()).fold(Complex64::new(1.0, 0.0), |acc, _| acc * base)
    }
}

impl std::ops::Neg for UnitComplex {
    type Output = Self;

    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl std::ops::Mul for UnitComplex {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        Self(self.0 * other.0)
    }
}

/// Half of the principal arccos of `(2 - k)/(k - 1)`, in (0, pi/2].
pub fn critical_theta(k: i64) -> Result<f64> {
    if k < 3 {
        return Err(Error::InvalidOrder(k));
    }
    let k = k as f64;
    Ok(0.5 * ((2.0 - k) / (k - 1.0)).acos())
}

/// The canonical `omega_0` with `Re(omega_0^2) = (2 - k)/(k - 1)`.
///
/// Of the four solutions `±omega_0^{±1}` this returns the principal one,
/// `e^{i theta}` with theta from [`critical_theta`].
pub fn critical_omega(k: i64) -> Result<UnitComplex> {
    critical_theta(k).map(UnitComplex::from_angle)
}

/// `c = k - 2 + (k - 1) Re(omega^2)`, the off-diagonal value of `C C^*`.
pub fn gram_constant(k: usize, omega: UnitComplex) -> f64 {
    let k = k as f64;
    k - 2.0 + (k - 1.0) * omega.powi(2).re
}

/// Tally of one off-diagonal Gram entry of `C C^*`, written as
/// `r + s omega^2 + t omega^-2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExponentCounts {
    pub r: usize,
    pub s: usize,
    pub t: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConferenceMatrix {
    q: usize,
    k: usize,
    omega: UnitComplex,
    exponents: Option<DMatrix<i8>>,
    values: DMatrix<Complex64>,
}

/// Builds `C(omega)` over `ctx`.
pub fn build_conference(ctx: &FieldCtx, omega: UnitComplex) -> Result<ConferenceMatrix> {
    let q = ctx.order();
    if q % 4 != 1 {
        return Err(Error::NotSymmetrizable(q));
    }
    let chi = ctx.chi_table();
    let exponents = DMatrix::from_fn(q, q, |a, b| chi[ctx.sub_index(a, b)]);
    let values = values_from_exponents(&exponents, omega);
    Ok(ConferenceMatrix {
        q,
        k: q.div_ceil(2),
        omega,
        exponents: Some(exponents),
        values,
    })
}

fn values_from_exponents(exponents: &DMatrix<i8>, omega: UnitComplex) -> DMatrix<Complex64> {
    let q = exponents.nrows();
    DMatrix::from_fn(q, q, |a, b| {
        if a == b {
            Complex64::new(0.0, 0.0)
        } else {
            omega.powi(exponents[(a, b)] as i32)
        }
    })
}

impl ConferenceMatrix {
    /// Reassembles a matrix from stored layers, e.g. after reading a file.
    ///
    /// Only the shape and the exponent alphabet are validated here; whether
    /// the result is actually a conference matrix is for the verifiers.
    pub fn from_parts(omega: UnitComplex, exponents: Option<DMatrix<i8>>, values: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = values.shape();
        if rows != cols || rows % 2 == 0 {
            return Err(Error::InvalidShape { rows, cols });
        }
        if let Some(e) = &exponents {
            if e.shape() != values.shape() {
                return Err(Error::InvalidExponentLayer(format!(
                    "shape {:?} differs from values {:?}",
                    e.shape(),
                    values.shape()
                )));
            }
            for a in 0..rows {
                for b in 0..rows {
                    let ok = if a == b { e[(a, b)] == 0 } else { e[(a, b)].abs() == 1 };
                    if !ok {
                        return Err(Error::InvalidExponentLayer(format!("entry ({a}, {b}) = {}", e[(a, b)])));
                    }
                }
            }
        }
        Ok(Self {
            q: rows,
            k: rows.div_ceil(2),
            omega,
            exponents,
            values,
        })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn omega(&self) -> UnitComplex {
        self.omega
    }

    /// The symbolic layer, absent once the matrix has been rescaled.
    pub fn exponents(&self) -> Option<&DMatrix<i8>> {
        self.exponents.as_ref()
    }

    pub fn values(&self) -> &DMatrix<Complex64> {
        &self.values
    }

    /// `C^*`. For symmetric `C` this is the entrywise conjugate.
    pub fn adjoint(&self) -> DMatrix<Complex64> {
        self.values.map(|z| z.conj())
    }

    pub fn gram(&self) -> DMatrix<Complex64> {
        &self.values * self.values.adjoint()
    }

    pub fn is_symmetric(&self) -> bool {
        self.values == self.values.transpose()
    }

    /// Whether the symbolic layer is present and reproduces the values bit-exactly.
    pub fn layers_agree(&self) -> bool {
        match &self.exponents {
            Some(e) => values_from_exponents(e, self.omega) == self.values,
            None => false,
        }
    }

    /// Replaces `omega` in the symbolic layer, keeping the exponent pattern.
    pub fn with_omega(&self, omega: UnitComplex) -> Result<Self> {
        let e = self.exponents.as_ref().ok_or(Error::ExactLayerUnavailable)?;
        Ok(Self {
            omega,
            values: values_from_exponents(e, omega),
            ..self.clone()
        })
    }
}

/// For every off-diagonal (a, b), counts the terms of `(C C^*)_{ab}` whose
/// exponent is 0, +2 and -2. Exact integer work on the symbolic layer.
/// Diagonal positions hold `ExponentCounts::default()`.
pub fn gram_counts(c: &ConferenceMatrix) -> Result<DMatrix<ExponentCounts>> {
    let e = c.exponents.as_ref().ok_or(Error::ExactLayerUnavailable)?;
    let q = c.q;
    let mut out = DMatrix::from_element(q, q, ExponentCounts::default());
    for a in 0..q {
        for b in 0..q {
            if a == b {
                continue;
            }
            let mut counts = ExponentCounts::default();
            for g in (0..q).filter(|&g| g != a && g != b) {
                // (C C^*)_{ab} = sum_g omega^{e_ag} conj(omega^{e_bg})
                match e[(a, g)] - e[(b, g)] {
                    0 => counts.r += 1,
                    2 => counts.s += 1,
                    -2 => counts.t += 1,
                    d => unreachable!("off-diagonal exponents are ±1, got difference {d}"),
                }
            }
            out[(a, b)] = counts;
        }
    }
    Ok(out)
}

/// The counts every off-diagonal Gram entry must have at order 2k - 1.
pub fn expected_counts(k: usize) -> ExponentCounts {
    ExponentCounts {
        r: k - 2,
        s: (k - 1) / 2,
        t: (k - 1) / 2,
    }
}

/// True iff every off-diagonal Gram entry tallies to
/// `(k - 2, (k - 1)/2, (k - 1)/2)`. Together with [`is_critical`] on the
/// matrix's omega this certifies `C C^* = (2k - 2) I` without floating point.
pub fn verify_conference_exact(c: &ConferenceMatrix) -> Result<bool> {
    let counts = gram_counts(c)?;
    let want = expected_counts(c.k);
    Ok((0..c.q)
        .flat_map(|a| (0..c.q).map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .all(|(a, b)| counts[(a, b)] == want))
}

/// Whether `Re(omega^2) = (2 - k)/(k - 1)` within `tol`.
pub fn is_critical(k: usize, omega: UnitComplex, tol: f64) -> bool {
    let target = (2.0 - k as f64) / (k as f64 - 1.0);
    (omega.powi(2).re - target).abs() <= tol
}

/// `max |C C^* - (q - 1) I|`.
pub fn verify_conference_numeric(c: &ConferenceMatrix) -> f64 {
    let target = DMatrix::<Complex64>::identity(c.q, c.q) * Complex64::new(c.q as f64 - 1.0, 0.0);
    max_abs_complex(&(c.gram() - target))
}

/// `max |C C^* - (2k - 2 - c) I - c J|` with c from [`gram_constant`].
pub fn gram_identity_residual(c: &ConferenceMatrix) -> f64 {
    let cst = gram_constant(c.k, c.omega);
    let diag = 2.0 * c.k as f64 - 2.0;
    let target = DMatrix::from_fn(c.q, c.q, |a, b| Complex64::new(if a == b { diag } else { cst }, 0.0));
    max_abs_complex(&(c.gram() - target))
}

/// Multiplies row and column `index` by `u`. Drops the symbolic layer.
pub fn scale_row_col(c: &ConferenceMatrix, index: usize, u: UnitComplex) -> Result<ConferenceMatrix> {
    if index >= c.q {
        return Err(Error::InvalidIndex { index, order: c.q });
    }
    let mut values = c.values.clone();
    let u = u.value();
    for j in 0..c.q {
        values[(index, j)] *= u;
        values[(j, index)] *= u;
    }
    values[(index, index)] = Complex64::new(0.0, 0.0);
    Ok(ConferenceMatrix {
        exponents: None,
        values,
        ..c.clone()
    })
}

/// Checks that `sigma` is a bijection on `0..n`.
pub fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if sigma.len() != n {
        return Err(Error::InvalidPermutation(n));
    }
    for &s in sigma {
        if s >= n || std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidPermutation(n));
        }
    }
    Ok(())
}

/// Simultaneous row/column permutation: entry (i, j) moves to
/// (sigma[i], sigma[j]). The symbolic layer moves with it.
pub fn permute(c: &ConferenceMatrix, sigma: &[usize]) -> Result<ConferenceMatrix> {
    check_permutation(sigma, c.q)?;
    let mut inverse = vec![0; c.q];
    for (i, &s) in sigma.iter().enumerate() {
        inverse[s] = i;
    }
    let values = DMatrix::from_fn(c.q, c.q, |a, b| c.values[(inverse[a], inverse[b])]);
    let exponents = c
        .exponents
        .as_ref()
        .map(|e| DMatrix::from_fn(c.q, c.q, |a, b| e[(inverse[a], inverse[b])]));
    Ok(ConferenceMatrix {
        exponents,
        values,
        ..c.clone()
    })
}

/// Explicit equivalences between the four critical choices of omega.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    /// The non-square `g` used for the permutation.
    pub nonsquare: FieldElement,
    /// `a -> a g` on canonical indices; carries `C(omega_0^-1)` to `C(omega_0)`.
    pub permutation: Vec<usize>,
    /// Row/column scalings (all `i`) carrying `C(-omega_0) = -C(omega_0)` to `C(omega_0)`.
    pub scaling: Vec<UnitComplex>,
    /// Largest entrywise residual seen while checking both witnesses.
    pub residual: f64,
}

/// Tolerance used when checking the witnesses.
pub const WITNESS_TOL: f64 = 1e-12;

pub fn equivalence_witnesses(ctx: &FieldCtx, k: usize) -> Result<EquivalenceWitness> {
    let q = ctx.order();
    if q != 2 * k - 1 {
        return Err(Error::OrderMismatch { q, k });
    }
    let omega = critical_omega(k as i64)?;
    let target = build_conference(ctx, omega)?;

    let g = ctx.find_nonsquare();
    let permutation: Vec<usize> = ctx.elements().iter().map(|a| ctx.index_of(&ctx.mul(a, &g))).collect();
    let inverse_built = build_conference(ctx, omega.inv())?;
    let permuted = permute(&inverse_built, &permutation)?;
    let res_perm = max_abs_complex(&(permuted.values() - target.values()));

    let scaling = vec![UnitComplex::I; q];
    let mut scaled = build_conference(ctx, -omega)?;
    for (index, &u) in scaling.iter().enumerate() {
        scaled = scale_row_col(&scaled, index, u)?;
    }
    let res_scale = max_abs_complex(&(scaled.values() - target.values()));

    let residual = res_perm.max(res_scale);
    if residual > WITNESS_TOL {
        return Err(Error::WitnessMismatch(residual));
    }
    Ok(EquivalenceWitness {
        nonsquare: g,
        permutation,
        scaling,
        residual,
    })
}
