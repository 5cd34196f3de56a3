//! Brute-force oracles and fixtures shared by the integration tests.
//! Nothing here calls into the code paths it is used to check.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

use isoclinic::gf::{FieldCtx, FieldElement};

/// Squares of every element, by exhaustive multiplication.
pub fn squares(ctx: &FieldCtx) -> Vec<FieldElement> {
    let mut out: Vec<_> = ctx.elements().iter().map(|y| ctx.mul(y, y)).collect();
    out.sort();
    out.dedup();
    out
}

/// Quadratic character by searching for a square root.
pub fn chi_bruteforce(ctx: &FieldCtx, x: &FieldElement) -> i8 {
    if x.is_zero() {
        0
    } else if ctx.elements().iter().any(|y| ctx.mul(y, y) == *x) {
        1
    } else {
        -1
    }
}

/// Polynomial product over Z/p, constant term first, untrimmed.
fn poly_mul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a * b) % p;
        }
    }
    out
}

/// All monic polynomials of the given degree over Z/p.
pub fn monic_polys(p: u64, deg: usize) -> Vec<Vec<u64>> {
    let count = p.pow(deg as u32);
    (0..count)
        .map(|mut i| {
            let mut f = Vec::with_capacity(deg + 1);
            for _ in 0..deg {
                f.push(i % p);
                i /= p;
            }
            f.push(1);
            f
        })
        .collect()
}

/// Irreducibility by trying every product of two monic factors of
/// complementary degree, smallest factor degree up to deg/2.
pub fn irreducible_by_trial(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        for g in monic_polys(p, d) {
            for h in monic_polys(p, n - d) {
                if poly_mul(&g, &h, p) == f {
                    return false;
                }
            }
        }
    }
    true
}

/// Plain triple-loop `a * b^*`.
pub fn naive_gram(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let m = a.ncols();
    DMatrix::from_fn(n, n, |i, j| {
        (0..m).fold(Complex64::new(0.0, 0.0), |acc, g| acc + a[(i, g)] * a[(j, g)].conj())
    })
}

pub fn naive_square(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    DMatrix::from_fn(n, n, |i, j| (0..n).map(|g| a[(i, g)] * a[(g, j)]).sum())
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_r(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|z| z.abs()).fold(0.0, f64::max)
}

/// Backtracking search for `sigma` with `b[sigma[i]][sigma[j]] == a[i][j]`.
/// Returns the first witness in lexicographic order and the number of
/// complete candidates visited.
pub fn find_permutation<T: PartialEq + Copy>(a: &DMatrix<T>, b: &DMatrix<T>) -> Option<Vec<usize>> {
    fn extend<T: PartialEq + Copy>(a: &DMatrix<T>, b: &DMatrix<T>, sigma: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = sigma.len();
        let n = a.nrows();
        if i == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            let consistent = a[(i, i)] == b[(cand, cand)]
                && (0..i).all(|j| a[(i, j)] == b[(cand, sigma[j])] && a[(j, i)] == b[(sigma[j], cand)]);
            if !consistent {
                continue;
            }
            sigma.push(cand);
            used[cand] = true;
            if extend(a, b, sigma, used) {
                return true;
            }
            sigma.pop();
            used[cand] = false;
        }
        false
    }
    let n = a.nrows();
    if b.shape() != (n, n) {
        return None;
    }
    let mut sigma = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(a, b, &mut sigma, &mut used).then_some(sigma)
}

/// Every permutation of `0..n`, in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for x in 0..n {
            if !prefix.contains(&x) {
                prefix.push(x);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

/// Applies `sigma` to a matrix: entry (i, j) moves to (sigma[i], sigma[j]).
pub fn apply_permutation<T: nalgebra::Scalar + Copy>(m: &DMatrix<T>, sigma: &[usize]) -> DMatrix<T> {
    let mut out = m.clone();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[(sigma[i], sigma[j])] = m[(i, j)];
        }
    }
    out
}

/// j = e^{2 i pi / 3}.
pub fn j() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
}

/// Reference 5 x 5 matrix: entries j and j^2 as exponents +1 / -1 of j.
pub const ORDER5_EXPONENTS: [[i8; 5]; 5] = [
    [0, 1, -1, -1, 1],
    [1, 0, 1, -1, -1],
    [-1, 1, 0, 1, -1],
    [-1, -1, 1, 0, 1],
    [1, -1, -1, 1, 0],
];

/// Reference 9 x 9 matrix: +1 for omega_0, -1 for omega_0^{-1}.
pub const ORDER9_EXPONENTS: [[i8; 9]; 9] = [
    [0, 1, 1, 1, 1, -1, -1, -1, -1],
    [1, 0, -1, -1, 1, 1, 1, -1, -1],
    [1, -1, 0, 1, -1, 1, -1, 1, -1],
    [1, -1, 1, 0, -1, -1, 1, -1, 1],
    [1, 1, -1, -1, 0, -1, -1, 1, 1],
    [-1, 1, 1, -1, -1, 0, 1, 1, -1],
    [-1, 1, -1, 1, -1, 1, 0, -1, 1],
    [-1, -1, 1, -1, 1, 1, -1, 0, 1],
    [-1, -1, -1, 1, 1, -1, 1, 1, 0],
];

pub fn exponent_matrix<const N: usize>(rows: &[[i8; N]; N]) -> DMatrix<i8> {
    DMatrix::from_fn(N, N, |i, j| rows[i][j])
}

/// Numeric matrix from an exponent pattern: `base^e` off the diagonal.
pub fn realize(e: &DMatrix<i8>, base: Complex64) -> DMatrix<Complex64> {
    DMatrix::from_fn(e.nrows(), e.ncols(), |i, j| {
        if i == j {
            Complex64::new(0.0, 0.0)
        } else {
            base.powi(e[(i, j)] as i32)
        }
    })
}
