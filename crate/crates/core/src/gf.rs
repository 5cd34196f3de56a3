//! Arithmetic in GF(p^alpha) for odd p, and the quadratic character.
//!
//! Elements are polynomials over Z/p of degree below `alpha`, reduced
//! modulo a fixed monic irreducible polynomial. They are enumerated by
//! reading the coefficient vector (constant term first) as the base-p
//! digits of an index, so element `i` of [`FieldCtx::elements`] has the
//! digits of `i` as coefficients and element 0 is the zero element.

use std::fmt;

use crate::error::{Error, Result};

/// A field element: coefficients of a polynomial residue, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut terms = Vec::new();
        for (deg, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = match (deg, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (d, 1) => format!("x^{d}"),
                (d, c) => format!("{c}x^{d}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

/// The field GF(q), q = p^alpha, with its canonical element enumeration.
///
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u64,
    alpha: u32,
    q: usize,
    /// Monic, constant term first, length `alpha + 1`.
    modulus: Vec<u64>,
    elements: Vec<FieldElement>,
}

impl FieldCtx {
    /// Builds GF(p^alpha) using the lexicographically smallest monic
    /// irreducible modulus of degree `alpha`.
    ///
    /// Candidates are ordered like field elements: the non-leading
    /// coefficients, constant first, read as base-p digits. For `alpha == 1`
    /// this picks `x`, so the field is plain Z/p.
    pub fn new(p: u64, alpha: u32) -> Result<Self> {
        if p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if alpha < 1 {
            return Err(Error::InvalidExponent(alpha));
        }
        let q = usize::try_from(p)
            .ok()
            .and_then(|p| p.checked_pow(alpha))
            .ok_or(Error::FieldTooLarge { p, alpha })?;

        let deg = alpha as usize;
        let modulus = (0..p.pow(alpha))
            .map(|i| {
                let mut f = digits(i, p, deg);
                f.push(1);
                f
            })
            .find(|f| poly::is_irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists over Z/p");

        let elements = (0..q as u64)
            .map(|i| FieldElement {
                coeffs: digits(i, p, deg),
            })
            .collect();

        Ok(Self {
            p,
            alpha,
            q,
            modulus,
            elements,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }

    pub fn element(&self, index: usize) -> &FieldElement {
        &self.elements[index]
    }

    /// Position of `x` in the canonical enumeration.
    pub fn index_of(&self, x: &FieldElement) -> usize {
        x.coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p + c) as usize
    }

    /// Validates a coefficient vector as an element of this field.
    pub fn element_from_coeffs(&self, coeffs: Vec<u64>) -> Result<FieldElement> {
        if coeffs.len() != self.alpha as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::ForeignElement);
        }
        Ok(FieldElement { coeffs })
    }

    /// The image of an integer under Z -> GF(q).
    pub fn from_int(&self, n: i64) -> FieldElement {
        let mut coeffs = vec![0; self.alpha as usize];
        coeffs[0] = n.rem_euclid(self.p as i64) as u64;
        FieldElement { coeffs }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let coeffs = x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| (a + b) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        let coeffs = x.coeffs.iter().map(|&a| (self.p - a) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(a, b)| (a + self.p - b) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let prod = poly::mul(&x.coeffs, &y.coeffs, self.p);
        let mut coeffs = poly::rem(&prod, &self.modulus, self.p);
        coeffs.resize(self.alpha as usize, 0);
        FieldElement { coeffs }
    }

    pub fn pow(&self, x: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(x, self.q as u64 - 2))
    }

    /// Quadratic character: 0 at zero, +1 on non-zero squares, -1 otherwise.
    ///
    /// Euler's criterion, x^((q-1)/2) in the field.
    pub fn legendre_chi(&self, x: &FieldElement) -> i8 {
        if x.is_zero() {
            return 0;
        }
        let e = self.pow(x, (self.q as u64 - 1) / 2);
        if e == self.one() {
            1
        } else if e == self.neg(&self.one()) {
            -1
        } else {
            unreachable!("x^((q-1)/2) is always +1 or -1 for non-zero x")
        }
    }

    /// `legendre_chi` of every element, by canonical index.
    pub fn chi_table(&self) -> Vec<i8> {
        self.elements.iter().map(|x| self.legendre_chi(x)).collect()
    }

    /// First element in canonical order with character -1.
    pub fn find_nonsquare(&self) -> FieldElement {
        self.elements
            .iter()
            .find(|x| self.legendre_chi(x) == -1)
            .cloned()
            .expect("odd-order fields contain non-squares")
    }

    /// Index of `elements[i] - elements[j]`, computed digit-wise.
    pub fn sub_index(&self, i: usize, j: usize) -> usize {
        let p = self.p as usize;
        let (mut i, mut j) = (i, j);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.alpha {
            let d = (i % p + p - j % p) % p;
            out += d * place;
            place *= p;
            i /= p;
            j /= p;
        }
        out
    }
}

fn digits(mut n: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(n % p);
        n /= p;
    }
    out
}

/// Trial-division primality.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Writes `n = p^alpha` with `p` prime, if possible.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n)
        .take_while(|d| d * d <= n)
        .find(|d| n.is_multiple_of(*d))
        .unwrap_or(n);
    let mut m = n;
    let mut alpha = 0;
    while m.is_multiple_of(p) {
        m /= p;
        alpha += 1;
    }
    (m == 1).then_some((p, alpha))
}

/// Dense polynomials over Z/p, constant term first.
pub(crate) mod poly {
    pub fn trim(mut f: Vec<u64>) -> Vec<u64> {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn mul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
        if f.is_empty() || g.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; f.len() + g.len() - 1];
        for (i, &a) in f.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in g.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        trim(out)
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let (mut acc, mut base, mut e) = (1u64, a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    /// Remainder of `f` modulo a non-zero `g`.
    pub fn rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
        let g = trim(g.to_vec());
        let mut r = trim(f.to_vec());
        let dg = g.len() - 1;
        let lead_inv = inv_mod(g[dg], p);
        while r.len() > dg {
            let shift = r.len() - 1 - dg;
            let factor = r[r.len() - 1] * lead_inv % p;
            for (i, &c) in g.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - factor * c % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(f.to_vec()), trim(g.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or: a monic `f` of degree n is irreducible iff
    /// gcd(f, x^(p^d) - x) = 1 for every 1 <= d <= n/2.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let f = trim(f.to_vec());
        let n = f.len() - 1;
        if n == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut frob = x.clone();
        for _ in 0..n / 2 {
            frob = pow_mod(&frob, p, &f, p);
            let mut diff = frob.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            if gcd(&f, &diff, p).len() > 1 {
                return false;
            }
        }
        true
    }
}
