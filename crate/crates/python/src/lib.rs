//! Python bindings. Matrices cross the boundary as nested lists.

use isoclinic::admissible;
use isoclinic::conference::{self as conf, UnitComplex};
use isoclinic::gf::{self, FieldCtx};
use isoclinic::{hadamard, planes, seidel};
use nalgebra::DMatrix;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rows<T: nalgebra::Scalar + Copy>(m: &DMatrix<T>) -> Vec<Vec<T>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn field_for_k(k: usize) -> PyResult<FieldCtx> {
    let adm = admissible::check_k(k).map_err(err)?;
    FieldCtx::new(adm.p, adm.alpha).map_err(err)
}

fn element(ctx: &FieldCtx, i: usize) -> PyResult<&gf::FieldElement> {
    if i < ctx.order() {
        Ok(ctx.element(i))
    } else {
        Err(PyValueError::new_err(format!(
            "index {i} out of range for GF({})",
            ctx.order()
        )))
    }
}

/// GF(p^alpha); elements are addressed by their canonical index.
#[pyclass(name = "Field", module = "pyisoclinic", frozen)]
struct PyField(FieldCtx);

#[pymethods]
impl PyField {
    #[new]
    fn new(p: u64, alpha: u32) -> PyResult<Self> {
        FieldCtx::new(p, alpha).map(Self).map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn characteristic(&self) -> u64 {
        self.0.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.0.degree()
    }

    #[getter]
    fn modulus(&self) -> Vec<u64> {
        self.0.modulus().to_vec()
    }

    fn coeffs(&self, i: usize) -> PyResult<Vec<u64>> {
        Ok(element(&self.0, i)?.coeffs().to_vec())
    }

    fn index_of(&self, coeffs: Vec<u64>) -> PyResult<usize> {
        let x = self.0.element_from_coeffs(coeffs).map_err(err)?;
        Ok(self.0.index_of(&x))
    }

    fn add(&self, i: usize, j: usize) -> PyResult<usize> {
        let f = &self.0;
        Ok(f.index_of(&f.add(element(f, i)?, element(f, j)?)))
    }

    fn mul(&self, i: usize, j: usize) -> PyResult<usize> {
        let f = &self.0;
        Ok(f.index_of(&f.mul(element(f, i)?, element(f, j)?)))
    }

    fn inv(&self, i: usize) -> PyResult<usize> {
        let f = &self.0;
        Ok(f.index_of(&f.inv(element(f, i)?).map_err(err)?))
    }

    fn chi(&self, i: usize) -> PyResult<i8> {
        Ok(self.0.legendre_chi(element(&self.0, i)?))
    }

    fn chi_table(&self) -> Vec<i8> {
        self.0.chi_table()
    }

    fn find_nonsquare(&self) -> usize {
        self.0.index_of(&self.0.find_nonsquare())
    }

    fn __repr__(&self) -> String {
        format!("Field(p={}, alpha={})", self.0.characteristic(), self.0.degree())
    }
}

#[pyclass(name = "ConferenceMatrix", module = "pyisoclinic", frozen)]
struct PyConference(conf::ConferenceMatrix);

#[pymethods]
impl PyConference {
    /// C(omega) over `field`; omega must have modulus 1.
    #[staticmethod]
    fn build(field: &PyField, omega: Complex64) -> PyResult<Self> {
        let w = UnitComplex::new(omega.re, omega.im).map_err(err)?;
        conf::build_conference(&field.0, w).map(Self).map_err(err)
    }

    /// C(omega_0) of order 2k - 1.
    #[staticmethod]
    fn critical(k: usize) -> PyResult<Self> {
        let w = conf::critical_omega(k as i64).map_err(err)?;
        conf::build_conference(&field_for_k(k)?, w).map(Self).map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn omega(&self) -> Complex64 {
        self.0.omega().value()
    }

    fn values(&self) -> Vec<Vec<Complex64>> {
        rows(self.0.values())
    }

    fn exponents(&self) -> Option<Vec<Vec<i8>>> {
        self.0.exponents().map(rows)
    }

    fn verify_exact(&self) -> PyResult<bool> {
        conf::verify_conference_exact(&self.0).map_err(err)
    }

    fn verify_numeric(&self) -> f64 {
        conf::verify_conference_numeric(&self.0)
    }

    /// Residual against the closed-form Gram matrix for this omega.
    fn gram_residual(&self) -> f64 {
        conf::gram_identity_residual(&self.0)
    }

    fn permute(&self, sigma: Vec<usize>) -> PyResult<Self> {
        conf::permute(&self.0, &sigma).map(Self).map_err(err)
    }

    fn scale(&self, index: usize, eta: f64) -> PyResult<Self> {
        conf::scale_row_col(&self.0, index, UnitComplex::from_angle(eta))
            .map(Self)
            .map_err(err)
    }

    fn seidel(&self) -> PyResult<PySeidel> {
        seidel::seidel_from_conference(&self.0).map(PySeidel).map_err(err)
    }

    fn hadamard(&self) -> PyResult<Vec<Vec<Complex64>>> {
        hadamard::double(&self.0).map(|h| rows(h.values())).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "ConferenceMatrix(order={}, omega={})",
            self.0.order(),
            self.0.omega().value()
        )
    }
}

#[pyclass(name = "SeidelMatrix", module = "pyisoclinic", frozen)]
struct PySeidel(seidel::SeidelMatrix);

#[pymethods]
impl PySeidel {
    #[staticmethod]
    fn critical(k: usize) -> PyResult<Self> {
        seidel::build_seidel(&field_for_k(k)?, k).map(Self).map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta()
    }

    fn dense(&self) -> Vec<Vec<f64>> {
        rows(self.0.dense())
    }

    fn trace(&self) -> f64 {
        self.0.trace()
    }

    fn verify_square(&self) -> f64 {
        seidel::verify_seidel_square(&self.0)
    }

    /// [(eigenvalue, multiplicity), ...] for the two eigenvalues.
    fn eigen_structure(&self) -> PyResult<Vec<(f64, usize)>> {
        seidel::eigen_structure(&self.0).map(|e| e.pairs.to_vec()).map_err(err)
    }

    fn normalize(&self) -> Self {
        Self(seidel::normalize_seidel(&self.0))
    }

    fn planes(&self) -> PyResult<PyPlanes> {
        let lambda = planes::plane_parameter(self.0.k());
        planes::extract_bases(&planes::build_gram(&self.0), self.0.order(), lambda)
            .map(PyPlanes)
            .map_err(err)
    }
}

#[pyclass(name = "PlaneTuple", module = "pyisoclinic", frozen)]
struct PyPlanes(planes::PlaneTuple);

#[pymethods]
impl PyPlanes {
    #[staticmethod]
    fn critical(k: usize) -> PyResult<Self> {
        planes::equi_isoclinic_planes(&field_for_k(k)?, k)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.0.r
    }

    #[getter]
    fn count(&self) -> usize {
        self.0.n
    }

    /// (numerator, denominator).
    #[getter]
    fn lambda_(&self) -> (i64, i64) {
        (*self.0.lambda.numer(), *self.0.lambda.denom())
    }

    fn basis(&self) -> Vec<Vec<f64>> {
        rows(&self.0.basis)
    }

    fn verify_isoclinic(&self) -> f64 {
        planes::verify_isoclinic(&self.0)
    }

    fn orthonormality_deviation(&self) -> f64 {
        self.0.orthonormality_deviation()
    }

    fn rank(&self) -> usize {
        planes::spectrum_certificate(&self.0.gram).rank
    }
}

#[pyfunction]
fn critical_theta(k: i64) -> PyResult<f64> {
    conf::critical_theta(k).map_err(err)
}

#[pyfunction]
fn critical_omega(k: i64) -> PyResult<Complex64> {
    conf::critical_omega(k).map(|w| w.value()).map_err(err)
}

#[pyfunction]
fn verify_hadamard(values: Vec<Vec<Complex64>>) -> PyResult<f64> {
    let n = values.len();
    if values.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    let m = DMatrix::from_fn(n, n, |i, j| values[i][j]);
    hadamard::HadamardMatrix::from_values(m)
        .map(|h| hadamard::verify_hadamard(&h))
        .map_err(err)
}

/// (bound, exact, tight); `exact` is (num, den) or None.
type BoundTuple = (f64, Option<(i64, i64)>, bool);

#[pyfunction]
fn ls_bound(r: i64, lambda_num: i64, lambda_den: i64, v: i64) -> PyResult<BoundTuple> {
    if lambda_den == 0 {
        return Err(PyValueError::new_err("zero denominator"));
    }
    let b = planes::check_ls_bound(r, planes::Rational::new(lambda_num, lambda_den), v);
    Ok((b.bound, b.exact.map(|x| (*x.numer(), *x.denom())), b.tight))
}

/// (q, p, alpha) for admissible k; raises ValueError otherwise.
#[pyfunction]
fn check_k(k: usize) -> PyResult<(usize, u64, u32)> {
    admissible::check_k(k).map(|a| (a.q, a.p, a.alpha)).map_err(err)
}

/// [(k, None or reason), ...].
#[pyfunction]
#[pyo3(signature = (k_min, k_max, odd_only = false))]
fn enumerate(k_min: usize, k_max: usize, odd_only: bool) -> Vec<(usize, Option<String>)> {
    admissible::enumerate(k_min, k_max, odd_only)
        .into_iter()
        .map(|(k, s)| (k, s.err().map(|e| e.to_string())))
        .collect()
}

#[pymodule]
fn pyisoclinic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyConference>()?;
    m.add_class::<PySeidel>()?;
    m.add_class::<PyPlanes>()?;
    m.add_function(wrap_pyfunction!(critical_theta, m)?)?;
    m.add_function(wrap_pyfunction!(critical_omega, m)?)?;
    m.add_function(wrap_pyfunction!(verify_hadamard, m)?)?;
    m.add_function(wrap_pyfunction!(ls_bound, m)?)?;
    m.add_function(wrap_pyfunction!(check_k, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    Ok(())
}
