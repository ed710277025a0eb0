//! Python module `opuc`.
//!
//! Complex numbers cross the boundary as Python `complex`; structured
//! reports (periodic spectra, unfolding data) come back as plain dicts.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use opuc_core::example::ExampleParams;
use opuc_core::measure::{self, DiscreteMeasure};
use opuc_core::periodic::{self, DEFAULT_GRID_PER_PERIOD};
use opuc_core::{poly, transforms, zeros, Error};

create_exception!(opuc, NumericalError, PyArithmeticError, "A numerical invariant failed.");

fn err(e: Error) -> PyErr {
    if e.is_numerical() {
        NumericalError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for opuc_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

/// Serialize through JSON into native Python containers.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A real sequence `c` with a positive chain sequence, given by `d` or by
/// the minimal parameters `m` (with or without the leading `m_0 = 0`).
#[pyclass(name = "SequencePair", module = "opuc", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySequencePair {
    inner: opuc_core::SequencePair,
}

#[pymethods]
impl PySequencePair {
    #[new]
    #[pyo3(signature = (c, d=None, m=None, tail_period=None))]
    fn new(c: Vec<f64>, d: Option<Vec<f64>>, m: Option<Vec<f64>>, tail_period: Option<usize>) -> PyResult<Self> {
        let inner = match (d, m) {
            (Some(d), None) => opuc_core::SequencePair::from_c_d(c, d, tail_period),
            (None, Some(m)) => {
                let m = if m.first() == Some(&0.0) { m } else { std::iter::once(0.0).chain(m).collect() };
                opuc_core::SequencePair::from_c_m(c, m, tail_period)
            }
            _ => return Err(PyValueError::new_err("give exactly one of d or m")),
        }
        .py()?;
        Ok(PySequencePair { inner })
    }

    #[getter]
    fn c(&self) -> Vec<f64> {
        self.inner.c().to_vec()
    }

    #[getter]
    fn d(&self) -> Vec<f64> {
        self.inner.d().to_vec()
    }

    /// Minimal parameters including `m_0 = 0`.
    #[getter]
    fn m(&self) -> Vec<f64> {
        self.inner.m().to_vec()
    }

    #[getter]
    fn b(&self) -> Vec<f64> {
        self.inner.b()
    }

    #[getter]
    fn tail_period(&self) -> Option<usize> {
        self.inner.periodic_tail()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("SequencePair(len={}, tail_period={:?})", self.inner.len(), self.inner.periodic_tail())
    }

    fn verblunsky(&self) -> PyResult<Vec<Complex64>> {
        Ok(opuc_core::pair_to_verblunsky(&self.inner).py()?.into_alpha())
    }

    fn tau(&self) -> PyResult<Vec<Complex64>> {
        Ok(opuc_core::pair_to_verblunsky(&self.inner).py()?.tau().to_vec())
    }

    /// Ascending coefficients of `R_n`.
    fn r_coeffs(&self, n: usize) -> PyResult<Vec<Complex64>> {
        Ok(poly::r_poly(&self.inner, n).py()?.coeffs)
    }

    /// Ascending coefficients of `Q_n`.
    fn q_coeffs(&self, n: usize) -> PyResult<Vec<Complex64>> {
        Ok(poly::q_poly(&self.inner, n).py()?.coeffs)
    }

    fn r_eval(&self, n: usize, z: Complex64) -> PyResult<Complex64> {
        Ok(poly::eval_r(&self.inner, n, z).py()?.value())
    }

    fn w_eval(&self, n: usize, x: f64) -> PyResult<f64> {
        poly::w_eval(&self.inner, n, x).py()
    }

    /// Zeros of `W_n` in `x`, decreasing.
    #[pyo3(signature = (n, tol=zeros::DEFAULT_TOL))]
    fn zeros(&self, n: usize, tol: f64) -> PyResult<Vec<f64>> {
        Ok(zeros::w_zeros(&self.inner, n, tol).py()?.x)
    }

    /// Zeros of `R_n` as angles in `(0, 2π)`, increasing.
    #[pyo3(signature = (n, tol=zeros::DEFAULT_TOL))]
    fn zero_angles(&self, n: usize, tol: f64) -> PyResult<Vec<f64>> {
        Ok(zeros::w_zeros(&self.inner, n, tol).py()?.theta)
    }

    /// Smallest interlacing gap over levels `1..=n`, `None` if violated.
    fn interlacing_margin(&self, n: usize) -> PyResult<Option<f64>> {
        let levels = zeros::w_zeros_all_levels(&self.inner, n, zeros::DEFAULT_TOL).py()?;
        Ok(levels
            .windows(2)
            .map(|w| zeros::interlacing_margin(&w[0], &w[1]))
            .try_fold(f64::INFINITY, |m, x| x.map(|x| m.min(x))))
    }

    fn quadrature(&self, n: usize) -> PyResult<PyDiscreteMeasure> {
        Ok(PyDiscreteMeasure {
            inner: measure::quadrature(&self.inner, n).py()?,
        })
    }

    #[pyo3(signature = (n, c=None, tol=1e-9))]
    fn support_gap<'py>(&self, py: Python<'py>, n: usize, c: Option<f64>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &zeros::support_gap_check(&self.inner, c, n, tol).py()?)
    }

    fn is_periodic<'py>(&self, py: Python<'py>, p: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &periodic::is_periodic_pair(&self.inner, p).py()?)
    }

    fn conjugate(&self) -> Self {
        PySequencePair {
            inner: transforms::conjugate_pair(&self.inner),
        }
    }

    /// `(beta, alpha_tilde, unfolded pair, consistency)`.
    fn unfold(&self) -> PyResult<(Vec<Complex64>, Vec<Complex64>, PySequencePair, f64)> {
        let u = transforms::unfold_alternating(&self.inner).py()?;
        Ok((u.beta, u.alpha_tilde, PySequencePair { inner: u.pair_tilde }, u.consistency))
    }
}

/// Point masses `weights[j]` at `e^{i theta[j]}`.
#[pyclass(name = "DiscreteMeasure", module = "opuc", frozen)]
struct PyDiscreteMeasure {
    inner: DiscreteMeasure,
}

#[pymethods]
impl PyDiscreteMeasure {
    #[getter]
    fn level(&self) -> usize {
        self.inner.level
    }

    #[getter]
    fn theta(&self) -> Vec<f64> {
        self.inner.theta.clone()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights.clone()
    }

    #[getter]
    fn nodes(&self) -> Vec<Complex64> {
        self.inner.nodes.clone()
    }

    #[getter]
    fn christoffel_residual(&self) -> f64 {
        self.inner.christoffel_residual
    }

    fn total(&self) -> f64 {
        self.inner.total()
    }

    /// `μ_k = Σ λ_j e^{-ikθ_j}` for `k ≤ k_max`.
    fn moments(&self, k_max: usize) -> Vec<Complex64> {
        self.inner.moments(k_max)
    }

    /// The step function at `theta`; the value at a node excludes its weight.
    fn cdf(&self, theta: f64) -> PyResult<f64> {
        self.inner.step_eval(theta).py()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

#[pyfunction]
fn verblunsky_to_pair(alpha: Vec<Complex64>) -> PyResult<PySequencePair> {
    Ok(PySequencePair {
        inner: opuc_core::verblunsky_to_pair(&alpha).py()?,
    })
}

#[pyfunction]
fn pair_to_verblunsky(pair: &PySequencePair) -> PyResult<Vec<Complex64>> {
    pair.verblunsky()
}

/// `α_n β^{n+1}`: the coefficients of the rotated measure.
#[pyfunction]
fn rotate(alpha: Vec<Complex64>, beta: Complex64) -> PyResult<Vec<Complex64>> {
    transforms::rotate_alpha(&alpha, beta).py()
}

/// Discriminant of one period of coefficients at `e^{i theta}`.
#[pyfunction]
fn discriminant(alpha: Vec<Complex64>, theta: f64) -> PyResult<f64> {
    periodic::discriminant(&alpha, theta).py()
}

/// Absolutely continuous weight at `theta` (strictly inside a band).
#[pyfunction]
fn ac_weight(alpha: Vec<Complex64>, theta: f64) -> PyResult<f64> {
    periodic::ac_weight(&alpha, theta).py()
}

/// Mass at `w` from the limiting ratio; `None` when there is no pure point.
#[pyfunction]
fn pure_point_mass(alpha: Vec<Complex64>, w: Complex64) -> PyResult<Option<f64>> {
    Ok(periodic::pure_point_mass(&alpha, w).py()?.mass)
}

/// Bands, gaps, candidates, pure points and masses as a dict.
#[pyfunction]
#[pyo3(signature = (alpha, grid=DEFAULT_GRID_PER_PERIOD))]
fn analyze_periodic<'py>(py: Python<'py>, alpha: Vec<Complex64>, grid: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &periodic::analyze(&alpha, grid).py()?)
}

/// The period-two family `c_n = (-1)^n c` with alternating `m = (1 - b)/2`.
#[pyclass(name = "ExampleFamily", module = "opuc", frozen)]
struct PyExampleFamily {
    inner: ExampleParams,
}

#[pymethods]
impl PyExampleFamily {
    #[new]
    fn new(c: f64, b1: f64, b2: f64) -> PyResult<Self> {
        Ok(PyExampleFamily {
            inner: ExampleParams::new(c, b1, b2).py()?,
        })
    }

    fn pair(&self, periods: usize) -> PyResult<PySequencePair> {
        Ok(PySequencePair {
            inner: self.inner.pair(periods).py()?,
        })
    }

    fn alpha(&self) -> (Complex64, Complex64) {
        self.inner.alpha()
    }

    fn discriminant(&self, theta: f64) -> f64 {
        self.inner.discriminant(theta)
    }

    fn weight(&self, theta: f64) -> PyResult<f64> {
        self.inner.weight(theta).py()
    }

    /// `(θ₁⁺, θ₁⁻, θ₂⁻, θ₂⁺)`.
    fn bands(&self) -> (f64, f64, f64, f64) {
        let b = self.inner.bands();
        (b.theta1_plus, b.theta1_minus, b.theta2_minus, b.theta2_plus)
    }

    /// `[(theta, mass) or None, (theta, mass) or None]` at `w₁`, `w₂`.
    fn masses(&self) -> Vec<Option<(f64, f64)>> {
        self.inner.masses().iter().map(|m| m.map(|m| (m.theta, m.mass))).collect()
    }
}

#[pymodule]
fn opuc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_class::<PySequencePair>()?;
    m.add_class::<PyDiscreteMeasure>()?;
    m.add_class::<PyExampleFamily>()?;
    m.add_function(wrap_pyfunction!(verblunsky_to_pair, m)?)?;
    m.add_function(wrap_pyfunction!(pair_to_verblunsky, m)?)?;
    m.add_function(wrap_pyfunction!(rotate, m)?)?;
    m.add_function(wrap_pyfunction!(discriminant, m)?)?;
    m.add_function(wrap_pyfunction!(ac_weight, m)?)?;
    m.add_function(wrap_pyfunction!(pure_point_mass, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_periodic, m)?)?;
    Ok(())
}
