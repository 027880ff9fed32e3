//! Python bindings: problems, certificates, the smoothing constants and the
//! Gaussian checks.

use gns_core::exponents::{self, LebesgueExponent};
use gns_core::feasible;
use gns_core::optimizer::{self, OptimizerConfig};
use gns_core::oracle::{self, SweepReport};
use gns_core::parabolic::{self, ParabolicParams};
use gns_core::specialfn;
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(gns_bounds, GnsError, PyValueError, "Invalid input or an infeasible request.");
create_exception!(gns_bounds, AccuracyError, PyArithmeticError, "A quadrature missed its accuracy target.");

fn to_py(err: gns_core::GnsError) -> PyErr {
    match err {
        gns_core::GnsError::Accuracy { .. } => AccuracyError::new_err(err.to_string()),
        _ => GnsError::new_err(err.to_string()),
    }
}

/// An exponent given as a number or as `"inf"`, `"a/b"` or a decimal string.
#[derive(FromPyObject)]
enum ExponentArg {
    Text(String),
    Number(f64),
}

impl ExponentArg {
    fn get(&self) -> PyResult<LebesgueExponent> {
        match self {
            ExponentArg::Text(s) => s.parse().map_err(to_py),
            ExponentArg::Number(p) => LebesgueExponent::new(*p).map_err(to_py),
        }
    }
}

fn params(d: u32, s: f64, r: ExponentArg, p: ExponentArg) -> PyResult<ParabolicParams> {
    Ok(ParabolicParams { p: p.get()?, r: r.get()?, s, d })
}

/// `‖|∇|^s f‖_p ≤ C ‖|∇|^{s1} f‖_{p1}^θ ‖|∇|^{s2} f‖_{p2}^{1-θ}` on `ℝ^d`.
#[pyclass(name = "GnsProblem", module = "gns_bounds", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProblem {
    inner: exponents::GnsProblem,
}

#[pymethods]
impl PyProblem {
    #[new]
    #[pyo3(signature = (d, s, p, s1, p1, s2, p2))]
    fn new(d: u32, s: f64, p: ExponentArg, s1: f64, p1: ExponentArg, s2: f64, p2: ExponentArg) -> PyResult<Self> {
        Ok(Self { inner: exponents::GnsProblem { d, s, s1, s2, p: p.get()?, p1: p1.get()?, p2: p2.get()? } })
    }

    #[getter]
    fn d(&self) -> u32 {
        self.inner.d
    }

    #[getter]
    fn s(&self) -> f64 {
        self.inner.s
    }

    #[getter]
    fn s1(&self) -> f64 {
        self.inner.s1
    }

    #[getter]
    fn s2(&self) -> f64 {
        self.inner.s2
    }

    #[getter]
    fn p(&self) -> f64 {
        self.inner.p.value()
    }

    #[getter]
    fn p1(&self) -> f64 {
        self.inner.p1.value()
    }

    #[getter]
    fn p2(&self) -> f64 {
        self.inner.p2.value()
    }

    fn theta(&self) -> PyResult<f64> {
        self.inner.theta().map(|t| t.value()).map_err(to_py)
    }

    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = self.inner.validate();
        let out = PyDict::new(py);
        out.set_item("admissible", report.admissible)?;
        out.set_item("left_margin", report.left_margin)?;
        out.set_item("right_margin", report.right_margin)?;
        out.set_item("orientation", format!("{:?}", report.orientation))?;
        Ok(out)
    }

    fn known_failure_case(&self) -> Option<String> {
        exponents::known_failure_case(&self.inner).map(|c| format!("{c:?}"))
    }

    /// Up to `n` seeded points of the feasible set, as dictionaries.
    #[pyo3(signature = (n, seed = 0))]
    fn sample<'py>(&self, py: Python<'py>, n: usize, seed: u64) -> PyResult<Bound<'py, PyList>> {
        let points = feasible::sample_sigma(&self.inner, n, seed).map_err(to_py)?;
        let out = PyList::empty(py);
        for pt in &points {
            let row = point_dict(py, pt)?;
            row.set_item("value", optimizer::objective(&self.inner, pt).map_err(to_py)?)?;
            out.append(row)?;
        }
        Ok(out)
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "GnsProblem(d={}, s={}, p={}, s1={}, p1={}, s2={}, p2={})",
            p.d, p.s, p.p, p.s1, p.p1, p.s2, p.p2
        )
    }
}

fn point_dict<'py>(py: Python<'py>, pt: &feasible::SigmaPoint) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("beta1", pt.beta1)?;
    out.set_item("beta2", pt.beta2)?;
    out.set_item("sigma", pt.sigma)?;
    out.set_item("r1", pt.r1.value())?;
    out.set_item("r2", pt.r2.value())?;
    out.set_item("q1", pt.q1.value())?;
    out.set_item("q2", pt.q2.value())?;
    Ok(out)
}

/// A feasible point and the interpolation constant it certifies.
#[pyclass(name = "BoundCertificate", module = "gns_bounds", frozen)]
struct PyCertificate {
    inner: optimizer::BoundCertificate,
}

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        optimizer::BoundCertificate::from_json_str(text).map(|inner| Self { inner }).map_err(to_py)
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    #[getter]
    fn value(&self) -> f64 {
        self.inner.value
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.theta.value()
    }

    #[getter]
    fn feasible(&self) -> bool {
        self.inner.margins.ok
    }

    #[getter]
    fn problem(&self) -> PyProblem {
        PyProblem { inner: self.inner.problem }
    }

    #[getter]
    fn point<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        point_dict(py, &self.inner.point)
    }

    #[getter]
    fn sample_count(&self) -> usize {
        self.inner.sample_count()
    }

    /// Raises unless the certificate is internally consistent.
    fn check(&self) -> PyResult<()> {
        self.inner.check().map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("BoundCertificate(value={}, theta={})", self.inner.value, self.inner.theta.value())
    }
}

/// Minimizes the interpolation constant over the feasible set.
#[pyfunction]
#[pyo3(signature = (problem, starts = 16, seed = 0, sample_per_start = 16, max_iters = 2000))]
fn minimize(
    py: Python<'_>,
    problem: &PyProblem,
    starts: usize,
    seed: u64,
    sample_per_start: usize,
    max_iters: usize,
) -> PyResult<PyCertificate> {
    let config = OptimizerConfig { starts, seed, sample_per_start, max_iters, ..OptimizerConfig::default() };
    let problem = problem.inner;
    let cert = py.detach(|| optimizer::minimize(&problem, &config)).map_err(to_py)?;
    Ok(PyCertificate { inner: cert })
}

/// Time-free constant of `‖|∇|^s e^{tΔ} f‖_p ≤ C t^{-s/2-D} ‖f‖_r`.
#[pyfunction]
fn a_par(d: u32, s: f64, r: ExponentArg, p: ExponentArg) -> PyResult<f64> {
    parabolic::a_par(&params(d, s, r, p)?).map_err(to_py)
}

#[pyfunction]
fn bound_at_time(d: u32, s: f64, r: ExponentArg, p: ExponentArg, t: f64) -> PyResult<f64> {
    parabolic::bound_at_time(&params(d, s, r, p)?, t).map_err(to_py)
}

#[pyfunction]
fn heat_kernel_norm(t: f64, q: ExponentArg, d: u32) -> PyResult<f64> {
    parabolic::heat_kernel_norm(t, q.get()?, d).map_err(to_py)
}

#[pyfunction]
fn young_constant(p: ExponentArg, q: ExponentArg, r: ExponentArg, d: u32) -> PyResult<f64> {
    parabolic::young_constant(p.get()?, q.get()?, r.get()?, d).map_err(to_py)
}

#[pyfunction]
fn log_gamma(x: f64) -> PyResult<f64> {
    specialfn::log_gamma(x).map_err(to_py)
}

#[pyfunction]
fn min_product_power(alpha: f64, beta: f64) -> PyResult<f64> {
    specialfn::min_product_power(alpha, beta).map_err(to_py)
}

#[pyfunction]
fn beta_integral(alpha: f64, beta: f64) -> PyResult<f64> {
    specialfn::beta_integral(alpha, beta).map_err(to_py)
}

fn report_dict<'py>(py: Python<'py>, report: &SweepReport) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("passed", report.passed())?;
    out.set_item("rows", report.rows.len())?;
    out.set_item("violations", report.violations().len())?;
    out.set_item("worst_slack", report.worst_slack())?;
    out.set_item("dilation_spread", report.dilation_spread)?;
    out.set_item("csv", report.to_csv_string().map_err(to_py)?)?;
    Ok(out)
}

/// Checks a certificate on Gaussians of the given widths and dilations.
#[pyfunction]
#[pyo3(signature = (certificate, widths = vec![0.5, 1.0, 2.0], dilations = None))]
fn check_gns<'py>(
    py: Python<'py>,
    certificate: &PyCertificate,
    widths: Vec<f64>,
    dilations: Option<Vec<f64>>,
) -> PyResult<Bound<'py, PyDict>> {
    let dilations = dilations.unwrap_or_else(|| (-5..=5).map(|k| 2f64.powi(k)).collect());
    let cert = &certificate.inner;
    let report = py.detach(|| oracle::check_gns(cert, &widths, &dilations)).map_err(to_py)?;
    report_dict(py, &report)
}

/// Checks the smoothing constants on the standard grid for `dims`.
#[pyfunction]
#[pyo3(signature = (dims, widths = vec![0.5, 1.0, 2.0]))]
fn check_parabolic<'py>(py: Python<'py>, dims: Vec<u32>, widths: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let report = py
        .detach(|| oracle::check_parabolic(&oracle::standard_parabolic_grid(&dims), &widths))
        .map_err(to_py)?;
    report_dict(py, &report)
}

#[pymodule]
fn gns_bounds(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", gns_core::ARTIFACT_VERSION)?;
    m.add("GnsError", m.py().get_type::<GnsError>())?;
    m.add("AccuracyError", m.py().get_type::<AccuracyError>())?;
    m.add_class::<PyProblem>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(minimize, m)?)?;
    m.add_function(wrap_pyfunction!(a_par, m)?)?;
    m.add_function(wrap_pyfunction!(bound_at_time, m)?)?;
    m.add_function(wrap_pyfunction!(heat_kernel_norm, m)?)?;
    m.add_function(wrap_pyfunction!(young_constant, m)?)?;
    m.add_function(wrap_pyfunction!(log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(min_product_power, m)?)?;
    m.add_function(wrap_pyfunction!(beta_integral, m)?)?;
    m.add_function(wrap_pyfunction!(check_gns, m)?)?;
    m.add_function(wrap_pyfunction!(check_parabolic, m)?)?;
    Ok(())
}
