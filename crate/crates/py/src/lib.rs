//! Python bindings. Times are in K_S lifetimes; outcomes are the strings
//! `"K0"`, `"K0bar"`, `"KS"`, `"KL"`.

use kaonbell::lr::{LrModel, Side};
use kaonbell::scan::ExtremumResult;
use kaonbell::{self as kb, DecayParams, Outcome};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: kb::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn outcome(s: &str) -> PyResult<Outcome> {
    s.parse().map_err(err)
}

#[pyclass(name = "DecayParams", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyDecayParams {
    inner: DecayParams,
}

#[pymethods]
impl PyDecayParams {
    #[new]
    #[pyo3(signature = (gamma_s = 1.0, gamma_l = 1.0 / kb::kinematics::WIDTH_RATIO, delta_m = 2.0 * std::f64::consts::PI / 13.0, velocity = kb::kinematics::PHI_FACTORY_VELOCITY))]
    fn new(gamma_s: f64, gamma_l: f64, delta_m: f64, velocity: f64) -> PyResult<Self> {
        Ok(PyDecayParams {
            inner: DecayParams::new(gamma_s, gamma_l, delta_m, velocity).map_err(err)?,
        })
    }

    #[staticmethod]
    fn stable() -> Self {
        PyDecayParams {
            inner: DecayParams::stable(),
        }
    }

    #[getter]
    fn gamma_s(&self) -> f64 {
        self.inner.gamma_s
    }
    #[getter]
    fn gamma_l(&self) -> f64 {
        self.inner.gamma_l
    }
    #[getter]
    fn delta_m(&self) -> f64 {
        self.inner.delta_m
    }
    #[getter]
    fn velocity(&self) -> f64 {
        self.inner.velocity
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "DecayParams(gamma_s={}, gamma_l={}, delta_m={}, velocity={})",
            p.gamma_s, p.gamma_l, p.delta_m, p.velocity
        )
    }
}

fn params(p: Option<PyRef<'_, PyDecayParams>>) -> DecayParams {
    p.map(|p| p.inner).unwrap_or_default()
}

/// A local-realistic model at fixed detection times.
#[pyclass(name = "LrModel", frozen)]
struct PyLrModel {
    decay: DecayParams,
    inner: LrModel,
}

#[pymethods]
impl PyLrModel {
    /// Model at fractional positions (each in [0, 1]) along the four feasibility intervals.
    #[new]
    #[pyo3(signature = (tau1, tau2, fractions = [0.5; 4], params = None))]
    fn new(
        tau1: f64,
        tau2: f64,
        fractions: [f64; 4],
        params: Option<PyRef<'_, PyDecayParams>>,
    ) -> PyResult<Self> {
        let decay = self::params(params);
        Ok(PyLrModel {
            decay,
            inner: LrModel::from_box_fractions(&decay, tau1, tau2, fractions).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (tau1, tau2, params = None))]
    fn max_asymmetry(
        tau1: f64,
        tau2: f64,
        params: Option<PyRef<'_, PyDecayParams>>,
    ) -> PyResult<Self> {
        let decay = self::params(params);
        Ok(PyLrModel {
            decay,
            inner: LrModel::max_asymmetry(&decay, tau1, tau2).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (tau1, tau2, params = None))]
    fn min_asymmetry(
        tau1: f64,
        tau2: f64,
        params: Option<PyRef<'_, PyDecayParams>>,
    ) -> PyResult<Self> {
        let decay = self::params(params);
        Ok(PyLrModel {
            decay,
            inner: LrModel::min_asymmetry(&decay, tau1, tau2).map_err(err)?,
        })
    }

    #[getter]
    fn tau1(&self) -> f64 {
        self.inner.tau1
    }
    #[getter]
    fn tau2(&self) -> f64 {
        self.inner.tau2
    }

    /// The four normalized free parameters `(p111, p112, p333, p334)`.
    #[getter]
    fn free_parameters(&self) -> (f64, f64, f64, f64) {
        let p = &self.inner.params;
        (p.p111_norm, p.p112_norm, p.p333_norm, p.p334_norm)
    }

    /// The 18 pair-state probabilities in table order.
    fn pair_state_table(&self) -> Vec<f64> {
        kb::pair_state_table(&self.decay, &self.inner)
            .probabilities
            .to_vec()
    }

    fn joint(&self, o1: &str, o2: &str) -> PyResult<f64> {
        Ok(kb::lr_joint(
            &self.decay,
            &self.inner,
            outcome(o1)?,
            outcome(o2)?,
        ))
    }

    /// Single detection probability on the left (`side="left"`) or right kaon.
    fn single(&self, side: &str, o: &str) -> PyResult<f64> {
        let side = match side {
            "left" => Side::Left,
            "right" => Side::Right,
            other => {
                return Err(PyValueError::new_err(format!(
                    "side must be left or right, got {other}"
                )))
            }
        };
        Ok(kb::lr_single(&self.decay, &self.inner, side, outcome(o)?))
    }

    fn asymmetry(&self) -> f64 {
        kb::lr_asymmetry(&self.decay, &self.inner)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// Samples `n` pairs and returns counts, expected probabilities and the chi-square p-value.
    #[pyo3(signature = (n, seed = 1))]
    fn sample<'py>(&self, py: Python<'py>, n: u64, seed: u64) -> PyResult<Bound<'py, PyDict>> {
        let config = kb::SamplerConfig {
            seed,
            n_samples: n,
            model: self.inner,
        };
        let table = py
            .detach(|| kb::sample_pairs(&self.decay, &config))
            .map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("counts", table.counts.to_vec())?;
        d.set_item("expected", table.expected.to_vec())?;
        d.set_item("frequencies", table.frequencies.to_vec())?;
        d.set_item("std_errors", table.std_errors.to_vec())?;
        d.set_item("chi_square_p_value", table.chi_square_p_value())?;
        d.set_item("generator", table.generator.clone())?;
        if let Some(a) = table.asymmetry() {
            d.set_item("asymmetry", (a.value, a.std_error))?;
        }
        Ok(d)
    }
}

#[pyfunction]
#[pyo3(signature = (tau, params = None))]
fn survival(tau: f64, params: Option<PyRef<'_, PyDecayParams>>) -> PyResult<(f64, f64)> {
    kb::survival(&self::params(params), tau).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (tau, params = None))]
fn q_weights(tau: f64, params: Option<PyRef<'_, PyDecayParams>>) -> PyResult<(f64, f64)> {
    kb::q_weights(&self::params(params), tau).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (o1, o2, tau1, tau2, params = None))]
fn qm_joint(
    o1: &str,
    o2: &str,
    tau1: f64,
    tau2: f64,
    params: Option<PyRef<'_, PyDecayParams>>,
) -> PyResult<f64> {
    Ok(kb::qm_joint(
        &self::params(params),
        outcome(o1)?,
        outcome(o2)?,
        tau1,
        tau2,
    )
    .map_err(err)?
    .value)
}

#[pyfunction]
#[pyo3(signature = (o, tau, params = None))]
fn qm_single(o: &str, tau: f64, params: Option<PyRef<'_, PyDecayParams>>) -> PyResult<f64> {
    kb::qm_single(&self::params(params), outcome(o)?, tau).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (dtau, params = None))]
fn qm_asymmetry(dtau: f64, params: Option<PyRef<'_, PyDecayParams>>) -> PyResult<f64> {
    kb::qm_asymmetry(&self::params(params), dtau).map_err(err)
}

/// `(lo, hi)` of the asymmetries reachable by local-realistic models.
#[pyfunction]
#[pyo3(signature = (tau1, tau2, params = None))]
fn lr_asymmetry_bounds(
    tau1: f64,
    tau2: f64,
    params: Option<PyRef<'_, PyDecayParams>>,
) -> PyResult<(f64, f64)> {
    let b = kb::lr_asymmetry_bounds(&self::params(params), tau1, tau2).map_err(err)?;
    Ok((b.lo, b.hi))
}

#[pyfunction]
fn locality_max_ratio(velocity: f64) -> PyResult<f64> {
    kb::locality_max_ratio(velocity).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (tau, p = 1.5, params = None))]
fn wigner_w_kaon(tau: f64, p: f64, params: Option<PyRef<'_, PyDecayParams>>) -> PyResult<f64> {
    let cfg = kb::WignerConfig::new(p).map_err(err)?;
    Ok(kb::wigner_w_kaon(&self::params(params), tau, &cfg)
        .map_err(err)?
        .w)
}

#[pyfunction]
fn wigner_w_spin(theta: f64) -> PyResult<f64> {
    Ok(kb::wigner_w_spin(theta).map_err(err)?.w)
}

#[pyfunction]
#[pyo3(signature = (tau, p = 1.0, renormalized = true, params = None))]
fn chsh_s(
    tau: f64,
    p: f64,
    renormalized: bool,
    params: Option<PyRef<'_, PyDecayParams>>,
) -> PyResult<f64> {
    let cfg = kb::ChshConfig::new(p, renormalized).map_err(err)?;
    Ok(kb::chsh_s(&self::params(params), tau, &cfg).map_err(err)?.s)
}

fn extremum_dict<'py>(py: Python<'py>, x: &ExtremumResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("location", x.location)?;
    d.set_item("value", x.value)?;
    let ctx = PyDict::new(py);
    for (k, v) in &x.context {
        ctx.set_item(k, v)?;
    }
    d.set_item("context", ctx)?;
    Ok(d)
}

fn spec(lo: f64, hi: f64, steps: usize) -> PyResult<kb::ScanSpec> {
    kb::ScanSpec::new(lo, hi, steps).map_err(err)
}

/// Returns `(extremum, csv_text)`.
#[pyfunction]
#[pyo3(signature = (alpha, lo = 0.0, hi = 5.0, steps = 2000, params = None))]
fn asymmetry_discrepancy_scan<'py>(
    py: Python<'py>,
    alpha: f64,
    lo: f64,
    hi: f64,
    steps: usize,
    params: Option<PyRef<'_, PyDecayParams>>,
) -> PyResult<(Bound<'py, PyDict>, String)> {
    let p = self::params(params);
    let s = spec(lo, hi, steps)?;
    let out = py
        .detach(|| kb::asymmetry_discrepancy_scan(&p, alpha, &s))
        .map_err(err)?;
    Ok((extremum_dict(py, &out.extremum)?, out.table.to_csv_string()))
}

/// Returns `(extremum, csv_text)`.
#[pyfunction]
#[pyo3(signature = (p = 1.5, lo = 0.0, hi = 5.0, steps = 2000, params = None))]
fn wigner_scan<'py>(
    py: Python<'py>,
    p: f64,
    lo: f64,
    hi: f64,
    steps: usize,
    params: Option<PyRef<'_, PyDecayParams>>,
) -> PyResult<(Bound<'py, PyDict>, String)> {
    let decay = self::params(params);
    let cfg = kb::WignerConfig::new(p).map_err(err)?;
    let s = spec(lo, hi, steps)?;
    let out = py
        .detach(|| kb::wigner_scan(&decay, &cfg, &s))
        .map_err(err)?;
    Ok((extremum_dict(py, &out.extremum)?, out.table.to_csv_string()))
}

/// Returns `(minimum, maximum, csv_text)`.
#[pyfunction]
#[pyo3(signature = (p = 1.0, renormalized = true, lo = 0.0, hi = 5.0, steps = 2000, params = None))]
fn chsh_scan<'py>(
    py: Python<'py>,
    p: f64,
    renormalized: bool,
    lo: f64,
    hi: f64,
    steps: usize,
    params: Option<PyRef<'_, PyDecayParams>>,
) -> PyResult<(Bound<'py, PyDict>, Bound<'py, PyDict>, String)> {
    let decay = self::params(params);
    let cfg = kb::ChshConfig::new(p, renormalized).map_err(err)?;
    let s = spec(lo, hi, steps)?;
    let out = py.detach(|| kb::chsh_scan(&decay, &cfg, &s)).map_err(err)?;
    Ok((
        extremum_dict(py, &out.min)?,
        extremum_dict(py, &out.max)?,
        out.table.to_csv_string(),
    ))
}

/// CPLEAR comparison as a JSON string.
#[pyfunction]
#[pyo3(signature = (params = None))]
fn cplear_compare(params: Option<PyRef<'_, PyDecayParams>>) -> PyResult<String> {
    let report = kb::cplear_compare(&self::params(params)).map_err(err)?;
    Ok(serde_json::to_string(&report).expect("report serializes"))
}

#[pymodule]
fn kaonbell_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDecayParams>()?;
    m.add_class::<PyLrModel>()?;
    m.add_function(wrap_pyfunction!(survival, m)?)?;
    m.add_function(wrap_pyfunction!(q_weights, m)?)?;
    m.add_function(wrap_pyfunction!(qm_joint, m)?)?;
    m.add_function(wrap_pyfunction!(qm_single, m)?)?;
    m.add_function(wrap_pyfunction!(qm_asymmetry, m)?)?;
    m.add_function(wrap_pyfunction!(lr_asymmetry_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(locality_max_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(wigner_w_kaon, m)?)?;
    m.add_function(wrap_pyfunction!(wigner_w_spin, m)?)?;
    m.add_function(wrap_pyfunction!(chsh_s, m)?)?;
    m.add_function(wrap_pyfunction!(asymmetry_discrepancy_scan, m)?)?;
    m.add_function(wrap_pyfunction!(wigner_scan, m)?)?;
    m.add_function(wrap_pyfunction!(chsh_scan, m)?)?;
    m.add_function(wrap_pyfunction!(cplear_compare, m)?)?;
    Ok(())
}
