//! Python bindings: parameters, spectral fields, simulation runs, the
//! dispersion table and the oracle suite.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tumorstrip::diagnostics;
use tumorstrip::oracle::{self, suite};
use tumorstrip::spectral;
use tumorstrip::{ForcingMode, RunConfig};

fn value_error(e: tumorstrip::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Model parameters; `M` defaults to `4K`.
#[pyclass(name = "ModelParams", module = "tumorstrip_py", skip_from_py_object)]
#[derive(Clone)]
pub struct Params {
    inner: tumorstrip::ModelParams,
}

#[pymethods]
impl Params {
    #[new]
    #[pyo3(signature = (
        epsilon = 0.1, eta = 1.0, theta = 1.0, rho = 1.0, tau = 1.0, N = 1.0,
        c_B = 0.5, c_S = 1.0, K = 128, M = None, j1_cosh_variant = false
    ))]
    #[allow(non_snake_case, clippy::too_many_arguments)]
    fn new(
        epsilon: f64,
        eta: f64,
        theta: f64,
        rho: f64,
        tau: f64,
        N: f64,
        c_B: f64,
        c_S: f64,
        K: usize,
        M: Option<usize>,
        j1_cosh_variant: bool,
    ) -> PyResult<Self> {
        let inner = tumorstrip::ModelParams {
            epsilon,
            eta,
            theta,
            rho,
            tau,
            big_n: N,
            c_b: c_B,
            c_s: c_S,
            kmax: K,
            m: M.unwrap_or(4 * K),
            j1_cosh_variant,
        };
        inner.validate().map_err(value_error)?;
        Ok(Self { inner })
    }

    #[getter]
    fn epsilon(&self) -> f64 {
        self.inner.epsilon
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.inner.eta
    }

    #[getter(K)]
    fn kmax(&self) -> usize {
        self.inner.kmax
    }

    #[getter(M)]
    fn grid_size(&self) -> usize {
        self.inner.m
    }

    /// Same parameters serialized with the config-file key names.
    fn to_json(&self) -> PyResult<String> {
        tumorstrip::cli::pretty(&self.inner).map_err(value_error)
    }

    fn __repr__(&self) -> PyResult<String> {
        Ok(format!("ModelParams({})", self.to_json()?.trim_end()))
    }
}

/// Real periodic field stored by its Fourier coefficients `|k| ≤ K`.
#[pyclass(name = "SpectralField", module = "tumorstrip_py", skip_from_py_object)]
#[derive(Clone)]
pub struct Field {
    inner: spectral::SpectralField,
}

#[pymethods]
impl Field {
    /// Builds a field from `(k, re, im)` triples with `k ≥ 0`; conjugates are implied.
    #[staticmethod]
    fn from_coefficients(kmax: usize, triples: Vec<(i64, f64, f64)>) -> PyResult<Self> {
        let mut f = spectral::SpectralField::zeros(kmax);
        for (k, re, im) in triples {
            if k < 0 || k as usize > kmax {
                return Err(PyValueError::new_err(format!("mode {k} outside 0..={kmax}")));
            }
            if k == 0 && im != 0.0 {
                return Err(PyValueError::new_err("the mean (k = 0) must be real"));
            }
            f.set_mode(k, Complex64::new(re, im));
        }
        Ok(Self { inner: f })
    }

    /// `amp · cos(k (x - phase))`.
    #[staticmethod]
    #[pyo3(signature = (kmax, k, amp, phase = 0.0))]
    fn cosine(kmax: usize, k: i64, amp: f64, phase: f64) -> Self {
        Self {
            inner: spectral::SpectralField::cosine_shifted(kmax, k, amp, phase),
        }
    }

    #[staticmethod]
    fn zeros(kmax: usize) -> Self {
        Self {
            inner: spectral::SpectralField::zeros(kmax),
        }
    }

    #[getter]
    fn kmax(&self) -> usize {
        self.inner.kmax()
    }

    /// `(k, re, im)` for `k = 0..=K`.
    fn coefficients(&self) -> Vec<(i64, f64, f64)> {
        (0..=self.inner.kmax() as i64)
            .map(|k| {
                let c = self.inner.coeff(k);
                (k, c.re, c.im)
            })
            .collect()
    }

    /// `Σ |k|^j |v̂(k)|`.
    #[pyo3(signature = (j = 0))]
    fn wiener_norm(&self, j: u32) -> f64 {
        self.inner.wiener_norm(j)
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    /// Value at a point `x`.
    fn __call__(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    /// Samples on an `m`-point grid starting at `-π`.
    fn synthesize(&self, m: usize) -> PyResult<Vec<f64>> {
        spectral::Grid::new(m).synthesize(&self.inner).map_err(value_error)
    }

    fn __neg__(&self) -> Self {
        Self { inner: -&self.inner }
    }

    fn __add__(&self, other: &Field) -> Self {
        Self {
            inner: &self.inner + &other.inner,
        }
    }

    fn __sub__(&self, other: &Field) -> Self {
        Self {
            inner: &self.inner - &other.inner,
        }
    }

    fn __mul__(&self, s: f64) -> Self {
        Self { inner: &self.inner * s }
    }

    fn __repr__(&self) -> String {
        format!("SpectralField(kmax={}, E0={:.6e})", self.inner.kmax(), self.inner.wiener_norm(0))
    }
}

/// Result of [`simulate`].
#[pyclass(name = "Trajectory", module = "tumorstrip_py", get_all)]
pub struct Trajectory {
    /// `horizon_reached`, `collision`, `energy_blowup` or `nan`.
    termination: String,
    exit_code: i32,
    /// One dict per output time with the series columns.
    records: Vec<HashMap<String, f64>>,
    final_u: Field,
    final_v: Field,
}

#[pymethods]
impl Trajectory {
    fn column(&self, name: &str) -> PyResult<Vec<f64>> {
        self.records
            .iter()
            .map(|r| r.get(name).copied())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| PyValueError::new_err(format!("unknown column `{name}`")))
    }

    fn __len__(&self) -> usize {
        self.records.len()
    }
}

fn forcing_mode(name: &str) -> PyResult<ForcingMode> {
    match name {
        "full" => Ok(ForcingMode::Full),
        "simplified" => Ok(ForcingMode::Simplified),
        other => Err(PyValueError::new_err(format!(
            "forcing_mode must be `full` or `simplified`, got `{other}`"
        ))),
    }
}

#[pyfunction]
#[pyo3(signature = (
    params, u0, v0, dt = 1e-3, t_end = 1.0, output_every = 10, forcing_mode = "full",
    project_zero_mean = false, collision_threshold = 0.0, energy_blowup_threshold = 1e6
))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    py: Python<'_>,
    params: &Params,
    u0: &Field,
    v0: &Field,
    dt: f64,
    t_end: f64,
    output_every: usize,
    forcing_mode: &str,
    project_zero_mean: bool,
    collision_threshold: f64,
    energy_blowup_threshold: f64,
) -> PyResult<Trajectory> {
    let cfg = RunConfig {
        dt,
        t_end,
        output_every,
        forcing_mode: self::forcing_mode(forcing_mode)?,
        project_zero_mean,
        collision_threshold,
        energy_blowup_threshold,
        ..RunConfig::new(params.inner.clone(), u0.inner.clone(), v0.inner.clone())
    };
    let traj = py.detach(|| tumorstrip::run(&cfg)).map_err(value_error)?;
    let names = diagnostics::DiagnosticsRecord::CSV_HEADER.split(',');
    let records = traj
        .records
        .iter()
        .map(|r| names.clone().map(str::to_string).zip(r.values()).collect())
        .collect();
    let last = traj.final_state();
    Ok(Trajectory {
        termination: traj.termination.as_str().to_string(),
        exit_code: traj.termination.exit_code(),
        records,
        final_u: Field { inner: last.u.clone() },
        final_v: Field { inner: last.v.clone() },
    })
}

/// Rows `(k, λ₊, λ₋)` for `k = 0..=kmax`.
#[pyfunction]
fn dispersion_table(params: &Params, kmax: usize) -> Vec<(i64, f64, f64)> {
    diagnostics::dispersion_table(&params.inner, kmax)
        .into_iter()
        .map(|r| (r.k, r.lambda_plus, r.lambda_minus))
        .collect()
}

#[pyfunction]
fn commutator_multiplier(k: i64, m: i64) -> f64 {
    diagnostics::commutator_multiplier(k, m)
}

#[pyfunction]
fn commutator_failures(bound: i64) -> Vec<(i64, i64)> {
    diagnostics::commutator_failures(bound)
}

/// `(|k| coth|k|, |k| / sinh|k|)`.
#[pyfunction]
fn theta_symbols(k: i64) -> (f64, f64) {
    spectral::theta_symbols(k)
}

/// ℓ¹ deviations `(top, bottom)` between the two order-0 interface velocity routes.
#[pyfunction]
fn verify_order0_boundary(h: &Field, b: &Field, t: f64, params: &Params) -> (f64, f64) {
    let d = oracle::verify_order0_boundary(&h.inner, &b.inner, t, &params.inner);
    (d.top, d.bot)
}

#[pyclass(name = "Check", module = "tumorstrip_py", get_all)]
pub struct Check {
    name: String,
    max_deviation: f64,
    tolerance: f64,
    passed: bool,
    gating: bool,
}

#[pymethods]
impl Check {
    fn __repr__(&self) -> String {
        format!(
            "Check({}, deviation={:.3e}, tolerance={:.1e}, passed={}, gating={})",
            self.name, self.max_deviation, self.tolerance, self.passed, self.gating
        )
    }
}

/// Runs the oracle suite; returns `(all gating checks passed, checks)`.
#[pyfunction]
#[pyo3(signature = (params, K = 32, nodes = 129, datasets = 10, seed = 20240601, tolerances = None))]
#[allow(non_snake_case)]
fn verify(
    py: Python<'_>,
    params: &Params,
    K: usize,
    nodes: usize,
    datasets: usize,
    seed: u64,
    tolerances: Option<BTreeMap<String, f64>>,
) -> PyResult<(bool, Vec<Check>)> {
    let settings = suite::VerifySettings {
        kmax: K,
        nodes,
        datasets,
        seed,
        tolerance_overrides: tolerances.unwrap_or_default(),
    };
    let report = py
        .detach(|| suite::run_suite(&params.inner, &settings))
        .map_err(value_error)?;
    let checks = report
        .checks
        .into_iter()
        .map(|c| Check {
            name: c.name,
            max_deviation: c.max_deviation,
            tolerance: c.tolerance,
            passed: c.pass,
            gating: c.gating,
        })
        .collect();
    Ok((report.pass, checks))
}

#[pymodule]
fn tumorstrip_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Params>()?;
    m.add_class::<Field>()?;
    m.add_class::<Trajectory>()?;
    m.add_class::<Check>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(dispersion_table, m)?)?;
    m.add_function(wrap_pyfunction!(commutator_multiplier, m)?)?;
    m.add_function(wrap_pyfunction!(commutator_failures, m)?)?;
    m.add_function(wrap_pyfunction!(theta_symbols, m)?)?;
    m.add_function(wrap_pyfunction!(verify_order0_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
