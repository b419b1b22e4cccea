//! Python bindings for the `barnes` crate.

use barnes::{EtaMethod, Mode, MomentSign, QuadratureSpec, SamplerConfig, ShintaniVariant};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(barnes_beta, BarnesError, PyValueError);

fn err(e: barnes::Error) -> PyErr {
    BarnesError::new_err(e.to_string())
}

fn quad(tol: Option<f64>) -> QuadratureSpec {
    let mut q = QuadratureSpec::default();
    if let Some(t) = tol {
        q.abs_tol = t;
        q.rel_tol = t;
    }
    q
}

fn method(name: &str) -> PyResult<EtaMethod> {
    match name {
        "direct-sn" => Ok(EtaMethod::DirectSn),
        "levy-integral" => Ok(EtaMethod::LevyIntegral),
        "shintani-k" => Ok(EtaMethod::ShintaniK),
        other => Err(PyValueError::new_err(format!("unknown method {other:?}; use direct-sn, levy-integral or shintani-k"))),
    }
}

/// Barnes beta distribution β_{M,N}(a, b).
#[pyclass(name = "BarnesBeta", module = "barnes_beta", frozen)]
struct PyBarnesBeta {
    inner: barnes::BarnesBeta,
}

#[pymethods]
impl PyBarnesBeta {
    #[new]
    #[pyo3(signature = (a, b, analytic = false, tol = None))]
    fn new(a: Vec<f64>, b: Vec<f64>, analytic: bool, tol: Option<f64>) -> PyResult<Self> {
        let params = if analytic {
            barnes::BetaParams::analytic(a, b)
        } else {
            barnes::BetaParams::probabilistic(a, b)
        }
        .map_err(err)?;
        Ok(Self {
            inner: barnes::BarnesBeta::new(params, quad(tol)).map_err(err)?,
        })
    }

    #[getter]
    fn a(&self) -> Vec<f64> {
        self.inner.params().a().to_vec()
    }

    #[getter]
    fn b(&self) -> Vec<f64> {
        self.inner.params().b().to_vec()
    }

    #[getter]
    fn analytic(&self) -> bool {
        self.inner.params().mode() == Mode::Analytic
    }

    /// E[β^q]; `method` is "direct-sn", "levy-integral" or "shintani-k".
    #[pyo3(signature = (q, method = "direct-sn"))]
    fn eta(&self, q: Complex64, method: &str) -> PyResult<Complex64> {
        Ok(self.inner.mellin_eta(q, self::method(method)?).map_err(err)?.value)
    }

    fn log_eta(&self, q: Complex64) -> PyResult<Complex64> {
        Ok(self.inner.log_eta(q).map_err(err)?.value)
    }

    /// Truncated Shintani product; `variant` is 1, 2 or 3, `j` indexes b.
    #[pyo3(signature = (q, variant = 1, i = 0, j = None))]
    fn shintani(&self, q: Complex64, variant: u8, i: usize, j: Option<usize>) -> PyResult<Complex64> {
        let variant = ShintaniVariant::from_index(variant).ok_or_else(|| PyValueError::new_err("variant must be 1, 2 or 3"))?;
        Ok(self.inner.shintani_product(q, variant, i, j).map_err(err)?.value)
    }

    #[pyo3(signature = (k, i = 0, negative = false))]
    fn moment(&self, k: usize, i: usize, negative: bool) -> PyResult<f64> {
        let sign = if negative { MomentSign::Negative } else { MomentSign::Positive };
        self.inner.integer_moment(i, k, sign).map_err(err)
    }

    /// E[exp(-x β^{-a_i})] from its moment series.
    #[pyo3(signature = (x, i = 0))]
    fn laplace(&self, x: f64, i: usize) -> PyResult<f64> {
        self.inner.laplace_series(i, x).map_err(err)
    }

    /// (lhs, rhs, relative difference) of the Ramanujan-type identity at q.
    #[pyo3(signature = (q, i = 0))]
    fn ramanujan(&self, q: f64, i: usize) -> PyResult<(f64, f64, f64)> {
        let c = self.inner.ramanujan_check(i, q).map_err(err)?;
        Ok((c.lhs, c.rhs, c.rel_diff))
    }

    fn atom_probability(&self) -> PyResult<f64> {
        self.inner.atom_probability().map_err(err)
    }

    /// Lévy density k(t); the Lévy measure is k(t) dt / t.
    fn levy_density(&self, t: f64) -> f64 {
        self.inner.kernel(t)
    }

    #[pyo3(signature = (n, seed = 0, epsilon = 1e-6))]
    fn sample(&self, py: Python<'_>, n: usize, seed: u64, epsilon: f64) -> PyResult<Vec<f64>> {
        let config = SamplerConfig {
            epsilon,
            ..SamplerConfig::with_seed(seed)
        };
        let params = self.inner.params().clone();
        let q = *self.inner.quad();
        py.detach(|| barnes::sample(&params, n, config, &q)).map(|b| b.values).map_err(err)
    }

    fn __repr__(&self) -> String {
        let p = self.inner.params();
        format!("BarnesBeta(a={:?}, b={:?}, analytic={})", p.a(), p.b(), p.mode() == Mode::Analytic)
    }
}

/// log Γ_M(w | a).
#[pyfunction]
#[pyo3(signature = (a, w, tol = None))]
fn log_gamma(a: Vec<f64>, w: Complex64, tol: Option<f64>) -> PyResult<Complex64> {
    let params = barnes::GammaParams::new(a).map_err(err)?;
    barnes::log_gamma_m(&params, w, &quad(tol)).map_err(err)
}

/// Γ_M(w | a).
#[pyfunction]
#[pyo3(signature = (a, w, tol = None))]
fn gamma(a: Vec<f64>, w: Complex64, tol: Option<f64>) -> PyResult<Complex64> {
    let params = barnes::GammaParams::new(a).map_err(err)?;
    barnes::gamma_m(&params, w, &quad(tol)).map_err(err)
}

fn selberg_params(mu: f64, lambda1: f64, lambda2: f64, l: Option<u32>) -> PyResult<barnes::SelbergParams> {
    barnes::SelbergParams::new(mu, lambda1, lambda2, l).map_err(err)
}

/// Selberg's closed form S_{μ,l}[s^{λ1} (1-s)^{λ2}].
#[pyfunction]
fn selberg_product(mu: f64, lambda1: f64, lambda2: f64, l: u32) -> PyResult<f64> {
    barnes::selberg_product(&selberg_params(mu, lambda1, lambda2, Some(l))?).map_err(err)
}

/// (estimate, standard error) of the Selberg average.
#[pyfunction]
#[pyo3(signature = (mu, lambda1, lambda2, l, n, seed = 0))]
fn selberg_average(py: Python<'_>, mu: f64, lambda1: f64, lambda2: f64, l: u32, n: usize, seed: u64) -> PyResult<(f64, f64)> {
    let p = selberg_params(mu, lambda1, lambda2, Some(l))?;
    let mc = py.detach(|| barnes::selberg_average_mc(&p, n, seed)).map_err(err)?;
    Ok((mc.estimate, mc.std_error))
}

/// E[M^q] for M_(μ,λ1,λ2).
#[pyfunction]
fn mellin_m(mu: f64, lambda1: f64, lambda2: f64, q: Complex64) -> PyResult<Complex64> {
    barnes::mellin_m(&selberg_params(mu, lambda1, lambda2, None)?, q, &QuadratureSpec::default()).map_err(err)
}

/// Product of the Mellin transforms of the factors of M_(μ,λ1,λ2).
#[pyfunction]
fn factor_mellin_product(mu: f64, lambda1: f64, lambda2: f64, q: Complex64) -> PyResult<Complex64> {
    barnes::factor_mellin_product(&selberg_params(mu, lambda1, lambda2, None)?, q, &QuadratureSpec::default()).map_err(err)
}

#[pymodule]
fn barnes_beta(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BarnesError", m.py().get_type::<BarnesError>())?;
    m.add_class::<PyBarnesBeta>()?;
    m.add_function(wrap_pyfunction!(log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(selberg_product, m)?)?;
    m.add_function(wrap_pyfunction!(selberg_average, m)?)?;
    m.add_function(wrap_pyfunction!(mellin_m, m)?)?;
    m.add_function(wrap_pyfunction!(factor_mellin_product, m)?)?;
    Ok(())
}
