//! Python bindings for divisor-lab.

use num_complex::Complex64;
use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use divisor_lab::approx;
use divisor_lab::divisor;
use divisor_lab::harness::{self, scan, verify};
use divisor_lab::mean_value::{self as mv, PsiParams, PsiWeights};
use divisor_lab::osc::{self, OscSpec, PhaseSign};
use divisor_lab::sawtooth;
use divisor_lab::shift;
use divisor_lab::{Error, Rational};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) => PyValueError::new_err(e.to_string()),
        Error::Overflow(_) => PyOverflowError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for divisor_lab::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn rational(num: i64, den: i64) -> PyResult<Rational> {
    Rational::new(num, den).py()
}

fn sign(s: &str) -> PyResult<PhaseSign> {
    match s {
        "paper" => Ok(PhaseSign::Paper),
        "stationary" => Ok(PhaseSign::Stationary),
        _ => Err(PyValueError::new_err(format!("sign must be 'paper' or 'stationary', got {s:?}"))),
    }
}

/// D(x) = Σ_{n≤x} τ(n).
#[pyfunction]
fn divisor_sum(x: u64) -> PyResult<u64> {
    divisor::divisor_sum_exact(x).py()
}

#[pyfunction]
fn tau(n: u64) -> PyResult<u32> {
    divisor::tau(n).py()
}

/// Sieved τ(n) for lo ≤ n ≤ hi.
#[pyfunction]
fn tau_range(lo: u64, hi: u64) -> PyResult<Vec<u32>> {
    Ok(divisor::tau_sieve(lo, hi).py()?.values().to_vec())
}

#[pyfunction]
fn lattice_count(x: f64) -> PyResult<u64> {
    divisor::lattice_count(x).py()
}

#[pyfunction]
fn main_term(x: f64) -> PyResult<f64> {
    divisor::main_term(x).py()
}

/// (D(x), main term, Δ(x)).
#[pyfunction]
fn delta(x: u64) -> PyResult<(u64, f64, f64)> {
    let e = divisor::delta(x).py()?;
    Ok((e.d, e.main.to_f64(), e.delta))
}

#[pyfunction]
fn rho(x: f64) -> f64 {
    sawtooth::rho(x)
}

#[pyfunction]
fn rho1(x: f64, delta0: f64) -> PyResult<f64> {
    sawtooth::rho1(x, delta0).py()
}

/// Truncated Fourier series of ρ₁ with M terms: (value, tail bound).
#[pyfunction]
fn rho1_series(x: f64, delta0: f64, trunc_m: usize) -> PyResult<(f64, f64)> {
    let k = sawtooth::SmoothKernel::new(delta0, trunc_m).py()?;
    Ok(sawtooth::rho1_series(x, &k))
}

#[pyfunction]
fn s_sum(x: f64, alpha: f64) -> PyResult<f64> {
    shift::s_sum(x, alpha).py()
}

/// Window average of S(x, α) for rational x = num/den.
#[pyfunction]
fn sigma_smoothed(num: i64, den: i64, u: f64, delta: f64) -> PyResult<f64> {
    shift::sigma_smoothed(rational(num, den)?, u, delta).py()
}

/// α in [lo, hi) where x/(a + α) is an integer, as (b, numerator, denominator).
#[pyfunction]
fn breakpoints(num: i64, den: i64, a: u64, lo: f64, hi: f64) -> PyResult<Vec<(u64, i64, i64)>> {
    let bps = shift::breakpoints(rational(num, den)?, a, lo, hi).py()?;
    Ok(bps.into_iter().map(|b| (b.b, b.alpha.numer(), b.alpha.denom())).collect())
}

/// Integer points (u, v) on (u + a/q)v = x.
#[pyfunction]
fn shifted_lattice(x: u64, a: i64, q: i64) -> PyResult<Vec<(u64, u64)>> {
    shift::shifted_lattice_rational(x, rational(a, q)?).py()
}

#[pyfunction]
#[pyo3(signature = (x, xi, tol=0.0))]
fn shifted_lattice_real(x: u64, xi: f64, tol: f64) -> PyResult<Vec<(u64, u64)>> {
    shift::shifted_lattice_real(x, xi, tol).py()
}

/// (theta, |S(x+theta, 0)|, |S(x, 0)|).
#[pyfunction]
#[pyo3(signature = (x, theta_max, step=0.5))]
fn shift_search(x: u64, theta_max: f64, step: f64) -> PyResult<(f64, f64, f64)> {
    let s = shift::shift_search(x, theta_max, step).py()?;
    Ok((s.theta, s.value, s.baseline))
}

/// (a, q, |ξ − a/q|).
#[pyfunction]
fn approx_1d(xi: f64, tau: f64) -> PyResult<(u64, u64, f64)> {
    let r = approx::approx_1d(xi, tau).py()?;
    Ok((r.a, r.q, r.error))
}

#[pyclass(frozen, get_all)]
struct SimulApprox {
    a: u64,
    b: u64,
    q: u64,
    err_xi: f64,
    err_eta: f64,
    valid: bool,
}

#[pymethods]
impl SimulApprox {
    fn __repr__(&self) -> String {
        format!("SimulApprox(a={}, b={}, q={}, err_xi={:e}, err_eta={:e})", self.a, self.b, self.q, self.err_xi, self.err_eta)
    }
}

#[pyfunction]
fn approx_2d(xi: f64, eta: f64, tau: f64) -> PyResult<SimulApprox> {
    let r = approx::approx_2d(xi, eta, tau).py()?;
    Ok(SimulApprox { a: r.a, b: r.b, q: r.q, err_xi: r.err_xi, err_eta: r.err_eta, valid: r.satisfies_invariants(xi, eta) })
}

/// ∫ e^{2πi φ(u)} du over [N, 2N+1] for the hyperbolic phase.
#[pyfunction]
#[pyo3(signature = (m, p, n, x, sign="stationary", tol=1e-9))]
fn i_pm(m: u64, p: i64, n: f64, x: f64, sign: &str, tol: f64) -> PyResult<Complex64> {
    osc::i_pm(&OscSpec { m, p, n, x, sign: self::sign(sign)? }, tol).py()
}

/// Leading stationary-phase term, or None when u* is outside [N, 2N+1].
#[pyfunction]
#[pyo3(signature = (m, p, n, x, sign="stationary"))]
fn i_pm_stationary(m: u64, p: i64, n: f64, x: f64, sign: &str) -> PyResult<Option<Complex64>> {
    let st = osc::i_pm_stationary(&OscSpec { m, p, n, x, sign: self::sign(sign)? }).py()?;
    Ok(st.valid.then_some(st.main))
}

/// Smoothed double sum S_N(x, u): (value, tail bound).
#[pyfunction]
#[pyo3(signature = (x, u, n, delta0, trunc_m, k, delta))]
fn s_n_sum(x: f64, u: f64, n: f64, delta0: f64, trunc_m: usize, k: u32, delta: f64) -> PyResult<(Complex64, f64)> {
    let v = osc::s_n_sum(&osc::SNParams { x, u, n, delta0, trunc_m, k, delta }).py()?;
    Ok((v.value, v.tail_bound))
}

/// Coefficients ψ(1), ψ(2), … for the given N, x, k, Δ.
#[pyfunction]
#[pyo3(signature = (n, x, k=2, delta=0.01))]
fn psi_weights(n: f64, x: f64, k: u32, delta: f64) -> PyResult<Vec<f64>> {
    Ok(mv::psi_weights(PsiParams { n, x, k, delta }).py()?.values().to_vec())
}

#[pyclass(frozen, get_all)]
struct MeanValue {
    r: f64,
    direct: f64,
    parseval: f64,
    a0: Complex64,
    s_trunc: u64,
    tail_bound: f64,
}

#[pymethods]
impl MeanValue {
    fn __repr__(&self) -> String {
        format!(
            "MeanValue(r={}, direct={}, parseval={}, tail_bound={:e}, s_trunc={})",
            self.r, self.direct, self.parseval, self.tail_bound, self.s_trunc
        )
    }
}

/// I_r for weights ψ(n) = weights[n-1], directly and through Parseval.
#[pyfunction]
#[pyo3(signature = (r, weights, target=1e-9, tol=1e-12))]
fn mean_value(r: f64, weights: Vec<f64>, target: f64, tol: f64) -> PyResult<MeanValue> {
    let w = PsiWeights::from_values(weights);
    let m = mv::mean_value(r, &w, target, tol).py()?;
    Ok(MeanValue { r: m.r, direct: m.direct, parseval: m.parseval, a0: m.a0, s_trunc: m.s_trunc, tail_bound: m.tail_bound })
}

/// Rows (x, D, main, delta, ratios, s_sum0, residual_c1, residual_c2).
#[pyfunction]
#[pyo3(signature = (lo, hi, step="1", thetas=vec![0.25, 1.0 / 3.0], workers=1))]
#[allow(clippy::type_complexity)]
fn scan_range(
    lo: u64,
    hi: u64,
    step: &str,
    thetas: Vec<f64>,
    workers: usize,
) -> PyResult<Vec<(u64, u64, f64, f64, Vec<f64>, f64, f64, f64)>> {
    let step: scan::Step = step.parse().py()?;
    let rows = scan::scan(&scan::ScanConfig { lo, hi, step, thetas, workers }).py()?;
    Ok(rows
        .into_iter()
        .map(|r| (r.x, r.d, r.main, r.delta, r.ratios, r.s_sum0, r.residual_c1, r.residual_c2))
        .collect())
}

/// sup |Δ(x) − c S(x, 0)| for c = 1, 2: ([(c, sup, at_x), ...], chosen c or None).
#[pyfunction]
#[pyo3(signature = (lo=1000, hi=1_000_000, per_decade=200))]
fn residual_probe(lo: u64, hi: u64, per_decade: u32) -> PyResult<(Vec<(u8, f64, u64)>, Option<u8>)> {
    let xs = harness::residual_grid(lo, hi, per_decade).py()?;
    let rep = harness::residual_probe(&xs).py()?;
    Ok((rep.families.iter().map(|f| (f.c, f.sup, f.at_x)).collect(), rep.chosen))
}

/// Run a seeded property suite: (passed, cases, failures).
#[pyfunction]
#[pyo3(signature = (suite, seed=1, cases=100))]
fn run_suite(suite: &str, seed: u64, cases: usize) -> PyResult<(usize, usize, Vec<String>)> {
    let s: verify::Suite = suite.parse().py()?;
    let rep = verify::run(s, seed, cases).py()?;
    Ok((rep.passed, rep.cases, rep.failures))
}

#[pymodule]
fn divisor_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<SimulApprox>()?;
    m.add_class::<MeanValue>()?;
    m.add_function(wrap_pyfunction!(divisor_sum, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(tau_range, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_count, m)?)?;
    m.add_function(wrap_pyfunction!(main_term, m)?)?;
    m.add_function(wrap_pyfunction!(delta, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(rho1, m)?)?;
    m.add_function(wrap_pyfunction!(rho1_series, m)?)?;
    m.add_function(wrap_pyfunction!(s_sum, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_smoothed, m)?)?;
    m.add_function(wrap_pyfunction!(breakpoints, m)?)?;
    m.add_function(wrap_pyfunction!(shifted_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(shifted_lattice_real, m)?)?;
    m.add_function(wrap_pyfunction!(shift_search, m)?)?;
    m.add_function(wrap_pyfunction!(approx_1d, m)?)?;
    m.add_function(wrap_pyfunction!(approx_2d, m)?)?;
    m.add_function(wrap_pyfunction!(i_pm, m)?)?;
    m.add_function(wrap_pyfunction!(i_pm_stationary, m)?)?;
    m.add_function(wrap_pyfunction!(s_n_sum, m)?)?;
    m.add_function(wrap_pyfunction!(psi_weights, m)?)?;
    m.add_function(wrap_pyfunction!(mean_value, m)?)?;
    m.add_function(wrap_pyfunction!(scan_range, m)?)?;
    m.add_function(wrap_pyfunction!(residual_probe, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
