use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use amdkit::attacks::{self, BitCodeAdapter, Mode, Sampling};
use amdkit::codec::{self, AmdCode, AmdKind, Feasibility};
use amdkit::entropy::{avg_min_entropy, chain_rule_check, min_entropy, JointDistribution};
use amdkit::icm::{run_icm_experiment, IcmParams, IcmStrategy};
use amdkit::oracle;
use amdkit::rss::{self, RampParams, Share};
use amdkit::util::DEFAULT_WORK_BUDGET;
use amdkit::{AmdError, FieldSpec, Message, StrongAmdParams, WeakAmdParams};

pyo3::create_exception!(amdkit_py, CapacityError, PyRuntimeError);

fn err(e: AmdError) -> PyErr {
    match e {
        AmdError::Capacity { .. } => CapacityError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_dict<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyDict>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))?.cast_into::<PyDict>().map_err(Into::into)
}

fn kind(name: &str) -> PyResult<AmdKind> {
    name.parse().map_err(err)
}

/// A prime field GF(p) or a binary field GF(2^w).
#[pyclass(name = "Field", frozen)]
struct PyField {
    spec: FieldSpec,
}

#[pymethods]
impl PyField {
    /// Field of the given order (a prime or a power of two).
    #[new]
    fn new(order: u64) -> PyResult<Self> {
        Ok(Self { spec: FieldSpec::from_order(order).map_err(err)? })
    }

    #[getter]
    fn order(&self) -> u64 {
        self.spec.order()
    }

    #[getter]
    fn characteristic(&self) -> u64 {
        self.spec.characteristic()
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u64> {
        let (a, b) = (self.spec.element(a).map_err(err)?, self.spec.element(b).map_err(err)?);
        Ok((a + b).value())
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u64> {
        let (a, b) = (self.spec.element(a).map_err(err)?, self.spec.element(b).map_err(err)?);
        Ok((a * b).value())
    }

    fn inv(&self, a: u64) -> PyResult<u64> {
        Ok(self.spec.element(a).map_err(err)?.inv().map_err(err)?.value())
    }

    fn __repr__(&self) -> String {
        format!("Field('{}')", self.spec)
    }
}

fn check_len(what: &str, got: usize, want: usize) -> PyResult<()> {
    if got != want {
        return Err(PyValueError::new_err(format!("{what} has {got} symbols, expected {want}")));
    }
    Ok(())
}

fn check_values(spec: &FieldSpec, values: &[u64]) -> PyResult<()> {
    if let Some(v) = values.iter().find(|&&v| v >= spec.order()) {
        return Err(PyValueError::new_err(format!("{v} is not an element of {spec}")));
    }
    Ok(())
}

fn encode(code: &dyn AmdCode, m: &[u64], x: &[u64]) -> PyResult<Vec<u64>> {
    check_len("message", m.len(), code.message_len())?;
    check_len("randomness", x.len(), code.randomness_len())?;
    check_values(&code.field(), m)?;
    check_values(&code.field(), x)?;
    let mut out = vec![0; code.codeword_len()];
    code.encode_into(m, x, &mut out);
    Ok(out)
}

fn decode(code: &dyn AmdCode, c: &[u64]) -> PyResult<Option<Vec<u64>>> {
    check_len("codeword", c.len(), code.codeword_len())?;
    check_values(&code.field(), c)?;
    let mut m = vec![0; code.message_len()];
    Ok(code.decode_into(c, &mut m).then_some(m))
}

/// Strong AMD code `(m, x, f(m, x))` over GF(q).
#[pyclass(name = "StrongCode", frozen)]
struct PyStrongCode {
    params: StrongAmdParams,
}

#[pymethods]
impl PyStrongCode {
    #[new]
    fn new(q: u64, k: usize, sigma: usize) -> PyResult<Self> {
        let spec = FieldSpec::from_order(q).map_err(err)?;
        Ok(Self { params: StrongAmdParams::new(spec, k, sigma).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.params.n()
    }

    fn encode(&self, message: Vec<u64>, randomness: Vec<u64>) -> PyResult<Vec<u64>> {
        encode(&self.params, &message, &randomness)
    }

    /// The message, or None when tampering is detected.
    fn decode(&self, codeword: Vec<u64>) -> PyResult<Option<Vec<u64>>> {
        decode(&self.params, &codeword)
    }

    /// `q^(rho (k + 2 sigma) - sigma) (k+1)^sigma`.
    #[pyo3(signature = (rho = 0.0))]
    fn delta_bound(&self, rho: f64) -> f64 {
        codec::strong_delta_bound(&self.params, rho)
    }

    /// Exact error over all messages and offsets, as a report dict.
    #[pyo3(signature = (work_budget = DEFAULT_WORK_BUDGET))]
    fn exact_delta<'py>(&self, py: Python<'py>, work_budget: u128) -> PyResult<Bound<'py, PyDict>> {
        let report = py.detach(|| oracle::exact_strong_delta(&self.params, work_budget)).map_err(err)?;
        to_dict(py, &report)
    }

    fn __repr__(&self) -> String {
        self.params.describe()
    }
}

/// Weak AMD code `(m, sum m_i^2)` over GF(q), q odd.
#[pyclass(name = "WeakCode", frozen)]
struct PyWeakCode {
    params: WeakAmdParams,
}

#[pymethods]
impl PyWeakCode {
    #[new]
    fn new(q: u64, k: usize) -> PyResult<Self> {
        let spec = FieldSpec::from_order(q).map_err(err)?;
        Ok(Self { params: WeakAmdParams::new(spec, k).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.params.n()
    }

    fn encode(&self, message: Vec<u64>) -> PyResult<Vec<u64>> {
        encode(&self.params, &message, &[])
    }

    fn decode(&self, codeword: Vec<u64>) -> PyResult<Option<Vec<u64>>> {
        decode(&self.params, &codeword)
    }

    #[pyo3(signature = (rho = 0.0))]
    fn delta_bound(&self, rho: f64) -> f64 {
        codec::weak_delta_bound(&self.params, rho)
    }

    #[pyo3(signature = (work_budget = DEFAULT_WORK_BUDGET))]
    fn exact_delta<'py>(&self, py: Python<'py>, work_budget: u128) -> PyResult<Bound<'py, PyDict>> {
        let report = py.detach(|| oracle::exact_weak_delta(&self.params, work_budget)).map_err(err)?;
        to_dict(py, &report)
    }

    fn __repr__(&self) -> String {
        self.params.describe()
    }
}

/// Whether `kind` ("strong" or "weak") codes exist at leakage rate `rho`
/// and code rate `kappa`.
#[pyfunction]
fn feasible(kind_name: &str, rho: f64, kappa: f64) -> PyResult<bool> {
    Ok(codec::feasible(kind(kind_name)?, rho, kappa).map_err(err)? == Feasibility::Feasible)
}

/// The strong construction over GF(2^w) as a bit code.
fn strong_bits(w: u32, k: usize, sigma: usize) -> PyResult<BitCodeAdapter> {
    let spec = FieldSpec::binary(w).map_err(err)?;
    BitCodeAdapter::from_code(StrongAmdParams::new(spec, k, sigma).map_err(err)?).map_err(err)
}

/// Random-line attack on the strong code over GF(2^w).
#[pyfunction]
#[pyo3(signature = (w, k, sigma, message = 0, trials = 100_000, seed = 42, rho = None))]
#[allow(clippy::too_many_arguments)]
fn strong_attack_case2<'py>(
    py: Python<'py>,
    w: u32,
    k: usize,
    sigma: usize,
    message: u64,
    trials: u64,
    seed: u64,
    rho: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let code = strong_bits(w, k, sigma)?;
    let report = py
        .detach(|| attacks::strong_attack_case2(&code, message, Sampling { trials, seed }, rho))
        .map_err(err)?;
    to_dict(py, &report)
}

/// Small-support attack on `m || 0^pad` with `sigma_bits` unused random bits.
#[pyfunction]
#[pyo3(signature = (k_bits, pad_bits, sigma_bits, message = 0, trials = 100_000, seed = 42))]
fn degenerate_attack_case1<'py>(
    py: Python<'py>,
    k_bits: u32,
    pad_bits: u32,
    sigma_bits: u32,
    message: u64,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let code = BitCodeAdapter::degenerate(k_bits, pad_bits, sigma_bits).map_err(err)?;
    let report = py
        .detach(|| attacks::strong_attack_case1(&code, message, Sampling { trials, seed }, None))
        .map_err(err)?;
    to_dict(py, &report)
}

/// Line and trivial attacks on the weak code `m || m^3` over GF(2^w).
#[pyfunction]
#[pyo3(signature = (w, attack = "line", trials = 100_000, seed = 42))]
fn weak_attack<'py>(py: Python<'py>, w: u32, attack: &str, trials: u64, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let code = BitCodeAdapter::cube_weak(w).map_err(err)?;
    let report = py
        .detach(|| match attack {
            "line" => attacks::weak_attack_line(&code, Sampling { trials, seed }, None),
            "trivial" => attacks::weak_attack_trivial(&code, None),
            other => Err(AmdError::Usage(format!("unknown weak attack {other:?}"))),
        })
        .map_err(err)?;
    to_dict(py, &report)
}

/// Hit rate of `t` line probes over GF(2^w) into `target`.
#[pyfunction]
#[pyo3(signature = (w, t, target, trials = None, seed = 42))]
fn line_family_hit_rate<'py>(
    py: Python<'py>,
    w: u32,
    t: u64,
    target: Vec<u64>,
    trials: Option<u64>,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = FieldSpec::binary(w).map_err(err)?;
    let mode = match trials {
        None => Mode::Exhaustive,
        Some(trials) => Mode::Sampled { trials, seed },
    };
    let report = py.detach(|| attacks::line_family_hit_rate(&spec, t, &target, mode)).map_err(err)?;
    to_dict(py, &report)
}

/// `t p - t^2 p^2 / 2`.
#[pyfunction]
fn bonferroni_lower_bound(t: u64, p: f64) -> PyResult<f64> {
    attacks::bonferroni_lower_bound(t, p).map_err(err)
}

/// Tampering experiment for the ideal-cipher construction.
#[pyfunction]
#[pyo3(signature = (q = 2, k = 4, sigma = 16, query_budget = 16, rho = 0.0, strategy = "fresh-guess", trials = 100_000, seed = 42))]
#[allow(clippy::too_many_arguments)]
fn icm_experiment<'py>(
    py: Python<'py>,
    q: u64,
    k: usize,
    sigma: usize,
    query_budget: u64,
    rho: f64,
    strategy: &str,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let params = IcmParams::new(FieldSpec::from_order(q).map_err(err)?, k, sigma, query_budget, rho).map_err(err)?;
    let strategy = match strategy {
        "fresh-guess" => IcmStrategy::FreshGuess,
        "replay-best-leak" => IcmStrategy::ReplayBestLeak { queries: query_budget },
        other => return Err(PyValueError::new_err(format!("unknown strategy {other:?}"))),
    };
    let report = py.detach(|| run_icm_experiment(&params, strategy, trials, seed)).map_err(err)?;
    to_dict(py, &report)
}

/// AMD-encoded ramp secret sharing over GF(q).
#[pyclass(name = "RobustSharing", frozen)]
struct PyRobustSharing {
    amd: StrongAmdParams,
    ramp: RampParams,
}

#[pymethods]
impl PyRobustSharing {
    #[new]
    #[pyo3(signature = (q, k, sigma, t_priv, r, n_shares))]
    fn new(q: u64, k: usize, sigma: usize, t_priv: usize, r: usize, n_shares: usize) -> PyResult<Self> {
        let spec = FieldSpec::from_order(q).map_err(err)?;
        Ok(Self {
            amd: StrongAmdParams::new(spec, k, sigma).map_err(err)?,
            ramp: RampParams::new(spec, t_priv, r, n_shares).map_err(err)?,
        })
    }

    /// Shares as `(index, values)` pairs.
    #[pyo3(signature = (message, seed = 0))]
    fn share(&self, message: Vec<u64>, seed: u64) -> PyResult<Vec<(usize, Vec<u64>)>> {
        let m = Message::from_values(&self.amd.spec(), &message).map_err(err)?;
        let shares = rss::robust_share(&m, &self.amd, &self.ramp, seed).map_err(err)?;
        Ok(shares.into_iter().map(|s| (s.index, s.values)).collect())
    }

    /// The message, or None when tampering is detected.
    fn reconstruct(&self, shares: Vec<(usize, Vec<u64>)>) -> PyResult<Option<Vec<u64>>> {
        let shares: Vec<Share> = shares.into_iter().map(|(index, values)| Share { index, values }).collect();
        rss::robust_reconstruct_raw(&shares, &self.amd, &self.ramp).map_err(err)
    }

    fn leakage_tolerance(&self, rho: f64) -> PyResult<usize> {
        rss::leakage_tolerance(&self.ramp, rho).map_err(err)
    }
}

/// `{h_min_x, h_avg_x_given_z, chain_rule}` for `(x, z, p)` triples.
#[pyfunction]
fn entropy_report<'py>(py: Python<'py>, joint: Vec<(String, String, f64)>) -> PyResult<Bound<'py, PyDict>> {
    let j = JointDistribution::from_probabilities(joint).map_err(err)?;
    let value = serde_json::json!({
        "h_min_x": min_entropy(&j.x_marginal()).map_err(err)?,
        "h_avg_x_given_z": avg_min_entropy(&j),
        "chain_rule": chain_rule_check(&j),
    });
    to_dict(py, &value)
}

#[pymodule]
fn amdkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CapacityError", m.py().get_type::<CapacityError>())?;
    m.add_class::<PyField>()?;
    m.add_class::<PyStrongCode>()?;
    m.add_class::<PyWeakCode>()?;
    m.add_class::<PyRobustSharing>()?;
    m.add_function(wrap_pyfunction!(feasible, m)?)?;
    m.add_function(wrap_pyfunction!(strong_attack_case2, m)?)?;
    m.add_function(wrap_pyfunction!(degenerate_attack_case1, m)?)?;
    m.add_function(wrap_pyfunction!(weak_attack, m)?)?;
    m.add_function(wrap_pyfunction!(line_family_hit_rate, m)?)?;
    m.add_function(wrap_pyfunction!(bonferroni_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(icm_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_report, m)?)?;
    Ok(())
}
