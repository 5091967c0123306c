//! Python bindings. Build with maturin; the module is importable as `abforge`.

use std::cell::RefCell;

use abforge::fixtures;
use abforge::network::{self, check_halting, HaltingVerdict, RunOptions, Schedule};
use abforge::synth::{self, Mode};
use abforge::verify::{VerifyConfig, DEFAULT_SEED};
use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: abforge::Error) -> PyErr {
    match e {
        abforge::Error::BudgetExceeded { .. } | abforge::Error::StateCap(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// A ZILEP function N^k -> N^l: linear part plus a periodic table.
#[pyclass(name = "ZilepFunction", module = "abforge", frozen)]
struct PyZilep(abforge::ZilepFunction);

#[pymethods]
impl PyZilep {
    /// Builds a function from its coefficients (strings such as "1/3"),
    /// periods, margins and flattened table.
    #[new]
    fn new(
        k: usize,
        l: usize,
        coeffs: Vec<String>,
        periods: Vec<u64>,
        margins: Vec<u64>,
        table: Vec<u64>,
    ) -> PyResult<Self> {
        let coeffs = coeffs
            .iter()
            .map(|c| c.parse::<BigRational>().map_err(|e| PyValueError::new_err(format!("{c:?}: {e}"))))
            .collect::<PyResult<Vec<_>>>()?;
        abforge::ZilepFunction::new(k, l, coeffs, periods, margins, table)
            .map(PyZilep)
            .map_err(err)
    }

    /// Tabulates a Python callable over the period box.
    #[staticmethod]
    fn from_fn(k: usize, l: usize, periods: Vec<u64>, margins: Vec<u64>, f: Bound<'_, PyAny>) -> PyResult<Self> {
        let failure: RefCell<Option<PyErr>> = RefCell::new(None);
        let built = abforge::ZilepFunction::from_fn(k, l, periods, margins, |x| {
            if failure.borrow().is_some() {
                return vec![0; l];
            }
            match f.call1((x.to_vec(),)).and_then(|v| v.extract::<Vec<u64>>()) {
                Ok(v) => v,
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    vec![0; l]
                }
            }
        });
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        built.map(PyZilep).map_err(err)
    }

    #[staticmethod]
    fn from_unary_values(values: Vec<u64>, period: u64, margin: u64) -> PyResult<Self> {
        abforge::ZilepFunction::from_unary_values(&values, period, margin)
            .map(PyZilep)
            .map_err(err)
    }

    #[staticmethod]
    fn linear(matrix: Vec<Vec<u64>>) -> PyResult<Self> {
        abforge::ZilepFunction::linear(&matrix).map(PyZilep).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        abforge::ZilepFunction::from_json(text).map(PyZilep).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn arity(&self) -> usize {
        self.0.arity()
    }

    #[getter]
    fn output_count(&self) -> usize {
        self.0.output_count()
    }

    #[getter]
    fn periods(&self) -> Vec<u64> {
        self.0.periods().to_vec()
    }

    #[getter]
    fn margins(&self) -> Vec<u64> {
        self.0.margins().to_vec()
    }

    #[getter]
    fn coeffs(&self) -> Vec<String> {
        self.0.coeffs().iter().map(|c| c.to_string()).collect()
    }

    fn is_zilp(&self) -> bool {
        self.0.is_zilp()
    }

    fn bound(&self) -> Option<u64> {
        self.0.bound()
    }

    fn __call__(&self, x: Vec<u64>) -> PyResult<Vec<u64>> {
        self.eval(x)
    }

    fn eval(&self, x: Vec<u64>) -> PyResult<Vec<u64>> {
        if x.len() != self.0.arity() {
            return Err(PyValueError::new_err(format!(
                "expected {} coordinates, got {}",
                self.0.arity(),
                x.len()
            )));
        }
        Ok(self.0.eval(&x))
    }

    fn to_processor(&self) -> PyResult<PyProcessor> {
        abforge::zilep_to_processor(&self.0).map(PyProcessor).map_err(err)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0.equivalent(&other.0)
    }

    fn __repr__(&self) -> String {
        format!(
            "ZilepFunction(k={}, l={}, periods={:?}, margins={:?})",
            self.0.arity(),
            self.0.output_count(),
            self.0.periods(),
            self.0.margins()
        )
    }
}

/// A finite abelian processor.
#[pyclass(name = "Processor", module = "abforge", frozen)]
struct PyProcessor(abforge::AbelianProcessor);

#[pymethods]
impl PyProcessor {
    /// `transitions[a][q]` is the next state and `outputs[a][q]` the emitted
    /// letter counts when letter `a` arrives in state `q`.
    #[new]
    #[pyo3(signature = (transitions, outputs, output_count, initial=0))]
    fn new(transitions: Vec<Vec<usize>>, outputs: Vec<Vec<Vec<u64>>>, output_count: usize, initial: usize) -> PyResult<Self> {
        abforge::AbelianProcessor::from_maps(initial, transitions, outputs, output_count)
            .map(PyProcessor)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        abforge::AbelianProcessor::from_json(text).map(PyProcessor).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn arity(&self) -> usize {
        self.0.arity()
    }

    #[getter]
    fn state_count(&self) -> usize {
        self.0.state_count()
    }

    /// `None` when abelian, else `(i, j, state)` where letters `i` and `j`
    /// fail to commute.
    fn check_abelian(&self) -> Option<(usize, usize, usize)> {
        match self.0.check_abelian() {
            abforge::AbelianVerdict::Counterexample { i, j, state } => Some((i, j, state)),
            _ => None,
        }
    }

    fn is_recurrent(&self) -> PyResult<bool> {
        Ok(self.0.classify_recurrence().map_err(err)?.recurrent)
    }

    fn exponent(&self) -> PyResult<u64> {
        self.0.exponent().map_err(err)
    }

    /// Returns `(output, final_state)`.
    fn eval(&self, x: Vec<u64>) -> PyResult<(Vec<u64>, usize)> {
        if x.len() != self.0.arity() {
            return Err(PyValueError::new_err("input length differs from arity"));
        }
        let e = self.0.eval(&x);
        Ok((e.output, e.state))
    }

    fn to_function(&self) -> PyResult<PyZilep> {
        abforge::processor_to_zilep(&self.0).map(PyZilep).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Processor(arity={}, states={})", self.0.arity(), self.0.state_count())
    }
}

/// A network of abelian processors.
#[pyclass(name = "Network", module = "abforge", frozen)]
struct PyNetwork(abforge::Network);

fn schedule(name: &str, seed: u64) -> PyResult<Schedule> {
    Ok(match name {
        "lowest" => Schedule::LowestEdgeId,
        "round-robin" => Schedule::RoundRobin,
        "random" => Schedule::SeededRandom(seed),
        _ => return Err(PyValueError::new_err(format!("unknown schedule {name:?}"))),
    })
}

#[pymethods]
impl PyNetwork {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        network::import_json(text).map(PyNetwork).map_err(err)
    }

    fn to_json(&self) -> String {
        network::export_json(&self.0)
    }

    fn to_dot(&self) -> String {
        network::export_dot(&self.0)
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.0.nodes().len()
    }

    #[getter]
    fn input_count(&self) -> usize {
        self.0.inputs().len()
    }

    #[getter]
    fn output_count(&self) -> usize {
        self.0.outputs().len()
    }

    fn is_acyclic(&self) -> bool {
        self.0.is_acyclic()
    }

    fn count_kind(&self, kind: &str) -> usize {
        self.0.count_kind(kind)
    }

    /// "acyclic", "feedback_ok" or "unknown".
    fn halting(&self) -> &'static str {
        match check_halting(&self.0) {
            HaltingVerdict::Acyclic => "acyclic",
            HaltingVerdict::FeedbackOk { .. } => "feedback_ok",
            HaltingVerdict::Unknown => "unknown",
        }
    }

    /// Processes letters one at a time and returns a dict with `output`,
    /// `trash`, `states`, `steps` and, when tracing, `trace`.
    #[pyo3(signature = (x, schedule="lowest", seed=DEFAULT_SEED, budget=None, trace=false))]
    fn run<'py>(
        &self,
        py: Python<'py>,
        x: Vec<u64>,
        schedule: &str,
        seed: u64,
        budget: Option<u64>,
        trace: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let opts = RunOptions {
            schedule: self::schedule(schedule, seed)?,
            budget,
            trace,
        };
        let out = py.detach(|| network::run(&self.0, &x, &opts)).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("output", out.output)?;
        d.set_item("trash", out.trash)?;
        d.set_item("states", out.states)?;
        d.set_item("steps", out.steps)?;
        if let Some(t) = out.trace {
            d.set_item("trace", t)?;
        }
        Ok(d)
    }

    /// Output vector computed with bulk firing.
    fn eval(&self, py: Python<'_>, x: Vec<u64>) -> PyResult<Vec<u64>> {
        py.detach(|| network::bulk_eval(&self.0, &x))
            .map(|o| o.output)
            .map_err(err)
    }

    fn __call__(&self, py: Python<'_>, x: Vec<u64>) -> PyResult<Vec<u64>> {
        self.eval(py, x)
    }

    /// Collapses the network into one processor on its joint state space.
    #[pyo3(signature = (state_cap=100_000))]
    fn to_processor(&self, py: Python<'_>, state_cap: usize) -> PyResult<PyProcessor> {
        py.detach(|| network::network_to_processor(&self.0, state_cap))
            .map(PyProcessor)
            .map_err(err)
    }

    /// Node counts and shape statistics as a dict.
    fn report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let text = serde_json::to_string(&synth::report(&self.0)).expect("report serializes");
        json_to_py(py, &text)
    }

    fn __repr__(&self) -> String {
        format!(
            "Network(nodes={}, inputs={}, outputs={})",
            self.0.nodes().len(),
            self.0.inputs().len(),
            self.0.outputs().len()
        )
    }
}

/// Compiles `f` to a network of gates. `mode` is one of "auto",
/// "recurrent", "bounded" or "general"; `rewrites` may contain "unprime"
/// and "feedback".
#[pyfunction]
#[pyo3(signature = (f, mode="auto", rewrites=Vec::new()))]
fn compile(py: Python<'_>, f: &PyZilep, mode: &str, rewrites: Vec<String>) -> PyResult<PyNetwork> {
    let mode = match mode {
        "auto" => Mode::Auto,
        "recurrent" => Mode::Recurrent,
        "bounded" => Mode::Bounded,
        "general" => Mode::General,
        _ => return Err(PyValueError::new_err(format!("unknown mode {mode:?}"))),
    };
    let mut net = py.detach(|| synth::compile(&f.0, mode)).map_err(err)?.network;
    for r in &rewrites {
        net = match r.as_str() {
            "unprime" => synth::rewrite_unprime(&net),
            "feedback" => synth::rewrite_feedback(&net),
            _ => return Err(PyValueError::new_err(format!("unknown rewrite {r:?}"))),
        };
    }
    Ok(PyNetwork(net))
}

/// Checks `net` against `f` on a grid and under random schedules and
/// returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (f, net, bounds=None, schedules=100, seed=DEFAULT_SEED, budget_multiplier=1000))]
fn verify<'py>(
    py: Python<'py>,
    f: &PyZilep,
    net: &PyNetwork,
    bounds: Option<Vec<u64>>,
    schedules: usize,
    seed: u64,
    budget_multiplier: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = VerifyConfig {
        bounds,
        schedules,
        seed,
        budget_multiplier,
    };
    let rep = py.detach(|| abforge::verify(&f.0, &net.0, &cfg)).map_err(err)?;
    json_to_py(py, &serde_json::to_string(&rep).expect("report serializes"))
}

/// The pseudomin M_n evaluated at an integer vector of length n.
#[pyfunction]
fn pseudomin(x: Vec<i64>) -> PyResult<i64> {
    if x.is_empty() {
        return Err(PyValueError::new_err("pseudomin needs at least one coordinate"));
    }
    Ok(abforge::PseudoMin::new(x.len()).eval(&x))
}

/// Built-in example function by name.
#[pyfunction]
fn fixture_function(name: &str) -> PyResult<PyZilep> {
    let f = match name {
        "three-quarters" => fixtures::three_quarters_function(),
        "pair" => fixtures::pair_function(),
        "transient-pair" => fixtures::transient_pair_function(),
        "transient-mix" => fixtures::transient_mix_function(),
        _ => return Err(PyValueError::new_err(format!("no such fixture {name:?}"))),
    };
    Ok(PyZilep(f))
}

/// Built-in example network by name; `None` lists the names.
#[pyfunction]
#[pyo3(signature = (name=None))]
fn fixture_network(py: Python<'_>, name: Option<&str>) -> PyResult<Py<PyAny>> {
    let nets = fixtures::fixture_networks();
    match name {
        None => Ok(nets.into_iter().map(|(n, _)| n).collect::<Vec<_>>().into_pyobject(py)?.into_any().unbind()),
        Some(name) => nets
            .into_iter()
            .find(|(n, _)| n == name)
            .map(|(_, net)| Py::new(py, PyNetwork(net)).map(|p| p.into_any()))
            .unwrap_or_else(|| Err(PyValueError::new_err(format!("no such fixture {name:?}")))),
    }
}

#[pymodule]
#[pyo3(name = "abforge")]
fn abforge_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyZilep>()?;
    m.add_class::<PyProcessor>()?;
    m.add_class::<PyNetwork>()?;
    m.add_function(wrap_pyfunction!(compile, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(pseudomin, m)?)?;
    m.add_function(wrap_pyfunction!(fixture_function, m)?)?;
    m.add_function(wrap_pyfunction!(fixture_network, m)?)?;
    Ok(())
}
