//! Python bindings: `import rote_py`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rote::checks::{reports_to_json, CheckOptions, Session, CHECK_NAMES};
use rote::logic::Engine;
use rote::numeration::NumerationSystem;
use rote::search::{grow_tree, SearchConfig};
use rote::word::{self, ExactRational, FiniteWord};

fn py_err(e: rote::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn word(text: &str) -> PyResult<FiniteWord> {
    FiniteWord::parse(text).map_err(py_err)
}

/// A Dumont-Thomas numeration system.
#[pyclass(name = "NumerationSystem", frozen)]
struct PySystem(NumerationSystem);

#[pymethods]
impl PySystem {
    /// `dt_h` or `dt_q`.
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        NumerationSystem::builtin(name).map(PySystem).map_err(py_err)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        NumerationSystem::from_text(text).map(PySystem).map_err(py_err)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    #[getter]
    fn radix(&self) -> u32 {
        self.0.radix()
    }

    #[getter]
    fn recurrence(&self) -> String {
        self.0.recurrence().to_string()
    }

    fn represent(&self, n: u64) -> PyResult<Vec<u32>> {
        self.0.represent(n).map_err(py_err)
    }

    fn evaluate(&self, digits: Vec<u32>) -> PyResult<u64> {
        self.0.evaluate(&digits).map_err(py_err)
    }

    /// Letter at position `n` of the word computed by the system's DFAO.
    fn letter(&self, n: u64) -> PyResult<String> {
        let rep = self.0.represent(n).map_err(py_err)?;
        let out = self.0.dfao().run(&rep).ok_or_else(|| PyValueError::new_err("no output"))?;
        Ok((self.0.output_letters()[out as usize] as char).to_string())
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("NumerationSystem({:?})", self.0.name())
    }
}

/// First-order formulas over a numeration system, compiled to automata.
#[pyclass(name = "Engine", unsendable)]
struct PyEngine(Engine);

#[pymethods]
impl PyEngine {
    #[new]
    #[pyo3(signature = (system = "dt_q"))]
    fn new(system: &str) -> PyResult<Self> {
        let sys = NumerationSystem::builtin(system).map_err(py_err)?;
        Engine::new(sys).map(PyEngine).map_err(py_err)
    }

    /// Truth value of a closed formula.
    fn eval(&mut self, formula: &str) -> PyResult<bool> {
        self.0.eval_closed(formula).map_err(py_err)
    }

    /// Stores a predicate; returns its state count.
    #[pyo3(signature = (name, formula, params = None))]
    fn define(&mut self, name: &str, formula: &str, params: Option<Vec<String>>) -> PyResult<usize> {
        let p = self.0.define(name, formula, params.as_deref()).map_err(py_err)?;
        Ok(p.dfa.num_states())
    }

    /// Parameters of a stored predicate, in call order.
    fn params(&self, name: &str) -> PyResult<Vec<String>> {
        self.0
            .predicate(name)
            .map(|p| p.params.clone())
            .ok_or_else(|| PyValueError::new_err(format!("no predicate {name}")))
    }

    /// Membership of one assignment, values in sorted variable order.
    fn holds(&mut self, formula: &str, values: Vec<u64>) -> PyResult<bool> {
        let rel = self.0.relation(formula).map_err(py_err)?;
        rel.contains(self.0.system(), &values).map_err(py_err)
    }

    /// Runs a script; one line of output per command.
    fn run_script(&mut self, text: &str) -> PyResult<Vec<String>> {
        let out = self.0.run_script(text).map_err(py_err)?;
        Ok(out.iter().map(|o| o.to_string()).collect())
    }

    /// Value of a counting representation stored with `def name count x`.
    fn count(&self, name: &str, args: Vec<u64>) -> PyResult<String> {
        let lr = self
            .0
            .count(name)
            .ok_or_else(|| PyValueError::new_err(format!("{name} has no counting representation")))?;
        Ok(lr.value(self.0.system(), &args).map_err(py_err)?.to_string())
    }

    /// Text export of a stored predicate's automaton.
    fn export(&self, name: &str) -> PyResult<String> {
        self.0
            .predicate(name)
            .map(|p| p.dfa.to_text())
            .ok_or_else(|| PyValueError::new_err(format!("no predicate {name}")))
    }
}

#[pyfunction]
fn q_prefix(len: usize) -> String {
    word::q_prefix(len).to_string()
}

#[pyfunction]
fn p_prefix(len: usize) -> String {
    word::p_prefix(len).to_string()
}

/// Largest exponent of a factor, as `"num/den"`.
#[pyfunction]
fn critical_exponent(w: &str) -> PyResult<String> {
    Ok(word::critical_exponent(&word(w)?).map_err(py_err)?.to_string())
}

#[pyfunction]
fn factor_complexity(w: &str, n: usize) -> PyResult<usize> {
    word::factor_complexity(&word(w)?, n).map_err(py_err)
}

#[pyfunction]
fn abelian_complexity(w: &str, n: usize) -> PyResult<usize> {
    word::abelian_complexity(&word(w)?, n).map_err(py_err)
}

#[pyfunction]
fn is_rote(w: &str) -> PyResult<bool> {
    word::is_rote(&word(w)?).map_err(py_err)
}

/// Depth and longest words of the Rote-word tree avoiding exponents at
/// least (`strict`) or above `num/den`.
#[pyfunction]
#[pyo3(signature = (num = 5, den = 2, strict = true))]
fn search(num: usize, den: usize, strict: bool) -> PyResult<(usize, Vec<String>)> {
    let cfg = SearchConfig::new(ExactRational::ratio(num, den), strict).map_err(py_err)?;
    let r = grow_tree(&cfg).map_err(py_err)?;
    let longest = r.maximal_of_length(r.max_depth).iter().map(|w| w.to_string()).collect();
    Ok((r.max_depth, longest))
}

#[pyfunction]
fn check_names() -> Vec<&'static str> {
    CHECK_NAMES.to_vec()
}

/// Runs the named checks (all when empty) and returns their reports as JSON.
#[pyfunction]
#[pyo3(signature = (names = None, prefix_len = None))]
fn run_checks(names: Option<Vec<String>>, prefix_len: Option<usize>) -> PyResult<String> {
    let mut session = Session::new(CheckOptions {
        prefix_len,
        ..CheckOptions::default()
    });
    let names = names.unwrap_or_else(|| CHECK_NAMES.iter().map(|s| s.to_string()).collect());
    let reports = names
        .iter()
        .map(|n| session.run(n))
        .collect::<rote::Result<Vec<_>>>()
        .map_err(py_err)?;
    Ok(reports_to_json(&reports))
}

#[pymodule]
fn rote_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystem>()?;
    m.add_class::<PyEngine>()?;
    m.add_function(wrap_pyfunction!(q_prefix, m)?)?;
    m.add_function(wrap_pyfunction!(p_prefix, m)?)?;
    m.add_function(wrap_pyfunction!(critical_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(factor_complexity, m)?)?;
    m.add_function(wrap_pyfunction!(abelian_complexity, m)?)?;
    m.add_function(wrap_pyfunction!(is_rote, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(check_names, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    Ok(())
}
