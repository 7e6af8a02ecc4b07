//! Python bindings. Exact rationals cross the boundary as `fractions`-style
//! strings ("15/16"), big integers as Python ints, matrices as nested lists.

use num_bigint::BigInt;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use su2_modular as core;
use su2_modular::superalgebra::level_for;
use su2_modular::{CosFilter, Error, InvariantMatrix};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn matrix_from(rows: Vec<Vec<i64>>) -> PyResult<InvariantMatrix> {
    InvariantMatrix::from_square(rows).map_err(to_py)
}

/// S and T data of affine su(2) at a fixed level.
#[pyclass(name = "ModularData", frozen)]
struct PyModularData {
    inner: core::ModularData,
}

#[pymethods]
impl PyModularData {
    #[new]
    fn new(level: u32) -> PyResult<Self> {
        Ok(Self { inner: core::ModularData::new(level).map_err(to_py)? })
    }

    #[getter]
    fn level(&self) -> u32 {
        self.inner.level()
    }

    /// `k + 2`; labels run over `1..n`.
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn period(&self) -> usize {
        self.inner.period()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    /// T exponents `λ²/4n − 1/8` reduced mod 1, as strings.
    fn t_exponents(&self) -> Vec<String> {
        self.inner.t_exponents().iter().map(|r| r.to_string()).collect()
    }

    /// Unnormalized S entry as power-basis coordinates over its conductor.
    fn s_hat(&self, lambda: usize, mu: usize) -> PyResult<(u64, Vec<String>)> {
        let range = self.inner.labels();
        if !range.contains(&lambda) || !range.contains(&mu) {
            return Err(PyValueError::new_err(format!("labels must lie in {range:?}")));
        }
        let x = self.inner.s_hat(lambda, mu);
        Ok((x.conductor(), x.coords().iter().map(|c| c.to_string()).collect()))
    }

    fn s_matrix(&self) -> Vec<Vec<f64>> {
        self.inner.s_numeric()
    }

    fn t_matrix(&self) -> Vec<Complex64> {
        self.inner.t_numeric()
    }

    fn s_squared_is_scalar(&self) -> bool {
        self.inner.s_squared_is_scalar()
    }

    fn commutes(&self, matrix: Vec<Vec<i64>>) -> PyResult<(bool, bool)> {
        let m = matrix_from(matrix)?;
        Ok((
            core::t_commutes(&m, &self.inner).map_err(to_py)?,
            core::s_commutes(&m, &self.inner).map_err(to_py)?,
        ))
    }

    fn commutant_basis(&self) -> Vec<Vec<Vec<i64>>> {
        core::commutant_basis(&self.inner).iter().map(|m| m.rows().to_vec()).collect()
    }

    fn __repr__(&self) -> String {
        format!("ModularData(level={})", self.inner.level())
    }
}

/// Exact value of the cosine sum; `filter` is "all", "odd" or "even".
#[pyfunction]
#[pyo3(signature = (rho, delta, filter = "all"))]
fn cos_sum(rho: i64, delta: i64, filter: &str) -> PyResult<BigInt> {
    let f: CosFilter = filter.parse().map_err(to_py)?;
    core::cos_sum(rho, delta, f).map_err(to_py)
}

#[pyfunction]
fn dodd_invariant(rho: usize) -> PyResult<Vec<Vec<i64>>> {
    Ok(core::dodd_invariant(rho).map_err(to_py)?.rows().to_vec())
}

#[pyfunction]
fn deven_invariant(n: usize) -> PyResult<Vec<Vec<i64>>> {
    Ok(core::deven_invariant(n).map_err(to_py)?.rows().to_vec())
}

/// Physical invariants at `level` with free entries in `0..=bound`.
#[pyfunction]
#[pyo3(signature = (level, bound = 3))]
fn enumerate_invariants(py: Python<'_>, level: u32, bound: i64) -> PyResult<Vec<Vec<Vec<i64>>>> {
    let e = py
        .detach(|| {
            let md = core::ModularData::new(level)?;
            core::enumerate_invariants(&md, bound)
        })
        .map_err(to_py)?;
    Ok(e.invariants.iter().map(|m| m.rows().to_vec()).collect())
}

/// Returns `(label, dynkin)`, e.g. `("Exceptional(12)", "E_6")`.
#[pyfunction]
fn ade_classify(matrix: Vec<Vec<i64>>) -> PyResult<(String, String)> {
    let m = matrix_from(matrix)?;
    let t = core::ade_classify(&m).map_err(to_py)?;
    Ok((t.to_string(), t.dynkin(m.n())))
}

/// Character of `L(k, i)` as `(h0, coefficients)`.
#[pyfunction]
#[pyo3(signature = (k, i, order = 200))]
fn affine_character(k: u32, i: u32, order: usize) -> PyResult<(String, Vec<BigInt>)> {
    let chi = core::affine_character(k, i, order).map_err(to_py)?;
    Ok((chi.h0().to_string(), chi.coeffs().to_vec()))
}

#[pyfunction]
#[pyo3(signature = (k, order = 200))]
fn verify_t_transform(k: u32, order: usize) -> PyResult<bool> {
    Ok(core::verify_t_transform(k, order).map_err(to_py)?.pass)
}

/// Returns `(pass, max_residual)`.
#[pyfunction]
#[pyo3(signature = (k, tau, order = 200, tol = 1e-8))]
fn verify_s_transform(k: u32, tau: Complex64, order: usize, tol: f64) -> PyResult<(bool, f64)> {
    let r = core::verify_s_transform(k, tau, order, tol).map_err(to_py)?;
    Ok((r.pass, r.max_residual))
}

#[pyfunction]
fn verify_prop52<'py>(py: Python<'py>, rho: usize) -> PyResult<Bound<'py, PyDict>> {
    let r = core::verify_prop52(rho).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("rho", r.rho)?;
    d.set_item("level", level_for(rho))?;
    d.set_item("T-invariant", r.t_invariant)?;
    d.set_item("S-invariant", r.s_invariant)?;
    d.set_item("pass", r.pass)?;
    let checks: Vec<(&str, bool, bool)> =
        r.checks.iter().map(|c| (c.name, c.t_invariant, c.s_invariant)).collect();
    d.set_item("checks", checks)?;
    Ok(d)
}

/// Sector names and the assembled invariant matrix for `k = 4ρ − 2`.
#[pyfunction]
fn assemble_super_partition(rho: usize) -> PyResult<(Vec<String>, Vec<Vec<i64>>)> {
    let sectors = core::module_inventory(rho).map_err(to_py)?;
    let pf = core::assemble_super_partition(rho).map_err(to_py)?;
    Ok((sectors.iter().map(|s| s.name()).collect(), pf.matrix.rows().to_vec()))
}

/// `Z(τ)` for the super partition function at `k = 4ρ − 2`.
#[pyfunction]
#[pyo3(signature = (rho, tau, order = 300))]
fn super_partition_value(rho: usize, tau: Complex64, order: usize) -> PyResult<Complex64> {
    let pf = core::assemble_super_partition(rho).map_err(to_py)?;
    pf.evaluate(tau, order).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (rho, order = 200, precision = 10))]
fn conjecture_probe<'py>(
    py: Python<'py>,
    rho: usize,
    order: usize,
    precision: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let r = py.detach(|| core::conjecture_probe(rho, order, precision)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("rho", r.rho)?;
    d.set_item("basis", r.basis)?;
    d.set_item("span_dimension", r.span_dimension)?;
    d.set_item("tolerance", r.tolerance)?;
    d.set_item("stable", r.stable)?;
    d.set_item("stability_residual", r.stability_residual)?;
    d.set_item("unitarity_defect", r.unitarity_defect)?;
    d.set_item("representation_matrix", r.representation_matrix)?;
    d.set_item("t_representation_matrix", r.t_representation_matrix)?;
    d.set_item("t_stability_residual", r.t_stability_residual)?;
    d.set_item("t_unitarity_defect", r.t_unitarity_defect)?;
    d.set_item("character_residual", r.character_residual)?;
    Ok(d)
}

/// Runs the verification battery; returns `(id, title, pass, detail)` rows.
#[pyfunction]
fn run_suite(py: Python<'_>) -> Vec<(u32, String, bool, String)> {
    py.detach(core::suite::run_all)
        .into_iter()
        .map(|o| (o.id, o.title.to_string(), o.pass, o.detail))
        .collect()
}

#[pymodule]
#[pyo3(name = "su2_modular")]
fn su2_modular_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModularData>()?;
    m.add_function(wrap_pyfunction!(cos_sum, m)?)?;
    m.add_function(wrap_pyfunction!(dodd_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(deven_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(ade_classify, m)?)?;
    m.add_function(wrap_pyfunction!(affine_character, m)?)?;
    m.add_function(wrap_pyfunction!(verify_t_transform, m)?)?;
    m.add_function(wrap_pyfunction!(verify_s_transform, m)?)?;
    m.add_function(wrap_pyfunction!(verify_prop52, m)?)?;
    m.add_function(wrap_pyfunction!(assemble_super_partition, m)?)?;
    m.add_function(wrap_pyfunction!(super_partition_value, m)?)?;
    m.add_function(wrap_pyfunction!(conjecture_probe, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
