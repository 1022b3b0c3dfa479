//! Python bindings. Matrices cross the boundary in the text format
//! (`"1,7/3;0,1"`) and reports come back as JSON strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use latpair::boxenum::{enumerate_with_limit, Parallelepiped, Topology, DEFAULT_MAX_CELLS};
use latpair::cli::{parse_constructed, parse_matrix, parse_pair};
use latpair::constructors::{
    cascade_pair, coprime_pair, diagonal_pair, direct_sum_pair, tensor_pair, unipotent_pair,
    CascadeParams, ConstructedPair, CoprimeParams, DiagParams,
};
use latpair::goodpair::{check_single, check_witness_with, CheckOptions, WitnessCandidate};
use latpair::lattice::{lattices_equal, Lattice};
use latpair::oracle::{mc_tiling_check, notgood_scan, McConfig};

fn err(e: latpair::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyclass(name = "Matrix", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMatrix {
    inner: latpair::Matrix,
}

#[pymethods]
impl PyMatrix {
    #[new]
    #[pyo3(signature = (text, radicand = 0))]
    fn new(text: &str, radicand: u64) -> PyResult<Self> {
        Ok(PyMatrix { inner: parse_matrix(text, radicand).map_err(err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn radicand(&self) -> u64 {
        self.inner.radicand()
    }

    fn det(&self) -> String {
        self.inner.det().to_string()
    }

    fn inverse(&self) -> PyResult<Self> {
        Ok(PyMatrix { inner: self.inner.inverse().map_err(err)? })
    }

    fn kronecker(&self, other: &PyMatrix) -> PyResult<Self> {
        Ok(PyMatrix { inner: self.inner.kronecker(&other.inner).map_err(err)? })
    }

    fn direct_sum(&self, other: &PyMatrix) -> PyResult<Self> {
        Ok(PyMatrix { inner: self.inner.direct_sum(&other.inner).map_err(err)? })
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.inner
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect()
    }

    fn __matmul__(&self, other: &PyMatrix) -> PyResult<Self> {
        Ok(PyMatrix { inner: self.inner.mat_mul(&other.inner).map_err(err)? })
    }

    fn __eq__(&self, other: &PyMatrix) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Matrix({:?})", self.inner.to_string())
    }
}

#[pyclass(name = "ConstructedPair", frozen)]
struct PyConstructedPair {
    inner: ConstructedPair,
}

#[pymethods]
impl PyConstructedPair {
    #[getter]
    fn basis(&self) -> PyMatrix {
        PyMatrix { inner: self.inner.lattice_basis().clone() }
    }

    #[getter]
    fn witness(&self) -> PyMatrix {
        PyMatrix { inner: self.inner.witness.n.clone() }
    }

    #[getter]
    fn family(&self) -> PyResult<String> {
        Ok(to_json(&self.inner.family)?.trim_matches('"').to_string())
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&self.inner)
    }

    #[staticmethod]
    #[pyo3(signature = (json, radicand = 0))]
    fn from_json(json: &str, radicand: u64) -> PyResult<Self> {
        Ok(PyConstructedPair { inner: parse_constructed(json, radicand).map_err(err)? })
    }
}

fn wrap(r: latpair::Result<ConstructedPair>) -> PyResult<PyConstructedPair> {
    r.map(|inner| PyConstructedPair { inner }).map_err(err)
}

fn scalars(values: Vec<String>, radicand: u64) -> PyResult<Vec<latpair::Scalar>> {
    values
        .iter()
        .map(|s| {
            s.parse::<latpair::Scalar>()
                .map(|x| x.in_field(radicand))
                .map_err(PyValueError::new_err)
        })
        .collect()
}

/// Checks the witness against a pair given as `{"gamma1": ..., "gamma2": ...}`.
#[pyfunction]
#[pyo3(signature = (pair_json, witness, radicand = 0, all_failures = false))]
fn check_witness(pair_json: &str, witness: &str, radicand: u64, all_failures: bool) -> PyResult<String> {
    let pair = parse_pair(pair_json, radicand).map_err(err)?;
    let w = WitnessCandidate::new(parse_matrix(witness, radicand).map_err(err)?);
    let opts = CheckOptions { max_cells: DEFAULT_MAX_CELLS, all_failures };
    to_json(&check_witness_with(&w, &pair, opts).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (lattice, witness, radicand = 0))]
fn check_single_lattice(lattice: &str, witness: &str, radicand: u64) -> PyResult<String> {
    let latt = Lattice::new(parse_matrix(lattice, radicand).map_err(err)?).map_err(err)?;
    let w = WitnessCandidate::new(parse_matrix(witness, radicand).map_err(err)?);
    to_json(&check_single(&w, &latt).map_err(err)?)
}

/// Integer coordinates `k` with `B k` in the box, sorted lexicographically.
#[pyfunction]
#[pyo3(signature = (lattice, box_matrix, topology = "open", radicand = 0))]
fn enumerate(lattice: &str, box_matrix: &str, topology: &str, radicand: u64) -> PyResult<Vec<String>> {
    let topology = match topology {
        "open" => Topology::OpenPm1,
        "closed" => Topology::ClosedPm1,
        "half-open" => Topology::HalfOpen01,
        other => return Err(PyValueError::new_err(format!("unknown topology {other:?}"))),
    };
    let latt = Lattice::new(parse_matrix(lattice, radicand).map_err(err)?).map_err(err)?;
    let bx = Parallelepiped::new(parse_matrix(box_matrix, radicand).map_err(err)?, topology)
        .map_err(err)?;
    let res = enumerate_with_limit(&latt, &bx, DEFAULT_MAX_CELLS).map_err(err)?;
    Ok(res.points.iter().map(|k| k.to_string()).collect())
}

#[pyfunction]
#[pyo3(signature = (a, b, radicand = 0))]
fn equal_lattices(a: &str, b: &str, radicand: u64) -> PyResult<bool> {
    let a = Lattice::new(parse_matrix(a, radicand).map_err(err)?).map_err(err)?;
    let b = Lattice::new(parse_matrix(b, radicand).map_err(err)?).map_err(err)?;
    Ok(lattices_equal(&a, &b))
}

#[pyfunction]
#[pyo3(signature = (witness, lattice, samples = 1000, seed = 1, denbound = 97, radicand = 0))]
fn verify_mc(
    witness: &str,
    lattice: &str,
    samples: usize,
    seed: u64,
    denbound: i64,
    radicand: u64,
) -> PyResult<String> {
    let w = WitnessCandidate::new(parse_matrix(witness, radicand).map_err(err)?);
    let latt = Lattice::new(parse_matrix(lattice, radicand).map_err(err)?).map_err(err)?;
    let cfg = McConfig::new(samples, seed, denbound);
    to_json(&mc_tiling_check(&w, &latt, &cfg).map_err(err)?)
}

#[pyfunction]
#[pyo3(name = "notgood_scan")]
fn notgood_scan_py(r: u64, count: usize, seed: u64) -> PyResult<String> {
    to_json(&notgood_scan(r, count, seed).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (t, p = None, q = None))]
fn unipotent(t: &PyMatrix, p: Option<&PyMatrix>, q: Option<&PyMatrix>) -> PyResult<PyConstructedPair> {
    let d = t.inner.dim();
    let id = latpair::Matrix::identity(d);
    let p = p.map_or(id.clone(), |m| m.inner.clone());
    let q = q.map_or(id, |m| m.inner.clone());
    wrap(unipotent_pair(&t.inner, &p, &q))
}

#[pyfunction]
#[pyo3(signature = (p, left = None, right = None, radicand = 0))]
fn cascade(
    p: Vec<String>,
    left: Option<&PyMatrix>,
    right: Option<&PyMatrix>,
    radicand: u64,
) -> PyResult<PyConstructedPair> {
    wrap(cascade_pair(&CascadeParams {
        p: scalars(p, radicand)?,
        left: left.map(|m| m.inner.clone()),
        right: right.map(|m| m.inner.clone()),
    }))
}

#[pyfunction]
#[pyo3(signature = (m, left = None, right = None))]
fn diagonal(m: Vec<i64>, left: Option<&PyMatrix>, right: Option<&PyMatrix>) -> PyResult<PyConstructedPair> {
    wrap(diagonal_pair(&DiagParams {
        m,
        left: left.map(|x| x.inner.clone()),
        right: right.map(|x| x.inner.clone()),
    }))
}

#[pyfunction]
#[pyo3(signature = (m, n, left = None, right = None))]
fn coprime2(m: i64, n: i64, left: Option<&PyMatrix>, right: Option<&PyMatrix>) -> PyResult<PyConstructedPair> {
    wrap(coprime_pair(&CoprimeParams {
        m,
        n,
        left: left.map(|x| x.inner.clone()),
        right: right.map(|x| x.inner.clone()),
    }))
}

#[pyfunction]
fn direct_sum(a: &PyConstructedPair, b: &PyConstructedPair) -> PyResult<PyConstructedPair> {
    wrap(direct_sum_pair(&a.inner, &b.inner))
}

#[pyfunction]
fn tensor(base: &PyConstructedPair, n: &PyMatrix) -> PyResult<PyConstructedPair> {
    wrap(tensor_pair(&base.inner, &n.inner))
}

#[pymodule]
fn latpair_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyConstructedPair>()?;
    m.add_function(wrap_pyfunction!(check_witness, m)?)?;
    m.add_function(wrap_pyfunction!(check_single_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(equal_lattices, m)?)?;
    m.add_function(wrap_pyfunction!(verify_mc, m)?)?;
    m.add_function(wrap_pyfunction!(notgood_scan_py, m)?)?;
    m.add_function(wrap_pyfunction!(unipotent, m)?)?;
    m.add_function(wrap_pyfunction!(cascade, m)?)?;
    m.add_function(wrap_pyfunction!(diagonal, m)?)?;
    m.add_function(wrap_pyfunction!(coprime2, m)?)?;
    m.add_function(wrap_pyfunction!(direct_sum, m)?)?;
    m.add_function(wrap_pyfunction!(tensor, m)?)?;
    Ok(())
}
