//! Python bindings: `import morava_density`.

use std::collections::BTreeMap;
use std::str::FromStr;

use morava_density::certificate::{replay, CertificateJson};
use morava_density::density::{self, Parameters};
use morava_density::local::{build_splitting, Splitting, StabilizerElement};
use morava_density::quatalg::{algebra_and_order, enumerate_norm_trace, MaximalOrder, Quaternion};
use morava_density::{hopf, ssgraph, Error};
use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    match e {
        Error::SearchExhausted(_) | Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_rational(s: &str) -> PyResult<BigRational> {
    let bad = || PyValueError::new_err(format!("not a rational: {s:?}"));
    let int = |t: &str| BigInt::from_str(t.trim()).map_err(|_| bad());
    match s.split_once('/') {
        Some((n, d)) => {
            let d = int(d)?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(int(n)?, d))
        }
        None => Ok(BigRational::from_integer(int(s)?)),
    }
}

/// A density certificate with its witnesses and verdicts.
#[pyclass(name = "DensityCertificate", frozen)]
struct PyCertificate {
    inner: density::DensityCertificate,
}

#[pymethods]
impl PyCertificate {
    #[getter]
    fn p(&self) -> u64 {
        self.inner.parameters.p
    }

    #[getter]
    fn ell(&self) -> u64 {
        self.inner.parameters.ell
    }

    #[getter]
    fn frattini_rank(&self) -> usize {
        self.inner.span_rank
    }

    /// `{"thm_lambda": ..., "cor_gamma1": ..., "thm_gamma": ...}`.
    fn verdicts(&self) -> BTreeMap<&'static str, String> {
        BTreeMap::from([
            ("thm_lambda", self.inner.thm_lambda.label()),
            ("cor_gamma1", self.inner.cor_gamma1.label()),
            ("thm_gamma", self.inner.thm_gamma.label()),
        ])
    }

    fn all_pass(&self) -> bool {
        self.inner.all_pass()
    }

    /// `(role, element, norm)` triples.
    fn witnesses(&self) -> Vec<(String, String, String)> {
        self.inner
            .witnesses
            .iter()
            .map(|(w, r)| (w.role.name().to_string(), w.element.to_string(), r.norm.to_string()))
            .collect()
    }

    fn to_json(&self) -> String {
        CertificateJson::from(&self.inner).to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "DensityCertificate(p={}, ell={}, thm_gamma={:?})",
            self.inner.parameters.p,
            self.inner.parameters.ell,
            self.inner.thm_gamma.label()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (p, ell, precision = 4, k_extra = density::DEFAULT_K_EXTRA, m_max = density::DEFAULT_M_MAX))]
fn certify(p: u64, ell: u64, precision: u32, k_extra: u32, m_max: u32) -> PyResult<PyCertificate> {
    let params = Parameters { p, ell, precision, k_extra, m_max };
    density::certify(&params).map(|inner| PyCertificate { inner }).map_err(err)
}

/// Replays a JSON certificate; returns `(consistent, mismatches)`.
#[pyfunction]
fn verify(json: &str) -> PyResult<(bool, Vec<String>)> {
    let stored = CertificateJson::from_json(json).map_err(err)?;
    let r = replay(&stored).map_err(err)?;
    Ok((r.consistent(), r.mismatches))
}

#[pyfunction]
fn is_topological_generator(ell: u64, p: u64) -> bool {
    density::is_topological_generator(ell, p)
}

/// A maximal order in the quaternion algebra ramified at `p` and infinity.
#[pyclass(name = "MaximalOrder", frozen)]
struct PyOrder {
    order: MaximalOrder,
}

#[pymethods]
impl PyOrder {
    #[new]
    fn new(p: u64) -> PyResult<Self> {
        let (_, order) = algebra_and_order(p).map_err(err)?;
        Ok(PyOrder { order })
    }

    /// `(a, b)` with `i^2 = a`, `j^2 = b`.
    fn algebra(&self) -> (String, String) {
        let alg = self.order.algebra();
        (alg.a().to_string(), alg.b().to_string())
    }

    fn basis(&self) -> Vec<String> {
        (0..4).map(|r| self.order.basis_element(r).to_string()).collect()
    }

    fn gram(&self) -> Vec<Vec<String>> {
        self.order.gram().iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect()
    }

    /// Elements of reduced norm `n` (and trace `t`), as `1, i, j, k`
    /// coordinate strings.
    #[pyo3(signature = (n, t = None))]
    fn enumerate(&self, n: i64, t: Option<i64>) -> Vec<[String; 4]> {
        let t = t.map(BigInt::from);
        enumerate_norm_trace(&self.order, &BigInt::from(n), t.as_ref())
            .into_iter()
            .map(|pt| pt.element.coords().clone().map(|c| c.to_string()))
            .collect()
    }

    fn contains(&self, coords: [String; 4]) -> PyResult<bool> {
        Ok(self.order.contains(&quaternion(&self.order, &coords)?))
    }
}

fn quaternion(order: &MaximalOrder, coords: &[String; 4]) -> PyResult<Quaternion> {
    let c = [
        parse_rational(&coords[0])?,
        parse_rational(&coords[1])?,
        parse_rational(&coords[2])?,
        parse_rational(&coords[3])?,
    ];
    Ok(Quaternion::new(order.algebra(), c))
}

/// `x = a + b S` in `W<S>` truncated at precision `N`.
#[pyclass(name = "StabilizerElement", frozen)]
struct PyStabilizer {
    inner: StabilizerElement,
}

#[pymethods]
impl PyStabilizer {
    fn in_s0(&self) -> bool {
        self.inner.in_s0()
    }

    /// `t_1, ..., t_{2N-1}` as residue pairs `(c0, c1)` for `c0 + c1 g`.
    fn digits(&self) -> PyResult<Vec<(u64, u64)>> {
        let d = self.inner.digits().map_err(err)?;
        Ok(d.entries().iter().map(|x| x.coeffs()).collect())
    }

    fn norm_digits(&self) -> PyResult<Vec<u64>> {
        self.inner.norm_digits().map_err(err)
    }

    fn norm(&self) -> String {
        self.inner.norm().value().to_string()
    }

    fn __mul__(&self, other: &PyStabilizer) -> PyStabilizer {
        PyStabilizer { inner: self.inner * other.inner }
    }

    fn __eq__(&self, other: &PyStabilizer) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// The embedding of `O[1/l]` into `W<S>`.
#[pyclass(name = "Splitting", frozen)]
struct PySplitting {
    inner: Splitting,
}

#[pymethods]
impl PySplitting {
    #[new]
    #[pyo3(signature = (p, ell, precision = 4))]
    fn new(p: u64, ell: u64, precision: u32) -> PyResult<Self> {
        build_splitting(p, ell, precision).map(|inner| PySplitting { inner }).map_err(err)
    }

    /// Image of the quaternion with `1, i, j, k` coordinates given as
    /// rational strings.
    fn apply(&self, coords: [String; 4]) -> PyResult<PyStabilizer> {
        let x = quaternion(self.inner.order(), &coords)?;
        self.inner.apply(&x).map(|inner| PyStabilizer { inner }).map_err(err)
    }
}

/// Supersingular j-invariants over `F_{p^2}` as residue pairs.
#[pyfunction]
fn supersingular_j(p: u64) -> PyResult<Vec<(u64, u64)>> {
    Ok(ssgraph::supersingular_j(p).map_err(err)?.js().iter().map(|j| j.coeffs()).collect())
}

/// `{"vertices", "connected", "diameter", "parity_mix", "regular"}`.
#[pyfunction]
fn verify_kohel(p: u64, ell: u64) -> PyResult<BTreeMap<&'static str, usize>> {
    let r = ssgraph::verify_kohel(p, ell).map_err(err)?;
    Ok(BTreeMap::from([
        ("vertices", r.vertices),
        ("connected", r.connected as usize),
        ("diameter", r.diameter),
        ("parity_mix", r.parity_mix as usize),
        ("regular", r.regular as usize),
    ]))
}

/// `{class name: additive}` on the norm-one truncation.
#[pyfunction]
fn verify_cocycles(p: u64) -> PyResult<BTreeMap<String, bool>> {
    let r = hopf::verify_cocycles(p).map_err(err)?;
    Ok(r.classes.into_iter().map(|c| (c.name, c.additive)).collect())
}

#[pyfunction]
fn verify_coproduct(k: u32, p: u64) -> PyResult<bool> {
    Ok(hopf::verify_coproduct(k, p).map_err(err)?.holds)
}

#[pymodule]
#[pyo3(name = "morava_density")]
fn morava_density_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyOrder>()?;
    m.add_class::<PyStabilizer>()?;
    m.add_class::<PySplitting>()?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(is_topological_generator, m)?)?;
    m.add_function(wrap_pyfunction!(supersingular_j, m)?)?;
    m.add_function(wrap_pyfunction!(verify_kohel, m)?)?;
    m.add_function(wrap_pyfunction!(verify_cocycles, m)?)?;
    m.add_function(wrap_pyfunction!(verify_coproduct, m)?)?;
    Ok(())
}
