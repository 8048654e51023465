//! Python bindings. Rationals cross the boundary as `fractions.Fraction`;
//! inputs may be ints, strings such as `"3/2"`, or fractions. Reports come
//! back as plain dicts and lists.

use lorentzian_fans::convexity::{classify_convexity, find_strictly_convex};
use lorentzian_fans::exact::{format_rational, parse_rational, RatVector, Rational};
use lorentzian_fans::io::{self, FanJson};
use lorentzian_fans::lorentzian::{af_report, is_lorentzian, volume_polynomial};
use lorentzian_fans::matroid::{bergman_fan, Matroid};
use lorentzian_fans::minkowski::{check_balancing, star_weight, transport_weight, Divisor, TropicalFan};
use lorentzian_fans::{fixtures, ops};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

fn err(e: lorentzian_fans::Error) -> PyErr {
    match e {
        lorentzian_fans::Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&obj.str()?.to_cow()?).map_err(err)
}

fn vector(obj: &Bound<'_, PyAny>) -> PyResult<RatVector> {
    obj.try_iter()?.map(|x| rational(&x?)).collect()
}

fn fraction<'py>(py: Python<'py>, x: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(x),))
}

/// JSON report to Python objects; rational strings stay strings.
fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => {
            let items = a.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn report<'py, T: serde::Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    to_py(py, &v)
}

/// A balanced, positively weighted simplicial fan.
#[pyclass(module = "lorentzian_fans_py", frozen)]
struct Fan {
    inner: TropicalFan,
}

impl Fan {
    fn wrap(r: lorentzian_fans::Result<TropicalFan>) -> PyResult<Fan> {
        r.map(|inner| Fan { inner }).map_err(err)
    }

    fn divisor(&self, z: &Bound<'_, PyAny>) -> PyResult<Divisor> {
        let v = vector(z)?;
        if v.len() != self.inner.fan().num_rays() {
            return Err(PyValueError::new_err(format!(
                "expected {} ray values, got {}",
                self.inner.fan().num_rays(),
                v.len()
            )));
        }
        Ok(Divisor::new(v))
    }
}

#[pymethods]
impl Fan {
    /// Fan JSON as written by the CLI; missing weights default to one.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Fan> {
        let fj = io::parse_fan(text).map_err(err)?;
        let rep = lorentzian_fans::fan::validate(fj.ambient_dim, &fj.rays, &fj.maximal_cones);
        if !rep.is_valid() {
            return Err(PyValueError::new_err(format!("invalid fan: {rep:?}")));
        }
        Fan::wrap(fj.to_tropical())
    }

    #[staticmethod]
    fn simplex(n: usize) -> Fan {
        Fan { inner: fixtures::unit(fixtures::simplex_fan(n)) }
    }

    #[staticmethod]
    #[pyo3(signature = (a=1, b=1, c=1))]
    fn coordinate_skeleton(a: i64, b: i64, c: i64) -> PyResult<Fan> {
        Fan::wrap(TropicalFan::new(
            fixtures::coordinate_skeleton(),
            fixtures::coordinate_skeleton_weight(a, b, c),
        ))
    }

    #[staticmethod]
    fn two_triangles() -> Fan {
        Fan { inner: fixtures::unit(fixtures::two_triangles()) }
    }

    /// Bergman fan of the matroid on `n` elements with the given bases.
    #[staticmethod]
    fn bergman(n: usize, bases: Vec<Vec<usize>>) -> PyResult<Fan> {
        let m = Matroid::from_bases(n, &bases).map_err(err)?;
        Fan::wrap(bergman_fan(&m))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&FanJson::from_tropical(&self.inner)).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.fan().ambient_dim()
    }

    #[getter]
    fn num_rays(&self) -> usize {
        self.inner.fan().num_rays()
    }

    #[getter]
    fn rays<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        self.inner
            .fan()
            .rays()
            .iter()
            .map(|u| u.iter().map(|x| fraction(py, x)).collect())
            .collect()
    }

    #[getter]
    fn maximal_cones(&self) -> Vec<Vec<usize>> {
        self.inner.fan().maximal_cones().to_vec()
    }

    fn is_balanced(&self) -> PyResult<bool> {
        Ok(check_balancing(self.inner.fan(), self.inner.weight()).map_err(err)?.is_empty())
    }

    /// Mixed degree of exactly `dim` divisors.
    fn degree<'py>(&self, py: Python<'py>, divisors: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        let ds = divisors.iter().map(|d| self.divisor(d)).collect::<PyResult<Vec<_>>>()?;
        let refs: Vec<&[Rational]> = ds.iter().map(|d| &d[..]).collect();
        fraction(py, &self.inner.degree(&refs).map_err(err)?)
    }

    fn volume<'py>(&self, py: Python<'py>, z: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let z = self.divisor(z)?;
        fraction(py, &self.inner.volume(&z).map_err(err)?)
    }

    fn volume_polynomial(&self) -> PyResult<String> {
        Ok(volume_polynomial(&self.inner).map_err(err)?.to_string())
    }

    /// One of `"none"`, `"convex"`, `"strictly-convex"`.
    #[pyo3(signature = (z, strict=true))]
    fn convexity(&self, z: &Bound<'_, PyAny>, strict: bool) -> PyResult<String> {
        let z = self.divisor(z)?;
        let cert = classify_convexity(self.inner.fan(), &z, strict).map_err(err)?;
        let v = serde_json::to_value(cert.verdict).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        Ok(v.as_str().unwrap_or_default().to_string())
    }

    fn strictly_convex_divisor<'py>(&self, py: Python<'py>) -> PyResult<Option<Vec<Bound<'py, PyAny>>>> {
        match find_strictly_convex(self.inner.fan()).map_err(err)? {
            None => Ok(None),
            Some(z) => z.iter().map(|x| fraction(py, x)).collect::<PyResult<Vec<_>>>().map(Some),
        }
    }

    /// The certificate as a dict with `verdict` `"yes"` or `"no"`.
    fn lorentzian<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        report(py, &is_lorentzian(&self.inner).map_err(err)?)
    }

    #[pyo3(signature = (d1, d2, aux=Vec::new()))]
    fn af<'py>(
        &self,
        py: Python<'py>,
        d1: &Bound<'py, PyAny>,
        d2: &Bound<'py, PyAny>,
        aux: Vec<Bound<'py, PyAny>>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let aux = aux.iter().map(|d| self.divisor(d)).collect::<PyResult<Vec<_>>>()?;
        report(py, &af_report(&self.inner, &self.divisor(d1)?, &self.divisor(d2)?, &aux).map_err(err)?)
    }

    fn star(&self, cone: Vec<usize>) -> PyResult<Fan> {
        let mut cone = cone;
        cone.sort_unstable();
        Fan::wrap(star_weight(&self.inner, &cone).map(|(_, tf)| tf))
    }

    fn stellar(&self, point: &Bound<'_, PyAny>) -> PyResult<Fan> {
        let v = vector(point)?;
        let sub = self.inner.fan().stellar_subdivide(&v).map_err(err)?;
        Fan::wrap(transport_weight(&self.inner, &sub.fan, Some(&sub.containment)))
    }

    fn product(&self, other: &Fan) -> PyResult<Fan> {
        Fan::wrap(ops::product_tropical(&self.inner, &other.inner))
    }

    fn modify(&self, z: &Bound<'_, PyAny>) -> PyResult<Fan> {
        Fan::wrap(ops::tropical_modification(&self.inner, &self.divisor(z)?))
    }

    fn act(&self, z: &Bound<'_, PyAny>) -> PyResult<Fan> {
        Fan::wrap(ops::act_divisor_fan(&self.inner, &self.divisor(z)?).map(|(tf, _)| tf))
    }

    fn __repr__(&self) -> String {
        format!(
            "Fan(dim={}, ambient_dim={}, rays={}, cones={})",
            self.inner.dim(),
            self.inner.fan().ambient_dim(),
            self.inner.fan().num_rays(),
            self.inner.fan().maximal_cones().len()
        )
    }
}

/// Mixed volume of polytopes `{x : <u, x> <= a}` on a complete fan, one
/// right-hand side per polytope.
#[pyfunction]
fn mixed_volume<'py>(py: Python<'py>, fan: &Fan, rhs: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
    let rhs = rhs.iter().map(vector).collect::<PyResult<Vec<_>>>()?;
    report(py, &ops::polytope_bridge(fan.inner.fan(), &rhs).map_err(err)?)
}

#[pymodule]
fn lorentzian_fans_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Fan>()?;
    m.add_function(wrap_pyfunction!(mixed_volume, m)?)?;
    Ok(())
}
