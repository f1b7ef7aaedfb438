//! Python bindings: graded rings, catalog spaces and maps, kernel
//! nilpotence, and the full bound pipeline on problem documents.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use seqtc::catalog::{self, MapSpec, SpaceSpec};
use seqtc::engine::ProblemMap;
use seqtc::hom::diagonal_evaluation_map;
use seqtc::nil::{self, nil_index_with_witness};
use seqtc::problem::bound_pipeline_json;
use seqtc::ring::{self, GeneratorSpec, RingPresentation};

fn value_error(e: seqtc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite-dimensional graded-commutative ring over GF(2), presented by
/// truncated generators.
#[pyclass(frozen)]
struct Ring {
    inner: Arc<RingPresentation>,
}

#[pymethods]
impl Ring {
    /// Ring([(name, degree, truncation), ...])
    #[new]
    fn new(generators: Vec<(String, u32, u32)>) -> PyResult<Self> {
        let gens = generators
            .into_iter()
            .map(|(name, degree, truncation)| GeneratorSpec::new(name, degree, truncation))
            .collect();
        Ok(Ring {
            inner: ring::make_presentation(gens).map_err(value_error)?,
        })
    }

    #[getter]
    fn total_dim(&self) -> usize {
        self.inner.total_dim()
    }

    #[getter]
    fn top_degree(&self) -> u32 {
        self.inner.top_degree()
    }

    /// Monomials of one degree, leading monomial first.
    fn degree_basis(&self, degree: u32) -> Vec<String> {
        self.inner
            .degree_basis(degree)
            .iter()
            .map(|&c| self.inner.render_monomial(c))
            .collect()
    }

    fn cup_length(&self) -> u32 {
        nil::cup_length(&self.inner)
    }

    /// The Künneth tensor product of this ring with others.
    fn tensor(&self, others: Vec<PyRef<'_, Ring>>) -> PyResult<Ring> {
        let mut factors = vec![self.inner.clone()];
        factors.extend(others.iter().map(|r| r.inner.clone()));
        Ok(Ring {
            inner: ring::tensor(&factors).map_err(value_error)?.ring,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Ring(dim={}, top_degree={})",
            self.inner.total_dim(),
            self.inner.top_degree()
        )
    }
}

/// A catalog space: cohomology presentation plus semantic flags.
#[pyclass(frozen)]
struct Space {
    inner: Arc<SpaceSpec>,
}

#[pymethods]
impl Space {
    #[staticmethod]
    fn sphere(n: u32) -> PyResult<Space> {
        Ok(Space {
            inner: catalog::sphere(n).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn real_projective(n: u32) -> PyResult<Space> {
        Ok(Space {
            inner: catalog::real_projective(n).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn complex_projective(n: u32) -> PyResult<Space> {
        Ok(Space {
            inner: catalog::complex_projective(n).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn torus(k: u32) -> PyResult<Space> {
        Ok(Space {
            inner: catalog::torus(k).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn point() -> Space {
        Space {
            inner: catalog::point(),
        }
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn h_space(&self) -> bool {
        self.inner.h_space
    }

    #[getter]
    fn contractible(&self) -> bool {
        self.inner.contractible
    }

    fn ring(&self) -> Option<Ring> {
        self.inner.ring.clone().map(|inner| Ring { inner })
    }

    fn __repr__(&self) -> String {
        format!("Space({})", self.inner.name)
    }
}

/// A catalog map with its pullback and flags.
#[pyclass(frozen)]
struct Map {
    inner: MapSpec,
}

#[pymethods]
impl Map {
    #[staticmethod]
    fn double_cover(n: u32) -> PyResult<Map> {
        Ok(Map {
            inner: catalog::double_cover(n).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn complex_quotient(n: u32) -> PyResult<Map> {
        Ok(Map {
            inner: catalog::complex_quotient(n).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn identity(space: PyRef<'_, Space>) -> Map {
        let name = format!("id({})", space.inner.name);
        Map {
            inner: catalog::identity_map_spec(name, &space.inner),
        }
    }

    #[staticmethod]
    fn projection(base: PyRef<'_, Space>, fiber: PyRef<'_, Space>) -> PyResult<Map> {
        Ok(Map {
            inner: catalog::projection(&base.inner, &fiber.inner).map_err(value_error)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn fibration(&self) -> bool {
        self.inner.fibration
    }

    /// nil(Ker of the diagonal-evaluation pullback at (r, s)): the
    /// cohomological lower bound for HTC_{r,s}.
    fn nil_index(&self, r: u32, s: u32) -> PyResult<u32> {
        let pullback = self
            .inner
            .pullback
            .as_ref()
            .ok_or_else(|| PyValueError::new_err("map carries no pullback data"))?;
        let diag = diagonal_evaluation_map(pullback, r, s).map_err(value_error)?;
        Ok(nil::nil_index(&diag))
    }

    /// (nil, witness product length, witness degree, witness element) or
    /// (nil, None, None, None) when the kernel is zero.
    #[allow(clippy::type_complexity)]
    fn nil_witness(
        &self,
        r: u32,
        s: u32,
    ) -> PyResult<(u32, Option<u32>, Option<u32>, Option<String>)> {
        let pullback = self
            .inner
            .pullback
            .as_ref()
            .ok_or_else(|| PyValueError::new_err("map carries no pullback data"))?;
        let diag = diagonal_evaluation_map(pullback, r, s).map_err(value_error)?;
        let (nil, witness) = nil_index_with_witness(&diag);
        Ok(match witness {
            Some(w) => (
                nil,
                Some(w.length),
                Some(w.degree),
                Some(w.element.to_string()),
            ),
            None => (nil, None, None, None),
        })
    }

    /// Solve the one-map problem and return the interval of TC_{r,s} as
    /// (lo, hi), hi = None when unbounded.
    fn tc_interval(&self, r: u32, s: u32, r_max: u32) -> PyResult<(u32, Option<u32>)> {
        let pm = ProblemMap {
            spec: self.inner.clone(),
            composite: None,
            product: None,
        };
        let mut st = seqtc::engine::instantiate(&[], &[pm], r_max).map_err(value_error)?;
        st.propagate().map_err(value_error)?;
        let iv = st
            .query(seqtc::engine::QuantityId::TCrs(0, r, s))
            .map_err(value_error)?;
        Ok((iv.lo, iv.hi))
    }

    fn __repr__(&self) -> String {
        format!(
            "Map({}: {} -> {})",
            self.inner.name, self.inner.domain.name, self.inner.codomain.name
        )
    }
}

/// Parses a problem document, solves it, and returns the canonical report
/// JSON (the same output as the command line in machine form).
#[pyfunction]
#[pyo3(signature = (problem_json, include_trace = true))]
fn solve_problem(problem_json: &str, include_trace: bool) -> PyResult<String> {
    bound_pipeline_json(problem_json, include_trace).map_err(value_error)
}

/// Runs the golden reproduction tables and returns the JSON report.
#[pyfunction]
fn reproduce_json() -> PyResult<String> {
    let report = seqtc::reproduce::run().map_err(value_error)?;
    serde_json::to_string_pretty(&seqtc::reproduce::to_json(&report))
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn seqtc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Ring>()?;
    m.add_class::<Space>()?;
    m.add_class::<Map>()?;
    m.add_function(wrap_pyfunction!(solve_problem, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce_json, m)?)?;
    Ok(())
}
