//! Python module `cubetool`. The functions in [`api`] take and return JSON
//! text so they can be exercised without an interpreter; the `#[pyfunction]`
//! wrappers only convert to and from Python objects.

pub mod api {
    use std::sync::Arc;

    use cubetool_core::completion::canonical_completion;
    use cubetool_core::complex::{barycentric_subdivision, is_npc, CubeComplex, CubicalMap, MapDescription};
    use cubetool_core::corpus;
    use cubetool_core::cusped::{build_cusped_ball, slim_probe, CuspedEdgeKind, GroupSpec, SimpleGraph, DEFAULT_BALL_BUDGET};
    use cubetool_core::gog::{gluing_check, hom_count, virtual_modify, HierarchyLedger, Presentation, DEFAULT_HOM_BUDGET};
    use cubetool_core::group::Group;
    use cubetool_core::hyperplanes::pathologies;
    use cubetool_core::wallgraph::{greedy_color, WallGraph};
    use serde_json::{json, Value};

    pub type ApiResult<T> = Result<T, String>;

    fn err<E: std::fmt::Display>(e: E) -> String {
        e.to_string()
    }

    fn complex(text: &str) -> ApiResult<CubeComplex> {
        CubeComplex::from_json(text).map_err(err)
    }

    pub fn check_npc(text: &str) -> ApiResult<Value> {
        serde_json::to_value(is_npc(&complex(text)?)).map_err(err)
    }

    pub fn subdivide(text: &str) -> ApiResult<String> {
        Ok(barycentric_subdivision(&complex(text)?).complex.to_json())
    }

    pub fn counts(text: &str) -> ApiResult<Vec<usize>> {
        Ok(complex(text)?.counts())
    }

    pub fn special(text: &str) -> ApiResult<Value> {
        serde_json::to_value(pathologies(&complex(text)?)).map_err(err)
    }

    pub fn complete(map: &str, domain: &str, codomain: &str) -> ApiResult<Value> {
        let desc: MapDescription = serde_json::from_str(map).map_err(err)?;
        let f = CubicalMap::from_description(&desc, Arc::new(complex(domain)?), Arc::new(complex(codomain)?)).map_err(err)?;
        let c = canonical_completion(&f).map_err(err)?;
        let mut report = serde_json::to_value(c.report()).map_err(err)?;
        report["completion"] = serde_json::from_str(&c.completion.to_json()).map_err(err)?;
        Ok(report)
    }

    pub fn hom_count_symmetric(generators: &[String], relators: &[String], degree: usize) -> ApiResult<u64> {
        let g: Vec<&str> = generators.iter().map(String::as_str).collect();
        let r: Vec<&str> = relators.iter().map(String::as_str).collect();
        let p = Presentation::new(&g, &r).map_err(err)?;
        hom_count(&p, &Group::symmetric(degree), DEFAULT_HOM_BUDGET).map_err(err)
    }

    pub fn gluing(ledger: &str, modify: bool) -> ApiResult<Value> {
        let mut l = HierarchyLedger::from_json(ledger).map_err(err)?;
        if modify {
            l = virtual_modify(&l).map_err(err)?;
        }
        let report = gluing_check(&l).map_err(err)?;
        Ok(json!({ "classes": report.classes, "ledger": l }))
    }

    pub fn cusped_counts(spec: &str, rho: usize, depth: usize) -> ApiResult<Value> {
        let spec: GroupSpec = serde_json::from_str(spec).map_err(err)?;
        let b = build_cusped_ball(&spec, rho, depth, DEFAULT_BALL_BUDGET).map_err(err)?;
        Ok(json!({
            "vertices": b.vertices.len(),
            "cayley": b.count(CuspedEdgeKind::Cayley),
            "vertical": b.count(CuspedEdgeKind::Vertical),
            "horizontal": b.count(CuspedEdgeKind::Horizontal),
            "doubling": b.doubling,
        }))
    }

    pub fn slim_delta(n: usize, edges: &[(usize, usize)]) -> ApiResult<usize> {
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(format!("edge ({a}, {b}) out of range for {n} vertices"));
        }
        Ok(slim_probe(&SimpleGraph::new(n, edges.iter().copied()), None, 0).map_err(err)?.delta)
    }

    pub fn color(n: usize, edges: &[(usize, usize)]) -> ApiResult<Vec<u32>> {
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(format!("edge ({a}, {b}) out of range for {n} vertices"));
        }
        Ok(greedy_color(&WallGraph::from_edges(n, 1, edges)))
    }

    pub fn corpus_names() -> Vec<String> {
        corpus::items().iter().map(|i| i.name.to_string()).collect()
    }

    pub fn corpus_emit(name: &str) -> ApiResult<Vec<(String, String)>> {
        corpus::emit(name).map_err(err)
    }

}

#[cfg(feature = "extension-module")]
mod py {
    use pyo3::exceptions::PyValueError;
    use pyo3::prelude::*;
    use serde_json::Value;

    use crate::api;

    fn value_err(e: String) -> PyErr {
        PyValueError::new_err(e)
    }

    fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
        Ok(py.import("json")?.call_method1("loads", (v.to_string(),))?.unbind())
    }

    /// Link-condition verdict for a complex given as JSON text.
    #[pyfunction]
    fn check_npc(py: Python<'_>, complex: &str) -> PyResult<Py<PyAny>> {
        to_py(py, &api::check_npc(complex).map_err(value_err)?)
    }

    #[pyfunction]
    fn subdivide(complex: &str) -> PyResult<String> {
        api::subdivide(complex).map_err(value_err)
    }

    #[pyfunction]
    fn counts(complex: &str) -> PyResult<Vec<usize>> {
        api::counts(complex).map_err(value_err)
    }

    #[pyfunction]
    fn special(py: Python<'_>, complex: &str) -> PyResult<Py<PyAny>> {
        to_py(py, &api::special(complex).map_err(value_err)?)
    }

    /// Canonical completion report, including the completed complex.
    #[pyfunction]
    fn complete(py: Python<'_>, map: &str, domain: &str, codomain: &str) -> PyResult<Py<PyAny>> {
        to_py(py, &api::complete(map, domain, codomain).map_err(value_err)?)
    }

    #[pyfunction]
    fn hom_count(generators: Vec<String>, relators: Vec<String>, symmetric_degree: usize) -> PyResult<u64> {
        api::hom_count_symmetric(&generators, &relators, symmetric_degree).map_err(value_err)
    }

    #[pyfunction]
    #[pyo3(signature = (ledger, modify = false))]
    fn gluing_check(py: Python<'_>, ledger: &str, modify: bool) -> PyResult<Py<PyAny>> {
        to_py(py, &api::gluing(ledger, modify).map_err(value_err)?)
    }

    #[pyfunction]
    #[pyo3(signature = (spec, rho = 2, depth = 2))]
    fn cusped_counts(py: Python<'_>, spec: &str, rho: usize, depth: usize) -> PyResult<Py<PyAny>> {
        to_py(py, &api::cusped_counts(spec, rho, depth).map_err(value_err)?)
    }

    #[pyfunction]
    fn slim_delta(n: usize, edges: Vec<(usize, usize)>) -> PyResult<usize> {
        api::slim_delta(n, &edges).map_err(value_err)
    }

    #[pyfunction]
    fn greedy_color(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Vec<u32>> {
        api::color(n, &edges).map_err(value_err)
    }

    #[pyfunction]
    fn corpus_names() -> Vec<String> {
        api::corpus_names()
    }

    /// Files of a corpus item as a `{file name: contents}` dict.
    #[pyfunction]
    fn corpus_emit(name: &str) -> PyResult<std::collections::BTreeMap<String, String>> {
        Ok(api::corpus_emit(name).map_err(value_err)?.into_iter().collect())
    }

    #[pymodule]
    fn cubetool(m: &Bound<'_, PyModule>) -> PyResult<()> {
        m.add_function(wrap_pyfunction!(check_npc, m)?)?;
        m.add_function(wrap_pyfunction!(subdivide, m)?)?;
        m.add_function(wrap_pyfunction!(counts, m)?)?;
        m.add_function(wrap_pyfunction!(special, m)?)?;
        m.add_function(wrap_pyfunction!(complete, m)?)?;
        m.add_function(wrap_pyfunction!(hom_count, m)?)?;
        m.add_function(wrap_pyfunction!(gluing_check, m)?)?;
        m.add_function(wrap_pyfunction!(cusped_counts, m)?)?;
        m.add_function(wrap_pyfunction!(slim_delta, m)?)?;
        m.add_function(wrap_pyfunction!(greedy_color, m)?)?;
        m.add_function(wrap_pyfunction!(corpus_names, m)?)?;
        m.add_function(wrap_pyfunction!(corpus_emit, m)?)?;
        Ok(())
    }
}
