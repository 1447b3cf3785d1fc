//! Python bindings: load a system file, inspect its resonance structure,
//! build the quasi-linear enlargement, and run the numeric certificate.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use pdsplit::io::{
    parse_spec, run_pipeline, Analysis, Level, PipelineError, PipelineOptions, RealOutcome,
    SystemSpec,
};
use pdsplit::poly::Polynomial;

fn to_py_err(e: PipelineError) -> PyErr {
    match e {
        PipelineError::Numeric(msg) => PyRuntimeError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_level(level: &str) -> PyResult<Level> {
    match level {
        "analyze" => Ok(Level::Analyze),
        "embed" => Ok(Level::Embed),
        "verify" => Ok(Level::Verify),
        other => Err(PyValueError::new_err(format!(
            "unknown level `{other}` (expected analyze, embed, or verify)"
        ))),
    }
}

/// A parsed and validated system, ready for analysis.
#[pyclass(frozen)]
pub struct System {
    spec: SystemSpec,
}

impl System {
    fn run(&self, level: Level, opts: &PipelineOptions) -> PyResult<Analysis> {
        run_pipeline(&self.spec, level, opts).map_err(to_py_err)
    }
}

#[pymethods]
impl System {
    /// Parse a system from TOML text.
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        let spec = parse_spec(text).map_err(to_py_err)?;
        Ok(System { spec })
    }

    /// Parse a system file from disk.
    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PyValueError::new_err(format!("{path}: {e}")))?;
        Self::from_toml(&text)
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.spec.dimension
    }

    #[getter]
    fn degree_bound(&self) -> u64 {
        self.spec.degree_bound
    }

    /// The canonical TOML form of the system.
    fn canonical_toml(&self) -> String {
        self.spec.to_toml()
    }

    /// Exponent vectors of the elementary invariance relations, in the
    /// canonical order.
    fn invariance_relations(&self) -> PyResult<Vec<Vec<u32>>> {
        let a = self.run(Level::Analyze, &PipelineOptions::default())?;
        Ok(a.invariances.iter().map(|i| i.sigma.0.clone()).collect())
    }

    /// Sporadic resonances as (exponents, component) pairs, component
    /// one-based. Raises if the enumeration is not certified complete.
    fn sporadic_resonances(&self) -> PyResult<Vec<(Vec<u32>, usize)>> {
        let a = self.run(Level::Analyze, &PipelineOptions::default())?;
        if !a.sporadics.certified_complete {
            return Err(PyRuntimeError::new_err(format!(
                "sporadic enumeration not certified complete through degree {}; raise the bound",
                a.sporadics.degree_bound
            )));
        }
        Ok(a.sporadics
            .relations
            .iter()
            .map(|r| (r.mu.0.clone(), r.alpha + 1))
            .collect())
    }

    /// Dimension of the space of linear maps commuting with the spectrum.
    fn centralizer_dimension(&self) -> PyResult<usize> {
        Ok(self.run(Level::Analyze, &PipelineOptions::default())?.centralizer_dim)
    }

    /// Rendered report. `level` is analyze, embed, or verify; `format` is
    /// text or machine (TOML).
    #[pyo3(signature = (level = "embed", format = "text"))]
    fn report(&self, level: &str, format: &str) -> PyResult<String> {
        let a = self.run(parse_level(level)?, &PipelineOptions::default())?;
        match format {
            "text" => Ok(a.render_text()),
            "machine" => Ok(a.render_machine()),
            other => Err(PyValueError::new_err(format!(
                "unknown format `{other}` (expected text or machine)"
            ))),
        }
    }

    /// Structure of the enlarged quasi-linear system as a dict: sizes, the
    /// adjoined monomials, the nonzero matrix entries (one-based, rendered
    /// over the invariant variables), the invariant equations, and the
    /// symbolic check results.
    fn embedding<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let a = self.run(Level::Embed, &PipelineOptions::default())?;
        let embedding = a.embedding.as_ref().expect("embed level builds the enlargement");
        let emb = &embedding.emb;
        let phi_names: Vec<String> = (1..=emb.m).map(|i| format!("phi{i}")).collect();
        let render = |p: &Polynomial| p.render(&a.table, &phi_names);

        let out = PyDict::new_bound(py);
        out.set_item("n", emb.n)?;
        out.set_item("r", emb.r)?;
        out.set_item("m", emb.m)?;
        let w = PyList::empty_bound(py);
        for wd in &emb.w_defs {
            let entry = PyDict::new_bound(py);
            entry.set_item("exponents", wd.mu.0.clone())?;
            entry.set_item("component", wd.target + 1)?;
            w.append(entry)?;
        }
        out.set_item("w", w)?;
        out.set_item(
            "phi",
            emb.phi_defs.iter().map(|s| s.0.clone()).collect::<Vec<_>>(),
        )?;
        let matrix = PyList::empty_bound(py);
        for (i, row) in emb.coeff_matrix.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if !entry.is_zero() {
                    matrix.append((i + 1, j + 1, render(entry)))?;
                }
            }
        }
        out.set_item("matrix", matrix)?;
        out.set_item(
            "phi_rhs",
            emb.phi_rhs.iter().map(render).collect::<Vec<_>>(),
        )?;
        let checks = PyDict::new_bound(py);
        checks.set_item("manifold_invariant", embedding.checks.manifold_invariant)?;
        checks.set_item("phi_closed", embedding.checks.phi_closed)?;
        checks.set_item("quasi_linear", embedding.checks.quasi_linear)?;
        checks.set_item("normal_form_commutes", embedding.checks.normal_form_commutes)?;
        out.set_item("checks", checks)?;
        let real = PyDict::new_bound(py);
        match &embedding.real {
            RealOutcome::NotApplicable => {
                real.set_item("available", false)?;
            }
            RealOutcome::Unavailable(reason) => {
                real.set_item("available", false)?;
                real.set_item("reason", reason)?;
            }
            RealOutcome::Available(view) => {
                real.set_item("available", true)?;
                let entries = PyList::empty_bound(py);
                for (i, row) in view.coeff_matrix.iter().enumerate() {
                    for (j, entry) in row.iter().enumerate() {
                        if !entry.is_zero() {
                            entries.append((i + 1, j + 1, render(entry)))?;
                        }
                    }
                }
                real.set_item("matrix", entries)?;
                real.set_item(
                    "phi_rhs",
                    view.phi_rhs.iter().map(render).collect::<Vec<_>>(),
                )?;
            }
        }
        out.set_item("real_view", real)?;
        Ok(out)
    }

    /// Integrate both systems and compare; returns the residuals and the
    /// certificate flag. The file must carry verification settings; the
    /// keyword arguments override its horizon, step, and tolerance.
    #[pyo3(signature = (t_final = None, step = None, tol = None))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        t_final: Option<f64>,
        step: Option<f64>,
        tol: Option<f64>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let opts = PipelineOptions {
            degree_bound: None,
            t_final,
            step,
            tol,
        };
        let a = self.run(Level::Verify, &opts)?;
        let numeric = a.numeric.as_ref().expect("verify level runs the numeric check");
        let report = numeric
            .outcome
            .as_ref()
            .map_err(|e| PyRuntimeError::new_err(e.clone()))?;
        let out = PyDict::new_bound(py);
        out.set_item("certified", report.certified)?;
        out.set_item("max_psi_residual", report.max_psi_residual)?;
        out.set_item("max_phi_residual", report.max_phi_residual)?;
        out.set_item("max_projection_error", report.max_projection_error)?;
        out.set_item("t_final", numeric.t_final)?;
        out.set_item("step", numeric.step)?;
        out.set_item("tol", numeric.tol)?;
        Ok(out)
    }
}

#[pymodule]
fn pdsplit_native(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<System>()?;
    Ok(())
}
