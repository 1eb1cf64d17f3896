//! Python module `equigh`. Reports come back as plain dicts with the same
//! layout as the command-line JSON.

use equigh::field::Coefficients;
use equigh::formulas::{euclid_sphere_bounds, zeta as zeta_n};
use equigh::gh::{ggh, ggh_bounds, ggh_exact, ggh_oracle, function_pair_search, GhBudget};
use equigh::group::{count_homs_to_symmetric, FiniteGroup, HomBudget};
use equigh::harness::{random_campaign, run_paper_examples, CampaignLimits, PaperSuiteOptions};
use equigh::interleaving::{barcodes as vr_barcodes, default_coefficients, interleaving_lower_bounds, InterleavingOptions};
use equigh::io::{
    any_space_json, barcode_json, certificate_json, gh_report_json, interleaving_report_json, net_report_json,
    parse_space_csv, parse_space_json, read_space, scalar_json, to_canonical, write_space,
};
use equigh::samples::{sample_space, SampleSpec};
use equigh::space::NetMode;
use equigh::vr::{build_vr, Label, DEFAULT_MAX_SIMPLICES};
use equigh::{AnySpace, GMetricSpace, Scalar};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::{json, Value};

create_exception!(equigh, EquighError, PyValueError);

fn err(e: equigh::Error) -> PyErr {
    EquighError::new_err(e.to_string())
}

fn bad(msg: impl Into<String>) -> PyErr {
    EquighError::new_err(msg.into())
}

fn to_py(py: Python<'_>, value: &Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (to_canonical(value),))?.unbind())
}

macro_rules! with_one {
    ($s:expr, |$a:ident| $body:expr) => {
        match $s {
            AnySpace::Exact($a) => $body,
            AnySpace::Float($a) => $body,
        }
    };
}

macro_rules! with_pair {
    ($x:expr, $y:expr, |$a:ident, $b:ident| $body:expr) => {
        match ($x, $y) {
            (AnySpace::Exact($a), AnySpace::Exact($b)) => $body,
            (x, y) => {
                let ($a, $b) = (&x.to_float(), &y.to_float());
                $body
            }
        }
    };
}

/// A scale given as a number or as text such as `"6/5"`.
#[derive(FromPyObject)]
enum ScaleArg {
    Text(String),
    Num(f64),
}

fn scale<S: Scalar>(arg: Option<ScaleArg>) -> PyResult<Option<S>> {
    let Some(arg) = arg else { return Ok(None) };
    let text = match arg {
        ScaleArg::Text(t) => t,
        ScaleArg::Num(v) => format!("{v}"),
    };
    match S::parse_text(&text) {
        Some(v) if v > S::zero() => Ok(Some(v)),
        _ => Err(bad(format!("`{text}` is not a positive scale"))),
    }
}

/// A finite metric space with an action of a finite group by isometries.
#[pyclass(name = "GSpace", module = "equigh", frozen)]
struct PyGSpace {
    inner: AnySpace,
}

#[pymethods]
impl PyGSpace {
    /// From the JSON space format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_space_json(text).map(|inner| PyGSpace { inner }).map_err(err)
    }

    /// From a CSV distance matrix and an optional action sidecar (JSON text).
    #[staticmethod]
    #[pyo3(signature = (text, action=None))]
    fn from_csv(text: &str, action: Option<&str>) -> PyResult<Self> {
        parse_space_csv(text, action).map(|inner| PyGSpace { inner }).map_err(err)
    }

    /// Distance rows as numbers or `"p/q"` strings, with an optional group
    /// (name or multiplication table) and one permutation per group element.
    #[staticmethod]
    #[pyo3(signature = (dist, group=None, action=None))]
    fn from_matrix(py: Python<'_>, dist: Py<PyAny>, group: Option<Py<PyAny>>, action: Option<Vec<Vec<usize>>>) -> PyResult<Self> {
        let dumps = |o: &Py<PyAny>| -> PyResult<Value> {
            let text: String = py.import("json")?.call_method1("dumps", (o.bind(py),))?.extract()?;
            serde_json::from_str(&text).map_err(|e| bad(e.to_string()))
        };
        let mut v = json!({ "dist": dumps(&dist)? });
        if let Some(g) = &group {
            v["group"] = dumps(g)?;
        }
        if let Some(a) = action {
            v["action"] = json!(a);
        }
        Self::from_json(&v.to_string())
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        read_space(path.as_ref()).map(|inner| PyGSpace { inner }).map_err(err)
    }

    /// A generated space, `kind[,key=value]*`.
    #[staticmethod]
    #[pyo3(signature = (spec, seed=None))]
    fn sample(spec: &str, seed: Option<u64>) -> PyResult<Self> {
        let mut s = SampleSpec::parse(spec).map_err(err)?;
        if let Some(seed) = seed {
            s.seed = seed;
        }
        sample_space(&s).map(|inner| PyGSpace { inner }).map_err(err)
    }

    fn write(&self, path: &str) -> PyResult<()> {
        write_space(path.as_ref(), &self.inner).map_err(err)
    }

    fn to_json(&self) -> String {
        to_canonical(&any_space_json(&self.inner))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "GSpace(points={}, group_order={}, exact={})",
            self.inner.len(),
            self.inner.group().order(),
            if self.inner.is_exact() { "True" } else { "False" }
        )
    }

    #[getter]
    fn exact(&self) -> bool {
        self.inner.is_exact()
    }

    #[getter]
    fn group_order(&self) -> usize {
        self.inner.group().order()
    }

    fn distance(&self, py: Python<'_>, i: usize, j: usize) -> PyResult<Py<PyAny>> {
        if i >= self.inner.len() || j >= self.inner.len() {
            return Err(bad(format!("point index out of range for {} points", self.inner.len())));
        }
        with_one!(&self.inner, |s| to_py(py, &scalar_json(s.d(i, j))))
    }

    fn diam(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        with_one!(&self.inner, |s| to_py(py, &scalar_json(s.diam())))
    }

    /// Least displacement of a nontrivial element, `None` for a trivial action.
    fn sep(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        with_one!(&self.inner, |s| to_py(py, &s.sep_g().map_or(Value::Null, scalar_json)))
    }

    fn orbits(&self) -> Vec<Vec<usize>> {
        let act = with_one!(&self.inner, |s| s.action().clone());
        let (ids, count) = act.orbit_ids();
        let mut out = vec![Vec::new(); count];
        for (p, o) in ids.into_iter().enumerate() {
            out[o].push(p);
        }
        out
    }

    fn quotient(&self) -> Self {
        let inner = match &self.inner {
            AnySpace::Exact(s) => AnySpace::Exact(s.quotient().0),
            AnySpace::Float(s) => AnySpace::Float(s.quotient().0),
        };
        PyGSpace { inner }
    }

    fn forget_action(&self) -> Self {
        let inner = match &self.inner {
            AnySpace::Exact(s) => AnySpace::Exact(s.forget_action()),
            AnySpace::Float(s) => AnySpace::Float(s.forget_action()),
        };
        PyGSpace { inner }
    }

    /// Restrict the action along `hom`, the images of the elements of `source`'s group.
    fn pullback(&self, source: &PyGSpace, hom: Vec<usize>) -> PyResult<Self> {
        self.inner.pullback(source.inner.group(), &hom).map(|inner| PyGSpace { inner }).map_err(err)
    }

    #[pyo3(signature = (epsilon, mode="greedy", budget=1_000_000))]
    fn net(&self, py: Python<'_>, epsilon: ScaleArg, mode: &str, budget: u64) -> PyResult<Py<PyAny>> {
        let mode = match mode {
            "greedy" => NetMode::Greedy,
            "exact" => NetMode::Exact,
            m => return Err(bad(format!("unknown net mode `{m}`"))),
        };
        with_one!(&self.inner, |s| {
            let eps = scale(Some(epsilon))?.expect("given");
            to_py(py, &net_report_json(&s.g_invariant_net(eps, mode, budget).map_err(err)?))
        })
    }

    /// Full Vietoris-Rips barcodes, over GF(2) unless `p` is given.
    #[pyo3(signature = (degrees=vec![0, 1], r_max=None, p=None))]
    fn barcodes(&self, py: Python<'_>, degrees: Vec<usize>, r_max: Option<ScaleArg>, p: Option<u64>) -> PyResult<Py<PyAny>> {
        let top = degrees.iter().max().copied().unwrap_or(0);
        with_one!(&self.inner, |s| {
            let complex = build_vr(s, top + 1, scale(r_max)?, DEFAULT_MAX_SIMPLICES).map_err(err)?;
            let coeffs = Coefficients::from_characteristic(p.unwrap_or(2)).map_err(err)?;
            let codes = vr_barcodes(&complex, Label::Full, coeffs, &degrees).map_err(err)?;
            to_py(py, &json!(codes.iter().map(barcode_json).collect::<Vec<_>>()))
        })
    }

    /// Barcodes of the eigenspace modules of the group element `g`, one per eigenvalue index.
    #[pyo3(signature = (g, degrees=vec![0, 1], r_max=None, p=None))]
    fn eigen_barcodes(
        &self,
        py: Python<'_>,
        g: usize,
        degrees: Vec<usize>,
        r_max: Option<ScaleArg>,
        p: Option<u64>,
    ) -> PyResult<Py<PyAny>> {
        let group = self.inner.group();
        if g >= group.order() {
            return Err(bad(format!("group element {g} out of range")));
        }
        let order = group.element_order(g);
        let coeffs = match p {
            Some(p) => Coefficients::from_characteristic(p).map_err(err)?,
            None => default_coefficients(order),
        };
        let top = degrees.iter().max().copied().unwrap_or(0);
        with_one!(&self.inner, |s| {
            let complex = build_vr(s, top + 1, scale(r_max)?, DEFAULT_MAX_SIMPLICES).map_err(err)?;
            let mut codes = Vec::new();
            for lambda in 0..order {
                codes.extend(vr_barcodes(&complex, Label::Eigen { g, lambda }, coeffs, &degrees).map_err(err)?);
            }
            to_py(py, &json!(codes.iter().map(barcode_json).collect::<Vec<_>>()))
        })
    }
}

fn gh_value<S: Scalar>(x: &GMetricSpace<S>, y: &GMetricSpace<S>, mode: &str, budget: GhBudget) -> PyResult<Value> {
    let mut result = match mode {
        "auto" => ggh(x, y, budget),
        "exact" => ggh_exact(x, y, budget),
        "oracle" => ggh_oracle(x, y),
        "function-pair" => match function_pair_search(x, y, budget).map_err(err)? {
            Some(r) => Ok(r),
            None => return Ok(Value::Null),
        },
        m => return Err(bad(format!("unknown mode `{m}`"))),
    }
    .map_err(err)?;
    if result.lower_certificates.is_empty() {
        result.lower_certificates = ggh_bounds(x, y).map_err(err)?;
    }
    Ok(gh_report_json(&result))
}

/// Equivariant Gromov-Hausdorff distance. `mode` is one of
/// `auto`, `exact`, `oracle`, `function-pair`.
#[pyfunction]
#[pyo3(signature = (x, y, mode="auto", budget=None, max_nodes=None))]
fn gh(py: Python<'_>, x: &PyGSpace, y: &PyGSpace, mode: &str, budget: Option<usize>, max_nodes: Option<u64>) -> PyResult<Py<PyAny>> {
    let mut b = GhBudget::default();
    if let Some(v) = budget {
        b.max_pair_orbits = v;
    }
    if let Some(v) = max_nodes {
        b.max_nodes = v;
    }
    let v = with_pair!(&x.inner, &y.inner, |a, c| gh_value(a, c, mode, b)?);
    to_py(py, &v)
}

/// Certified lower and upper bounds only.
#[pyfunction]
fn gh_bounds(py: Python<'_>, x: &PyGSpace, y: &PyGSpace) -> PyResult<Py<PyAny>> {
    let v = with_pair!(&x.inner, &y.inner, |a, b| {
        json!(ggh_bounds(a, b).map_err(err)?.iter().map(certificate_json).collect::<Vec<_>>())
    });
    to_py(py, &v)
}

/// Certified lower bounds on the equivariant interleaving distance of the
/// Vietoris-Rips persistence modules.
#[pyfunction]
#[pyo3(signature = (x, y, degrees=vec![0, 1], r_max_x=None, r_max_y=None, eigen=true, p=None))]
fn interleaving_lower(
    py: Python<'_>,
    x: &PyGSpace,
    y: &PyGSpace,
    degrees: Vec<usize>,
    r_max_x: Option<ScaleArg>,
    r_max_y: Option<ScaleArg>,
    eigen: bool,
    p: Option<u64>,
) -> PyResult<Py<PyAny>> {
    let v = with_pair!(&x.inner, &y.inner, |a, b| {
        let opts = InterleavingOptions {
            degrees: degrees.clone(),
            p,
            r_max_x: scale(r_max_x)?,
            r_max_y: scale(r_max_y)?,
            eigen,
            ..Default::default()
        };
        interleaving_report_json(&interleaving_lower_bounds(a, b, &opts).map_err(err)?)
    });
    to_py(py, &v)
}

/// Edge length of the regular simplex inscribed in the round `n`-sphere.
#[pyfunction]
fn zeta(n: u64) -> f64 {
    zeta_n(n)
}

/// `(lower, upper)` for the Euclidean spheres `S^m` and `S^n`; `upper` may be `None`.
#[pyfunction]
fn euclid_bounds(m: u64, n: u64) -> PyResult<(f64, Option<f64>)> {
    euclid_sphere_bounds(m, n).map(|b| (b.lower, b.upper)).map_err(err)
}

/// Number of homomorphisms from a named group (`Z3`, `S3`, ...) to `S_j`.
#[pyfunction]
fn count_homs(group: &str, j: usize) -> PyResult<u64> {
    let g = FiniteGroup::by_name(group).map_err(err)?;
    count_homs_to_symmetric(&g, j, HomBudget::default()).map_err(err)
}

/// Runs the worked-example suite or a seeded random campaign.
#[pyfunction]
#[pyo3(signature = (suite="paper", count=200, seed=0, spheres=false))]
fn verify(py: Python<'_>, suite: &str, count: usize, seed: u64, spheres: bool) -> PyResult<Py<PyAny>> {
    let reports = match suite {
        "paper" => run_paper_examples(PaperSuiteOptions { spheres }),
        "random" => random_campaign(seed, count, &CampaignLimits::default()),
        s => return Err(bad(format!("unknown suite `{s}`"))),
    };
    let failures = reports.iter().filter(|r| !r.passed()).count();
    let v = json!({
        "suite": suite,
        "passed": failures == 0,
        "failures": failures,
        "reports": serde_json::to_value(&reports).map_err(|e| bad(e.to_string()))?,
    });
    to_py(py, &v)
}

#[pymodule]
#[pyo3(name = "equigh")]
fn equigh_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGSpace>()?;
    m.add("EquighError", m.py().get_type::<EquighError>())?;
    m.add_function(wrap_pyfunction!(gh, m)?)?;
    m.add_function(wrap_pyfunction!(gh_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(interleaving_lower, m)?)?;
    m.add_function(wrap_pyfunction!(zeta, m)?)?;
    m.add_function(wrap_pyfunction!(euclid_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(count_homs, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
