use cgadget_core::cover::cover_bound;
use cgadget_core::editembed::{estimate_lambda, gen_substitution_code, DEFAULT_C};
use cgadget_core::gadget::{verify_gadget, GadgetBuild, DEFAULT_VERIFY_BUDGET};
use cgadget_core::io::{parse_gadget, parse_instance, write_gadget, write_instance};
use cgadget_core::reduce::{
    bcp_to_cp_stream, bmip_to_mip_stream, brute_oracle, gap_cp_oracle, hamming_cp_to_edit_cp, ov_to_bcp,
    pick_repetitions, run_bcp_via_cp, run_bcp_via_gapcp, run_bmip_via_mip, tensor_amplify, DriverOutcome,
};
use cgadget_core::solver::{decide, solve};
use cgadget_core::{
    build_cd_gadget, build_gap_cd_gadget, build_ip_gadget, cover_biclique, find_center, rs_code, verify_cover,
    BipartiteGadget, EnumBudget, InstanceKind, PermutationCover, PrimeField, Rational, VerifiedGadget,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(cgadget, CgadgetError, PyValueError);

fn err(e: cgadget_core::Error) -> PyErr {
    CgadgetError::new_err(e.to_string())
}

fn budget(b: Option<u64>) -> EnumBudget {
    b.map_or(EnumBudget::DEFAULT, EnumBudget)
}

fn fraction<'py>(py: Python<'py>, r: Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((*r.numer(), *r.denom()))
}

/// Accepts `Fraction`, `int`, or a `"p/q"` string.
fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(s) = obj.extract::<String>() {
        let (n, d) = s.split_once('/').unwrap_or((&s, "1"));
        let n: i128 = n.trim().parse().map_err(|_| PyValueError::new_err(format!("bad rational {s}")))?;
        let d: i128 = d.trim().parse().map_err(|_| PyValueError::new_err(format!("bad rational {s}")))?;
        if d == 0 {
            return Err(PyValueError::new_err("zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    let n: i128 = obj.getattr("numerator")?.extract()?;
    let d: i128 = obj.getattr("denominator")?.extract()?;
    Ok(Rational::new(n, d))
}

#[pyclass(name = "Gadget", module = "cgadget", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGadget {
    inner: BipartiteGadget,
    center: Option<Vec<u64>>,
}

#[pymethods]
impl PyGadget {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyGadget { inner: parse_gadget(text).map_err(err)?, center: None })
    }

    fn to_text(&self) -> String {
        write_gadget(&self.inner)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.token()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q
    }

    #[getter]
    fn k1(&self) -> usize {
        self.inner.k1
    }

    #[getter]
    fn k2(&self) -> usize {
        self.inner.k2
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn beta(&self) -> u64 {
        self.inner.beta
    }

    #[getter]
    fn mu<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.inner.mu)
    }

    #[getter]
    fn center(&self) -> Option<Vec<u64>> {
        self.center.clone()
    }

    #[getter]
    fn side_a(&self) -> Vec<String> {
        self.inner.side_a.iter().map(ToString::to_string).collect()
    }

    #[getter]
    fn side_b(&self) -> Vec<String> {
        self.inner.side_b.iter().map(ToString::to_string).collect()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.adjacency.ones().collect()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn density_floor<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.inner.density_floor())
    }

    /// Exhaustive check; returns a dict of measured extremes and violations.
    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = verify_gadget(&self.inner, DEFAULT_VERIFY_BUDGET).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("ok", r.is_ok())?;
        d.set_item("violation_count", r.violation_count)?;
        d.set_item("violations", r.violations.iter().map(ToString::to_string).collect::<Vec<_>>())?;
        d.set_item("edge_count", r.edge_count)?;
        d.set_item("edge_min", r.edge_min)?;
        d.set_item("edge_max", r.edge_max)?;
        d.set_item("cross_extreme", r.cross_extreme)?;
        d.set_item("same_side_extreme", r.same_side_extreme)?;
        d.set_item("density_floor", fraction(py, r.density_floor)?)?;
        d.set_item("density_ok", r.density_ok)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        let g = &self.inner;
        format!("Gadget(kind={}, q={}, k1={}, k2={}, n={}, dim={}, beta={})", g.kind, g.q, g.k1, g.k2, g.n(), g.dim(), g.beta)
    }
}

impl PyGadget {
    fn verified(&self) -> PyResult<VerifiedGadget> {
        VerifiedGadget::new(self.inner.clone(), DEFAULT_VERIFY_BUDGET).map_err(err)
    }
}

#[pyclass(name = "Cover", module = "cgadget", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCover {
    inner: PermutationCover,
}

#[pymethods]
impl PyCover {
    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// `(perm_a, perm_b)` per copy; `perm_a[u]` is the position of vertex `u`.
    fn permutations(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.inner.perms.iter().map(|p| (p.perm_a.clone(), p.perm_b.clone())).collect()
    }

    fn bound(&self) -> f64 {
        cover_bound(self.inner.n(), self.inner.source.count_ones())
    }

    fn verify(&self) -> bool {
        verify_cover(&self.inner).is_ok()
    }

    fn __repr__(&self) -> String {
        format!("Cover(n={}, k={})", self.inner.n(), self.inner.k())
    }
}

#[pyclass(name = "Instance", module = "cgadget", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct PyInstance {
    inner: cgadget_core::Instance,
}

#[pymethods]
impl PyInstance {
    /// `rows` is one list of 0/1 strings, or two for bichromatic kinds.
    #[new]
    #[pyo3(signature = (kind, rows, alpha=None))]
    fn new(kind: &str, rows: Vec<Vec<String>>, alpha: Option<u64>) -> PyResult<Self> {
        let kind = InstanceKind::from_token(kind).ok_or_else(|| PyValueError::new_err(format!("unknown kind {kind}")))?;
        let sets = rows
            .iter()
            .map(|r| cgadget_core::PointSet::parse_rows(r))
            .collect::<cgadget_core::Result<Vec<_>>>()
            .map_err(err)?;
        Ok(PyInstance { inner: cgadget_core::Instance::new(kind, sets, alpha).map_err(err)? })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyInstance { inner: parse_instance(text).map_err(err)? })
    }

    fn to_text(&self) -> String {
        write_instance(&self.inner)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.token()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn alpha(&self) -> Option<u64> {
        self.inner.alpha
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.inner.sets.iter().map(|s| s.points().iter().map(ToString::to_string).collect()).collect()
    }

    /// Exact optimum and its lexicographically smallest 0-based witness.
    fn solve(&self) -> PyResult<(u64, (usize, usize))> {
        let o = solve(&self.inner).map_err(err)?;
        Ok((o.value, o.witness))
    }

    fn decide(&self) -> PyResult<String> {
        Ok(decide(&self.inner).map_err(err)?.to_string())
    }

    fn __repr__(&self) -> String {
        format!("Instance(kind={}, n={}, d={}, alpha={:?})", self.inner.kind, self.inner.n(), self.inner.d(), self.inner.alpha)
    }
}

impl PyInstance {
    fn pair(&self, want: InstanceKind) -> PyResult<(&cgadget_core::PointSet, &cgadget_core::PointSet, u64)> {
        if self.inner.kind != want {
            return Err(PyValueError::new_err(format!("expected a {want} instance, got {}", self.inner.kind)));
        }
        Ok((&self.inner.sets[0], &self.inner.sets[1], self.inner.alpha.unwrap_or(0)))
    }
}

fn wrap_build(b: GadgetBuild) -> PyGadget {
    PyGadget { inner: b.gadget, center: Some(b.certificate.center) }
}

/// Build a gadget of kind `"cd"`, `"ip"` or `"gap-cd"`.
#[pyfunction]
#[pyo3(signature = (kind, q, k1, k2=None, budget=None))]
fn build_gadget(py: Python<'_>, kind: &str, q: u64, k1: usize, k2: Option<usize>, budget: Option<u64>) -> PyResult<PyGadget> {
    let b = self::budget(budget);
    let built = py.detach(|| match kind {
        "cd" => build_cd_gadget(q, k1, b),
        "ip" => build_ip_gadget(q, k1, b),
        "gap-cd" => match k2 {
            Some(k2) => build_gap_cd_gadget(q, k1, k2, b),
            None => Err(cgadget_core::Error::BadParameters("gap-cd needs k2".into())),
        },
        other => Err(cgadget_core::Error::BadParameters(format!("unknown gadget kind {other}"))),
    });
    Ok(wrap_build(built.map_err(err)?))
}

#[pyfunction]
fn cover(py: Python<'_>, gadget: &PyGadget) -> PyResult<PyCover> {
    let inner = py.detach(|| cover_biclique(&gadget.inner.adjacency)).map_err(err)?;
    Ok(PyCover { inner })
}

/// Center of `RS_q[q, k1]` inside `RS_q[q, k2]`: `(center, radius, ball_count, total)`.
#[pyfunction]
#[pyo3(signature = (q, k1, k2=None, budget=None))]
fn center(q: u64, k1: usize, k2: Option<usize>, budget: Option<u64>) -> PyResult<(Vec<u64>, usize, u64, u64)> {
    let field = PrimeField::new(q).map_err(err)?;
    let inner = rs_code(field, q as usize, k1).map_err(err)?;
    let outer = rs_code(field, q as usize, k2.unwrap_or(k1 + 1)).map_err(err)?;
    let c = find_center(&inner, &outer, self::budget(budget)).map_err(err)?;
    Ok((c.center, c.radius, c.ball_count, c.total_c1))
}

#[pyfunction]
fn reduce_ov_to_bcp(inst: &PyInstance) -> PyResult<PyInstance> {
    let (a, b, _) = inst.pair(InstanceKind::Ov)?;
    Ok(PyInstance { inner: ov_to_bcp(a, b).map_err(err)? })
}

fn gadget_and_cover(gadget: &PyGadget, cover: Option<&PyCover>) -> PyResult<(VerifiedGadget, PermutationCover)> {
    let g = gadget.verified()?;
    let c = match cover {
        Some(c) => c.inner.clone(),
        None => cover_biclique(&g.adjacency).map_err(err)?,
    };
    Ok((g, c))
}

fn outcome<'py>(py: Python<'py>, o: &DriverOutcome) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("verdict", o.verdict.to_string())?;
    let t = &o.trace;
    d.set_item("n", t.n)?;
    d.set_item("n_prime", t.n_prime)?;
    d.set_item("k", t.cover_k)?;
    d.set_item("subinstances", t.sub_instances_emitted)?;
    d.set_item("dim_out", t.dimension_out)?;
    d.set_item("alpha_out", t.alpha_out)?;
    d.set_item("remainder_pairs", t.remainder_pairs)?;
    Ok(d)
}

/// All CP sub-instances of the BCP-to-CP grid, in `(i, j, t)` order.
#[pyfunction]
#[pyo3(signature = (inst, gadget, cover=None))]
fn reduce_bcp_to_cp(inst: &PyInstance, gadget: &PyGadget, cover: Option<&PyCover>) -> PyResult<Vec<PyInstance>> {
    let (a, b, alpha) = inst.pair(InstanceKind::Bcp)?;
    let (g, c) = gadget_and_cover(gadget, cover)?;
    let grid = bcp_to_cp_stream(a, b, alpha, &g, &c).map_err(err)?;
    Ok(grid.iter().map(|inner| PyInstance { inner }).collect())
}

#[pyfunction]
#[pyo3(signature = (inst, gadget, cover=None))]
fn reduce_bmip_to_mip(inst: &PyInstance, gadget: &PyGadget, cover: Option<&PyCover>) -> PyResult<Vec<PyInstance>> {
    let (a, b, alpha) = inst.pair(InstanceKind::Bmip)?;
    let (g, c) = gadget_and_cover(gadget, cover)?;
    let grid = bmip_to_mip_stream(a, b, alpha, &g, &c).map_err(err)?;
    Ok(grid.iter().map(|inner| PyInstance { inner }).collect())
}

/// Decide BCP through the CP grid with the brute-force oracle.
#[pyfunction]
#[pyo3(signature = (inst, gadget, cover=None))]
fn run_bcp_via_cp_py<'py>(py: Python<'py>, inst: &PyInstance, gadget: &PyGadget, cover: Option<&PyCover>) -> PyResult<Bound<'py, PyDict>> {
    let (a, b, alpha) = inst.pair(InstanceKind::Bcp)?;
    let (g, c) = gadget_and_cover(gadget, cover)?;
    let o = py.detach(|| run_bcp_via_cp(a, b, alpha, &g, &c, &brute_oracle)).map_err(err)?;
    outcome(py, &o)
}

#[pyfunction]
#[pyo3(signature = (inst, gadget, cover=None))]
fn run_bmip_via_mip_py<'py>(py: Python<'py>, inst: &PyInstance, gadget: &PyGadget, cover: Option<&PyCover>) -> PyResult<Bound<'py, PyDict>> {
    let (a, b, alpha) = inst.pair(InstanceKind::Bmip)?;
    let (g, c) = gadget_and_cover(gadget, cover)?;
    let o = py.detach(|| run_bmip_via_mip(a, b, alpha, &g, &c, &brute_oracle)).map_err(err)?;
    outcome(py, &o)
}

/// `(1+kappa)`-BCP through `(1+theta)`-CP; adds `r1` and `r2` to the result.
#[pyfunction]
#[pyo3(signature = (inst, gadget, kappa, theta, cover=None))]
fn run_bcp_via_gapcp_py<'py>(
    py: Python<'py>,
    inst: &PyInstance,
    gadget: &PyGadget,
    kappa: &Bound<'py, PyAny>,
    theta: &Bound<'py, PyAny>,
    cover: Option<&PyCover>,
) -> PyResult<Bound<'py, PyDict>> {
    let (a, b, alpha) = inst.pair(InstanceKind::Bcp)?;
    let (kappa, theta) = (rational(kappa)?, rational(theta)?);
    let (g, c) = gadget_and_cover(gadget, cover)?;
    let oracle = gap_cp_oracle(theta);
    let (o, params) = py.detach(|| run_bcp_via_gapcp(a, b, alpha, &g, &c, kappa, theta, &oracle)).map_err(err)?;
    let d = outcome(py, &o)?;
    d.set_item("r1", params.r1)?;
    d.set_item("r2", params.r2)?;
    Ok(d)
}

#[pyfunction]
fn repetitions(alpha: u64, beta: u64, kappa: &Bound<'_, PyAny>, mu: &Bound<'_, PyAny>, theta: &Bound<'_, PyAny>) -> PyResult<(usize, usize)> {
    pick_repetitions(alpha, beta, rational(kappa)?, rational(mu)?, rational(theta)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (inst, t, budget=1 << 20))]
fn reduce_tensor(inst: &PyInstance, t: usize, budget: u64) -> PyResult<PyInstance> {
    if inst.inner.kind != InstanceKind::Mip {
        return Err(PyValueError::new_err("tensor needs a mip instance"));
    }
    let out = tensor_amplify(&inst.inner.sets[0], inst.inner.alpha.unwrap_or(0), t, budget).map_err(err)?;
    Ok(PyInstance { inner: out })
}

/// Hamming CP to edit CP; returns `(instance, slope, lambda_hat, max_residual)`.
#[pyfunction]
#[pyo3(signature = (inst, seed=0, c=DEFAULT_C, samples=1000))]
fn reduce_to_edit<'py>(
    py: Python<'py>,
    inst: &PyInstance,
    seed: u64,
    c: f64,
    samples: usize,
) -> PyResult<(PyInstance, Bound<'py, PyAny>, f64, Bound<'py, PyAny>)> {
    if inst.inner.kind != InstanceKind::Cp {
        return Err(PyValueError::new_err("to-edit needs a cp instance"));
    }
    let red = py
        .detach(|| {
            let code = gen_substitution_code(inst.inner.d(), seed, c)?;
            let fit = estimate_lambda(&code, samples, seed)?;
            hamming_cp_to_edit_cp(&inst.inner.sets[0], inst.inner.alpha.unwrap_or(0), &code, &fit)
        })
        .map_err(err)?;
    Ok((PyInstance { inner: red.instance }, fraction(py, red.slope)?, red.lambda_hat, fraction(py, red.max_residual)?))
}

#[pyfunction]
fn edit_distance(a: &str, b: &str) -> usize {
    cgadget_core::edit_distance(a.as_bytes(), b.as_bytes())
}

#[pymodule]
fn cgadget(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CgadgetError", m.py().get_type::<CgadgetError>())?;
    m.add_class::<PyGadget>()?;
    m.add_class::<PyCover>()?;
    m.add_class::<PyInstance>()?;
    m.add_function(wrap_pyfunction!(build_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(cover, m)?)?;
    m.add_function(wrap_pyfunction!(center, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_ov_to_bcp, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_bcp_to_cp, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_bmip_to_mip, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_tensor, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_to_edit, m)?)?;
    m.add_function(wrap_pyfunction!(repetitions, m)?)?;
    m.add("run_bcp_via_cp", wrap_pyfunction!(run_bcp_via_cp_py, m)?)?;
    m.add("run_bmip_via_mip", wrap_pyfunction!(run_bmip_via_mip_py, m)?)?;
    m.add("run_bcp_via_gapcp", wrap_pyfunction!(run_bcp_via_gapcp_py, m)?)?;
    m.add_function(wrap_pyfunction!(edit_distance, m)?)?;
    Ok(())
}
