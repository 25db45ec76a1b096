use std::fs::File;

use pyo3::exceptions::{PyIOError, PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use awci::assemble::AssembleOptions;
use awci::io;
use awci::oracle;
use awci::pipeline::{self, RunOptions};
use awci::planted::{self, PlantedSpec};

type Member = (String, usize, usize);

fn to_py(e: awci::Error) -> PyErr {
    match e {
        awci::Error::Io(e) => PyIOError::new_err(e.to_string()),
        awci::Error::Resource(_) => PyMemoryError::new_err(e.to_string()),
        awci::Error::Contract(_) => PyRuntimeError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

/// A set of indeterminate strings sharing one alphabet.
#[pyclass(module = "pyawci", frozen)]
pub struct Dataset {
    inner: awci::Dataset,
}

impl Dataset {
    fn interval(&self, m: &Member) -> PyResult<awci::Interval> {
        let x = self
            .inner
            .index_of(&m.0)
            .ok_or_else(|| PyValueError::new_err(format!("no string with id {:?}", m.0)))?;
        self.inner.interval(x, m.1, m.2).map_err(to_py)
    }

    fn member(&self, iv: &awci::Interval) -> Member {
        (self.inner.string(iv.string).id().to_string(), iv.start, iv.end)
    }
}

#[pymethods]
impl Dataset {
    /// `strings` holds `(id, positions, breaks)`; each position is a list of labels.
    #[new]
    fn new(strings: Vec<(String, Vec<Vec<String>>, Vec<usize>)>) -> PyResult<Self> {
        let rows: Vec<_> = strings.iter().map(|(id, p, b)| (id.as_str(), p.clone(), b.clone())).collect();
        let inner = awci::Dataset::from_labels(&rows).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_ist(text: &str) -> PyResult<Self> {
        let inner = io::parse_ist(text.as_bytes()).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        let f = File::open(path).map_err(|e| PyIOError::new_err(format!("{path}: {e}")))?;
        let inner = io::parse_ist(f).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn to_ist(&self) -> PyResult<String> {
        let mut out = Vec::new();
        io::write_ist(&self.inner, &mut out).map_err(to_py)?;
        Ok(String::from_utf8(out).expect("ist output is utf-8"))
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.inner.strings().iter().map(|s| s.id().to_string()).collect()
    }

    fn lengths(&self) -> Vec<usize> {
        self.inner.strings().iter().map(|s| s.len()).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Dataset(strings={}, alphabet={})", self.inner.len(), self.inner.alphabet().len())
    }
}

fn params(delta: usize, quorum: usize, min_size: usize) -> PyResult<awci::SearchParams> {
    awci::SearchParams::new(delta, quorum, min_size).map_err(to_py)
}

/// Pairs as `(a, i, j, b, k, l, indels, common, size_left, size_right)`.
#[pyfunction]
#[pyo3(signature = (ds, delta=0, quorum=2, min_size=0, filter=true, grouping=true, threads=None))]
#[allow(clippy::too_many_arguments, clippy::type_complexity)]
fn find_pairs(
    py: Python<'_>,
    ds: &Dataset,
    delta: usize,
    quorum: usize,
    min_size: usize,
    filter: bool,
    grouping: bool,
    threads: Option<usize>,
) -> PyResult<Vec<(String, usize, usize, String, usize, usize, usize, usize, usize, usize)>> {
    let p = params(delta, quorum, min_size)?;
    let opts = RunOptions {
        filter,
        quorum_grouping: grouping,
        threads,
        ..RunOptions::default()
    };
    let pairs = py.allow_threads(|| pipeline::find_pairs(&ds.inner, &p, &opts)).map_err(to_py)?;
    Ok(pairs
        .iter()
        .map(|q| {
            let (a, i, j) = ds.member(&q.left);
            let (b, k, l) = ds.member(&q.right);
            (a, i, j, b, k, l, q.indel_total, q.common.len(), q.size_left, q.size_right)
        })
        .collect())
}

/// Maximal closed sets as `(closed, [(id, start, end), ...])`.
#[pyfunction]
#[pyo3(signature = (ds, delta=0, quorum=2, min_size=0, filter=true, prune=true, threads=None, step_limit=None))]
#[allow(clippy::too_many_arguments)]
fn find_sets(
    py: Python<'_>,
    ds: &Dataset,
    delta: usize,
    quorum: usize,
    min_size: usize,
    filter: bool,
    prune: bool,
    threads: Option<usize>,
    step_limit: Option<u64>,
) -> PyResult<Vec<(bool, Vec<Member>)>> {
    let p = params(delta, quorum, min_size)?;
    let mut assemble = AssembleOptions::default();
    if let Some(s) = step_limit {
        assemble.step_limit = s;
    }
    let opts = RunOptions {
        filter,
        prune,
        threads,
        assemble,
        ..RunOptions::default()
    };
    let a = py.allow_threads(|| pipeline::find_sets(&ds.inner, &p, &opts)).map_err(to_py)?;
    Ok(a.sets
        .iter()
        .map(|s| (s.closed, s.members.iter().map(|iv| ds.member(iv)).collect()))
        .collect())
}

/// Direct check of one interval pair. Returns a dict with `is_wci`,
/// `is_awci`, `common`, `indels_left`, `indels_right` and `indel_total`.
#[pyfunction]
#[pyo3(signature = (ds, a, b, delta=0))]
fn judge_pair<'py>(
    py: Python<'py>,
    ds: &Dataset,
    a: Member,
    b: Member,
    delta: usize,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let (ia, ib) = (ds.interval(&a)?, ds.interval(&b)?);
    let v = oracle::judge_pair(&ds.inner, &ia, &ib, delta).map_err(to_py)?;
    let d = pyo3::types::PyDict::new_bound(py);
    d.set_item("is_wci", v.is_wci)?;
    d.set_item("is_awci", v.is_awci)?;
    let labels: Vec<&str> = v.common.iter().map(|&c| ds.inner.alphabet().label(c)).collect();
    d.set_item("common", labels)?;
    d.set_item("indels_left", v.indels_left)?;
    d.set_item("indels_right", v.indels_right)?;
    d.set_item("indel_total", v.indel_total)?;
    Ok(d)
}

/// Random genomes with planted blocks; returns the dataset and the
/// planted sets.
#[pyfunction]
#[pyo3(signature = (m=3, n=200, alphabet=64, block_count=3, block_length=8, planted_delta=0, sharing=0.05, contigs=1, shuffle=true, seed=0))]
#[allow(clippy::too_many_arguments)]
fn generate_planted(
    m: usize,
    n: usize,
    alphabet: usize,
    block_count: usize,
    block_length: usize,
    planted_delta: usize,
    sharing: f64,
    contigs: usize,
    shuffle: bool,
    seed: u64,
) -> PyResult<(Dataset, Vec<Vec<Member>>)> {
    let spec = PlantedSpec {
        m,
        n,
        alphabet,
        block_count,
        block_length,
        planted_delta,
        background_sharing: sharing,
        contigs,
        shuffle_blocks: shuffle,
        seed,
    };
    let p = planted::generate_planted(&spec).map_err(to_py)?;
    let ds = Dataset { inner: p.dataset };
    let truth = p
        .truth
        .iter()
        .map(|s| s.members.iter().map(|iv| ds.member(iv)).collect())
        .collect();
    Ok((ds, truth))
}

#[pymodule]
fn pyawci(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Dataset>()?;
    m.add_function(wrap_pyfunction!(find_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(find_sets, m)?)?;
    m.add_function(wrap_pyfunction!(judge_pair, m)?)?;
    m.add_function(wrap_pyfunction!(generate_planted, m)?)?;
    Ok(())
}
