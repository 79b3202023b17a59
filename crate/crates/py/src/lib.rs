//! Python bindings for the affectgauge pipeline.
//!
//! Exposes the scoring primitives (tokenizer, lexicon, word valence), the
//! polarization metric on a weekly graph, the hostile-week summary, the
//! synthetic corpus generator and the file-based pipeline runner.

use std::collections::BTreeMap;
use std::path::PathBuf;

use affectgauge::pipeline::Settings;
use affectgauge::polarization::{self, PolarizationRecord};
use affectgauge::sentiment::{self, DEFAULT_HALF_WIDTH};
use affectgauge::synth::{self, SynthSpec};
use affectgauge::{AffectiveGraph, AspectScore, Error, Message, StanceLabel, ValenceLexicon};
use pyo3::exceptions::{PyFileNotFoundError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::MissingInput(p) => PyFileNotFoundError::new_err(p.display().to_string()),
        Error::Config(_) | Error::Parse { .. } | Error::Invariant(_) | Error::InsufficientData(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn label(name: &str) -> PyResult<StanceLabel> {
    match name.to_ascii_lowercase().as_str() {
        "believer" => Ok(StanceLabel::Believer),
        "disbeliever" => Ok(StanceLabel::Disbeliever),
        "unlabeled" => Ok(StanceLabel::Unlabeled),
        _ => Err(PyValueError::new_err(format!("unknown stance label {name:?}"))),
    }
}

/// Word valence lexicon. `Lexicon()` is the bundled English list.
#[pyclass(name = "Lexicon", module = "affectgauge")]
struct Lexicon(ValenceLexicon);

#[pymethods]
impl Lexicon {
    #[new]
    fn new() -> Self {
        Lexicon(ValenceLexicon::english_default())
    }

    /// Reads `token<TAB>valence` lines.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        ValenceLexicon::load(&path).map(Lexicon).map_err(to_py)
    }

    #[staticmethod]
    fn from_dict(entries: BTreeMap<String, f64>) -> PyResult<Self> {
        ValenceLexicon::from_pairs(entries.iter().map(|(k, v)| (k.as_str(), *v)))
            .map(Lexicon)
            .map_err(to_py)
    }

    fn get(&self, token: &str) -> Option<f64> {
        self.0.get(token)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __contains__(&self, token: &str) -> bool {
        self.0.get(token).is_some()
    }
}

fn lexicon_or_default(lexicon: Option<PyRef<'_, Lexicon>>) -> ValenceLexicon {
    lexicon.map_or_else(ValenceLexicon::english_default, |l| l.0.clone())
}

/// Lowercased tokens; `@handles` and `#hashtags` keep their prefix.
#[pyfunction]
fn tokenize(text: &str) -> Vec<String> {
    sentiment::tokenize(text)
}

/// Mean valence of the known tokens within `half_width` of `position`.
#[pyfunction]
#[pyo3(signature = (tokens, position, lexicon=None, half_width=DEFAULT_HALF_WIDTH))]
fn word_valence(
    tokens: Vec<String>,
    position: usize,
    lexicon: Option<PyRef<'_, Lexicon>>,
    half_width: usize,
) -> PyResult<f64> {
    if position >= tokens.len() {
        return Err(PyValueError::new_err(format!(
            "position {position} is outside {} tokens",
            tokens.len()
        )));
    }
    Ok(sentiment::word_valence(&tokens, position, &lexicon_or_default(lexicon), half_width))
}

/// `[(target, score)]` for every user a message mentions or replies to.
#[pyfunction]
#[pyo3(signature = (text, mentions, reply_to=None, lexicon=None, half_width=DEFAULT_HALF_WIDTH))]
fn score_message(
    text: String,
    mentions: Vec<String>,
    reply_to: Option<String>,
    lexicon: Option<PyRef<'_, Lexicon>>,
    half_width: usize,
) -> Vec<(String, f64)> {
    let message = Message {
        message_id: String::new(),
        author_id: String::new(),
        timestamp: 0,
        text,
        mentioned_users: mentions,
        reply_to_user: reply_to,
        retweet_of_user: None,
        hashtags: Vec::new(),
    };
    sentiment::aspect_scores(&message, 0, &lexicon_or_default(lexicon), half_width)
        .into_iter()
        .map(|s| (s.target, s.score))
        .collect()
}

/// Earth mover's distance between two samples; `None` if either is empty.
#[pyfunction]
fn emd_1d(a: Vec<f64>, b: Vec<f64>) -> Option<f64> {
    polarization::emd_1d(&a, &b)
}

/// `(E - I) / (E + I)`; `None` when both are zero.
#[pyfunction]
fn ei_index(external: f64, internal: f64) -> PyResult<Option<f64>> {
    if external < 0.0 || internal < 0.0 {
        return Err(PyValueError::new_err("E/I weights must be non-negative"));
    }
    Ok(polarization::ei_ratio(external, internal))
}

/// `ei_neg - ei_pos`; `None` if either is undefined.
#[pyfunction]
#[pyo3(signature = (ei_neg, ei_pos))]
fn valence(ei_neg: Option<f64>, ei_pos: Option<f64>) -> Option<f64> {
    polarization::valence(ei_neg, ei_pos)
}

fn record_dict<'py>(py: Python<'py>, r: &PolarizationRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("week", r.week)?;
    d.set_item("group", r.group.as_str())?;
    d.set_item("ei_pos", r.ei_pos)?;
    d.set_item("ei_neg", r.ei_neg)?;
    d.set_item("valence", r.valence)?;
    d.set_item("magnitude", r.magnitude)?;
    d.set_item("l", r.l)?;
    Ok(d)
}

/// One week's affective network built from `(source, target, score)` triples.
#[pyclass(name = "Graph", module = "affectgauge")]
struct Graph(AffectiveGraph);

#[pymethods]
impl Graph {
    #[new]
    fn new(week: u32, scores: Vec<(String, String, f64)>) -> PyResult<Self> {
        let scores: Vec<AspectScore> = scores
            .into_iter()
            .map(|(source, target, score)| AspectScore {
                week,
                source,
                target,
                score,
            })
            .collect();
        AffectiveGraph::build(week, &scores).map(Graph).map_err(to_py)
    }

    #[getter]
    fn week(&self) -> u32 {
        self.0.week
    }

    fn __len__(&self) -> usize {
        self.0.edge_count()
    }

    /// `[(source, target, pos, neg, net)]` sorted by endpoints.
    fn edges(&self) -> Vec<(String, String, f64, f64, f64)> {
        self.0
            .edges()
            .map(|(s, t, w)| (s.to_owned(), t.to_owned(), w.pos, w.neg, w.net))
            .collect()
    }

    /// Polarization record of `group` given a `user -> label` map.
    fn metric<'py>(
        &self,
        py: Python<'py>,
        stances: BTreeMap<String, String>,
        group: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let stances = stances
            .into_iter()
            .map(|(u, l)| Ok((u, label(&l)?)))
            .collect::<PyResult<BTreeMap<_, _>>>()?;
        let record = polarization::metric(&self.0, &stances, label(group)?).map_err(to_py)?;
        record_dict(py, &record)
    }
}

/// Hostile-week summary of one group's weekly `l` series, given as
/// `[(week, l or None)]`.
#[pyfunction]
#[pyo3(signature = (series, group="believer"))]
fn summarize<'py>(py: Python<'py>, series: Vec<(u32, Option<f64>)>, group: &str) -> PyResult<Bound<'py, PyDict>> {
    let group = label(group)?;
    let records: Vec<PolarizationRecord> = series
        .into_iter()
        .map(|(week, l)| PolarizationRecord {
            l,
            magnitude: l.map(f64::abs),
            ..PolarizationRecord::undefined(week, group)
        })
        .collect();
    let s = polarization::summarize(&records).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("group", s.group.as_str())?;
    d.set_item("defined_weeks", s.defined_weeks)?;
    d.set_item("mean_l", s.mean_l)?;
    d.set_item("sd_l", s.sd_l)?;
    d.set_item("threshold", s.threshold)?;
    d.set_item("hostile_weeks", s.hostile_weeks.into_iter().collect::<Vec<_>>())?;
    Ok(d)
}

/// Writes a synthetic corpus, its collection config and truth files into
/// `out_dir`; returns the number of messages.
#[pyfunction]
#[pyo3(signature = (out_dir, seed=0, spec=None, symmetric=false))]
fn generate_synth(out_dir: PathBuf, seed: u64, spec: Option<PathBuf>, symmetric: bool) -> PyResult<usize> {
    let mut s = match (spec, symmetric) {
        (Some(p), _) => SynthSpec::load(&p).map_err(to_py)?,
        (None, true) => SynthSpec::symmetric(seed),
        (None, false) => SynthSpec::default(),
    };
    s.rng_seed = seed;
    let corpus = synth::generate(&s).map_err(to_py)?;
    corpus.write_to(&out_dir).map_err(to_py)?;
    Ok(corpus.messages.len())
}

/// Runs every stage, writing all outputs into `out_dir`.
#[pyfunction]
#[pyo3(signature = (
    out_dir,
    corpus,
    collection=None,
    lexicon=None,
    disaster_lexicon=None,
    seeds=None,
    half_width=DEFAULT_HALF_WIDTH,
    parallelism=1,
    include_retweet_mentions=true,
    pooled_hashtags=false,
))]
#[allow(clippy::too_many_arguments)]
fn run_pipeline(
    py: Python<'_>,
    out_dir: PathBuf,
    corpus: PathBuf,
    collection: Option<PathBuf>,
    lexicon: Option<PathBuf>,
    disaster_lexicon: Option<PathBuf>,
    seeds: Option<PathBuf>,
    half_width: usize,
    parallelism: usize,
    include_retweet_mentions: bool,
    pooled_hashtags: bool,
) -> PyResult<()> {
    let mut s = Settings::new(out_dir);
    s.corpus = Some(corpus);
    s.collection = collection;
    s.lexicon = lexicon;
    s.disaster_lexicon = disaster_lexicon;
    s.seeds = seeds;
    s.half_width = half_width;
    s.parallelism = parallelism;
    s.include_retweet_mentions = include_retweet_mentions;
    s.pooled_hashtags = pooled_hashtags;
    py.detach(|| s.run_all()).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "affectgauge")]
fn affectgauge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Lexicon>()?;
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(word_valence, m)?)?;
    m.add_function(wrap_pyfunction!(score_message, m)?)?;
    m.add_function(wrap_pyfunction!(emd_1d, m)?)?;
    m.add_function(wrap_pyfunction!(ei_index, m)?)?;
    m.add_function(wrap_pyfunction!(valence, m)?)?;
    m.add_function(wrap_pyfunction!(summarize, m)?)?;
    m.add_function(wrap_pyfunction!(generate_synth, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    m.add("OUTPUT_FILES", affectgauge::pipeline::OUTPUT_FILES.to_vec())?;
    Ok(())
}
