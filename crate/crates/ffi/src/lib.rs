//! C ABI over `minorlab`.
//!
//! Graphs are opaque `MlGraph` handles. Every fallible call returns an
//! `MlStatus`; on failure `ml_last_error` describes the error for the
//! calling thread. Strings returned through `char **` out-parameters are
//! owned by the caller and released with `ml_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use minorlab::expansion::{check_expander, ExpansionProfile, HeuristicOptions, DEFAULT_EXACT_CAP, DEFAULT_PROBE_CAP};
use minorlab::extraction::{extract_expander, verify_extraction_trace, ExtractionTrace, PipelineConfig};
use minorlab::gen::{gen, GenModel, GenSpec};
use minorlab::minor::{default_c_of_t, find_small_minor, MinorModel};
use minorlab::oracle::{hadwiger_number, verify_minor_model};
use minorlab::{rational, Error, Graph};

/// Opaque graph handle.
pub struct MlGraph(Graph);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    LimitExceeded = 3,
    DensityBelowThreshold = 4,
    VerificationFailed = 5,
    Internal = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlProfileKind {
    Delta = 0,
    DeltaN = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlGenModel {
    Gnp = 0,
    HighGirth = 1,
    DisjointCliques = 2,
    RandomRegular = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = clean);
}

fn status_of(e: &Error) -> MlStatus {
    match e {
        Error::Parse { .. } | Error::InvalidRational(_) | Error::BinaryFormat(_) => MlStatus::ParseError,
        Error::ExactCapExceeded { .. } | Error::BruteCapExceeded { .. } => MlStatus::LimitExceeded,
        Error::DensityBelowThreshold { .. } => MlStatus::DensityBelowThreshold,
        Error::Invariant(_) => MlStatus::Internal,
        _ => MlStatus::InvalidArgument,
    }
}

struct Fail(MlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn invalid(msg: &str) -> Fail {
    Fail(MlStatus::InvalidArgument, msg.to_string())
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> MlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            MlStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside minorlab");
            MlStatus::Panic
        }
    }
}

unsafe fn graph_ref<'a>(g: *const MlGraph) -> Result<&'a Graph, Fail> {
    g.as_ref().map(|h| &h.0).ok_or_else(|| invalid("null graph handle"))
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(invalid(&format!("null {what}")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(MlStatus::ParseError, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(invalid("null output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(MlStatus::Internal, "string with nul byte".into()))?;
    put(out, c.into_raw())
}

unsafe fn put_graph(out: *mut *mut MlGraph, g: Graph) -> Result<(), Fail> {
    put(out, Box::into_raw(Box::new(MlGraph(g))))
}

/// `kind` is an `MlProfileKind` value; `ambient_n == 0` means the order of `g`.
fn profile(kind: u32, delta: &str, ambient_n: usize, g: &Graph) -> Result<ExpansionProfile, Fail> {
    let delta = rational::parse(delta)?;
    match kind {
        k if k == MlProfileKind::Delta as u32 => Ok(ExpansionProfile::delta(delta)?),
        k if k == MlProfileKind::DeltaN as u32 => {
            Ok(ExpansionProfile::delta_n(delta, if ambient_n == 0 { g.order() } else { ambient_n })?)
        }
        _ => Err(invalid("unknown profile kind")),
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next `ml_` call on the same thread.
#[no_mangle]
pub extern "C" fn ml_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ml_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a graph on `n` vertices from `m` pairs stored flat in `edges`.
///
/// # Safety
/// `edges` must point to `2 * m` readable values (or be null when `m == 0`);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_graph_from_edges(n: usize, edges: *const usize, m: usize, out: *mut *mut MlGraph) -> MlStatus {
    guard(|| {
        if edges.is_null() && m > 0 {
            return Err(invalid("null edge array"));
        }
        let flat = if m == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * m) };
        let g = Graph::from_edges(n, flat.chunks_exact(2).map(|e| (e[0], e[1])))?;
        put_graph(out, g)
    })
}

/// Parses the edge-list text format (`p n m` header optional).
///
/// # Safety
/// `edge_list` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_graph_parse(edge_list: *const c_char, out: *mut *mut MlGraph) -> MlStatus {
    guard(|| {
        let g = minorlab::graph::parse_edge_list(text(edge_list, "edge list")?)?;
        put_graph(out, g)
    })
}

/// Seeded generator. `model` is an `MlGenModel` value; `base_c` only
/// matters for `HighGirth`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_gen(
    model: u32,
    n: usize,
    param: u64,
    base_c: u64,
    seed: u64,
    out: *mut *mut MlGraph,
) -> MlStatus {
    guard(|| {
        let model = match model {
            m if m == MlGenModel::Gnp as u32 => GenModel::Gnp,
            m if m == MlGenModel::HighGirth as u32 => GenModel::HighGirth,
            m if m == MlGenModel::DisjointCliques as u32 => GenModel::DisjointCliques,
            m if m == MlGenModel::RandomRegular as u32 => GenModel::RandomRegular,
            _ => return Err(invalid("unknown generator model")),
        };
        let g = gen(&GenSpec {
            model,
            n,
            param,
            base_c,
            seed,
        })?;
        put_graph(out, g)
    })
}

/// # Safety
/// `g` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ml_graph_free(g: *mut MlGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ml_graph_order(g: *const MlGraph) -> usize {
    g.as_ref().map_or(0, |h| h.0.order())
}

/// Edge count, 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ml_graph_edge_count(g: *const MlGraph) -> usize {
    g.as_ref().map_or(0, |h| h.0.edge_count())
}

/// Canonical edge-list text of `g`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_graph_to_edge_list(g: *const MlGraph, out: *mut *mut c_char) -> MlStatus {
    guard(|| put_string(out, minorlab::graph::write_edge_list(graph_ref(g)?)))
}

/// Expansion verdict as JSON. `kind` is an `MlProfileKind` value and
/// `ambient_n == 0` means the graph order.
///
/// # Safety
/// `g` must be a live handle, `delta` a NUL-terminated `p/q` string and
/// `json_out` writable.
#[no_mangle]
pub unsafe extern "C" fn ml_check_expander(
    g: *const MlGraph,
    kind: u32,
    delta: *const c_char,
    ambient_n: usize,
    seed: u64,
    json_out: *mut *mut c_char,
) -> MlStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let p = profile(kind, text(delta, "delta")?, ambient_n, g)?;
        let opts = HeuristicOptions {
            probe_cap: DEFAULT_PROBE_CAP,
            seed,
        };
        let outcome = check_expander(g, &p, DEFAULT_EXACT_CAP, &opts)?;
        put_string(json_out, outcome.to_json(&p, g.order()))
    })
}

/// Extracts an expander. `trace_json_out` may be null.
///
/// # Safety
/// `g` must be a live handle, `delta` a NUL-terminated string, `h_out`
/// writable and `trace_json_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ml_extract(
    g: *const MlGraph,
    kind: u32,
    delta: *const c_char,
    ambient_n: usize,
    seed: u64,
    h_out: *mut *mut MlGraph,
    trace_json_out: *mut *mut c_char,
) -> MlStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let p = profile(kind, text(delta, "delta")?, ambient_n, g)?;
        let cfg = PipelineConfig {
            rng_seed: seed,
            ..PipelineConfig::default()
        };
        let (h, trace) = extract_expander(g, &p, &cfg)?;
        if h_out.is_null() {
            return Err(invalid("null output pointer"));
        }
        if !trace_json_out.is_null() {
            put_string(trace_json_out, trace.to_json())?;
        }
        put_graph(h_out, h)
    })
}

/// Replays a JSON trace against `g`. `*valid` is set on `Ok`; a malformed
/// trace is an error, a well-formed but wrong one gives `*valid = false`.
///
/// # Safety
/// `g` must be a live handle, `trace_json` a NUL-terminated string and
/// `valid` writable.
#[no_mangle]
pub unsafe extern "C" fn ml_verify_trace(g: *const MlGraph, trace_json: *const c_char, valid: *mut bool) -> MlStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let trace = ExtractionTrace::from_json(text(trace_json, "trace")?)?;
        put(valid, verify_extraction_trace(g, &trace)?)
    })
}

/// Full pipeline; the report is JSON. `c_of_t` may be null for the
/// built-in values at `t = 3, 4, 5`.
///
/// # Safety
/// `g` must be a live handle, `epsilon` a NUL-terminated string, `c_of_t`
/// null or NUL-terminated and `report_out` writable.
#[no_mangle]
pub unsafe extern "C" fn ml_find_minor(
    g: *const MlGraph,
    t: usize,
    epsilon: *const c_char,
    c_of_t: *const c_char,
    seed: u64,
    report_out: *mut *mut c_char,
) -> MlStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let eps = rational::parse(text(epsilon, "epsilon")?)?;
        let c = if c_of_t.is_null() {
            default_c_of_t(t).ok_or_else(|| invalid("no default c(t) for this t"))?
        } else {
            rational::parse(text(c_of_t, "c(t)")?)?
        };
        let cfg = PipelineConfig {
            rng_seed: seed,
            ..PipelineConfig::default()
        };
        let report = match find_small_minor(g, t, &eps, &c, &cfg) {
            Err(Error::Invariant(msg)) => return Err(Fail(MlStatus::VerificationFailed, msg)),
            other => other?,
        };
        put_string(report_out, report.to_json())
    })
}

/// Checks a JSON minor model against `g`.
///
/// # Safety
/// `g` must be a live handle, `model_json` a NUL-terminated string and
/// `valid` writable.
#[no_mangle]
pub unsafe extern "C" fn ml_verify_model(g: *const MlGraph, model_json: *const c_char, valid: *mut bool) -> MlStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let model = MinorModel::from_json(text(model_json, "model")?)?;
        put(valid, verify_minor_model(g, &model))
    })
}

/// Exact Hadwiger number; graphs above the brute-force cap are rejected.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ml_hadwiger_number(g: *const MlGraph, out: *mut usize) -> MlStatus {
    guard(|| put(out, hadwiger_number(graph_ref(g)?)?))
}

