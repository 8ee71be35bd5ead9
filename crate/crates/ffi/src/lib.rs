//! C ABI for the kcut solver.
//!
//! Graphs and reports are opaque heap handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! a [`KcutStatus`]; on failure, [`kcut_last_error`] describes what went wrong
//! on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kcut_core::error::KcutError;
use kcut_core::graph::{parse_graph, Graph, KCut};
use kcut_core::oracle::brute_force_min_kcut;
use kcut_core::pipeline::{min_kcut, Branch, PipelineConfig};
use libc::size_t;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KcutStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// Bad argument: k out of range, weighted or non-simple graph, and so on.
    InvalidInput = 4,
    TooLarge = 5,
    /// Internal consistency check failed. Please report it.
    Invariant = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Which solver branch to run.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KcutBranch {
    Auto = 0,
    Exact = 1,
    Sparsify = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct KcutOptions {
    pub seed: u64,
    /// Cap on contraction trials per round.
    pub trial_cap: u64,
    pub branch: KcutBranch,
}

/// Opaque graph handle.
pub struct KcutGraph(Graph);

/// Opaque result handle.
pub struct KcutReport {
    value: u64,
    k: usize,
    labels: Vec<usize>,
    json: String,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &KcutError) -> KcutStatus {
    match e {
        KcutError::Parse { .. } => KcutStatus::Parse,
        KcutError::TooLarge { .. } => KcutStatus::TooLarge,
        KcutError::Invariant(_) | KcutError::Overflow(_) => KcutStatus::Invariant,
        _ => KcutStatus::InvalidInput,
    }
}

enum Fail {
    Status(KcutStatus, String),
    Core(KcutError),
}

impl From<KcutError> for Fail {
    fn from(e: KcutError) -> Self {
        Fail::Core(e)
    }
}

fn null() -> Fail {
    Fail::Status(KcutStatus::NullPointer, "null pointer argument".into())
}

/// Runs `f`, turning errors and panics into a status plus a message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> KcutStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KcutStatus::Ok,
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside kcut");
            KcutStatus::Panic
        }
    }
}

fn report_from_cut(cut: KCut, json: String) -> KcutReport {
    let cut = cut.canonicalize();
    KcutReport {
        value: cut.value(),
        k: cut.k(),
        labels: cut.labels().to_vec(),
        json,
    }
}

/// Message for the last failed call on this thread. Empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn kcut_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn kcut_options_default() -> KcutOptions {
    let d = PipelineConfig::default();
    KcutOptions {
        seed: d.seed,
        trial_cap: d.trial_cap,
        branch: KcutBranch::Auto,
    }
}

/// Parses an edge-list document (`n m` header, then one `u v` per line).
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kcut_graph_parse(
    text: *const c_char,
    out: *mut *mut KcutGraph,
) -> KcutStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Fail::Status(KcutStatus::InvalidUtf8, e.to_string()))?;
        let g = parse_graph(text)?;
        *out = Box::into_raw(Box::new(KcutGraph(g)));
        Ok(())
    })
}

/// Builds a simple graph on `n` vertices from `m` edges given as `2m`
/// endpoints `u0 v0 u1 v1 ...`.
///
/// # Safety
/// `endpoints` must point to `2 * m` readable values (it may be null when
/// `m == 0`) and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kcut_graph_from_edges(
    n: size_t,
    endpoints: *const size_t,
    m: size_t,
    out: *mut *mut KcutGraph,
) -> KcutStatus {
    guard(|| {
        if out.is_null() || (endpoints.is_null() && m > 0) {
            return Err(null());
        }
        let flat: &[size_t] = if m == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(endpoints, 2 * m)
        };
        let g = Graph::from_edges(n, flat.chunks_exact(2).map(|e| (e[0], e[1])))?;
        *out = Box::into_raw(Box::new(KcutGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `graph` must come from this library and not be freed already. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn kcut_graph_free(graph: *mut KcutGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Vertex count, or 0 for null.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kcut_graph_vertex_count(graph: *const KcutGraph) -> size_t {
    graph.as_ref().map_or(0, |g| g.0.n())
}

/// Total edge weight, which is the edge count for simple graphs.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kcut_graph_edge_count(graph: *const KcutGraph) -> u64 {
    graph.as_ref().map_or(0, |g| g.0.total_weight())
}

/// Minimum k-cut with default options and the given seed.
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kcut_solve(
    graph: *const KcutGraph,
    k: size_t,
    seed: u64,
    out: *mut *mut KcutReport,
) -> KcutStatus {
    let opts = KcutOptions {
        seed,
        ..kcut_options_default()
    };
    kcut_solve_with_options(graph, k, &opts, out)
}

/// # Safety
/// `graph` must be a live handle, `options` and `out` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn kcut_solve_with_options(
    graph: *const KcutGraph,
    k: size_t,
    options: *const KcutOptions,
    out: *mut *mut KcutReport,
) -> KcutStatus {
    guard(|| {
        let (Some(g), Some(opts)) = (graph.as_ref(), options.as_ref()) else {
            return Err(null());
        };
        if out.is_null() {
            return Err(null());
        }
        let cfg = PipelineConfig {
            seed: opts.seed,
            trial_cap: opts.trial_cap,
            force_branch: match opts.branch {
                KcutBranch::Auto => None,
                KcutBranch::Exact => Some(Branch::Exact),
                KcutBranch::Sparsify => Some(Branch::Sparsify),
            },
            ..PipelineConfig::default()
        };
        let report = min_kcut(&g.0, k, &cfg)?;
        let json = report.to_json();
        *out = Box::into_raw(Box::new(report_from_cut(report.cut, json)));
        Ok(())
    })
}

/// Exhaustive minimum k-cut; refuses graphs above 14 vertices.
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kcut_oracle(
    graph: *const KcutGraph,
    k: size_t,
    out: *mut *mut KcutReport,
) -> KcutStatus {
    guard(|| {
        let Some(g) = graph.as_ref() else {
            return Err(null());
        };
        if out.is_null() {
            return Err(null());
        }
        let cut = brute_force_min_kcut(&g.0, k)?.canonicalize();
        let json = serde_json::json!({
            "k": k,
            "value": cut.value(),
            "components": cut.components(),
            "method": "brute_force",
        });
        let json = serde_json::to_string_pretty(&json).expect("plain data");
        *out = Box::into_raw(Box::new(report_from_cut(cut, json)));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kcut_report_value(report: *const KcutReport) -> u64 {
    report.as_ref().map_or(0, |r| r.value)
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kcut_report_k(report: *const KcutReport) -> size_t {
    report.as_ref().map_or(0, |r| r.k)
}

/// Number of labels, one per vertex.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kcut_report_vertex_count(report: *const KcutReport) -> size_t {
    report.as_ref().map_or(0, |r| r.labels.len())
}

/// Copies the part label of every vertex into `buf`. Labels are canonical:
/// part 0 contains vertex 0 and new labels appear in vertex order.
///
/// # Safety
/// `report` must be a live handle and `buf` writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn kcut_report_labels(
    report: *const KcutReport,
    buf: *mut size_t,
    len: size_t,
) -> KcutStatus {
    guard(|| {
        let Some(r) = report.as_ref() else {
            return Err(null());
        };
        if buf.is_null() {
            return Err(null());
        }
        if len < r.labels.len() {
            return Err(Fail::Status(
                KcutStatus::BufferTooSmall,
                format!("need {} slots, got {len}", r.labels.len()),
            ));
        }
        ptr::copy_nonoverlapping(r.labels.as_ptr(), buf, r.labels.len());
        Ok(())
    })
}

/// Full report as JSON. Release with [`kcut_string_free`]. Null if `report`
/// is null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kcut_report_json(report: *const KcutReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => CString::new(r.json.as_str()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `s` must be null or come from [`kcut_report_json`].
#[no_mangle]
pub unsafe extern "C" fn kcut_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kcut_report_free(report: *mut KcutReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
