//! C interface to the viewing-graph solvability toolkit.
//!
//! Graphs live behind the opaque `VgGraph` handle, created by one of the
//! constructors and released with `vg_graph_free`. Every fallible function
//! returns a `VgStatus`; on failure `vg_last_error_message` describes the
//! problem for the calling thread. Vertex labels are 0-based except in
//! edge-list text, which is 1-based as in the command-line tool.
//!
//! Strings returned through `char **` are owned by the caller and must be
//! released with `vg_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use viewing_graphs::cli::parse_input;
use viewing_graphs::graph::format_edge_list;
use viewing_graphs::{
    analyze, check_all_necessary, deficiency, e_min, graph6, minimal_solvable, solvable_with_moves,
    Error, FiniteOptions, Overall, Rule, ViewingGraph,
};

/// An undirected simple graph on `n` cameras.
pub struct VgGraph {
    inner: ViewingGraph,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VgStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Invalid = 3,
    Domain = 4,
    TooLarge = 5,
    Degenerate = 6,
    Io = 7,
    /// The library panicked; this is a bug.
    Internal = 8,
    Utf8 = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VgFormat {
    /// Edge list when the text mentions `n=` or a dash, graph6 otherwise.
    Auto = 0,
    EdgeList = 1,
    Graph6 = 2,
}

/// Overall verdict; the values match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VgOverall {
    SolvableByMoves = 0,
    FiniteSolvableUndecided = 10,
    FailsFiniteSolvable = 20,
    NotSolvable = 30,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VgRule {
    None = 0,
    NotConnected = 1,
    NotBiconnected = 2,
    MinDegree = 3,
    AdjacentDegree2 = 4,
    TooFewEdges = 5,
    SubgraphDeficiency = 6,
    DisjointFamilyDeficiency = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct VgOptions {
    pub trials: usize,
    pub bound: i64,
    pub seed: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct VgVerdict {
    pub overall: VgOverall,
    pub violated_rule: VgRule,
    pub moves_solvable: bool,
    /// False when a necessary condition fails and the tangent test is skipped.
    pub finite_checked: bool,
    pub finite_solvable: bool,
    pub kernel_dim: usize,
    pub expected_kernel_dim: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> VgStatus {
    match e {
        Error::Parse { .. } => VgStatus::Parse,
        Error::Validation(_) => VgStatus::Invalid,
        Error::Domain(_) => VgStatus::Domain,
        Error::TooLarge(_) => VgStatus::TooLarge,
        Error::Degenerate(_) => VgStatus::Degenerate,
        Error::Io(_) | Error::Json(_) => VgStatus::Io,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guarded(f: impl FnOnce() -> Result<(), VgStatus>) -> VgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VgStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal error: the library panicked".into());
            VgStatus::Internal
        }
    }
}

fn fail(e: Error) -> VgStatus {
    let status = status_of(&e);
    set_error(e.to_string());
    status
}

fn null(what: &str) -> VgStatus {
    set_error(format!("{what} is a null pointer"));
    VgStatus::NullPointer
}

unsafe fn graph_ref<'a>(g: *const VgGraph) -> Result<&'a ViewingGraph, VgStatus> {
    // SAFETY: the caller passes a handle from this library or null
    unsafe { g.as_ref() }
        .map(|h| &h.inner)
        .ok_or_else(|| null("graph"))
}

unsafe fn store<T>(out: *mut T, value: T) -> Result<(), VgStatus> {
    if out.is_null() {
        return Err(null("output"));
    }
    // SAFETY: checked non-null; the caller provides writable storage
    unsafe { out.write(value) };
    Ok(())
}

fn into_handle(g: ViewingGraph) -> *mut VgGraph {
    Box::into_raw(Box::new(VgGraph { inner: g }))
}

fn into_c_string(s: String) -> Result<*mut c_char, VgStatus> {
    CString::new(s).map(CString::into_raw).map_err(|_| {
        set_error("string contains a nul byte".into());
        VgStatus::Internal
    })
}

fn rule_code(rule: Option<Rule>) -> VgRule {
    match rule {
        None => VgRule::None,
        Some(Rule::NotConnected) => VgRule::NotConnected,
        Some(Rule::NotBiconnected) => VgRule::NotBiconnected,
        Some(Rule::MinDegree) => VgRule::MinDegree,
        Some(Rule::AdjacentDegree2) => VgRule::AdjacentDegree2,
        Some(Rule::TooFewEdges) => VgRule::TooFewEdges,
        Some(Rule::SubgraphDeficiency) => VgRule::SubgraphDeficiency,
        Some(Rule::DisjointFamilyDeficiency) => VgRule::DisjointFamilyDeficiency,
    }
}

fn options_from(opts: *const VgOptions) -> FiniteOptions {
    // SAFETY: null or a valid pointer, per the contract of the callers
    match unsafe { opts.as_ref() } {
        Some(o) => FiniteOptions {
            trials: o.trials,
            bound: o.bound,
            seed: o.seed,
        },
        None => FiniteOptions::default(),
    }
}

/// The message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn vg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn vg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default options: 3 trials, bound 1000, seed 42.
#[no_mangle]
pub extern "C" fn vg_default_options() -> VgOptions {
    let d = FiniteOptions::default();
    VgOptions {
        trials: d.trials,
        bound: d.bound,
        seed: d.seed,
    }
}

/// Parses a graph from NUL-terminated text.
///
/// # Safety
/// `text` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vg_graph_parse(
    text: *const c_char,
    format: VgFormat,
    out: *mut *mut VgGraph,
) -> VgStatus {
    guarded(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        // SAFETY: checked non-null; the caller guarantees termination
        let text = unsafe { CStr::from_ptr(text) }.to_str().map_err(|_| {
            set_error("graph text is not UTF-8".into());
            VgStatus::Utf8
        })?;
        let g = match format {
            VgFormat::Auto => parse_input(text, None),
            VgFormat::EdgeList => parse_input(text, Some(viewing_graphs::cli::FormatArg::EdgeList)),
            VgFormat::Graph6 => graph6::decode(text.trim()),
        }
        .map_err(fail)?;
        // SAFETY: forwarded from the caller
        unsafe { store(out, into_handle(g)) }
    })
}

/// Builds a graph from `edge_count` 0-based pairs stored flat in `edges`.
///
/// # Safety
/// `edges` must point to `2 * edge_count` values (or be null when
/// `edge_count` is 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vg_graph_new(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut VgGraph,
) -> VgStatus {
    guarded(|| {
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            // SAFETY: the caller guarantees 2 * edge_count readable values
            unsafe { std::slice::from_raw_parts(edges, 2 * edge_count) }
        };
        let pairs = flat.chunks_exact(2).map(|p| (p[0], p[1]));
        let g = ViewingGraph::new(n, pairs).map_err(fail)?;
        // SAFETY: forwarded from the caller
        unsafe { store(out, into_handle(g)) }
    })
}

/// A solvable graph with `n >= 2` vertices and the minimum edge count.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vg_minimal_solvable(n: usize, out: *mut *mut VgGraph) -> VgStatus {
    guarded(|| {
        let g = minimal_solvable(n).map_err(fail)?;
        // SAFETY: forwarded from the caller
        unsafe { store(out, into_handle(g)) }
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vg_graph_free(g: *mut VgGraph) {
    if !g.is_null() {
        // SAFETY: created by Box::into_raw in into_handle
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Vertex count, or 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vg_graph_vertex_count(g: *const VgGraph) -> usize {
    // SAFETY: per the contract above
    unsafe { g.as_ref() }.map_or(0, |h| h.inner.n())
}

/// Edge count, or 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vg_graph_edge_count(g: *const VgGraph) -> usize {
    // SAFETY: per the contract above
    unsafe { g.as_ref() }.map_or(0, |h| h.inner.edge_count())
}

/// Serializes `g`; edge lists are 1-based. Free the result with
/// `vg_string_free`.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vg_graph_to_string(
    g: *const VgGraph,
    format: VgFormat,
    out: *mut *mut c_char,
) -> VgStatus {
    guarded(|| {
        // SAFETY: forwarded from the caller
        let g = unsafe { graph_ref(g) }?;
        let text = match format {
            VgFormat::Graph6 => graph6::encode(g),
            VgFormat::Auto | VgFormat::EdgeList => format_edge_list(g, 1),
        };
        let s = into_c_string(text)?;
        // SAFETY: forwarded from the caller
        unsafe { store(out, s) }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vg_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: created by CString::into_raw
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Runs every check and fills `out`. `opts` may be null for the defaults.
///
/// # Safety
/// `g` must be a live handle, `opts` null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vg_check(
    g: *const VgGraph,
    opts: *const VgOptions,
    out: *mut VgVerdict,
) -> VgStatus {
    guarded(|| {
        // SAFETY: forwarded from the caller
        let g = unsafe { graph_ref(g) }?;
        let report = analyze(g, &options_from(opts)).map_err(fail)?;
        let overall = match report.overall {
            Overall::SolvableByMoves => VgOverall::SolvableByMoves,
            Overall::FiniteSolvableUndecided => VgOverall::FiniteSolvableUndecided,
            Overall::FailsFiniteSolvable => VgOverall::FailsFiniteSolvable,
            Overall::NotSolvable => VgOverall::NotSolvable,
        };
        let verdict = VgVerdict {
            overall,
            violated_rule: rule_code(report.necessary.violated_rule),
            moves_solvable: report.moves.solvable,
            finite_checked: report.finite.is_some(),
            finite_solvable: report.finite.as_ref().is_some_and(|f| f.finite_solvable),
            kernel_dim: report.finite.as_ref().map_or(0, |f| f.kernel_dim),
            expected_kernel_dim: report.finite.as_ref().map_or(0, |f| f.expected),
        };
        // SAFETY: forwarded from the caller
        unsafe { store(out, verdict) }
    })
}

/// The full report as JSON (1-based labels, no timings). Free the result
/// with `vg_string_free`.
///
/// # Safety
/// `g` must be a live handle, `opts` null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vg_check_json(
    g: *const VgGraph,
    opts: *const VgOptions,
    out: *mut *mut c_char,
) -> VgStatus {
    guarded(|| {
        // SAFETY: forwarded from the caller
        let g = unsafe { graph_ref(g) }?;
        let mut report = analyze(g, &options_from(opts)).map_err(fail)?;
        report.timings = None;
        let json = serde_json::to_string(&report).map_err(|e| fail(e.into()))?;
        let s = into_c_string(json)?;
        // SAFETY: forwarded from the caller
        unsafe { store(out, s) }
    })
}

/// Only the necessary conditions; `out` receives `VG_RULE_NONE` when all hold.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vg_check_necessary(g: *const VgGraph, out: *mut VgRule) -> VgStatus {
    guarded(|| {
        // SAFETY: forwarded from the caller
        let g = unsafe { graph_ref(g) }?;
        let v = check_all_necessary(g).map_err(fail)?;
        // SAFETY: forwarded from the caller
        unsafe { store(out, rule_code(v.violated_rule)) }
    })
}

/// Whether the move closure reaches the complete graph.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vg_moves_solvable(g: *const VgGraph, out: *mut bool) -> VgStatus {
    guarded(|| {
        // SAFETY: forwarded from the caller
        let g = unsafe { graph_ref(g) }?;
        // SAFETY: forwarded from the caller
        unsafe { store(out, solvable_with_moves(g)) }
    })
}

/// Minimum edge count of a solvable graph on `n >= 2` vertices.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vg_e_min(n: usize, out: *mut usize) -> VgStatus {
    guarded(|| {
        let e = e_min(n).map_err(fail)?;
        // SAFETY: forwarded from the caller
        unsafe { store(out, e) }
    })
}

/// `7e - 11n + 15`.
#[no_mangle]
pub extern "C" fn vg_deficiency(n: usize, e: usize) -> i64 {
    deficiency(n, e)
}
