//! C ABI over `kcut-core`.
//!
//! Graphs and results are opaque handles owned by the caller and released
//! with the matching `_free` function. Every fallible call returns a
//! [`KcutStatus`]; on failure, [`kcut_last_error`] describes it until the
//! next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kcut_core::io::{parse_graph, GraphFormat};
use kcut_core::minkcut::{enumerate_min_kcuts, KcutReport};
use kcut_core::{KcutError, Rational, ScheduleConfig, WeightedGraph};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KcutStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    InvalidGraph = 4,
    TooLarge = 5,
    OutOfRange = 6,
    Panic = 7,
}

/// Opaque graph handle.
pub struct KcutGraph(WeightedGraph);

/// Opaque enumeration result.
pub struct KcutResult(KcutReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &KcutError) -> KcutStatus {
    match e {
        KcutError::Parse { .. } | KcutError::NegativeWeight { .. } => KcutStatus::Parse,
        KcutError::TooLarge(_) => KcutStatus::TooLarge,
        KcutError::SelfLoop(_)
        | KcutError::VertexOutOfRange { .. }
        | KcutError::WeightOverflow
        | KcutError::Disconnected { .. }
        | KcutError::TooFewVertices { .. } => KcutStatus::InvalidGraph,
        _ => KcutStatus::InvalidArgument,
    }
}

fn fail(status: KcutStatus, msg: impl Into<String>) -> KcutStatus {
    set_error(msg.into());
    status
}

fn guard(body: impl FnOnce() -> Result<(), (KcutStatus, String)>) -> KcutStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => KcutStatus::Ok,
        Ok(Err((status, msg))) => fail(status, msg),
        Err(_) => fail(KcutStatus::Panic, "internal panic"),
    }
}

fn core_err(e: KcutError) -> (KcutStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (KcutStatus, String) {
    (KcutStatus::NullPointer, "null pointer argument".into())
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn kcut_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a graph on vertices `0..n` from `m` edges `(us[i], vs[i], ws[i])`.
/// Parallel edges are summed.
///
/// # Safety
/// `us`, `vs` and `ws` must each point to `m` readable elements (or may be
/// NULL when `m == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kcut_graph_new(
    n: usize,
    us: *const usize,
    vs: *const usize,
    ws: *const u64,
    m: usize,
    out: *mut *mut KcutGraph,
) -> KcutStatus {
    guard(|| {
        if out.is_null() || (m > 0 && (us.is_null() || vs.is_null() || ws.is_null())) {
            return Err(null());
        }
        let edges: Vec<(usize, usize, u64)> = if m == 0 {
            Vec::new()
        } else {
            let (us, vs, ws) = (
                std::slice::from_raw_parts(us, m),
                std::slice::from_raw_parts(vs, m),
                std::slice::from_raw_parts(ws, m),
            );
            (0..m).map(|i| (us[i], vs[i], ws[i])).collect()
        };
        let g = WeightedGraph::new(n, edges).map_err(core_err)?;
        *out = Box::into_raw(Box::new(KcutGraph(g)));
        Ok(())
    })
}

/// Parses an edge list or DIMACS text (detected automatically).
///
/// # Safety
/// `text` must be a NUL-terminated UTF-8 string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kcut_graph_parse(text: *const c_char, out: *mut *mut KcutGraph) -> KcutStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (KcutStatus::Parse, "input is not UTF-8".to_string()))?;
        let g = parse_graph(text, GraphFormat::Auto).map_err(core_err)?;
        *out = Box::into_raw(Box::new(KcutGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `graph` must come from this library and not be freed twice. NULL is a
/// no-op.
#[no_mangle]
pub unsafe extern "C" fn kcut_graph_free(graph: *mut KcutGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kcut_graph_vertex_count(graph: *const KcutGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kcut_graph_edge_count(graph: *const KcutGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Every minimum k-cut of `graph`. `gamma_num / gamma_den` sets γ;
/// `base_k == 0` keeps the default base case threshold.
///
/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kcut_enumerate(
    graph: *const KcutGraph,
    k: usize,
    gamma_num: i64,
    gamma_den: i64,
    base_k: usize,
    seed: u64,
    out: *mut *mut KcutResult,
) -> KcutStatus {
    guard(|| {
        let (Some(g), false) = (graph.as_ref(), out.is_null()) else {
            return Err(null());
        };
        if gamma_den == 0 {
            return Err((KcutStatus::InvalidArgument, "gamma denominator is zero".into()));
        }
        let mut cfg = ScheduleConfig::with_gamma(Rational::new(gamma_num as i128, gamma_den as i128));
        if base_k != 0 {
            cfg.base_k = base_k;
        }
        let report = enumerate_min_kcuts(&g.0, k, &cfg, seed).map_err(core_err)?;
        *out = Box::into_raw(Box::new(KcutResult(report)));
        Ok(())
    })
}

/// # Safety
/// `result` must come from this library and not be freed twice. NULL is a
/// no-op.
#[no_mangle]
pub unsafe extern "C" fn kcut_result_free(result: *mut KcutResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Optimal weight, or 0 for NULL.
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kcut_result_weight(result: *const KcutResult) -> u64 {
    result.as_ref().map_or(0, |r| r.0.weight)
}

/// Number of minimum k-cuts, or 0 for NULL.
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kcut_result_count(result: *const KcutResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.partitions.len())
}

/// Writes the part index of every vertex of cut `index` into `labels`,
/// which holds `len` entries; `len` must be at least the vertex count.
/// Parts are numbered by their smallest vertex.
///
/// # Safety
/// `result` must be a live handle and `labels` must point to `len`
/// writable elements.
#[no_mangle]
pub unsafe extern "C" fn kcut_result_labels(
    result: *const KcutResult,
    index: usize,
    labels: *mut usize,
    len: usize,
) -> KcutStatus {
    guard(|| {
        let (Some(r), false) = (result.as_ref(), labels.is_null()) else {
            return Err(null());
        };
        let p = r.0.partitions.get(index).ok_or_else(|| {
            (KcutStatus::OutOfRange, format!("cut {index} of {}", r.0.partitions.len()))
        })?;
        let universe = p.universe();
        if len < universe {
            return Err((KcutStatus::OutOfRange, format!("label buffer holds {len}, need {universe}")));
        }
        let out = std::slice::from_raw_parts_mut(labels, len);
        out.fill(usize::MAX);
        for (i, part) in p.parts().iter().enumerate() {
            for v in part.iter() {
                out[v] = i;
            }
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_round_trip() {
        let us = [0usize, 1, 2, 3, 4];
        let vs = [1usize, 2, 3, 4, 0];
        let ws = [1u64; 5];
        let mut g = ptr::null_mut();
        unsafe {
            assert_eq!(kcut_graph_new(5, us.as_ptr(), vs.as_ptr(), ws.as_ptr(), 5, &mut g), KcutStatus::Ok);
            assert_eq!(kcut_graph_vertex_count(g), 5);
            let mut r = ptr::null_mut();
            assert_eq!(kcut_enumerate(g, 3, 1, 20, 0, 7, &mut r), KcutStatus::Ok);
            assert_eq!(kcut_result_weight(r), 3);
            assert_eq!(kcut_result_count(r), 10);
            let mut labels = [0usize; 5];
            assert_eq!(kcut_result_labels(r, 0, labels.as_mut_ptr(), 5), KcutStatus::Ok);
            assert_eq!(labels, [0, 1, 2, 2, 2]);
            assert_eq!(kcut_result_labels(r, 10, labels.as_mut_ptr(), 5), KcutStatus::OutOfRange);
            assert_eq!(kcut_result_labels(r, 0, labels.as_mut_ptr(), 4), KcutStatus::OutOfRange);
            kcut_result_free(r);
            kcut_graph_free(g);
        }
    }

    #[test]
    fn errors_set_message() {
        let mut g = ptr::null_mut();
        unsafe {
            let text = CString::new("0 0 1").unwrap();
            assert_eq!(kcut_graph_parse(text.as_ptr(), &mut g), KcutStatus::InvalidGraph);
            assert!(g.is_null());
            let msg = CStr::from_ptr(kcut_last_error()).to_str().unwrap();
            assert!(msg.contains("self-loop"));
            let text = CString::new("0 1 -2").unwrap();
            assert_eq!(kcut_graph_parse(text.as_ptr(), &mut g), KcutStatus::Parse);
            assert_eq!(kcut_graph_parse(ptr::null(), &mut g), KcutStatus::NullPointer);
            let text = CString::new("p 3 2\ne 1 2 4\ne 2 3 1\n").unwrap();
            assert_eq!(kcut_graph_parse(text.as_ptr(), &mut g), KcutStatus::Ok);
            assert!(kcut_last_error().is_null());
            let mut r = ptr::null_mut();
            assert_eq!(kcut_enumerate(g, 4, 1, 20, 0, 0, &mut r), KcutStatus::InvalidGraph);
            assert_eq!(kcut_enumerate(g, 2, 1, 0, 0, 0, &mut r), KcutStatus::InvalidArgument);
            assert_eq!(kcut_enumerate(g, 2, 1, 2, 0, 0, &mut r), KcutStatus::InvalidArgument);
            assert_eq!(kcut_enumerate(g, 2, 1, 20, 0, 0, &mut r), KcutStatus::Ok);
            assert_eq!(kcut_result_weight(r), 1);
            kcut_result_free(r);
            kcut_graph_free(g);
            kcut_graph_free(ptr::null_mut());
        }
    }
}
