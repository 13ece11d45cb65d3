//! C ABI for the euler-orient library.
//!
//! Conventions: graphs are opaque `EoGraph` handles created by the
//! constructors and released with `eo_graph_free`; every fallible call
//! returns an `EoStatus` and writes its result through out-pointers; strings
//! returned through out-pointers are heap-allocated and must be released
//! with `eo_string_free`; a per-thread message for the most recent error is
//! available from `eo_last_error_message`. The matching declarations live in
//! `include/euler_orient.h`, which is maintained by hand and covered by a
//! symbol test here.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use euler_orient::error::Error;
use euler_orient::exact;
use euler_orient::graph::{self, Graph};
use euler_orient::{estimator, spectral};

/// Opaque graph handle.
pub struct EoGraph {
    inner: Graph,
}

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    CapExceeded = 5,
    NumericError = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_for(e: &Error) -> EoStatus {
    match e {
        Error::Parse(_) => EoStatus::ParseError,
        Error::EdgeCapExceeded { .. }
        | Error::FrontierCapExceeded { .. }
        | Error::RejectionCapExceeded { .. } => EoStatus::CapExceeded,
        Error::Singular
        | Error::NotPositiveDefinite
        | Error::NoConvergence { .. }
        | Error::SpectralNormTooLarge { .. }
        | Error::QuadratureUnreliable { .. }
        | Error::NonPositiveEstimate => EoStatus::NumericError,
        _ => EoStatus::InvalidInput,
    }
}

fn fail(e: Error) -> EoStatus {
    let code = status_for(&e);
    set_error(e.to_string());
    code
}

/// Copies the most recent error message for this thread; null when none.
/// The caller releases it with `eo_string_free`.
#[no_mangle]
pub extern "C" fn eo_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn eo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by this library (or null).
#[no_mangle]
pub unsafe extern "C" fn eo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn put_graph(out: *mut *mut EoGraph, g: Graph) -> EoStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return EoStatus::NullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(EoGraph { inner: g })) };
    EoStatus::Ok
}

/// Parses the edge-list text format ("n m" header, one "u v" line per edge).
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eo_graph_parse(text: *const c_char, out: *mut *mut EoGraph) -> EoStatus {
    if text.is_null() {
        set_error("null input pointer".into());
        return EoStatus::NullPointer;
    }
    let s = match CStr::from_ptr(text).to_str() {
        Ok(s) => s,
        Err(_) => {
            set_error("input is not valid UTF-8".into());
            return EoStatus::InvalidUtf8;
        }
    };
    match graph::parse_edge_list(s) {
        Ok(g) => put_graph(out, g),
        Err(e) => fail(e),
    }
}

/// Complete graph on `n` vertices.
#[no_mangle]
pub extern "C" fn eo_graph_complete(n: u32, out: *mut *mut EoGraph) -> EoStatus {
    match graph::complete(n as usize) {
        Ok(g) => put_graph(out, g),
        Err(e) => fail(e),
    }
}

/// Complete bipartite graph with part sizes `a` and `b`.
#[no_mangle]
pub extern "C" fn eo_graph_complete_bipartite(a: u32, b: u32, out: *mut *mut EoGraph) -> EoStatus {
    match graph::complete_bipartite(a as usize, b as usize) {
        Ok(g) => put_graph(out, g),
        Err(e) => fail(e),
    }
}

/// Cycle on `n >= 3` vertices.
#[no_mangle]
pub extern "C" fn eo_graph_cycle(n: u32, out: *mut *mut EoGraph) -> EoStatus {
    match graph::cycle(n as usize) {
        Ok(g) => put_graph(out, g),
        Err(e) => fail(e),
    }
}

/// Seeded random even-degree graph (triangle XOR walk from an even base).
#[no_mangle]
pub extern "C" fn eo_graph_random_even(
    n: u32,
    toggles: u32,
    seed: u64,
    out: *mut *mut EoGraph,
) -> EoStatus {
    match graph::random_even_graph(n as usize, toggles as usize, seed) {
        Ok(g) => put_graph(out, g),
        Err(e) => fail(e),
    }
}

/// Releases a graph handle.
///
/// # Safety
/// `g` must be a handle from this library (or null), not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eo_graph_free(g: *mut EoGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

unsafe fn borrow<'a>(g: *const EoGraph) -> Option<&'a Graph> {
    g.as_ref().map(|h| &h.inner)
}

macro_rules! get_or_null {
    ($g:expr) => {
        match unsafe { borrow($g) } {
            Some(g) => g,
            None => {
                set_error("null graph handle".into());
                return EoStatus::NullPointer;
            }
        }
    };
}

fn put_u32(out: *mut u32, value: u32) -> EoStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return EoStatus::NullPointer;
    }
    unsafe { *out = value };
    EoStatus::Ok
}

fn put_f64(out: *mut f64, value: f64) -> EoStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return EoStatus::NullPointer;
    }
    unsafe { *out = value };
    EoStatus::Ok
}

fn put_string(out: *mut *mut c_char, value: String) -> EoStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return EoStatus::NullPointer;
    }
    match CString::new(value) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            EoStatus::Ok
        }
        Err(_) => {
            set_error("interior NUL in output string".into());
            EoStatus::NumericError
        }
    }
}

/// Number of vertices.
#[no_mangle]
pub extern "C" fn eo_graph_vertex_count(g: *const EoGraph, out: *mut u32) -> EoStatus {
    let g = get_or_null!(g);
    put_u32(out, g.n() as u32)
}

/// Number of edges.
#[no_mangle]
pub extern "C" fn eo_graph_edge_count(g: *const EoGraph, out: *mut u32) -> EoStatus {
    let g = get_or_null!(g);
    put_u32(out, g.edge_count() as u32)
}

/// Writes 1 when every degree is even, else 0.
#[no_mangle]
pub extern "C" fn eo_graph_is_all_even(g: *const EoGraph, out: *mut u8) -> EoStatus {
    let g = get_or_null!(g);
    if out.is_null() {
        set_error("null output pointer".into());
        return EoStatus::NullPointer;
    }
    unsafe { *out = g.is_all_even() as u8 };
    EoStatus::Ok
}

/// Writes 1 when the graph is connected, else 0.
#[no_mangle]
pub extern "C" fn eo_graph_is_connected(g: *const EoGraph, out: *mut u8) -> EoStatus {
    let g = get_or_null!(g);
    if out.is_null() {
        set_error("null output pointer".into());
        return EoStatus::NullPointer;
    }
    unsafe { *out = g.is_connected() as u8 };
    EoStatus::Ok
}

/// Canonical edge-list serialization; release with `eo_string_free`.
#[no_mangle]
pub extern "C" fn eo_graph_to_edge_list(g: *const EoGraph, out: *mut *mut c_char) -> EoStatus {
    let g = get_or_null!(g);
    put_string(out, g.to_edge_list())
}

/// Exact Eulerian-orientation count as a decimal string (counts overflow
/// fixed-width integers quickly). Refuses graphs with more than `edge_cap`
/// edges; pass 0 for the default cap.
#[no_mangle]
pub extern "C" fn eo_count_exact(
    g: *const EoGraph,
    edge_cap: u32,
    out: *mut *mut c_char,
) -> EoStatus {
    let g = get_or_null!(g);
    let cap = if edge_cap == 0 {
        exact::DEFAULT_EDGE_CAP
    } else {
        edge_cap as usize
    };
    match exact::eo_count_backtrack(g, cap) {
        Ok(count) => put_string(out, count.to_string()),
        Err(e) => fail(e),
    }
}

/// Exact spanning-tree count as a decimal string.
#[no_mangle]
pub extern "C" fn eo_spanning_tree_count(g: *const EoGraph, out: *mut *mut c_char) -> EoStatus {
    let g = get_or_null!(g);
    put_string(out, spectral::spanning_tree_count(g).to_string())
}

/// Natural log of the spanning-tree estimator of EO(G); needs a connected
/// even-degree graph.
#[no_mangle]
pub extern "C" fn eo_theta_estimate_ln(g: *const EoGraph, out: *mut f64) -> EoStatus {
    let g = get_or_null!(g);
    match estimator::theta_estimate(g) {
        Ok(est) => put_f64(out, est.ln()),
        Err(e) => fail(e),
    }
}

/// Algebraic connectivity (second-smallest Laplacian eigenvalue).
#[no_mangle]
pub extern "C" fn eo_algebraic_connectivity(g: *const EoGraph, out: *mut f64) -> EoStatus {
    let g = get_or_null!(g);
    match spectral::algebraic_connectivity(g) {
        Ok(l2) => put_f64(out, l2),
        Err(e) => fail(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn make(text: &str) -> *mut EoGraph {
        let c = CString::new(text).unwrap();
        let mut g: *mut EoGraph = ptr::null_mut();
        let status = unsafe { eo_graph_parse(c.as_ptr(), &mut g) };
        assert_eq!(status, EoStatus::Ok);
        g
    }

    fn take_string(s: *mut c_char) -> String {
        assert!(!s.is_null());
        let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
        unsafe { eo_string_free(s) };
        out
    }

    #[test]
    fn parse_count_and_free() {
        let g = make("5 10\n0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
        let mut n = 0u32;
        assert_eq!(eo_graph_vertex_count(g, &mut n), EoStatus::Ok);
        assert_eq!(n, 5);
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(eo_count_exact(g, 0, &mut s), EoStatus::Ok);
        assert_eq!(take_string(s), "24");
        let mut t: *mut c_char = ptr::null_mut();
        assert_eq!(eo_spanning_tree_count(g, &mut t), EoStatus::Ok);
        assert_eq!(take_string(t), "125");
        unsafe { eo_graph_free(g) };
    }

    #[test]
    fn constructors_and_spectral_values() {
        let mut g: *mut EoGraph = ptr::null_mut();
        assert_eq!(eo_graph_complete(7, &mut g), EoStatus::Ok);
        let mut l2 = 0.0f64;
        assert_eq!(eo_algebraic_connectivity(g, &mut l2), EoStatus::Ok);
        assert!((l2 - 7.0).abs() < 1e-9);
        let mut ln_est = 0.0f64;
        assert_eq!(eo_theta_estimate_ln(g, &mut ln_est), EoStatus::Ok);
        assert!((ln_est - 8.1108).abs() < 1e-3);
        unsafe { eo_graph_free(g) };
    }

    #[test]
    fn error_paths_set_messages() {
        let c = CString::new("2 1\n0 0\n").unwrap();
        let mut g: *mut EoGraph = ptr::null_mut();
        let status = unsafe { eo_graph_parse(c.as_ptr(), &mut g) };
        assert_eq!(status, EoStatus::ParseError);
        let msg = take_string(eo_last_error_message());
        assert!(msg.contains("line 2"), "{msg}");

        // cap exceeded maps to its own status
        let mut k10: *mut EoGraph = ptr::null_mut();
        assert_eq!(eo_graph_complete(10, &mut k10), EoStatus::Ok);
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(eo_count_exact(k10, 0, &mut s), EoStatus::CapExceeded);
        unsafe { eo_graph_free(k10) };

        // null handles are rejected, not dereferenced
        let mut n = 0u32;
        assert_eq!(
            eo_graph_vertex_count(ptr::null(), &mut n),
            EoStatus::NullPointer
        );
    }

    #[test]
    fn odd_degree_estimate_is_invalid_input() {
        let g = make("3 2\n0 1\n1 2\n");
        let mut ln_est = 0.0f64;
        assert_eq!(eo_theta_estimate_ln(g, &mut ln_est), EoStatus::InvalidInput);
        unsafe { eo_graph_free(g) };
    }

    #[test]
    fn header_declares_every_exported_symbol() {
        let header = include_str!("../include/euler_orient.h");
        for symbol in [
            "eo_last_error_message",
            "eo_version",
            "eo_string_free",
            "eo_graph_parse",
            "eo_graph_complete",
            "eo_graph_complete_bipartite",
            "eo_graph_cycle",
            "eo_graph_random_even",
            "eo_graph_free",
            "eo_graph_vertex_count",
            "eo_graph_edge_count",
            "eo_graph_is_all_even",
            "eo_graph_is_connected",
            "eo_graph_to_edge_list",
            "eo_count_exact",
            "eo_spanning_tree_count",
            "eo_theta_estimate_ln",
            "eo_algebraic_connectivity",
        ] {
            assert!(header.contains(symbol), "header is missing {symbol}");
        }
        // and the exported surface matches this source file
        let source = include_str!("lib.rs");
        let attr = concat!("#[no_", "mangle]");
        assert_eq!(
            source.matches(attr).count(),
            18,
            "symbol list above must track the exported functions"
        );
    }
}
