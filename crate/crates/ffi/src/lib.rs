//! C interface. Graphs are opaque handles; every call returns an
//! [`EsStatus`] and leaves a message for [`es_last_error`] on failure.
//! Strings handed out must be released with [`es_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use endspace::apps::distinguish;
use endspace::cli::Subject;
use endspace::dsl::parse_template;
use endspace::endspace::{converges, Verdict};
use endspace::oracle::oracle_converges;
use endspace::ordinal::Enumeration;
use endspace::tgraph::UniformGraph;
use endspace::treespec::Bounds;
use endspace::Error;

/// A uniform graph on a described tree.
pub struct EsGraph {
    graph: UniformGraph,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// Inputs that do not fit the tree.
    InvalidInput = 4,
    NotUniform = 5,
    NotFiniteAdhesion = 6,
    EqualEnds = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EsVerdict {
    Converges = 0,
    Diverges = 1,
    Unknown = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let msg = CString::new(msg).unwrap_or_else(|_| c"error message contained NUL".into());
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Fail(EsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let status = match e {
            Error::Parse(_) | Error::Ordinal(_) => EsStatus::Parse,
            Error::NotUniform { .. } => EsStatus::NotUniform,
            Error::NotFiniteAdhesion { .. } => EsStatus::NotFiniteAdhesion,
            Error::EqualEnds => EsStatus::EqualEnds,
            _ => EsStatus::InvalidInput,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            EsStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(EsStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(EsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn graph<'a>(g: *const EsGraph) -> Result<&'a UniformGraph, Fail> {
    g.as_ref().map(|g| &g.graph).ok_or_else(|| Fail(EsStatus::NullArgument, "graph is null".into()))
}

fn out_ptr<T>(p: *mut T) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail(EsStatus::NullArgument, "output pointer is null".into()));
    }
    Ok(())
}

fn owned(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread. Valid until the next
/// failing call; never null.
#[no_mangle]
pub extern "C" fn es_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds the graph for `spec` (`catalog:NAME` or the tree DSL). With
/// `alternate` the second pick enumeration is used.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn es_graph_new(spec: *const c_char, alternate: bool, out: *mut *mut EsGraph) -> EsStatus {
    guard(|| {
        out_ptr(out)?;
        let spec = text(spec, "spec")?;
        let e = if alternate { Enumeration::ALTERNATE } else { Enumeration::CANONICAL };
        let s = Subject::resolve(spec, e, None)?;
        *out = Box::into_raw(Box::new(EsGraph { graph: s.graph }));
        Ok(())
    })
}

/// # Safety
/// `g` must come from [`es_graph_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn es_graph_free(g: *mut EsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Tree height, rendered, as an owned string.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn es_graph_height(g: *const EsGraph, out: *mut *mut c_char) -> EsStatus {
    guard(|| {
        out_ptr(out)?;
        *out = owned(graph(g)?.spec.tree_height().to_string());
        Ok(())
    })
}

/// Runs the T-graph axiom checks on a truncation.
///
/// # Safety
/// `g` must be a live handle and `pass` writable.
#[no_mangle]
pub unsafe extern "C" fn es_check_axioms(g: *const EsGraph, depth: u64, breadth: u64, pass: *mut bool) -> EsStatus {
    guard(|| {
        out_ptr(pass)?;
        *pass = graph(g)?.check_axioms(Bounds { depth, breadth }).passed();
        Ok(())
    })
}

fn verdict(v: &Verdict) -> EsVerdict {
    match v {
        Verdict::Converges => EsVerdict::Converges,
        Verdict::Diverges { .. } => EsVerdict::Diverges,
        Verdict::Unknown { .. } => EsVerdict::Unknown,
    }
}

/// Exact convergence of the template `seq` to the high-ray `target`.
///
/// # Safety
/// `g` must be a live handle, the strings NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn es_converges(
    g: *const EsGraph,
    seq: *const c_char,
    target: *const c_char,
    out: *mut EsVerdict,
) -> EsStatus {
    guard(|| {
        out_ptr(out)?;
        let g = graph(g)?;
        let seq = parse_template(text(seq, "seq")?).map_err(Error::from)?;
        let target = g.spec.parse_ray(text(target, "target")?)?;
        *out = verdict(&converges(g, &seq, &target)?);
        Ok(())
    })
}

/// Convergence judged on a truncation of the given depth.
///
/// # Safety
/// As for [`es_converges`].
#[no_mangle]
pub unsafe extern "C" fn es_oracle_converges(
    g: *const EsGraph,
    seq: *const c_char,
    target: *const c_char,
    depth: usize,
    out: *mut EsVerdict,
) -> EsStatus {
    guard(|| {
        out_ptr(out)?;
        let g = graph(g)?;
        let seq = parse_template(text(seq, "seq")?).map_err(Error::from)?;
        let target = g.spec.parse_ray(text(target, "target")?)?;
        *out = verdict(&oracle_converges(g, &seq, &target, depth)?);
        Ok(())
    })
}

/// A non-limit node lying on exactly one of the two high-rays; `on_first`
/// tells which.
///
/// # Safety
/// `g` must be a live handle, the strings NUL-terminated, the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn es_distinguish(
    g: *const EsGraph,
    first: *const c_char,
    second: *const c_char,
    node: *mut *mut c_char,
    on_first: *mut bool,
) -> EsStatus {
    guard(|| {
        out_ptr(node)?;
        out_ptr(on_first)?;
        let g = graph(g)?;
        let a = g.spec.parse_ray(text(first, "first")?)?;
        let b = g.spec.parse_ray(text(second, "second")?)?;
        let d = distinguish(&g.spec, &a, &b)?;
        *node = owned(d.node.to_string());
        *on_first = d.first;
        Ok(())
    })
}

/// # Safety
/// `s` must be a string from this library, or null.
#[no_mangle]
pub unsafe extern "C" fn es_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
