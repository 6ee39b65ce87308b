//! C ABI over `cqbg-core`.
//!
//! The engine is an opaque handle created by [`cqbg_engine_build`] or
//! [`cqbg_engine_load`] and released with [`cqbg_engine_free`]. Every fallible
//! call returns a [`CqbgStatus`]; on failure a description is available from
//! [`cqbg_last_error`] on the same thread. Strings returned by the library
//! are owned by the caller and must be released with [`cqbg_string_free`].
//!
//! A handle may be shared between threads for read-only calls
//! (`recommend`, `classify`, `counts`, `save`).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cqbg_core::cli::render_json;
use cqbg_core::text_index::Bm25Params;
use cqbg_core::{
    CriterionKind, Engine, Error, Pairing, RecommendRequest, Role, RoleCriterion, Scorer,
};

pub const CQBG_ROLE_UNSPECIFIED: i32 = -1;

pub const CQBG_SCORER_BM25: i32 = 0;
pub const CQBG_SCORER_TFIDF: i32 = 1;

pub const CQBG_CRITERION_PAPER: i32 = 0;
pub const CQBG_CRITERION_CITATION: i32 = 1;
pub const CQBG_CRITERION_NEIGHBOR: i32 = 2;

pub const CQBG_PAIRING_ALIGNED: i32 = 0;
pub const CQBG_PAIRING_PRODUCT: i32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CqbgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    NotFound = 3,
    InvalidArgument = 4,
    Io = 5,
    Format = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CqbgRole {
    PrimeProfessor = 0,
    AssistantProfessor = 1,
    Student = 2,
}

impl From<Role> for CqbgRole {
    fn from(r: Role) -> Self {
        match r {
            Role::PrimeProfessor => CqbgRole::PrimeProfessor,
            Role::AssistantProfessor => CqbgRole::AssistantProfessor,
            Role::Student => CqbgRole::Student,
        }
    }
}

/// Opaque engine handle.
pub struct CqbgEngine {
    inner: Engine,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CqbgCounts {
    pub papers: u64,
    pub authors: u64,
    pub edges: u64,
    pub citation_links: u64,
}

/// Recommendation request. Initialize with [`cqbg_request_default`] and set
/// at least `name` and `query`. `interest` may be NULL.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CqbgRequest {
    pub name: *const c_char,
    pub query: *const c_char,
    pub interest: *const c_char,
    /// A `CqbgRole` value, or `CQBG_ROLE_UNSPECIFIED` to classify the seed.
    pub seed_role: i32,
    pub top_k: u32,
    pub scorer: i32,
    pub k1: f64,
    pub b: f64,
    pub criterion: i32,
    pub t1: u64,
    pub t2: u64,
    pub pairing: i32,
    pub interest_in_query: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(CqbgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::AuthorNotFound(_) => CqbgStatus::NotFound,
            Error::InvalidRequest(_) | Error::InvalidCriterion { .. } | Error::SameNode(_) => {
                CqbgStatus::InvalidArgument
            }
            Error::Io(_) => CqbgStatus::Io,
            Error::Json(_) | Error::SnapshotVersion { .. } | Error::SnapshotInvalid(_) => {
                CqbgStatus::Format
            }
            Error::IndexEmpty | Error::EmptyEdgeSet | Error::GraphShapeMismatch => {
                CqbgStatus::Internal
            }
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CqbgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CqbgStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CqbgStatus::Internal
        }
    }
}

/// # Safety
/// `p` must be NULL or point to a NUL-terminated string.
unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(CqbgStatus::NullArgument, format!("{what} is NULL")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Failure(
            CqbgStatus::InvalidUtf8,
            format!("{what} is not valid UTF-8"),
        )
    })
}

fn null(what: &str) -> Failure {
    Failure(CqbgStatus::NullArgument, format!("{what} is NULL"))
}

fn invalid(msg: String) -> Failure {
    Failure(CqbgStatus::InvalidArgument, msg)
}

fn criterion_kind(code: i32) -> Result<CriterionKind, Failure> {
    match code {
        CQBG_CRITERION_PAPER => Ok(CriterionKind::Paper),
        CQBG_CRITERION_CITATION => Ok(CriterionKind::Citation),
        CQBG_CRITERION_NEIGHBOR => Ok(CriterionKind::Neighbor),
        other => Err(invalid(format!("unknown criterion {other}"))),
    }
}

/// Message describing the last failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cqbg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cqbg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a citation dump and builds an engine.
///
/// # Safety
/// `corpus_path` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cqbg_engine_build(
    corpus_path: *const c_char,
    out: *mut *mut CqbgEngine,
) -> CqbgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = str_arg(corpus_path, "corpus_path")?;
        let (inner, _) = Engine::from_corpus_file(path)?;
        *out = Box::into_raw(Box::new(CqbgEngine { inner }));
        Ok(())
    })
}

/// Loads an engine from a snapshot written by `cqbg build` or [`cqbg_engine_save`].
///
/// # Safety
/// `snapshot_path` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cqbg_engine_load(
    snapshot_path: *const c_char,
    out: *mut *mut CqbgEngine,
) -> CqbgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = str_arg(snapshot_path, "snapshot_path")?;
        let inner = Engine::load(path)?;
        *out = Box::into_raw(Box::new(CqbgEngine { inner }));
        Ok(())
    })
}

/// # Safety
/// `engine` must come from this library; `snapshot_path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn cqbg_engine_save(
    engine: *const CqbgEngine,
    snapshot_path: *const c_char,
) -> CqbgStatus {
    guard(|| {
        let engine = engine.as_ref().ok_or_else(|| null("engine"))?;
        let path = str_arg(snapshot_path, "snapshot_path")?;
        engine.inner.save(path)?;
        Ok(())
    })
}

/// Releases an engine. NULL is ignored.
///
/// # Safety
/// `engine` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cqbg_engine_free(engine: *mut CqbgEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// # Safety
/// `engine` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cqbg_engine_counts(
    engine: *const CqbgEngine,
    out: *mut CqbgCounts,
) -> CqbgStatus {
    guard(|| {
        let engine = engine.as_ref().ok_or_else(|| null("engine"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let e = &engine.inner;
        *out = CqbgCounts {
            papers: e.bundle().papers.len() as u64,
            authors: e.bundle().authors.len() as u64,
            edges: e.citation_graph().edge_count() as u64,
            citation_links: e.bundle().citation_links(),
        };
        Ok(())
    })
}

/// Fills `out` with the default settings: BM25 (k1 = 1.5, b = 0.75), paper
/// criterion with thresholds 20 / 40, top 5, aligned pairing, interest
/// folded into the query, seed role classified. Strings are set to NULL.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cqbg_request_default(out: *mut CqbgRequest) -> CqbgStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = Bm25Params::default();
        let (t1, t2) = RoleCriterion::default().thresholds();
        *out = CqbgRequest {
            name: ptr::null(),
            query: ptr::null(),
            interest: ptr::null(),
            seed_role: CQBG_ROLE_UNSPECIFIED,
            top_k: 5,
            scorer: CQBG_SCORER_BM25,
            k1: p.k1,
            b: p.b,
            criterion: CQBG_CRITERION_PAPER,
            t1,
            t2,
            pairing: CQBG_PAIRING_ALIGNED,
            interest_in_query: true,
        };
        Ok(())
    })
}

unsafe fn convert_request(r: &CqbgRequest) -> Result<RecommendRequest, Failure> {
    let seed_role = match r.seed_role {
        CQBG_ROLE_UNSPECIFIED => None,
        0 => Some(Role::PrimeProfessor),
        1 => Some(Role::AssistantProfessor),
        2 => Some(Role::Student),
        other => return Err(invalid(format!("unknown role {other}"))),
    };
    let scorer = match r.scorer {
        CQBG_SCORER_BM25 => Scorer::Bm25(Bm25Params::new(r.k1, r.b)?),
        CQBG_SCORER_TFIDF => Scorer::TfIdf,
        other => return Err(invalid(format!("unknown scorer {other}"))),
    };
    let pairing = match r.pairing {
        CQBG_PAIRING_ALIGNED => Pairing::Aligned,
        CQBG_PAIRING_PRODUCT => Pairing::Product,
        other => return Err(invalid(format!("unknown pairing {other}"))),
    };
    let interest = if r.interest.is_null() {
        None
    } else {
        Some(str_arg(r.interest, "interest")?.to_string())
    };
    Ok(RecommendRequest {
        seed_name: str_arg(r.name, "name")?.to_string(),
        seed_role,
        query: str_arg(r.query, "query")?.to_string(),
        interest,
        top_k: r.top_k as usize,
        scorer,
        criterion: RoleCriterion::new(criterion_kind(r.criterion)?, r.t1, r.t2)?,
        pairing,
        interest_in_query: r.interest_in_query,
    })
}

/// Runs a recommendation and returns it as JSON (the same document
/// `cqbg recommend` prints). Free the result with [`cqbg_string_free`].
///
/// # Safety
/// `engine` must come from this library, `request` must point to an
/// initialized [`CqbgRequest`] whose strings are NUL-terminated, and
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cqbg_recommend_json(
    engine: *const CqbgEngine,
    request: *const CqbgRequest,
    out_json: *mut *mut c_char,
) -> CqbgStatus {
    guard(|| {
        let engine = engine.as_ref().ok_or_else(|| null("engine"))?;
        let request = request.as_ref().ok_or_else(|| null("request"))?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let req = convert_request(request)?;
        let rec = engine.inner.recommend(&req)?;
        let json = CString::new(render_json(&rec))
            .map_err(|e| Failure(CqbgStatus::Internal, e.to_string()))?;
        *out_json = json.into_raw();
        Ok(())
    })
}

/// Classifies an author. `out_metric` receives the value the role was
/// decided on (papers, citations or co-author count) and may be NULL.
///
/// # Safety
/// `engine` must come from this library, `name` must be NUL-terminated and
/// `out_role` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cqbg_classify(
    engine: *const CqbgEngine,
    name: *const c_char,
    criterion: i32,
    t1: u64,
    t2: u64,
    out_role: *mut CqbgRole,
    out_metric: *mut u64,
) -> CqbgStatus {
    guard(|| {
        let engine = engine.as_ref().ok_or_else(|| null("engine"))?;
        let name = str_arg(name, "name")?;
        let out_role = out_role.as_mut().ok_or_else(|| null("out_role"))?;
        let c = RoleCriterion::new(criterion_kind(criterion)?, t1, t2)?;
        let (role, metric) = engine.inner.classify(name, &c)?;
        *out_role = role.into();
        if let Some(m) = out_metric.as_mut() {
            *m = metric;
        }
        Ok(())
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cqbg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
