//! C ABI for the sms-forge engine.
//!
//! Conventions: algebras are opaque handles created from JSON (or a builtin
//! fixture name) and released with `sms_forge_algebra_free`. Every query
//! returns a status code and, where applicable, a JSON report allocated by
//! the library; release reports with `sms_forge_string_free`. On failure,
//! `sms_forge_last_error` returns a thread-local message describing the most
//! recent error in the calling thread.

use serde_json::json;
use sms_forge::algebra::BasicAlgebra;
use sms_forge::io::{self, fixtures, rep_to_doc, AlgebraDoc, SmsDoc};
use sms_forge::rep::{self, Rep};
use sms_forge::sms::{
    is_sms, mutate, nu_shift_stable, verify_orthogonal_bricks, MutationSign, SmsVerdict,
};
use sms_forge::{tilt, DetRng, Error};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

/// Status codes mirroring the CLI exit-code contract.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmsForgeStatus {
    Ok = 0,
    InvalidInput = 1,
    VerifiedNegative = 2,
    Inconclusive = 3,
    InternalError = 4,
    NullPointer = 5,
}

/// Opaque algebra handle.
pub struct SmsForgeAlgebra {
    algebra: Arc<BasicAlgebra>,
    fixture: Option<io::Fixture>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(e: &Error) -> SmsForgeStatus {
    match e {
        Error::CapExceeded { .. } | Error::DecompositionInconclusive => {
            SmsForgeStatus::Inconclusive
        }
        Error::NotSelfInjective { .. } => SmsForgeStatus::VerifiedNegative,
        _ => SmsForgeStatus::InvalidInput,
    }
}

/// Latest error message of the calling thread; valid until the next call
/// into the library from this thread.
#[no_mangle]
pub extern "C" fn sms_forge_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string allocated by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by this library (or null).
#[no_mangle]
pub unsafe extern "C" fn sms_forge_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Release an algebra handle.
///
/// # Safety
/// `alg` must be a handle previously returned by this library (or null),
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sms_forge_algebra_free(alg: *mut SmsForgeAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, SmsForgeStatus> {
    if ptr.is_null() {
        set_error("null pointer argument");
        return Err(SmsForgeStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        SmsForgeStatus::InvalidInput
    })
}

fn write_out_string(out: *mut *mut c_char, value: String) -> SmsForgeStatus {
    let c = match CString::new(value) {
        Ok(c) => c,
        Err(_) => {
            set_error("report contained an interior NUL byte");
            return SmsForgeStatus::InternalError;
        }
    };
    unsafe {
        *out = c.into_raw();
    }
    SmsForgeStatus::Ok
}

fn guarded<F: FnOnce() -> SmsForgeStatus>(f: F) -> SmsForgeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            SmsForgeStatus::InternalError
        }
    }
}

/// Build an algebra from an algebra document (JSON).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sms_forge_algebra_from_json(
    json: *const c_char,
    out: *mut *mut SmsForgeAlgebra,
) -> SmsForgeStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return SmsForgeStatus::NullPointer;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let doc: AlgebraDoc = match serde_json::from_str(text) {
            Ok(d) => d,
            Err(e) => {
                set_error(&format!("parse error: {e}"));
                return SmsForgeStatus::InvalidInput;
            }
        };
        match doc.build() {
            Ok(algebra) => {
                *out = Box::into_raw(Box::new(SmsForgeAlgebra {
                    algebra,
                    fixture: None,
                }));
                SmsForgeStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Build one of the builtin fixture algebras by name
/// (example3 | example4 | example5).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sms_forge_algebra_builtin(
    name: *const c_char,
    out: *mut *mut SmsForgeAlgebra,
) -> SmsForgeStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return SmsForgeStatus::NullPointer;
        }
        let name = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match fixtures::by_name(name) {
            Ok(fx) => {
                *out = Box::into_raw(Box::new(SmsForgeAlgebra {
                    algebra: fx.algebra.clone(),
                    fixture: Some(fx),
                }));
                SmsForgeStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                SmsForgeStatus::InvalidInput
            }
        }
    })
}

/// Total dimension of the algebra; zero for a null handle.
///
/// # Safety
/// `alg` must be a live handle from this library, or null.
#[no_mangle]
pub unsafe extern "C" fn sms_forge_algebra_dim(alg: *const SmsForgeAlgebra) -> u64 {
    if alg.is_null() {
        return 0;
    }
    (*alg).algebra.dim() as u64
}

/// Self-injectivity check: Ok with a report when self-injective,
/// VerifiedNegative otherwise.
///
/// # Safety
/// `alg` must be a live handle and `report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sms_forge_algebra_check(
    alg: *const SmsForgeAlgebra,
    report: *mut *mut c_char,
) -> SmsForgeStatus {
    guarded(|| {
        if alg.is_null() || report.is_null() {
            set_error("null pointer argument");
            return SmsForgeStatus::NullPointer;
        }
        let h = &*alg;
        let a = &h.algebra;
        match rep::self_injective_check(a) {
            Ok(nd) => {
                let sigma: Vec<&str> = nd.permutation.iter().map(|&j| a.vertex_name(j)).collect();
                let payload = json!({
                    "self_injective": true,
                    "dim": a.dim(),
                    "cartan_matrix": a.cartan_matrix(),
                    "nakayama_permutation": sigma,
                });
                write_out_string(report, payload.to_string())
            }
            Err(e @ Error::NotSelfInjective { .. }) => {
                let payload = json!({
                    "self_injective": false,
                    "dim": a.dim(),
                    "reason": e.to_string(),
                });
                let s = write_out_string(report, payload.to_string());
                if s != SmsForgeStatus::Ok {
                    return s;
                }
                SmsForgeStatus::VerifiedNegative
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Resolve a member specification: "simples", a comma-separated list of
/// builtin module names, or an SMS member document (JSON).
fn resolve_members(h: &SmsForgeAlgebra, spec: &str) -> Result<Vec<(String, Rep)>, Error> {
    if spec == "simples" {
        let a = &h.algebra;
        return Ok((0..a.n_vertices())
            .map(|v| (format!("S{}", a.vertex_name(v)), rep::simple(a, v)))
            .collect());
    }
    if spec.trim_start().starts_with('{') {
        let doc: SmsDoc = serde_json::from_str(spec)?;
        let mut members = Vec::new();
        for m in &doc.members {
            members.push((m.name.clone(), io::doc_to_rep(&m.module, &h.algebra)?));
        }
        return Ok(members);
    }
    let fx = h.fixture.as_ref().ok_or_else(|| {
        Error::InvalidInput("named members need a builtin algebra; pass an SMS document".into())
    })?;
    let mut members = Vec::new();
    for name in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let rep = fx
            .module(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown builtin module '{name}'")))?;
        members.push((name.to_string(), rep.clone()));
    }
    if members.is_empty() {
        return Err(Error::InvalidInput("no members selected".into()));
    }
    Ok(members)
}

/// Verify a simple-minded system candidate. Ok when verified; returns
/// VerifiedNegative when refuted and Inconclusive on cap exhaustion, with the
/// report describing the verdict in all three cases.
///
/// # Safety
/// `alg` must be a live handle; `members` a NUL-terminated string; `report`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sms_forge_sms_verify(
    alg: *const SmsForgeAlgebra,
    members: *const c_char,
    seed: u64,
    cap: u64,
    report: *mut *mut c_char,
) -> SmsForgeStatus {
    guarded(|| {
        if alg.is_null() || report.is_null() {
            set_error("null pointer argument");
            return SmsForgeStatus::NullPointer;
        }
        let spec = match read_str(members) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let h = &*alg;
        let member_list = match resolve_members(h, spec) {
            Ok(m) => m,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        let mut rng = DetRng::new(seed);
        let candidate = match verify_orthogonal_bricks(member_list) {
            Ok(c) => c,
            Err(e @ (Error::NotABrick(_) | Error::NotOrthogonal(_, _))) => {
                let payload = json!({"sms": false, "reason": e.to_string()});
                let s = write_out_string(report, payload.to_string());
                if s != SmsForgeStatus::Ok {
                    return s;
                }
                return SmsForgeStatus::VerifiedNegative;
            }
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        let nu = match nu_shift_stable(&candidate.reps(), &mut rng) {
            Ok(b) => b,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        match is_sms(&candidate, cap as usize) {
            Ok(r) => {
                let (verdict, status) = match r.verdict {
                    SmsVerdict::Sms => (json!(true), SmsForgeStatus::Ok),
                    SmsVerdict::NotSms { .. } => (json!(false), SmsForgeStatus::VerifiedNegative),
                    SmsVerdict::Inconclusive { .. } => {
                        (json!("inconclusive"), SmsForgeStatus::Inconclusive)
                    }
                };
                let payload = json!({"sms": verdict, "nu_stable": nu});
                let s = write_out_string(report, payload.to_string());
                if s != SmsForgeStatus::Ok {
                    return s;
                }
                status
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Mutate a simple-minded system at a subset of member labels
/// (comma-separated). `sign_plus` nonzero selects the left mutation.
///
/// # Safety
/// `alg` must be a live handle; string arguments NUL-terminated; `report`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sms_forge_sms_mutate(
    alg: *const SmsForgeAlgebra,
    members: *const c_char,
    at: *const c_char,
    sign_plus: i32,
    seed: u64,
    cap: u64,
    report: *mut *mut c_char,
) -> SmsForgeStatus {
    guarded(|| {
        if alg.is_null() || report.is_null() {
            set_error("null pointer argument");
            return SmsForgeStatus::NullPointer;
        }
        let spec = match read_str(members) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let at = match read_str(at) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let h = &*alg;
        let inner = || -> Result<String, Error> {
            let member_list = resolve_members(h, spec)?;
            let candidate = verify_orthogonal_bricks(member_list)?;
            let mut indices = Vec::new();
            for label in at.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let idx = candidate
                    .member_index(label)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown member '{label}'")))?;
                indices.push(idx);
            }
            let sign = if sign_plus != 0 {
                MutationSign::Plus
            } else {
                MutationSign::Minus
            };
            let mut rng = DetRng::new(seed);
            let result = mutate(&candidate, &indices, sign, cap as usize, &mut rng)?;
            let id = h
                .fixture
                .as_ref()
                .map(|f| f.name.clone())
                .unwrap_or_else(|| "algebra".into());
            let members_json: Vec<serde_json::Value> = result
                .output
                .members
                .iter()
                .map(|m| {
                    json!({
                        "label": m.label,
                        "dims": m.rep.dims(),
                        "module": rep_to_doc(&m.rep, &id),
                    })
                })
                .collect();
            Ok(json!({
                "members": members_json,
                "nu_stable_subset": result.nu_stable_subset,
                "nu_stable_system": result.nu_stable_system,
            })
            .to_string())
        };
        match inner() {
            Ok(payload) => write_out_string(report, payload),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

fn parse_vertices(h: &SmsForgeAlgebra, at: &str) -> Result<Vec<usize>, Error> {
    let a = &h.algebra;
    if at == "all" {
        return Ok((0..a.n_vertices()).collect());
    }
    if at == "none" || at.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for name in at.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v = a
            .presentation
            .vertices
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown vertex '{name}'")))?;
        out.push(v);
    }
    Ok(out)
}

/// Build the Okuyama complex at the given simple subset (comma-separated
/// vertex names, or "all"/"none") and run the tilting test. Ok when tilting,
/// VerifiedNegative otherwise.
///
/// # Safety
/// `alg` must be a live handle; `at` NUL-terminated; `report` valid.
#[no_mangle]
pub unsafe extern "C" fn sms_forge_okuyama_check(
    alg: *const SmsForgeAlgebra,
    at: *const c_char,
    seed: u64,
    report: *mut *mut c_char,
) -> SmsForgeStatus {
    guarded(|| {
        if alg.is_null() || report.is_null() {
            set_error("null pointer argument");
            return SmsForgeStatus::NullPointer;
        }
        let at = match read_str(at) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let h = &*alg;
        let inner = || -> Result<(String, bool), Error> {
            let u = parse_vertices(h, at)?;
            let mut rng = DetRng::new(seed);
            let t = tilt::build_okuyama(&h.algebra, &u, &mut rng)?;
            let verdict = tilt::is_tilting(&t, &mut rng)?;
            let et = tilt::end_table(&t)?;
            let payload = json!({
                "tilting": verdict.tilting,
                "self_ext_plus": verdict.self_ext_plus,
                "self_ext_minus": verdict.self_ext_minus,
                "indec_summands": verdict.indec_summands,
                "expected_summands": verdict.expected_summands,
                "nakayama_stable": verdict.nakayama_stable,
                "end_dim": et.dim,
            });
            Ok((payload.to_string(), verdict.tilting))
        };
        match inner() {
            Ok((payload, tilting)) => {
                let s = write_out_string(report, payload);
                if s != SmsForgeStatus::Ok {
                    return s;
                }
                if tilting {
                    SmsForgeStatus::Ok
                } else {
                    SmsForgeStatus::VerifiedNegative
                }
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Verify that the Okuyama complex agrees with the shifted silting mutation
/// of the regular module at the given simple subset. Ok when they agree.
///
/// # Safety
/// `alg` must be a live handle; `at` NUL-terminated; `report` valid.
#[no_mangle]
pub unsafe extern "C" fn sms_forge_okuyama_mutate_eq(
    alg: *const SmsForgeAlgebra,
    at: *const c_char,
    seed: u64,
    report: *mut *mut c_char,
) -> SmsForgeStatus {
    guarded(|| {
        if alg.is_null() || report.is_null() {
            set_error("null pointer argument");
            return SmsForgeStatus::NullPointer;
        }
        let at = match read_str(at) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let h = &*alg;
        let inner = || -> Result<(String, bool), Error> {
            let u = parse_vertices(h, at)?;
            let mut rng = DetRng::new(seed);
            let t = tilt::build_okuyama(&h.algebra, &u, &mut rng)?;
            let s = tilt::silting_mutate_regular(&h.algebra, &u, &mut rng)?;
            let agree = tilt::homotopy_isomorphic(&t, &s, &mut rng)?;
            Ok((json!({"equation_holds": agree}).to_string(), agree))
        };
        match inner() {
            Ok((payload, agree)) => {
                let s = write_out_string(report, payload);
                if s != SmsForgeStatus::Ok {
                    return s;
                }
                if agree {
                    SmsForgeStatus::Ok
                } else {
                    SmsForgeStatus::VerifiedNegative
                }
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}
