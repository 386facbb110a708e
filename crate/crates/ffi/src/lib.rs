//! C ABI over `amd-relay`.
//!
//! Objects are opaque handles created by `*_new` and released by `*_free`.
//! Every fallible call returns an [`AmdRelayStatus`]; on failure a message is
//! available from [`amd_relay_last_error`]. Field elements cross the
//! boundary as whitespace-separated lowercase hex; strings returned through
//! `char **` out-parameters are owned by the caller and released with
//! [`amd_relay_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};

use amd_relay::amd::{self, AmdCodeword, AmdParams};
use amd_relay::cli::{parse_elements, parse_field};
use amd_relay::gf::{self, FieldSpec};
use amd_relay::rng::{trial_rng, Stream};
use amd_relay::secoqc::{self, SecoqcParams};
use amd_relay::sss::{AccessStructure, RobustScheme, ShareVector, ShareVectorJson, SharingScheme};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmdRelayStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Decoding or recovery output ⊥.
    Rejected = 3,
    Utf8 = 4,
    Internal = 5,
}

/// Sharing scheme family for [`amd_relay_scheme_new`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmdRelaySchemeKind {
    Additive = 0,
    Shamir = 1,
}

/// A finite field.
pub struct AmdRelayField(FieldSpec);

/// AMD code parameters.
pub struct AmdRelayCodec(AmdParams);

/// AMD-coded linear secret sharing.
pub struct AmdRelayScheme(RobustScheme);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl ToString) {
    let c = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(AmdRelayStatus, String);

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(AmdRelayStatus::InvalidArgument, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(AmdRelayStatus::InvalidArgument, msg.into())
}

/// Run `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AmdRelayStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AmdRelayStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            AmdRelayStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(AmdRelayStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(AmdRelayStatus::Utf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(AmdRelayStatus::NullPointer, "null handle".into()))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(
            AmdRelayStatus::NullPointer,
            "null out-pointer".into(),
        ));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(
            AmdRelayStatus::NullPointer,
            "null out-pointer".into(),
        ));
    }
    *out = CString::new(s)
        .map_err(|e| invalid(e.to_string()))?
        .into_raw();
    Ok(())
}

fn hex_join(v: &[gf::FieldElement]) -> String {
    gf::vec_to_hex(v).join(" ")
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn amd_relay_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn amd_relay_status_str(status: AmdRelayStatus) -> *const c_char {
    let s: &'static CStr = match status {
        AmdRelayStatus::Ok => c"ok",
        AmdRelayStatus::NullPointer => c"null pointer",
        AmdRelayStatus::InvalidArgument => c"invalid argument",
        AmdRelayStatus::Rejected => c"rejected",
        AmdRelayStatus::Utf8 => c"invalid utf-8",
        AmdRelayStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn amd_relay_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Field from a preset name such as `gf2_86` or `gf7`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn amd_relay_field_new(
    name: *const c_char,
    out: *mut *mut AmdRelayField,
) -> AmdRelayStatus {
    guard(|| {
        let spec = parse_field(text(name)?)?;
        put(out, AmdRelayField(spec))
    })
}

/// # Safety
/// `field` must be NULL or a handle from [`amd_relay_field_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn amd_relay_field_free(field: *mut AmdRelayField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Hex digits per element.
///
/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn amd_relay_field_hex_width(field: *const AmdRelayField) -> size_t {
    field.as_ref().map_or(0, |f| f.0.hex_width())
}

/// AMD code over `field` for messages of `d` elements.
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn amd_relay_codec_new(
    field: *const AmdRelayField,
    d: size_t,
    out: *mut *mut AmdRelayCodec,
) -> AmdRelayStatus {
    guard(|| {
        let spec = handle(field)?.0;
        put(out, AmdRelayCodec(AmdParams::new(spec, d)?))
    })
}

/// # Safety
/// `codec` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn amd_relay_codec_free(codec: *mut AmdRelayCodec) {
    if !codec.is_null() {
        drop(Box::from_raw(codec));
    }
}

/// Codeword length `d + 2`.
///
/// # Safety
/// `codec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn amd_relay_codec_encoded_len(codec: *const AmdRelayCodec) -> size_t {
    codec.as_ref().map_or(0, |c| c.0.encoded_len())
}

/// Encode `message` (d hex elements); randomness comes from `seed`.
///
/// # Safety
/// `codec` must be a live handle, `message` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amd_relay_encode(
    codec: *const AmdRelayCodec,
    message: *const c_char,
    seed: u64,
    out: *mut *mut c_char,
) -> AmdRelayStatus {
    guard(|| {
        let params = handle(codec)?.0;
        let s = parse_elements(&params.spec(), text(message)?)?;
        let c = amd::amd_encode(&params, &s, &mut trial_rng(seed, 0, Stream::Encode))?;
        put_string(out, c.to_string())
    })
}

/// Decode `codeword` (d+2 hex elements). Returns `Rejected` on ⊥, leaving
/// `out` untouched.
///
/// # Safety
/// `codec` must be a live handle, `codeword` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amd_relay_decode(
    codec: *const AmdRelayCodec,
    codeword: *const c_char,
    out: *mut *mut c_char,
) -> AmdRelayStatus {
    guard(|| {
        let params = handle(codec)?.0;
        let v = parse_elements(&params.spec(), text(codeword)?)?;
        let c = AmdCodeword::from_slice(&params, &v)?;
        match amd::amd_decode(&params, &c)? {
            Some(s) => put_string(out, hex_join(&s)),
            None => Err(Failure(AmdRelayStatus::Rejected, "tag check failed".into())),
        }
    })
}

/// Robust sharing over `n` shares; `threshold` is ignored for additive.
///
/// # Safety
/// `codec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn amd_relay_scheme_new(
    codec: *const AmdRelayCodec,
    kind: AmdRelaySchemeKind,
    threshold: size_t,
    n: size_t,
    out: *mut *mut AmdRelayScheme,
) -> AmdRelayStatus {
    guard(|| {
        let params = handle(codec)?.0;
        let structure = match kind {
            AmdRelaySchemeKind::Additive => AccessStructure::additive(n)?,
            AmdRelaySchemeKind::Shamir => AccessStructure::threshold(threshold, n)?,
        };
        put(out, AmdRelayScheme(RobustScheme::new(structure, params)?))
    })
}

/// # Safety
/// `scheme` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn amd_relay_scheme_free(scheme: *mut AmdRelayScheme) {
    if !scheme.is_null() {
        drop(Box::from_raw(scheme));
    }
}

/// Share `secret` (d hex elements); writes share JSON
/// `{"entries": [[hex, ...], ...]}`.
///
/// # Safety
/// `scheme` must be a live handle, `secret` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amd_relay_share(
    scheme: *const AmdRelayScheme,
    secret: *const c_char,
    seed: u64,
    out: *mut *mut c_char,
) -> AmdRelayStatus {
    guard(|| {
        let scheme = &handle(scheme)?.0;
        let s = parse_elements(&scheme.spec(), text(secret)?)?;
        let shares = scheme.share(&s, &mut trial_rng(seed, 0, Stream::Game))?;
        put_string(out, serde_json::to_string(&shares.to_json())?)
    })
}

/// Recover from share JSON (absent shares as `null`). Returns `Rejected` on ⊥.
///
/// # Safety
/// `scheme` must be a live handle, `shares_json` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn amd_relay_recover(
    scheme: *const AmdRelayScheme,
    shares_json: *const c_char,
    out: *mut *mut c_char,
) -> AmdRelayStatus {
    guard(|| {
        let scheme = &handle(scheme)?.0;
        let json: ShareVectorJson = serde_json::from_str(text(shares_json)?)?;
        let shares = ShareVector::from_json(&scheme.spec(), &json)?;
        match scheme.recover(&shares)? {
            Some(s) => put_string(out, hex_join(&s)),
            None => Err(Failure(
                AmdRelayStatus::Rejected,
                "recovery output bot".into(),
            )),
        }
    })
}

/// Run `trials` seeded SECOQC key-shift attacks on `paths` paths with the
/// default dimensions; writes the fraction that misidentified the paths.
///
/// # Safety
/// `delta2` must be NUL-terminated; `success_rate` must be writable.
#[no_mangle]
pub unsafe extern "C" fn amd_relay_secoqc_attack(
    paths: size_t,
    delta2: *const c_char,
    trials: u64,
    seed: u64,
    success_rate: *mut f64,
) -> AmdRelayStatus {
    guard(|| {
        if success_rate.is_null() {
            return Err(Failure(
                AmdRelayStatus::NullPointer,
                "null out-pointer".into(),
            ));
        }
        let params = SecoqcParams {
            paths,
            ..SecoqcParams::default()
        };
        let spec = params.tag_field()?;
        let d = parse_elements(&spec, text(delta2)?)?;
        let [delta] = d.as_slice() else {
            return Err(invalid("delta2 must be one element"));
        };
        if delta.is_zero() {
            return Err(invalid("delta2 must be non-zero"));
        }
        let summary = secoqc::attack_batch(&params, delta, trials, seed, 1)?;
        *success_rate = summary.success_rate;
        Ok(())
    })
}
