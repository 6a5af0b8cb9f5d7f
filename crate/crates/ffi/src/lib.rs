//! C interface to `nilsep`.
//!
//! Tuples and invariant sets cross the boundary as opaque handles. Every
//! fallible call returns a [`NilsepStatus`]; on failure a message is kept
//! per thread and can be read with [`nilsep_last_error_message`].
//! Strings returned through out-pointers are owned by the caller and must
//! be released with [`nilsep_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use nilsep::document::{parse_tuple, render_tuple};
use nilsep::scalar;
use nilsep::witnesses::verify_minimality;
use nilsep::{builtin_set, Error, InvariantSet, NilTuple, SetName, SmallMatrix, TraceWord};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NilsepStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    NotNilpotent = 4,
    Incompatible = 5,
    InvalidWord = 6,
    UnknownSet = 7,
    InvalidArgument = 8,
    Internal = 9,
}

/// A tuple of nilpotent 2×2 or 3×3 matrices with rational entries.
pub struct NilsepTuple(NilTuple);

/// A named invariant set for a fixed number of matrices.
pub struct NilsepSet(InvariantSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> NilsepStatus {
    match err {
        Error::NotNilpotent { .. } => NilsepStatus::NotNilpotent,
        Error::Incompatible { .. } | Error::TupleLength(..) | Error::SizeMismatch(..) => {
            NilsepStatus::Incompatible
        }
        Error::InvalidWord(_) | Error::EmptyWord | Error::LetterOutOfRange { .. } => {
            NilsepStatus::InvalidWord
        }
        Error::UnknownSet(_) => NilsepStatus::UnknownSet,
        Error::Parse(_) => NilsepStatus::Parse,
        Error::UnsupportedSize(_) | Error::EntryCount { .. } | Error::Usage(_) => {
            NilsepStatus::InvalidArgument
        }
        _ => NilsepStatus::Internal,
    }
}

fn fail(status: NilsepStatus, msg: impl Into<String>) -> NilsepStatus {
    set_last_error(msg.into());
    status
}

fn fail_with(err: Error) -> NilsepStatus {
    let status = status_of(&err);
    fail(status, err.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, NilsepStatus> {
    if p.is_null() {
        return Err(fail(NilsepStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        fail(
            NilsepStatus::InvalidUtf8,
            format!("{what} is not valid UTF-8"),
        )
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! non_null {
    ($p:expr, $what:expr) => {
        if $p.is_null() {
            return fail(NilsepStatus::NullPointer, concat!($what, " is null"));
        }
    };
}

/// Message for the last failed call on this thread, or null if the last
/// call succeeded. The pointer stays valid until the next call into this
/// library on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn nilsep_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
///
/// `s` must be null or a pointer obtained from this library that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn nilsep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a JSON tuple document and checks nilpotency.
///
/// # Safety
///
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nilsep_tuple_from_json(
    json: *const c_char,
    out: *mut *mut NilsepTuple,
) -> NilsepStatus {
    clear_last_error();
    non_null!(out, "out");
    *out = ptr::null_mut();
    let text = try_ffi!(read_str(json, "json"));
    match parse_tuple(text) {
        Ok(t) => {
            *out = Box::into_raw(Box::new(NilsepTuple(t)));
            NilsepStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Builds a tuple of `count` integer matrices of side `size`. `entries`
/// holds `count * size * size` values, each matrix row-major.
///
/// # Safety
///
/// `entries` must point to `count * size * size` readable values and `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nilsep_tuple_from_ints(
    size: usize,
    count: usize,
    entries: *const i64,
    out: *mut *mut NilsepTuple,
) -> NilsepStatus {
    clear_last_error();
    non_null!(out, "out");
    *out = ptr::null_mut();
    if size != 2 && size != 3 {
        return fail_with(Error::UnsupportedSize(size));
    }
    if count == 0 {
        return fail(
            NilsepStatus::InvalidArgument,
            "tuple needs at least one matrix",
        );
    }
    non_null!(entries, "entries");
    let all = std::slice::from_raw_parts(entries, count * size * size);
    let mats = try_ffi!(all
        .chunks(size * size)
        .map(|c| SmallMatrix::from_ints(size, c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(fail_with));
    match NilTuple::new(size, mats) {
        Ok(t) => {
            *out = Box::into_raw(Box::new(NilsepTuple(t)));
            NilsepStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Side length of the matrices, or 0 for a null handle.
///
/// # Safety
///
/// `t` must be null or a live tuple handle.
#[no_mangle]
pub unsafe extern "C" fn nilsep_tuple_size(t: *const NilsepTuple) -> usize {
    t.as_ref().map_or(0, |t| t.0.size())
}

/// Number of matrices, or 0 for a null handle.
///
/// # Safety
///
/// `t` must be null or a live tuple handle.
#[no_mangle]
pub unsafe extern "C" fn nilsep_tuple_count(t: *const NilsepTuple) -> usize {
    t.as_ref().map_or(0, |t| t.0.d())
}

/// Canonical JSON document for the tuple. Free with [`nilsep_string_free`].
/// Returns null for a null handle.
///
/// # Safety
///
/// `t` must be null or a live tuple handle.
#[no_mangle]
pub unsafe extern "C" fn nilsep_tuple_to_json(t: *const NilsepTuple) -> *mut c_char {
    match t.as_ref() {
        Some(t) => into_c_string(render_tuple(&t.0)),
        None => ptr::null_mut(),
    }
}

/// # Safety
///
/// `t` must be null or a tuple handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nilsep_tuple_free(t: *mut NilsepTuple) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Looks up a named set (`S2`, `S32`, `S33`, `P33`, `Pprime33`) for
/// `count` matrices. Only `S2` accepts any `count >= 2`; the others need
/// their fixed count.
///
/// # Safety
///
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nilsep_set_new(
    name: *const c_char,
    count: usize,
    out: *mut *mut NilsepSet,
) -> NilsepStatus {
    clear_last_error();
    non_null!(out, "out");
    *out = ptr::null_mut();
    let name = try_ffi!(read_str(name, "name"));
    let parsed: SetName = try_ffi!(name.parse().map_err(fail_with));
    match builtin_set(parsed, count) {
        Ok(s) => {
            *out = Box::into_raw(Box::new(NilsepSet(s)));
            NilsepStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Number of words in the set, or 0 for a null handle.
///
/// # Safety
///
/// `s` must be null or a live set handle.
#[no_mangle]
pub unsafe extern "C" fn nilsep_set_len(s: *const NilsepSet) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// Word at `index` as a digit string such as `"1123"`. Free with
/// [`nilsep_string_free`]. Null if the handle is null or the index is out
/// of range.
///
/// # Safety
///
/// `s` must be null or a live set handle.
#[no_mangle]
pub unsafe extern "C" fn nilsep_set_word(s: *const NilsepSet, index: usize) -> *mut c_char {
    match s.as_ref().and_then(|s| s.0.words.get(index)) {
        Some(w) => into_c_string(w.to_string()),
        None => ptr::null_mut(),
    }
}

/// # Safety
///
/// `s` must be null or a set handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nilsep_set_free(s: *mut NilsepSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Evaluates the trace of the word (digits `1`-`9`, e.g. `"1123"`) on the
/// tuple. The value comes back as an integer or lowest-terms `p/q`
/// string in `*out_value`.
///
/// # Safety
///
/// `t` must be a live tuple handle, `word` a nul-terminated string and
/// `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nilsep_eval_word(
    t: *const NilsepTuple,
    word: *const c_char,
    out_value: *mut *mut c_char,
) -> NilsepStatus {
    clear_last_error();
    non_null!(out_value, "out_value");
    *out_value = ptr::null_mut();
    non_null!(t, "tuple");
    let text = try_ffi!(read_str(word, "word"));
    let w: TraceWord = try_ffi!(text.parse().map_err(fail_with));
    match nilsep::eval_word(&(*t).0, &w) {
        Ok(v) => {
            *out_value = into_c_string(scalar::format(&v));
            NilsepStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Compares two tuples on every word of the set. On success `*out_word` is
/// the first separating word, or null when the tuples agree on the whole
/// set.
///
/// # Safety
///
/// `set`, `a` and `b` must be live handles and `out_word` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nilsep_separate(
    set: *const NilsepSet,
    a: *const NilsepTuple,
    b: *const NilsepTuple,
    out_word: *mut *mut c_char,
) -> NilsepStatus {
    clear_last_error();
    non_null!(out_word, "out_word");
    *out_word = ptr::null_mut();
    non_null!(set, "set");
    non_null!(a, "a");
    non_null!(b, "b");
    match nilsep::separate(&(*a).0, &(*b).0, &(*set).0) {
        Ok(w) => {
            if let Some(w) = w {
                *out_word = into_c_string(w.to_string());
            }
            NilsepStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Replays the built-in witness records for the named set. Writes the set
/// size and the number of elements with a passing record; the set is
/// minimal when the two agree.
///
/// # Safety
///
/// `name` must be a nul-terminated string; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nilsep_verify_minimality(
    name: *const c_char,
    count: usize,
    out_elements: *mut usize,
    out_witnessed: *mut usize,
) -> NilsepStatus {
    clear_last_error();
    non_null!(out_elements, "out_elements");
    non_null!(out_witnessed, "out_witnessed");
    let name = try_ffi!(read_str(name, "name"));
    let parsed: SetName = try_ffi!(name.parse().map_err(fail_with));
    match verify_minimality(parsed, count) {
        Ok(r) => {
            *out_elements = r.elements;
            *out_witnessed = r.witnessed;
            NilsepStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}
