use std::ffi::{CStr, CString};
use std::ptr;

use nilsep_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    nilsep_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = nilsep_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

unsafe fn tuple(json: &str) -> *mut NilsepTuple {
    let c = CString::new(json).unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(nilsep_tuple_from_json(c.as_ptr(), &mut t), NilsepStatus::Ok);
    t
}

const J2_E13: &str =
    r#"{"size":3,"matrices":[[[0,1,0],[0,0,1],[0,0,0]],[[0,0,"1/2"],[0,0,0],[0,0,0]]]}"#;

#[test]
fn eval_through_handles() {
    unsafe {
        let t = tuple(
            r#"{"size":3,"matrices":[[[0,1,0],[0,0,1],[0,0,0]],[[0,0,0],[0,0,0],[0,"1/2",0]]]}"#,
        );
        assert_eq!(nilsep_tuple_size(t), 3);
        assert_eq!(nilsep_tuple_count(t), 2);
        let word = CString::new("12").unwrap();
        let mut v = ptr::null_mut();
        assert_eq!(nilsep_eval_word(t, word.as_ptr(), &mut v), NilsepStatus::Ok);
        assert_eq!(take(v), "1/2");
        assert!(nilsep_last_error_message().is_null());
        nilsep_tuple_free(t);
    }
}

#[test]
fn json_roundtrip() {
    unsafe {
        let t = tuple(J2_E13);
        let text = take(nilsep_tuple_to_json(t));
        assert!(text.contains("\"1/2\""));
        let u = tuple(&text);
        assert_eq!(take(nilsep_tuple_to_json(u)), text);
        nilsep_tuple_free(t);
        nilsep_tuple_free(u);
    }
}

#[test]
fn from_ints_rejects_non_nilpotent() {
    unsafe {
        let ok = [0i64, 1, 0, 0, 0, 0, 1, 0];
        let mut t = ptr::null_mut();
        assert_eq!(
            nilsep_tuple_from_ints(2, 2, ok.as_ptr(), &mut t),
            NilsepStatus::Ok
        );
        assert_eq!(nilsep_tuple_count(t), 2);
        nilsep_tuple_free(t);

        let bad = [0i64, 1, 0, 0, 1, 0, 0, 0];
        let mut t = ptr::null_mut();
        assert_eq!(
            nilsep_tuple_from_ints(2, 2, bad.as_ptr(), &mut t),
            NilsepStatus::NotNilpotent
        );
        assert!(t.is_null());
        assert!(last_error().contains("matrix 2"));

        assert_eq!(
            nilsep_tuple_from_ints(4, 1, ok.as_ptr(), &mut t),
            NilsepStatus::InvalidArgument
        );
    }
}

#[test]
fn set_lookup_and_words() {
    unsafe {
        let name = CString::new("S33").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(nilsep_set_new(name.as_ptr(), 3, &mut s), NilsepStatus::Ok);
        assert_eq!(nilsep_set_len(s), 26);
        assert_eq!(take(nilsep_set_word(s, 0)), "12");
        assert!(nilsep_set_word(s, 26).is_null());
        nilsep_set_free(s);

        let mut s = ptr::null_mut();
        assert_eq!(
            nilsep_set_new(name.as_ptr(), 2, &mut s),
            NilsepStatus::Incompatible
        );
        let bogus = CString::new("S44").unwrap();
        assert_eq!(
            nilsep_set_new(bogus.as_ptr(), 3, &mut s),
            NilsepStatus::UnknownSet
        );
        assert!(last_error().contains("S44"));
    }
}

#[test]
fn separate_reports_first_word() {
    unsafe {
        let name = CString::new("S32").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(nilsep_set_new(name.as_ptr(), 2, &mut s), NilsepStatus::Ok);
        let a =
            tuple(r#"{"size":3,"matrices":[[[0,1,0],[0,0,0],[0,0,0]],[[0,0,0],[1,0,0],[0,0,0]]]}"#);
        let b =
            tuple(r#"{"size":3,"matrices":[[[0,1,0],[0,0,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]]]}"#);
        let mut w = ptr::null_mut();
        assert_eq!(nilsep_separate(s, a, b, &mut w), NilsepStatus::Ok);
        assert_eq!(take(w), "12");
        assert_eq!(nilsep_separate(s, a, a, &mut w), NilsepStatus::Ok);
        assert!(w.is_null());

        let c = tuple(J2_E13);
        let wide = CString::new("S33").unwrap();
        let mut s3 = ptr::null_mut();
        assert_eq!(nilsep_set_new(wide.as_ptr(), 3, &mut s3), NilsepStatus::Ok);
        assert_eq!(
            nilsep_separate(s3, a, c, &mut w),
            NilsepStatus::Incompatible
        );
        for h in [a, b, c] {
            nilsep_tuple_free(h);
        }
        nilsep_set_free(s);
        nilsep_set_free(s3);
    }
}

#[test]
fn minimality_counts() {
    unsafe {
        let name = CString::new("S32").unwrap();
        let (mut n, mut k) = (0usize, 0usize);
        assert_eq!(
            nilsep_verify_minimality(name.as_ptr(), 2, &mut n, &mut k),
            NilsepStatus::Ok
        );
        assert_eq!((n, k), (5, 5));
    }
}

#[test]
fn null_and_bad_input() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(
            nilsep_tuple_from_json(ptr::null(), &mut t),
            NilsepStatus::NullPointer
        );
        let junk = CString::new("{").unwrap();
        assert_eq!(
            nilsep_tuple_from_json(junk.as_ptr(), &mut t),
            NilsepStatus::Parse
        );
        let bad_utf8 = [0xffu8, 0];
        assert_eq!(
            nilsep_tuple_from_json(bad_utf8.as_ptr().cast(), &mut t),
            NilsepStatus::InvalidUtf8
        );
        let u = tuple(J2_E13);
        let word = CString::new("1x").unwrap();
        let mut v = ptr::null_mut();
        assert_eq!(
            nilsep_eval_word(u, word.as_ptr(), &mut v),
            NilsepStatus::InvalidWord
        );
        let word = CString::new("13").unwrap();
        assert_eq!(
            nilsep_eval_word(u, word.as_ptr(), &mut v),
            NilsepStatus::InvalidWord
        );
        assert_eq!(nilsep_tuple_size(ptr::null()), 0);
        assert!(nilsep_tuple_to_json(ptr::null()).is_null());
        nilsep_tuple_free(ptr::null_mut());
        nilsep_string_free(ptr::null_mut());
        nilsep_tuple_free(u);
    }
}

#[test]
fn header_declares_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/nilsep.h")).unwrap();
    for name in [
        "typedef struct NilsepTuple NilsepTuple",
        "typedef struct NilsepSet NilsepSet",
        "NILSEP_STATUS_NOT_NILPOTENT",
        "nilsep_tuple_from_json",
        "nilsep_tuple_from_ints",
        "nilsep_eval_word",
        "nilsep_separate",
        "nilsep_verify_minimality",
        "nilsep_last_error_message",
        "nilsep_string_free",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
