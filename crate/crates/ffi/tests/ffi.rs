use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use idgal_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    idgal_string_free(s);
    out
}

#[test]
fn binomials_and_errors() {
    let mut b = 0u32;
    unsafe {
        assert_eq!(idgal_lucas_binom(3, -1, 1, &mut b), IdgalStatus::Ok);
        assert_eq!(b, 2);
        assert_eq!(idgal_lucas_binom(2, 6, 2, &mut b), IdgalStatus::Ok);
        assert_eq!(b, 1);
        assert_eq!(idgal_lucas_binom(6, 1, 1, &mut b), IdgalStatus::NotPrime);
        let msg = CStr::from_ptr(idgal_last_error()).to_str().unwrap();
        assert!(msg.contains("not a prime"));
        assert_eq!(idgal_lucas_binom(3, 1, 1, ptr::null_mut()), IdgalStatus::NullPointer);
    }
}

#[test]
fn series_handles() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(idgal_series_parse(2, cstr("1*t^-2 + 1*t^3").as_ptr(), &mut s), IdgalStatus::Ok);
        let mut d = ptr::null_mut();
        // theta^(1): -2 t^-3 + 3 t^2 = t^2 mod 2
        assert_eq!(idgal_series_theta(s, 1, &mut d), IdgalStatus::Ok);
        let mut c = 9u32;
        assert_eq!(idgal_series_coeff(d, 2, &mut c), IdgalStatus::Ok);
        assert_eq!(c, 1);
        assert_eq!(idgal_series_coeff(d, -3, &mut c), IdgalStatus::Ok);
        assert_eq!(c, 0);
        let mut sq = ptr::null_mut();
        assert_eq!(idgal_series_mul(s, s, &mut sq), IdgalStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(idgal_series_to_string(sq, &mut text), IdgalStatus::Ok);
        let shown = take(text);
        assert!(shown.contains("t^-4") && shown.contains("t^6"), "{shown}");
        for h in [s, d, sq] {
            idgal_series_free(h);
        }
        let mut bad = ptr::null_mut();
        assert_eq!(idgal_series_parse(2, cstr("1*x^2").as_ptr(), &mut bad), IdgalStatus::Parse);
        assert!(bad.is_null());
        idgal_series_free(ptr::null_mut());
    }
}

#[test]
fn json_entry_points() {
    unsafe {
        let mut report = ptr::null_mut();
        let good = cstr(r#"{"p":2,"m":1,"n":1,"order":8,"coeffs":[{"k":[1],"matrix":[["1*t^-1"]]}]}"#);
        assert_eq!(idgal_ide_check_json(good.as_ptr(), 8, &mut report), IdgalStatus::Ok);
        take(report);
        assert_eq!(idgal_ide_check_json(cstr("{").as_ptr(), 8, &mut report), IdgalStatus::Parse);

        let suite = cstr(r#"[{"which":1,"p":2,"ell_max":1}]"#);
        assert_eq!(idgal_run_suite_json(suite.as_ptr(), &mut report), IdgalStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert_eq!(v["pipelines"][0]["assertions"][0]["status"], "pass");
        let bad = cstr(r#"[{"which":9,"p":2}]"#);
        assert_eq!(idgal_run_suite_json(bad.as_ptr(), &mut report), IdgalStatus::Config);
    }
}

#[test]
fn c_program_links_against_the_header() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test> -> target/<profile>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libidgal_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let exe = tempfile::tempdir().unwrap();
    let bin = exe.path().join("smoke");
    let status = Command::new("cc")
        .arg(root.join("tests/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status();
    let Ok(status) = status else {
        eprintln!("skipping: no C compiler");
        return;
    };
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
