use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use endspace_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(es_last_error()) }.to_str().unwrap().to_string()
}

fn new_graph(spec: &str) -> *mut EsGraph {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { es_graph_new(c(spec).as_ptr(), false, &mut g) }, EsStatus::Ok);
    g
}

#[test]
fn lifecycle_and_queries() {
    let g = new_graph("catalog:bintree");
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(es_graph_height(g, &mut h), EsStatus::Ok);
        assert_eq!(CStr::from_ptr(h).to_str().unwrap(), "w*1");
        es_string_free(h);

        let mut pass = false;
        assert_eq!(es_check_axioms(g, 4, 2, &mut pass), EsStatus::Ok);
        assert!(pass);

        let mut v = EsVerdict::Unknown;
        let seq = c("branch(prefix=rep(0,n);period(1))");
        let target = c("branch(period(0))");
        assert_eq!(es_converges(g, seq.as_ptr(), target.as_ptr(), &mut v), EsStatus::Ok);
        assert_eq!(v, EsVerdict::Converges);
        assert_eq!(es_oracle_converges(g, seq.as_ptr(), target.as_ptr(), 32, &mut v), EsStatus::Ok);
        assert_eq!(v, EsVerdict::Converges);

        let (mut node, mut first) = (ptr::null_mut(), false);
        let other = c("branch(prefix(0;period(1)))");
        assert_eq!(es_distinguish(g, target.as_ptr(), other.as_ptr(), &mut node, &mut first), EsStatus::Ok);
        assert_eq!(CStr::from_ptr(node).to_str().unwrap(), "[0,0]");
        assert!(first);
        es_string_free(node);
        assert_eq!(es_distinguish(g, target.as_ptr(), target.as_ptr(), &mut node, &mut first), EsStatus::EqualEnds);
        es_graph_free(g);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(es_graph_new(c("inftree(").as_ptr(), false, &mut g), EsStatus::Parse);
        assert!(last_error().contains("column"), "{}", last_error());
        assert_eq!(es_graph_new(ptr::null(), false, &mut g), EsStatus::NullArgument);
        assert_eq!(es_graph_new(c("catalog:nope").as_ptr(), false, &mut g), EsStatus::InvalidInput);
        let bad = [0xffu8, 0];
        assert_eq!(es_graph_new(bad.as_ptr().cast(), false, &mut g), EsStatus::InvalidUtf8);

        let g = new_graph("catalog:bintree");
        let mut v = EsVerdict::Unknown;
        let seq = c("branch(period(2))");
        let target = c("branch(period(0))");
        assert_eq!(es_converges(g, seq.as_ptr(), target.as_ptr(), &mut v), EsStatus::InvalidInput);
        assert_eq!(es_converges(g, seq.as_ptr(), target.as_ptr(), ptr::null_mut()), EsStatus::NullArgument);
        assert_eq!(es_converges(ptr::null(), seq.as_ptr(), target.as_ptr(), &mut v), EsStatus::NullArgument);
        es_graph_free(g);
        es_graph_free(ptr::null_mut());
        es_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/endspace.h")).unwrap();
    for name in ["es_graph_new", "es_graph_free", "es_converges", "es_last_error", "ES_STATUS_NOT_UNIFORM", "typedef struct EsGraph EsGraph"] {
        assert!(h.contains(name), "{name}");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "endspace.h"

int main(void) {
    EsGraph *g = NULL;
    if (es_graph_new("catalog:bintree-tops", false, &g) != ES_STATUS_OK) return 10;
    EsVerdict v;
    EsStatus s = es_converges(g, "branch(prefix=0;period(1))", "branch(period(0))", &v);
    if (s != ES_STATUS_OK || v != ES_VERDICT_DIVERGES) return 11;
    if (es_graph_new("fan(", false, &g) != ES_STATUS_PARSE) return 12;
    if (strstr(es_last_error(), "parse error") == NULL) return 13;
    es_graph_free(g);
    puts("ok");
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    // target/<profile>/deps/<this test> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libendspace_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let dir = tempfile_dir();
    let src = dir.join("smoke.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = dir.join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}

fn tempfile_dir() -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ffi-smoke");
    std::fs::create_dir_all(&d).unwrap();
    d
}
