use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use pureshard_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ps_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn dihedral_counts_and_loops() {
    let tag = CString::new("I2:4").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ps_arrangement_builtin(tag.as_ptr(), &mut h) }, PsStatus::Ok);
    let (mut hs, mut rs, mut ss) = (0, 0, 0);
    assert_eq!(unsafe { ps_arrangement_counts(h, &mut hs, &mut rs, &mut ss) }, PsStatus::Ok);
    assert_eq!((hs, rs, ss), (4, 8, 6));

    let mut len = 0;
    assert_eq!(unsafe { ps_arrangement_edge_shards(h, ptr::null_mut(), 0, &mut len) }, PsStatus::BufferTooSmall);
    assert_eq!(len, 8);
    let mut edges = vec![0usize; len];
    assert_eq!(unsafe { ps_arrangement_edge_shards(h, edges.as_mut_ptr(), edges.len(), &mut len) }, PsStatus::Ok);
    let distinct: std::collections::BTreeSet<_> = edges.iter().collect();
    assert_eq!(distinct.len(), 6);

    let (a, b) = ([0usize, 1], [1usize, 0]);
    let mut equal = true;
    assert_eq!(unsafe { ps_loops_equal(h, a.as_ptr(), 2, b.as_ptr(), 2, &mut equal) }, PsStatus::Ok);
    let mut same = false;
    assert_eq!(unsafe { ps_loops_equal(h, a.as_ptr(), 2, a.as_ptr(), 2, &mut same) }, PsStatus::Ok);
    assert!(same);

    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ps_monoid_new(h, 0, &mut m) }, PsStatus::Ok);
    let (mut elements, mut chains, mut lattice) = (0, 0, false);
    assert_eq!(unsafe { ps_monoid_summary(m, &mut elements, &mut chains, &mut lattice) }, PsStatus::Ok);
    assert_eq!((elements, chains, lattice), (24, 16, true));
    let mut rgf = [0usize; 8];
    assert_eq!(unsafe { ps_monoid_rank_generating_function(m, rgf.as_mut_ptr(), rgf.len(), &mut len) }, PsStatus::Ok);
    assert_eq!(&rgf[..len], &[1, 6, 10, 6, 1]);
    let (mut id, mut rank) = (0, 0);
    assert_eq!(unsafe { ps_monoid_image(m, 99, false, &mut id, &mut rank) }, PsStatus::InvalidArgument);
    unsafe {
        ps_monoid_free(m);
        ps_arrangement_free(h);
    }
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("Q7").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ps_arrangement_builtin(bad.as_ptr(), &mut h) }, PsStatus::Parse);
    assert!(h.is_null());
    assert!(last_error().contains("Q7"));
    assert_eq!(unsafe { ps_arrangement_builtin(ptr::null(), &mut h) }, PsStatus::NullPointer);
    let json = CString::new(r#"{"dimension": 2, "hyperplanes": [["1","0"],["2","0"]], "base": {"point": ["1","1"]}}"#).unwrap();
    assert_eq!(unsafe { ps_arrangement_from_json(json.as_ptr(), &mut h) }, PsStatus::InvalidArgument);
    unsafe {
        ps_arrangement_free(ptr::null_mut());
        ps_string_free(ptr::null_mut());
    }
    assert!(!unsafe { CStr::from_ptr(ps_version()) }.to_bytes().is_empty());
}

#[test]
fn snap_word() {
    let tag = CString::new("A3").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ps_coxeter_new(tag.as_ptr(), &mut h) }, PsStatus::Ok);
    let (mut order, mut rank, mut longest) = (0, 0, 0);
    assert_eq!(unsafe { ps_coxeter_info(h, &mut order, &mut rank, &mut longest) }, PsStatus::Ok);
    assert_eq!((order, rank, longest), (24, 3, 6));
    let w = [0usize, 1, 2, 1];
    let mut out = [0usize; 16];
    let mut len = 0;
    assert_eq!(unsafe { ps_coxeter_snap(h, w.as_ptr(), w.len(), out.as_mut_ptr(), out.len(), &mut len) }, PsStatus::Ok);
    assert_eq!(len, 7);
    let bad = [5usize];
    assert_eq!(unsafe { ps_coxeter_snap(h, bad.as_ptr(), 1, out.as_mut_ptr(), out.len(), &mut len) }, PsStatus::InvalidArgument);
    unsafe { ps_coxeter_free(h) };
}

#[test]
fn verify_report() {
    let suite = CString::new("conj").unwrap();
    let mut report = ptr::null_mut();
    let mut passed = false;
    assert_eq!(unsafe { ps_verify(suite.as_ptr(), &mut report, &mut passed) }, PsStatus::Ok);
    assert!(passed);
    let text = unsafe { CStr::from_ptr(report) }.to_string_lossy().into_owned();
    assert!(text.contains("\"suite\":\"conj\""));
    unsafe { ps_string_free(report) };
}

#[test]
fn header_declares_the_api() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/pureshard.h");
    let header = std::fs::read_to_string(path).expect("header generated by the build script");
    for name in ["ps_arrangement_builtin", "ps_monoid_new", "ps_coxeter_snap", "ps_verify", "PsStatus_BufferTooSmall"] {
        assert!(header.contains(name), "{name} missing from header");
    }
    if let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c", path]).status() {
        assert!(status.success(), "header does not compile as C");
    }
}
