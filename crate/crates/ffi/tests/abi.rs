use std::ffi::{CStr, CString};
use std::ptr;

use minorlab_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ml_last_error()) }.to_string_lossy().into_owned()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    ml_string_free(s);
    out
}

#[test]
fn graph_handles() {
    unsafe {
        let edges: [usize; 6] = [0, 1, 1, 2, 2, 0];
        let mut g = ptr::null_mut();
        assert_eq!(ml_graph_from_edges(3, edges.as_ptr(), 3, &mut g), MlStatus::Ok);
        assert_eq!(ml_graph_order(g), 3);
        assert_eq!(ml_graph_edge_count(g), 3);
        let mut text = ptr::null_mut();
        assert_eq!(ml_graph_to_edge_list(g, &mut text), MlStatus::Ok);
        assert_eq!(take(text), "p 3 3\n0 1\n0 2\n1 2\n");
        ml_graph_free(g);

        let bad: [usize; 2] = [0, 0];
        assert_eq!(ml_graph_from_edges(3, bad.as_ptr(), 1, &mut g), MlStatus::InvalidArgument);
        assert!(last_error().contains("self-loop"));

        let src = CString::new("0 1\n1 x\n").unwrap();
        assert_eq!(ml_graph_parse(src.as_ptr(), &mut g), MlStatus::ParseError);
        assert_eq!(ml_graph_order(ptr::null()), 0);
        ml_graph_free(ptr::null_mut());
    }
}

#[test]
fn extraction_and_trace_replay() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(ml_gen(MlGenModel::DisjointCliques as u32, 12, 4, 3, 0, &mut g), MlStatus::Ok);
        let delta = CString::new("1/10").unwrap();
        let (mut h, mut trace) = (ptr::null_mut(), ptr::null_mut());
        let status = ml_extract(g, MlProfileKind::DeltaN as u32, delta.as_ptr(), 0, 0, &mut h, &mut trace);
        assert_eq!(status, MlStatus::Ok, "{}", last_error());
        assert_eq!(ml_graph_order(h), 4);
        let trace_json = CString::new(take(trace)).unwrap();
        let mut valid = false;
        assert_eq!(ml_verify_trace(g, trace_json.as_ptr(), &mut valid), MlStatus::Ok);
        assert!(valid);
        assert_eq!(ml_verify_trace(h, trace_json.as_ptr(), &mut valid), MlStatus::Ok);
        assert!(!valid);

        let mut verdict = ptr::null_mut();
        assert_eq!(ml_check_expander(h, MlProfileKind::DeltaN as u32, delta.as_ptr(), 12, 0, &mut verdict), MlStatus::Ok);
        assert!(take(verdict).contains("\"exact\""));
        assert_eq!(ml_check_expander(h, 9, delta.as_ptr(), 0, 0, &mut verdict), MlStatus::InvalidArgument);
        ml_graph_free(h);
        ml_graph_free(g);
    }
}

#[test]
fn minor_search_and_model_check() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(ml_gen(MlGenModel::Gnp as u32, 400, 8, 3, 11, &mut g), MlStatus::Ok);
        let eps = CString::new("1").unwrap();
        let mut report = ptr::null_mut();
        assert_eq!(ml_find_minor(g, 4, eps.as_ptr(), ptr::null(), 11, &mut report), MlStatus::Ok, "{}", last_error());
        let doc: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        let model = CString::new(doc["model"].to_string()).unwrap();
        let mut valid = false;
        assert_eq!(ml_verify_model(g, model.as_ptr(), &mut valid), MlStatus::Ok);
        assert!(valid);
        assert_eq!(ml_find_minor(g, 9, eps.as_ptr(), ptr::null(), 0, &mut report), MlStatus::InvalidArgument);
        ml_graph_free(g);

        let mut sparse = ptr::null_mut();
        let path: [usize; 4] = [0, 1, 1, 2];
        ml_graph_from_edges(3, path.as_ptr(), 2, &mut sparse);
        assert_eq!(
            ml_find_minor(sparse, 3, eps.as_ptr(), ptr::null(), 0, &mut report),
            MlStatus::DensityBelowThreshold
        );
        let mut h = 0usize;
        assert_eq!(ml_hadwiger_number(sparse, &mut h), MlStatus::Ok);
        assert_eq!(h, 2);
        ml_graph_free(sparse);
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let mut out = 0usize;
        assert_eq!(ml_hadwiger_number(ptr::null(), &mut out), MlStatus::InvalidArgument);
        assert_eq!(ml_gen(MlGenModel::Gnp as u32, 10, 2, 3, 0, ptr::null_mut()), MlStatus::InvalidArgument);
        assert_eq!(ml_gen(42, 10, 2, 3, 0, &mut ptr::null_mut()), MlStatus::InvalidArgument);
        assert!(last_error().contains("unknown generator"));
    }
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/minorlab.h")).unwrap();
    for name in ["ml_graph_free", "ml_find_minor", "ML_STATUS_VERIFICATION_FAILED", "typedef struct MlGraph MlGraph"] {
        assert!(header.contains(name), "{name}");
    }
}
